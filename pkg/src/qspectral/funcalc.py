"""S-functional calculus by trapezoid quadrature on circles in one slice.

    f(T) = 1/(2 pi) int S_L^{-1}(s, T) ds_J f(s)      (left series)
    f(T) = 1/(2 pi) int f(s) ds_J S_R^{-1}(s, T)      (right series)

with ds_J = -J ds.  On a circle c + r e^{J theta} the line element reduces to
r e^{J theta} d theta, so every node contributes S^{-1}(s_k) * w_k * f(s_k)
with the quaternion weight w_k = (r/N) e^{J theta_k} (the 2 pi cancels).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np

from .errors import ContourNotAdmissible, NotIntrinsic, OnSpectrum
from .qmat import QMatrix, operator_norm, require_normal
from .quat import E1, Quaternion, SpherePoint, check_unit, hausdorff
from .slicefun import SliceSeries, evaluate, evaluate_complex
from .spectrum import SpectrumResult, pencil_chi, s_spectrum, scalar_chi

DEFAULT_NODES = 512
MARGIN_FACTOR = 0.1


@dataclass(frozen=True)
class Circle:
    """Positively oriented circle with a real centre."""

    center: float
    radius: float

    def __post_init__(self):
        if not self.radius > 0.0:
            raise ValueError("circle radius must be positive")

    def winding(self, p: SpherePoint) -> int:
        return int(math.hypot(p.u - self.center, p.v) < self.radius)

    def gap(self, p: SpherePoint) -> float:
        return abs(math.hypot(p.u - self.center, p.v) - self.radius)


@dataclass(frozen=True)
class SliceContour:
    J: Quaternion = E1
    circles: Tuple[Circle, ...] = ()
    nodes: int = DEFAULT_NODES

    def __post_init__(self):
        check_unit(self.J)
        object.__setattr__(self, "circles", tuple(self.circles))
        if self.nodes < 3:
            raise ValueError("need at least 3 nodes per circle")

    @classmethod
    def circle(cls, radius: float, center: float = 0.0, J: Quaternion = E1, nodes: int = DEFAULT_NODES):
        return cls(J, (Circle(center, radius),), nodes)

    def quadrature(self):
        """Node points and weights w_k (already divided by 2 pi)."""
        pts, wts = [], []
        theta = 2.0 * np.pi * np.arange(self.nodes) / self.nodes
        J = self.J
        for c in self.circles:
            for t in theta:
                cos, sin = math.cos(t), math.sin(t)
                pts.append(Quaternion.in_slice(c.center + c.radius * cos, c.radius * sin, J))
                wts.append(Quaternion.in_slice(c.radius * cos / self.nodes, c.radius * sin / self.nodes, J))
        return pts, wts

    def enclosure(self, p: SpherePoint) -> int:
        return sum(c.winding(p) for c in self.circles)

    def gap(self, p: SpherePoint) -> float:
        return min((c.gap(p) for c in self.circles), default=math.inf)

    def max_modulus(self) -> float:
        return max((abs(c.center) + c.radius for c in self.circles), default=0.0)


def check_admissible(T: QMatrix, contour: SliceContour, spec: Optional[SpectrumResult] = None, require_all: bool = True):
    """Validate the contour against the spheres of T.

    Every sphere must keep a distance of at least 0.1 (1 + ||T||) from the
    curve and be wound around at most once.  With ``require_all`` each sphere
    must be enclosed.
    """
    if not contour.circles:
        raise ContourNotAdmissible("contour has no circles")
    spec = s_spectrum(T) if spec is None else spec
    margin = MARGIN_FACTOR * (1.0 + operator_norm(T))
    for sp in spec.spheres:
        gap = contour.gap(sp.point)
        if gap < margin:
            raise ContourNotAdmissible(f"contour passes within {gap:.3g} of sphere ({sp.u:.6g}, {sp.v:.6g})")
        w = contour.enclosure(sp.point)
        if w > 1:
            raise ContourNotAdmissible("circles overlap around a spectral sphere")
        if require_all and w != 1:
            raise ContourNotAdmissible(f"sphere ({sp.u:.6g}, {sp.v:.6g}) is not enclosed")
    return spec


def _integrate(T: QMatrix, contour: SliceContour, values: Sequence[Quaternion], side: str) -> QMatrix:
    Tc = T.chi()
    n = T.n
    pts, wts = contour.quadrature()
    acc = np.zeros_like(Tc)
    for s, w, fv in zip(pts, wts, values):
        try:
            q = np.linalg.inv(pencil_chi(Tc, s))
        except np.linalg.LinAlgError as exc:
            raise OnSpectrum(f"quadrature node {s!r} hits the S-spectrum") from exc
        shifted = Tc - scalar_chi(s.conj(), n)
        if side == "left":
            acc -= (q @ shifted) @ scalar_chi(w * fv, n)
        else:
            acc -= scalar_chi(fv * w, n) @ (shifted @ q)
    return QMatrix.from_chi(acc)


def functional_calculus(T: QMatrix, f: SliceSeries, contour: SliceContour) -> QMatrix:
    """f(T) by quadrature of the S-resolvent Cauchy integral."""
    if contour.max_modulus() >= f.radius:
        raise ContourNotAdmissible("contour leaves the convergence ball of f")
    check_admissible(T, contour)
    pts, _ = contour.quadrature()
    values = [evaluate(f, s) for s in pts]
    return _integrate(T, contour, values, f.side)


def riesz_projector(T: QMatrix, contour: SliceContour) -> QMatrix:
    """Spectral projector onto the part of sigma_S(T) enclosed by the contour."""
    check_admissible(T, contour, require_all=False)
    pts, _ = contour.quadrature()
    one = Quaternion(1.0)
    return _integrate(T, contour, [one] * len(pts), "left")


def projector_rank(P: QMatrix) -> int:
    return int(round(float(np.trace(P.chi()).real) / 2.0))


def direct_polynomial(T: QMatrix, f: SliceSeries) -> QMatrix:
    """sum T^n a_n for a left series, sum a_n T^n for a right series (Horner)."""
    n = T.n
    Tc = T.chi()
    coeffs = f.coefficients
    acc = scalar_chi(coeffs[-1], n)
    for a in reversed(coeffs[:-1]):
        if f.side == "left":
            acc = Tc @ acc + scalar_chi(a, n)
        else:
            acc = acc @ Tc + scalar_chi(a, n)
    return QMatrix.from_chi(acc)


def default_contour(T: QMatrix, J: Quaternion = E1, nodes: int = DEFAULT_NODES) -> SliceContour:
    return SliceContour.circle(2.0 * operator_norm(T) + 1.0, 0.0, J, nodes)


def spectral_mapping_check(T: QMatrix, f: SliceSeries) -> float:
    """Hausdorff distance between sigma_S(f(T)) and f(sigma_S(T))."""
    require_normal(T)
    if not f.intrinsic:
        raise NotIntrinsic("spectral mapping is stated for intrinsic functions")
    fT = direct_polynomial(T, f)
    lhs = s_spectrum(fT).points
    rhs = [SpherePoint.from_complex(evaluate_complex(f, p.as_complex())) for p in s_spectrum(T).points]
    return hausdorff(lhs, rhs)
