"""S-spectrum, pseudo-resolvent and S-resolvent operators.

For a matrix the S-spectrum is the union of the spheres of its right
eigenvalues, and those are read off the eigenvalues of the complex adjoint:
every sphere [u + J v] of multiplicity m contributes m copies of u + iv and m
copies of u - iv to spec(chi(T)).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import List, Tuple

import numpy as np

from .errors import NumericalFailure, OnSpectrum, SameSphere
from .qmat import QMatrix, operator_norm, require_normal
from .quat import Quaternion, SpherePoint, sphere_distance

CLUSTER_TOL = 1e-8
RESOLVENT_TOL = 1e-10


@dataclass(frozen=True)
class SpectralSphere:
    point: SpherePoint
    multiplicity: int

    @property
    def u(self) -> float:
        return self.point.u

    @property
    def v(self) -> float:
        return self.point.v

    def to_dict(self) -> dict:
        return {"u": self.u, "v": self.v, "mult": self.multiplicity}


@dataclass(frozen=True)
class SpectrumResult:
    spheres: Tuple[SpectralSphere, ...]
    eigenvalues: np.ndarray = field(repr=False, compare=False)

    @property
    def points(self) -> List[SpherePoint]:
        return [s.point for s in self.spheres]

    @property
    def size(self) -> int:
        return sum(s.multiplicity for s in self.spheres)

    def distance_to(self, p: SpherePoint) -> float:
        return min((sphere_distance(p, s.point) for s in self.spheres), default=math.inf)

    def radius(self) -> float:
        return max((abs(s.point) for s in self.spheres), default=0.0)

    def full(self) -> "SpectrumResult":
        """Spectrum plus its holes; a finite set bounds none, so this is itself."""
        return self

    def to_list(self) -> list:
        return [s.to_dict() for s in self.spheres]


def _cluster(points: np.ndarray, tol: float) -> List[List[int]]:
    # single linkage in the (u, v) plane
    n = len(points)
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(n):
        d = np.hypot(points[i + 1 :, 0] - points[i, 0], points[i + 1 :, 1] - points[i, 1])
        for j in np.nonzero(d <= tol)[0]:
            ri, rj = find(i), find(i + 1 + int(j))
            if ri != rj:
                parent[rj] = ri
    groups = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    return list(groups.values())


def s_spectrum(T: QMatrix) -> SpectrumResult:
    """Spheres of the S-spectrum with algebraic multiplicities summing to n."""
    n = T.n
    if n == 0:
        return SpectrumResult((), np.zeros(0, dtype=complex))
    try:
        ev = np.linalg.eigvals(T.chi())
    except np.linalg.LinAlgError as exc:
        raise NumericalFailure(str(exc)) from exc
    if not np.all(np.isfinite(ev)):
        raise NumericalFailure("eigenvalue solver returned non-finite values")
    scale = 1.0 + operator_norm(T)
    pts = np.column_stack([ev.real, np.abs(ev.imag)])
    groups = _cluster(pts, CLUSTER_TOL * scale)

    # each sphere appears twice in spec(chi); halve the counts, then repair
    # any odd split so the total stays n
    counts = [len(g) for g in groups]
    mults = [c // 2 for c in counts]
    odd = sorted((i for i, c in enumerate(counts) if c % 2), key=lambda i: -counts[i])
    for i in odd[: n - sum(mults)]:
        mults[i] += 1

    spheres = []
    for g, m in zip(groups, mults):
        if m == 0:
            continue
        u = float(pts[g, 0].mean())
        v = float(pts[g, 1].mean())
        if v <= 1e-12 * scale:
            v = 0.0
        spheres.append(SpectralSphere(SpherePoint(u, v), m))
    spheres.sort(key=lambda s: (s.u, s.v))
    return SpectrumResult(tuple(spheres), ev)


# pencils and resolvents -----------------------------------------------------


def pencil_chi(Tc: np.ndarray, s: Quaternion) -> np.ndarray:
    """chi of ``T^2 - 2 Re(s) T + |s|^2 I``.

    Formed as ``(chi(T) - lam)(chi(T) - conj(lam))`` with ``lam = Re(s) + i|Im(s)|``,
    which avoids the cancellation of the expanded form near the spectrum.
    """
    lam = complex(s.real, s.imag_norm)
    eye = np.eye(Tc.shape[0])
    return (Tc - lam * eye) @ (Tc - lam.conjugate() * eye)


def pencil(T: QMatrix, s: Quaternion) -> QMatrix:
    return QMatrix.from_chi(pencil_chi(T.chi(), Quaternion.coerce(s)))


def pencil_min_singular(T: QMatrix, s: Quaternion) -> float:
    return float(np.linalg.svd(pencil_chi(T.chi(), Quaternion.coerce(s)), compute_uv=False)[-1])


def in_resolvent_set(T: QMatrix, s: Quaternion, tol: float = RESOLVENT_TOL) -> bool:
    scale = (1.0 + operator_norm(T)) ** 2
    return pencil_min_singular(T, s) > tol * scale


def _require_resolvent(T: QMatrix, s: Quaternion) -> None:
    if not in_resolvent_set(T, s):
        raise OnSpectrum(f"{s!r} lies in the S-spectrum")


def scalar_chi(s: Quaternion, n: int) -> np.ndarray:
    z1, z2 = complex(s.x0, s.x1), complex(s.x2, s.x3)
    eye = np.eye(n)
    return np.block([[z1 * eye, z2 * eye], [-np.conj(z2) * eye, np.conj(z1) * eye]])


@dataclass(frozen=True)
class PseudoResolvent:
    s: Quaternion
    value: QMatrix


def pseudo_resolvent(T: QMatrix, s) -> PseudoResolvent:
    """``Q_s(T) = (T^2 - 2 Re(s) T + |s|^2 I)^{-1}``."""
    s = Quaternion.coerce(s)
    _require_resolvent(T, s)
    return PseudoResolvent(s, QMatrix.from_chi(np.linalg.inv(pencil_chi(T.chi(), s))))


def _s_resolvent_chi(Tc: np.ndarray, s: Quaternion, side: str) -> np.ndarray:
    n = Tc.shape[0] // 2
    q = np.linalg.inv(pencil_chi(Tc, s))
    shifted = Tc - scalar_chi(s.conj(), n)
    if side == "left":
        return -(q @ shifted)
    if side == "right":
        return -(shifted @ q)
    raise ValueError(f"side must be 'left' or 'right', got {side!r}")


def s_resolvent_left(T: QMatrix, s) -> QMatrix:
    """``S_L^{-1}(s, T) = -Q_s(T) (T - conj(s) I)``."""
    s = Quaternion.coerce(s)
    _require_resolvent(T, s)
    return QMatrix.from_chi(_s_resolvent_chi(T.chi(), s, "left"))


def s_resolvent_right(T: QMatrix, s) -> QMatrix:
    """``S_R^{-1}(s, T) = -(T - conj(s) I) Q_s(T)``."""
    s = Quaternion.coerce(s)
    _require_resolvent(T, s)
    return QMatrix.from_chi(_s_resolvent_chi(T.chi(), s, "right"))


def verify_s_resolvent_equation(T: QMatrix, s, p) -> Tuple[float, float]:
    """Residuals of the two equivalent forms of the S-resolvent equation.

    Form 1:  S_R(s) S_L(p) = [(S_R(s) - S_L(p)) p - conj(s) (S_R(s) - S_L(p))]
                             (p^2 - 2 Re(s) p + |s|^2)^{-1}
    Form 2:  S_R(s) S_L(p) = (s^2 - 2 Re(p) s + |p|^2)^{-1}
                             [(S_R(s) - S_L(p)) conj(p) - s (S_R(s) - S_L(p))]

    Form 2 is sometimes quoted with the difference S_L(p) - S_R(s); that
    version is off by a sign (for T = 0, s = 2, p = 3 it gives -1/6 against
    S_R S_L = 1/6).
    """
    s, p = Quaternion.coerce(s), Quaternion.coerce(p)
    if sphere_distance(SpherePoint.of(s), SpherePoint.of(p)) <= 1e-12 * (1.0 + abs(s) + abs(p)):
        raise SameSphere("s and p lie on the same sphere")
    SR = s_resolvent_right(T, s)
    SL = s_resolvent_left(T, p)
    lhs = SR @ SL
    diff = SR - SL
    c1 = (p * p - 2.0 * s.real * p + s.norm2()).inverse()
    form1 = ((diff * p) - (s.conj() * diff)) * c1
    c2 = (s * s - 2.0 * p.real * s + p.norm2()).inverse()
    form2 = c2 * ((diff * p.conj()) - (s * diff))
    return operator_norm(lhs - form1), operator_norm(lhs - form2)


# spectral radius and bounds -------------------------------------------------


def spectral_radius(T: QMatrix, max_power: int = 64):
    """Exact S-spectral radius and the sequence ``||T^(2^k)||^(1/2^k)``.

    Powers are formed by repeated squaring of the normalised matrix while
    accumulating the log of each normalisation, so neither overflow nor
    underflow occurs for any power up to ``max_power``.
    """
    if max_power < 1:
        raise ValueError("max_power must be >= 1")
    exact = s_spectrum(T).radius()
    nrm = operator_norm(T)
    if nrm == 0.0:
        return exact, [0.0]
    M = T.chi() / nrm
    log_norm = math.log(nrm)
    seq = [nrm]
    power = 1
    while power * 2 <= max_power:
        M = M @ M
        power *= 2
        c = float(np.linalg.norm(M, 2))
        if c == 0.0 or not math.isfinite(log_norm):
            log_norm = -math.inf
            seq.append(0.0)
            continue
        M = M / c
        log_norm = 2.0 * log_norm + math.log(c)
        seq.append(math.exp(log_norm / power))
    return exact, seq


def normal_resolvent_bound(T: QMatrix, s) -> Tuple[float, float]:
    """``(||Q_s(T)||, 1 / dist(sigma_S(T), [s])^2)`` for normal T."""
    s = Quaternion.coerce(s)
    require_normal(T)
    Q = pseudo_resolvent(T, s).value
    dist = s_spectrum(T).distance_to(SpherePoint.of(s))
    return operator_norm(Q), 1.0 / dist**2


def slice_components(T: QMatrix, u: float, v: float, J: Quaternion, side: str = "left"):
    """alpha, beta with S^{-1}(u + J v) = alpha + beta J (left resolvent).

    For the right resolvent the split is S^{-1} = alpha + J beta.
    """
    plus = Quaternion.in_slice(u, v, J)
    minus = Quaternion.in_slice(u, -v, J)
    if side == "left":
        a, b = s_resolvent_left(T, plus), s_resolvent_left(T, minus)
        return (a + b) * 0.5, -((a - b) * J) * 0.5
    a, b = s_resolvent_right(T, plus), s_resolvent_right(T, minus)
    return (a + b) * 0.5, -(J * (a - b)) * 0.5


def cauchy_riemann_defect(T: QMatrix, u: float, v: float, J: Quaternion, h: float = 1e-4, side: str = "left"):
    """Central-difference residuals of the Cauchy-Riemann system for alpha, beta."""

    def comp(du, dv):
        return slice_components(T, u + du, v + dv, J, side)

    a_up, b_up = comp(h, 0.0)
    a_um, b_um = comp(-h, 0.0)
    a_vp, b_vp = comp(0.0, h)
    a_vm, b_vm = comp(0.0, -h)
    du_a = (a_up - a_um) / (2 * h)
    du_b = (b_up - b_um) / (2 * h)
    dv_a = (a_vp - a_vm) / (2 * h)
    dv_b = (b_vp - b_vm) / (2 * h)
    return operator_norm(du_a - dv_b), operator_norm(dv_a + du_b)


def weyl_factorization_residual(A: QMatrix, K: QMatrix, s) -> float:
    """|| P_s(A+K) - P_s(A) (I + Q_s(A)(K^2 + AK + KA - 2 s0 K)) ||."""
    s = Quaternion.coerce(s)
    Ac, Kc = A.chi(), K.chi()
    s0 = s.real
    eye = np.eye(Ac.shape[0])
    pa = pencil_chi(Ac, s)
    if np.linalg.svd(pa, compute_uv=False)[-1] <= RESOLVENT_TOL * (1.0 + operator_norm(A)) ** 2:
        raise OnSpectrum("s lies in the S-spectrum of A")
    inner = Kc @ Kc + Ac @ Kc + Kc @ Ac - 2.0 * s0 * Kc
    lhs = pencil_chi(Ac + Kc, s)
    rhs = pa @ (eye + np.linalg.solve(pa, inner))
    return float(np.linalg.norm(lhs - rhs, 2))


def weyl_inclusion_holds(A: QMatrix, K: QMatrix, tol: float = 1e-7) -> bool:
    """sigma_S(A+K) within sigma_S(A) union Pi_0(A+K).

    At finite dimension Pi_0(A+K) is all of sigma_S(A+K), so this only
    confirms each sphere of A+K has a kernel vector for its pencil.
    """
    spec = s_spectrum(A + K)
    T = A + K
    scale = (1.0 + operator_norm(T)) ** 2
    return all(pencil_min_singular(T, sp.point.representative()) < tol * scale for sp in spec.spheres)
