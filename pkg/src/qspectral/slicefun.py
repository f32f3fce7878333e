"""Slice hyperholomorphic functions as truncated power series at the origin.

A left series is ``f(q) = sum q^n a_n`` and a right series is
``f(q) = sum a_n q^n``.  Real coefficients give intrinsic functions, which are
simultaneously left and right.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import OnSphere, OutOfBall, SideMismatch
from .quat import E1, ONE, Quaternion, SpherePoint, qmul_array, sphere_distance

SIDES = ("left", "right")


@dataclass(frozen=True)
class SliceSeries:
    coefficients: tuple
    radius: float = math.inf
    side: str = "left"

    def __post_init__(self):
        if self.side not in SIDES:
            raise ValueError(f"side must be one of {SIDES}, got {self.side!r}")
        coeffs = tuple(Quaternion.coerce(c) for c in self.coefficients)
        if not coeffs:
            coeffs = (Quaternion(),)
        object.__setattr__(self, "coefficients", coeffs)
        object.__setattr__(self, "radius", float(self.radius))

    @classmethod
    def from_array(cls, arr, radius: float = math.inf, side: str = "left") -> "SliceSeries":
        arr = np.asarray(arr, dtype=float)
        if arr.ndim == 1:
            return cls(tuple(Quaternion(c) for c in arr), radius, side)
        return cls(tuple(Quaternion(*row) for row in arr), radius, side)

    @classmethod
    def identity(cls, side: str = "left") -> "SliceSeries":
        return cls((Quaternion(), ONE), side=side)

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    @property
    def intrinsic(self) -> bool:
        return all(c.is_real() for c in self.coefficients)

    def as_array(self) -> np.ndarray:
        return np.array([c.to_list() for c in self.coefficients])

    def with_side(self, side: str) -> "SliceSeries":
        return SliceSeries(self.coefficients, self.radius, side)

    def __call__(self, q) -> Quaternion:
        return evaluate(self, q)

    def to_dict(self) -> dict:
        return {"side": self.side, "radius": self.radius, "coefficients": [c.to_list() for c in self.coefficients]}

    @classmethod
    def from_dict(cls, d: dict) -> "SliceSeries":
        radius = d.get("radius", math.inf)
        return cls.from_array(d["coefficients"], radius=math.inf if radius is None else radius, side=d.get("side", "left"))


def star_multiply(f: SliceSeries, g: SliceSeries) -> SliceSeries:
    """Cauchy product of the coefficient sequences, c_n = sum a_r b_{n-r}."""
    if f.side != g.side:
        raise SideMismatch(f"cannot star-multiply a {f.side} series by a {g.side} series")
    a, b = f.as_array(), g.as_array()
    out = np.zeros((len(a) + len(b) - 1, 4))
    for r in range(len(a)):
        out[r : r + len(b)] += qmul_array(a[r], b)
    return SliceSeries.from_array(out, radius=min(f.radius, g.radius), side=f.side)


def evaluate(f: SliceSeries, q) -> Quaternion:
    """Horner evaluation; powers of q stand left of the coefficients for left series."""
    q = Quaternion.coerce(q)
    if not abs(q) < f.radius:
        raise OutOfBall(f"|q| = {abs(q)} outside the ball of radius {f.radius}")
    acc = f.coefficients[-1]
    if f.side == "left":
        for a in reversed(f.coefficients[:-1]):
            acc = q * acc + a
    else:
        for a in reversed(f.coefficients[:-1]):
            acc = acc * q + a
    return acc


def evaluate_complex(f: SliceSeries, z: complex) -> complex:
    """Evaluate an intrinsic series at a point of the complex plane."""
    return complex(np.polyval([c.x0 for c in reversed(f.coefficients)], z))


def slice_components(fn: Callable[[Quaternion], Quaternion], u: float, v: float, J: Quaternion, side: str = "left"):
    """alpha, beta in f(u + J v) = alpha + J beta (left) or alpha + beta J (right)."""
    plus = fn(Quaternion.in_slice(u, v, J))
    minus = fn(Quaternion.in_slice(u, -v, J))
    alpha = (plus + minus) * 0.5
    if side == "left":
        beta = -(J * (plus - minus)) * 0.5
    else:
        beta = -((plus - minus) * J) * 0.5
    return alpha, beta


def star_product_at(f, g, q, side: str = "left") -> Quaternion:
    """Pointwise star product from the alpha/beta components of f and g.

    Left: (alpha gamma - beta delta) + J (alpha delta + beta gamma).
    Right: (alpha gamma - beta delta) + (alpha delta + beta gamma) J.
    """
    q = Quaternion.coerce(q)
    u, v = q.real, q.imag_norm
    # any unit gives the same value on the real axis
    J = q.imag * (1.0 / v) if v > 0.0 else E1
    alpha, beta = slice_components(f, u, v, J, side)
    gamma, delta = slice_components(g, u, v, J, side)
    re = alpha * gamma - beta * delta
    im = alpha * delta + beta * gamma
    return re + (J * im if side == "left" else im * J)


def linear_factor_inverse(s, side: str = "left") -> Callable[[Quaternion], Quaternion]:
    """The star inverse of ``q - s`` as a function of q.

    left:  (q^2 - 2 Re(s) q + |s|^2)^{-1} (q - conj(s))
    right: (q - conj(s)) (q^2 - 2 Re(s) q + |s|^2)^{-1}
    """
    s = Quaternion.coerce(s)
    if side not in SIDES:
        raise ValueError(f"side must be one of {SIDES}")
    s_sphere = SpherePoint.of(s)

    def inv(q) -> Quaternion:
        q = Quaternion.coerce(q)
        if sphere_distance(SpherePoint.of(q), s_sphere) <= 1e-14 * (1.0 + abs(q) + abs(s)):
            raise OnSphere(f"{q!r} lies on the sphere of {s!r}")
        quad = (q * q - 2.0 * s.real * q + s.norm2()).inverse()
        lin = q - s.conj()
        return quad * lin if side == "left" else lin * quad

    return inv


def verify_variable_exchange(q, s) -> float:
    """Max residual of the two identities exchanging the roles of q and s.

    (q^2-2Re(s)q+|s|^2)^{-1}(q-conj s) = -(s-conj q)(s^2-2Re(q)s+|q|^2)^{-1}
    (q-conj s)(q^2-2Re(s)q+|s|^2)^{-1} = -(s^2-2Re(q)s+|q|^2)^{-1}(s-conj q)
    """
    q, s = Quaternion.coerce(q), Quaternion.coerce(s)
    left_q = linear_factor_inverse(s, "left")(q)
    right_q = linear_factor_inverse(s, "right")(q)
    right_s = linear_factor_inverse(q, "right")(s)
    left_s = linear_factor_inverse(q, "left")(s)
    return max(abs(left_q + right_s), abs(right_q + left_s))


def polynomial(coeffs: Sequence, side: str = "left") -> SliceSeries:
    return SliceSeries(tuple(coeffs), side=side)
