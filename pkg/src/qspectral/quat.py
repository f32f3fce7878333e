"""Quaternion scalars, imaginary units and axially symmetric sphere classes.

Scalars are immutable :class:`Quaternion` values.  Vectorised helpers
(:func:`qmul_array`, :func:`qconj_array`) operate on arrays whose last axis
holds the four components ``(x0, x1, x2, x3)`` and back the matrix code.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Optional, Union

import numpy as np

UNIT_TOL = 1e-12

Real = Union[int, float]


@dataclass(frozen=True)
class Quaternion:
    x0: float = 0.0
    x1: float = 0.0
    x2: float = 0.0
    x3: float = 0.0

    def __post_init__(self):
        for name in ("x0", "x1", "x2", "x3"):
            object.__setattr__(self, name, float(getattr(self, name)))

    # construction -------------------------------------------------------

    @classmethod
    def coerce(cls, value) -> "Quaternion":
        """Accept a Quaternion, a real number, or any length-4 sequence."""
        if isinstance(value, Quaternion):
            return value
        if isinstance(value, (int, float, np.integer, np.floating)):
            return cls(float(value))
        arr = np.asarray(value, dtype=float)
        if arr.shape != (4,):
            raise ValueError(f"cannot interpret {value!r} as a quaternion")
        return cls(*arr)

    @classmethod
    def in_slice(cls, u: float, v: float, unit: "Quaternion") -> "Quaternion":
        """The point ``u + J v`` of the slice spanned by 1 and ``unit``."""
        return cls(u, unit.x1 * v, unit.x2 * v, unit.x3 * v)

    # views --------------------------------------------------------------

    def to_array(self) -> np.ndarray:
        return np.array([self.x0, self.x1, self.x2, self.x3])

    def to_list(self) -> list:
        return [self.x0, self.x1, self.x2, self.x3]

    def __iter__(self):
        return iter((self.x0, self.x1, self.x2, self.x3))

    @property
    def real(self) -> float:
        return self.x0

    @property
    def imag(self) -> "Quaternion":
        return Quaternion(0.0, self.x1, self.x2, self.x3)

    @property
    def imag_norm(self) -> float:
        return math.hypot(self.x1, self.x2, self.x3)

    def norm2(self) -> float:
        return self.x0 * self.x0 + self.x1 * self.x1 + self.x2 * self.x2 + self.x3 * self.x3

    def __abs__(self) -> float:
        return math.hypot(self.x0, self.x1, self.x2, self.x3)

    def conj(self) -> "Quaternion":
        return Quaternion(self.x0, -self.x1, -self.x2, -self.x3)

    def inverse(self) -> "Quaternion":
        n2 = self.norm2()
        if n2 == 0.0:
            raise ZeroDivisionError("quaternion inverse of zero")
        return Quaternion(self.x0 / n2, -self.x1 / n2, -self.x2 / n2, -self.x3 / n2)

    def is_real(self, tol: float = 0.0) -> bool:
        return self.imag_norm <= tol

    # arithmetic ---------------------------------------------------------

    def __add__(self, other):
        o = _as_quat(other)
        if o is None:
            return NotImplemented
        return Quaternion(self.x0 + o.x0, self.x1 + o.x1, self.x2 + o.x2, self.x3 + o.x3)

    __radd__ = __add__

    def __sub__(self, other):
        o = _as_quat(other)
        if o is None:
            return NotImplemented
        return Quaternion(self.x0 - o.x0, self.x1 - o.x1, self.x2 - o.x2, self.x3 - o.x3)

    def __rsub__(self, other):
        o = _as_quat(other)
        if o is None:
            return NotImplemented
        return o - self

    def __neg__(self):
        return Quaternion(-self.x0, -self.x1, -self.x2, -self.x3)

    def __pos__(self):
        return self

    def __mul__(self, other):
        if isinstance(other, Quaternion):
            return mul(self, other)
        if isinstance(other, (int, float, np.integer, np.floating)):
            c = float(other)
            return Quaternion(self.x0 * c, self.x1 * c, self.x2 * c, self.x3 * c)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, float, np.integer, np.floating)):
            return self * other
        return NotImplemented

    def __truediv__(self, other):
        # right division: self * other^{-1}
        if isinstance(other, Quaternion):
            return mul(self, other.inverse())
        if isinstance(other, (int, float, np.integer, np.floating)):
            return self * (1.0 / float(other))
        return NotImplemented

    def __rtruediv__(self, other):
        o = _as_quat(other)
        if o is None:
            return NotImplemented
        return mul(o, self.inverse())

    def __pow__(self, n: int):
        if not isinstance(n, (int, np.integer)) or n < 0:
            return NotImplemented
        out, base = ONE, self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def isclose(self, other, tol: float = 1e-12) -> bool:
        return abs(self - _as_quat(other)) <= tol

    def __repr__(self):
        return f"Quaternion({self.x0!r}, {self.x1!r}, {self.x2!r}, {self.x3!r})"


def _as_quat(value) -> Optional[Quaternion]:
    if isinstance(value, Quaternion):
        return value
    if isinstance(value, (int, float, np.integer, np.floating)):
        return Quaternion(float(value))
    return None


ONE = Quaternion(1.0)
ZERO = Quaternion()
E1 = Quaternion(0.0, 1.0, 0.0, 0.0)
E2 = Quaternion(0.0, 0.0, 1.0, 0.0)
E3 = Quaternion(0.0, 0.0, 0.0, 1.0)


def mul(p: Quaternion, q: Quaternion) -> Quaternion:
    """Hamilton product ``p q``."""
    a0, a1, a2, a3 = p.x0, p.x1, p.x2, p.x3
    b0, b1, b2, b3 = q.x0, q.x1, q.x2, q.x3
    return Quaternion(
        a0 * b0 - a1 * b1 - a2 * b2 - a3 * b3,
        a0 * b1 + a1 * b0 + a2 * b3 - a3 * b2,
        a0 * b2 - a1 * b3 + a2 * b0 + a3 * b1,
        a0 * b3 + a1 * b2 - a2 * b1 + a3 * b0,
    )


# imaginary units ----------------------------------------------------------


def is_imaginary_unit(q: Quaternion, tol: float = UNIT_TOL) -> bool:
    return abs(q.x0) <= tol and abs(q.imag_norm - 1.0) <= tol


def imaginary_unit(x1: float, x2: float, x3: float) -> Quaternion:
    """Normalise the 3-vector ``(x1, x2, x3)`` to an element of the unit sphere."""
    r = math.sqrt(x1 * x1 + x2 * x2 + x3 * x3)
    if r == 0.0:
        raise ValueError("zero vector has no direction")
    return Quaternion(0.0, x1 / r, x2 / r, x3 / r)


def check_unit(J: Quaternion) -> Quaternion:
    if not is_imaginary_unit(J):
        raise ValueError(f"{J!r} is not a purely imaginary unit quaternion")
    return J


def parse_unit(spec: str) -> Quaternion:
    """Parse ``e1``/``e2``/``e3`` or a comma separated 3-vector."""
    named = {"e1": E1, "e2": E2, "e3": E3}
    key = spec.strip().lower()
    if key in named:
        return named[key]
    parts = [float(p) for p in key.split(",")]
    if len(parts) != 3:
        raise ValueError(f"slice unit must be e1, e2, e3 or x1,x2,x3; got {spec!r}")
    return imaginary_unit(*parts)


# slices and sphere classes ------------------------------------------------


def slice_decompose(q: Quaternion):
    """Return ``(u, v, J)`` with ``q = u + J v`` and ``v >= 0``.

    ``J`` is ``None`` for a real quaternion.
    """
    v = q.imag_norm
    if v == 0.0:
        return q.x0, 0.0, None
    return q.x0, v, Quaternion(0.0, q.x1 / v, q.x2 / v, q.x3 / v)


@dataclass(frozen=True)
class SpherePoint:
    """The class ``[u + J v] = {u + J v : J in S}``, stored with ``v >= 0``."""

    u: float
    v: float

    def __post_init__(self):
        object.__setattr__(self, "u", float(self.u))
        object.__setattr__(self, "v", abs(float(self.v)))

    @classmethod
    def of(cls, q: Quaternion) -> "SpherePoint":
        return cls(q.x0, q.imag_norm)

    @classmethod
    def from_complex(cls, z: complex) -> "SpherePoint":
        return cls(z.real, abs(z.imag))

    def representative(self, J: Quaternion = E1) -> Quaternion:
        return Quaternion.in_slice(self.u, self.v, J)

    def as_complex(self) -> complex:
        return complex(self.u, self.v)

    def __abs__(self) -> float:
        return math.hypot(self.u, self.v)


def sphere_distance(a: SpherePoint, b: SpherePoint) -> float:
    """inf |s - t| over s in [a], t in [b]; attained with a common unit."""
    return math.hypot(a.u - b.u, a.v - b.v)


def hausdorff(a: Iterable[SpherePoint], b: Iterable[SpherePoint]) -> float:
    a, b = list(a), list(b)
    if not a and not b:
        return 0.0
    if not a or not b:
        return math.inf
    pa = np.array([[p.u, p.v] for p in a])
    pb = np.array([[p.u, p.v] for p in b])
    d = np.hypot(pa[:, None, 0] - pb[None, :, 0], pa[:, None, 1] - pb[None, :, 1])
    return float(max(d.min(axis=1).max(), d.min(axis=0).max()))


def directed_distance(a: Iterable[SpherePoint], b: Iterable[SpherePoint]) -> float:
    """sup over a of the distance to b."""
    a, b = list(a), list(b)
    if not a:
        return 0.0
    if not b:
        return math.inf
    return max(min(sphere_distance(p, r) for r in b) for p in a)


# vectorised component arithmetic ------------------------------------------


def qmul_array(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Broadcast Hamilton product of arrays with a trailing axis of length 4."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    a0, a1, a2, a3 = np.moveaxis(a, -1, 0)
    b0, b1, b2, b3 = np.moveaxis(b, -1, 0)
    return np.stack(
        [
            a0 * b0 - a1 * b1 - a2 * b2 - a3 * b3,
            a0 * b1 + a1 * b0 + a2 * b3 - a3 * b2,
            a0 * b2 - a1 * b3 + a2 * b0 + a3 * b1,
            a0 * b3 + a1 * b2 - a2 * b1 + a3 * b0,
        ],
        axis=-1,
    )


def qconj_array(a: np.ndarray) -> np.ndarray:
    out = np.array(a, dtype=float, copy=True)
    out[..., 1:] *= -1.0
    return out


def to_complex_pair(q: Quaternion):
    """Split ``q = z1 + z2 e2`` with ``z1, z2`` in the slice of ``e1``."""
    return complex(q.x0, q.x1), complex(q.x2, q.x3)


def from_complex_pair(z1: complex, z2: complex) -> Quaternion:
    return Quaternion(z1.real, z1.imag, z2.real, z2.imag)
