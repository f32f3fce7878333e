import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qspectral.quat import (
    E1,
    E2,
    E3,
    ONE,
    Quaternion,
    SpherePoint,
    hausdorff,
    imaginary_unit,
    mul,
    parse_unit,
    qmul_array,
    slice_decompose,
    sphere_distance,
)

finite = st.floats(min_value=-1e3, max_value=1e3, allow_nan=False, allow_infinity=False)
quats = st.builds(Quaternion, finite, finite, finite, finite)

# Multiplication table of the basis: (i, j) -> (sign, k) with e_i e_j = sign e_k.
_TABLE = {
    (0, 0): (1, 0), (0, 1): (1, 1), (0, 2): (1, 2), (0, 3): (1, 3),
    (1, 0): (1, 1), (1, 1): (-1, 0), (1, 2): (1, 3), (1, 3): (-1, 2),
    (2, 0): (1, 2), (2, 1): (-1, 3), (2, 2): (-1, 0), (2, 3): (1, 1),
    (3, 0): (1, 3), (3, 1): (1, 2), (3, 2): (-1, 1), (3, 3): (-1, 0),
}  # fmt: skip


def table_product(p, q):
    """Oracle: expand by distributivity over the basis multiplication table."""
    out = [0.0] * 4
    for i, j in itertools.product(range(4), repeat=2):
        sign, k = _TABLE[(i, j)]
        out[k] += sign * p[i] * q[j]
    return out


def test_basis_products():
    assert E1 * E2 == E3
    assert E2 * E1 == -E3
    assert E2 * E3 == E1
    assert E3 * E1 == E2
    for e in (E1, E2, E3):
        assert e * e == -ONE


def test_identity_and_worked_example():
    q = Quaternion(1.5, -2, 0.25, 4)
    assert q * 1 == q
    assert q * ONE == q
    assert (1 + E1) * (1 - E1) == Quaternion(2.0)


@given(quats, quats)
def test_mul_matches_table_oracle(p, q):
    np.testing.assert_allclose(mul(p, q).to_list(), table_product(p.to_list(), q.to_list()), rtol=1e-12, atol=1e-9)


@given(quats, quats, quats)
def test_associative(p, q, r):
    lhs, rhs = (p * q) * r, p * (q * r)
    scale = max(1.0, abs(p) * abs(q) * abs(r))
    assert abs(lhs - rhs) <= 1e-12 * scale


@given(quats, quats)
def test_norm_multiplicative(p, q):
    assert math.isclose(abs(p * q), abs(p) * abs(q), rel_tol=1e-12, abs_tol=1e-300)


@given(quats, quats)
def test_conjugation(p, q):
    assert p.conj().conj() == p
    assert abs((p * q).conj() - q.conj() * p.conj()) <= 1e-12 * max(1.0, abs(p) * abs(q))


@given(quats)
def test_slice_recompose(q):
    u, v, J = slice_decompose(q)
    assert v >= 0
    back = Quaternion(u) if J is None else Quaternion.in_slice(u, v, J)
    assert abs(back - q) <= 1e-14 * max(1.0, abs(q))


def test_slice_decompose_examples():
    assert slice_decompose(1 + 2 * E1) == (1.0, 2.0, E1)
    assert slice_decompose(Quaternion(3)) == (3.0, 0.0, None)
    u, v, J = slice_decompose(E1 + E2)
    assert u == 0.0 and math.isclose(v, math.sqrt(2))
    assert J.isclose(Quaternion(0, 1 / math.sqrt(2), 1 / math.sqrt(2), 0), 1e-15)


def test_sphere_distance_examples(rng):
    assert sphere_distance(SpherePoint(1, 0), SpherePoint(2, 0)) == 1.0
    assert sphere_distance(SpherePoint.of(E1), SpherePoint.of(E1)) == 0.0
    assert sphere_distance(SpherePoint(0, 1), SpherePoint(0, 3)) == 2.0
    # oracle: minimise |J1 - 3 J2| over sampled unit pairs; never beats the closed form
    units = [imaginary_unit(*rng.standard_normal(3)) for _ in range(300)] + [E1]
    best = min(abs(a - 3 * b) for a in units[:40] for b in units)
    assert best >= 2.0 - 1e-12
    assert abs(E1 - 3 * E1) == 2.0


@settings(max_examples=200)
@given(*([finite] * 6))
def test_sphere_distance_triangle(a1, a2, b1, b2, c1, c2):
    a, b, c = SpherePoint(a1, a2), SpherePoint(b1, b2), SpherePoint(c1, c2)
    assert sphere_distance(a, c) <= sphere_distance(a, b) + sphere_distance(b, c) + 1e-9


@given(quats, quats)
def test_sphere_distance_is_infimum_over_classes(p, q):
    # any two representatives are at least the class distance apart
    assert abs(p - q) >= sphere_distance(SpherePoint.of(p), SpherePoint.of(q)) - 1e-9 * max(1.0, abs(p) + abs(q))


def test_units():
    J = parse_unit("1,1,1")
    assert math.isclose(abs(J), 1.0) and J.real == 0.0
    assert (J * J).isclose(-ONE, 1e-12)
    assert parse_unit("e2") == E2
    with pytest.raises(ValueError):
        parse_unit("e4")


def test_array_product_broadcasts(rng):
    a = rng.standard_normal((3, 4))
    b = rng.standard_normal(4)
    out = qmul_array(a, b)
    for i in range(3):
        assert Quaternion(*out[i]).isclose(Quaternion(*a[i]) * Quaternion(*b), 1e-14)


def test_hausdorff():
    a = [SpherePoint(0, 0), SpherePoint(1, 0)]
    b = [SpherePoint(0, 0)]
    assert hausdorff(a, b) == 1.0
    assert hausdorff(a, a) == 0.0


def test_division_and_powers():
    q = Quaternion(1, 2, -1, 0.5)
    assert (q / q).isclose(ONE, 1e-15)
    assert (q**3).isclose(q * q * q, 1e-13)
    assert (1 / q).isclose(q.inverse(), 1e-15)
