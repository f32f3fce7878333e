import math

import numpy as np
import pytest

from qspectral.errors import OnSpectrum, SameSphere
from qspectral.qmat import QMatrix, operator_norm, random_normal, random_qmatrix, random_unitary
from qspectral.quat import E1, E2, E3, Quaternion, SpherePoint, hausdorff, imaginary_unit
from qspectral.spectrum import (
    cauchy_riemann_defect,
    in_resolvent_set,
    normal_resolvent_bound,
    pencil_chi,
    pencil_min_singular,
    pseudo_resolvent,
    s_resolvent_left,
    s_resolvent_right,
    s_spectrum,
    spectral_radius,
    verify_s_resolvent_equation,
    weyl_factorization_residual,
)


def random_upper_triangular(n, rng):
    data = rng.standard_normal((n, n, 4))
    data[np.tril_indices(n, -1)] = 0.0
    return QMatrix(data)


def test_spectrum_examples():
    spec = s_spectrum(QMatrix.identity(2))
    assert spec.to_list() == [{"u": 1.0, "v": 0.0, "mult": 2}]

    spec = s_spectrum(QMatrix.diag([E1, E2]))
    assert len(spec.spheres) == 1
    assert spec.spheres[0].multiplicity == 2
    assert spec.spheres[0].u == pytest.approx(0.0, abs=1e-14)
    assert spec.spheres[0].v == pytest.approx(1.0, abs=1e-14)

    spec = s_spectrum(QMatrix.diag([1 + E3, 2, 1 - E3]))
    got = sorted((round(s.u, 12), round(s.v, 12), s.multiplicity) for s in spec.spheres)
    assert got == [(1.0, 1.0, 2), (2.0, 0.0, 1)]


def test_spectrum_of_triangular_is_diagonal_spheres(rng):
    for _ in range(20):
        n = int(rng.integers(1, 6))
        T = random_upper_triangular(n, rng)
        expected = [SpherePoint.of(T[i, i]) for i in range(n)]
        spec = s_spectrum(T)
        assert sum(s.multiplicity for s in spec.spheres) == n
        assert hausdorff(spec.points, expected) <= 1e-8 * (1 + operator_norm(T))


def test_spectrum_multiplicities_total_n(rng):
    for _ in range(30):
        n = int(rng.integers(1, 7))
        spec = s_spectrum(random_qmatrix(n, rng))
        assert sum(s.multiplicity for s in spec.spheres) == n


def test_spectrum_points_are_not_in_resolvent(rng):
    T = random_qmatrix(4, rng)
    scale = (1 + operator_norm(T)) ** 2
    for sp in s_spectrum(T).spheres:
        s = sp.point.representative(imaginary_unit(*rng.standard_normal(3)))
        assert pencil_min_singular(T, s) <= 1e-8 * scale
        assert not in_resolvent_set(T, s)


def test_unitary_invariance(rng):
    for _ in range(10):
        n = int(rng.integers(1, 6))
        T, U = random_qmatrix(n, rng), random_unitary(n, rng)
        h = hausdorff(s_spectrum(U.H @ T @ U).points, s_spectrum(T).points)
        assert h <= 1e-9 * (1 + operator_norm(T))


def test_pseudo_resolvent_examples():
    Q = pseudo_resolvent(QMatrix.diag([E1]), 1).value
    # e1^2 - 2 e1 + 1 = -2 e1, inverse is e1 / 2
    assert Q.allclose(QMatrix.diag([0.5 * E1]), 1e-15)
    Q = pseudo_resolvent(QMatrix.diag([E1]), 2 * E1).value
    assert Q.allclose(QMatrix.diag([1 / 3]), 1e-15)
    with pytest.raises(OnSpectrum):
        pseudo_resolvent(QMatrix.diag([E1]), E2)


def test_s_resolvent_examples():
    T = QMatrix.diag([E1])
    # -(1/3)(e1 - conj(2 e1)) = -e1
    assert s_resolvent_left(T, 2 * E1).allclose(QMatrix.diag([-E1]), 1e-15)
    assert s_resolvent_right(T, 2 * E1).allclose(QMatrix.diag([-E1]), 1e-15)


def test_scalar_s_resolvent_is_inverse_of_difference():
    # for a real 1x1 operator t, S_L^{-1}(s, t) = (s - t)^{-1}
    t = 0.7
    for s in (Quaternion(2, 1, -1, 0.5), 3 * E2, Quaternion(-1, 0, 0, 2)):
        left = s_resolvent_left(QMatrix.diag([t]), s)[0, 0]
        assert left.isclose((s - t).inverse(), 1e-14)


def test_s_resolvent_inverts_operator_identity(rng):
    # S_L^{-1}(s,T) s - T S_L^{-1}(s,T) = I
    for _ in range(10):
        n = int(rng.integers(1, 5))
        T = random_qmatrix(n, rng)
        s = Quaternion(*rng.standard_normal(4))
        L = s_resolvent_left(T, s)
        R = s_resolvent_right(T, s)
        eye = QMatrix.identity(n)
        assert ((L * s) - T @ L).allclose(eye, 1e-9)
        assert ((s * R) - R @ T).allclose(eye, 1e-9)


def test_resolvent_equation_examples():
    assert max(verify_s_resolvent_equation(QMatrix.zeros(1), 2, 3)) <= 1e-15
    assert max(verify_s_resolvent_equation(QMatrix.diag([E1]), 2 + E2, -1 + 3 * E3)) <= 1e-14
    with pytest.raises(SameSphere):
        verify_s_resolvent_equation(QMatrix.diag([E1]), 2 * E1, 2 * E2)


def test_resolvent_equation_random(rng):
    for _ in range(30):
        n = int(rng.integers(2, 6))
        T = random_qmatrix(n, rng)
        s, p = Quaternion(*rng.standard_normal(4)), Quaternion(*rng.standard_normal(4))
        sq = (1 + operator_norm(T)) ** 2
        if min(pencil_min_singular(T, s), pencil_min_singular(T, p)) <= 1e-6 * sq:
            continue
        assert max(verify_s_resolvent_equation(T, s, p)) <= 1e-9 * (1 + operator_norm(T)) ** 3


def test_normal_bound_examples():
    lhs, rhs = normal_resolvent_bound(QMatrix.diag([E1]), 3)
    # |e1^2 - 6 e1 + 9| = |8 - 6 e1| = 10; distance from [e1] to 3 is sqrt(10)
    assert lhs == pytest.approx(0.1, abs=1e-15)
    assert rhs == pytest.approx(0.1, abs=1e-15)
    assert abs((Quaternion(8) - 6 * E1).inverse()) == pytest.approx(0.1, abs=1e-16)


def test_normal_bound_random(rng):
    for _ in range(20):
        T = random_normal(int(rng.integers(1, 8)), rng)
        for _ in range(5):
            lhs, rhs = normal_resolvent_bound(T, Quaternion(*rng.standard_normal(4) * 2))
            assert lhs <= rhs * (1 + 1e-9)


def test_spectral_radius():
    exact, seq = spectral_radius(QMatrix.diag([2 * E1, 1]))
    assert exact == pytest.approx(2.0, abs=1e-14)
    assert seq[-1] == pytest.approx(2.0, rel=1e-12)
    N = QMatrix(np.array([[[0, 0, 0, 0], [1, 0, 0, 0]], [[0, 0, 0, 0], [0, 0, 0, 0]]], dtype=float))
    exact, seq = spectral_radius(N)
    assert exact == 0.0 and seq[0] == 1.0 and seq[1] == 0.0


def test_spectral_radius_sequence_no_overflow():
    T = QMatrix.from_real([[1e200, 1e200], [0, 1e200]])
    _, seq = spectral_radius(T)
    assert all(math.isfinite(x) for x in seq)
    assert seq[-1] == pytest.approx(1e200, rel=0.1)


def test_approximate_eigenvector(rng):
    # a sphere point s has x with ||P_s(T) x|| tiny relative to ||x||
    T = random_qmatrix(3, rng)
    for sp in s_spectrum(T).spheres:
        s = sp.point.representative(E1)
        _, sv, vh = np.linalg.svd(pencil_chi(T.chi(), s))
        x = vh[-1].conj()
        assert sv[-1] <= 1e-8 * (1 + operator_norm(T)) ** 2
        assert np.linalg.norm(pencil_chi(T.chi(), s) @ x) <= 1e-8 * (1 + operator_norm(T)) ** 2


def test_slice_regularity_of_resolvent(rng):
    T = random_qmatrix(2, rng) * 0.5
    spec = s_spectrum(T)
    for side in ("left", "right"):
        for J in (E1, imaginary_unit(1, -2, 0.5)):
            count = 0
            while count < 3:
                u, v = rng.uniform(-3, 3), rng.uniform(0.2, 3)
                if spec.distance_to(SpherePoint(u, v)) <= 0.5:
                    continue
                count += 1
                d1, d2 = cauchy_riemann_defect(T, u, v, J, side=side)
                assert max(d1, d2) < 1e-5


def test_weyl_identity(rng):
    for _ in range(10):
        n = int(rng.integers(1, 5))
        A, K = random_qmatrix(n, rng), random_qmatrix(n, rng) * 0.3
        s = Quaternion(*rng.standard_normal(4))
        if pencil_min_singular(A, s) <= 1e-3 * (1 + operator_norm(A)) ** 2:
            continue
        r = weyl_factorization_residual(A, K, s)
        assert r <= 1e-10 * (1 + operator_norm(A) + operator_norm(K)) ** 2


def test_more_resolvent_examples():
    assert pseudo_resolvent(QMatrix.zeros(2), 2).value.allclose(QMatrix.scalar(0.25, 2), 1e-15)
    assert pseudo_resolvent(QMatrix.diag([1]), 3).value.allclose(QMatrix.diag([0.25]), 1e-15)
    s = Quaternion(0.5, -1, 2, 0.25)
    for side in (s_resolvent_left, s_resolvent_right):
        assert side(QMatrix.zeros(2), s).allclose(QMatrix.scalar(s.inverse(), 2), 1e-15)
        assert side(QMatrix.diag([1]), 3).allclose(QMatrix.diag([0.5]), 1e-15)
    assert max(verify_s_resolvent_equation(QMatrix.identity(2), 2 * E1, 3)) < 1e-10


def test_real_s_gives_classical_resolvent(rng):
    T = random_qmatrix(3, rng)
    s = 4.5
    classical = QMatrix.from_chi(np.linalg.inv(s * np.eye(6) - T.chi()))
    assert s_resolvent_left(T, s).allclose(classical, 1e-12)
    assert s_resolvent_right(T, s).allclose(classical, 1e-12)


def test_spectral_radius_examples(rng):
    exact, _ = spectral_radius(random_unitary(4, rng))
    assert exact == pytest.approx(1.0, abs=1e-12)
    exact, seq = spectral_radius(QMatrix.diag([1, 2]))
    assert exact == pytest.approx(2.0, abs=1e-14) and seq[0] == pytest.approx(2.0, abs=1e-14)
    _, seq = spectral_radius(QMatrix.diag([1]), max_power=64)
    assert len(seq) == 7  # powers 1, 2, 4, ..., 64


def test_normal_bound_closed_forms():
    lhs, rhs = normal_resolvent_bound(QMatrix.diag([1, 2]), 3)
    assert lhs == pytest.approx(1.0, abs=1e-12) and rhs == pytest.approx(1.0, abs=1e-12)
    for eps in (1e-1, 1e-3):
        lhs, rhs = normal_resolvent_bound(QMatrix.diag([1]), 1 + eps)
        assert lhs == pytest.approx(1 / eps**2, rel=1e-12)
        assert rhs == pytest.approx(1 / eps**2, rel=1e-12)
