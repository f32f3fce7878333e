import math

import numpy as np
import pytest

from qspectral.errors import NotBlockTriangular, ProbeHitsSpectrum
from qspectral.qmat import QMatrix, is_normal, random_qmatrix
from qspectral.quat import E1, SpherePoint, hausdorff
from qspectral.perturb import (
    ArcSpectrumEnsemble,
    SegmentProbe,
    growth_experiment,
    growth_hypothesis_check,
    random_block_triangular,
    restriction_spectrum_check,
    run_growth,
    sample_probe,
    weyl_report,
)
from qspectral.schatten import schatten_norm
from qspectral.spectrum import s_spectrum


def test_ensemble_spheres_on_arc():
    ens = ArcSpectrumEnsemble(5, "halfcircle", seed=1)
    for p in ens.spheres:
        assert math.hypot(p.u, p.v) == pytest.approx(1.0, abs=1e-15)
    assert ens.spheres[0] == SpherePoint(1.0, 0.0)
    ends = ArcSpectrumEnsemble(3, "interval").spheres
    assert [p.u for p in ends] == [-1.0, 0.0, 1.0]


def test_ensemble_is_normal_with_arc_spectrum():
    ens = ArcSpectrumEnsemble(6, "halfcircle", seed=3)
    A = ens.generate()
    assert is_normal(A)
    assert hausdorff(s_spectrum(A).points, ens.spheres) <= 1e-10


def test_perturbation_norm():
    ens = ArcSpectrumEnsemble(4, seed=2)
    assert schatten_norm(ens.perturbation(2.0, 0.05), 2) == pytest.approx(0.05, rel=1e-12)


def test_one_by_one_growth_is_inverse_square():
    ens = ArcSpectrumEnsemble(1, "halfcircle", seed=0)
    probe = SegmentProbe.for_arc(ens)
    samples = sample_probe(QMatrix.diag([1]), probe)
    assert len(samples) == 13
    for d, nq, ns in samples:
        assert nq == pytest.approx(1 / d**2, rel=1e-10)
        assert ns == pytest.approx(1 / d, rel=1e-10)


def test_unperturbed_slope():
    for arc in ("halfcircle", "interval"):
        ens = ArcSpectrumEnsemble(8, arc, seed=7)
        rep = growth_experiment(ens.generate(), QMatrix.zeros(8), 2, SegmentProbe.for_arc(ens))
        assert rep.loglog_slope == pytest.approx(-2.0, abs=0.05)
        assert rep.passed


def test_perturbed_growth_passes():
    rep = run_growth(n=8, k=2, bnorm=0.05, seed=7)
    assert rep.rows
    assert rep.fitted_exponent >= -(2 * 2 + 2) - 0.5
    assert rep.passed
    assert rep.extras["schatten_k_norm_B"] > 0


def test_csv_is_deterministic():
    a = run_growth(n=6, seed=11).to_csv()
    b = run_growth(n=6, seed=11, threads=3).to_csv()
    assert a == b
    assert a.splitlines()[0] == "d,norm_Q,norm_SL,fitted_K"


def test_fitted_k_is_running_max():
    rep = run_growth(n=5, seed=4)
    ks = [r["fitted_K"] for r in rep.rows]
    assert ks == sorted(ks)
    assert rep.fitted_K == ks[-1]


def test_tangent_probe_rejected():
    ens = ArcSpectrumEnsemble(4, "interval")
    with pytest.raises(ValueError):
        SegmentProbe.for_arc(ens, 1, direction=(1.0, 0.05))
    SegmentProbe.for_arc(ens, 1, direction=(0.3, 1.0))


def test_probe_on_spectrum_raises():
    probe = SegmentProbe(SpherePoint(0.0, 0.0), (1.0, 0.0), d0=1.0, count=1)
    with pytest.raises(ProbeHitsSpectrum):
        sample_probe(QMatrix.diag([-1, 0, 1]), probe)


def test_growth_hypothesis_for_normal_operator():
    ens = ArcSpectrumEnsemble(4, "halfcircle", seed=5)
    rep = growth_hypothesis_check(ens.generate(), 1, SegmentProbe.for_arc(ens))
    # ||S_L^{-1}|| grows like 1/d, so log||S_L^{-1}|| d is bounded
    assert rep.extras["holds"]
    assert rep.extras["smallest_k"] == 1


def test_restriction_examples():
    T = QMatrix(np.array([[[1, 0, 0, 0], [0, 1, 0, 0]], [[0, 0, 0, 0], [2, 0, 0, 0]]], dtype=float))
    rep = restriction_spectrum_check(T, 1)
    assert rep["ok"] and rep["distance"] <= 1e-12
    assert rep["restricted"] == [{"u": 1.0, "v": 0.0, "mult": 1}]
    with pytest.raises(NotBlockTriangular):
        restriction_spectrum_check(QMatrix.from_real([[1, 0], [1, 1]]), 1)


def test_restriction_random(rng):
    for _ in range(20):
        n = int(rng.integers(2, 7))
        m = int(rng.integers(1, n))
        assert restriction_spectrum_check(random_block_triangular(n, m, rng), m)["ok"]


def test_weyl_report(rng):
    A = random_qmatrix(3, rng)
    rep = weyl_report(A, QMatrix.zeros(3))
    assert rep["ok"]
    assert rep["hausdorff"] <= 1e-9
    rep = weyl_report(A, random_qmatrix(3, rng) * 0.1, samples=10)
    assert rep["ok"]
    assert rep["max_factorization_residual"] < 1e-10


def test_probe_points_in_chosen_slice():
    ens = ArcSpectrumEnsemble(3, seed=0)
    probe = SegmentProbe.for_arc(ens, 1, J=E1)
    s = probe.point(0.25)
    assert s.x2 == 0.0 and s.x3 == 0.0
    assert s.x1 == pytest.approx(1.25)
