"""Seeded invariant suite run by ``qspectral verify``.

Each check draws its inputs from a generator seeded by the caller and
returns a :class:`CheckResult`; the first violation carries the inputs that
produced it.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, List

import numpy as np

from . import funcalc, perturb, schatten, slicefun, spectrum
from .qmat import (
    adjoint,
    inner,
    normal_decompose,
    operator_norm,
    polar_decompose,
    random_normal,
    random_qmatrix,
    random_unitary,
)
from .quat import E1, E2, Quaternion, SpherePoint, hausdorff, imaginary_unit, sphere_distance


@dataclass
class CheckResult:
    name: str
    ok: bool
    value: float = 0.0
    inputs: dict = field(default_factory=dict)


def _quat(rng) -> Quaternion:
    return Quaternion(*rng.standard_normal(4))


def check_quaternion_norm(rng, trials=200) -> CheckResult:
    worst = 0.0
    for _ in range(trials):
        p, q = _quat(rng), _quat(rng)
        rel = abs(abs(p * q) - abs(p) * abs(q)) / max(abs(p) * abs(q), 1e-300)
        if rel > 1e-12:
            return CheckResult("quaternion |pq| = |p||q|", False, rel, {"p": p.to_list(), "q": q.to_list()})
        worst = max(worst, rel)
    return CheckResult("quaternion |pq| = |p||q|", True, worst)


def check_sphere_triangle(rng, trials=200) -> CheckResult:
    for _ in range(trials):
        a, b, c = (SpherePoint(*rng.standard_normal(2)) for _ in range(3))
        if sphere_distance(a, c) > sphere_distance(a, b) + sphere_distance(b, c) + 1e-12:
            return CheckResult("sphere distance triangle inequality", False, 0.0, {"a": a, "b": b, "c": c})
    return CheckResult("sphere distance triangle inequality", True)


def check_adjoint(rng, trials=50) -> CheckResult:
    worst = 0.0
    for _ in range(trials):
        n = int(rng.integers(1, 9))
        T = random_qmatrix(n, rng)
        x, y = rng.standard_normal((n, 4)), rng.standard_normal((n, 4))
        err = abs(inner(adjoint(T).apply(x), y) - inner(x, T.apply(y)))
        scale = operator_norm(T) * np.linalg.norm(x) * np.linalg.norm(y)
        worst = max(worst, err / scale)
        if err > 1e-11 * scale:
            return CheckResult("adjoint identity", False, err / scale, {"T": T.to_list()})
    return CheckResult("adjoint identity", True, worst)


def check_decompositions(rng, trials=20) -> CheckResult:
    worst = 0.0
    for _ in range(trials):
        n = int(rng.integers(1, 7))
        T = random_normal(n, rng)
        nrm = operator_norm(T)
        d = normal_decompose(T)
        errs = [
            (d.reconstruct() - T).norm(),
            (d.A @ d.B - d.B @ d.A).norm(),
            (d.A @ d.J - d.J @ d.A).norm(),
            (d.B @ d.J - d.J @ d.B).norm(),
        ]
        G = random_qmatrix(n, rng)
        U, P = polar_decompose(G)
        errs.append((U @ P - G).norm() * nrm / G.norm())
        worst = max(worst, max(errs) / nrm)
        if max(errs) > 1e-9 * nrm:
            return CheckResult("normal and polar decompositions", False, max(errs) / nrm, {"T": T.to_list()})
    return CheckResult("normal and polar decompositions", True, worst)


def check_resolvent_equation(rng, trials=50) -> CheckResult:
    worst = 0.0
    for _ in range(trials):
        n = int(rng.integers(2, 7))
        T = random_qmatrix(n, rng)
        s, p = _quat(rng), _quat(rng)
        sq = (1 + operator_norm(T)) ** 2
        if min(spectrum.pencil_min_singular(T, s), spectrum.pencil_min_singular(T, p)) <= 1e-6 * sq:
            continue
        scale = (1 + operator_norm(T)) ** 3
        r = max(spectrum.verify_s_resolvent_equation(T, s, p)) / scale
        worst = max(worst, r)
        if r > 1e-9:
            return CheckResult("S-resolvent equation", False, r, {"T": T.to_list(), "s": s.to_list(), "p": p.to_list()})
    return CheckResult("S-resolvent equation", True, worst)


def check_normal_bound(rng, trials=30) -> CheckResult:
    worst = 0.0
    for _ in range(trials):
        n = int(rng.integers(1, 9))
        T = random_normal(n, rng)
        s = _quat(rng)
        lhs, rhs = spectrum.normal_resolvent_bound(T, s)
        worst = max(worst, lhs / rhs)
        if lhs > rhs * (1 + 1e-9):
            return CheckResult("normal pseudo-resolvent bound", False, lhs / rhs, {"T": T.to_list(), "s": s.to_list()})
    return CheckResult("normal pseudo-resolvent bound", True, worst)


def check_unitary_invariance(rng, trials=20) -> CheckResult:
    worst = 0.0
    for _ in range(trials):
        n = int(rng.integers(1, 7))
        T = random_qmatrix(n, rng)
        U = random_unitary(n, rng)
        h = hausdorff(spectrum.s_spectrum(U.H @ T @ U).points, spectrum.s_spectrum(T).points)
        worst = max(worst, h)
        if h > 1e-9 * (1 + operator_norm(T)):
            return CheckResult("S-spectrum unitary invariance", False, h, {"T": T.to_list()})
    return CheckResult("S-spectrum unitary invariance", True, worst)


def check_funcalc(rng, trials=5) -> CheckResult:
    worst = 0.0
    for _ in range(trials):
        n = int(rng.integers(1, 5))
        T = random_qmatrix(n, rng)
        f = slicefun.SliceSeries.from_array(rng.standard_normal((int(rng.integers(1, 7)), 4)))
        direct = funcalc.direct_polynomial(T, f)
        got = funcalc.functional_calculus(T, f, funcalc.default_contour(T))
        r = (got - direct).norm() / max(1.0, direct.norm())
        worst = max(worst, r)
        if r > 1e-7:
            return CheckResult("functional calculus vs polynomial", False, r, {"T": T.to_list()})
    return CheckResult("functional calculus vs polynomial", True, worst)


def check_schatten(rng, trials=50) -> CheckResult:
    for _ in range(trials):
        n = int(rng.integers(1, 7))
        T, A = random_qmatrix(n, rng), random_qmatrix(n, rng)
        for p in (1, 2, 3, np.inf):
            rep = schatten.check_ideal_inequalities(T, A, p)
            if not rep["ok"]:
                return CheckResult("Schatten inequalities", False, 0.0, {"T": T.to_list(), "A": A.to_list(), "p": p})
    return CheckResult("Schatten inequalities", True)


def check_delta(rng, trials=10) -> CheckResult:
    for _ in range(trials):
        n = int(rng.integers(1, 5))
        T = random_qmatrix(n, rng) * 0.3
        k = int(rng.integers(1, 4))
        a = schatten.delta_k(T, k, E1)
        b = schatten.delta_k(T, k, E2)
        c = schatten.delta_k(T, k, imaginary_unit(1, 1, 1))
        if abs(abs(a) - abs(b)) > 1e-10 or abs(a.real - c.real) > 1e-10:
            return CheckResult("delta_k slice independence", False, abs(abs(a) - abs(b)), {"T": T.to_list(), "k": k})
    return CheckResult("delta_k slice independence", True)


def check_restriction(rng, trials=20) -> CheckResult:
    for _ in range(trials):
        n = int(rng.integers(2, 7))
        m = int(rng.integers(1, n))
        T = perturb.random_block_triangular(n, m, rng)
        rep = perturb.restriction_spectrum_check(T, m)
        if not rep["ok"]:
            return CheckResult("restriction spectrum inclusion", False, rep["distance"], {"T": T.to_list(), "m": m})
    return CheckResult("restriction spectrum inclusion", True)


CHECKS: List[Callable] = [
    check_quaternion_norm,
    check_sphere_triangle,
    check_adjoint,
    check_decompositions,
    check_resolvent_equation,
    check_normal_bound,
    check_unitary_invariance,
    check_funcalc,
    check_schatten,
    check_delta,
    check_restriction,
]


def run_all(seed: int = 0) -> List[CheckResult]:
    results = []
    for i, check in enumerate(CHECKS):
        rng = np.random.default_rng([seed, i])
        results.append(check(rng))
    return results
