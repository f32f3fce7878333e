"""Experiment harness for normal-plus-Schatten perturbations.

Normal operators with spheres placed on an arc of the closed upper half plane
are perturbed by a small Schatten-class matrix, and the growth of the
pseudo-resolvent and the left S-resolvent is measured along a segment leaving
a spectral point of the arc.
"""

from __future__ import annotations

import csv
import io
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Tuple

import numpy as np

from .errors import NotBlockTriangular, ProbeHitsSpectrum
from .qmat import QMatrix, operator_norm, random_qmatrix, random_unitary
from .quat import E1, Quaternion, SpherePoint, directed_distance, hausdorff
from .schatten import schatten_norm
from .spectrum import RESOLVENT_TOL, pencil_chi, s_spectrum, scalar_chi, weyl_factorization_residual

MIN_ANGLE_DEG = 10.0
COND_LIMIT = 1e14


@dataclass(frozen=True)
class Arc:
    name: str
    position: Callable[[float], Tuple[float, float]]
    tangent: Callable[[float], Tuple[float, float]]


ARCS: Dict[str, Arc] = {
    "halfcircle": Arc(
        "halfcircle",
        lambda t: (math.cos(math.pi * t), math.sin(math.pi * t)),
        lambda t: (-math.sin(math.pi * t), math.cos(math.pi * t)),
    ),
    "interval": Arc("interval", lambda t: (-1.0 + 2.0 * t, 0.0), lambda t: (1.0, 0.0)),
}


@dataclass(frozen=True)
class ArcSpectrumEnsemble:
    """Normal matrices U D U* with the spheres of D evenly spread on an arc.

    Parameters t_i = i / (n - 1) include both arc endpoints.
    """

    n: int
    arc: str = "halfcircle"
    seed: int = 0

    def __post_init__(self):
        if self.arc not in ARCS:
            raise ValueError(f"unknown arc {self.arc!r}; choose from {sorted(ARCS)}")
        if self.n < 1:
            raise ValueError("n must be >= 1")

    @property
    def params(self) -> np.ndarray:
        if self.n == 1:
            return np.zeros(1)
        return np.arange(self.n) / (self.n - 1)

    @property
    def spheres(self) -> List[SpherePoint]:
        pos = ARCS[self.arc].position
        return [SpherePoint(*pos(t)) for t in self.params]

    def generate(self) -> QMatrix:
        rng = np.random.default_rng(self.seed)
        D = QMatrix.from_complex(np.diag([complex(p.u, p.v) for p in self.spheres]))
        U = random_unitary(self.n, rng)
        return U @ D @ U.H

    def perturbation(self, p: float, norm: float, seed_offset: int = 1) -> QMatrix:
        """Random Gaussian matrix rescaled to the given Schatten-p norm."""
        rng = np.random.default_rng(self.seed + seed_offset)
        B = random_qmatrix(self.n, rng)
        return B * (norm / schatten_norm(B, p))


@dataclass(frozen=True)
class SegmentProbe:
    s0: SpherePoint
    direction: Tuple[float, float]
    d0: float = 0.5
    count: int = 13
    J: Quaternion = E1

    def __post_init__(self):
        du, dv = self.direction
        r = math.hypot(du, dv)
        if r == 0.0:
            raise ValueError("probe direction must be nonzero")
        object.__setattr__(self, "direction", (du / r, dv / r))

    @classmethod
    def for_arc(cls, ensemble: ArcSpectrumEnsemble, index: int = 0, direction=None, **kw) -> "SegmentProbe":
        """Probe from the index-th sphere of the ensemble, refusing near-tangent directions."""
        arc = ARCS[ensemble.arc]
        t = float(ensemble.params[index])
        tu, tv = arc.tangent(t)
        if direction is None:
            nu, nv = tv, -tu
            if nv < 0 or (nv == 0 and nu < 0):
                nu, nv = -nu, -nv
            direction = (nu, nv)
        probe = cls(ensemble.spheres[index], tuple(direction), **kw)
        du, dv = probe.direction
        cosang = abs(du * tu + dv * tv) / math.hypot(tu, tv)
        if cosang > math.cos(math.radians(MIN_ANGLE_DEG)):
            raise ValueError(f"probe direction is within {MIN_ANGLE_DEG} degrees of the arc tangent")
        return probe

    @property
    def distances(self) -> np.ndarray:
        return self.d0 * 2.0 ** -np.arange(self.count)

    def point(self, d: float) -> Quaternion:
        du, dv = self.direction
        return Quaternion.in_slice(self.s0.u + d * du, self.s0.v + d * dv, self.J)


@dataclass
class GrowthReport:
    k: int
    exponent_bound: float
    rows: List[dict] = field(default_factory=list)
    fitted_K: float = -math.inf
    loglog_slope: float = math.nan
    fitted_exponent: float = 0.0
    extras: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.fitted_exponent >= self.exponent_bound - 0.5

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["d", "norm_Q", "norm_SL", "fitted_K"])
        for r in self.rows:
            w.writerow([_fmt(r["d"]), _fmt(r["norm_Q"]), _fmt(r["norm_SL"]), _fmt(r["fitted_K"])])
        return buf.getvalue()


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def _measure(Tc: np.ndarray, s: Quaternion, scale: float):
    P = pencil_chi(Tc, s)
    sv = np.linalg.svd(P, compute_uv=False)
    if sv[-1] <= RESOLVENT_TOL * scale:
        raise ProbeHitsSpectrum(f"probe point {s!r} is numerically in the S-spectrum")
    Q = np.linalg.inv(P)
    SL = -(Q @ (Tc - scalar_chi(s.conj(), Tc.shape[0] // 2)))
    return float(np.linalg.norm(Q, 2)), float(np.linalg.norm(SL, 2)), float(sv[0] / sv[-1])


def sample_probe(T: QMatrix, probe: SegmentProbe, threads: int = 1):
    """(d, ||Q||, ||S_L^{-1}||) along the probe, stopping once cond > 1e14."""
    Tc = T.chi()
    scale = (1.0 + operator_norm(T)) ** 2
    ds = list(probe.distances)
    pts = [probe.point(d) for d in ds]
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as ex:
            measured = list(ex.map(lambda s: _measure(Tc, s, scale), pts))
    else:
        measured = [_measure(Tc, s, scale) for s in pts]
    out = []
    for d, (nq, ns, cond) in zip(ds, measured):
        if cond > COND_LIMIT:
            break
        out.append((float(d), nq, ns))
    return out


def _slope(x, y) -> float:
    if len(x) < 2:
        return math.nan
    return float(np.polyfit(np.asarray(x), np.asarray(y), 1)[0])


def loglog_slope(samples) -> float:
    """Least-squares slope of log||Q|| against log d."""
    return _slope([math.log(d) for d, _, _ in samples], [math.log(q) for _, q, _ in samples])


def growth_exponent(ds, values) -> float:
    """Slope of log(log v) against log d over samples with log v > 0; 0 if too few."""
    pairs = [(math.log(d), math.log(math.log(v))) for d, v in zip(ds, values) if v > 1.0 and math.log(v) > 0.0]
    if len(pairs) < 2:
        return 0.0
    x, y = zip(*pairs)
    return _slope(x, y)


def growth_experiment(A: QMatrix, B: QMatrix, k: int, probe: SegmentProbe, threads: int = 1) -> GrowthReport:
    """Pseudo-resolvent growth of A + B against exp(K d^(-2k-2))."""
    T = A + B
    samples = sample_probe(T, probe, threads)
    expo = 2 * k + 2
    report = GrowthReport(k=k, exponent_bound=-float(expo))
    running = -math.inf
    for d, nq, ns in samples:
        running = max(running, math.log(nq) * d**expo)
        report.rows.append({"d": d, "norm_Q": nq, "norm_SL": ns, "fitted_K": running})
    report.fitted_K = running
    report.loglog_slope = loglog_slope(samples)
    report.fitted_exponent = growth_exponent([r["d"] for r in report.rows], [r["norm_Q"] for r in report.rows])
    report.extras["schatten_k_norm_B"] = schatten_norm(B, k)
    return report


def _bound_holds(ds, values, k: int) -> Tuple[bool, float]:
    ratios = [max(math.log(v), 0.0) * d**k for d, v in zip(ds, values)]
    K = max(ratios) if ratios else 0.0
    if len(ratios) < 2:
        return True, K
    # the fitted constant must not be driven by the deepest sample
    return ratios[-1] <= max(ratios[:-1]) * (1.0 + 1e-12) or ratios[-1] == 0.0, K


def growth_hypothesis_check(T: QMatrix, k: int, probe: SegmentProbe, k_max: int = 64, threads: int = 1) -> GrowthReport:
    """||S_L^{-1}(s, T)|| against exp(K d^(-k)); also finds the smallest k that fits."""
    samples = sample_probe(T, probe, threads)
    ds = [d for d, _, _ in samples]
    norms = [ns for _, _, ns in samples]
    report = GrowthReport(k=k, exponent_bound=-float(k))
    running = -math.inf
    for d, nq, ns in samples:
        running = max(running, max(math.log(ns), 0.0) * d**k)
        report.rows.append({"d": d, "norm_Q": nq, "norm_SL": ns, "fitted_K": running})
    report.fitted_K = running
    report.fitted_exponent = growth_exponent(ds, norms)
    report.loglog_slope = _slope([math.log(d) for d in ds], [math.log(v) for v in norms])
    holds, _ = _bound_holds(ds, norms, k)
    smallest = next((j for j in range(1, k_max + 1) if _bound_holds(ds, norms, j)[0]), None)
    report.extras.update({"holds": holds, "smallest_k": smallest})
    return report


def restriction_spectrum_check(T: QMatrix, m: int, slack: float = 1e-7) -> dict:
    """Spheres of T restricted to span(e_1..e_m) against the full spectrum of T."""
    n = T.n
    if not 0 < m <= n:
        raise ValueError("m must satisfy 0 < m <= n")
    lower = T.data[m:, :m]
    if lower.size and np.max(np.abs(lower)) > 1e-12 * max(1.0, operator_norm(T)):
        raise NotBlockTriangular("span of the first m basis vectors is not invariant")
    sub = s_spectrum(T.block(slice(0, m), slice(0, m)))
    full = s_spectrum(T).full()
    excess = directed_distance(sub.points, full.points)
    return {"restricted": sub.to_list(), "full": full.to_list(), "distance": excess, "ok": excess <= slack}


def weyl_report(A: QMatrix, K: QMatrix, samples: int = 20, seed: int = 0) -> dict:
    """Spectral displacement under A -> A + K and the factorisation residual."""
    sa, sk = s_spectrum(A), s_spectrum(A + K)
    displacement = [
        {"u": sp.u, "v": sp.v, "mult": sp.multiplicity, "distance": sa.distance_to(sp.point)} for sp in sk.spheres
    ]
    rng = np.random.default_rng(seed)
    na, nk = operator_norm(A), operator_norm(K)
    radius = 1.0 + na + nk
    scale = radius**2
    residuals = []
    Ac = A.chi()
    while len(residuals) < samples:
        s = Quaternion(*(rng.standard_normal(4) * radius))
        sv = np.linalg.svd(pencil_chi(Ac, s), compute_uv=False)[-1]
        if sv <= 1e-3 * (1.0 + na) ** 2:
            continue
        residuals.append(weyl_factorization_residual(A, K, s) / scale)
    return {
        "spectrum_A": sa.to_list(),
        "spectrum_A_plus_K": sk.to_list(),
        "displacement": displacement,
        "hausdorff": hausdorff(sa.points, sk.points),
        "max_factorization_residual": max(residuals) if residuals else 0.0,
        "ok": all(r < 1e-10 for r in residuals),
    }


def random_block_triangular(n: int, m: int, rng: np.random.Generator) -> QMatrix:
    data = rng.standard_normal((n, n, 4))
    data[m:, :m] = 0.0
    return QMatrix(data)


def run_growth(
    n: int = 8, k: int = 2, bnorm: float = 0.05, seed: int = 7, arc: str = "halfcircle", index: int = 0, threads: int = 1
) -> GrowthReport:
    """The configuration driven by the command line: ensemble, perturbation, probe."""
    ens = ArcSpectrumEnsemble(n, arc, seed)
    A = ens.generate()
    B = ens.perturbation(2.0, bnorm) if bnorm > 0 else QMatrix.zeros(n)
    probe = SegmentProbe.for_arc(ens, index)
    return growth_experiment(A, B, k, probe, threads)
