"""Singular values, Schatten norms and the regularised determinant delta_k."""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import BadExponent, NumericalFailure
from .qmat import QMatrix, commutator, gram_schmidt, operator_norm, unembed_vector
from .quat import E1, Quaternion, check_unit
from .spectrum import CLUSTER_TOL, s_spectrum


@dataclass(frozen=True)
class SingularValueDecomposition:
    """T = W diag(lambdas) E*, lambdas non-increasing.

    Columns of E are the eigenvectors e_n of |T|; columns of W are the
    vectors sigma_n, so T x = sum sigma_n lambda_n <e_n, x>.
    """

    lambdas: np.ndarray
    W: QMatrix
    E: QMatrix

    def reconstruct(self) -> QMatrix:
        return QMatrix(self.W.data * self.lambdas[None, :, None]) @ self.E.H


def singular_value_list(T: QMatrix) -> np.ndarray:
    """Singular values of T: those of chi(T) with the pairing removed."""
    try:
        sv = np.linalg.svd(T.chi(), compute_uv=False)
    except np.linalg.LinAlgError as exc:
        raise NumericalFailure(str(exc)) from exc
    return sv[::2].copy()


def singular_values(T: QMatrix) -> SingularValueDecomposition:
    n = T.n
    c = T.chi()
    try:
        w, v = np.linalg.eigh(c.conj().T @ c)
    except np.linalg.LinAlgError as exc:
        raise NumericalFailure(str(exc)) from exc
    order = np.argsort(w)[::-1]
    # each eigenvalue of T*T appears twice in chi; the quaternionic
    # Gram-Schmidt drops the right-dependent partner of each pair
    candidates = [unembed_vector(v[:, i]) for i in order]
    E_cols = gram_schmidt(candidates, tol=0.5)
    if len(E_cols) != n:
        E_cols = gram_schmidt(candidates, tol=1e-6)
    if len(E_cols) != n:
        raise NumericalFailure("could not extract a quaternionic eigenbasis of T*T")
    lambdas = singular_value_list(T)
    W_cols = []
    cut = 1e-12 * max(lambdas[0] if n else 0.0, 1.0)
    for e, lam in zip(E_cols, lambdas):
        if lam > cut:
            W_cols.append(T.apply(e) / lam)
    # complete W to a unitary on the kernel part
    basis = gram_schmidt(W_cols + _standard_columns(n), tol=1e-8)[:n]
    return SingularValueDecomposition(lambdas, QMatrix.from_columns(basis), QMatrix.from_columns(E_cols))


def _standard_columns(n: int):
    cols = []
    for i in range(n):
        e = np.zeros((n, 4))
        e[i, 0] = 1.0
        cols.append(e)
    return cols


def schatten_norm(T: QMatrix, p: float) -> float:
    """(sum lambda_n^p)^(1/p); the largest singular value for p = inf."""
    p = float(p)
    if not p >= 1.0:
        raise BadExponent(f"Schatten exponent must be >= 1, got {p}")
    lam = singular_value_list(T)
    if math.isinf(p):
        return float(lam.max(initial=0.0))
    top = lam.max(initial=0.0)
    if top == 0.0:
        return 0.0
    # scale out the largest value to keep lambda^p finite
    return float(top * np.sum((lam / top) ** p) ** (1.0 / p))


def commutes_with(T: QMatrix, J: QMatrix, tol: float = 1e-10) -> bool:
    """Membership predicate for the class commuting with J."""
    scale = max(1.0, operator_norm(T) * operator_norm(J))
    return operator_norm(commutator(T, J)) <= tol * scale


def check_ideal_inequalities(T: QMatrix, A: QMatrix, p: float, slack: float = 1e-9) -> dict:
    """Evaluate the ideal-norm and singular-value inequalities for (T, A).

    Returns a report with the largest violation margin of each inequality
    (negative or zero means it holds) and an overall ``ok`` flag.
    """
    a_norm = operator_norm(A)
    t_p = schatten_norm(T, p)
    left = schatten_norm(A @ T, p) - a_norm * t_p
    right = schatten_norm(T @ A, p) - a_norm * t_p

    l1 = singular_value_list(T)
    l2 = singular_value_list(A)
    ls = singular_value_list(T + A)
    lp = singular_value_list(T @ A)
    dim = len(l1)
    sum_gap = -math.inf
    prod_gap = -math.inf
    for i in range(dim):
        for j in range(dim - i):
            # 0-based: lambda_{i+j} vs lambda_i, lambda_j
            sum_gap = max(sum_gap, ls[i + j] - (l1[i] + l2[j]))
            prod_gap = max(prod_gap, lp[i + j] - l1[i] * l2[j])
    report = {
        "p": p,
        "left_ideal_excess": left,
        "right_ideal_excess": right,
        "sum_excess": sum_gap if dim else 0.0,
        "product_excess": prod_gap if dim else 0.0,
    }
    report["ok"] = all(report[k] <= slack for k in ("left_ideal_excess", "right_ideal_excess", "sum_excess", "product_excess"))
    return report


def delta_k_complex(T: QMatrix, k: int, zero_tol: Optional[float] = None) -> complex:
    """delta_k in the slice coordinates u + i v (i standing for the chosen unit).

    Each nonzero sphere contributes its representative u + J v with v >= 0,
    repeated by multiplicity.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    spec = s_spectrum(T)
    if zero_tol is None:
        zero_tol = CLUSTER_TOL * (1.0 + operator_norm(T))
    value = 1.0 + 0.0j
    for sp in spec.spheres:
        z = complex(sp.u, sp.v)
        if abs(z) <= zero_tol:
            continue
        expo = sum((-1) ** j * z**j / j for j in range(1, k))
        value *= ((1.0 + z) * cmath.exp(expo)) ** sp.multiplicity
    return value


def delta_k(T: QMatrix, k: int, J: Quaternion = E1) -> Quaternion:
    """The regularised determinant as a point of the slice spanned by J."""
    check_unit(J)
    z = delta_k_complex(T, k)
    return Quaternion.in_slice(z.real, z.imag, J)
