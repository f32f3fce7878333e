"""Quaternionic matrices acting right-linearly on column vectors of H^n.

A matrix is stored as a float array of shape ``(rows, cols, 4)``.  Products,
inverses and spectral data go through the complex adjoint

    chi(T) = [[T1, T2], [-conj(T2), conj(T1)]],   T = T1 + T2 e2,

which is an injective real-algebra homomorphism with chi(T*) = chi(T)^H.  A
quaternion vector ``x = x1 + x2 e2`` is embedded as ``[x1; -conj(x2)]`` so that
chi(T) acts on embedded vectors exactly as T acts on x.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import NotNormal, Singular
from .quat import E1, ONE, Quaternion, check_unit, qconj_array, qmul_array

CLASSIFY_TOL = 1e-10


class QMatrix:
    """Dense quaternion matrix.  Immutable by convention."""

    __slots__ = ("data",)

    def __init__(self, data):
        arr = np.array(data, dtype=float)
        if arr.ndim != 3 or arr.shape[2] != 4:
            raise ValueError(f"expected shape (rows, cols, 4), got {arr.shape}")
        arr.setflags(write=False)
        self.data = arr

    # construction -------------------------------------------------------

    @classmethod
    def zeros(cls, n: int, m: Optional[int] = None) -> "QMatrix":
        return cls(np.zeros((n, n if m is None else m, 4)))

    @classmethod
    def identity(cls, n: int) -> "QMatrix":
        return cls.scalar(ONE, n)

    @classmethod
    def scalar(cls, s, n: int) -> "QMatrix":
        s = Quaternion.coerce(s)
        data = np.zeros((n, n, 4))
        data[np.arange(n), np.arange(n)] = s.to_array()
        return cls(data)

    @classmethod
    def diag(cls, entries) -> "QMatrix":
        entries = [Quaternion.coerce(e) for e in entries]
        n = len(entries)
        data = np.zeros((n, n, 4))
        for i, e in enumerate(entries):
            data[i, i] = e.to_array()
        return cls(data)

    @classmethod
    def from_real(cls, a) -> "QMatrix":
        a = np.asarray(a, dtype=float)
        data = np.zeros(a.shape + (4,))
        data[..., 0] = a
        return cls(data)

    @classmethod
    def from_complex(cls, t1, t2=None) -> "QMatrix":
        """Build ``T1 + T2 e2`` from complex matrices over the slice of e1."""
        t1 = np.asarray(t1, dtype=complex)
        t2 = np.zeros_like(t1) if t2 is None else np.asarray(t2, dtype=complex)
        return cls(np.stack([t1.real, t1.imag, t2.real, t2.imag], axis=-1))

    @classmethod
    def from_chi(cls, c: np.ndarray) -> "QMatrix":
        """Pull a (numerically) chi-structured complex matrix back to H.

        The two redundant copies of each block are averaged, which projects
        onto the structured subspace.
        """
        c = np.asarray(c)
        n, m = c.shape[0] // 2, c.shape[1] // 2
        t1 = 0.5 * (c[:n, :m] + np.conj(c[n:, m:]))
        t2 = 0.5 * (c[:n, m:] - np.conj(c[n:, :m]))
        return cls.from_complex(t1, t2)

    @classmethod
    def from_columns(cls, cols) -> "QMatrix":
        cols = [np.asarray(c, dtype=float) for c in cols]
        return cls(np.stack(cols, axis=1))

    # views --------------------------------------------------------------

    @property
    def shape(self):
        return self.data.shape[:2]

    @property
    def n(self) -> int:
        return self.data.shape[0]

    def is_square(self) -> bool:
        return self.data.shape[0] == self.data.shape[1]

    def complex_parts(self):
        d = self.data
        return d[..., 0] + 1j * d[..., 1], d[..., 2] + 1j * d[..., 3]

    def chi(self) -> np.ndarray:
        t1, t2 = self.complex_parts()
        return np.block([[t1, t2], [-np.conj(t2), np.conj(t1)]])

    def __getitem__(self, idx) -> Quaternion:
        i, j = idx
        return Quaternion(*self.data[i, j])

    def block(self, rows: slice, cols: slice) -> "QMatrix":
        return QMatrix(self.data[rows, cols])

    def column(self, j: int) -> np.ndarray:
        return np.array(self.data[:, j])

    def to_list(self) -> list:
        return self.data.tolist()

    # algebra ------------------------------------------------------------

    def __add__(self, other: "QMatrix") -> "QMatrix":
        if not isinstance(other, QMatrix):
            return NotImplemented
        return QMatrix(self.data + other.data)

    def __sub__(self, other: "QMatrix") -> "QMatrix":
        if not isinstance(other, QMatrix):
            return NotImplemented
        return QMatrix(self.data - other.data)

    def __neg__(self) -> "QMatrix":
        return QMatrix(-self.data)

    def __matmul__(self, other: "QMatrix") -> "QMatrix":
        if not isinstance(other, QMatrix):
            return NotImplemented
        return QMatrix.from_chi(self.chi() @ other.chi())

    def __mul__(self, s) -> "QMatrix":
        """Right scalar multiplication: entries ``T_ij s``."""
        if isinstance(s, (int, float, np.integer, np.floating)):
            return QMatrix(self.data * float(s))
        if isinstance(s, Quaternion):
            return QMatrix(qmul_array(self.data, s.to_array()))
        return NotImplemented

    def __rmul__(self, s) -> "QMatrix":
        """Left scalar multiplication: entries ``s T_ij``."""
        if isinstance(s, (int, float, np.integer, np.floating)):
            return QMatrix(self.data * float(s))
        if isinstance(s, Quaternion):
            return QMatrix(qmul_array(s.to_array(), self.data))
        return NotImplemented

    def __truediv__(self, c) -> "QMatrix":
        return QMatrix(self.data / float(c))

    def __pow__(self, k: int) -> "QMatrix":
        c = self.chi()
        return QMatrix.from_chi(np.linalg.matrix_power(c, k))

    def adjoint(self) -> "QMatrix":
        return adjoint(self)

    @property
    def H(self) -> "QMatrix":
        return adjoint(self)

    def apply(self, x: np.ndarray) -> np.ndarray:
        """``(Tx)_i = sum_j T_ij x_j`` for an ``(n, 4)`` vector."""
        return qmul_array(self.data, np.asarray(x, dtype=float)[None, :, :]).sum(axis=1)

    def norm(self) -> float:
        return operator_norm(self)

    def frobenius(self) -> float:
        return float(np.sqrt(np.sum(self.data**2)))

    def allclose(self, other: "QMatrix", atol: float = 1e-12) -> bool:
        return bool(np.max(np.abs(self.data - other.data), initial=0.0) <= atol)

    def __eq__(self, other):
        if not isinstance(other, QMatrix):
            return NotImplemented
        return self.data.shape == other.data.shape and bool(np.array_equal(self.data, other.data))

    __hash__ = None

    def __repr__(self):
        return f"QMatrix(shape={self.shape})"


# vectors ----------------------------------------------------------------


def inner(x: np.ndarray, y: np.ndarray) -> Quaternion:
    """``<x, y> = sum conj(x_i) y_i``; right-linear in y."""
    return Quaternion(*qmul_array(qconj_array(x), y).sum(axis=0))


def vector_norm(x: np.ndarray) -> float:
    return float(np.sqrt(np.sum(np.asarray(x) ** 2)))


def right_scale(x: np.ndarray, s: Quaternion) -> np.ndarray:
    return qmul_array(x, s.to_array())


def embed_vector(x: np.ndarray) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    return np.concatenate([x[:, 0] + 1j * x[:, 1], -(x[:, 2] - 1j * x[:, 3])])


def unembed_vector(z: np.ndarray) -> np.ndarray:
    n = z.shape[0] // 2
    x1, x2 = z[:n], -np.conj(z[n:])
    return np.stack([x1.real, x1.imag, x2.real, x2.imag], axis=-1)


def gram_schmidt(vectors, tol: float = 1e-8):
    """Quaternionic modified Gram-Schmidt (two passes) on ``(n, 4)`` vectors.

    Vectors whose residual norm falls below ``tol`` times their original norm
    are dropped, so right-dependent inputs are skipped.
    """
    basis = []
    for v in vectors:
        w = np.array(v, dtype=float)
        v_norm = vector_norm(w)
        if v_norm == 0.0:
            continue
        for _ in range(2):
            for u in basis:
                w = w - right_scale(u, inner(u, w))
        w_norm = vector_norm(w)
        if w_norm > tol * v_norm:
            basis.append(w / w_norm)
    return basis


# operations -------------------------------------------------------------


def adjoint(T: QMatrix) -> QMatrix:
    """Conjugate transpose: ``(T*)_ij = conj(T_ji)``."""
    return QMatrix(qconj_array(np.swapaxes(T.data, 0, 1)))


def complex_adjoint(T: QMatrix) -> np.ndarray:
    return T.chi()


def operator_norm(T: QMatrix) -> float:
    if T.data.size == 0:
        return 0.0
    return float(np.linalg.norm(T.chi(), 2))


def commutator(a: QMatrix, b: QMatrix) -> QMatrix:
    return a @ b - b @ a


def is_normal(T: QMatrix, tol: float = CLASSIFY_TOL) -> bool:
    nrm = operator_norm(T)
    c = T.chi()
    defect = np.linalg.norm(c @ c.conj().T - c.conj().T @ c, 2)
    return bool(defect <= tol * max(nrm * nrm, np.finfo(float).tiny))


def require_normal(T: QMatrix, tol: float = CLASSIFY_TOL) -> None:
    if not is_normal(T, tol):
        raise NotNormal("operator is not normal within tolerance")


def classify(T: QMatrix, tol: float = CLASSIFY_TOL) -> dict:
    """Which of the standard operator classes T belongs to."""
    c = T.chi()
    ch = c.conj().T
    n2 = c.shape[0]
    scale = max(1.0, operator_norm(T))
    eye = np.eye(n2)
    herm = 0.5 * (c + ch)
    return {
        "selfadjoint": bool(np.linalg.norm(c - ch, 2) <= tol * scale),
        "anti_selfadjoint": bool(np.linalg.norm(c + ch, 2) <= tol * scale),
        "normal": is_normal(T, tol),
        "unitary": bool(np.linalg.norm(ch @ c - eye, 2) <= tol and np.linalg.norm(c @ ch - eye, 2) <= tol),
        # <x, Tx> >= 0 requires selfadjointness over H, then a nonnegative spectrum.
        "positive": bool(
            np.linalg.norm(c - ch, 2) <= tol * scale and np.linalg.eigvalsh(herm).min() >= -tol * scale
        ),
    }


def hermitian_function(H: QMatrix, fn) -> QMatrix:
    """Apply a real function to a selfadjoint quaternion matrix via chi."""
    c = H.chi()
    w, v = np.linalg.eigh(0.5 * (c + c.conj().T))
    return QMatrix.from_chi((v * fn(w)) @ v.conj().T)


def psd_sqrt(P: QMatrix) -> QMatrix:
    return hermitian_function(P, lambda w: np.sqrt(np.clip(w, 0.0, None)))


def inverse(T: QMatrix) -> QMatrix:
    return QMatrix.from_chi(np.linalg.inv(T.chi()))


def polar_decompose(T: QMatrix, tol: float = 1e-10):
    """``T = U P`` with ``P = sqrt(T* T)`` and U unitary (invertible T only)."""
    sv = np.linalg.svd(T.chi(), compute_uv=False)
    if sv.size == 0 or sv[-1] <= tol:
        raise Singular("polar decomposition requires an invertible operator")
    P = psd_sqrt(T.H @ T)
    U = QMatrix.from_chi(np.linalg.solve(P.chi().T, T.chi().T).T)
    return U, P


@dataclass(frozen=True)
class NormalDecomposition:
    A: QMatrix
    J: QMatrix
    B: QMatrix

    def reconstruct(self) -> QMatrix:
        return self.A + self.J @ self.B


def left_multiplication(basis, unit: Quaternion, n: int) -> QMatrix:
    """``x -> sum_k u_k J <u_k, x>`` for an orthonormal family ``u_k``."""
    out = np.zeros((n, n, 4))
    j = unit.to_array()
    for u in basis:
        uj = qmul_array(u, j)
        out += qmul_array(uj[:, None, :], qconj_array(u)[None, :, :])
    return QMatrix(out)


def normal_decompose(T: QMatrix, J_choice: Quaternion = E1, tol: float = CLASSIFY_TOL) -> NormalDecomposition:
    """Split a normal operator as ``T = A + J B``.

    A = (T + T*)/2, B = |(T - T*)/2|, and J is the polar factor of (T - T*)/2
    on the range of B.  On ker(T - T*) J is left multiplication by
    ``J_choice`` with respect to an orthonormal basis built from the standard
    basis inside each eigenspace of A restricted to that kernel; this keeps J
    commuting with A and reduces to plain ``J_choice * I`` whenever the kernel
    eigenspaces are spanned by standard basis vectors.
    """
    check_unit(J_choice)
    require_normal(T, tol)
    n = T.n
    nrm = operator_norm(T)
    A = (T + T.H) * 0.5
    C = (T - T.H) * 0.5
    if nrm == 0.0:
        return NormalDecomposition(A, left_multiplication(_standard_basis(n), J_choice, n), QMatrix.zeros(n))

    # i chi(C) is Hermitian; its eigenvalues are +-b without squaring C.
    cc = C.chi()
    lam, v = np.linalg.eigh(0.5j * (cc - cc.conj().T))
    b = np.abs(lam)
    cut = 1e-8 * nrm
    B = QMatrix.from_chi((v * b) @ v.conj().T)
    sign = np.where(b > cut, np.sign(lam), 0.0)
    J_range = QMatrix.from_chi((v * (-1j * sign)) @ v.conj().T)

    kernel = v[:, b <= cut]
    J_ker = QMatrix.zeros(n)
    if kernel.shape[1]:
        a_ker = kernel.conj().T @ A.chi() @ kernel
        aw, av = np.linalg.eigh(0.5 * (a_ker + a_ker.conj().T))
        groups = _cluster_sorted(aw, 1e-8 * nrm)
        basis = []
        for idx in groups:
            vecs = kernel @ av[:, idx]
            proj = QMatrix.from_chi(vecs @ vecs.conj().T)
            basis.extend(gram_schmidt([proj.column(j) for j in range(n)]))
        J_ker = left_multiplication(basis, J_choice, n)
    return NormalDecomposition(A, J_range + J_ker, B)


def _standard_basis(n: int):
    basis = []
    for i in range(n):
        e = np.zeros((n, 4))
        e[i, 0] = 1.0
        basis.append(e)
    return basis


def _cluster_sorted(values: np.ndarray, tol: float):
    groups, current = [], [0]
    for i in range(1, len(values)):
        if values[i] - values[i - 1] <= tol:
            current.append(i)
        else:
            groups.append(current)
            current = [i]
    groups.append(current)
    return groups


def qr(G: QMatrix):
    """Quaternionic QR by Gram-Schmidt; R has a positive real diagonal."""
    n, m = G.shape
    cols = [G.column(j) for j in range(m)]
    basis = gram_schmidt(cols, tol=1e-14)
    if len(basis) < m:
        raise Singular("columns are right-linearly dependent")
    Q = QMatrix.from_columns(basis)
    R = Q.H @ G
    return Q, R


# random generation ------------------------------------------------------


def random_qmatrix(n: int, rng: np.random.Generator, m: Optional[int] = None) -> QMatrix:
    """Standard Gaussian in each of the four components."""
    return QMatrix(rng.standard_normal((n, n if m is None else m, 4)))


def random_unitary(n: int, rng: np.random.Generator) -> QMatrix:
    Q, _ = qr(random_qmatrix(n, rng))
    return Q


def random_normal(n: int, rng: np.random.Generator, spectrum=None) -> QMatrix:
    """``U D U*`` with D diagonal in the slice of e1.

    ``spectrum`` is a sequence of complex numbers ``u + i v``; by default the
    entries are standard complex Gaussians.
    """
    if spectrum is None:
        spectrum = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    spectrum = np.asarray(spectrum, dtype=complex)
    D = QMatrix.from_complex(np.diag(spectrum))
    U = random_unitary(len(spectrum), rng)
    return U @ D @ U.H
