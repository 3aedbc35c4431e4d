"""Dense complex-matrix primitives.

Matrices are plain ``numpy.ndarray`` objects of dtype complex128 throughout
the package; this module supplies the few operations everything else is
built from (Kronecker products, ordered Hermitian eigensystems, trace norm,
matrix exponentials) together with the conjugacy-up-to-shift test for
Hamiltonians of one-parameter automorphism groups.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import DimensionMismatch, NonHermitian, NonSquare, NotAState

__all__ = [
    "DensityMatrix",
    "as_complex_matrix",
    "adjoint",
    "kron",
    "eig_descending",
    "trace_norm",
    "expm",
    "conjugacy_shift",
    "hermiticity_defect",
    "require_hermitian",
]

HERM_RTOL = 1e-10


def as_complex_matrix(a) -> np.ndarray:
    """Coerce input to a 2-d complex128 array."""
    m = np.asarray(a, dtype=np.complex128)
    if m.ndim != 2:
        raise DimensionMismatch(f"expected a matrix, got ndim={m.ndim}")
    return m


def adjoint(a) -> np.ndarray:
    return np.conj(np.asarray(a)).T


def hermiticity_defect(a) -> float:
    """Relative defect ||A - A*|| / max(1, ||A||) in spectral norm."""
    a = as_complex_matrix(a)
    scale = max(1.0, np.linalg.norm(a, 2))
    return np.linalg.norm(a - adjoint(a), 2) / scale


def require_hermitian(a, rtol: float = HERM_RTOL) -> np.ndarray:
    a = as_complex_matrix(a)
    if a.shape[0] != a.shape[1]:
        raise NonSquare(f"matrix is {a.shape[0]}x{a.shape[1]}")
    if hermiticity_defect(a) > rtol:
        raise NonHermitian(f"hermiticity defect {hermiticity_defect(a):.3e} exceeds {rtol:.1e}")
    return a


@dataclass(frozen=True)
class DensityMatrix:
    """A positive matrix of unit trace (a normal state in coordinates).

    Validation tolerances: Hermitian within 1e-12 relative, eigenvalues
    above -1e-12, trace 1 within 1e-12.
    """

    matrix: np.ndarray

    def __post_init__(self):
        m = as_complex_matrix(self.matrix)
        if m.shape[0] != m.shape[1]:
            raise NonSquare("density matrix must be square")
        scale = max(1.0, np.linalg.norm(m, 2))
        if np.linalg.norm(m - adjoint(m), 2) > 1e-12 * scale:
            raise NotAState("density matrix not Hermitian within 1e-12")
        w = np.linalg.eigvalsh((m + adjoint(m)) / 2)
        if w.min() < -1e-12:
            raise NotAState(f"state has eigenvalue {w.min():.3e} below -1e-12")
        tr = np.trace(m)
        if abs(tr - 1.0) > 1e-12:
            raise NotAState(f"state has trace {tr}, expected 1")
        object.__setattr__(self, "matrix", m)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def eigenvalues(self) -> np.ndarray:
        """Eigenvalues sorted nonincreasing."""
        vals, _ = eig_descending(self.matrix)
        return vals


def kron(a, b) -> np.ndarray:
    """Kronecker product; dimensions multiply, bilinear in both slots."""
    return np.kron(as_complex_matrix(a), as_complex_matrix(b))


def eig_descending(a, rtol: float = HERM_RTOL):
    """Eigenvalues of a Hermitian matrix sorted nonincreasing, with diagonalizer.

    Returns ``(values, u)`` where ``values`` is real nonincreasing with
    multiplicity and ``u`` is unitary with ``u* a u`` diagonal (columns of
    ``u`` are eigenvectors, ordered to match ``values``).
    """
    a = require_hermitian(a, rtol)
    w, v = np.linalg.eigh((a + adjoint(a)) / 2)
    order = np.argsort(w)[::-1]
    return w[order], v[:, order]


def trace_norm(a) -> float:
    """Sum of singular values of a square matrix."""
    a = as_complex_matrix(a)
    if a.shape[0] != a.shape[1]:
        raise NonSquare(f"matrix is {a.shape[0]}x{a.shape[1]}")
    return float(np.linalg.svd(a, compute_uv=False).sum())


def expm(a, t: float = 1.0) -> np.ndarray:
    """exp(t*A) by scaling and squaring (scipy core).

    Satisfies the semigroup identity expm(A,s) @ expm(A,t) = expm(A,s+t)
    to 1e-10 for ||tA|| up to around 20.
    """
    a = as_complex_matrix(a)
    if a.shape[0] != a.shape[1]:
        raise NonSquare(f"matrix is {a.shape[0]}x{a.shape[1]}")
    return scipy.linalg.expm(t * a)


def conjugacy_shift(x, y, rtol: float = HERM_RTOL):
    """Scalar shift aligning the spectra of two Hermitian matrices.

    Returns the unique real lambda with spec(X) + lambda = spec(Y) as sorted
    multisets (entrywise within tolerance), or None when the spectra are not
    translates of one another.  Such a lambda exists exactly when X and Y
    generate conjugate one-parameter unitary groups, W X W* = Y + lambda 1.
    """
    x = require_hermitian(x, rtol)
    y = require_hermitian(y, rtol)
    if x.shape != y.shape:
        raise DimensionMismatch(f"shapes {x.shape} and {y.shape} differ")
    sx, _ = eig_descending(x, rtol)
    sy, _ = eig_descending(y, rtol)
    # the only candidate: spectra are translates iff their means are
    lam = float(np.mean(sy) - np.mean(sx))
    tol = 1e-8 * max(1.0, np.abs(sx).max(initial=0.0), np.abs(sy).max(initial=0.0))
    if np.max(np.abs(sx + lam - sy)) <= tol:
        return lam
    return None
