"""Random instance samplers shared by the test suite and CLI sweeps.

Everything takes an explicit ``numpy.random.Generator`` so runs are
reproducible from a single seed.
"""

from __future__ import annotations

import numpy as np

from .cpdyn import CPMap, GKLSGenerator
from .eigenlists import EigenvalueList
from .opalg import DensityMatrix, adjoint


def complex_gaussian(rng, *shape) -> np.ndarray:
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


def hermitian(rng, n: int, scale: float = 1.0) -> np.ndarray:
    a = complex_gaussian(rng, n, n)
    return scale * (a + adjoint(a)) / 2


def haar_unitary(rng, n: int) -> np.ndarray:
    q, r = np.linalg.qr(complex_gaussian(rng, n, n))
    return q * (np.diag(r) / np.abs(np.diag(r)))


def density(rng, n: int) -> DensityMatrix:
    a = complex_gaussian(rng, n, n)
    m = a @ adjoint(a)
    return DensityMatrix(m / np.trace(m))


def isometry(rng, rows: int, cols: int) -> np.ndarray:
    """Haar-style isometry with orthonormal columns, rows >= cols."""
    q, r = np.linalg.qr(complex_gaussian(rng, rows, cols))
    return q * (np.diag(r) / np.abs(np.diag(r)))


def unital_cp_map(rng, n: int, r: int) -> CPMap:
    """Random unital CP map with r Kraus operators (stacked Haar isometry)."""
    v = isometry(rng, n * r, n)
    return CPMap(tuple(v[i * n : (i + 1) * n, :] for i in range(r)))


def unital_generator(rng, n: int, jumps: int = 1, scale: float = 1.0) -> GKLSGenerator:
    return GKLSGenerator(
        hermitian(rng, n, scale),
        tuple(scale * complex_gaussian(rng, n, n) / np.sqrt(n) for _ in range(jumps)),
    )


def spectrum_list(rng, n: int) -> EigenvalueList:
    """Strictly positive normalized eigenvalue list of length n."""
    w = rng.dirichlet(np.ones(n))
    w = np.clip(w, 1e-6, None)
    return EigenvalueList(w / w.sum())


def coinvariant_pair(rng, n: int, k: int, r: int):
    """A unital CP map together with a rank-k coinvariant projection.

    The Stinespring isometry sends the range of p into range(p) (x) C^r, so
    every Kraus operator maps range(p) into itself.
    """
    p = np.zeros((n, n), dtype=np.complex128)
    p[:k, :k] = np.eye(k)
    v = np.zeros((n * r, n), dtype=np.complex128)
    # columns for range(p): land inside range(p) (x) C^r
    vp = isometry(rng, k * r, k)
    rows_p = [i * r + m for i in range(k) for m in range(r)]
    v[np.ix_(rows_p, range(k))] = vp
    # remaining columns: complete to an isometry in the orthocomplement
    raw = complex_gaussian(rng, n * r, n - k)
    raw -= v[:, :k] @ (adjoint(v[:, :k]) @ raw)
    q, rr = np.linalg.qr(raw)
    v[:, k:] = q * (np.diag(rr) / np.abs(np.diag(rr)))
    # row (i, m) = i*r + m of v is row i of Kraus operator m
    kraus = tuple(v[m::r, :] for m in range(r))
    return CPMap(kraus), p
