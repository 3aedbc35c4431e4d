"""Stinespring dilation and brute-force Kraus-word expectations.

``stinespring`` produces the minimal isometry V with phi(a) = V*(a (x) 1_r)V,
r the Choi rank.  ``kraus_word_expectation`` evaluates the n-point
expectation of a discrete dilation by exhaustively enumerating Kraus words,
with no appeal to the moment recursion; it exists purely as an independent
oracle against which the moment evaluators are checked.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

import numpy as np

from .cpdyn import CPMap, choi
from .errors import BudgetExceeded, DimensionMismatch, NotCP, NotProjection, NotSorted, NotUnital
from .opalg import adjoint, as_complex_matrix

__all__ = ["StinespringTriple", "stinespring", "kraus_word_expectation", "projection_class"]

WORD_BUDGET = 10**6


@dataclass(frozen=True)
class StinespringTriple:
    """Minimal dilation data: isometry v (n -> n*r), Choi rank r, minimal Kraus family.

    After the canonical identification, v*(a (x) 1_r)v reproduces the map;
    v*v = 1 exactly when the map is unital (in general v*v = phi(1)).
    """

    v: np.ndarray
    rep_rank: int
    kraus: tuple

    @property
    def dim(self) -> int:
        return self.v.shape[1]

    def conjugate(self, a) -> np.ndarray:
        """v* (a (x) 1_r) v."""
        a = as_complex_matrix(a)
        return adjoint(self.v) @ np.kron(a, np.eye(self.rep_rank)) @ self.v


def stinespring(phi: CPMap, unital: bool = False, rank_rtol: float = 1e-9) -> StinespringTriple:
    """Minimal Stinespring decomposition of a CP map.

    The representation rank equals the Choi rank (eigenvalues above
    ``rank_rtol`` of the largest); reconstruction residual stays below 1e-9.
    """
    n = phi.dim
    if unital and not phi.unital:
        raise NotUnital("map is not unital within 1e-10")
    c = choi(phi)
    w, vecs = np.linalg.eigh((c + adjoint(c)) / 2)
    wmax = w.max()
    if wmax <= 0 or w.min() < -rank_rtol * max(wmax, 1.0):
        raise NotCP(f"Choi matrix has eigenvalue {w.min():.3e}, map is not CP")
    keep = [m for m in range(w.size) if w[m] > rank_rtol * wmax]
    # Choi eigenvectors encode Kraus operators: C = sum_m y_m y_m* with
    # y = sum_i e_i (x) (K* e_i), so K = conj(reshape(y)).
    kraus = tuple(np.conj((np.sqrt(w[m]) * vecs[:, m]).reshape(n, n)) for m in keep)
    r = len(kraus)
    v = np.zeros((n * r, n), dtype=np.complex128)
    for m, k in enumerate(kraus):
        for i in range(n):
            v[i * r + m, :] = k[i, :]
    return StinespringTriple(v=v, rep_rank=r, kraus=kraus)


def _words(kraus, length):
    """All products K_{w_1} ... K_{w_len}, enumerated depth first."""
    n = kraus[0].shape[0]
    out = []

    def walk(depth, prefix):
        if depth == length:
            out.append(prefix)
            return
        for k in kraus:
            walk(depth + 1, prefix @ k)

    walk(0, np.eye(n, dtype=np.complex128))
    return out


def kraus_word_expectation(phi: CPMap, times, mats) -> np.ndarray:
    """n-point expectation at integer times by exhaustive word summation.

    With gaps d_0 = t_1, d_j = t_{j+1} - t_j, sums over all word tuples
    (w_0,..,w_{k-1}) of lengths (d_0,..,d_{k-1}) the products
    K_{w_0}* a_1 K_{w_1}* a_2 ... a_k K_{w_{k-1}} ... K_{w_0}.
    The joint enumeration is capped at 10^6 words.
    """
    if not phi.unital:
        raise NotUnital("word expectation requires a unital Kraus family")
    ts = list(times)
    mats = [as_complex_matrix(a) for a in mats]
    if len(ts) != len(mats) or not ts:
        raise DimensionMismatch(f"{len(ts)} times but {len(mats)} matrices")
    n = phi.dim
    if any(a.shape != (n, n) for a in mats):
        raise DimensionMismatch(f"matrices must be {n}x{n}")
    ints = [int(round(t)) for t in ts]
    if any(abs(t - i) > 1e-12 or i < 0 for t, i in zip(ts, ints)):
        raise ValueError(f"times must be nonnegative integers, got {ts}")
    if any(b < a for a, b in zip(ints, ints[1:])):
        raise NotSorted(f"times {ints} are not nondecreasing")
    r = len(phi.kraus)
    total = r ** ints[-1]
    if total > WORD_BUDGET:
        raise BudgetExceeded(f"{total} words exceed the budget of {WORD_BUDGET}")

    gaps = [ints[0]] + [b - a for a, b in zip(ints, ints[1:])]
    level_words = [_words(phi.kraus, d) for d in gaps]
    acc = np.zeros((n, n), dtype=np.complex128)
    for combo in product(*level_words):
        left = adjoint(combo[0])
        for g, a in zip(combo[1:], mats[:-1]):
            left = left @ a @ adjoint(g)
        right = np.eye(n, dtype=np.complex128)
        for g in combo:
            right = g @ right
        acc += left @ mats[-1] @ right
    return acc


def projection_class(alpha_step, p, tol: float = 1e-10) -> dict:
    """Classify a projection under one unital CP step.

    Returns ``{"increasing": bool, "coinvariant": bool}`` where increasing
    means alpha(p) >= p and coinvariant means alpha(1-p) <= 1-p, both up to
    a PSD tolerance.  ``alpha_step`` may be a CPMap or a callable on matrices.
    """
    p = as_complex_matrix(p)
    if np.linalg.norm(p @ p - p, 2) > 1e-10 or np.linalg.norm(p - adjoint(p), 2) > 1e-10:
        raise NotProjection("p is not an orthogonal projection within 1e-10")
    step = alpha_step  # CPMap or any matrix-to-matrix callable
    one = np.eye(p.shape[0])
    inc = np.linalg.eigvalsh(step(p) - p).min() >= -tol
    coinv = np.linalg.eigvalsh((one - p) - step(one - p)).min() >= -tol
    return {"increasing": bool(inc), "coinvariant": bool(coinv)}
