"""Eigenvalue-list calculus.

An eigenvalue list is a nonincreasing sequence of nonnegative reals with
finite sum, stored as its finite prefix (trailing zeros implicit).  Lists of
different lengths compare by padding the shorter one with zeros.  The module
provides the tensor rearrangement of two lists, the l1 distance between
lists, and the interaction lower bound obtained by comparing tensor squares.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import NotNormalized, TruncationLoss

__all__ = ["EigenvalueList", "tensor_product", "l1_distance", "interaction_lower_bound"]

_NEG_TOL = 1e-12
_NORM_TOL = 1e-12


@dataclass(frozen=True)
class EigenvalueList:
    """Finite prefix of a nonincreasing nonnegative sequence.

    Input values are sorted nonincreasing; entries within 1e-12 below zero
    are clipped to zero, anything more negative is rejected.  Trailing zeros
    are trimmed (they are implicit).
    """

    values: np.ndarray = field()

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float).ravel()
        if v.size and v.min() < -_NEG_TOL:
            raise ValueError(f"negative entry {v.min():.3e} in eigenvalue list")
        v = np.clip(v, 0.0, None)
        v = np.sort(v)[::-1]
        nz = np.nonzero(v)[0]
        v = v[: nz[-1] + 1] if nz.size else np.zeros(0)
        object.__setattr__(self, "values", v)

    @classmethod
    def uniform(cls, p: int) -> "EigenvalueList":
        """The list 1/p repeated p times."""
        return cls(np.full(p, 1.0 / p))

    def __len__(self) -> int:
        return self.values.size

    def __getitem__(self, k: int) -> float:
        return float(self.values[k]) if k < self.values.size else 0.0

    def total(self) -> float:
        return float(self.values.sum())

    @property
    def normalized(self) -> bool:
        return abs(self.total() - 1.0) <= _NORM_TOL

    def padded(self, n: int) -> np.ndarray:
        out = np.zeros(max(n, len(self)))
        out[: len(self)] = self.values
        return out


def tensor_product(a: EigenvalueList, b: EigenvalueList, max_terms: int | None = None) -> EigenvalueList:
    """All pairwise products of two lists, rearranged nonincreasing.

    Exact by default; ``max_terms`` may truncate, but raises TruncationLoss
    if that would drop a nonzero product.
    """
    prods = np.outer(a.values, b.values).ravel()
    prods = np.sort(prods)[::-1]
    if max_terms is not None and max_terms < prods.size:
        if np.any(prods[max_terms:] > 0.0):
            raise TruncationLoss(
                f"max_terms={max_terms} would drop {np.count_nonzero(prods[max_terms:])} nonzero products"
            )
        prods = prods[:max_terms]
    return EigenvalueList(prods)


def l1_distance(a: EigenvalueList, b: EigenvalueList) -> float:
    """Sum of |a_k - b_k| with the shorter list padded by zeros."""
    n = max(len(a), len(b))
    return float(np.abs(a.padded(n) - b.padded(n)).sum())


def interaction_lower_bound(minus: EigenvalueList, plus: EigenvalueList) -> float:
    """l1 distance between the tensor squares of two normalized lists.

    This is the computable lower bound for the strength of an interaction
    whose past and future absorbing states have the given eigenvalue lists.
    """
    for name, lam in (("minus", minus), ("plus", plus)):
        if not lam.normalized:
            raise NotNormalized(f"{name} list sums to {lam.total()!r}, expected 1")
    return l1_distance(tensor_product(minus, minus), tensor_product(plus, plus))
