"""The *-semigroup of distinct-neighbor time words and its section algebra.

Words are finite sequences of nonnegative rational times with no equal
adjacent entries; they multiply by conditional concatenation (a repeated
boundary time is dropped) and star by reversal.  A section assigns to
finitely many words formal sums of elementary matrix tensors, one factor
per word letter.  Sections convolve, star, shift, and map to matrices
through the conditional expectation built on moment polynomials.

Times are exact rationals so that the distinct-neighbor predicate and the
boundary merges are exact; floats are read through their decimal literal.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .errors import DimensionMismatch
from .moments import SemigroupHandle, moment
from .opalg import adjoint, as_complex_matrix

__all__ = ["as_time", "FreeWord", "Section", "word_mul", "word_star", "section_mul",
           "shift_section", "expect_E0", "theta"]


def as_time(x) -> Fraction:
    """Canonicalize a time entry to an exact nonnegative rational."""
    if isinstance(x, Fraction):
        t = x
    elif isinstance(x, int):
        t = Fraction(x)
    elif isinstance(x, float):
        t = Fraction(str(x))  # decimal literal, so 0.5 means 1/2
    elif isinstance(x, str):
        t = Fraction(x)
    else:
        raise TypeError(f"cannot read a rational time from {type(x).__name__}")
    if t < 0:
        raise ValueError(f"time entries must be nonnegative, got {t}")
    return t


@dataclass(frozen=True)
class FreeWord:
    """A finite time word with distinct neighbors."""

    times: tuple = field()

    def __post_init__(self):
        ts = tuple(as_time(t) for t in self.times)
        if not ts:
            raise ValueError("words are nonempty")
        if any(a == b for a, b in zip(ts, ts[1:])):
            raise ValueError(f"equal adjacent entries in word {ts}")
        object.__setattr__(self, "times", ts)

    def __len__(self) -> int:
        return len(self.times)

    def floats(self) -> list:
        return [float(t) for t in self.times]


def word_mul(s: FreeWord, t: FreeWord) -> FreeWord:
    """Conditional concatenation: a repeated boundary entry is dropped."""
    if s.times[-1] == t.times[0]:
        return FreeWord(s.times + t.times[1:])
    return FreeWord(s.times + t.times)


def word_star(s: FreeWord) -> FreeWord:
    return FreeWord(tuple(reversed(s.times)))


@dataclass(frozen=True)
class Section:
    """Finitely supported section of the fibered tensor algebra.

    ``terms`` maps each word to a tuple of elementary tensors; an elementary
    tensor is a tuple of dim x dim matrices whose length equals the word
    length.  Fibers stay formal: no basis reduction is performed except for
    the matrix products created by boundary merges.
    """

    dim: int
    terms: dict = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for word, tensors in self.terms.items():
            if not isinstance(word, FreeWord):
                word = FreeWord(tuple(word))
            fixed = []
            for tensor in tensors:
                mats = tuple(as_complex_matrix(a) for a in tensor)
                if len(mats) != len(word):
                    raise DimensionMismatch(
                        f"tensor of length {len(mats)} on a word of length {len(word)}"
                    )
                if any(a.shape != (self.dim, self.dim) for a in mats):
                    raise DimensionMismatch(f"tensor factors must be {self.dim}x{self.dim}")
                fixed.append(mats)
            if fixed:
                clean[word] = clean.get(word, ()) + tuple(fixed)
        object.__setattr__(self, "terms", clean)

    @classmethod
    def delta(cls, word, *mats, dim=None) -> "Section":
        """The generator delta_word . a_1 (x) ... (x) a_k."""
        if not isinstance(word, FreeWord):
            word = FreeWord(tuple(word))
        mats = tuple(as_complex_matrix(a) for a in mats)
        if dim is None:
            dim = mats[0].shape[0]
        return cls(dim=dim, terms={word: (mats,)})

    def norm_upper(self) -> float:
        """l1-type bound: sum over tensors of the product of operator norms.

        This upper-bounds the projective norm of each fiber; it is reported
        as a bound, not the exact norm.
        """
        total = 0.0
        for tensors in self.terms.values():
            for tensor in tensors:
                total += float(np.prod([np.linalg.norm(a, 2) for a in tensor]))
        return total

    def star(self) -> "Section":
        """f*(mu) = f(mu*)* : reverse each word and each tensor, adjoint factors."""
        out = {}
        for word, tensors in self.terms.items():
            rw = word_star(word)
            flipped = tuple(tuple(adjoint(a) for a in reversed(tensor)) for tensor in tensors)
            out[rw] = out.get(rw, ()) + flipped
        return Section(dim=self.dim, terms=out)

    def add(self, other: "Section") -> "Section":
        if self.dim != other.dim:
            raise DimensionMismatch("section dimensions differ")
        out = dict(self.terms)
        for word, tensors in other.terms.items():
            out[word] = out.get(word, ()) + tensors
        return Section(dim=self.dim, terms=out)

    def scale(self, c) -> "Section":
        out = {
            word: tuple((c * tensor[0],) + tensor[1:] for tensor in tensors)
            for word, tensors in self.terms.items()
        }
        return Section(dim=self.dim, terms=out)

    def dense_fibers(self) -> dict:
        """Each fiber flattened to its full Kronecker tensor (testing aid)."""
        out = {}
        for word, tensors in self.terms.items():
            total = None
            for tensor in tensors:
                dense = tensor[0]
                for a in tensor[1:]:
                    dense = np.kron(dense, a)
                total = dense if total is None else total + dense
            out[word] = total
        return out


def theta(t, a) -> Section:
    """The canonical copy of the algebra at time t: delta_(t) . a."""
    return Section.delta(FreeWord((t,)), a)


def section_mul(f: Section, g: Section) -> Section:
    """Convolution: (f*g)(nu) = sum over factorizations nu = lambda.mu.

    When the boundary times merge, the adjacent tensor factors multiply.
    """
    if f.dim != g.dim:
        raise DimensionMismatch("section dimensions differ")
    out = {}
    for wl, tl in f.terms.items():
        for wr, tr in g.terms.items():
            word = word_mul(wl, wr)
            merged = wl.times[-1] == wr.times[0]
            prods = []
            for a in tl:
                for b in tr:
                    if merged:
                        prods.append(a[:-1] + (a[-1] @ b[0],) + b[1:])
                    else:
                        prods.append(a + b)
            out[word] = out.get(word, ()) + tuple(prods)
    return Section(dim=f.dim, terms=out)


def shift_section(f: Section, t) -> Section:
    """Time shift sigma_t: every word entry is translated by t."""
    t = as_time(t)
    out = {}
    for word, tensors in f.terms.items():
        shifted = FreeWord(tuple(s + t for s in word.times))
        out[shifted] = out.get(shifted, ()) + tensors
    return Section(dim=f.dim, terms=out)


def expect_E0(f: Section, sg: SemigroupHandle) -> np.ndarray:
    """Conditional expectation onto the time-zero copy.

    Linear extension of delta_(t_1..t_k) . a_1 (x) .. (x) a_k  |->
    [t_1,..,t_k; a_1,..,a_k]; contractive for contractive semigroups.
    """
    if sg.dim != f.dim:
        raise DimensionMismatch(f"section dim {f.dim} but semigroup dim {sg.dim}")
    acc = np.zeros((f.dim, f.dim), dtype=np.complex128)
    for word, tensors in f.terms.items():
        ts = word.floats()
        for tensor in tensors:
            acc += moment(sg, ts, list(tensor))
    return acc
