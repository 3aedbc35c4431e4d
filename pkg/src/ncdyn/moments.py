"""Moment polynomials of a CP semigroup.

Given a semigroup {P_t} on M_n, the moment polynomial [t_1,..,t_k; a_1,..,a_k]
is the unique multilinear family satisfying the two axioms

  MP1:  P_s([t_1,..,t_k; a]) = [t_1+s,..,t_k+s; a]
  MP2:  if t_l = 0 then [t; a] splits as [left] a_l [right]

The evaluator shifts by the minimum time (MP1) and then splits at the
leftmost zero (MP2); the canonical evaluation order is leftmost-zero, and
uniqueness makes every other splitting choice agree.  ``ordered_moment`` is
the nested closed form valid on sorted tuples, kept as an independent check.
"""

from __future__ import annotations

import numpy as np

from .cpdyn import CPMap, GKLSGenerator, apply_action, vec, unvec
from .errors import DimensionMismatch, LengthMismatch, NotSorted
from .opalg import as_complex_matrix, expm

__all__ = ["SemigroupHandle", "moment", "ordered_moment", "render_moment"]

TIME_TOL = 1e-12


class SemigroupHandle:
    """A semigroup t -> P_t, held as actions on column-stacked coordinates.

    The evaluator must satisfy P_0 = id and P_s P_t = P_{s+t}; both are
    spot-checked on construction (1e-12 and 1e-9 respectively).  Handles
    built from a CP map power only accept integer times.
    """

    def __init__(self, dim, action_of, integer_times=False, check=True):
        self.dim = dim
        self._action_of = action_of
        self.integer_times = integer_times
        self._cache = {}
        if check:
            self._validate()

    def _validate(self):
        eye = np.eye(self.dim * self.dim)
        if np.linalg.norm(self.action(0) - eye, 2) > 1e-12:
            raise ValueError("P_0 is not the identity within 1e-12")
        s, t = (1, 2) if self.integer_times else (0.3, 0.7)
        defect = np.linalg.norm(self.action(s) @ self.action(t) - self.action(s + t), 2)
        if defect > 1e-9 * max(1.0, np.linalg.norm(self.action(s + t), 2)):
            raise ValueError(f"semigroup identity fails by {defect:.3e} at sampled times")

    @classmethod
    def from_generator(cls, gen: GKLSGenerator, check: bool = True) -> "SemigroupHandle":
        act = gen.heisenberg_action()
        return cls(gen.dim, lambda t: expm(act, t), check=check)

    @classmethod
    def from_kraus_power(cls, phi: CPMap, check: bool = True) -> "SemigroupHandle":
        """Discrete semigroup P_t = phi^t on integer times."""
        base = phi.action_matrix()

        def action_of(t):
            k = int(round(t))
            if abs(t - k) > TIME_TOL or k < 0:
                raise ValueError(f"discrete semigroup evaluated at non-integer time {t}")
            return np.linalg.matrix_power(base, k)

        return cls(phi.dim, action_of, integer_times=True, check=check)

    def action(self, t) -> np.ndarray:
        key = round(float(t), 12)
        if key not in self._cache:
            self._cache[key] = self._action_of(float(t))
        return self._cache[key]

    def apply(self, t, a) -> np.ndarray:
        if abs(t) <= TIME_TOL:
            return as_complex_matrix(a)
        return apply_action(self.action(t), a)


def _check_args(sg, times, mats):
    times = [float(t) for t in times]
    if len(times) != len(mats):
        raise LengthMismatch(f"{len(times)} times but {len(mats)} matrices")
    if not times:
        raise LengthMismatch("need at least one time")
    if min(times) < -TIME_TOL:
        raise ValueError(f"negative time {min(times)}")
    mats = [as_complex_matrix(a) for a in mats]
    n = sg.dim
    if any(a.shape != (n, n) for a in mats):
        raise DimensionMismatch(f"matrices must be {n}x{n}")
    return times, mats


def moment(sg: SemigroupHandle, times, mats) -> np.ndarray:
    """Evaluate [t_1,..,t_k; a_1,..,a_k] by the MP1/MP2 recursion."""
    times, mats = _check_args(sg, times, mats)
    return _moment(sg, times, mats)


def _moment(sg, times, mats):
    if not times:
        return None  # empty product, acts as the scalar 1
    m = min(times)
    # entries within 1e-12 of the minimum count as the minimum
    shifted = [0.0 if t - m <= TIME_TOL else t - m for t in times]
    ell = shifted.index(0.0)
    left = _moment(sg, shifted[:ell], mats[:ell])
    right = _moment(sg, shifted[ell + 1 :], mats[ell + 1 :])
    out = mats[ell]
    if left is not None:
        out = left @ out
    if right is not None:
        out = out @ right
    if m > TIME_TOL:
        out = sg.apply(m, out)
    return out


def ordered_moment(sg: SemigroupHandle, times, mats) -> np.ndarray:
    """Closed form P_{t1}(a1 P_{t2-t1}(a2 ... P_{tk-t_{k-1}}(ak)...)) on sorted tuples."""
    times, mats = _check_args(sg, times, mats)
    if any(times[i + 1] < times[i] - TIME_TOL for i in range(len(times) - 1)):
        raise NotSorted(f"times {times} are not nondecreasing")
    out = mats[-1]
    for j in range(len(times) - 2, -1, -1):
        gap = max(times[j + 1] - times[j], 0.0)
        out = mats[j] @ sg.apply(gap, out)
    return sg.apply(times[0], out)


def render_moment(times, names=None) -> str:
    """Parenthesized evaluation string, e.g. 'P2(a.P1(P3(b).c.P1(d)))'.

    Runs the same recursion symbolically; matrix slots are named a, b, c, ...
    unless ``names`` is given.  The separator is a middle dot.
    """
    times = [float(t) for t in times]
    if names is None:
        names = [chr(ord("a") + i) for i in range(len(times))]
    if len(names) != len(times):
        raise LengthMismatch(f"{len(times)} times but {len(names)} names")

    def fmt(t):
        return str(int(round(t))) if abs(t - round(t)) <= TIME_TOL else format(t, "g")

    def rec(ts, ns):
        if not ts:
            return None
        m = min(ts)
        shifted = [0.0 if t - m <= TIME_TOL else t - m for t in ts]
        ell = shifted.index(0.0)
        parts = [rec(shifted[:ell], ns[:ell]), ns[ell], rec(shifted[ell + 1 :], ns[ell + 1 :])]
        s = "·".join(p for p in parts if p is not None)
        if m > TIME_TOL:
            s = f"P{fmt(m)}({s})"
        return s

    return rec(times, list(names))
