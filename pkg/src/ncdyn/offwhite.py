"""Off-white-noise numerics.

The correlation kernel C(t) = 1/(|t| |log|t||^theta) near zero is extended
beyond a matching point delta by its tangent line, clipped at zero.  The
extension keeps C even, nonincreasing and convex on the positive axis
(Polya's criterion), hence positive definite, and makes the support radius
epsilon computable as the tangent's zero crossing.

On a uniform grid the inner product <f, g> = integral (C * f) conj(g) turns
cell indicators into a Toeplitz Gram assembled from tent-weight integrals;
the singular factor integral dt / (t L^theta) has the exact antiderivative
L^{1-theta} / (theta - 1) and the remaining smooth factor is integrated
after the substitution s = -log t.

The Gaussian half of the module works purely with Gram matrices: the
Feldman-Hajek change-of-measure operator, quasiorthogonal straightening,
the Kakutani geometric mean of discrete measures, and the inner product of
the L2 space of a measure class.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import quad
from scipy.linalg import toeplitz

from .errors import (
    AtomMismatch,
    AtZero,
    BadGrid,
    DimensionMismatch,
    InvalidCorrelation,
    OverlappingIntervals,
    SingularGram,
    SumMapSingular,
)
from .opalg import adjoint, as_complex_matrix

__all__ = [
    "CorrelationSpec",
    "GramOperator",
    "DiscreteMeasure",
    "GaussianGramPair",
    "correlation_value",
    "gram_matrix",
    "quasiorthogonality_diagnostic",
    "kakutani_mean",
    "mc_inner",
    "feldman_hajek_B",
    "straighten",
    "sum_map_gram",
    "equivalence_defect",
]

QUAD_ABS_TOL = 1e-13


@dataclass(frozen=True)
class CorrelationSpec:
    """Correlation kernel parameters: exact formula on (0, delta], tangent after.

    Requires theta > 1 and a matching point small enough that the formula is
    still decreasing there (delta < e^-theta) and the tangent's zero
    crossing epsilon lands below 1.
    """

    theta: float = 2.0
    delta: float = 0.05

    def __post_init__(self):
        if not self.theta > 1.0:
            raise InvalidCorrelation(f"theta must exceed 1, got {self.theta}")
        if not 0.0 < self.delta < 1.0:
            raise InvalidCorrelation(f"delta must lie in (0,1), got {self.delta}")
        if self.tangent_slope >= 0.0:
            raise InvalidCorrelation(
                f"formula is not decreasing at delta={self.delta}; need delta < e^-theta = {math.exp(-self.theta):.4g}"
            )
        if not self.epsilon < 1.0:
            raise InvalidCorrelation(f"support radius epsilon = {self.epsilon:.4g} must be < 1")

    @property
    def corner_value(self) -> float:
        ell = -math.log(self.delta)
        return 1.0 / (self.delta * ell**self.theta)

    @property
    def tangent_slope(self) -> float:
        ell = -math.log(self.delta)
        return (self.theta / ell - 1.0) / (self.delta**2 * ell**self.theta)

    @property
    def epsilon(self) -> float:
        """Zero crossing of the tangent continuation; C vanishes beyond it."""
        return self.delta - self.corner_value / self.tangent_slope


def correlation_value(spec: CorrelationSpec, t: float) -> float:
    """C(t): exact formula on (0, delta], clipped tangent after, even in t."""
    if t == 0.0:
        raise AtZero("the correlation kernel is singular at 0")
    x = abs(float(t))
    if x <= spec.delta:
        return 1.0 / (x * (-math.log(x)) ** spec.theta)
    return max(0.0, spec.corner_value + spec.tangent_slope * (x - spec.delta))


# piecewise integrals of C and of u*C(u) over [a, b] in the positive axis


def _int_c(spec: CorrelationSpec, a: float, b: float) -> float:
    """integral_a^b C(u) du for 0 <= a <= b."""
    theta, delta = spec.theta, spec.delta
    total = 0.0
    lo, hi = a, min(b, delta)
    if hi > lo:
        # exact: d/dt [(-log t)^(1-theta) / (theta-1)] = C(t)
        def f(t):
            return (-math.log(t)) ** (1.0 - theta) / (theta - 1.0) if t > 0.0 else 0.0

        total += f(hi) - f(lo)
    lo, hi = max(a, delta), min(b, spec.epsilon)
    if hi > lo:
        c0, c1 = spec.corner_value, spec.tangent_slope
        total += c0 * (hi - lo) + 0.5 * c1 * ((hi - delta) ** 2 - (lo - delta) ** 2)
    return total


def _int_uc(spec: CorrelationSpec, a: float, b: float) -> float:
    """integral_a^b u C(u) du for 0 <= a <= b."""
    theta, delta = spec.theta, spec.delta
    total = 0.0
    lo, hi = a, min(b, delta)
    if hi > lo:
        # integral dt / (-log t)^theta, substitute s = -log t
        s_lo = -math.log(hi)
        s_hi = -math.log(lo) if lo > 0.0 else np.inf
        val, _ = quad(lambda s: math.exp(-s) * s ** (-theta), s_lo, s_hi,
                      epsabs=QUAD_ABS_TOL, epsrel=1e-12, limit=200)
        total += val
    lo, hi = max(a, delta), min(b, spec.epsilon)
    if hi > lo:
        c0, c1 = spec.corner_value, spec.tangent_slope
        total += 0.5 * c0 * (hi**2 - lo**2) + c1 * (
            (hi**3 - lo**3) / 3.0 - 0.5 * delta * (hi**2 - lo**2)
        )
    return total


def _tent_weights(spec: CorrelationSpec, h: float, kmax: int) -> np.ndarray:
    """w[k] = integral C(u) (h - |u - k h|)_+ du, the cell-pair overlap integrals."""
    w = np.zeros(kmax + 1)
    cut = int(math.floor(spec.epsilon / h)) + 1
    w[0] = 2.0 * (h * _int_c(spec, 0.0, h) - _int_uc(spec, 0.0, h))
    for k in range(1, min(kmax, cut) + 1):
        lo, mid, hi = (k - 1) * h, k * h, (k + 1) * h
        rising = _int_uc(spec, lo, mid) - lo * _int_c(spec, lo, mid)
        falling = hi * _int_c(spec, mid, hi) - _int_uc(spec, mid, hi)
        w[k] = rising + falling
    return w


@dataclass(frozen=True)
class GramOperator:
    """Discretized inner-product matrix of cell indicators on a uniform grid."""

    left: float
    right: float
    n: int
    entries: np.ndarray = field()

    def __post_init__(self):
        m = np.asarray(self.entries, dtype=float)
        if m.shape != (self.n, self.n):
            raise BadGrid(f"entries are {m.shape}, expected {(self.n, self.n)}")
        if np.abs(m - m.T).max() > 1e-12 * max(1.0, np.abs(m).max()):
            raise BadGrid("Gram matrix is not symmetric")
        w = np.linalg.eigvalsh(m)
        if w.min() < -1e-8 * max(1.0, w.max()):
            raise BadGrid(f"Gram matrix eigenvalue {w.min():.3e} below tolerance")
        object.__setattr__(self, "entries", m)

    @property
    def h(self) -> float:
        return (self.right - self.left) / self.n


def gram_matrix(spec: CorrelationSpec, left: float, right: float, n: int) -> GramOperator:
    """Gram of the n cell indicators of [left, right] in the C inner product.

    Entries depend only on the index difference, so the matrix is Toeplitz
    and invariant under translating the grid.
    """
    if n <= 0 or not right > left:
        raise BadGrid(f"need right > left and n > 0, got [{left}, {right}] with n={n}")
    h = (right - left) / n
    w = _tent_weights(spec, h, n - 1)
    return GramOperator(left=left, right=right, n=n, entries=toeplitz(w))


def _inv_sqrt(m: np.ndarray) -> np.ndarray:
    w, v = np.linalg.eigh(m)
    if w.min() <= 0.0:
        raise BadGrid(f"interval Gram is not positive definite (min eig {w.min():.3e})")
    return (v / np.sqrt(w)) @ v.T


def quasiorthogonality_diagnostic(spec: CorrelationSpec, intervals, refinements) -> list:
    """Defect report for the sum map of discretized interval subspaces.

    Each interval is cut into cells on a lattice common to all intervals;
    each interval's cell subspace is orthonormalized in the C inner product,
    and L is the map summing the subspaces.  Per refinement n the report row
    carries sigma_min(L) and the Hilbert-Schmidt defect ||1 - L*L||.  This
    is a bounded-defect diagnostic computed on finite grids, not a proof of
    quasiorthogonality of the continuum subspaces.
    """
    iv = [(float(a), float(b)) for a, b in intervals]
    if any(not b > a for a, b in iv):
        raise BadGrid(f"degenerate interval in {iv}")
    iv.sort()
    for (a1, b1), (a2, b2) in zip(iv, iv[1:]):
        if b1 > a2 + 1e-12:
            raise OverlappingIntervals(f"intervals ({a1},{b1}) and ({a2},{b2}) overlap")
    rows = []
    for n in refinements:
        n = int(n)
        if n <= 0:
            raise BadGrid(f"refinement must be positive, got {n}")
        h = (iv[0][1] - iv[0][0]) / n
        starts, counts = [], []
        for a, b in iv:
            cells = (b - a) / h
            off = (a - iv[0][0]) / h
            if abs(cells - round(cells)) > 1e-9 or abs(off - round(off)) > 1e-9:
                raise BadGrid(
                    f"interval ({a},{b}) is not commensurate with the cell width {h}"
                )
            starts.append(int(round(off)))
            counts.append(int(round(cells)))
        kmax = max(s + c for s, c in zip(starts, counts)) - min(starts) - 1
        w = _tent_weights(spec, h, kmax)
        blocks = []
        for m, (sm, cm) in enumerate(zip(starts, counts)):
            row = []
            for l, (sl, cl) in enumerate(zip(starts, counts)):
                offs = np.abs((sm + np.arange(cm))[:, None] - (sl + np.arange(cl))[None, :])
                row.append(w[offs])
            blocks.append(row)
        whiteners = [_inv_sqrt(blocks[m][m]) for m in range(len(iv))]
        tt = np.block(
            [[whiteners[m] @ blocks[m][l] @ whiteners[l] for l in range(len(iv))]
             for m in range(len(iv))]
        )
        eigs = np.linalg.eigvalsh((tt + tt.T) / 2)
        rows.append(
            {
                "n": n,
                "sigma_min": float(np.sqrt(max(eigs.min(), 0.0))),
                "hs_defect": float(np.linalg.norm(np.eye(tt.shape[0]) - tt, "fro")),
            }
        )
    return rows


@dataclass(frozen=True)
class DiscreteMeasure:
    """Finite positive measure on a finite labeled atom set."""

    atoms: tuple
    weights: np.ndarray = field()

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=float).ravel()
        if w.size != len(self.atoms):
            raise AtomMismatch(f"{len(self.atoms)} atoms but {w.size} weights")
        if w.size and (w.min() < 0.0 or not np.all(np.isfinite(w))):
            raise ValueError("weights must be finite and nonnegative")
        object.__setattr__(self, "atoms", tuple(self.atoms))
        object.__setattr__(self, "weights", w)

    def total(self) -> float:
        return float(self.weights.sum())


def _require_same_atoms(mu: DiscreteMeasure, nu: DiscreteMeasure):
    if mu.atoms != nu.atoms:
        raise AtomMismatch(f"atom sets differ: {mu.atoms} vs {nu.atoms}")


def kakutani_mean(mu: DiscreteMeasure, nu: DiscreteMeasure) -> DiscreteMeasure:
    """Geometric mean sqrt(mu nu): atomwise sqrt(mu({x}) nu({x})).

    Equals sqrt(uv) (mu + nu) for the Radon-Nikodym derivatives u, v with
    respect to mu + nu; the largest measure obeying the Cauchy-Schwarz
    domination.
    """
    _require_same_atoms(mu, nu)
    return DiscreteMeasure(mu.atoms, np.sqrt(mu.weights * nu.weights))


def _values_on(atoms, f) -> np.ndarray:
    if isinstance(f, dict):
        return np.array([f[a] for a in atoms], dtype=np.complex128)
    v = np.asarray(f, dtype=np.complex128).ravel()
    if v.size != len(atoms):
        raise AtomMismatch(f"{len(atoms)} atoms but {v.size} values")
    return v


def mc_inner(f, mu: DiscreteMeasure, g, nu: DiscreteMeasure) -> complex:
    """<f sqrt(mu), g sqrt(nu)> = sum f conj(g) d sqrt(mu nu)."""
    _require_same_atoms(mu, nu)
    fv = _values_on(mu.atoms, f)
    gv = _values_on(nu.atoms, g)
    return complex(np.sum(fv * gv.conj() * kakutani_mean(mu, nu).weights))


@dataclass(frozen=True)
class GaussianGramPair:
    """Gram matrices of one basis under two equivalent Gaussian structures."""

    gp: np.ndarray
    gq: np.ndarray

    def __post_init__(self):
        gp = as_complex_matrix(self.gp)
        gq = as_complex_matrix(self.gq)
        if gp.shape != gq.shape or gp.shape[0] != gp.shape[1]:
            raise DimensionMismatch(f"Gram shapes {gp.shape} and {gq.shape}")
        for name, m in (("P", gp), ("Q", gq)):
            if np.linalg.norm(m - adjoint(m), 2) > 1e-10 * max(1.0, np.linalg.norm(m, 2)):
                raise SingularGram(f"{name} Gram is not Hermitian")
            w = np.linalg.eigvalsh((m + adjoint(m)) / 2)
            if w.min() <= 1e-10 * max(1.0, w.max()):
                raise SingularGram(f"{name} Gram is not positive definite within 1e-10")
        object.__setattr__(self, "gp", gp)
        object.__setattr__(self, "gq", gq)


def feldman_hajek_B(pair: GaussianGramPair, residual_tol: float = 1e-10) -> np.ndarray:
    """Matrix of the operator B with <B z_i, z_j>_P = <z_i, z_j>_Q.

    B is positive and invertible for the P inner product; for genuinely
    equivalent Gaussian structures B - 1 is small in Hilbert-Schmidt norm.
    """
    gp, gq = pair.gp, pair.gq
    try:
        b = np.linalg.solve(gp.conj(), gq.conj())
    except np.linalg.LinAlgError as exc:
        raise SingularGram(f"P Gram is singular: {exc}") from exc
    residual = np.linalg.norm(gp.T @ b - gq.T, 2)
    if residual > residual_tol * max(1.0, np.linalg.norm(gq, 2)):
        raise SingularGram(f"change-of-inner-product solve left residual {residual:.3e}")
    return b


def sum_map_gram(gp_m: np.ndarray, gp_n: np.ndarray, cross: np.ndarray) -> np.ndarray:
    """L*L of the sum map M + N in orthonormal coordinates of M (+) N."""
    gp_m = as_complex_matrix(gp_m)
    gp_n = as_complex_matrix(gp_n)
    cross = as_complex_matrix(cross)
    p, q = gp_m.shape[0], gp_n.shape[0]
    if cross.shape != (p, q):
        raise DimensionMismatch(f"cross Gram is {cross.shape}, expected {(p, q)}")
    joint = np.block([[gp_m, cross], [adjoint(cross), gp_n]])
    dom = np.block(
        [[gp_m, np.zeros((p, q), dtype=np.complex128)],
         [np.zeros((q, p), dtype=np.complex128), gp_n]]
    )
    wd, vd = np.linalg.eigh((dom + adjoint(dom)) / 2)
    if wd.min() <= 0.0:
        raise SingularGram("domain Gram is not positive definite")
    white = (vd / np.sqrt(wd)) @ adjoint(vd)
    return white @ joint @ white


def straighten(gp_m: np.ndarray, gp_n: np.ndarray, cross: np.ndarray,
               sigma_tol: float = 1e-10) -> np.ndarray:
    """Joint Gram of M + N under the straightening measure.

    The new inner product <x, y>_Q = <L^-1 x, L^-1 y> makes the sum map an
    isometry, keeps both marginal Grams, and makes M and N orthogonal, so
    the returned joint Gram is block diagonal.  Requires the sum map to be
    injective (sigma_min above ``sigma_tol``), else SumMapSingular.
    """
    tt = sum_map_gram(gp_m, gp_n, cross)
    smin = math.sqrt(max(np.linalg.eigvalsh((tt + adjoint(tt)) / 2).min(), 0.0))
    if smin <= sigma_tol:
        raise SumMapSingular(f"sum map has sigma_min = {smin:.3e}")
    p, q = gp_m.shape[0], gp_n.shape[0]
    out = np.zeros((p + q, p + q), dtype=np.complex128)
    out[:p, :p] = as_complex_matrix(gp_m)
    out[p:, p:] = as_complex_matrix(gp_n)
    return out


def equivalence_defect(l: np.ndarray) -> np.ndarray:
    """1 - L*L, the Hilbert-Schmidt defect of an equivalence operator."""
    l = as_complex_matrix(l)
    return np.eye(l.shape[1], dtype=np.complex128) - adjoint(l) @ l
