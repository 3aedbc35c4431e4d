"""Completely positive maps and semigroups on matrix algebras.

Linear maps on M_n are represented by their n^2 x n^2 action on the
column-stacked coordinate space (vec(XAY) = (Y^T (x) X) vec(A)), so a
semigroup step is a single matrix exponential.  Maps are held in the
Heisenberg picture, phi(a) = sum_i K_i* a K_i; the Schroedinger action is
the Hilbert-Schmidt adjoint.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import opalg
from .eigenlists import EigenvalueList
from .errors import DegenerateKernel, DimensionMismatch, InvalidList, NotCP, NotUnital
from .opalg import DensityMatrix, adjoint, as_complex_matrix

__all__ = [
    "vec",
    "unvec",
    "apply_action",
    "CPMap",
    "GKLSGenerator",
    "choi",
    "choi_of_action",
    "is_completely_positive",
    "evolve",
    "stationary_state",
    "generator_with_spectrum",
]


def vec(a: np.ndarray) -> np.ndarray:
    """Column-stack a matrix into a vector."""
    return np.asarray(a, dtype=np.complex128).reshape(-1, order="F")


def unvec(v: np.ndarray, n: int | None = None) -> np.ndarray:
    v = np.asarray(v, dtype=np.complex128).ravel()
    if n is None:
        n = int(round(np.sqrt(v.size)))
    return v.reshape((n, v.size // n), order="F")


def apply_action(action: np.ndarray, a: np.ndarray) -> np.ndarray:
    """Apply an n^2 x n^2 action matrix to an n x n matrix."""
    a = as_complex_matrix(a)
    return unvec(action @ vec(a), a.shape[0])


@dataclass(frozen=True)
class CPMap:
    """A completely positive contraction via its Kraus family.

    Heisenberg picture: phi(a) = sum_i K_i* a K_i.  Construction checks
    contractivity, sum K_i* K_i <= (1 + 1e-10) 1; Choi positivity comes for
    free with Kraus data and is certified separately by ``choi``.
    """

    kraus: tuple = field()

    def __post_init__(self):
        ks = tuple(as_complex_matrix(k) for k in self.kraus)
        if not ks:
            raise NotCP("empty Kraus family")
        n = ks[0].shape[0]
        if any(k.shape != (n, n) for k in ks):
            raise DimensionMismatch("Kraus operators must share one square shape")
        gram = sum(adjoint(k) @ k for k in ks)
        if np.linalg.norm(gram, 2) > 1.0 + 1e-10:
            raise NotCP(f"map is not contractive, ||phi(1)|| = {np.linalg.norm(gram, 2):.12f}")
        object.__setattr__(self, "kraus", ks)

    @property
    def dim(self) -> int:
        return self.kraus[0].shape[0]

    def __call__(self, a: np.ndarray) -> np.ndarray:
        a = as_complex_matrix(a)
        return sum(adjoint(k) @ a @ k for k in self.kraus)

    def action_matrix(self) -> np.ndarray:
        """Action on column-stacked coordinates."""
        return sum(np.kron(k.T, adjoint(k)) for k in self.kraus)

    def unit_image(self) -> np.ndarray:
        return sum(adjoint(k) @ k for k in self.kraus)

    @property
    def unital(self) -> bool:
        return np.linalg.norm(self.unit_image() - np.eye(self.dim), 2) <= 1e-10


@dataclass(frozen=True)
class GKLSGenerator:
    """Semigroup generator from a Hamiltonian and jump operators.

    Heisenberg form L(a) = i[H,a] + sum_k (V_k* a V_k - (V_k* V_k a + a V_k* V_k)/2),
    which is unital (L(1) = 0) by construction; this is verified to 1e-12.
    """

    hamiltonian: np.ndarray
    jumps: tuple = ()

    def __post_init__(self):
        h = opalg.require_hermitian(self.hamiltonian)
        js = tuple(as_complex_matrix(v) for v in self.jumps)
        n = h.shape[0]
        if any(v.shape != (n, n) for v in js):
            raise DimensionMismatch("jump operators must match the Hamiltonian dimension")
        object.__setattr__(self, "hamiltonian", h)
        object.__setattr__(self, "jumps", js)
        act = self.heisenberg_action()
        defect = np.linalg.norm(apply_action(act, np.eye(n)), 2)
        if defect > 1e-12 * max(1.0, np.linalg.norm(act, 2)):
            raise NotUnital("generator does not annihilate the identity")

    @property
    def dim(self) -> int:
        return self.hamiltonian.shape[0]

    def heisenberg_action(self) -> np.ndarray:
        n = self.dim
        eye = np.eye(n)
        h = self.hamiltonian
        act = 1j * (np.kron(eye, h) - np.kron(h.T, eye))
        for v in self.jumps:
            vv = adjoint(v) @ v
            act += np.kron(v.T, adjoint(v))
            act -= 0.5 * (np.kron(eye, vv) + np.kron(vv.T, eye))
        return act

    def schrodinger_action(self) -> np.ndarray:
        # Hilbert-Schmidt adjoint of the Heisenberg action
        return adjoint(self.heisenberg_action())


def choi(phi: CPMap) -> np.ndarray:
    """Choi matrix C = sum_ij E_ij (x) phi(E_ij); Hermitian, n^2 x n^2."""
    return choi_of_action(phi.action_matrix(), phi.dim)


def choi_of_action(action: np.ndarray, n: int) -> np.ndarray:
    action = as_complex_matrix(action)
    if action.shape != (n * n, n * n):
        raise DimensionMismatch(f"action matrix must be {n*n}x{n*n}")
    c = np.zeros((n * n, n * n), dtype=np.complex128)
    for i in range(n):
        for j in range(n):
            eij = np.zeros((n, n), dtype=np.complex128)
            eij[i, j] = 1.0
            c += np.kron(eij, apply_action(action, eij))
    return c


def is_completely_positive(action: np.ndarray, tol: float = 1e-10, n: int | None = None) -> bool:
    """Choi-positivity certificate for a linear map given by its action matrix."""
    action = as_complex_matrix(action)
    if n is None:
        n = int(round(np.sqrt(action.shape[0])))
    c = choi_of_action(action, n)
    w = np.linalg.eigvalsh((c + adjoint(c)) / 2)
    return bool(w.min() >= -tol * max(1.0, w.max()))


def evolve(gen: GKLSGenerator, t: float, check: bool = True) -> np.ndarray:
    """Heisenberg-picture semigroup step P_t = exp(t L) as an action matrix."""
    if t < 0:
        raise ValueError(f"t must be nonnegative, got {t}")
    p = opalg.expm(gen.heisenberg_action(), t)
    if check and not is_completely_positive(p, 1e-8, gen.dim):
        raise NotCP("evolved map failed the Choi positivity check")
    return p


def stationary_state(gen: GKLSGenerator, kernel_rtol: float = 1e-8) -> DensityMatrix:
    """The unique state annihilated by the Schroedinger generator.

    Solved by a null-space computation; raises DegenerateKernel unless the
    kernel is one-dimensional (second-smallest singular value above
    ``kernel_rtol`` times the largest).
    """
    lstar = gen.schrodinger_action()
    _, s, vh = np.linalg.svd(lstar)
    scale = s[0] if s[0] > 0 else 1.0
    if s.size < 2 or s[-2] <= kernel_rtol * scale:
        raise DegenerateKernel("Schroedinger generator kernel is not one-dimensional")
    rho = unvec(vh[-1].conj(), gen.dim)
    tr = np.trace(rho)
    if abs(tr) < 1e-12:
        raise DegenerateKernel("kernel element is traceless, no invariant state in it")
    # dividing by the trace removes the arbitrary SVD phase; only then is
    # hermitizing safe
    rho = rho / tr
    rho = (rho + adjoint(rho)) / 2
    w, v = np.linalg.eigh(rho)
    if w.min() < -1e-10:
        raise DegenerateKernel(f"kernel element is not positive (min eig {w.min():.3e})")
    # clip sub-tolerance negatives from rounding, renormalize
    m = (v * np.clip(w, 0.0, None)) @ adjoint(v)
    m = m / np.trace(m)
    return DensityMatrix(m)


def generator_with_spectrum(lam: EigenvalueList, n: int) -> GKLSGenerator:
    """A unital generator whose stationary state has the given eigenvalue list.

    Jump operators V_ij = sqrt(r_ij) E_ij for i != j with Metropolis rates
    r_ij = min(1, lam_i / lam_j) at unit base rate and H = 0.  Detailed
    balance (r_ij lam_j = min(lam_i, lam_j), symmetric) pins the stationary
    state to diag(lam); with all-to-all moves the coherence decay rates stay
    above 1/2 uniformly in the list, so relaxation is never slow.
    """
    if not lam.normalized:
        raise InvalidList(f"list sums to {lam.total()!r}, expected 1")
    if len(lam) != n:
        # the stored prefix has trailing zeros trimmed, so a short list means zeros
        raise InvalidList(f"list has {len(lam)} strictly positive entries, expected {n}")
    vals = lam.values
    if vals.min() <= 0.0:
        raise InvalidList("list entries must be strictly positive")
    jumps = []
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            e = np.zeros((n, n), dtype=np.complex128)
            e[i, j] = 1.0
            jumps.append(np.sqrt(min(1.0, vals[i] / vals[j])) * e)
    return GKLSGenerator(np.zeros((n, n), dtype=np.complex128), tuple(jumps))
