"""Units, covariance kernels, index, and the gauge group of exponential systems.

A unit of the rank-N exponential product system is labeled by a drift a and
a vector zeta in C^N; two units pair through the covariance
c(u,v) = a + conj(b) + <zeta, omega>, and the index is the dimension of the
Hilbert space the covariance kernel induces on the sum-zero subspace.  The
gauge group is R x C^N x U(N) with the symplectic cocycle multiplication.

Inner products are linear in the first slot; omega(xi, eta) = Im <xi, eta>.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionMismatch, NotCondPD
from .opalg import adjoint, as_complex_matrix

__all__ = [
    "ALEPH0",
    "CONTINUUM",
    "ExpUnit",
    "CovKernel",
    "GaugeElement",
    "inner",
    "omega",
    "covariance",
    "kernel_from_units",
    "index_dimension",
    "kernel_direct_sum",
    "pairing_possible",
    "gauge_mul",
    "gauge_inverse",
    "gauge_identity",
]

# symbolic index values for systems without a finite unit-space dimension
ALEPH0 = "aleph0"
CONTINUUM = "2^aleph0"

RANK_RTOL = 1e-8
CPD_TOL = 1e-10


def inner(z, w) -> complex:
    """<z, w>, linear in the first argument."""
    z = np.asarray(z, dtype=np.complex128).ravel()
    w = np.asarray(w, dtype=np.complex128).ravel()
    if z.size != w.size:
        raise DimensionMismatch(f"vectors of size {z.size} and {w.size}")
    return complex(np.sum(z * w.conj()))


def omega(xi, eta) -> float:
    """Symplectic form Im <xi, eta>."""
    return float(inner(xi, eta).imag)


@dataclass(frozen=True)
class ExpUnit:
    """Exponential unit u(t) = e^{ta} exp(chi_(0,t) (x) zeta)."""

    a: complex
    zeta: np.ndarray

    def __post_init__(self):
        z = np.asarray(self.zeta, dtype=np.complex128).ravel()
        a = complex(self.a)
        if not np.all(np.isfinite(z.view(float))) or not (np.isfinite(a.real) and np.isfinite(a.imag)):
            raise ValueError("unit data must be finite")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "zeta", z)

    @property
    def rank(self) -> int:
        return self.zeta.size


def covariance(u: ExpUnit, v: ExpUnit) -> complex:
    """c(u, v) = a + conj(b) + <zeta_u, zeta_v>; satisfies <u(t),v(t)> = e^{t c}."""
    if u.rank != v.rank:
        raise DimensionMismatch(f"units live in ranks {u.rank} and {v.rank}")
    return u.a + np.conj(v.a) + inner(u.zeta, v.zeta)


@dataclass(frozen=True)
class CovKernel:
    """A covariance matrix over a finite set of unit labels.

    Must be Hermitian-symmetric (1e-12) and conditionally positive definite:
    the quadratic form is nonnegative (within 1e-10) on sum-zero weights.
    """

    labels: tuple
    c: np.ndarray = field()

    def __post_init__(self):
        m = as_complex_matrix(self.c)
        k = len(self.labels)
        if m.shape != (k, k):
            raise DimensionMismatch(f"kernel is {m.shape} for {k} labels")
        if k and np.abs(m - adjoint(m)).max() > 1e-12 * max(1.0, np.abs(m).max()):
            raise NotCondPD("kernel is not Hermitian-symmetric within 1e-12")
        red = reduced_gram(m)
        if red.size:
            w = np.linalg.eigvalsh(red)
            if w.min() < -CPD_TOL * max(1.0, abs(w.max())):
                raise NotCondPD(f"reduced Gram eigenvalue {w.min():.3e} below tolerance")
        object.__setattr__(self, "labels", tuple(self.labels))
        object.__setattr__(self, "c", m)


def reduced_gram(c: np.ndarray) -> np.ndarray:
    """Gram of the kernel's quadratic form on the sum-zero subspace.

    Basis vectors b_i = e_i - e_{i+1}; entry (i, j) is b_i^T C b_j, which is
    Hermitian for Hermitian-symmetric C.
    """
    c = as_complex_matrix(c)
    k = c.shape[0]
    if k < 2:
        return np.zeros((0, 0), dtype=np.complex128)
    b = np.zeros((k, k - 1))
    for i in range(k - 1):
        b[i, i] = 1.0
        b[i + 1, i] = -1.0
    return b.T @ c @ b


def kernel_from_units(units) -> CovKernel:
    units = list(units)
    k = len(units)
    c = np.zeros((k, k), dtype=np.complex128)
    for i in range(k):
        for j in range(k):
            c[i, j] = covariance(units[i], units[j])
    return CovKernel(labels=tuple(range(k)), c=c)


def index_dimension(units_or_kernel) -> int:
    """Numerical rank of the reduced Gram: the dimension of H(units, c).

    For exponential unit sets this equals dim span{zeta_i - zeta_j} and is
    exact; for a raw kernel over finitely many sampled units it is a lower
    bound for the dimension of the full system.
    """
    kernel = units_or_kernel
    if not isinstance(kernel, CovKernel):
        kernel = kernel_from_units(kernel)
    red = reduced_gram(kernel.c)
    if not red.size:
        return 0
    w = np.linalg.eigvalsh(red)
    if w.min() < -CPD_TOL * max(1.0, abs(w.max())):
        raise NotCondPD(f"reduced Gram eigenvalue {w.min():.3e} below tolerance")
    top = w.max()
    if top <= 0.0:
        return 0
    return int(np.count_nonzero(w > RANK_RTOL * top))


def kernel_direct_sum(ce: CovKernel, cf: CovKernel) -> CovKernel:
    """Kernel of the tensor-product system on the product label set.

    c((u,v),(u',v')) = c_E(u,u') + c_F(v,v'); for generic unit sets the
    index adds, the kernel-level form of the logarithmic addition formula.
    """
    ke, kf = len(ce.labels), len(cf.labels)
    labels = tuple((a, b) for a in ce.labels for b in cf.labels)
    c = np.kron(ce.c, np.ones((kf, kf))) + np.kron(np.ones((ke, ke)), cf.c)
    return CovKernel(labels=labels, c=c)


def pairing_possible(idx_a, idx_b) -> bool:
    """Whether two semigroups can be past and future of one automorphism group.

    True exactly when the indices agree; symbolic cardinalities compare as
    markers.
    """
    return idx_a == idx_b


@dataclass(frozen=True)
class GaugeElement:
    """Element (lambda, xi, U) of the gauge group of a rank-N system."""

    lam: float
    xi: np.ndarray
    u: np.ndarray

    def __post_init__(self):
        xi = np.asarray(self.xi, dtype=np.complex128).ravel()
        u = as_complex_matrix(self.u)
        if u.shape != (xi.size, xi.size):
            raise DimensionMismatch(f"unitary is {u.shape} for a rank-{xi.size} element")
        if np.linalg.norm(adjoint(u) @ u - np.eye(xi.size), 2) > 1e-10:
            raise ValueError("u is not unitary within 1e-10")
        object.__setattr__(self, "lam", float(self.lam))
        object.__setattr__(self, "xi", xi)
        object.__setattr__(self, "u", u)

    @property
    def rank(self) -> int:
        return self.xi.size


def gauge_identity(n: int) -> GaugeElement:
    return GaugeElement(0.0, np.zeros(n, dtype=np.complex128), np.eye(n, dtype=np.complex128))


def gauge_mul(g: GaugeElement, h: GaugeElement) -> GaugeElement:
    """(lambda, xi, U)(mu, eta, V) = (lambda + mu + omega(xi, U eta), xi + U eta, UV)."""
    if g.rank != h.rank:
        raise DimensionMismatch(f"elements of ranks {g.rank} and {h.rank}")
    ueta = g.u @ h.xi
    return GaugeElement(g.lam + h.lam + omega(g.xi, ueta), g.xi + ueta, g.u @ h.u)


def gauge_inverse(g: GaugeElement) -> GaugeElement:
    """Two-sided inverse (-lambda, -U^{-1} xi, U^{-1}).

    Derived from the product law: the omega term vanishes because
    omega(xi, -xi) = 0, so no symplectic correction appears.
    """
    uinv = adjoint(g.u)
    return GaugeElement(-g.lam, -(uinv @ g.xi), uinv)
