import numpy as np
import pytest

from ncdyn.errors import DimensionMismatch, NonHermitian, NonSquare, NotAState
from ncdyn.opalg import (
    DensityMatrix,
    adjoint,
    conjugacy_shift,
    eig_descending,
    expm,
    kron,
    trace_norm,
)
from ncdyn.randutil import complex_gaussian, density, haar_unitary, hermitian


def test_kron_identities():
    assert np.array_equal(kron(np.eye(2), np.eye(3)), np.eye(6))
    out = kron(np.diag([1.0, 2.0]), np.diag([3.0]))
    assert np.array_equal(out, np.diag([3.0, 6.0]))


def test_kron_matches_elementwise_definition(rng):
    a = complex_gaussian(rng, 2, 2)
    b = complex_gaussian(rng, 2, 2)
    got = kron(a, b)
    # four-index loop oracle
    expect = np.zeros((4, 4), dtype=complex)
    for i in range(2):
        for j in range(2):
            for k in range(2):
                for l in range(2):
                    expect[2 * i + k, 2 * j + l] = a[i, j] * b[k, l]
    assert np.abs(got - expect).max() < 1e-14


def test_eig_descending_examples():
    vals, _ = eig_descending(np.diag([0.2, 0.8]))
    assert np.allclose(vals, [0.8, 0.2], atol=1e-14)
    vals, _ = eig_descending(np.eye(3))
    assert np.allclose(vals, [1.0, 1.0, 1.0], atol=1e-14)


def test_eig_descending_reconstruction(rng):
    a = hermitian(rng, 5)
    vals, u = eig_descending(a)
    assert np.all(np.diff(vals) <= 1e-14)
    assert np.linalg.norm(u @ np.diag(vals) @ adjoint(u) - a, 2) < 1e-10
    assert abs(vals.sum() - np.trace(a).real) < 1e-10


def test_eig_rejects_non_hermitian(rng):
    with pytest.raises(NonHermitian):
        eig_descending(complex_gaussian(rng, 3, 3))


def test_trace_norm_examples(rng):
    assert trace_norm(np.eye(4)) == pytest.approx(4.0, abs=1e-14)
    assert trace_norm(np.diag([1.0, -1.0])) == pytest.approx(2.0, abs=1e-14)
    a = complex_gaussian(rng, 4, 4)
    # singular values by an independent route: eigenvalues of A*A
    oracle = np.sqrt(np.clip(np.linalg.eigvalsh(adjoint(a) @ a), 0, None)).sum()
    assert trace_norm(a) == pytest.approx(oracle, abs=1e-12)
    with pytest.raises(NonSquare):
        trace_norm(np.ones((2, 3)))


def test_trace_norm_unitary_invariance(rng):
    for _ in range(1000):
        a = complex_gaussian(rng, 3, 3)
        u = haar_unitary(rng, 3)
        v = haar_unitary(rng, 3)
        assert abs(trace_norm(u @ a @ v) - trace_norm(a)) < 1e-10


def test_expm_examples(rng):
    assert np.allclose(expm(np.zeros((3, 3)), 2.5), np.eye(3), atol=1e-14)
    assert expm(np.diag([1.0]), 2.0)[0, 0] == pytest.approx(np.exp(2.0), rel=1e-14)
    n = np.array([[0.0, 1.0], [0.0, 0.0]])
    # nilpotent: the series terminates, exp(tN) = 1 + tN
    t = 0.37
    assert np.abs(expm(n, t) - (np.eye(2) + t * n)).max() < 1e-13
    a = complex_gaussian(rng, 3, 3)
    s, t = 0.8, 1.7
    lhs = expm(a, s) @ expm(a, t)
    assert np.linalg.norm(lhs - expm(a, s + t), 2) < 1e-10 * np.linalg.norm(expm(a, s + t), 2)


def test_conjugacy_shift_examples(rng):
    assert conjugacy_shift(np.diag([0.0, 1.0]), np.diag([2.0, 3.0])) == pytest.approx(2.0)
    assert conjugacy_shift(np.diag([0.0, 1.0]), np.diag([0.0, 2.0])) is None
    x = hermitian(rng, 4)
    w = haar_unitary(rng, 4)
    y = w @ (x + 3.0 * np.eye(4)) @ adjoint(w)
    lam = conjugacy_shift(x, y)
    assert lam == pytest.approx(3.0, abs=1e-10)


def test_conjugacy_shift_properties(rng):
    for _ in range(25):
        x = hermitian(rng, 3)
        assert conjugacy_shift(x, x) == pytest.approx(0.0, abs=1e-12)
        y = hermitian(rng, 3)
        lam = conjugacy_shift(x, y)
        mirror = conjugacy_shift(y, x)
        if lam is None:
            assert mirror is None
        else:
            assert mirror == pytest.approx(-lam, abs=1e-10)
    with pytest.raises(DimensionMismatch):
        conjugacy_shift(np.eye(2), np.eye(3))


def test_density_matrix_validation(rng):
    rho = density(rng, 3)
    assert rho.dim == 3
    assert abs(rho.eigenvalues().sum() - 1.0) < 1e-12
    with pytest.raises(NotAState):
        DensityMatrix(np.diag([0.5, 0.6]))
    with pytest.raises(NotAState):
        DensityMatrix(np.diag([1.5, -0.5]))
    with pytest.raises(NotAState):
        DensityMatrix(np.array([[0.5, 0.3], [0.0, 0.5]]))
