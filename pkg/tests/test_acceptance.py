"""Acceptance suite: one test per ship criterion, printed pass/fail lines.

Run with ``pytest tests/test_acceptance.py -v -s`` to see one line per
criterion.  Every tolerance is pinned here; nothing is deferred.
"""

import json
from fractions import Fraction

import numpy as np
import pytest

from ncdyn import codec
from ncdyn.cli import main as cli_main
from ncdyn.cpdyn import evolve, generator_with_spectrum, stationary_state
from ncdyn.dilation import kraus_word_expectation
from ncdyn.eigenlists import EigenvalueList, interaction_lower_bound, l1_distance
from ncdyn.freeprod import Section, expect_E0, section_mul, shift_section, theta, word_mul
from ncdyn.moments import SemigroupHandle, moment, ordered_moment
from ncdyn.offwhite import (
    CorrelationSpec,
    DiscreteMeasure,
    GaussianGramPair,
    equivalence_defect,
    feldman_hajek_B,
    gram_matrix,
    kakutani_mean,
    quasiorthogonality_diagnostic,
    straighten,
)
from ncdyn.opalg import adjoint, trace_norm
from ncdyn.prodsys import (
    ExpUnit,
    GaugeElement,
    gauge_inverse,
    gauge_mul,
    index_dimension,
    kernel_direct_sum,
    kernel_from_units,
    omega,
)
from ncdyn.randutil import (
    complex_gaussian,
    density,
    haar_unitary,
    spectrum_list,
    unital_cp_map,
    unital_generator,
)

SEED = 7051994


def fresh_rng():
    return np.random.default_rng(SEED)


def report(num, ok, text):
    print(f"criterion {num:02d}: {'PASS' if ok else 'FAIL'} - {text}")
    assert ok, f"criterion {num:02d} failed: {text}"


def test_criterion_01_strong_interaction_bound():
    worst = 0.0
    for q in range(2, 13):
        for p in range(1, q):
            got = interaction_lower_bound(EigenvalueList.uniform(p), EigenvalueList.uniform(q))
            worst = max(worst, abs(got - (2.0 - 2.0 * p * p / (q * q))))
    instance = interaction_lower_bound(EigenvalueList.uniform(2), EigenvalueList.uniform(3))
    ok = worst <= 1e-12 and abs(instance - 10.0 / 9.0) <= 1e-12
    report(1, ok, f"uniform-list bound matches 2-2p^2/q^2 for p<q<=12 (worst {worst:.2e})")


def test_criterion_02_moment_worked_examples():
    rng = fresh_rng()
    worst = 0.0
    for _ in range(50):
        sg = SemigroupHandle.from_generator(unital_generator(rng, 2, jumps=2))
        a, b, c, d = (complex_gaussian(rng, 2, 2) for _ in range(4))
        lhs = moment(sg, [2, 6, 3, 4], [a, b, c, d])
        rhs = sg.apply(2, a @ sg.apply(1, sg.apply(3, b) @ c @ sg.apply(1, d)))
        worst = max(worst, np.abs(lhs - rhs).max())
        lhs = moment(sg, [6, 4, 2, 3], [a, b, c, d])
        rhs = sg.apply(2, sg.apply(2, sg.apply(2, a) @ b) @ c @ sg.apply(1, d))
        worst = max(worst, np.abs(lhs - rhs).max())
    report(2, worst <= 1e-10, f"50 semigroups reproduce both worked 4-tuples (worst {worst:.2e})")


def test_criterion_03_oracle_triangle():
    rng = fresh_rng()
    worst = 0.0
    for _ in range(200):
        r = int(rng.integers(1, 4))
        phi = unital_cp_map(rng, 2, r)
        sg = SemigroupHandle.from_kraus_power(phi)
        k = int(rng.integers(1, 4))
        times = np.sort(rng.integers(0, 5, k))
        mats = [complex_gaussian(rng, 2, 2) for _ in range(k)]
        m1 = moment(sg, times, mats)
        m2 = ordered_moment(sg, times, mats)
        m3 = kraus_word_expectation(phi, times, mats)
        worst = max(worst, np.abs(m1 - m2).max(), np.abs(m1 - m3).max())
    report(3, worst <= 1e-9, f"recursion = closed form = word sum on 200 tuples (worst {worst:.2e})")


def test_criterion_04_weyl_inequality():
    rng = fresh_rng()
    worst = -np.inf
    for _ in range(1000):
        rho = density(rng, 4)
        sigma = density(rng, 4)
        gap = l1_distance(
            EigenvalueList(rho.eigenvalues()), EigenvalueList(sigma.eigenvalues())
        ) - trace_norm(rho.matrix - sigma.matrix)
        worst = max(worst, gap)
    report(4, worst <= 1e-12, f"list distance <= trace distance on 1000 M4 pairs (worst gap {worst:.2e})")


def test_criterion_05_stationary_spectrum_construction():
    rng = fresh_rng()
    worst_list = 0.0
    worst_dist = 0.0
    dims = [2, 3, 4, 2, 3, 4, 2, 3, 4, 2, 3, 4, 2, 3, 4, 2, 3, 4, 3, 4]
    for n in dims:  # 20 random lists across n in {2,3,4}
        lam = spectrum_list(rng, n)
        gen = generator_with_spectrum(lam, n)
        omega_state = stationary_state(gen)
        worst_list = max(worst_list, np.abs(omega_state.eigenvalues() - lam.padded(n)).max())
        prop = adjoint(evolve(gen, 50.0, check=False))
        for _ in range(20):
            rho0 = density(rng, n).matrix
            from ncdyn.cpdyn import apply_action

            moved = apply_action(prop, rho0)
            worst_dist = max(worst_dist, trace_norm(moved - omega_state.matrix))
    ok = worst_list <= 1e-8 and worst_dist < 1e-6
    report(5, ok, f"20 lists reproduced (worst {worst_list:.2e}); t=50 distance (worst {worst_dist:.2e})")


def test_criterion_06_index_computation():
    rng = fresh_rng()
    ok = True
    for n in (1, 2, 3):
        units = [
            ExpUnit(complex(*rng.standard_normal(2)), complex_gaussian(rng, n))
            for _ in range(n + 2)
        ]
        ok = ok and index_dimension(units) == n
    k1 = kernel_from_units(
        [ExpUnit(complex(*rng.standard_normal(2)), complex_gaussian(rng, 1)) for _ in range(3)]
    )
    k2 = kernel_from_units(
        [ExpUnit(complex(*rng.standard_normal(2)), complex_gaussian(rng, 2)) for _ in range(4)]
    )
    ok = ok and index_dimension(kernel_direct_sum(k1, k2)) == 3
    report(6, ok, "sampled exponential unit sets give dim N for N in {1,2,3}; direct sum adds 1+2=3")


def test_criterion_07_expectation_positivity_witnesses():
    rng = fresh_rng()
    sg = SemigroupHandle.from_generator(unital_generator(rng, 2, jumps=2))
    worst = np.inf

    def random_word():
        k = int(rng.integers(1, 3))
        while True:
            entries = tuple(
                Fraction(int(rng.integers(0, 4)), int(rng.integers(1, 3))) for _ in range(k)
            )
            if all(a != b for a, b in zip(entries, entries[1:])):
                return entries

    def random_section():
        out = None
        for _ in range(int(rng.integers(1, 3))):
            w = random_word()
            sec = Section.delta(w, *(complex_gaussian(rng, 2, 2) for _ in w))
            out = sec if out is None else out.add(sec)
        return out

    for _ in range(200):
        m = int(rng.integers(1, 4))
        fs = [random_section() for _ in range(m)]
        mats = [complex_gaussian(rng, 2, 2) for _ in range(m)]
        block = np.zeros((2 * m, 2 * m), dtype=complex)
        for i in range(m):
            for j in range(m):
                e0 = expect_E0(section_mul(fs[j].star(), fs[i]), sg)
                block[2 * j : 2 * j + 2, 2 * i : 2 * i + 2] = adjoint(mats[j]) @ e0 @ mats[i]
        w = np.linalg.eigvalsh((block + adjoint(block)) / 2)
        worst = min(worst, w.min())
    report(7, worst >= -1e-8, f"200 expectation block matrices PSD (worst eigenvalue {worst:.2e})")


def test_criterion_08_gauge_group():
    rng = fresh_rng()
    worst = 0.0
    for _ in range(1000):
        g, h, k = (
            GaugeElement(float(rng.standard_normal()), complex_gaussian(rng, 2), haar_unitary(rng, 2))
            for _ in range(3)
        )
        lhs = gauge_mul(gauge_mul(g, h), k)
        rhs = gauge_mul(g, gauge_mul(h, k))
        worst = max(
            worst,
            abs(lhs.lam - rhs.lam),
            np.abs(lhs.xi - rhs.xi).max(),
            np.abs(lhs.u - rhs.u).max(),
        )
        gi = gauge_inverse(g)
        for prod in (gauge_mul(g, gi), gauge_mul(gi, g)):
            worst = max(
                worst, abs(prod.lam), np.abs(prod.xi).max(), np.abs(prod.u - np.eye(2)).max()
            )
    xi, eta = complex_gaussian(rng, 2), complex_gaussian(rng, 2)
    got = gauge_mul(GaugeElement(0.3, xi, np.eye(2)), GaugeElement(-0.8, eta, np.eye(2)))
    heis = (
        abs(got.lam - (0.3 - 0.8 + omega(xi, eta))) == 0.0
        and np.abs(got.xi - (xi + eta)).max() == 0.0
        and np.abs(got.u - np.eye(2)).max() == 0.0
    )
    ok = worst <= 1e-12 and heis
    report(8, ok, f"1000 triples associate and invert (worst {worst:.2e}); central kernel law exact")


def test_criterion_09_offwhite_gram():
    spec = CorrelationSpec(theta=2.0, delta=0.05)
    gram = gram_matrix(spec, 0.0, 1.0, 200)
    m = gram.entries
    toeplitz_defect = max(
        np.abs(np.diagonal(m, offset=k) - m[0, k]).max() for k in range(200)
    )
    w = np.linalg.eigvalsh(m)
    psd_ok = w.min() >= -1e-8 * w.max()
    far = [
        abs(m[i, j])
        for i in range(200)
        for j in range(200)
        if abs(i - j) * gram.h > 2 * spec.epsilon
    ]
    shifted = gram_matrix(spec, 3.25, 4.25, 200)
    shift_defect = np.abs(m - shifted.entries).max()
    ok = toeplitz_defect <= 1e-12 and psd_ok and max(far) <= 1e-12 and shift_defect <= 1e-12
    report(
        9,
        ok,
        f"n=200 Gram Toeplitz ({toeplitz_defect:.1e}), PSD (min {w.min():.2e}), "
        f"vanishing beyond 2*eps ({max(far):.1e}), shift invariant ({shift_defect:.1e})",
    )


def test_criterion_10_quasiorthogonality_diagnostic():
    spec = CorrelationSpec(theta=2.0, delta=0.05)
    rows = quasiorthogonality_diagnostic(spec, [(0.0, 1.0), (1.0, 2.0)], [50, 100, 200])
    sigmas = [r["sigma_min"] for r in rows]
    defects = [r["hs_defect"] for r in rows]
    ok = min(sigmas) > 0.01 and max(defects) <= 4.0 * min(defects)
    report(
        10,
        ok,
        f"abutting intervals: sigma_min {min(sigmas):.3f} > 0.01, defects {defects[0]:.3f}.."
        f"{defects[-1]:.3f} within factor 4 (finite-grid diagnostic, not a continuum proof)",
    )


def test_criterion_11_gaussian_toolkit():
    rng = fresh_rng()
    worst_fh = 0.0
    for _ in range(25):
        a = complex_gaussian(rng, 4, 4)
        gp = a @ adjoint(a) + 0.2 * np.eye(4)
        b = complex_gaussian(rng, 4, 4)
        gq = b @ adjoint(b) + 0.2 * np.eye(4)
        bmat = feldman_hajek_B(GaussianGramPair(gp, gq))
        worst_fh = max(worst_fh, np.abs(gp.T @ bmat - gq.T).max() / max(1.0, np.abs(gq).max()))

    worst_st = 0.0
    for _ in range(25):
        x = rng.standard_normal((3, 3))
        y = rng.standard_normal((3, 3))
        gp_m = x @ x.T + 0.2 * np.eye(3)
        gp_n = y @ y.T + 0.2 * np.eye(3)
        cross = 0.15 * rng.standard_normal((3, 3))
        q = straighten(gp_m, gp_n, cross)
        joint = np.block([[gp_m, cross], [cross.T, gp_n]])
        dom = np.block([[gp_m, np.zeros((3, 3))], [np.zeros((3, 3)), gp_n]])
        wj, vj = np.linalg.eigh(joint)
        l = (vj * np.sqrt(wj)) @ vj.T
        linv = np.linalg.inv(l)
        q_oracle = (linv @ l).T @ dom @ (linv @ l)
        worst_st = max(
            worst_st,
            np.abs(q_oracle - q).max(),
            np.abs(q[:3, :3] - gp_m).max(),
            np.abs(q[3:, 3:] - gp_n).max(),
            np.abs(q[:3, 3:]).max(),
        )

    worst_comp = 0.0
    for _ in range(25):
        l = complex_gaussian(rng, 4, 4)
        m = complex_gaussian(rng, 4, 4)
        lhs = equivalence_defect(l @ m)
        rhs = equivalence_defect(m) + adjoint(m) @ equivalence_defect(l) @ m
        worst_comp = max(worst_comp, np.abs(lhs - rhs).max() / max(1.0, np.abs(rhs).max()))

    mu = DiscreteMeasure(("x", "y"), [0.5, 0.5])
    nu = DiscreteMeasure(("x", "y"), [0.18, 0.82])
    kak = np.abs(kakutani_mean(mu, nu).weights - [0.3, np.sqrt(0.41)]).max()

    ok = worst_fh < 1e-10 and worst_st < 1e-10 and worst_comp <= 1e-12 and kak <= 1e-12
    report(
        11,
        ok,
        f"Feldman-Hajek residual {worst_fh:.1e}; straighten {worst_st:.1e}; "
        f"defect composition {worst_comp:.1e}; Kakutani {kak:.1e}",
    )


def test_criterion_12_free_product_algebra():
    rng = fresh_rng()
    sg = SemigroupHandle.from_generator(unital_generator(rng, 2, jumps=2))

    def random_word(maxlen=2):
        k = int(rng.integers(1, maxlen + 1))
        while True:
            entries = tuple(
                Fraction(int(rng.integers(0, 4)), int(rng.integers(1, 3))) for _ in range(k)
            )
            if all(a != b for a, b in zip(entries, entries[1:])):
                return entries

    def random_section(words=2):
        out = None
        for _ in range(words):
            w = random_word()
            sec = Section.delta(w, *(complex_gaussian(rng, 2, 2) for _ in w))
            out = sec if out is None else out.add(sec)
        return out

    def close(f, g, tol):
        df, dg = f.dense_fibers(), g.dense_fibers()
        for w in set(df) | set(dg):
            a, b = df.get(w), dg.get(w)
            if a is None or b is None:
                if np.abs(a if a is not None else b).max() > tol:
                    return False
            elif np.abs(a - b).max() > tol:
                return False
        return True

    from ncdyn.freeprod import FreeWord

    ok = True
    for i in range(500):
        w1, w2, w3 = (FreeWord(random_word(3)) for _ in range(3))
        ok = ok and word_mul(word_mul(w1, w2), w3).times == word_mul(w1, word_mul(w2, w3)).times

        f, g, h = (random_section() for _ in range(3))
        ok = ok and close(section_mul(section_mul(f, g), h), section_mul(f, section_mul(g, h)), 1e-11)
        ok = ok and close(section_mul(f, g).star(), section_mul(g.star(), f.star()), 1e-11)
        t = Fraction(int(rng.integers(0, 3)), int(rng.integers(1, 3)))
        ok = ok and close(
            shift_section(section_mul(f, g), t),
            section_mul(shift_section(f, t), shift_section(g, t)),
            1e-12,
        )
        s = Fraction(1, 2)
        ok = ok and close(
            shift_section(shift_section(f, s), t), shift_section(f, s + t), 0.0
        )

        a = complex_gaussian(rng, 2, 2)
        lhs = expect_E0(section_mul(theta(0, a), f), sg)
        ok = ok and np.abs(lhs - a @ expect_E0(f, sg)).max() <= 1e-10

        corner = [
            section_mul(
                section_mul(theta(0, complex_gaussian(rng, 2, 2)), random_section(1)),
                theta(0, complex_gaussian(rng, 2, 2)),
            )
            for _ in range(2)
        ]
        lhs = expect_E0(section_mul(corner[0], corner[1]), sg)
        rhs = expect_E0(corner[0], sg) @ expect_E0(corner[1], sg)
        ok = ok and np.abs(lhs - rhs).max() <= 1e-9

        if not ok:
            report(12, False, f"free-product property battery failed at instance {i}")
    report(12, ok, "500 randomized instances: associativity, star, shifts, expectation module "
                   "and hereditary multiplicativity all within stated tolerances")


def test_criterion_13_cli_determinism(tmp_path, capsys):
    spec = tmp_path / "sweep.json"
    spec.write_text(json.dumps({"kind": "cp-convergence", "dims": [2, 3], "lists": 2, "t": 50.0}))
    outputs = []
    for _ in range(2):
        code = cli_main(["sweep", "--spec", str(spec), "--seed", "7"])
        captured = capsys.readouterr()
        assert code == 0
        outputs.append(captured.out.encode())
    ok = outputs[0] == outputs[1] and len(outputs[0]) > 0
    report(13, ok, f"seeded sweep emitted bit-identical bytes twice ({len(outputs[0])} bytes)")
