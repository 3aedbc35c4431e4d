"""ncdyn command line front end.

One binary, subcommand style; all data I/O is JSON (matrix codec shared
across commands) or CSV for sweeps and grids.  Diagnostics go to stderr,
data to stdout.  Exit codes: 2 usage, 3 missing file, 4 module validation
error, 5 I/O failure.  CSV written to a file is accompanied by a rendered
figure with the same stem unless --no-fig is given.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from . import codec, plotting
from .cpdyn import CPMap, evolve, generator_with_spectrum, stationary_state
from .dilation import kraus_word_expectation, stinespring
from .eigenlists import EigenvalueList, interaction_lower_bound, tensor_product
from .errors import NcdynError
from .freeprod import expect_E0, section_mul
from .moments import SemigroupHandle, moment, render_moment
from .offwhite import CorrelationSpec, gram_matrix, quasiorthogonality_diagnostic
from .opalg import eig_descending
from .prodsys import CovKernel, gauge_inverse, gauge_mul, index_dimension, kernel_from_units
from .randutil import density, spectrum_list

SCHEMA = codec.SCHEMA_VERSION


def _load_json(path):
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)


def _emit(payload):
    sys.stdout.write(codec.dumps(payload) + "\n")


def _floats(text):
    try:
        return [float(x) for x in text.split(",") if x != ""]
    except ValueError as exc:
        raise UsageError(f"cannot parse float list {text!r}") from exc


class UsageError(Exception):
    pass


class ReportIOError(Exception):
    """Failure while writing report output (exit 5, unlike missing inputs)."""


def _csv_lines(header, rows):
    lines = [",".join(header)]
    for row in rows:
        cells = []
        for x in row:
            if isinstance(x, float):
                cells.append(codec.format_float(x))
            else:
                cells.append(str(x))
        lines.append(",".join(cells))
    return "\n".join(lines) + "\n"


def _write_report(text, out, no_fig, render):
    """Deliver delimited output; file targets also get a companion figure."""
    if out is None:
        sys.stdout.write(text)
        return
    try:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
        if not no_fig:
            render(plotting.figure_path(out))
    except OSError as exc:
        raise ReportIOError(f"cannot write report to {out}: {exc}") from exc
    print(f"wrote {out}", file=sys.stderr)


def _load_mats(path):
    data = _load_json(path)
    if isinstance(data, dict) and "mats" in data:
        data = data["mats"]
    if isinstance(data, dict):
        data = [data]
    return [codec.matrix_from_json(d) for d in data]


def _load_cp_map(path):
    data = _load_json(path)
    if isinstance(data, dict) and "kraus" in data:
        return CPMap(tuple(codec.matrix_from_json(k) for k in data["kraus"]))
    raise UsageError(f"{path} does not contain a Kraus map ({{'kraus': [...]}})")


# command implementations


def _cmd_eig(args):
    vals, u = eig_descending(codec.matrix_from_json(_load_json(args.matrix)))
    _emit({"ncdyn_schema": SCHEMA, "values": list(vals), "unitary": codec.matrix_to_json(u)})


def _cmd_interaction_bound(args):
    minus = EigenvalueList(_floats(args.minus))
    plus = EigenvalueList(_floats(args.plus))
    bound = interaction_lower_bound(minus, plus)
    _emit(
        {
            "ncdyn_schema": SCHEMA,
            "bound": bound,
            "tensor_minus": list(tensor_product(minus, minus).values),
            "tensor_plus": list(tensor_product(plus, plus).values),
        }
    )


def _cmd_cp(args):
    if args.action == "stationary":
        if args.spectrum:
            lam = EigenvalueList(_floats(args.spectrum))
            gen = generator_with_spectrum(lam, len(lam))
        elif args.gen:
            gen = codec.generator_from_json(_load_json(args.gen))
        else:
            raise UsageError("cp stationary needs --spectrum or --gen")
        rho = stationary_state(gen)
        payload = {
            "ncdyn_schema": SCHEMA,
            "state": codec.matrix_to_json(rho.matrix),
            "eigenvalues": list(rho.eigenvalues()),
        }
        if args.spectrum:
            payload["generator"] = codec.generator_to_json(gen)
        _emit(payload)
    else:
        if not args.gen:
            raise UsageError("cp evolve needs --gen")
        gen = codec.generator_from_json(_load_json(args.gen))
        action = evolve(gen, args.t)
        _emit({"ncdyn_schema": SCHEMA, "t": float(args.t), "action": codec.matrix_to_json(action)})


def _cmd_moments(args):
    gen = codec.generator_from_json(_load_json(args.gen))
    sg = SemigroupHandle.from_generator(gen)
    times = _floats(args.times)
    mats = _load_mats(args.mats)
    result = moment(sg, times, mats)
    _emit(
        {
            "ncdyn_schema": SCHEMA,
            "times": times,
            "rendered": render_moment(times),
            "result": codec.matrix_to_json(result),
        }
    )


def _cmd_dilate(args):
    phi = _load_cp_map(args.map)
    if args.action == "expect":
        if not args.times or not args.mats:
            raise UsageError("dilate expect needs --times and --mats")
        times = _floats(args.times)
        mats = _load_mats(args.mats)
        result = kraus_word_expectation(phi, times, mats)
        _emit({"ncdyn_schema": SCHEMA, "times": times, "result": codec.matrix_to_json(result)})
    else:
        triple = stinespring(phi, unital=args.unital)
        _emit(
            {
                "ncdyn_schema": SCHEMA,
                "rep_rank": triple.rep_rank,
                "v": codec.matrix_to_json(triple.v),
                "kraus": [codec.matrix_to_json(k) for k in triple.kraus],
            }
        )


def _cmd_freeprod(args):
    if args.action == "mul":
        f = codec.section_from_json(_load_json(args.lhs))
        g = codec.section_from_json(_load_json(args.rhs))
        payload = codec.section_to_json(section_mul(f, g))
        payload = {"ncdyn_schema": SCHEMA, **payload}
        _emit(payload)
    else:
        f = codec.section_from_json(_load_json(args.section))
        gen = codec.generator_from_json(_load_json(args.gen))
        result = expect_E0(f, SemigroupHandle.from_generator(gen))
        _emit({"ncdyn_schema": SCHEMA, "result": codec.matrix_to_json(result)})


def _cmd_index(args):
    data = _load_json(args.units)
    if isinstance(data, dict) and "kernel" in data:
        k = data["kernel"]
        kernel = CovKernel(tuple(k.get("labels", range(int(k["c"]["rows"])))),
                           codec.matrix_from_json(k["c"]))
        idx = index_dimension(kernel)
        exact = False
    else:
        units = [codec.unit_from_json(u) for u in (data["units"] if isinstance(data, dict) else data)]
        kernel = kernel_from_units(units)
        idx = index_dimension(kernel)
        exact = True
    _emit(
        {
            "ncdyn_schema": SCHEMA,
            "index": idx,
            "exact_for_exponential_units": exact,
            "note": "exact dimension for exponential unit sets; a lower bound for raw sampled kernels",
        }
    )


def _cmd_gauge(args):
    if args.action == "mul":
        g = codec.gauge_from_json(_load_json(args.lhs))
        h = codec.gauge_from_json(_load_json(args.rhs))
        out = gauge_mul(g, h)
    else:
        out = gauge_inverse(codec.gauge_from_json(_load_json(args.g)))
    _emit({"ncdyn_schema": SCHEMA, **codec.gauge_to_json(out)})


def _cmd_offwhite(args):
    spec = CorrelationSpec(theta=args.theta, delta=args.delta)
    if args.action == "gram":
        a, b = _floats(args.interval)
        gram = gram_matrix(spec, a, b, args.n)
        lines = [",".join(codec.format_float(float(x)) for x in row) for row in gram.entries]
        text = "\n".join(lines) + "\n"
        _write_report(text, args.out, args.no_fig, lambda p: plotting.render_gram(gram, p))
    else:
        flat = _floats(args.intervals)
        if len(flat) < 4 or len(flat) % 2:
            raise UsageError("--intervals wants a flat comma list of pairs, e.g. 0,1,1,2")
        intervals = list(zip(flat[::2], flat[1::2]))
        refine = [int(x) for x in _floats(args.refine)]
        rows = quasiorthogonality_diagnostic(spec, intervals, refine)
        table = [(r["n"], r["sigma_min"], r["hs_defect"]) for r in rows]
        text = _csv_lines(["n", "sigma_min", "hs_defect"], table)
        _write_report(text, args.out, args.no_fig, lambda p: plotting.render_quasi(rows, p))


def _sweep_interaction(spec, rng):
    qmax = int(spec.get("qmax", 12))
    header = ["p", "q", "bound", "formula"]
    rows = []
    for q in range(2, qmax + 1):
        for p in range(1, q):
            bound = interaction_lower_bound(EigenvalueList.uniform(p), EigenvalueList.uniform(q))
            rows.append((p, q, bound, 2.0 - 2.0 * p * p / (q * q)))
    rows.sort(key=lambda r: (r[0], r[1]))
    return header, rows


def _sweep_cp_convergence(spec, rng):
    dims = [int(d) for d in spec.get("dims", [2, 3, 4])]
    lists = int(spec.get("lists", 5))
    t = float(spec.get("t", 50.0))
    header = ["dim", "trial", "t", "distance"]
    rows = []
    for n in dims:
        for trial in range(lists):
            lam = spectrum_list(rng, n)
            gen = generator_with_spectrum(lam, n)
            omega = stationary_state(gen).matrix
            prop = evolve(gen, t, check=False)
            rho = density(rng, n).matrix
            moved = _schrodinger_apply(prop, rho)
            dist = float(np.abs(np.linalg.svd(moved - omega, compute_uv=False)).sum())
            rows.append((n, trial, t, dist))
    rows.sort(key=lambda r: (r[0], r[1]))
    return header, rows


def _schrodinger_apply(heisenberg_action, rho):
    from .cpdyn import apply_action
    from .opalg import adjoint

    return apply_action(adjoint(heisenberg_action), rho)


def _sweep_offwhite(spec, rng):
    cs = CorrelationSpec(theta=float(spec.get("theta", 2.0)), delta=float(spec.get("delta", 0.05)))
    intervals = [tuple(p) for p in spec.get("intervals", [[0.0, 1.0], [1.0, 2.0]])]
    refine = [int(n) for n in spec.get("refine", [50, 100, 200])]
    rows = quasiorthogonality_diagnostic(cs, intervals, refine)
    return ["n", "sigma_min", "hs_defect"], [(r["n"], r["sigma_min"], r["hs_defect"]) for r in rows]


_SWEEPS = {
    "interaction-bound": _sweep_interaction,
    "cp-convergence": _sweep_cp_convergence,
    "offwhite-quasi": _sweep_offwhite,
}


def _cmd_sweep(args):
    spec = _load_json(args.spec)
    kind = spec.get("kind")
    if kind not in _SWEEPS:
        raise UsageError(f"unknown sweep kind {kind!r}; known: {sorted(_SWEEPS)}")
    seed = os.environ.get("NCDYN_SEED")
    seed = int(seed) if seed is not None else args.seed
    rng = np.random.default_rng(seed if seed is not None else 0)
    header, rows = _SWEEPS[kind](spec, rng)
    text = _csv_lines(header, rows)
    _write_report(text, args.out, args.no_fig,
                  lambda p: plotting.render_sweep(header, rows, p))


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="ncdyn",
        description="numerical workbench for quantum dynamical semigroups, "
        "moment polynomials, product-system indices, and off-white-noise diagnostics",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eig", help="ordered eigensystem of a Hermitian matrix")
    p.add_argument("--matrix", required=True)
    p.set_defaults(fn=_cmd_eig)

    p = sub.add_parser("interaction-bound", help="l1 distance of tensor-squared eigenvalue lists")
    p.add_argument("--minus", required=True)
    p.add_argument("--plus", required=True)
    p.set_defaults(fn=_cmd_interaction_bound)

    p = sub.add_parser("cp", help="CP semigroup tools")
    p.add_argument("action", choices=["stationary", "evolve"])
    p.add_argument("--spectrum")
    p.add_argument("--gen")
    p.add_argument("--t", type=float, default=1.0)
    p.set_defaults(fn=_cmd_cp)

    p = sub.add_parser("moments", help="evaluate a moment polynomial")
    p.add_argument("--gen", required=True)
    p.add_argument("--times", required=True)
    p.add_argument("--mats", required=True)
    p.set_defaults(fn=_cmd_moments)

    p = sub.add_parser("dilate", help="minimal Stinespring data / word expectations")
    p.add_argument("action", nargs="?", choices=["expect"])
    p.add_argument("--map", required=True)
    p.add_argument("--times")
    p.add_argument("--mats")
    p.add_argument("--unital", action="store_true")
    p.set_defaults(fn=_cmd_dilate)

    p = sub.add_parser("freeprod", help="section algebra over time words")
    p.add_argument("action", choices=["mul", "expect"])
    p.add_argument("--lhs")
    p.add_argument("--rhs")
    p.add_argument("--section")
    p.add_argument("--gen")
    p.set_defaults(fn=_cmd_freeprod)

    p = sub.add_parser("index", help="index of a sampled unit set or raw kernel")
    p.add_argument("--units", required=True)
    p.set_defaults(fn=_cmd_index)

    p = sub.add_parser("gauge", help="gauge group arithmetic")
    p.add_argument("action", choices=["mul", "inv"])
    p.add_argument("--lhs")
    p.add_argument("--rhs")
    p.add_argument("--g")
    p.set_defaults(fn=_cmd_gauge)

    p = sub.add_parser("offwhite", help="correlation Gram matrices and diagnostics")
    p.add_argument("action", choices=["gram", "quasi"])
    p.add_argument("--theta", type=float, default=2.0)
    p.add_argument("--delta", type=float, default=0.05)
    p.add_argument("--interval", default="0,1")
    p.add_argument("--n", type=int, default=200)
    p.add_argument("--intervals", default="0,1,1,2")
    p.add_argument("--refine", default="50,100,200")
    p.add_argument("--out")
    p.add_argument("--no-fig", action="store_true")
    p.set_defaults(fn=_cmd_offwhite)

    p = sub.add_parser("sweep", help="reproducible parameter sweeps (CSV)")
    p.add_argument("--spec", required=True)
    p.add_argument("--seed", type=int)
    p.add_argument("--out")
    p.add_argument("--no-fig", action="store_true")
    p.set_defaults(fn=_cmd_sweep)

    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        args.fn(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except ReportIOError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 5
    except FileNotFoundError as exc:
        print(f"file not found: {exc.filename}", file=sys.stderr)
        return 3
    except NcdynError as exc:
        print(f"validation error: {exc}", file=sys.stderr)
        return 4
    except (OSError, json.JSONDecodeError) as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 5
    return 0


if __name__ == "__main__":
    sys.exit(main())
