"""JSON codecs and deterministic serialization.

Matrix encoding (shared by every file format and CLI output):

    {"rows": n, "cols": m, "re": [...], "im": [...]}     row-major

Floats are written with 17 significant digits so doubles round-trip
losslessly and two runs with the same seed emit identical bytes.  Objects
keep their construction order; the writer never reorders keys.
"""

from __future__ import annotations

import json
from fractions import Fraction

import numpy as np

from .cpdyn import GKLSGenerator
from .errors import DimensionMismatch
from .freeprod import FreeWord, Section
from .prodsys import ExpUnit, GaugeElement

SCHEMA_VERSION = 1


def format_float(x: float) -> str:
    if x != x or x in (float("inf"), float("-inf")):
        raise ValueError(f"cannot serialize non-finite float {x}")
    if x == int(x) and abs(x) < 1e16:
        return format(x, ".1f")
    return format(x, ".17g")


def dumps(obj) -> str:
    """Deterministic JSON with 17-significant-digit floats."""
    out = []
    _write(obj, out)
    return "".join(out)


def _write(obj, out):
    if obj is None:
        out.append("null")
    elif obj is True:
        out.append("true")
    elif obj is False:
        out.append("false")
    elif isinstance(obj, str):
        out.append(json.dumps(obj))
    elif isinstance(obj, (int, np.integer)):
        out.append(str(int(obj)))
    elif isinstance(obj, (float, np.floating)):
        out.append(format_float(float(obj)))
    elif isinstance(obj, (complex, np.complexfloating)):
        _write({"re": obj.real, "im": obj.imag}, out)
    elif isinstance(obj, dict):
        out.append("{")
        for i, (k, v) in enumerate(obj.items()):
            if i:
                out.append(",")
            out.append(json.dumps(str(k)))
            out.append(":")
            _write(v, out)
        out.append("}")
    elif isinstance(obj, (list, tuple, np.ndarray)):
        seq = obj.tolist() if isinstance(obj, np.ndarray) else obj
        out.append("[")
        for i, v in enumerate(seq):
            if i:
                out.append(",")
            _write(v, out)
        out.append("]")
    else:
        raise TypeError(f"cannot serialize {type(obj).__name__}")


# matrices


def matrix_to_json(a) -> dict:
    a = np.asarray(a, dtype=np.complex128)
    if a.ndim != 2:
        raise DimensionMismatch(f"expected a matrix, got ndim={a.ndim}")
    return {
        "rows": a.shape[0],
        "cols": a.shape[1],
        "re": [float(x) for x in a.real.ravel()],
        "im": [float(x) for x in a.imag.ravel()],
    }


def matrix_from_json(d) -> np.ndarray:
    rows, cols = int(d["rows"]), int(d["cols"])
    re = np.asarray(d["re"], dtype=float)
    im = np.asarray(d.get("im", np.zeros(rows * cols)), dtype=float)
    if re.size != rows * cols or im.size != rows * cols:
        raise DimensionMismatch(
            f"matrix payload has {re.size} entries for shape {rows}x{cols}"
        )
    return (re + 1j * im).reshape(rows, cols)


def vector_to_json(v) -> dict:
    v = np.asarray(v, dtype=np.complex128).ravel()
    return {"re": [float(x) for x in v.real], "im": [float(x) for x in v.imag]}


def vector_from_json(d) -> np.ndarray:
    re = np.asarray(d["re"], dtype=float)
    im = np.asarray(d.get("im", np.zeros(re.size)), dtype=float)
    return re + 1j * im


# generators


def generator_to_json(gen: GKLSGenerator) -> dict:
    return {
        "hamiltonian": matrix_to_json(gen.hamiltonian),
        "jumps": [matrix_to_json(v) for v in gen.jumps],
    }


def generator_from_json(d) -> GKLSGenerator:
    return GKLSGenerator(
        matrix_from_json(d["hamiltonian"]),
        tuple(matrix_from_json(v) for v in d.get("jumps", [])),
    )


# free-product sections


def _time_to_json(t: Fraction) -> str:
    return f"{t.numerator}/{t.denominator}" if t.denominator != 1 else str(t.numerator)


def section_to_json(f: Section) -> dict:
    terms = []
    for word in sorted(f.terms, key=lambda w: tuple(w.times)):
        terms.append(
            {
                "word": [_time_to_json(t) for t in word.times],
                "tensors": [[matrix_to_json(a) for a in tensor] for tensor in f.terms[word]],
            }
        )
    return {"dim": f.dim, "terms": terms}


def section_from_json(d) -> Section:
    """Read a section; accepts {"dim", "terms"} or a bare list of terms."""
    terms = d["terms"] if isinstance(d, dict) else d
    dim = int(d["dim"]) if isinstance(d, dict) else None
    out = {}
    for term in terms:
        word = FreeWord(tuple(term["word"]))
        tensors = tuple(
            tuple(matrix_from_json(a) for a in tensor) for tensor in term["tensors"]
        )
        if dim is None:
            dim = tensors[0][0].shape[0]
        out[word] = out.get(word, ()) + tensors
    if dim is None:
        raise DimensionMismatch("cannot infer the dimension of an empty bare-list section")
    return Section(dim=dim, terms=out)


# units and gauge elements


def unit_to_json(u: ExpUnit) -> dict:
    return {"a": [u.a.real, u.a.imag], "zeta": vector_to_json(u.zeta)}


def unit_from_json(d) -> ExpUnit:
    a = d["a"]
    return ExpUnit(complex(a[0], a[1]), vector_from_json(d["zeta"]))


def gauge_to_json(g: GaugeElement) -> dict:
    return {"lambda": g.lam, "xi": vector_to_json(g.xi), "u": matrix_to_json(g.u)}


def gauge_from_json(d) -> GaugeElement:
    return GaugeElement(float(d["lambda"]), vector_from_json(d["xi"]), matrix_from_json(d["u"]))
