"""Measure spec documents, report JSON and CSV output.

Spec format (JSON)::

    {"components": [
        {"type": "atom", "point": [re, im], "weight": [re, im]},
        {"type": "circle_fourier", "coeffs": {"k": [re, im], ...}},
        {"type": "bergman", "alpha": 5, "density": [[p, q, [re, im]], ...]},
        {"type": "lens_harmonic", "c": 0.3, "density": [...],
         "tag": {"name": "inv_abs_g_sq", "a": [re, im], "alpha": 5},
         "samples": [[re, im, density], ...]}
    ], "max_degree": 64}

Floats are written with ``repr`` so parse -> serialize -> parse is exact.
Reports use 17 significant digits.
"""

import csv
import json
import math
import re

import numpy as np

from .errors import CapabilityError, SpecParseError
from .measure import (DEFAULT_MAX_DEGREE, Atom, BergmanWeight, CircleFourier, ComplexMeasure,
                      InvAbsGSq, LensHarmonic, Poly2)

KNOWN_TYPES = ("atom", "circle_fourier", "bergman", "lens_harmonic")


def _component_lines(text):
    """Line numbers of successive ``"type"`` keys, used to locate component errors."""
    return [text.count("\n", 0, m.start()) + 1 for m in re.finditer(r'"type"\s*:', text)]


def _complex(value, field, line):
    if (not isinstance(value, (list, tuple)) or len(value) != 2
            or not all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in value)):
        raise SpecParseError(f"expected [re, im], got {value!r}", field, line)
    re_, im_ = float(value[0]), float(value[1])
    if not (math.isfinite(re_) and math.isfinite(im_)):
        raise SpecParseError("complex entries must be finite", field, line)
    return complex(re_, im_)


def _real(value, field, line):
    if not isinstance(value, (int, float)) or isinstance(value, bool) or not math.isfinite(value):
        raise SpecParseError(f"expected a finite number, got {value!r}", field, line)
    return float(value)


def _poly(value, field, line):
    if value is None:
        return Poly2()
    if not isinstance(value, list):
        raise SpecParseError("density must be a list of [p, q, [re, im]]", field, line)
    acc = {}
    for i, term in enumerate(value):
        f = f"{field}[{i}]"
        if not isinstance(term, list) or len(term) != 3:
            raise SpecParseError("density term must be [p, q, [re, im]]", f, line)
        p, q, c = term
        if not (isinstance(p, int) and isinstance(q, int)) or p < 0 or q < 0:
            raise SpecParseError("exponents must be nonnegative integers", f, line)
        acc[(p, q)] = acc.get((p, q), 0) + _complex(c, f, line)
    return Poly2.from_dict(acc)


def _parse_component(comp, idx, line):
    base = f"components[{idx}]"
    if not isinstance(comp, dict):
        raise SpecParseError("component must be an object", base, line)
    kind = comp.get("type")
    if kind not in KNOWN_TYPES:
        raise CapabilityError(f"unknown component type {kind!r} at {base}")
    if kind == "atom":
        if "point" not in comp:
            raise SpecParseError("missing field", f"{base}.point", line)
        w = comp.get("weight", [1.0, 0.0])
        return Atom(_complex(comp["point"], f"{base}.point", line), _complex(w, f"{base}.weight", line))
    if kind == "circle_fourier":
        coeffs = comp.get("coeffs")
        if not isinstance(coeffs, dict):
            raise SpecParseError("coeffs must be an object {k: [re, im]}", f"{base}.coeffs", line)
        d = {}
        for k, v in coeffs.items():
            try:
                kk = int(k)
            except ValueError:
                raise SpecParseError(f"Fourier index {k!r} is not an integer", f"{base}.coeffs", line) from None
            d[kk] = d.get(kk, 0) + _complex(v, f"{base}.coeffs.{k}", line)
        return CircleFourier.from_dict(d)
    if kind == "bergman":
        alpha = comp.get("alpha")
        if not isinstance(alpha, int) or isinstance(alpha, bool) or alpha < 0:
            raise SpecParseError("alpha must be a nonnegative integer", f"{base}.alpha", line)
        return BergmanWeight(alpha, _poly(comp.get("density"), f"{base}.density", line))
    c = _real(comp.get("c"), f"{base}.c", line)
    if not 0.0 < c < 1.0:
        raise SpecParseError("c must lie in (0, 1)", f"{base}.c", line)
    tag = comp.get("tag")
    if tag is not None:
        if not isinstance(tag, dict) or tag.get("name") != "inv_abs_g_sq":
            raise CapabilityError(f"unknown density tag at {base}.tag")
        alpha = tag.get("alpha", 5)
        if not isinstance(alpha, int) or alpha < 0:
            raise SpecParseError("alpha must be a nonnegative integer", f"{base}.tag.alpha", line)
        tag = InvAbsGSq(_complex(tag.get("a"), f"{base}.tag.a", line), alpha)
    samples = comp.get("samples", [])
    if not isinstance(samples, list):
        raise SpecParseError("samples must be a list", f"{base}.samples", line)
    samples = tuple(tuple(_real(v, f"{base}.samples", line) for v in row) for row in samples)
    return LensHarmonic(c, _poly(comp.get("density"), f"{base}.density", line), tag, samples)


def parse_measure_spec(text):
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SpecParseError(exc.msg, None, exc.lineno) from None
    if not isinstance(doc, dict) or "components" not in doc:
        raise SpecParseError("top level must be an object with a 'components' list", "components", 1)
    comps = doc["components"]
    if not isinstance(comps, list):
        raise SpecParseError("'components' must be a list", "components", 1)
    lines = _component_lines(text)
    out = []
    for i, comp in enumerate(comps):
        line = lines[i] if i < len(lines) else None
        out.append(_parse_component(comp, i, line))
    max_degree = doc.get("max_degree", DEFAULT_MAX_DEGREE)
    if not isinstance(max_degree, int) or max_degree < 0:
        raise SpecParseError("max_degree must be a nonnegative integer", "max_degree", None)
    return ComplexMeasure(tuple(out), max_degree)


def load_measure(path):
    with open(path, encoding="utf-8") as fh:
        return parse_measure_spec(fh.read())


def _cx(z):
    z = complex(z)
    return [z.real, z.imag]


def _poly_doc(poly):
    return [[p, q, _cx(c)] for p, q, c in poly.terms]


def measure_to_doc(mu):
    comps = []
    for comp in mu.components:
        if isinstance(comp, Atom):
            comps.append({"type": "atom", "point": _cx(comp.point), "weight": _cx(comp.weight)})
        elif isinstance(comp, CircleFourier):
            comps.append({"type": "circle_fourier", "coeffs": {str(k): _cx(c) for k, c in comp.coeffs}})
        elif isinstance(comp, BergmanWeight):
            d = {"type": "bergman", "alpha": comp.alpha}
            if not comp.density.is_one():
                d["density"] = _poly_doc(comp.density)
            comps.append(d)
        else:
            d = {"type": "lens_harmonic", "c": comp.c}
            if not comp.density.is_one():
                d["density"] = _poly_doc(comp.density)
            if comp.tag is not None:
                d["tag"] = {"name": "inv_abs_g_sq", "a": _cx(comp.tag.a), "alpha": comp.tag.alpha}
            if comp.samples:
                d["samples"] = [list(row) for row in comp.samples]
            comps.append(d)
    doc = {"components": comps}
    if mu.max_degree != DEFAULT_MAX_DEGREE:
        doc["max_degree"] = mu.max_degree
    return doc


def serialize_measure(mu):
    """Spec text; Python's ``repr`` float formatting makes the round trip exact."""
    return json.dumps(measure_to_doc(mu), indent=1)


# --- reports -----------------------------------------------------------------------------


def fmt(x):
    """A float at 17 significant digits (round-trips any double)."""
    x = float(x)
    if math.isnan(x):
        return '"nan"'
    if math.isinf(x):
        return '"inf"' if x > 0 else '"-inf"'
    return format(x, ".17g")


def to_plain(obj):
    """Convert numpy scalars/arrays, complex numbers and dataclasses to JSON-ready values."""
    if isinstance(obj, dict):
        return {str(k): to_plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [to_plain(v) for v in obj.tolist()]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        return [float(obj.real), float(obj.imag)]
    if isinstance(obj, (float, np.floating)):
        return float(obj)
    if obj is None or isinstance(obj, str):
        return obj
    if hasattr(obj, "__dataclass_fields__"):
        return {k: to_plain(getattr(obj, k)) for k in obj.__dataclass_fields__}
    return str(obj)


def dumps_report(obj, indent=1):
    """JSON text with every float at 17 significant digits; key order preserved."""
    return _dump(to_plain(obj), 0, indent) + "\n"


def _dump(obj, level, indent):
    pad = " " * (indent * (level + 1))
    end = " " * (indent * level)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(k)}: {_dump(v, level + 1, indent)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, list):
        if not obj:
            return "[]"
        if all(not isinstance(v, (dict, list)) for v in obj):
            return "[" + ", ".join(_dump(v, level + 1, indent) for v in obj) + "]"
        return "[\n" + ",\n".join(pad + _dump(v, level + 1, indent) for v in obj) + "\n" + end + "]"
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if isinstance(obj, float):
        return fmt(obj)
    if obj is None:
        return "null"
    if isinstance(obj, int):
        return str(obj)
    return json.dumps(obj)


def write_csv(path, columns, rows, comment):
    """CSV with a leading ``#`` comment row documenting the columns, then a header and the rows."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        fh.write(f"# {comment}\n")
        w = csv.writer(fh)
        w.writerow(columns)
        for row in rows:
            w.writerow([format(float(v), ".17g") if isinstance(v, (float, np.floating)) else v for v in row])
    return path
