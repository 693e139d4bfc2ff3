"""Reading and writing algebra definition documents.

A document is a JSON object::

    {
      "basis": ["H", "X"],
      "brackets": {"[H,X]": {"X": 1}},
      "metric": "identity",
      "arithmetic": "rational",
      "transversal": "H"
    }

Coefficients may be JSON numbers or strings such as ``"-3/2"``; decimals
are read exactly. ``metric`` is ``"identity"`` or a full symmetric
matrix. ``transversal`` (optional) names the basis element used as
``H0`` when a coordinate model is built for a unimodular algebra.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

import numpy as np

from .algebra import LieAlgebra
from .errors import ParseError, SolvCheegerError
from .metric import InnerProduct

_KEY = re.compile(r"^\[\s*([^,\[\];\s]+)\s*,\s*([^,\[\];\s]+)\s*\]$")

__all__ = ["AlgebraSpec", "parse_algebra", "load_algebra_file", "dump_algebra"]


@dataclass(frozen=True, eq=False)
class AlgebraSpec:
    algebra: LieAlgebra
    inner_product: InnerProduct
    transversal: str | None = None
    metric_is_identity: bool = False

    def transversal_vector(self):
        if self.transversal is None:
            return None
        return self.algebra.basis_vector(self.transversal).astype(float)


def _number(value, where):
    if isinstance(value, bool) or not isinstance(value, (int, Fraction, float, str)):
        raise ParseError(f"{where}: expected a number, got {value!r}")
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError):
            raise ParseError(f"{where}: cannot read {value!r} as a number") from None
    return Fraction(value) if not isinstance(value, float) else value


def parse_algebra(doc) -> AlgebraSpec:
    """Build an :class:`AlgebraSpec` from JSON text or an already-decoded dict."""
    if isinstance(doc, (str, bytes)):
        try:
            doc = json.loads(doc, parse_float=Fraction)
        except json.JSONDecodeError as exc:
            raise ParseError(f"line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    if not isinstance(doc, dict):
        raise ParseError("top level must be a JSON object")
    unknown = set(doc) - {"basis", "brackets", "metric", "arithmetic", "transversal"}
    if unknown:
        raise ParseError(f"unknown keys: {sorted(unknown)}")

    basis = doc.get("basis")
    if not isinstance(basis, list) or not basis or not all(isinstance(b, str) for b in basis):
        raise ParseError("'basis': expected a nonempty list of labels")
    if len(set(basis)) != len(basis):
        raise ParseError(f"'basis': labels are not distinct: {basis}")
    arithmetic = doc.get("arithmetic", "rational")
    if arithmetic not in ("rational", "float"):
        raise ParseError(f"'arithmetic': expected 'rational' or 'float', got {arithmetic!r}")

    brackets = {}
    raw = doc.get("brackets", {})
    if not isinstance(raw, dict):
        raise ParseError("'brackets': expected an object")
    for key, image in raw.items():
        match = _KEY.match(key)
        if not match:
            raise ParseError(f"brackets: malformed key {key!r} (expected '[A,B]')")
        a, b = match.groups()
        for lab in (a, b):
            if lab not in basis:
                raise ParseError(f"brackets: key {key!r} references undeclared label {lab!r}")
        if not isinstance(image, dict):
            raise ParseError(f"brackets[{key!r}]: expected an object label -> coefficient")
        coeffs = {}
        for lab, value in image.items():
            if lab not in basis:
                raise ParseError(f"brackets[{key!r}]: undeclared label {lab!r}")
            coeffs[lab] = _number(value, f"brackets[{key!r}][{lab!r}]")
        brackets[(a, b)] = coeffs

    n = len(basis)
    metric = doc.get("metric", "identity")
    identity = metric == "identity"
    if identity:
        gram = [[int(i == j) for j in range(n)] for i in range(n)]
    elif isinstance(metric, list) and len(metric) == n and all(
            isinstance(r, list) and len(r) == n for r in metric):
        gram = [[_number(v, f"metric[{i}][{j}]") for j, v in enumerate(row)]
                for i, row in enumerate(metric)]
    else:
        raise ParseError(f"'metric': expected 'identity' or a {n}x{n} matrix")
    if arithmetic == "float":
        gram = [[float(v) for v in row] for row in gram]

    transversal = doc.get("transversal")
    if transversal is not None and transversal not in basis:
        raise ParseError(f"'transversal': undeclared label {transversal!r}")

    try:
        alg = LieAlgebra(basis, brackets, arithmetic=arithmetic)
        ip = InnerProduct(gram)
    except SolvCheegerError:
        raise
    except (ValueError, TypeError) as exc:
        raise ParseError(str(exc)) from None
    return AlgebraSpec(alg, ip, transversal, identity)


def load_algebra_file(path) -> AlgebraSpec:
    return parse_algebra(Path(path).read_text())


def _emit(value):
    if isinstance(value, Fraction):
        return value.numerator if value.denominator == 1 else str(value)
    return float(value)


def dump_algebra(spec: AlgebraSpec) -> dict:
    """Inverse of :func:`parse_algebra` (as a JSON-ready dict)."""
    alg = spec.algebra
    labels = alg.basis_labels
    brackets = {}
    for (i, j), row in sorted(alg.brackets().items()):
        brackets[f"[{labels[i]},{labels[j]}]"] = {labels[k]: _emit(v) for k, v in sorted(row.items())}
    if spec.metric_is_identity:
        metric = "identity"
    else:
        g = spec.inner_product.exact_gram
        g = spec.inner_product.gram if g is None else g
        metric = [[_emit(v) for v in row] for row in np.asarray(g).tolist()]
    doc = {"basis": list(labels), "brackets": brackets, "metric": metric,
           "arithmetic": alg.arithmetic}
    if spec.transversal is not None:
        doc["transversal"] = spec.transversal
    return doc
