"""Built-in algebra definitions.

Fixed names: ``heisenberg``, ``axb``, ``sol``, ``complex-hyperbolic``.
Parametric names: ``abelian-<n>``, ``hyperbolic-<n>`` (``R^{n-1}`` with
``D = I``, the real hyperbolic n-space) and ``diag(l1,...,lm)`` for the
almost-abelian algebra ``[H, X_i] = l_i X_i``.
"""

from __future__ import annotations

import re
from fractions import Fraction

from .errors import ParseError
from .files import AlgebraSpec, parse_algebra

__all__ = ["catalog_names", "catalog_document", "load_catalog"]

_FIXED = {
    "heisenberg": {
        "basis": ["X", "Y", "Z"],
        "brackets": {"[X,Y]": {"Z": 1}},
        "transversal": "X",
    },
    "axb": {
        "basis": ["H", "X"],
        "brackets": {"[H,X]": {"X": 1}},
    },
    "sol": {
        "basis": ["H", "X", "Y"],
        "brackets": {"[H,X]": {"X": 1}, "[H,Y]": {"Y": -1}},
        "transversal": "H",
    },
    # Heisenberg x| R with ad H = diag(1, 1, 2): complex hyperbolic plane.
    "complex-hyperbolic": {
        "basis": ["X", "Y", "Z", "H"],
        "brackets": {"[X,Y]": {"Z": 1}, "[H,X]": {"X": 1}, "[H,Y]": {"Y": 1},
                     "[H,Z]": {"Z": 2}},
    },
}

_PARAMETRIC = ("abelian-<n>", "hyperbolic-<n>", "diag(l1,...,lm)")


def catalog_names() -> list[str]:
    return sorted(_FIXED) + list(_PARAMETRIC)


def catalog_document(name: str) -> dict:
    """AlgebraFile document for a catalog name (identity metric, rational)."""
    name = name.strip()
    if name in _FIXED:
        doc = dict(_FIXED[name])
    elif m := re.fullmatch(r"abelian-(\d+)", name):
        n = int(m.group(1))
        if n < 1:
            raise ParseError("abelian-n needs n >= 1")
        doc = {"basis": [f"E{i}" for i in range(1, n + 1)], "brackets": {},
               "transversal": f"E{n}"}
    elif m := re.fullmatch(r"hyperbolic-(\d+)", name):
        n = int(m.group(1))
        if n < 2:
            raise ParseError("hyperbolic-n needs n >= 2")
        xs = [f"X{i}" for i in range(1, n)]
        doc = {"basis": ["H", *xs], "brackets": {f"[H,{x}]": {x: 1} for x in xs}}
    elif m := re.fullmatch(r"diag\((.*)\)", name):
        try:
            lams = [Fraction(v.strip()) for v in m.group(1).split(",")]
        except (ValueError, ZeroDivisionError):
            raise ParseError(f"cannot read eigenvalues in {name!r}") from None
        xs = [f"X{i}" for i in range(1, len(lams) + 1)]
        doc = {"basis": ["H", *xs],
               "brackets": {f"[H,{x}]": {x: (int(l) if l.denominator == 1 else str(l))}
                            for x, l in zip(xs, lams) if l != 0}}
        if sum(lams) == 0:
            doc["transversal"] = "H"
    else:
        raise ParseError(f"unknown catalog entry {name!r}; known: {', '.join(catalog_names())}")
    doc.setdefault("metric", "identity")
    doc.setdefault("arithmetic", "rational")
    return doc


def load_catalog(name: str) -> AlgebraSpec:
    return parse_algebra(catalog_document(name))
