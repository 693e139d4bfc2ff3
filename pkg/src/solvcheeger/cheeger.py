"""Cheeger constant of a simply connected solvable Lie group.

For solvable G with left-invariant metric, ``h(G)`` is the maximum of
``tr ad(H)`` over unit vectors ``H``; it vanishes exactly on unimodular
groups (solvable groups are amenable, so unimodularity is the only
obstruction).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import _exact
from .algebra import LieAlgebra, is_solvable, trace_form
from .errors import DimensionError, NotSolvable
from .metric import InnerProduct, dual_norm, split

__all__ = ["CheegerResult", "cheeger_constant", "scaling_law"]


@dataclass(frozen=True, eq=False)
class CheegerResult:
    h: float | Fraction
    maximizer: np.ndarray | None
    unimodular: bool

    def __post_init__(self):
        if (self.h == 0) != self.unimodular:
            raise ValueError("h == 0 must coincide with unimodularity")


def cheeger_constant(alg: LieAlgebra, ip: InnerProduct) -> CheegerResult:
    """Compute ``h(G) = max_{|H|=1} tr ad(H)``.

    Raises
    ------
    NotSolvable
        The closed form is only valid for solvable algebras.
    NotPositiveDefinite
        Propagated from :class:`InnerProduct`.
    """
    if ip.dim != alg.dim:
        raise DimensionError(f"inner product has dimension {ip.dim}, algebra {alg.dim}")
    if not is_solvable(alg):
        raise NotSolvable(f"{alg!r} is not solvable; h(G) is not computed")
    h = dual_norm(trace_form(alg), ip)
    if h == 0:
        return CheegerResult(h=h, maximizer=None, unimodular=True)
    return CheegerResult(h=h, maximizer=split(alg, ip).h0, unimodular=False)


def scaling_law(result: CheegerResult, c) -> CheegerResult:
    """Result for the metric ``c**2 * gram``: h becomes h/c.

    The maximizer keeps its direction and is rescaled to unit length in
    the new metric.
    """
    if not c > 0:
        raise ValueError(f"scale factor must be positive, got {c}")
    if isinstance(result.h, Fraction) and _exact.is_exact([c]):
        h = result.h / Fraction(c)
    else:
        h = float(result.h) / float(c)
    if result.maximizer is None:
        return CheegerResult(h=h, maximizer=None, unimodular=True)
    return CheegerResult(h=h, maximizer=result.maximizer / float(c), unimodular=False)
