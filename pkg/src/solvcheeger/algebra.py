"""Finite-dimensional real Lie algebras given by structure constants.

An algebra is stored as a sparse map ``(i, j) -> {k: c_ijk}`` over
ordered pairs ``i < j`` with ``[e_i, e_j] = sum_k c_ijk e_k``; the
antisymmetric half is synthesized on demand.

Two arithmetic modes are supported. In ``"rational"`` mode every
coefficient is a :class:`fractions.Fraction` and classification
(Jacobi check, derived and lower central series) is exact. In
``"float"`` mode coefficients are 64-bit floats and subspace ranks are
decided by singular values above ``RANK_TOL``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from numbers import Rational, Real

import numpy as np

from . import _exact
from .errors import DimensionError, JacobiError

JACOBI_TOL = 1e-10
RANK_TOL = 1e-10

__all__ = [
    "LieAlgebra",
    "AdOperator",
    "bracket",
    "ad",
    "trace_form",
    "derived_series",
    "lower_central_series",
    "is_solvable",
    "is_nilpotent",
    "is_unimodular",
]


def _coerce(value, arithmetic):
    if arithmetic == "rational":
        if isinstance(value, bool):
            raise TypeError("boolean structure constant")
        if isinstance(value, Rational):
            return Fraction(value)
        if isinstance(value, str):
            return Fraction(value.strip())
        if isinstance(value, Real):
            # Floats in rational mode are read as their shortest decimal repr.
            return Fraction(repr(float(value)))
        raise TypeError(f"cannot use {value!r} as a rational structure constant")
    if isinstance(value, str):
        return float(Fraction(value.strip()))
    return float(value)


class LieAlgebra:
    """Real Lie algebra with basis labels and sparse structure constants.

    Parameters
    ----------
    basis_labels : sequence of str
        Distinct labels ``e_0 .. e_{n-1}``.
    brackets : mapping
        ``(a, b) -> {c: coeff}`` meaning ``[a, b] = sum coeff * c``.
        Keys may be labels or integer indices; either ordering of a pair
        is accepted (the reversed one is negated) but each unordered pair
        may appear only once.
    arithmetic : {"rational", "float"}
    jacobi_tol : float
        Residual allowed in float mode. Rational mode requires exact zero.

    Raises
    ------
    JacobiError
        If some basis triple violates the Jacobi identity.
    """

    def __init__(self, basis_labels, brackets=None, arithmetic="rational",
                 jacobi_tol=JACOBI_TOL):
        labels = tuple(str(lab) for lab in basis_labels)
        if not labels:
            raise DimensionError("a Lie algebra needs at least one basis element")
        if len(set(labels)) != len(labels):
            raise ValueError(f"basis labels are not distinct: {labels}")
        if arithmetic not in ("rational", "float"):
            raise ValueError(f"unknown arithmetic mode {arithmetic!r}")
        self._labels = labels
        self._arithmetic = arithmetic
        self._index = {lab: i for i, lab in enumerate(labels)}
        self.jacobi_tol = jacobi_tol

        zero = Fraction(0) if arithmetic == "rational" else 0.0
        self._zero = zero
        table = {}
        for key, image in (brackets or {}).items():
            a, b = key
            i, j = self._resolve(a), self._resolve(b)
            if i == j:
                if any(_coerce(c, arithmetic) != 0 for c in image.values()):
                    raise ValueError(f"[{labels[i]},{labels[i]}] must vanish")
                continue
            sign = 1
            if i > j:
                i, j, sign = j, i, -1
            if (i, j) in table:
                raise ValueError(f"bracket [{labels[i]},{labels[j]}] given twice")
            row = {}
            for target, coeff in image.items():
                c = _coerce(coeff, arithmetic) * sign
                if c != 0:
                    row[self._resolve(target)] = c
            if row:
                table[(i, j)] = row
        self._table = table
        self._check_jacobi()

    # -- construction helpers -------------------------------------------------

    def _resolve(self, key):
        if isinstance(key, (int, np.integer)) and not isinstance(key, bool):
            if not 0 <= key < len(self._labels):
                raise DimensionError(f"basis index {key} out of range")
            return int(key)
        try:
            return self._index[str(key)]
        except KeyError:
            raise KeyError(f"unknown basis label {key!r}") from None

    def _check_jacobi(self):
        n = self.dim
        eye = self._basis_vectors()
        for i, j, k in combinations(range(n), 3):
            x, y, z = eye[i], eye[j], eye[k]
            res = (bracket(bracket(x, y, self), z, self)
                   + bracket(bracket(y, z, self), x, self)
                   + bracket(bracket(z, x, self), y, self))
            if self.exact:
                bad = any(v != 0 for v in res)
                size = max((abs(v) for v in res), default=0)
            else:
                size = float(np.linalg.norm(res.astype(float)))
                bad = size > self.jacobi_tol
            if bad:
                raise JacobiError((self._labels[i], self._labels[j], self._labels[k]),
                                  size)

    def _basis_vectors(self):
        n = self.dim
        eye = np.empty((n, n), dtype=object if self.exact else float)
        for i in range(n):
            for j in range(n):
                eye[i, j] = (Fraction(1) if i == j else Fraction(0)) if self.exact \
                    else float(i == j)
        return eye

    # -- accessors --------------------------------------------------------------

    @property
    def dim(self) -> int:
        return len(self._labels)

    @property
    def basis_labels(self) -> tuple[str, ...]:
        return self._labels

    @property
    def arithmetic(self) -> str:
        return self._arithmetic

    @property
    def exact(self) -> bool:
        return self._arithmetic == "rational"

    def index(self, label) -> int:
        return self._resolve(label)

    def brackets(self):
        """Stored brackets as ``{(i, j): {k: c}}`` with ``i < j``."""
        return {key: dict(row) for key, row in self._table.items()}

    def structure_tensor(self) -> np.ndarray:
        """Dense float tensor ``c[i, j, k]`` with both antisymmetric halves."""
        n = self.dim
        c = np.zeros((n, n, n))
        for (i, j), row in self._table.items():
            for k, v in row.items():
                c[i, j, k] = float(v)
                c[j, i, k] = -float(v)
        return c

    def basis_vector(self, label):
        v = self.zeros()
        v[self._resolve(label)] = Fraction(1) if self.exact else 1.0
        return v

    def zeros(self):
        if self.exact:
            return np.array([Fraction(0)] * self.dim, dtype=object)
        return np.zeros(self.dim)

    def to_float(self) -> "LieAlgebra":
        """Same algebra in float mode."""
        data = {(i, j): {k: float(v) for k, v in row.items()}
                for (i, j), row in self._table.items()}
        return LieAlgebra(self._labels, data, arithmetic="float",
                          jacobi_tol=self.jacobi_tol)

    def __eq__(self, other):
        if not isinstance(other, LieAlgebra):
            return NotImplemented
        return (self._labels == other._labels and self._arithmetic == other._arithmetic
                and self._table == other._table)

    def __hash__(self):
        return hash((self._labels, self._arithmetic,
                     tuple(sorted((k, tuple(sorted(v.items()))) for k, v in self._table.items()))))

    def __repr__(self):
        parts = []
        for (i, j), row in sorted(self._table.items()):
            rhs = " + ".join(f"{v}*{self._labels[k]}" for k, v in sorted(row.items()))
            parts.append(f"[{self._labels[i]},{self._labels[j]}]={rhs}")
        return f"LieAlgebra({', '.join(self._labels)}; {'; '.join(parts) or 'abelian'})"


@dataclass(frozen=True, eq=False)
class AdOperator:
    """Matrix of ``ad(H)`` in the algebra's basis; column j is ``[H, e_j]``."""

    matrix: np.ndarray
    argument: np.ndarray

    def trace(self):
        return sum(self.matrix[i, i] for i in range(self.matrix.shape[0]))


def _vector(x, alg):
    arr = np.asarray(x, dtype=object if alg.exact else None)
    if arr.ndim != 1 or arr.shape[0] != alg.dim:
        raise DimensionError(f"expected a coefficient vector of length {alg.dim}, "
                             f"got shape {arr.shape}")
    if alg.exact and _exact.is_exact(arr):
        return _exact.to_fraction_array(arr), True
    return arr.astype(float), False


def bracket(x, y, alg: LieAlgebra):
    """Lie bracket of two coefficient vectors.

    Exact (object array of Fractions) when the algebra is rational and
    both arguments have rational entries; float otherwise.
    """
    xv, ex = _vector(x, alg)
    yv, ey = _vector(y, alg)
    exact = ex and ey
    if exact:
        out = alg.zeros()
    else:
        xv, yv = xv.astype(float), yv.astype(float)
        out = np.zeros(alg.dim)
    for (i, j), row in alg._table.items():
        coef = xv[i] * yv[j] - xv[j] * yv[i]
        if coef == 0:
            continue
        for k, c in row.items():
            out[k] += coef * (c if exact else float(c))
    return out


def ad(H, alg: LieAlgebra) -> AdOperator:
    """Adjoint operator ``ad(H) = [H, .]`` as a matrix."""
    hv, exact = _vector(H, alg)
    n = alg.dim
    cols = [bracket(hv, alg.basis_vector(j), alg) for j in range(n)]
    mat = np.array(cols, dtype=object if exact else float).T
    return AdOperator(matrix=mat, argument=hv)


def trace_form(alg: LieAlgebra):
    """Covector ``alpha_i = tr ad(e_i) = sum_j c[i][j][j]``."""
    alpha = alg.zeros()
    for (i, j), row in alg._table.items():
        # c[i][j][j] feeds tr ad(e_i); c[j][i][i] = -c[i][j][i] feeds tr ad(e_j).
        alpha[i] += row.get(j, 0)
        alpha[j] -= row.get(i, 0)
    return alpha


def _span(vectors, alg):
    """Basis (rows) of the span of ``vectors``; rank-revealing."""
    vectors = list(vectors)
    if not vectors:
        return np.zeros((0, alg.dim), dtype=object if alg.exact else float)
    if alg.exact and all(_exact.is_exact(v) for v in vectors):
        rows = _exact.row_reduce(vectors)
        if not rows:
            return np.zeros((0, alg.dim), dtype=object)
        return np.array(rows, dtype=object)
    mat = np.array(vectors, dtype=float)
    _, s, vt = np.linalg.svd(mat)
    r = int(np.sum(s > RANK_TOL))
    return vt[:r]


def _bracket_span(left, right, alg):
    return _span([bracket(x, y, alg) for x in left for y in right], alg)


def derived_series(alg: LieAlgebra) -> list[np.ndarray]:
    """Bases of ``g, [g,g], [[g,g],[g,g]], ...`` until the dimension stabilizes.

    Each entry is a 2-D array whose rows span the term. The list ends
    with a 0-row array exactly when the algebra is solvable.
    """
    current = _span(list(alg._basis_vectors()), alg)
    series = [current]
    while current.shape[0] > 0:
        nxt = _bracket_span(current, current, alg)
        if nxt.shape[0] == current.shape[0]:
            break
        series.append(nxt)
        current = nxt
    return series


def lower_central_series(alg: LieAlgebra) -> list[np.ndarray]:
    """Bases of ``g, [g,g], [g,[g,g]], ...`` until the dimension stabilizes."""
    full = _span(list(alg._basis_vectors()), alg)
    current = full
    series = [current]
    while current.shape[0] > 0:
        nxt = _bracket_span(full, current, alg)
        if nxt.shape[0] == current.shape[0]:
            break
        series.append(nxt)
        current = nxt
    return series


def is_solvable(alg: LieAlgebra) -> bool:
    return derived_series(alg)[-1].shape[0] == 0


def is_nilpotent(alg: LieAlgebra) -> bool:
    return lower_central_series(alg)[-1].shape[0] == 0


def is_unimodular(alg: LieAlgebra) -> bool:
    alpha = trace_form(alg)
    if alg.exact:
        return all(a == 0 for a in alpha)
    return float(np.max(np.abs(alpha.astype(float)))) <= RANK_TOL
