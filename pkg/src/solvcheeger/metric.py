"""Left-invariant inner products and the splitting g = g0 + R*h0.

``g0`` is the kernel of the trace form ``alpha(X) = tr ad X`` and ``h0``
the unit vector orthogonal to it on which ``alpha`` is positive. Since
``alpha`` is linear its maximum over the unit sphere is the dual norm
``sqrt(alpha^T G^{-1} alpha)``, attained at the normalized metric dual of
``alpha``; no iterative optimizer is involved.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import _exact
from .algebra import LieAlgebra, is_solvable, trace_form
from .errors import DimensionError, NotPositiveDefinite, NotSolvable

PD_TOL = 1e-12

__all__ = ["InnerProduct", "MetricSplitting", "dual_norm", "split"]


class InnerProduct:
    """Symmetric positive-definite Gram matrix on the Lie algebra.

    Entries may be ints, Fractions, ``"p/q"`` strings or floats. When all
    entries are rational the exact Gram matrix is kept alongside the float
    one so that :func:`dual_norm` can run in exact arithmetic.
    """

    def __init__(self, gram):
        raw = np.asarray(gram, dtype=object)
        if raw.ndim != 2 or raw.shape[0] != raw.shape[1] or raw.shape[0] == 0:
            raise DimensionError(f"Gram matrix must be square, got shape {raw.shape}")
        raw = np.vectorize(lambda v: Fraction(v.strip()) if isinstance(v, str) else v,
                           otypes=[object])(raw)
        self._exact = _exact.to_fraction_array(raw) if _exact.is_exact(raw) else None
        g = raw.astype(float)
        if not np.array_equal(g, g.T) or (
                self._exact is not None and not np.array_equal(self._exact, self._exact.T)):
            raise NotPositiveDefinite("Gram matrix is not symmetric")
        eig = np.linalg.eigvalsh(g)
        if eig[0] <= PD_TOL:
            raise NotPositiveDefinite(f"Gram matrix is not positive definite "
                                      f"(smallest eigenvalue {eig[0]:.3g})")
        g.setflags(write=False)
        self._gram = g

    @classmethod
    def identity(cls, n: int) -> "InnerProduct":
        return cls([[int(i == j) for j in range(n)] for i in range(n)])

    @property
    def gram(self) -> np.ndarray:
        return self._gram

    @property
    def exact_gram(self):
        """Object array of Fractions, or None if any entry was a float."""
        return None if self._exact is None else self._exact.copy()

    @property
    def dim(self) -> int:
        return self._gram.shape[0]

    def inner(self, u, v) -> float:
        return float(np.asarray(u, float) @ self._gram @ np.asarray(v, float))

    def norm(self, v) -> float:
        return float(np.sqrt(self.inner(v, v)))

    def scaled(self, c) -> "InnerProduct":
        """Inner product with Gram matrix ``c**2 * gram``."""
        if self._exact is not None and _exact.is_exact([c]):
            c = Fraction(c)
            return InnerProduct(self._exact * (c * c))
        return InnerProduct(self._gram * float(c) ** 2)

    def orthonormalize(self, vectors, tol=1e-8):
        """Gram-Schmidt in this inner product; near-dependent vectors are dropped."""
        basis = []
        for v in vectors:
            w = np.asarray(v, dtype=float).copy()
            for _ in range(2):  # second pass for re-orthogonalization
                for b in basis:
                    w -= self.inner(b, w) * b
            nrm = self.norm(w)
            if nrm > tol:
                basis.append(w / nrm)
        return basis

    def __repr__(self):
        return f"InnerProduct({self._gram.tolist()})"


@dataclass(frozen=True, eq=False)
class MetricSplitting:
    """Orthogonal decomposition ``g = g0 + R*h0`` with ``tau = tr ad h0``.

    ``g0_basis`` holds ip-orthonormal vectors (rows). In the unimodular
    case it spans all of g, ``h0`` is None and ``tau`` is 0.
    """

    g0_basis: np.ndarray
    h0: np.ndarray | None
    tau: float | Fraction

    @property
    def unimodular(self) -> bool:
        return self.h0 is None


def dual_norm(alpha, ip: InnerProduct):
    """``max_{|H|=1} alpha(H) = sqrt(alpha^T G^{-1} alpha)``.

    Returns an exact Fraction when alpha and the Gram matrix are rational
    and the result is a rational square root; a float otherwise.
    """
    alpha = np.asarray(alpha, dtype=object)
    if alpha.shape != (ip.dim,):
        raise DimensionError(f"covector of length {alpha.shape} does not match "
                             f"inner product of dimension {ip.dim}")
    gram = ip.exact_gram
    if gram is not None and _exact.is_exact(alpha):
        a = [Fraction(v) for v in alpha]
        if all(v == 0 for v in a):
            return Fraction(0)
        y = _exact.solve(gram.tolist(), a)
        q = sum(ai * yi for ai, yi in zip(a, y))
        return _exact.exact_sqrt(q)
    a = alpha.astype(float)
    if not np.any(a):
        return 0.0
    chol = np.linalg.cholesky(ip.gram)
    z = np.linalg.solve(chol, a)  # |z|^2 = a^T G^{-1} a
    return float(np.linalg.norm(z))


def _metric_dual(alpha, ip):
    return np.linalg.solve(ip.gram, np.asarray(alpha, dtype=float))


def split(alg: LieAlgebra, ip: InnerProduct) -> MetricSplitting:
    """Split off the direction maximizing the trace form on the unit sphere."""
    if ip.dim != alg.dim:
        raise DimensionError(f"inner product has dimension {ip.dim}, algebra {alg.dim}")
    if not is_solvable(alg):
        raise NotSolvable(f"{alg!r} is not solvable")
    alpha = trace_form(alg)
    tau = dual_norm(alpha, ip)
    eye = np.eye(alg.dim)
    if tau == 0:
        g0 = ip.orthonormalize(eye)
        return MetricSplitting(g0_basis=np.array(g0), h0=None, tau=tau)
    h0 = _metric_dual(alpha, ip) / float(tau)
    g0 = ip.orthonormalize([h0, *eye])[1:]
    return MetricSplitting(g0_basis=np.array(g0), h0=h0, tau=tau)
