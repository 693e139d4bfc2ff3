"""Coordinate models of ``G = G0 x| R``.

A point is an array ``(x_1, ..., x_m, t)`` standing for
``exp(x) exp(t H0)``, where ``x`` are coordinates in an ip-orthonormal
basis of ``g0``. With ``D = ad(H0)|g0`` and the group law on ``G0`` given
by the (exact, step <= 2) BCH product ``x * y = x + y + [x, y]/2``::

    (x, s) . (y, t) = (x * e^{sD} y, s + t)

In these coordinates the left Haar measure is ``e^{-t tr D} dx dt`` and
the left-invariant metric is block diagonal with horizontal block
``B^T B``, ``B = e^{-tD} (I - ad_x / 2)``, and vertical entry 1.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np
from scipy.linalg import expm

from .algebra import LieAlgebra, bracket, is_solvable, trace_form
from .errors import DimensionError, NotSolvable, UnsupportedG0
from .metric import InnerProduct, split

FD_STEP = 1e-5
_ZERO_TOL = 1e-10

__all__ = [
    "ModelKind",
    "SemidirectModel",
    "HaarDensity",
    "build_model",
    "model_from_matrix",
    "haar_density",
    "jacobian_oracle",
    "metric_tensor",
    "volume_density",
]


class ModelKind(enum.Enum):
    ALMOST_ABELIAN = "almost-abelian"
    STEP2_NILPOTENT = "step2-nilpotent"


@dataclass(frozen=True, eq=False)
class SemidirectModel:
    """Explicit realization of ``G0 x| R`` in exponential coordinates.

    Attributes
    ----------
    kind : ModelKind
    d_matrix : (m, m) ndarray
        ``ad(H0)`` restricted to ``g0`` in the orthonormal ``g0`` basis.
    g0_structure : (m, m, m) ndarray
        Structure constants of ``g0`` in that basis (zero when abelian).
    tau : float
        ``tr D = tr ad(H0)``.
    h0, g0_basis :
        Ambient coordinates of ``H0`` and of the ``g0`` basis (rows);
        None for models built directly from a matrix.
    """

    kind: ModelKind
    d_matrix: np.ndarray
    g0_structure: np.ndarray
    tau: float
    h0: np.ndarray | None = None
    g0_basis: np.ndarray | None = None

    @property
    def m(self) -> int:
        return self.d_matrix.shape[0]

    @property
    def dim(self) -> int:
        return self.m + 1

    def exp_d(self, s) -> np.ndarray:
        """``e^{sD}``; ``s`` may be an array, giving a stack of matrices."""
        s = np.asarray(s, dtype=float)
        return expm(s[..., None, None] * self.d_matrix)

    def ad_g0(self, x) -> np.ndarray:
        """Matrix of ``y -> [x, y]`` on g0; batched over leading axes of x."""
        # column j of ad_x is sum_i x_i c[i, j, :]
        return np.einsum("...i,ijk->...kj", np.asarray(x, float), self.g0_structure)

    def g0_bracket(self, x, y) -> np.ndarray:
        return np.einsum("i,j,ijk->k", x, y, self.g0_structure)

    def g0_multiply(self, x, y) -> np.ndarray:
        return x + y + 0.5 * self.g0_bracket(x, y)

    def multiply(self, p, q) -> np.ndarray:
        p, q = np.asarray(p, float), np.asarray(q, float)
        x, s = p[:-1], p[-1]
        y, t = q[:-1], q[-1]
        return np.append(self.g0_multiply(x, self.exp_d(s) @ y), s + t)

    def inverse(self, p) -> np.ndarray:
        p = np.asarray(p, float)
        x, s = p[:-1], p[-1]
        # (x, s)^{-1} = (e^{-sD}(-x), -s); -x is the G0-inverse in exp coordinates.
        return np.append(self.exp_d(-s) @ (-x), -s)

    def horizontal_frame(self, x, t) -> np.ndarray:
        """``B = e^{-tD}(I - ad_x/2)``; batched over leading axes of x and t."""
        x = np.asarray(x, float)
        eye = np.eye(self.m)
        core = eye - 0.5 * self.ad_g0(x) if self.kind is ModelKind.STEP2_NILPOTENT \
            else np.broadcast_to(eye, x.shape[:-1] + (self.m, self.m))
        return self.exp_d(-np.asarray(t, float)) @ core


@dataclass(frozen=True)
class HaarDensity:
    """``delta(t) = exp(-t tau)``: left Haar density w.r.t. ``dnu dt``."""

    tau: float

    def evaluate(self, t):
        return np.exp(-np.asarray(t, float) * self.tau)

    __call__ = evaluate


def _complement_is_ideal(alg, ip, h0, basis):
    """Residual of brackets landing outside span(basis)."""
    gram = ip.gram
    worst = 0.0

    def residual(w):
        coords = basis @ gram @ w
        return float(np.linalg.norm(w - basis.T @ coords))

    for i, u in enumerate(basis):
        worst = max(worst, residual(bracket(h0, u, alg)))
        for v in basis[i + 1:]:
            worst = max(worst, residual(bracket(u, v, alg)))
    return worst


def build_model(alg: LieAlgebra, ip: InnerProduct, h0=None) -> SemidirectModel:
    """Realize ``alg`` with metric ``ip`` as ``G0 x| R``.

    For a non-unimodular algebra ``H0`` defaults to the unit maximizer of
    the trace form. A unimodular algebra needs an explicit transversal
    ``h0`` whose orthogonal complement is an ideal.

    Raises
    ------
    NotSolvable
    UnsupportedG0
        If ``g0`` is not an ideal, or is neither abelian nor 2-step
        nilpotent.
    """
    if ip.dim != alg.dim:
        raise DimensionError(f"inner product has dimension {ip.dim}, algebra {alg.dim}")
    if not is_solvable(alg):
        raise NotSolvable(f"{alg!r} is not solvable")
    if alg.dim < 2:
        raise UnsupportedG0("a semidirect model needs dim >= 2")
    falg = alg.to_float() if alg.exact else alg
    if h0 is None:
        splitting = split(alg, ip)
        if splitting.unimodular:
            raise ValueError("unimodular algebra: pass an explicit transversal h0")
        h0 = splitting.h0
    h0 = np.asarray(h0, dtype=float)
    if h0.shape != (alg.dim,):
        raise DimensionError(f"h0 must have length {alg.dim}")
    h0 = h0 / ip.norm(h0)
    if float(trace_form(falg) @ h0) < 0:
        h0 = -h0
    basis = np.array(ip.orthonormalize([h0, *np.eye(alg.dim)])[1:])

    scale = max(1.0, float(np.abs(falg.structure_tensor()).max(initial=0.0)))
    if _complement_is_ideal(falg, ip, h0, basis) > _ZERO_TOL * scale:
        raise UnsupportedG0("the orthogonal complement of h0 is not an ideal")

    gram = ip.gram
    m = basis.shape[0]
    d = np.column_stack([basis @ gram @ bracket(h0, u, falg) for u in basis])
    c = np.zeros((m, m, m))
    for i in range(m):
        for j in range(m):
            c[i, j] = basis @ gram @ bracket(basis[i], basis[j], falg)
    d[np.abs(d) < 1e-14 * scale] = 0.0
    c[np.abs(c) < 1e-14 * scale] = 0.0

    if np.abs(c).max(initial=0.0) <= _ZERO_TOL * scale:
        kind = ModelKind.ALMOST_ABELIAN
        c = np.zeros((m, m, m))
    else:
        # step <= 2 iff [x, [y, z]] = 0 on g0
        nested = np.einsum("jkl,ilp->ijkp", c, c)
        if np.abs(nested).max() > _ZERO_TOL * scale ** 2:
            raise UnsupportedG0("g0 is not abelian or 2-step nilpotent")
        kind = ModelKind.STEP2_NILPOTENT
    d.setflags(write=False)
    c.setflags(write=False)
    return SemidirectModel(kind=kind, d_matrix=d, g0_structure=c,
                           tau=float(np.trace(d)), h0=h0, g0_basis=basis)


def model_from_matrix(d_matrix) -> SemidirectModel:
    """Almost-abelian model ``R^m x|_D R`` with the standard metric."""
    d = np.array(d_matrix, dtype=float, ndmin=2)
    if d.shape[0] != d.shape[1]:
        raise DimensionError("D must be square")
    m = d.shape[0]
    d.setflags(write=False)
    return SemidirectModel(kind=ModelKind.ALMOST_ABELIAN, d_matrix=d,
                           g0_structure=np.zeros((m, m, m)), tau=float(np.trace(d)))


def haar_density(model: SemidirectModel) -> HaarDensity:
    """Haar density of the model, after checking ``det e^{-tD} = e^{-t tr D}``."""
    ts = np.linspace(-1.5, 1.5, 7)
    dets = np.linalg.det(model.exp_d(-ts))
    pred = np.exp(-ts * model.tau)
    if not np.allclose(dets, pred, rtol=1e-9, atol=0.0):
        raise ArithmeticError("det(exp(-tD)) disagrees with exp(-t tr D)")
    return HaarDensity(model.tau)


def metric_tensor(model: SemidirectModel, point) -> np.ndarray:
    """Left-invariant metric in coordinates at ``point`` (block diagonal)."""
    point = np.asarray(point, float)
    if point.shape != (model.dim,):
        raise DimensionError(f"point must have length {model.dim}")
    b = model.horizontal_frame(point[:-1], point[-1])
    g = np.eye(model.dim)
    g[:-1, :-1] = b.T @ b
    return g


def volume_density(model: SemidirectModel, point) -> float:
    """Riemannian volume density ``sqrt(det g)`` at ``point``."""
    return float(np.sqrt(np.linalg.det(metric_tensor(model, point))))


def _fd_jacobian(f, p, h):
    n = p.shape[0]
    jac = np.empty((n, n))
    for j in range(n):
        step = np.zeros(n)
        step[j] = h
        jac[:, j] = (f(p + step) - f(p - step)) / (2 * h)
    return jac


def jacobian_oracle(model: SemidirectModel, a, samples: int = 100, seed: int = 0,
                    h_fd: float = FD_STEP) -> float:
    """Max relative failure of left invariance of the Haar measure.

    At random points ``p`` the Jacobian of ``L_a`` is taken by central
    differences; the measure is left invariant iff
    ``rho(a p) |det DL_a(p)| = delta(t_p)`` where ``rho`` is the metric's
    volume density and ``delta`` the closed-form Haar density.
    """
    a = np.asarray(a, float)
    if a.shape != (model.dim,):
        raise DimensionError(f"group element must have length {model.dim}")
    rng = np.random.default_rng(seed)
    delta = HaarDensity(model.tau)
    points = rng.uniform(-1.0, 1.0, size=(samples, model.dim))
    worst = 0.0
    for p in points:
        jac = _fd_jacobian(lambda q: model.multiply(a, q), p, h_fd)
        lhs = volume_density(model, model.multiply(a, p)) * abs(np.linalg.det(jac))
        rhs = float(delta(p[-1]))
        worst = max(worst, abs(lhs / rhs - 1.0))
    return worst
