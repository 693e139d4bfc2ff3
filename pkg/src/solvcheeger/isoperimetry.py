"""Volumes and boundary areas of test sets in ``G0 x| R`` coordinates.

Two families are handled:

* box sets ``K0 x [a, b]`` with ``K0`` an axis-aligned box or a ball in
  the ``G0`` coordinates. Volume and cap area have closed forms; the
  side walls are integrated with Gauss-Legendre quadrature in ``t``.
* graph sets ``{(u, t) : u in U, d-(u) <= t <= d+(u)}`` over a box ``U``,
  closed by vertical walls over the boundary of ``U``. Everything is
  integrated numerically and the cap integrand includes the exact
  rank-one gradient term.

All quadrature is tensor-product Gauss-Legendre. Reported errors are the
difference between runs with ``n`` and ``2n`` nodes per axis.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from itertools import product
from typing import Callable, Sequence

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy.optimize import minimize_scalar
from scipy.special import elliprg, gammaln

from .errors import DimensionError, QuadratureDomainError, SweepDidNotConverge
from .group_model import HaarDensity, ModelKind, SemidirectModel

DEFAULT_QUADRATURE_N = 32
DEFAULT_MAX_N = 256
_WALL_CHUNK = 1 << 18
CAP_BOUND_SLACK = 1e-12

__all__ = [
    "Box",
    "Ball",
    "BoxSet",
    "GraphSet",
    "IsoperimetricReport",
    "SweepRow",
    "SweepResult",
    "box_volume",
    "box_cap_area",
    "box_wall_area",
    "box_wall_area_closed_form",
    "box_volume_quadrature",
    "box_cap_area_quadrature",
    "boundary_volume",
    "box_report",
    "wall_bound_M",
    "graph_set_report",
    "equality_sweep",
]


def _gauss(n, lo, hi):
    x, w = leggauss(n)
    half = 0.5 * (hi - lo)
    return 0.5 * (hi + lo) + half * x, half * w


def _tensor_gauss(n, lower, upper):
    """Tensor Gauss-Legendre nodes (N, d) and weights (N,) on a box."""
    rules = [_gauss(n, lo, hi) for lo, hi in zip(lower, upper)]
    if not rules:
        return np.zeros((1, 0)), np.ones(1)
    pts = np.array(list(product(*[r[0] for r in rules])))
    wts = np.array([math.prod(c) for c in product(*[r[1] for r in rules])])
    return pts, wts


def _integral_of_density(tau, a, b):
    """``int_a^b exp(-t tau) dt``, with the tau -> 0 limit."""
    if tau == 0:
        return b - a
    return math.exp(-a * tau) * -math.expm1(-(b - a) * tau) / tau


# -- compact sets in G0 ------------------------------------------------------------


@dataclass(frozen=True)
class Box:
    """Axis-aligned box ``prod [origin_i, origin_i + sides_i]``."""

    sides: tuple[float, ...]
    origin: tuple[float, ...] | None = None

    def __post_init__(self):
        sides = tuple(float(s) for s in np.atleast_1d(self.sides))
        if not sides or any(s <= 0 for s in sides):
            raise ValueError(f"box side lengths must be positive, got {sides}")
        object.__setattr__(self, "sides", sides)
        origin = (0.0,) * len(sides) if self.origin is None else \
            tuple(float(o) for o in self.origin)
        if len(origin) != len(sides):
            raise DimensionError("origin and sides differ in length")
        object.__setattr__(self, "origin", origin)

    @property
    def m(self) -> int:
        return len(self.sides)

    @property
    def lower(self) -> np.ndarray:
        return np.array(self.origin)

    @property
    def upper(self) -> np.ndarray:
        return np.array(self.origin) + np.array(self.sides)

    @property
    def volume(self) -> float:
        return math.prod(self.sides)

    @property
    def euclidean_boundary(self) -> float:
        v = self.volume
        return 2.0 * sum(v / s for s in self.sides)

    def boundary_quadrature(self, n):
        """Facets as ``[(points, weights, frame)]``; frame is (m, m-1)."""
        facets = []
        eye = np.eye(self.m)
        lo, hi = self.lower, self.upper
        for i in range(self.m):
            others = [j for j in range(self.m) if j != i]
            pts, wts = _tensor_gauss(n, lo[others], hi[others])
            frame = eye[:, others]
            for level in (lo[i], hi[i]):
                full = np.empty((pts.shape[0], self.m))
                full[:, others] = pts
                full[:, i] = level
                facets.append((full, wts, frame))
        return facets


@dataclass(frozen=True)
class Ball:
    """Euclidean ball of ``radius`` about the origin of ``R^m`` (m <= 3)."""

    radius: float
    m: int

    def __post_init__(self):
        if self.radius <= 0:
            raise ValueError("ball radius must be positive")
        if self.m not in (1, 2, 3):
            raise DimensionError("balls are supported for m = 1, 2, 3")

    @property
    def volume(self) -> float:
        m = self.m
        return math.exp(0.5 * m * math.log(math.pi) - gammaln(0.5 * m + 1)) * self.radius ** m

    @property
    def euclidean_boundary(self) -> float:
        return self.m * self.volume / self.radius

    def boundary_quadrature(self, n):
        r = self.radius
        if self.m == 1:
            return [(np.array([[r], [-r]]), np.ones(2), np.zeros((1, 0)))]
        if self.m == 2:
            th = 2 * np.pi * np.arange(2 * n) / (2 * n)
            pts = r * np.column_stack([np.cos(th), np.sin(th)])
            frames = np.stack([-np.sin(th), np.cos(th)], axis=-1)[..., None]
            return [(pts, np.full(2 * n, 2 * np.pi * r / (2 * n)), frames)]
        th, wth = _gauss(n, 0.0, np.pi)
        ph = 2 * np.pi * np.arange(2 * n) / (2 * n)
        T, P = np.meshgrid(th, ph, indexing="ij")
        T, P = T.ravel(), P.ravel()
        wts = (np.repeat(wth * np.sin(th), 2 * n) * (2 * np.pi / (2 * n))) * r * r
        pts = r * np.column_stack([np.sin(T) * np.cos(P), np.sin(T) * np.sin(P), np.cos(T)])
        e_th = np.column_stack([np.cos(T) * np.cos(P), np.cos(T) * np.sin(P), -np.sin(T)])
        e_ph = np.column_stack([-np.sin(P), np.cos(P), np.zeros_like(P)])
        return [(pts, wts, np.stack([e_th, e_ph], axis=-1))]


@dataclass(frozen=True)
class BoxSet:
    """``K0 x [a, b]`` in model coordinates."""

    k0: Box | Ball
    a: float
    b: float

    def __post_init__(self):
        if not self.b > self.a:
            raise ValueError(f"need a < b, got a={self.a}, b={self.b}")


# -- reports ---------------------------------------------------------------------


@dataclass(frozen=True)
class IsoperimetricReport:
    volume: float
    cap_area: float
    wall_area: float
    total_area: float
    ratio: float
    tau: float
    wall_bound_M: float
    quadrature_error: float = 0.0
    cap_bound_failures: int = 0
    cap_bound_checks: int = 0

    @property
    def satisfies_lower_bound(self) -> bool:
        return self.ratio >= self.tau - self.quadrature_error


def _check_dims(model, k0):
    if k0.m != model.m:
        raise DimensionError(f"K0 lives in R^{k0.m} but the model's G0 has dimension {model.m}")


def box_volume(model: SemidirectModel, box: BoxSet) -> float:
    """``vol(K0) (e^{-a tau} - e^{-b tau}) / tau`` (``vol(K0)(b-a)`` at tau = 0)."""
    _check_dims(model, box.k0)
    return box.k0.volume * _integral_of_density(model.tau, box.a, box.b)


def box_cap_area(model: SemidirectModel, box: BoxSet) -> float:
    """``vol(K0) (e^{-a tau} + e^{-b tau})``."""
    _check_dims(model, box.k0)
    tau = model.tau
    return box.k0.volume * (math.exp(-box.a * tau) + math.exp(-box.b * tau))


def _frame_volume(vecs):
    """``sqrt det`` of the Gram matrix of the columns; batched."""
    return np.sqrt(np.linalg.det(np.swapaxes(vecs, -1, -2) @ vecs))


def _ellipsoid_boundary(semi_axes):
    """Perimeter (2 axes) or surface area (3 axes) of ellipsoids; batched."""
    s2 = np.asarray(semi_axes, float) ** 2
    if s2.shape[-1] == 2:
        return 8.0 * elliprg(0.0, s2[..., 0], s2[..., 1])
    return 4.0 * np.pi * elliprg(s2[..., 0] * s2[..., 1], s2[..., 1] * s2[..., 2],
                                 s2[..., 2] * s2[..., 0])


def _wall_over_boundary(model, k0, a, b, n, n_boundary):
    ts, wt = _gauss(n, a, b)
    if model.kind is ModelKind.ALMOST_ABELIAN and isinstance(k0, Ball) and k0.m > 1:
        # the slice at height t is the ellipsoid e^{-tD}(dK0)
        sv = np.linalg.svd(model.exp_d(-ts), compute_uv=False)
        return float(wt @ _ellipsoid_boundary(k0.radius * sv))
    total = 0.0
    for pts, wts, frame in k0.boundary_quadrature(n_boundary):
        if model.kind is ModelKind.ALMOST_ABELIAN:
            bmat = model.exp_d(-ts)[:, None]  # independent of x
            vals = _frame_volume(bmat @ frame)
            total += float(wt @ np.broadcast_to(vals, (ts.size, pts.shape[0])) @ wts)
            continue
        # chunk over t to bound the size of the (t, x, m, m) frame array
        step = max(1, _WALL_CHUNK // pts.shape[0])
        for lo in range(0, ts.size, step):
            bmat = model.horizontal_frame(pts[None], ts[lo:lo + step, None])
            total += float(wt[lo:lo + step] @ _frame_volume(bmat @ frame) @ wts)
    return total


def box_wall_area(model: SemidirectModel, box: BoxSet,
                  quadrature_n: int = DEFAULT_QUADRATURE_N) -> float:
    """Side-wall area ``int_a^b vol_{m-1}(dK0 x {t}) dt`` by quadrature.

    The ``(m-1)``-volume at height ``t`` integrates ``sqrt det`` of the Gram
    matrix of the facet's tangent frame pushed through the horizontal
    frame ``B = e^{-tD}(...)``. For balls in almost-abelian models the
    slice is an ellipsoid whose area is evaluated with Carlson's ``R_G``,
    so only the ``t`` direction is discretised.
    """
    _check_dims(model, box.k0)
    if quadrature_n < 2:
        raise ValueError("quadrature_n must be at least 2")
    n_boundary = 1 if (model.kind is ModelKind.ALMOST_ABELIAN and isinstance(box.k0, Box)) \
        else quadrature_n
    return _wall_over_boundary(model, box.k0, box.a, box.b, quadrature_n, n_boundary)


def box_wall_area_closed_form(model: SemidirectModel, box: BoxSet) -> float:
    """Exact wall area for an almost-abelian model with diagonal ``D``.

    With ``D = diag(l_1..l_m)`` the facet normal to axis ``i`` scales by
    ``exp(-t (tau - l_i))``.
    """
    d = model.d_matrix
    if model.kind is not ModelKind.ALMOST_ABELIAN or np.any(d != np.diag(np.diag(d))):
        raise ValueError("closed-form walls need an almost-abelian model with diagonal D")
    if not isinstance(box.k0, Box):
        raise TypeError("closed-form walls are implemented for boxes only")
    _check_dims(model, box.k0)
    lam = np.diag(d)
    vol0 = box.k0.volume
    return sum(2.0 * vol0 / side * _integral_of_density(model.tau - lam[i], box.a, box.b)
               for i, side in enumerate(box.k0.sides))


def boundary_volume(model: SemidirectModel, k0, quadrature_n: int = DEFAULT_QUADRATURE_N) -> float:
    """``(m-1)``-volume of the boundary of ``K0`` in the metric of ``G0``."""
    _check_dims(model, k0)
    total = 0.0
    for pts, wts, frame in k0.boundary_quadrature(quadrature_n):
        b = model.horizontal_frame(pts, np.zeros(pts.shape[0]))
        vals = np.broadcast_to(_frame_volume(b @ frame), (pts.shape[0],))
        total += float(wts @ vals)
    return total


def _box_nodes(box, n_x):
    if not isinstance(box.k0, Box):
        raise TypeError("quadrature cross-checks are implemented for boxes only")
    return _tensor_gauss(n_x, box.k0.lower, box.k0.upper)


def box_volume_quadrature(model: SemidirectModel, box: BoxSet,
                          quadrature_n: int = DEFAULT_QUADRATURE_N, n_x: int | None = None) -> float:
    """Volume from ``sqrt det`` of the metric tensor, integrated numerically.

    Uses ``quadrature_n`` nodes in ``t`` and ``n_x`` (default ``2(m+1)``)
    per horizontal axis. Independent of the closed form in :func:`box_volume`.
    """
    _check_dims(model, box.k0)
    xs, wx = _box_nodes(box, n_x or 2 * (model.m + 1))
    ts, wt = _gauss(quadrature_n, box.a, box.b)
    b = model.horizontal_frame(xs[None, :, :], ts[:, None])
    return float(wt @ _frame_volume(b) @ wx)


def box_cap_area_quadrature(model: SemidirectModel, box: BoxSet, n_x: int | None = None) -> float:
    """Cap area from ``sqrt det`` of the horizontal metric block at ``t = a, b``."""
    _check_dims(model, box.k0)
    xs, wx = _box_nodes(box, n_x or 2 * (model.m + 1))
    total = 0.0
    for t in (box.a, box.b):
        b = model.horizontal_frame(xs, np.full(xs.shape[0], t))
        total += float(wx @ _frame_volume(b))
    return total


# -- wall bound ----------------------------------------------------------------------


def _top_singular_product(model, t):
    if model.m == 1:
        return 1.0
    s = np.linalg.svd(model.exp_d(-t), compute_uv=False)
    return float(np.prod(s[: model.m - 1]))


def wall_bound_M(model: SemidirectModel, a: float, b: float, grid: int = 257) -> float:
    """``max_t max_U sqrt det(P_U A_t^* A_t |_U)`` over ``a <= t <= b``.

    For fixed ``t`` the inner maximum over hyperplanes ``U`` is the product
    of the top ``m-1`` singular values of ``A_t = e^{-tD}``. The outer
    maximum is taken on a grid and refined by a bounded scalar search
    around the best grid point.
    """
    if not b > a:
        raise ValueError("need a < b")
    if model.m == 1:
        return 1.0
    ts = np.linspace(a, b, grid)
    vals = np.array([_top_singular_product(model, t) for t in ts])
    k = int(np.argmax(vals))
    best = float(vals[k])
    lo, hi = ts[max(k - 1, 0)], ts[min(k + 1, grid - 1)]
    if hi > lo:
        res = minimize_scalar(lambda t: -_top_singular_product(model, t),
                              bounds=(lo, hi), method="bounded",
                              options={"xatol": 1e-12 * max(1.0, abs(hi))})
        best = max(best, -float(res.fun))
    return best


def box_report(model: SemidirectModel, box: BoxSet,
               quadrature_n: int = DEFAULT_QUADRATURE_N, tol: float | None = None,
               max_n: int = DEFAULT_MAX_N) -> IsoperimetricReport:
    """Full isoperimetric ratio of a box set with a quadrature error estimate.

    The walls are integrated with ``n`` and ``2n`` nodes starting from
    ``n = quadrature_n``. With ``tol`` given, ``n`` is doubled until the
    error estimate is at most ``tol`` or ``2n`` would exceed ``max_n``.
    """
    vol = box_volume(model, box)
    cap = box_cap_area(model, box)
    n = quadrature_n
    wall_n = box_wall_area(model, box, n)
    wall = box_wall_area(model, box, 2 * n)
    while tol is not None and abs(wall - wall_n) / vol > tol and 4 * n <= max_n:
        n *= 2
        wall_n, wall = wall, box_wall_area(model, box, 2 * n)
    total = cap + wall
    return IsoperimetricReport(
        volume=vol, cap_area=cap, wall_area=wall, total_area=total,
        ratio=total / vol, tau=model.tau,
        wall_bound_M=wall_bound_M(model, box.a, box.b),
        quadrature_error=abs(wall - wall_n) / vol,
    )


# -- graph sets ----------------------------------------------------------------------


@dataclass(frozen=True)
class GraphSet:
    """Region between the graphs of ``delta_minus < delta_plus`` over a box ``U``.

    The four callables take an ``(N, m)`` array of points; the deltas
    return ``(N,)`` heights and the gradients ``(N, m)`` arrays.
    """

    lower: tuple[float, ...]
    upper: tuple[float, ...]
    delta_plus: Callable[[np.ndarray], np.ndarray]
    delta_minus: Callable[[np.ndarray], np.ndarray]
    grad_plus: Callable[[np.ndarray], np.ndarray]
    grad_minus: Callable[[np.ndarray], np.ndarray]

    def __post_init__(self):
        lo = tuple(float(v) for v in np.atleast_1d(self.lower))
        hi = tuple(float(v) for v in np.atleast_1d(self.upper))
        if len(lo) != len(hi) or any(h <= l for l, h in zip(lo, hi)):
            raise ValueError("U must be a nondegenerate box")
        object.__setattr__(self, "lower", lo)
        object.__setattr__(self, "upper", hi)

    @property
    def m(self) -> int:
        return len(self.lower)

    @classmethod
    def constant(cls, lower, upper, a, b):
        """Graph set that is the box ``U x [a, b]``."""
        def const(v):
            return lambda u: np.full(np.asarray(u).shape[0], float(v))

        def zero_grad(u):
            return np.zeros_like(np.asarray(u, float))
        return cls(lower, upper, const(b), const(a), zero_grad, zero_grad)


@dataclass
class _GraphTotals:
    volume: float = 0.0
    cap: float = 0.0
    wall: float = 0.0
    t_min: float = math.inf
    t_max: float = -math.inf
    failures: int = 0
    checks: int = 0


def _graph_totals(model, gset, n):
    density = HaarDensity(model.tau)
    out = _GraphTotals()
    us, wu = _tensor_gauss(n, gset.lower, gset.upper)
    dp = np.asarray(gset.delta_plus(us), float)
    dm = np.asarray(gset.delta_minus(us), float)
    if np.any(dm >= dp):
        raise QuadratureDomainError("delta_minus >= delta_plus at some node of U")
    out.t_min, out.t_max = float(dm.min()), float(dp.max())

    xi, wxi = leggauss(n)
    half = 0.5 * (dp - dm)
    ts = 0.5 * (dp + dm)[:, None] + half[:, None] * xi
    out.volume = float(wu @ (half * (density(ts) @ wxi)))

    for heights, grad in ((dp, gset.grad_plus), (dm, gset.grad_minus)):
        b = model.horizontal_frame(us, heights)
        gh = np.swapaxes(b, -1, -2) @ b
        v = np.asarray(grad(us), float).reshape(us.shape[0], model.m)
        integrand = np.sqrt(np.linalg.det(gh + v[:, :, None] * v[:, None, :]))
        bound = density(heights)
        out.failures += int(np.sum(integrand < bound * (1.0 - CAP_BOUND_SLACK)))
        out.checks += integrand.size
        out.cap += float(wu @ integrand)

    box = Box(tuple(h - l for l, h in zip(gset.lower, gset.upper)), gset.lower)
    for pts, wts, frame in box.boundary_quadrature(n):
        fp = np.asarray(gset.delta_plus(pts), float)
        fm = np.asarray(gset.delta_minus(pts), float)
        if np.any(fm >= fp):
            raise QuadratureDomainError("delta_minus >= delta_plus on the boundary of U")
        out.t_min, out.t_max = min(out.t_min, float(fm.min())), max(out.t_max, float(fp.max()))
        fh = 0.5 * (fp - fm)
        ts = 0.5 * (fp + fm)[:, None] + fh[:, None] * xi  # (N, n)
        b = model.horizontal_frame(pts[:, None, :], ts)
        vals = _frame_volume(b @ frame)
        out.wall += float(wts @ (fh * (vals @ wxi)))
    return out


def graph_set_report(model: SemidirectModel, gset: GraphSet,
                     quadrature_n: int = DEFAULT_QUADRATURE_N, tol: float | None = None,
                     max_n: int = DEFAULT_MAX_N) -> IsoperimetricReport:
    """Volume, cap and wall areas of a graph set, by quadrature.

    The cap integrand ``sqrt det(g_h + v v^T)`` is compared at every node
    with ``exp(-delta tau)``; nodes where it falls below are counted in
    ``cap_bound_failures``. Values are from ``2n`` nodes per axis with the
    ``n`` vs ``2n`` difference of the ratio as error estimate, starting
    at ``n = quadrature_n`` and doubling while the estimate exceeds
    ``tol`` (if given) and ``2n <= max_n``.
    """
    if gset.m != model.m:
        raise DimensionError(f"U lives in R^{gset.m}, model G0 in R^{model.m}")
    if quadrature_n < 2:
        raise ValueError("quadrature_n must be at least 2")

    def ratio_of(totals):
        return (totals.cap + totals.wall) / totals.volume

    n = quadrature_n
    runs = [_graph_totals(model, gset, n), _graph_totals(model, gset, 2 * n)]
    while (tol is not None and abs(ratio_of(runs[-1]) - ratio_of(runs[-2])) > tol
           and 4 * n <= max_n):
        n *= 2
        runs.append(_graph_totals(model, gset, 2 * n))
    coarse, fine = runs[-2], runs[-1]
    total = fine.cap + fine.wall
    return IsoperimetricReport(
        volume=fine.volume, cap_area=fine.cap, wall_area=fine.wall, total_area=total,
        ratio=total / fine.volume, tau=model.tau,
        wall_bound_M=wall_bound_M(model, min(r.t_min for r in runs), max(r.t_max for r in runs)),
        quadrature_error=abs(ratio_of(fine) - ratio_of(coarse)),
        cap_bound_failures=sum(r.failures for r in runs),
        cap_bound_checks=sum(r.checks for r in runs),
    )


# -- equality sweep --------------------------------------------------------------


@dataclass(frozen=True)
class SweepRow:
    k0_scale: float
    b: float
    volume: float
    cap_area: float
    wall_area: float
    ratio: float
    dk_bound: float
    form2_bound: float


@dataclass(frozen=True)
class SweepResult:
    rows: tuple[SweepRow, ...]
    tau: float
    epsilon: float
    a: float
    min_ratio: float = field(init=False)
    best: SweepRow = field(init=False)

    def __post_init__(self):
        best = min(self.rows, key=lambda r: r.ratio)
        object.__setattr__(self, "best", best)
        object.__setattr__(self, "min_ratio", best.ratio)

    @property
    def converged(self) -> bool:
        return self.min_ratio <= self.tau + self.epsilon


def _sweep_row(model, scale, aspect, a, b, quadrature_n, m_cache):
    box = BoxSet(Box(tuple(scale * s for s in aspect)), a, b)
    vol = box_volume(model, box)
    cap = box_cap_area(model, box)
    wall = box_wall_area(model, box, quadrature_n)
    vol0 = box.k0.volume
    mean_density = _integral_of_density(model.tau, a, b) / (b - a)
    form2 = m_cache[b] * boundary_volume(model, box.k0, quadrature_n) / (vol0 * mean_density)
    return SweepRow(k0_scale=float(scale), b=float(b), volume=vol, cap_area=cap,
                    wall_area=wall, ratio=(cap + wall) / vol, dk_bound=cap / vol,
                    form2_bound=form2)


def equality_sweep(model: SemidirectModel, epsilon: float,
                   k0_family: Sequence[float] = (1.0, 10.0, 100.0, 200.0),
                   b_grid: Sequence[float] = tuple(range(1, 13)),
                   aspect: Sequence[float] | None = None, a: float = 0.0,
                   quadrature_n: int = DEFAULT_QUADRATURE_N,
                   max_workers: int | None = None) -> SweepResult:
    """Sweep boxes ``(L * aspect) x [a, b]`` looking for ratio <= tau + epsilon.

    Each row also carries the cap-only ratio (``dk_bound``) and the upper
    bound on the wall contribution through the constant ``M``
    (``form2_bound``). Rows are independent; ``max_workers`` evaluates them
    on a thread pool without changing the output.

    Raises
    ------
    SweepDidNotConverge
        If no row reaches ``tau + epsilon``; the exception's ``result``
        holds the table and the closest ratio.
    """
    if not epsilon > 0:
        raise ValueError("epsilon must be positive")
    aspect = tuple(float(s) for s in (aspect if aspect is not None else (1.0,) * model.m))
    if len(aspect) != model.m:
        raise DimensionError(f"aspect must have {model.m} entries")
    b_grid = [float(b) for b in b_grid if b > a]
    if not b_grid or not len(k0_family):
        raise ValueError("empty sweep grid")
    m_cache = {b: wall_bound_M(model, a, b) for b in b_grid}
    jobs = [(scale, b) for scale in k0_family for b in b_grid]

    def run(job):
        return _sweep_row(model, job[0], aspect, a, job[1], quadrature_n, m_cache)

    if max_workers and max_workers > 1:
        with ThreadPoolExecutor(max_workers=max_workers) as pool:
            rows = tuple(pool.map(run, jobs))
    else:
        rows = tuple(run(j) for j in jobs)
    result = SweepResult(rows=rows, tau=model.tau, epsilon=float(epsilon), a=float(a))
    if not result.converged:
        raise SweepDidNotConverge(
            f"closest ratio {result.min_ratio:.6g} > tau + epsilon = "
            f"{model.tau + epsilon:.6g} (L={result.best.k0_scale:g}, b={result.best.b:g})",
            result)
    return result
