import dataclasses
import math

import numpy as np
import pytest
from scipy import integrate

from solvcheeger import (Ball, Box, BoxSet, GraphSet, QuadratureDomainError,
                         SweepDidNotConverge, box_cap_area, box_report, box_volume,
                         box_wall_area, equality_sweep, graph_set_report, model_from_matrix,
                         wall_bound_M)
from solvcheeger.isoperimetry import (boundary_volume, box_cap_area_quadrature,
                                      box_volume_quadrature, box_wall_area_closed_form)

from solvcheeger.group_model import ModelKind

from conftest import catalog_model

LN2 = math.log(2)


class TestBoxVolume:
    def test_axb(self, models):
        box = BoxSet(Box((1.0,)), 0.0, LN2)
        assert box_volume(models["axb"], box) == pytest.approx(0.5, rel=1e-15)
        oracle, _ = integrate.dblquad(lambda t, x: math.exp(-t), 0, 1, 0, LN2, epsabs=1e-14)
        assert abs(box_volume(models["axb"], box) - oracle) <= 1e-10

    def test_sol_product_measure(self, models):
        assert box_volume(models["sol"], BoxSet(Box((1.0, 1.0)), 2.0, 5.0)) == pytest.approx(3.0)

    def test_hyperbolic_limit(self, models):
        assert box_volume(models["hyperbolic-3"], BoxSet(Box((1.0, 1.0)), 0.0, 60.0)) == \
            pytest.approx(0.5, rel=1e-15)


class TestCapArea:
    def test_axb(self, models):
        assert box_cap_area(models["axb"], BoxSet(Box((1.0,)), 0.0, LN2)) == pytest.approx(1.5)

    def test_sol(self, models):
        assert box_cap_area(models["sol"], BoxSet(Box((1.0, 1.0)), -1.0, 2.0)) == 2.0

    def test_thin_box(self, models):
        m, a = models["hyperbolic-3"], 0.4
        cap = box_cap_area(m, BoxSet(Box((2.0, 1.5)), a, a + 1e-9))
        assert cap == pytest.approx(2 * 3.0 * math.exp(-2 * a), rel=1e-8)


class TestWallArea:
    def test_axb_vertical_segments(self, models):
        assert box_wall_area(models["axb"], BoxSet(Box((3.0,)), -0.5, 2.0)) == pytest.approx(5.0)

    def test_hyperbolic_unit_square(self, models):
        w = box_wall_area(models["hyperbolic-3"], BoxSet(Box((1.0, 1.0)), 0.0, 1.0))
        assert abs(w - 4 * (1 - math.exp(-1))) <= 1e-10

    @pytest.mark.parametrize("a,b", [(0.0, 1.0), (-1.3, 2.2)])
    def test_sol_unit_square(self, models, a, b):
        w = box_wall_area(models["sol"], BoxSet(Box((1.0, 1.0)), a, b))
        expected = 2 * (math.exp(b) - math.exp(a)) + 2 * (math.exp(-a) - math.exp(-b))
        assert abs(w - expected) <= 1e-10 * expected

    def test_heisenberg_shear(self, models):
        # D: Y -> Z, so A_t e_Y = e_Y - t e_Z and |A_t e_Y| = sqrt(1 + t^2)
        a, b = -0.5, 1.5
        w = box_wall_area(models["heisenberg"], BoxSet(Box((1.0, 1.0)), a, b))
        F = lambda t: 0.5 * (t * math.sqrt(1 + t * t) + math.asinh(t))
        assert w == pytest.approx(2 * (b - a) + 2 * (F(b) - F(a)), rel=1e-12)

    def test_ball_in_hyperbolic_plane_model(self):
        m = model_from_matrix(np.eye(2))
        r = 0.7
        w = box_wall_area(m, BoxSet(Ball(r, 2), 0.0, 1.0))
        assert w == pytest.approx(2 * math.pi * r * (1 - math.exp(-1)), rel=1e-12)

    def test_ball_in_three_dimensions(self):
        m = model_from_matrix(np.eye(3))
        r = 1.3
        w = box_wall_area(m, BoxSet(Ball(r, 3), 0.0, 1.0))
        assert w == pytest.approx(4 * math.pi * r * r * (1 - math.exp(-2)) / 2, rel=1e-10)

    def test_ball_in_sol_against_dblquad(self, models):
        r, a, b = 0.8, -0.4, 1.1
        oracle, _ = integrate.dblquad(
            lambda th, t: r * math.hypot(math.exp(-t) * math.sin(th), math.exp(t) * math.cos(th)),
            a, b, 0, 2 * math.pi, epsabs=1e-13, epsrel=1e-13)
        w = box_wall_area(models["sol"], BoxSet(Ball(r, 2), a, b))
        assert w == pytest.approx(oracle, rel=1e-10)

    def test_ellipsoid_path_matches_sphere_quadrature(self, models):
        # the same diagonal model tagged step-2 forces the generic boundary quadrature
        aa = models["diag(1,2,-1/2)"]
        generic = dataclasses.replace(aa, kind=ModelKind.STEP2_NILPOTENT)
        box = BoxSet(Ball(0.9, 3), -0.5, 0.7)
        assert box_wall_area(aa, box) == pytest.approx(box_wall_area(generic, box, 48), rel=1e-9)

    def test_ball_volume_and_caps(self):
        m = model_from_matrix(np.eye(3))
        ball = BoxSet(Ball(1.0, 3), 0.0, 1.0)
        assert box_volume(m, ball) == pytest.approx(4 / 3 * math.pi * (1 - math.exp(-3)) / 3)
        assert box_cap_area(m, ball) == pytest.approx(4 / 3 * math.pi * (1 + math.exp(-3)))


class TestWallBound:
    def test_hyperbolic(self, models):
        assert wall_bound_M(models["hyperbolic-3"], 0.0, 1.0) == pytest.approx(1.0, rel=1e-12)

    def test_trivial_action(self, models):
        assert wall_bound_M(models["abelian-3"], -3.0, 5.0) == pytest.approx(1.0, rel=1e-12)

    def test_sol(self, models):
        assert wall_bound_M(models["sol"], 0.0, 1.0) == pytest.approx(math.e, rel=1e-12)

    def test_matches_dense_grid_over_t(self):
        m = model_from_matrix(np.diag([1.0, -1.0, 0.2]))
        ts = np.linspace(-2, 2, 20001)
        oracle = max(np.prod(np.sort(np.exp(-t * np.array([1.0, -1.0, 0.2])))[::-1][:2]) for t in ts)
        assert wall_bound_M(m, -2.0, 2.0) == pytest.approx(oracle, rel=1e-8)

    @pytest.mark.parametrize("name", ["sol", "hyperbolic-3", "heisenberg", "diag(1,2,-1/2)",
                                      "complex-hyperbolic", "axb"])
    def test_bounds_walls(self, models, name):
        model = models[name]
        rng = np.random.default_rng(9)
        for _ in range(5):
            box = BoxSet(Box(tuple(rng.uniform(0.2, 3, model.m))), *sorted(rng.uniform(-2, 2, 2)))
            wall = box_wall_area(model, box, 16)
            bound = wall_bound_M(model, box.a, box.b) * boundary_volume(model, box.k0, 16) \
                * (box.b - box.a)
            assert wall <= bound * (1 + 1e-12)


def test_dk_ratio_depends_only_on_height(models):
    model = models["hyperbolic-3"]
    ratios = [box_cap_area(model, b) / box_volume(model, b)
              for b in (BoxSet(Box((2.0, 1.0)), a, a + 3.0) for a in (-2.0, 0.0, 1.7))]
    assert max(ratios) - min(ratios) <= 1e-12 * ratios[0]


def test_full_ratio_is_left_translation_invariant(models):
    """K0 x [a,b] and e^{-aD}K0 x [0, b-a] are isometric; their ratios agree."""
    model = models["sol"]
    a, b = -1.2, 0.9
    sides = np.array([1.5, 0.8])
    r1 = box_report(model, BoxSet(Box(tuple(sides)), a, b)).ratio
    scaled = sides * np.exp(-a * np.diag(model.d_matrix))
    r2 = box_report(model, BoxSet(Box(tuple(scaled)), 0.0, b - a)).ratio
    assert r1 == pytest.approx(r2, rel=1e-12)


def _sinusoid(amplitude):
    return (lambda u: 1 + amplitude * np.sin(2 * np.pi * u[:, 0]),
            lambda u: (amplitude * 2 * np.pi * np.cos(2 * np.pi * u[:, 0]))[:, None])


class TestRefinement:
    def test_box_report_refines_to_tol(self, models):
        box = BoxSet(Ball(1.0, 3), 1.1, 2.7)
        coarse = box_report(models["complex-hyperbolic"], box, 8)
        fine = box_report(models["complex-hyperbolic"], box, 8, tol=1e-6)
        assert coarse.quadrature_error > 1e-6 >= fine.quadrature_error
        assert fine.ratio == pytest.approx(coarse.ratio, rel=1e-2)

    def test_max_n_caps_refinement(self, models):
        box = BoxSet(Ball(1.0, 3), 1.1, 2.7)
        capped = box_report(models["complex-hyperbolic"], box, 8, tol=1e-12, max_n=16)
        assert capped.quadrature_error == box_report(models["complex-hyperbolic"], box, 8).quadrature_error

    def test_graph_report_refines_to_tol(self, models):
        dp, gp = _sinusoid(0.3)
        g = GraphSet((0.0,), (1.0,), dp, lambda u: np.zeros(len(u)), gp, np.zeros_like)
        assert graph_set_report(models["axb"], g, 16).quadrature_error > 1e-6
        rep = graph_set_report(models["axb"], g, 16, tol=1e-8)
        assert rep.quadrature_error <= 1e-8 and rep.cap_bound_failures == 0


class TestGraphSets:
    def test_constant_graph_matches_box(self, models):
        for name in ["hyperbolic-3", "sol", "complex-hyperbolic", "axb"]:
            model = models[name]
            sides = (1.0, 1.5, 0.5)[: model.m]
            n = 12 if model.m == 3 else 32
            g = graph_set_report(model, GraphSet.constant((0.0,) * model.m, sides, -0.3, 0.8), n)
            b = box_report(model, BoxSet(Box(sides), -0.3, 0.8))
            for field in ("volume", "cap_area", "wall_area", "ratio"):
                assert getattr(g, field) == pytest.approx(getattr(b, field), rel=1e-8)

    def test_axb_sinusoid(self, models):
        dp, gp = _sinusoid(0.3)
        g = GraphSet((0.0,), (1.0,), dp, lambda u: np.zeros(len(u)), gp, np.zeros_like)
        rep = graph_set_report(models["axb"], g, 64)
        assert rep.ratio >= 1 - 1e-6
        assert rep.cap_bound_failures == 0 and rep.quadrature_error <= 1e-6

    def test_hyperbolic_paraboloid(self, models):
        g = GraphSet((-1.0, -1.0), (1.0, 1.0), lambda u: 2 - (u ** 2).sum(1),
                     lambda u: np.zeros(len(u)), lambda u: -2 * u, np.zeros_like)
        rep = graph_set_report(models["hyperbolic-3"], g)
        assert rep.ratio >= 2 - 1e-6
        assert rep.cap_bound_failures == 0

    def test_volume_against_adaptive_quadrature(self, models):
        dp, gp = _sinusoid(0.3)
        g = GraphSet((0.0,), (1.0,), dp, lambda u: np.zeros(len(u)), gp, np.zeros_like)
        rep = graph_set_report(models["axb"], g)
        oracle, _ = integrate.quad(lambda u: 1 - math.exp(-(1 + 0.3 * math.sin(2 * math.pi * u))),
                                   0, 1, epsabs=1e-14)
        assert rep.volume == pytest.approx(oracle, rel=1e-12)

    def test_crossing_graphs_rejected(self, models):
        g = GraphSet((0.0,), (1.0,), lambda u: u[:, 0] - 0.5, lambda u: np.zeros(len(u)),
                     np.ones_like, np.zeros_like)
        with pytest.raises(QuadratureDomainError):
            graph_set_report(models["axb"], g)


def _axb_closed_ratio(L, b):
    return (L * (1 + math.exp(-b)) + 2 * b) / (L * (1 - math.exp(-b)))


class TestEqualitySweep:
    def test_axb_small_family_does_not_reach_two_percent(self, models):
        family, b_grid = (1.0, 10.0, 100.0), range(1, 13)
        oracle = min(_axb_closed_ratio(L, b) for L in family for b in b_grid)
        with pytest.raises(SweepDidNotConverge) as err:
            equality_sweep(models["axb"], 0.02, family, b_grid)
        assert err.value.result.min_ratio == pytest.approx(oracle, rel=1e-12)
        assert oracle > 1.02

    def test_axb_reaches_two_percent_with_larger_k0(self, models):
        res = equality_sweep(models["axb"], 0.02, (1000.0,), np.arange(5.0, 9.0, 0.25))
        assert res.min_ratio <= 1.02

    def test_abelian_folner_decay(self, models):
        res = equality_sweep(models["abelian-2"], 0.05, (100.0,), (100.0,))
        assert res.min_ratio == pytest.approx(0.04, rel=1e-12)

    def test_hyperbolic_three(self, models):
        res = equality_sweep(models["hyperbolic-3"], 0.05, (200.0,), (8.0,))
        assert res.min_ratio <= 2.05

    def test_row_bounds(self, models):
        res = equality_sweep(models["hyperbolic-3"], 0.05, (10.0, 200.0), (2.0, 8.0))
        for row in res.rows:
            assert row.dk_bound == pytest.approx(row.cap_area / row.volume)
            assert row.wall_area / row.volume <= row.form2_bound * (1 + 1e-12)
            assert row.ratio >= 2.0

    def test_parallel_rows_identical(self, models):
        args = (models["sol"], 1e6, (1.0, 5.0, 20.0), (1.0, 2.0, 4.0))
        assert equality_sweep(*args).rows == equality_sweep(*args, max_workers=4).rows

    def test_epsilon_must_be_positive(self, models):
        with pytest.raises(ValueError):
            equality_sweep(models["axb"], 0.0)
