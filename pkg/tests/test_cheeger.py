from fractions import Fraction

import numpy as np
import pytest

from solvcheeger import (InnerProduct, LieAlgebra, NotSolvable, ad, cheeger_constant,
                         dual_norm, load_catalog, scaling_law, trace_form)

from conftest import almost_abelian, random_spd


def identity_metric(alg):
    return InnerProduct.identity(alg.dim)


@pytest.mark.parametrize("name,h", [
    ("abelian-3", 0), ("heisenberg", 0), ("sol", 0), ("axb", 1),
    ("hyperbolic-2", 1), ("hyperbolic-3", 2), ("hyperbolic-4", 3),
    ("diag(1,1/2,1/3)", Fraction(11, 6)), ("complex-hyperbolic", 4),
])
def test_catalog_values_exact(name, h):
    alg = load_catalog(name).algebra
    res = cheeger_constant(alg, identity_metric(alg))
    assert res.h == h and isinstance(res.h, Fraction)
    assert res.unimodular == (h == 0)


def test_maximizer_invariants():
    alg = load_catalog("diag(1,2,-1/2)").algebra.to_float()
    ip = random_spd(np.random.default_rng(3), alg.dim)
    res = cheeger_constant(alg, ip)
    assert abs(ip.norm(res.maximizer) - 1) <= 1e-12
    assert abs(ad(res.maximizer, alg).trace() - res.h) <= 1e-12 * res.h


def test_not_solvable_is_hard_error():
    sl2 = LieAlgebra(["H", "X", "Y"], {("H", "X"): {"X": 2}, ("H", "Y"): {"Y": -2},
                                       ("X", "Y"): {"H": 1}})
    with pytest.raises(NotSolvable):
        cheeger_constant(sl2, InnerProduct.identity(3))


def test_pipeline_equals_dual_norm():
    for name in ["axb", "sol", "hyperbolic-3", "diag(2,-1/3)", "complex-hyperbolic"]:
        alg = load_catalog(name).algebra
        ip = InnerProduct([[2, 1] + [0] * (alg.dim - 2), [1, 3] + [0] * (alg.dim - 2)]
                          + [[0] * i + [1] + [0] * (alg.dim - i - 1) for i in range(2, alg.dim)])
        assert cheeger_constant(alg, ip).h == dual_norm(trace_form(alg), ip)


def test_trace_bounded_by_h_on_random_unit_vectors():
    rng = np.random.default_rng(11)
    alg = almost_abelian([[1.0, 0.5, 0], [0, -0.3, 0], [0.2, 0, 2.0]], "float")
    ip = random_spd(rng, 4)
    h = cheeger_constant(alg, ip).h
    for _ in range(100):
        v = rng.normal(size=4)
        v /= ip.norm(v)
        assert ad(v, alg).trace() <= h + 1e-12


class TestScalingLaw:
    def test_halves(self):
        alg = load_catalog("axb").algebra
        res = scaling_law(cheeger_constant(alg, identity_metric(alg)), 2)
        assert res.h == Fraction(1, 2)
        assert cheeger_constant(alg, identity_metric(alg).scaled(2)).h == res.h

    def test_zero_stays_zero(self):
        alg = load_catalog("sol").algebra
        assert scaling_law(cheeger_constant(alg, identity_metric(alg)), 5.0).h == 0

    def test_axb_diag_metric_matches_scaled_h_direction(self):
        alg = load_catalog("axb").algebra
        direct = cheeger_constant(alg, InnerProduct([[4, 0], [0, 1]]))
        scaled = scaling_law(cheeger_constant(alg, identity_metric(alg)), 2)
        assert direct.h == scaled.h == Fraction(1, 2)
        np.testing.assert_allclose(direct.maximizer, scaled.maximizer)

    def test_rejects_nonpositive(self):
        alg = load_catalog("axb").algebra
        with pytest.raises(ValueError):
            scaling_law(cheeger_constant(alg, identity_metric(alg)), 0)
