import numpy as np
import pytest
from fractions import Fraction

from solvcheeger import (InnerProduct, LieAlgebra, NotPositiveDefinite, NotSolvable,
                         bracket, dual_norm, load_catalog, split, trace_form)

from conftest import almost_abelian, random_spd

AXB = load_catalog("axb").algebra


def grid_sphere_max(alpha, gram, n=100_000):
    """Oracle: maximize alpha over a dense angular grid of the 2-D unit ellipse."""
    th = np.linspace(0, 2 * np.pi, n, endpoint=False)
    u = np.stack([np.cos(th), np.sin(th)])
    norms = np.sqrt(np.einsum("in,ij,jn->n", u, gram, u))
    return float(np.max(np.asarray(alpha, float) @ u / norms))


class TestInnerProduct:
    def test_rejects_asymmetric(self):
        with pytest.raises(NotPositiveDefinite):
            InnerProduct([[1, 0.5], [0.4, 1]])

    def test_rejects_indefinite(self):
        with pytest.raises(NotPositiveDefinite):
            InnerProduct([[1, 2], [2, 1]])

    def test_exact_entries_kept(self):
        ip = InnerProduct([["1/2", 0], [0, 3]])
        assert ip.exact_gram[0, 0] == Fraction(1, 2)
        assert InnerProduct([[0.5, 0], [0, 1]]).exact_gram is None


class TestDualNorm:
    def test_zero(self):
        assert dual_norm([0, 0], InnerProduct([[2, 1], [1, 3]])) == 0

    def test_euclidean(self):
        assert dual_norm([1, 0], InnerProduct.identity(2)) == 1

    def test_scaled_metric(self):
        h = dual_norm([1, 0], InnerProduct([[4, 0], [0, 1]]))
        assert h == Fraction(1, 2)
        assert abs(grid_sphere_max([1, 0], np.diag([4.0, 1.0])) - 0.5) <= 1e-6

    def test_against_grid_search_general_metric(self):
        gram = np.array([[2.0, 0.7], [0.7, 1.3]])
        alpha = [0.4, -1.1]
        assert abs(dual_norm(alpha, InnerProduct(gram)) - grid_sphere_max(alpha, gram)) <= 1e-6

    def test_irrational_result_is_float(self):
        h = dual_norm([1, 1], InnerProduct.identity(2))
        assert isinstance(h, float) and h == pytest.approx(np.sqrt(2), rel=1e-15)


class TestSplit:
    def test_axb_identity(self):
        s = split(AXB, InnerProduct.identity(2))
        assert s.tau == 1
        np.testing.assert_allclose(s.h0, [1, 0])
        np.testing.assert_allclose(np.abs(s.g0_basis), [[0, 1]])

    def test_nilpotent_is_unimodular_branch(self):
        s = split(load_catalog("heisenberg").algebra, InnerProduct.identity(3))
        assert s.unimodular and s.tau == 0 and s.h0 is None and s.g0_basis.shape == (3, 3)

    def test_axb_scaled(self):
        s = split(AXB, InnerProduct([[4, 0], [0, 1]]))
        assert s.tau == Fraction(1, 2)
        np.testing.assert_allclose(s.h0, [0.5, 0])

    def test_not_solvable(self):
        sl2 = LieAlgebra(["H", "X", "Y"], {("H", "X"): {"X": 2}, ("H", "Y"): {"Y": -2},
                                           ("X", "Y"): {"H": 1}})
        with pytest.raises(NotSolvable):
            split(sl2, InnerProduct.identity(3))

    @pytest.mark.parametrize("seed", range(10))
    def test_splitting_invariants(self, seed):
        rng = np.random.default_rng(seed)
        m = int(rng.integers(1, 4))
        alg = almost_abelian(rng.normal(size=(m, m)).round(3).tolist(), "float")
        ip = random_spd(rng, m + 1)
        s = split(alg, ip)
        alpha = trace_form(alg)
        assert abs(ip.norm(s.h0) - 1) <= 1e-12
        assert abs(alpha @ s.h0 - s.tau) <= 1e-12 * max(1, s.tau)
        for v in s.g0_basis:
            assert abs(ip.inner(s.h0, v)) <= 1e-12
            assert abs(alpha @ v) <= 1e-12 * max(1, np.abs(alpha).sum())

    def test_g0_is_an_ideal_on_catalog(self):
        for name in ["axb", "hyperbolic-3", "complex-hyperbolic", "diag(1,2,-1/2)"]:
            alg = load_catalog(name).algebra
            ip = InnerProduct.identity(alg.dim)
            s = split(alg, ip)
            basis = s.g0_basis
            proj = basis.T @ basis  # orthonormal rows, identity metric
            vecs = list(basis) + [s.h0]
            for u in vecs:
                for v in basis:
                    w = bracket(u, v, alg)
                    assert np.linalg.norm(w - proj @ w) <= 1e-12

    @pytest.mark.parametrize("c", [0.5, 2.0, 3.7])
    def test_argmax_direction_invariant_under_scaling(self, c):
        rng = np.random.default_rng(7)
        alg = almost_abelian([[1.0, 0.3], [0.0, 0.4]], "float")
        ip = random_spd(rng, 3)
        s1, s2 = split(alg, ip), split(alg, ip.scaled(c))
        cos = s1.h0 @ s2.h0 / (np.linalg.norm(s1.h0) * np.linalg.norm(s2.h0))
        assert abs(cos - 1) <= 1e-10
        assert s2.tau == pytest.approx(s1.tau / c, rel=1e-12)
