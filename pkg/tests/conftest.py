from fractions import Fraction

import numpy as np
import pytest

from solvcheeger import InnerProduct, LieAlgebra, build_model, load_catalog

CATALOG_MODELS = ["axb", "sol", "hyperbolic-2", "hyperbolic-3", "abelian-2", "abelian-3",
                  "heisenberg", "diag(1,2,-1/2)", "complex-hyperbolic"]


def catalog_model(name):
    spec = load_catalog(name)
    return build_model(spec.algebra, spec.inner_product, spec.transversal_vector())


def almost_abelian(d, arithmetic="rational"):
    """R^m x|_D R with basis (H, X1..Xm) and [H, Xj] = sum_i D[i][j] Xi."""
    d = np.asarray(d, dtype=object)
    m = d.shape[0]
    xs = [f"X{i}" for i in range(1, m + 1)]
    brackets = {("H", xs[j]): {xs[i]: d[i, j] for i in range(m) if d[i, j] != 0}
                for j in range(m)}
    return LieAlgebra(["H", *xs], brackets, arithmetic=arithmetic)


def random_spd(rng, n):
    r = rng.normal(size=(n, n))
    g = r @ r.T + 0.5 * np.eye(n)
    return InnerProduct((g + g.T) / 2)


def random_rational_matrix(rng, m, scale=4):
    return [[Fraction(int(rng.integers(-3 * scale, 3 * scale + 1)), scale) for _ in range(m)]
            for _ in range(m)]


@pytest.fixture(scope="session")
def models():
    return {name: catalog_model(name) for name in CATALOG_MODELS}


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
