"""Quadrature, grids, tabulated densities and discrete convolution."""

import math

import numpy as np
import pytest

from prodiso.errors import DomainError, GridTooNarrow
from prodiso.measures import MeasureSpec
from prodiso.numerics import (
    Grid,
    TabulatedDensity,
    _convolve,
    _rescale,
    _trim,
    integrate,
    self_convolve_scaled,
    tabulate,
)


def test_integrate_polynomial_exact():
    # the embedded pair is exact for high-degree polynomials on one panel
    val = integrate(lambda x: 7 * x ** 6 - 3 * x ** 2 + 1, -1.0, 2.0)
    exact = (2.0 ** 7 - (-1.0) ** 7) - (2.0 ** 3 - (-1.0) ** 3) + 3.0
    assert abs(val - exact) < 1e-12 * abs(exact)


def test_integrate_known_values():
    assert abs(integrate(lambda x: np.exp(-x * x), -12, 12, rel_tol=1e-13)
               - math.sqrt(math.pi)) < 1e-12
    assert abs(integrate(np.sin, 0.0, math.pi) - 2.0) < 1e-12


def test_integrate_orientation_and_degenerate():
    assert integrate(lambda x: x, 1.0, 0.0) == -0.5
    assert integrate(lambda x: x, 2.0, 2.0) == 0.0


def test_integrate_kink_points():
    # |x| integrates exactly once the kink is declared
    val = integrate(lambda x: np.abs(x), -1.0, 2.0, points=(0.0,))
    assert abs(val - 2.5) < 1e-13


def test_grid_validation():
    with pytest.raises(DomainError):
        Grid(0.0, 1.0, 4)      # even count
    with pytest.raises(DomainError):
        Grid(1.0, 0.0, 5)      # empty interval
    g = Grid.symmetric_grid(3.0, 7)
    assert g.symmetric
    assert g.h == 1.0
    assert 0.0 in g.nodes()


def test_trapezoid_weights():
    g = Grid(0.0, 1.0, 11)
    w = g.trapezoid_weights()
    assert abs(w.sum() - 1.0) < 1e-14
    assert w[0] == w[-1] == g.h / 2


def test_refined_nests():
    g = Grid(0.0, 2.0, 5)
    r = g.refined()
    assert r.n == 9
    assert set(np.round(g.nodes(), 12)) <= set(np.round(r.nodes(), 12))


def test_tabulated_density_basics():
    m = MeasureSpec.gaussian(1.0)
    g = Grid.symmetric_grid(10.0, 2001)
    d = tabulate(m, g)
    assert abs(d.mass - 1.0) < 1e-8
    assert abs(d.mean()) < 1e-12
    assert abs(d.variance() - 1.0) < 1e-6
    assert abs(d.quantile(0.5)) < 1e-10
    c = d.cdf_values()
    assert np.all(np.diff(c) >= 0.0)
    assert d(100.0) == 0.0


def test_tabulated_density_rejects_negative():
    g = Grid(0.0, 1.0, 3)
    with pytest.raises(DomainError):
        TabulatedDensity(g, np.array([1.0, -0.1, 1.0]))


def test_rescale_preserves_law():
    m = MeasureSpec.gaussian(1.0)
    g = Grid.symmetric_grid(10.0, 2001)
    d = tabulate(m, g).normalized()
    s = _rescale(d, 2.0)
    assert abs(s.mass - 1.0) < 1e-8
    # interpolation onto the stretched grid costs O(h^2)
    assert abs(s.variance() - 4.0) < 2e-4


def test_convolution_adds_mean_and_variance():
    m = MeasureSpec.logistic()
    g = Grid.symmetric_grid(40.0, 8001)
    d = tabulate(m, g).normalized()
    c = _convolve(d, d).normalized()
    assert abs(c.mean()) < 1e-10
    assert abs(c.variance() - 2.0 * d.variance()) < 1e-6
    # fast path agrees with the direct path
    cf = _convolve(d, d, fast=True)
    assert np.max(np.abs(cf.values - _convolve(d, d).values)) < 1e-12


def test_self_convolve_scaled_clt_normalization():
    m = MeasureSpec.gaussian(1.0)
    g = Grid.symmetric_grid(12.0, 2401)
    d = tabulate(m, g)
    n = 4
    out = self_convolve_scaled(d, n, [1.0 / math.sqrt(n)] * n)
    assert abs(out.variance() - 1.0) < 1e-6
    # Gaussian is stable: the normalized sum has the same density
    x = np.linspace(-3, 3, 31)
    assert np.max(np.abs(out(x) - d(x))) < 1e-6


def test_self_convolve_scaled_validation():
    m = MeasureSpec.gaussian(1.0)
    d = tabulate(m, Grid.symmetric_grid(12.0, 2401))
    with pytest.raises(DomainError):
        self_convolve_scaled(d, 2, [1.0])
    with pytest.raises(DomainError):
        self_convolve_scaled(d, 2, [0.0, 0.0])
    narrow = tabulate(m, Grid.symmetric_grid(1.0, 201))
    with pytest.raises(GridTooNarrow):
        self_convolve_scaled(narrow, 3, [1.0, 1.0, 1.0])


def test_trim_keeps_center_and_mass():
    m = MeasureSpec.gaussian(1.0)
    d = tabulate(m, Grid.symmetric_grid(30.0, 6001))
    t = _trim(d)
    assert t.grid.n < d.grid.n
    assert t.grid.symmetric
    assert abs(t.mass - d.mass) < 1e-12
