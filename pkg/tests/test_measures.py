"""Measure constructors, densities, truncation and bump functions."""

import json
import math

import numpy as np
import pytest

from prodiso.errors import DomainError, NonDifferentiablePoint
from prodiso.measures import BumpFunction, MeasureSpec
from prodiso.numerics import integrate

ALL_BUILTINS = [
    MeasureSpec.logistic(),
    MeasureSpec.gaussian(1.0),
    MeasureSpec.gaussian(0.5),
    MeasureSpec.two_sided_exponential(),
    MeasureSpec.power_law(4.0),
    MeasureSpec.power_law(1.5),
]


@pytest.mark.parametrize("m", ALL_BUILTINS, ids=lambda m: m.label)
def test_density_normalized(m):
    a, b = m.truncation_interval(1e-14)
    mass = integrate(m.density, a, b, rel_tol=1e-12,
                     points=m._singular_points())
    assert abs(mass - 1.0) < 1e-10


@pytest.mark.parametrize("m", ALL_BUILTINS, ids=lambda m: m.label)
def test_cdf_quantile_roundtrip(m):
    for t in (0.05, 0.3, 0.5, 0.77, 0.99):
        assert abs(m.cdf(m.quantile(t)) - t) < 1e-9


def test_logistic_cdf_identity():
    # F' = F (1 - F) characterizes the logistic distribution
    m = MeasureSpec.logistic()
    x = np.linspace(-8.0, 8.0, 101)
    f = m.density(x)
    cdf = np.array([m.cdf(v) for v in x])
    assert np.max(np.abs(f - cdf * (1.0 - cdf))) < 1e-12


def test_moments():
    assert abs(MeasureSpec.gaussian(2.0).variance - 4.0) < 1e-10
    assert abs(MeasureSpec.logistic().variance - math.pi ** 2 / 3.0) < 1e-8
    assert abs(MeasureSpec.two_sided_exponential().variance - 2.0) < 1e-8
    assert abs(MeasureSpec.logistic().mean) < 1e-12


@pytest.mark.parametrize("m", ALL_BUILTINS, ids=lambda m: m.label)
def test_log_density_derivatives_match_fd(m):
    x = np.array([0.37, 1.21, -2.4])
    h = 1e-5
    psi, dpsi, ddpsi = m.log_density(x)
    fd1 = (m.log_density(x + h)[0] - m.log_density(x - h)[0]) / (2 * h)
    fd2 = (m.log_density(x + h)[0] - 2 * psi + m.log_density(x - h)[0]) / h ** 2
    assert np.max(np.abs(dpsi - fd1)) < 1e-6
    assert np.max(np.abs(ddpsi - fd2)) < 1e-4


def test_truncation_tail_budget():
    m = MeasureSpec.logistic()
    for tail in (1e-6, 1e-10, 1e-12):
        a, b = m.truncation_interval(tail)
        assert a == -b
        # per-tail budget: each side carries at most tail/2
        assert m.cdf(a) <= 0.5 * tail * (1 + 1e-9)
        assert m.cdf(a) > 0.05 * tail


def test_truncation_rejects_bad_budget():
    with pytest.raises(DomainError):
        MeasureSpec.logistic().truncation_interval(0.5)


def test_kinks_raise():
    with pytest.raises(NonDifferentiablePoint):
        MeasureSpec.two_sided_exponential().log_density(0.0)
    with pytest.raises(NonDifferentiablePoint):
        MeasureSpec.power_law(1.5).log_density(0.0)
    # p >= 2 is fine at the origin
    assert MeasureSpec.power_law(4.0).log_density(0.0)[2] == 0.0


def test_verify_flags():
    for m in ALL_BUILTINS:
        report = m.verify_flags()
        assert report["symmetry_ok"]
        assert report["log_concavity_ok"]


def test_from_descriptor():
    assert MeasureSpec.from_descriptor("logistic").kind == "logistic"
    m = MeasureSpec.from_descriptor('{"kind": "gaussian", "sigma": 2.0}')
    assert m.sigma == 2.0
    m = MeasureSpec.from_descriptor({"kind": "power", "p": 4})
    assert m.p == 4.0
    with pytest.raises(DomainError):
        MeasureSpec.from_descriptor("nope")


def test_bump_even_and_derivatives():
    bump = BumpFunction((1.0, -0.5), (1.0, 2.5), (0.8, 1.2))
    x = np.linspace(-5.0, 5.0, 401)
    b, b1, b2 = bump.evaluate(x)
    assert np.max(np.abs(b - bump(-x))) < 1e-14
    h = 1e-5
    fd1 = (bump(x + h) - bump(x - h)) / (2 * h)
    fd2 = (bump(x + h) - 2 * bump(x) + bump(x - h)) / h ** 2
    assert np.max(np.abs(b1 - fd1)) < 1e-6
    assert np.max(np.abs(b2 - fd2)) < 1e-3


def test_bump_compact_support():
    bump = BumpFunction((2.0,), (1.0,), (0.5,))
    assert bump(bump.support_radius + 0.1) == 0.0
    assert bump(-(bump.support_radius + 0.1)) == 0.0


def test_bump_json_roundtrip():
    bump = BumpFunction((1.0, 0.25), (0.0, 2.0), (1.0, 0.7))
    again = BumpFunction.from_json(bump.to_json())
    assert again == bump
    assert json.loads(bump.to_json())["centers"] == [0.0, 2.0]


def test_gaussian_bump_measure():
    bump = BumpFunction((0.5,), (1.0,), (0.8,))
    m = MeasureSpec.gaussian_bump(0.1, bump)
    a, b = m.truncation_interval(1e-12)
    mass = integrate(m.density, a, b, rel_tol=1e-12)
    assert abs(mass - 1.0) < 1e-9
    # log-density matches -(x^2/2 + eps bump) up to the normalizing constant
    x = np.linspace(-3.0, 3.0, 41)
    psi = m.log_density(x)[0]
    expect = -(x ** 2 / 2.0 + 0.1 * bump(x))
    shift = psi - expect
    assert np.max(np.abs(shift - shift[0])) < 1e-12
    # zero perturbation keeps the strict log-concavity tag
    assert MeasureSpec.gaussian_bump(0.0, bump).log_concavity == \
        MeasureSpec.gaussian(1.0).log_concavity
    assert m.log_concavity != MeasureSpec.gaussian(1.0).log_concavity


def test_custom_measure():
    def pot(x):
        x = np.asarray(x, dtype=float)
        return x ** 4 / 4.0 + x ** 2, x ** 3 + 2 * x, 3 * x ** 2 + 2.0

    m = MeasureSpec.custom(pot, symmetric=True)
    a, b = m.truncation_interval(1e-10)
    mass = integrate(m.density, a, b, rel_tol=1e-10)
    assert abs(mass - 1.0) < 1e-8
    assert abs(m.mean) < 1e-8
