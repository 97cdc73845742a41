"""Half-space geometry, stationarity classification and stability verdicts."""

import math

import numpy as np
import pytest

from prodiso.errors import DomainError, HypothesisViolated
from prodiso.halfspace import (
    COORDINATE,
    GAUSSIAN_ALL,
    HalfSpace,
    INCONCLUSIVE,
    NOT_STATIONARY,
    PERIODIC_MINUS,
    STABLE,
    SYMMETRIC_PLUS,
    UNSTABLE,
    boundary_measure,
    classify_stationary,
    coordinate_stability,
    coordinate_stable_region,
    mean_curvature_residual,
    noncoordinate_stability,
    projection_density,
)
from prodiso.measures import MeasureSpec

LOGISTIC = MeasureSpec.logistic()
GAUSSIAN = MeasureSpec.gaussian(1.0)
POWER4 = MeasureSpec.power_law(4.0)


def test_halfspace_normalization():
    hs = HalfSpace((3.0, 4.0), 5.0)
    assert abs(np.linalg.norm(hs.v) - 1.0) < 1e-14
    assert hs.reference == 1
    assert abs(hs.tau - 5.0 / 0.8) < 1e-12
    with pytest.raises(DomainError):
        HalfSpace((0.0, 0.0), 1.0)


def test_constructors():
    hs = HalfSpace.coordinate(1, 0.7, 3)
    assert hs.v == (0.0, 1.0, 0.0)
    assert hs.nonzero == (1,)
    b = HalfSpace.bisector(-1, 0.0, 4)
    assert b.nonzero == (0, 1)
    assert abs(b.v[0] - 1 / math.sqrt(2)) < 1e-14
    assert abs(b.alpha(1) + 1.0) < 1e-14
    with pytest.raises(DomainError):
        HalfSpace.bisector(2, 0.0)


def test_classify_coordinate():
    v = classify_stationary([LOGISTIC] * 3, HalfSpace.coordinate(2, 1.3, 3))
    assert v.tag == COORDINATE
    assert v.stationary


def test_classify_bisector_minus():
    v = classify_stationary([LOGISTIC, LOGISTIC], HalfSpace.bisector(-1, 0.0))
    assert v.tag == PERIODIC_MINUS
    assert v.stationary
    assert v.residual < 1e-10


def test_classify_bisector_plus():
    v = classify_stationary([LOGISTIC, LOGISTIC], HalfSpace.bisector(1, 0.0))
    assert v.tag == SYMMETRIC_PLUS
    assert v.stationary


def test_classify_not_stationary():
    # logistic bisector with nonzero offset breaks the matching identity
    v = classify_stationary([LOGISTIC, LOGISTIC], HalfSpace.bisector(1, 0.8))
    assert v.tag == NOT_STATIONARY
    assert not v.stationary
    assert v.residual > 1e-3


def test_classify_gaussian_any_direction():
    hs = HalfSpace((0.6, -0.8, 0.1), 0.4)
    v = classify_stationary([GAUSSIAN] * 3, hs)
    assert v.tag == GAUSSIAN_ALL
    assert v.stationary


def test_mean_curvature_cross_check():
    r = mean_curvature_residual([LOGISTIC, LOGISTIC],
                                HalfSpace.bisector(-1, 0.0))
    assert r < 1e-10
    r = mean_curvature_residual([LOGISTIC, LOGISTIC],
                                HalfSpace.bisector(1, 0.8))
    assert r > 1e-3


def test_coordinate_stability_logistic():
    # -psi''(0) = 1/2 > 1/4 = gap: the symmetric half-line is unstable
    assert coordinate_stability(LOGISTIC, 0.0).tag == UNSTABLE
    assert coordinate_stability(LOGISTIC, 3.0).tag == STABLE


def test_coordinate_stability_gaussian_threshold():
    # Gaussian sits exactly at threshold for every t and is stable
    for t in (0.0, 1.0, -2.5):
        assert coordinate_stability(GAUSSIAN, t).tag == STABLE


def test_coordinate_stable_region_logistic():
    region = coordinate_stable_region(LOGISTIC)
    assert len(region) == 2
    # threshold: 2 F(t) (1 - F(t)) = 1/4, i.e. |t| = 2 log(1 + sqrt 2)
    t_star = 2.0 * math.log(1.0 + math.sqrt(2.0))
    assert region[0][0] == -math.inf and region[1][1] == math.inf
    assert abs(region[0][1] + t_star) < 1e-6
    assert abs(region[1][0] - t_star) < 1e-6


def test_coordinate_stable_region_gaussian_and_power():
    assert coordinate_stable_region(GAUSSIAN) == [(-math.inf, math.inf)]
    region = coordinate_stable_region(POWER4)
    assert len(region) == 1
    lam = 2.7371850433
    t_star = math.sqrt(lam / 12.0)
    assert abs(region[0][0] + t_star) < 1e-4
    assert abs(region[0][1] - t_star) < 1e-4


def test_noncoordinate_logistic_dims():
    assert noncoordinate_stability(LOGISTIC, -1, 0.0, 2).tag == STABLE
    v = noncoordinate_stability(LOGISTIC, -1, 0.0, 3)
    assert v.tag == UNSTABLE
    assert v.certificates["p2_infimum"] < 1.0
    # verdicts are dimension independent beyond the 2 / >=3 split
    assert noncoordinate_stability(LOGISTIC, -1, 0.0, 7).tag == UNSTABLE


def test_noncoordinate_power_unstable_in_dim2():
    assert noncoordinate_stability(POWER4, -1, 0.0, 2).tag == UNSTABLE


def test_noncoordinate_gaussian_inconclusive():
    # the Gaussian sits exactly at the stability threshold
    assert noncoordinate_stability(GAUSSIAN, 1, 0.0, 3).tag == INCONCLUSIVE


def test_noncoordinate_rejects_asymmetric():
    with pytest.raises(HypothesisViolated):
        noncoordinate_stability(MeasureSpec.custom(
            lambda x: ((np.asarray(x) - 0.3) ** 2 / 2, np.asarray(x) - 0.3,
                       np.ones_like(np.asarray(x, dtype=float)))), 1, 0.0, 2)
    with pytest.raises(DomainError):
        noncoordinate_stability(LOGISTIC, 2, 0.0, 3)


def test_projection_density_variance():
    hs = HalfSpace((1.0, 1.0), 0.0)
    d = projection_density([LOGISTIC, LOGISTIC], hs)
    var = LOGISTIC.variance
    assert abs(d.variance() - var) < 1e-4
    assert abs(d.mean()) < 1e-10


def test_boundary_measure_coordinate_exact():
    hs = HalfSpace.coordinate(0, 1.0, 2)
    val = boundary_measure([GAUSSIAN, GAUSSIAN], hs)
    expect = math.exp(-0.5) / math.sqrt(2.0 * math.pi)
    assert abs(val - expect) < 1e-12


def test_boundary_measure_bisector_logistic():
    hs = HalfSpace.bisector(-1, 0.0)
    val = boundary_measure([LOGISTIC, LOGISTIC], hs)
    assert abs(val - math.sqrt(2.0) / 6.0) < 1e-5


def test_boundary_measure_permutation_equivariant():
    # same two-component direction on different coordinate pairs
    a = boundary_measure([LOGISTIC] * 3, HalfSpace((1.0, -1.0, 0.0), 0.2))
    b = boundary_measure([LOGISTIC] * 3, HalfSpace((0.0, 1.0, -1.0), 0.2))
    assert abs(a - b) < 1e-10
