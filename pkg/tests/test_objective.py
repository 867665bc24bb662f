import math

import numpy as np
import pytest

import tvtrack as tv
from tvtrack.errors import DegenerateInterval, MissingConstants
from tvtrack.objective import halton


def central_diff(f, x, i, step):
    e = np.zeros_like(x)
    e[i] = step
    return (f(x + e) - f(x - e)) / (2 * step)


SAMPLE_POINTS = {
    # (x samples, t samples) per problem fixture name
    "scalar_a": ([np.array([v]) for v in (-2.5, -0.7, 0.0, 0.4, 1.9)],
                 (0.0, 3.7, 41.0)),
    "tracking": ([np.array(v) for v in ((-120.0, 30.0), (0.0, 0.0),
                                        (80.0, -90.0), (140.0, 140.0))],
                 (0.0, 150.0, 400.0)),
    "quad_sine_1d": ([np.array([v]) for v in (-1.0, 0.3)], (0.0, 2.0)),
}


@pytest.fixture(params=list(SAMPLE_POINTS))
def sampled_problem(request):
    return request.getfixturevalue(request.param), SAMPLE_POINTS[request.param]


def test_gradient_matches_value_fd(sampled_problem):
    obj, (xs, ts) = sampled_problem
    # error ratio across shrinking steps has log-log slope ~2
    for x in xs:
        for t in ts:
            g = obj.gradient(x, t)
            errs = []
            steps = (1e-2, 1e-3, 1e-4)
            for s in steps:
                fd = np.array([central_diff(lambda z: obj.value(z, t), x, i, s)
                               for i in range(obj.dim)])
                errs.append(max(np.linalg.norm(fd - g), 1e-14))
            # skip points where truncation is below the roundoff floor of
            # the value's magnitude (the difference is then pure noise)
            if max(errs) < 1e-11 * max(1.0, abs(obj.value(x, ts[0]))):
                continue
            slope = np.polyfit(np.log(steps), np.log(errs), 1)[0]
            assert abs(slope - 2.0) <= 0.3


def test_hessian_matches_gradient_fd(sampled_problem):
    obj, (xs, ts) = sampled_problem
    for x in xs:
        for t in ts:
            h = obj.hessian(x, t)
            fd = np.zeros((obj.dim, obj.dim))
            for i in range(obj.dim):
                fd[i] = central_diff(lambda z: obj.gradient(z, t), x, i, 1e-5)
            scale = max(1.0, np.abs(h).max())
            assert np.abs(fd - h).max() <= 1e-6 * scale


def test_mixed_tx_matches_time_fd(sampled_problem):
    obj, (xs, ts) = sampled_problem
    for x in xs:
        for t in ts:
            tx = obj.mixed_tx(x, t)
            fd = (obj.gradient(x, t + 1e-5) - obj.gradient(x, t - 1e-5)) / 2e-5
            assert np.linalg.norm(fd - tx) <= 1e-6 * max(1.0, np.linalg.norm(tx))


def test_fd_time_gradient_linear_in_t_is_exact(quad_affine_2d):
    # gradient x - t*rate is affine in t, so the backward difference is exact
    x = np.array([0.7, -1.3])
    fd = tv.fd_time_gradient(quad_affine_2d, x, 0.4, 0.3)
    assert np.allclose(fd, [-1.0, -2.0], atol=1e-12)


def test_fd_time_gradient_scalar_value(scalar_a):
    h = 0.1
    fd = tv.fd_time_gradient(scalar_a, np.array([0.0]), h, 0.0)
    w = 0.02 * math.pi
    expected = (math.cos(0.0) - math.cos(w * h)) / h
    assert abs(fd[0] - expected) <= 1e-13
    assert abs(fd[0] - 1.974e-4) <= 1e-6


def test_fd_time_gradient_degenerate(scalar_a):
    with pytest.raises(DegenerateInterval):
        tv.fd_time_gradient(scalar_a, np.array([0.0]), 1.0, 1.0)


def test_fd_error_bounded_by_c3(sampled_problem):
    # |mixed_tx - backward difference| <= h c3 / 2 at every sampled point
    obj, (xs, ts) = sampled_problem
    c3 = obj.constants.c3
    for x in xs:
        for t in ts:
            for h in (0.5, 0.1, 0.01):
                fd = tv.fd_time_gradient(obj, x, t + h, t)
                exact = obj.mixed_tx(x, t + h)
                assert np.linalg.norm(exact - fd) <= h * c3 / 2 + 1e-9


def test_halton_is_deterministic_and_in_cube():
    a = halton(64, 3)
    b = halton(64, 3)
    assert np.array_equal(a, b)
    assert (a > 0).all() and (a < 1).all()


def test_check_assumptions_scalar_all_margins_hold(scalar_a):
    rep = tv.check_assumptions(scalar_a, [(-3.0, 3.0)], (0.0, 100.0),
                               n_samples=256)
    assert rep.ok, rep.as_dict()


def test_check_assumptions_quadratic_exact_margins(quad_affine_2d):
    rep = tv.check_assumptions(quad_affine_2d, [(-2.0, 2.0), (-2.0, 2.0)],
                               (0.0, 10.0), n_samples=128)
    assert rep.ok
    # constant Hessian: curvature margins are exactly zero
    assert rep.m == 0.0
    assert rep.L == 0.0
    assert rep.c1 == 0.0


def test_check_assumptions_detects_bad_L(scalar_a):
    claimed = tv.SmoothnessConstants(m=1.0, L=5.0, c0=0.0629, c1=3.87,
                                     c2=0.0, c3=0.004)
    weak = tv.TimeVaryingObjective(
        dim=1, value=scalar_a.value, gradient=scalar_a.gradient,
        hessian=scalar_a.hessian, mixed_tx=scalar_a.mixed_tx,
        mixed_ttx=scalar_a.mixed_ttx, constants=claimed)
    rep = tv.check_assumptions(weak, [(-3.0, 3.0)], (0.0, 100.0),
                               n_samples=256)
    assert rep.L < 0  # curvature near x=0 is 6.74 > 5


def test_check_assumptions_requires_constants(scalar_a):
    bare = tv.TimeVaryingObjective(
        dim=1, value=scalar_a.value, gradient=scalar_a.gradient,
        hessian=scalar_a.hessian)
    with pytest.raises(MissingConstants):
        tv.check_assumptions(bare, [(-1.0, 1.0)], (0.0, 1.0), n_samples=8)


def test_constants_validation():
    with pytest.raises(ValueError):
        tv.SmoothnessConstants(m=0.0, L=1.0, c0=0, c1=0, c2=0, c3=0)
    with pytest.raises(ValueError):
        tv.SmoothnessConstants(m=2.0, L=1.0, c0=0, c1=0, c2=0, c3=0)
    with pytest.raises(ValueError):
        tv.SmoothnessConstants(m=1.0, L=1.0, c0=-1.0, c1=0, c2=0, c3=0)
