import numpy as np
import pytest

from warpgeo.errors import StencilError
from warpgeo.fd import DiffEngine

NO_BOUNDS = (np.array([-np.inf]), np.array([np.inf]))


@pytest.mark.parametrize("scheme,degree", [("central2", 2), ("central4", 4), ("richardson", 3)])
def test_polynomial_exact_up_to_scheme_order(scheme, degree):
    # exact in real arithmetic; float error is cancellation noise amplified
    # by the 1/h division, so the bound scales the machine epsilon that way
    rng = np.random.default_rng(0)
    coeffs = rng.uniform(-2.0, 2.0, size=degree + 1)
    poly = np.polynomial.Polynomial(coeffs)
    dpoly = poly.deriv()
    engine = DiffEngine(scheme=scheme)
    for x in [-1.3, 0.0, 0.7, 2.1]:
        got = float(engine.partial(lambda c: poly(c[0]), [x], 0, *NO_BOUNDS))
        stencil_peak = max(abs(poly(x + t)) for t in (-2 * engine.step, 2 * engine.step))
        bound = 100 * np.finfo(float).eps * (1.0 + stencil_peak / (2 * engine.step))
        assert abs(got - dpoly(x)) <= bound


def test_square_at_one():
    engine = DiffEngine()
    got = engine.partial(lambda c: c[0] ** 2, [1.0], 0, *NO_BOUNDS)
    assert abs(got - 2.0) <= 1e-9


def test_constant_is_exactly_zero():
    engine = DiffEngine()
    assert engine.partial(lambda c: 7.25, [0.3], 0, *NO_BOUNDS) == 0.0


def test_exponential_within_h_squared():
    engine = DiffEngine()
    got = engine.partial(lambda c: np.exp(c[0]), [0.0], 0, *NO_BOUNDS)
    assert abs(got - 1.0) <= engine.step**2


@pytest.mark.parametrize("scheme,min_ratio", [("central2", 3.5), ("central4", 10.0), ("richardson", 10.0)])
def test_halving_step_shrinks_error(scheme, min_ratio):
    # large steps keep roundoff negligible so the order shows cleanly
    err = {}
    for h in (1e-2, 5e-3):
        engine = DiffEngine(scheme=scheme, step=h)
        got = engine.partial(lambda c: np.exp(c[0]), [0.0], 0, *NO_BOUNDS)
        err[h] = abs(float(got) - 1.0)
    assert err[1e-2] / err[5e-3] >= min_ratio


def test_step_shrinks_near_boundary():
    engine = DiffEngine()
    lower, upper = np.array([0.0]), np.array([1.0])
    x = 1e-6  # closer to the wall than the nominal step
    got = engine.partial(lambda c: c[0] ** 3, [x], 0, lower, upper)
    assert abs(float(got) - 3 * x**2) <= 1e-10


def test_stencil_error_when_no_room():
    engine = DiffEngine()
    lower, upper = np.array([0.0]), np.array([1e-12])
    with pytest.raises(StencilError):
        engine.partial(lambda c: c[0], [5e-13], 0, lower, upper)


def test_vector_and_matrix_valued_fields():
    engine = DiffEngine()
    got = engine.partial(lambda c: np.array([c[0] ** 2, np.sin(c[0])]), [0.5], 0, *NO_BOUNDS)
    assert np.allclose(got, [1.0, np.cos(0.5)], atol=1e-9)
    got_m = engine.partial(lambda c: np.diag([c[0], c[0] ** 2]), [2.0], 0, *NO_BOUNDS)
    assert np.allclose(got_m, np.diag([1.0, 4.0]), atol=1e-9)


def test_jacobian_matches_analytic():
    engine = DiffEngine()
    lower, upper = np.array([-5.0, -5.0]), np.array([5.0, 5.0])

    def fn(c):
        return np.array([c[0] * c[1], np.exp(c[0])])

    J = engine.jacobian(fn, [0.3, -0.7], lower, upper)
    want = np.array([[-0.7, 0.3], [np.exp(0.3), 0.0]])
    assert np.allclose(J, want, atol=1e-9)


def test_directional_matches_partial_combination():
    engine = DiffEngine()
    lower, upper = np.array([-5.0, -5.0]), np.array([5.0, 5.0])
    fn = lambda c: np.sin(c[0]) * c[1]
    got = engine.directional(fn, [0.4, 1.2], [2.0, -1.0], lower, upper)
    want = 2.0 * np.cos(0.4) * 1.2 - np.sin(0.4)
    assert abs(got - want) <= 1e-9
    assert engine.directional(fn, [0.4, 1.2], [0.0, 0.0], lower, upper) == 0.0


def test_rejects_bad_configuration():
    with pytest.raises(ValueError):
        DiffEngine(scheme="forward1")
    with pytest.raises(ValueError):
        DiffEngine(step=-1e-5)
