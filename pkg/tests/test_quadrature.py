import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.special import beta as beta_fn

from geokern.errors import DomainError
from geokern.quadrature import (
    QuadratureSpec,
    Rule,
    gauss_jacobi,
    integrate_jacobi,
    integrate_semi_infinite,
    integrate_singular_endpoint,
    integrate_sphere,
)

SPEC = QuadratureSpec()


def _consistent(rep):
    if rep.converged:
        assert rep.error_estimate <= max(SPEC.abs_tol, SPEC.rel_tol * max(abs(rep.value), rep.magnitude)) + 1e-300


def test_singular_endpoint_examples():
    rep = integrate_singular_endpoint(lambda x: np.ones_like(x), 0.0, 1.0, -0.5, SPEC)
    assert rep.converged and rep.value == pytest.approx(2.0, rel=1e-12)
    rep = integrate_singular_endpoint(lambda x: np.ones_like(x), 0.0, 1.0, 0.0, SPEC)
    assert rep.value == pytest.approx(1.0, rel=1e-12)
    # int_0^2 x (2 - x)^(1/2) dx is a Beta integral: 2^(5/2) B(2, 3/2) = 16 sqrt(2) / 15
    rep = integrate_singular_endpoint(lambda x: x, 0.0, 2.0, 0.5, SPEC)
    assert rep.value == pytest.approx(16 * math.sqrt(2) / 15, rel=1e-12)
    _consistent(rep)


def test_semi_infinite_examples():
    rep = integrate_semi_infinite(lambda x: np.exp(-x), 0.0, math.inf, SPEC)
    assert rep.converged and rep.value == pytest.approx(1.0, rel=1e-10)
    rep = integrate_semi_infinite(lambda x: x * np.exp(-x * x), 1.0, math.inf, SPEC)
    assert rep.value == pytest.approx(0.5 * math.exp(-1), rel=1e-10)
    rep = integrate_semi_infinite(lambda x: x**-3.0, 2.0, 3.0, SPEC, pure_power=True)
    assert rep.value == pytest.approx(0.125, rel=1e-12)
    rep = integrate_semi_infinite(lambda x: x**-3.0, 2.0, 3.0, SPEC)
    assert rep.value == pytest.approx(0.125, rel=1e-8)


def test_semi_infinite_log_tail():
    # 1/(x log^2 x) on (2, inf) integrates to 1/log 2
    rep = integrate_semi_infinite(lambda x: 1.0 / (x * np.log(x) ** 2), 2.0, 1.0, SPEC)
    assert rep.converged and rep.value == pytest.approx(1 / math.log(2), rel=1e-6)
    rep = integrate_semi_infinite(lambda x: 1.0 / (x * np.log(x)), 2.0, 1.0, SPEC)
    assert not rep.converged


def test_sphere_examples():
    for n in (2, 3, 5):
        if n > 3:
            continue
        rep = integrate_sphere(lambda p: np.ones(p.shape[0]), n, SPEC)
        assert rep.value == pytest.approx(1.0, rel=1e-13)
    assert integrate_sphere(lambda p: p[:, 0] ** 2, 2, SPEC).value == pytest.approx(0.5, rel=1e-12)
    assert integrate_sphere(lambda p: p[:, 2] ** 2, 3, SPEC).value == pytest.approx(1 / 3, rel=1e-12)


@pytest.mark.parametrize("g", [-0.3, 0.5, 1.3])
def test_sphere_pole_rule(g):
    """The pole rule absorbs a (1 - cos(angle to pole))**g factor."""
    mp.mp.dps = 25
    gm = mp.mpf(g)
    # n = 3: average of (1 - z)^g e^z is (1/2) int_{-1}^1 (1 - z)^g e^z dz
    ref3 = float(mp.quad(lambda z: (1 - z) ** gm * mp.exp(z), [-1, 1]) / 2)
    rep = integrate_sphere(lambda p: (1 - p[:, 2]) ** g * np.exp(p[:, 2]), 3, SPEC, pole_exponent=g)
    assert rep.converged and rep.value == pytest.approx(ref3, rel=1e-10)
    # n = 2: the pole is (0, 1); with angle e from the pole, 1 - sin = 2 sin^2(e/2)
    ref2 = float(mp.quad(lambda e: (2 * mp.sin(e / 2) ** 2) ** gm * mp.exp(-mp.sin(e)), [-mp.pi, 0, mp.pi]) / (2 * mp.pi))
    rep = integrate_sphere(lambda p: (1 - p[:, 1]) ** g * np.exp(p[:, 0]), 2, SPEC, pole_exponent=g)
    assert rep.converged and rep.value == pytest.approx(ref2, rel=1e-10)


@given(k=st.integers(1, 12), alpha=st.floats(-0.9, 2.0), beta=st.floats(-0.9, 2.0), data=st.data())
@settings(max_examples=60, deadline=None)
def test_gauss_jacobi_exactness(k, alpha, beta, data):
    """k nodes integrate x^d (0 <= d <= 2k-1) against (1-x)^a (1+x)^b exactly."""
    d = data.draw(st.integers(0, 2 * k - 1))
    x, w = gauss_jacobi(k, alpha, beta)
    # int_{-1}^1 ((1+x)/2)^d (1-x)^a (1+x)^b dx = 2^(a+b+1) B(a+1, b+d+1)
    exact = 2 ** (alpha + beta + 1) * beta_fn(alpha + 1, beta + d + 1)
    got = ((1 + x) / 2) ** d @ w
    assert got == pytest.approx(exact, rel=1e-12)


def test_large_rule_is_cheap_and_accurate():
    x, w = gauss_jacobi(4096, -0.5, 0.5)
    assert np.all(np.diff(x) > 0) and np.all(w > 0)
    assert w.sum() == pytest.approx(math.pi, rel=1e-12)


def test_tanh_sinh_and_legendre_rules_agree():
    f = lambda x: np.cos(x)
    # a singular weight needs tanh-sinh; Legendre only sees it as part of the integrand
    for rule, alpha in ((Rule.TANH_SINH, -0.5), (Rule.TANH_SINH, 0.5), (Rule.GAUSS_LEGENDRE, 1.0)):
        rep = integrate_jacobi(f, 0.0, 1.0, SPEC.with_(rule=rule), alpha=alpha)
        ref = integrate_jacobi(f, 0.0, 1.0, SPEC, alpha=alpha).value
        assert rep.converged and rep.value == pytest.approx(ref, rel=1e-9)


def test_nonconvergence_is_reported():
    spec = QuadratureSpec(max_nodes=32)
    rep = integrate_jacobi(lambda x: np.sin(1.0 / (x + 1e-3)), 0.0, 1.0, spec)
    assert not rep.converged and math.isinf(rep.error_estimate)


def test_spec_validation():
    with pytest.raises(DomainError):
        QuadratureSpec(rel_tol=0)
    with pytest.raises(DomainError):
        QuadratureSpec(nodes=64, max_nodes=32)
    with pytest.raises(DomainError):
        integrate_jacobi(lambda x: x, 1.0, 0.0, SPEC)
