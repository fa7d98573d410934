import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.special import eval_chebyt, eval_gegenbauer

from geokern.errors import DomainError
from geokern.specfun import (
    Family,
    PolyId,
    eval_poly,
    explicit_sum,
    gamma_fn,
    harmonic_dim,
    norm_const,
    poly_for,
    reversed_poly,
    sphere_area,
)


def test_eval_poly_examples():
    assert eval_poly(PolyId(Family.GEGENBAUER, 0, 1.0), 0.37) == pytest.approx(1.0, abs=1e-15)
    assert eval_poly(PolyId(Family.GEGENBAUER, 1, 1.0), 0.5) == pytest.approx(1.0, abs=1e-15)
    assert eval_poly(PolyId(Family.CHEBYSHEV_T, 2), 0.0) == pytest.approx(-1.0, abs=1e-15)
    assert eval_poly(PolyId(Family.CHEBYSHEV_T, 3), math.cos(0.7)) == pytest.approx(math.cos(2.1), abs=1e-14)


def test_poly_rejections():
    with pytest.raises(DomainError):
        PolyId(Family.GEGENBAUER, 2, -0.5)
    with pytest.raises(DomainError):
        PolyId(Family.GEGENBAUER, 2, 0.0)
    with pytest.raises(DomainError):
        PolyId(Family.GEGENBAUER, -1, 1.0)
    assert poly_for(0.0, 3).family is Family.CHEBYSHEV_T


@pytest.mark.parametrize("lam", [-0.25, 0.5, 1.0, 2.5])
@pytest.mark.parametrize("m", [0, 1, 2, 5, 11, 20])
def test_recurrence_matches_scipy_and_explicit_sum(lam, m):
    t = np.linspace(-2, 2, 41)
    ours = eval_poly(PolyId(Family.GEGENBAUER, m, lam), t)
    ref = eval_gegenbauer(m, lam, t)
    scale = np.max(np.abs(ref)) + 1e-300
    assert np.max(np.abs(ours - ref)) / scale < 1e-10
    assert np.max(np.abs(explicit_sum(lam, m, t) - ours)) / scale < 1e-10


@pytest.mark.parametrize("m", [0, 1, 4, 9])
def test_chebyshev_matches_scipy(m):
    t = np.linspace(-1.5, 1.5, 31)
    assert np.allclose(eval_poly(PolyId(Family.CHEBYSHEV_T, m), t), eval_chebyt(m, t), rtol=1e-12, atol=1e-12)


@given(lam=st.floats(-0.45, 3.0).filter(lambda x: abs(x) > 1e-3), m=st.integers(0, 12))
@settings(max_examples=60, deadline=None)
def test_bound_by_endpoint_value(lam, m):
    """|C(t)| is bounded on [-1, 1] by its endpoint value (times |t| for odd m) when lam > 0."""
    pid = PolyId(Family.GEGENBAUER, m, lam)
    t = np.linspace(-1, 1, 401)
    c = abs(eval_poly(pid, 1.0))
    vals = np.abs(eval_poly(pid, t))
    if lam > 0:
        ref = c * (np.abs(t) if m % 2 else 1.0)
        # the odd-degree refinement is the sharper statement near t = 0 only for m = 1
        bound = c if m % 2 == 0 or m > 1 else ref
        assert np.all(vals <= bound * (1 + 1e-12) + 1e-300)


@given(lam=st.floats(0.1, 3.0), m=st.integers(0, 10), s=st.floats(0.05, 1.0))
@settings(max_examples=50, deadline=None)
def test_reversed_poly(lam, m, s):
    pid = PolyId(Family.GEGENBAUER, m, lam)
    assert reversed_poly(pid, s) == pytest.approx(s**m * eval_poly(pid, 1.0 / s), rel=1e-10, abs=1e-12)


def test_norm_const_examples():
    assert norm_const(0.5, 0) == pytest.approx(0.5, abs=1e-15)
    assert norm_const(0.5, 2) == pytest.approx(0.5, abs=1e-15)
    assert norm_const(1.0, 1) == pytest.approx(math.sqrt(math.pi) / 2, rel=1e-14)
    for bad in (0.0, -0.5, -1.0):
        with pytest.raises(DomainError):
            norm_const(bad, 2)


def test_gamma_examples():
    assert gamma_fn(1) == 1
    assert gamma_fn(0.5) == pytest.approx(1.7724538509, rel=1e-10)
    assert gamma_fn(5) == 24
    for pole in (0, -1, -7):
        with pytest.raises(DomainError):
            gamma_fn(pole)


def test_harmonic_dim_examples():
    assert harmonic_dim(3, 2) == 5
    assert harmonic_dim(2, 7) == 2
    assert harmonic_dim(3, 0) == 1
    # multiplicity formula against the count of harmonic polynomials in R^4
    assert [harmonic_dim(4, m) for m in range(5)] == [(m + 1) ** 2 for m in range(5)]


def test_sphere_area():
    assert sphere_area(0) == pytest.approx(2.0)
    assert sphere_area(1) == pytest.approx(2 * math.pi)
    assert sphere_area(2) == pytest.approx(4 * math.pi)
