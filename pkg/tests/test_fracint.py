import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.integrate import quad

from geokern.errors import ConvergenceError, DomainError
from geokern.fracint import (
    OperatorParams,
    Profile,
    Side,
    WeightSpec,
    check_precondition,
    compose_identity_residual,
    gc_apply,
    gc_profile,
    gc_report,
    mellin_numeric,
    mellin_symbol,
    reconstruct_psi,
    reflect,
    rl_derivative,
    rl_integral,
)
from geokern.specfun import eval_poly, norm_const, poly_for

GAUSS = Profile(lambda t: np.exp(-t * t), name="gauss")
EXP = Profile(lambda t: np.exp(-t), name="exp")
LOG_GRID = np.geomspace(0.1, 10, 15)


def _brute(params, f, t):
    """The operator from its defining integral, by scipy adaptive quadrature."""
    lam, m = params.lam, params.m
    pid = poly_for(lam, m)
    c = (2 / math.sqrt(math.pi)) if lam == 0 else 1 / norm_const(lam, m)
    if params.side is Side.RIGHT and not params.starred:
        g = lambda r: (r * r - t * t) ** (lam - 0.5) * eval_poly(pid, t / r) * f(r) * r
        return c * quad(g, t, np.inf, limit=400)[0]
    if params.side is Side.RIGHT:
        g = lambda r: (r * r - t * t) ** (lam - 0.5) * eval_poly(pid, r / t) * f(r) * r ** (-2 * lam - 1)
        return c * t * quad(g, t, np.inf, limit=400)[0]
    # left-sided: t plays the role of the outer variable r
    # the (t - s)^(lam - 1/2) factor goes to quad's algebraic weight
    alg = {"weight": "alg", "wvar": (0.0, lam - 0.5), "limit": 400}
    if not params.starred:
        g = lambda s: (t + s) ** (lam - 0.5) * eval_poly(pid, s / t) * f(s)
        return c * t ** (-2 * lam) * quad(g, 0, t, **alg)[0]
    g = lambda s: (t + s) ** (lam - 0.5) * eval_poly(pid, t / s) * f(s) * s
    return c * quad(g, 0, t, **alg)[0]


# ---------------------------------------------------------------- operators


def test_operator_examples():
    t = np.array([0.3, 1.0, 2.5])
    rep = gc_report(OperatorParams(0.5, 2, Side.RIGHT), Profile.power(-3.0), t)
    assert np.all(np.abs(rep.value) <= 1e-8 * rep.magnitude)
    rep = gc_report(OperatorParams(0.5, 2, Side.LEFT), Profile.power(0.0), t)
    assert np.all(np.abs(rep.value) <= 1e-8 * rep.magnitude)
    assert gc_apply(OperatorParams(0.5, 0, Side.RIGHT), GAUSS, 1.0) == pytest.approx(math.exp(-1), rel=1e-12)
    ref = 2 / math.sqrt(math.pi) * quad(lambda r: (r * r - 0.64) ** -0.5 * (0.8 / r) * math.exp(-r) * r, 0.8, np.inf)[0]
    assert gc_apply(OperatorParams(0.0, 1, Side.RIGHT), EXP, 0.8) == pytest.approx(ref, rel=1e-8)


@pytest.mark.parametrize("side", [Side.RIGHT, Side.LEFT])
@pytest.mark.parametrize("starred", [False, True])
@pytest.mark.parametrize("lam,m", [(0.0, 2), (0.5, 3), (1.0, 2), (1.5, 4), (-0.25, 2)])
def test_operators_match_defining_integrals(side, starred, lam, m):
    f = Profile(lambda t: np.exp(-t - 1.0 / t), zero_exponent=math.inf)
    p = OperatorParams(lam, m, side, starred)
    for t in (0.6, 1.7):
        assert gc_apply(p, f, t) == pytest.approx(_brute(p, f, t), rel=1e-7, abs=1e-12)


def test_precondition_names_the_condition():
    with pytest.raises(DomainError, match="t\\^\\(2lam-eta\\)"):
        check_precondition(OperatorParams(0.5, 2, Side.RIGHT), Profile.power(-1.5))
    with pytest.raises(DomainError, match="t\\^\\(m-2\\)"):
        check_precondition(OperatorParams(0.5, 4, Side.RIGHT, starred=True), Profile.power(-2.5))
    with pytest.raises(DomainError, match="t\\^eta"):
        check_precondition(OperatorParams(0.5, 2, Side.LEFT), Profile.power(-1.5))
    with pytest.raises(DomainError, match="t\\^\\(1-m\\)"):
        check_precondition(OperatorParams(1.0, 3, Side.LEFT, starred=True), Profile.power(0.5))
    with pytest.raises(DomainError):
        OperatorParams(-0.5, 2, Side.RIGHT)
    with pytest.raises(DomainError):
        gc_apply(OperatorParams(0.5, 2, Side.RIGHT), GAUSS, -1.0)


@pytest.mark.parametrize("lam", [0.0, 0.5, 1.0, 1.5])
@pytest.mark.parametrize("m", [2, 3, 4, 5, 6])
def test_right_annihilation_sweep(lam, m):
    for k in range(m - 2, -1, -2):
        rep = gc_report(OperatorParams(lam, m, Side.RIGHT), Profile.power(-2 * lam - k - 2), LOG_GRID)
        assert np.all(np.abs(rep.value) <= 1e-7 * rep.magnitude)


@pytest.mark.parametrize("lam", [0.0, 0.5, 1.0, 1.5])
@pytest.mark.parametrize("m", [2, 3, 4, 5, 6])
def test_left_annihilation_sweep(lam, m):
    for k in range(m - 2, -1, -2):
        rep = gc_report(OperatorParams(lam, m, Side.LEFT), Profile.power(k), LOG_GRID)
        assert np.all(np.abs(rep.value) <= 1e-7 * rep.magnitude)


@pytest.mark.parametrize("m", [0, 1])
@pytest.mark.parametrize("side", [Side.RIGHT, Side.LEFT])
def test_injective_degrees_give_nonzero_output(m, side):
    out = gc_apply(OperatorParams(0.5, m, side), GAUSS, np.linspace(0.2, 3, 15))
    assert np.max(np.abs(out)) > 1e-3


def test_smoothness_proxy():
    F = gc_profile(OperatorParams(0.5, 3, Side.RIGHT), GAUSS)
    t = np.linspace(0.5, 3, 11)
    h = 1e-2
    d1 = (F(t + h) - 2 * F(t) + F(t - h)) / h**2
    d2 = (F(t + h / 2) - 2 * F(t) + F(t - h / 2)) / (h / 2) ** 2
    assert np.all(np.isfinite(d1)) and np.max(np.abs(d1 - d2)) < 1e-3 * (1 + np.max(np.abs(d2)))


@given(lam=st.sampled_from([0.0, 0.5, 1.0]), m=st.integers(0, 5), c=st.floats(0.2, 3.0))
@settings(max_examples=20, deadline=None)
def test_operator_linearity(lam, m, c):
    p = OperatorParams(lam, m, Side.RIGHT)
    t = np.array([0.5, 1.5])
    both = Profile(lambda s: c * np.exp(-s * s) + np.exp(-s))
    assert np.allclose(gc_apply(p, both, t), c * gc_apply(p, GAUSS, t) + gc_apply(p, EXP, t), rtol=1e-9, atol=1e-12)


# ----------------------------------------------------- fractional calculus


def test_rl_integral_examples():
    assert rl_integral(1.0, EXP, 0.3) == pytest.approx(math.exp(-0.3), rel=1e-12)
    assert rl_integral(2.0, EXP, 1.0) == pytest.approx(math.exp(-1), rel=1e-12)
    assert rl_integral(0.5, EXP, 0.0) == pytest.approx(1.0, rel=1e-10)
    with pytest.raises(DomainError):
        rl_integral(1.5, Profile.power(-1.2), 1.0)


def test_rl_derivative_examples():
    assert rl_derivative(1.0, EXP, 0.5) == pytest.approx(math.exp(-0.5), rel=1e-8)
    assert rl_derivative(0.5, EXP, np.array([0.5, 1.0, 2.0])) == pytest.approx(np.exp(-np.array([0.5, 1.0, 2.0])), rel=1e-7)


@pytest.mark.parametrize("alpha", [0.5, 1.0, 2.0])
def test_derivative_inverts_integral(alpha):
    t = np.array([0.5, 1.0, 2.0])
    If = Profile(lambda s: rl_integral(alpha, GAUSS, s), infinity_exponent=math.inf)
    assert np.max(np.abs(rl_derivative(alpha, If, t) - GAUSS(t)) / GAUSS(t)) <= 1e-6


def test_rl_derivative_reports_instability():
    rough = Profile(lambda s: np.exp(-s) * (1 + 1e-3 * np.sin(1e4 * s)))
    with pytest.raises(ConvergenceError) as info:
        rl_derivative(2.0, rough, 1.0, levels=3, fd_tol=1e-10)
    best, second = info.value.report
    assert np.all(np.isfinite(best)) and np.all(np.isfinite(second))


# ------------------------------------------------------------- identities


def test_composition_examples():
    assert compose_identity_residual(0.5, 2, GAUSS, [0.5, 1.0, 1.5]) <= 1e-6
    assert compose_identity_residual(0.0, 3, EXP, [1.0, 2.0]) <= 1e-6
    assert compose_identity_residual(1.0, 2, Profile.zero(), [1.0, 2.0]) == 0.0
    with pytest.raises(DomainError):
        compose_identity_residual(0.5, 1, GAUSS, [1.0])


def test_reflection_examples():
    f = Profile(lambda t: np.exp(-t - 1.0 / t), zero_exponent=math.inf)
    assert reflect("unstarred", 0.5, 2, f, [0.5, 1.0, 2.0]).residual <= 1e-8
    assert reflect("LeftFromRight_starred", 1.0, 3, f, [0.5, 1.0, 2.0]).residual <= 1e-8
    # the left null function t^0 maps to the right null function t^(-2lam-2)
    chk = reflect("unstarred", 0.5, 2, Profile.power(0.0), [0.5, 1.0, 2.0])
    assert chk.transformed.is_pure_power and chk.transformed.pure_power_tail[1] == pytest.approx(3.0)
    assert np.max(np.abs(chk.via_right)) <= 1e-8 * np.max(np.abs(gc_apply(OperatorParams(0.5, 2, Side.LEFT), Profile.power(1.0), [0.5, 1.0, 2.0])))
    zero = reflect("starred", 0.5, 2, Profile.zero(), [0.5, 1.0])
    assert np.all(zero.direct == 0) and np.all(zero.via_right == 0)


def test_mellin_examples():
    assert complex(mellin_symbol(0.5, 2, 3.0)) == pytest.approx(1.25, rel=1e-14)
    assert complex(mellin_symbol(0.5, 0, 1.0)) == pytest.approx(1.0, rel=1e-14)
    for lam, m in ((0.5, 2), (1.0, 3), (0.0, 2), (1.5, 4)):
        z = m + 1.0
        assert mellin_numeric(lam, m, z) == pytest.approx(complex(mellin_symbol(lam, m, z)), rel=1e-7)
    with pytest.raises(DomainError):
        mellin_symbol(0.5, 2, 0.5)


@given(x=st.floats(0.1, 4.0), y=st.floats(-3.0, 3.0))
@settings(max_examples=25, deadline=None)
def test_mellin_closed_form_matches_numeric(x, y):
    z = 1.0 + x + 1j * y  # m = 2: Re z > 1
    assert mellin_numeric(0.5, 2, z) == pytest.approx(complex(mellin_symbol(0.5, 2, z)), rel=1e-7, abs=1e-12)


@pytest.mark.parametrize("m", [2, 3, 4, 5])
def test_mellin_continuation_singular_pattern(m):
    """The continued symbol flips sign across z = m - 3, like its neighbours m - 1 - 2k."""
    lo = complex(mellin_symbol(0.5, m, m - 3 - 1e-3, continued=True)).real
    hi = complex(mellin_symbol(0.5, m, m - 3 + 1e-3, continued=True)).real
    assert lo * hi < 0 and min(abs(lo), abs(hi)) > 10


def test_weight_spec():
    t = np.array([0.5, 2.0])
    assert np.allclose(WeightSpec("kappa_left", 0.5, 2)(t), 1.0)
    assert np.allclose(WeightSpec("kappa_left", 0.5, 3)(t), t)
    assert np.allclose(WeightSpec("kappa_left", 0.0, 3)(t), t * (1 + np.abs(np.log(t))))
    assert np.allclose(WeightSpec("kappa_left", -0.25, 3)(t), t**0.5)
    assert np.allclose(WeightSpec("kappa_tilde_right", 1.0, 2)(t), t**2)
    assert np.allclose(WeightSpec("kappa_tilde_right", 1.0, 3)(t), t)
    assert np.allclose(WeightSpec("kappa_tilde_right", -0.25, 3)(t), 1 / t)
    # t^(-3) is admitted by the right weight for lam = 1/2, m = 2, and t^(-2) is not
    assert WeightSpec("kappa_tilde_right", 0.5, 2).admits(Profile.power(-3.0), 1.0)
    assert not WeightSpec("kappa_tilde_right", 0.5, 2).admits(Profile.power(-2.0), 1.0)
    with pytest.raises(DomainError):
        WeightSpec("nope", 0.5, 2)(t)


def test_profile_exponent_sampling():
    assert Profile.power(-2.0).verify_exponents()
    assert GAUSS.verify_exponents()
    assert not Profile(lambda t: t ** -2.0, zero_exponent=0.0, infinity_exponent=2.0).verify_exponents()


# --------------------------------------------------------- reconstruction


def test_reconstruct_zero_and_bad_input():
    zero = Profile.zero()
    zero = Profile(zero.func, support=(1.0, 2.0))
    psi = reconstruct_psi(0.5, 2, zero)
    assert np.all(psi(np.linspace(0.5, 3, 7)) == 0)
    from geokern.nullspace import bump

    with pytest.raises(DomainError, match="moment"):
        reconstruct_psi(0.5, 2, bump(1.0, 2.0))
    with pytest.raises(DomainError):
        reconstruct_psi(0.5, 2, GAUSS)


def test_reconstruct_chebyshev_case():
    from geokern.cli import roundtrip_residuals

    res, beyond = roundtrip_residuals(0.0, 2)
    assert res <= 1e-4 and beyond <= 1e-8
