import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from geokern.errors import DomainError
from geokern.fracint import Profile
from geokern.harmonics import (
    Kind,
    Orientation,
    SeparableFunction,
    SphericalHarmonic,
    eval_harmonic,
    fourier_laplace_coeff,
    funk_hecke_factor,
    zonal_norm,
)
from geokern.quadrature import QuadratureSpec, integrate_sphere
from geokern.specfun import harmonic_dim, sphere_area


def _unit(v):
    v = np.asarray(v, dtype=float)
    return v / np.linalg.norm(v)


def test_examples():
    th = _unit([0.3, -0.4, 0.2])[:2] / np.linalg.norm(_unit([0.3, -0.4, 0.2])[:2])
    assert eval_harmonic(SphericalHarmonic(2, 0), th) == pytest.approx(1 / math.sqrt(2 * math.pi))
    assert eval_harmonic(SphericalHarmonic(3, 1, 1), np.array([0.0, 0.0, 1.0])) == pytest.approx(math.sqrt(3 / (4 * math.pi)))
    rng = np.random.default_rng(3)
    for mu in range(1, 8):
        Y = SphericalHarmonic(3, 3, mu)
        th = _unit(rng.standard_normal(3))
        assert eval_harmonic(Y, -th) == pytest.approx(-eval_harmonic(Y, th), abs=1e-14)


def test_rejections():
    with pytest.raises(DomainError):
        SphericalHarmonic(4, 2)
    with pytest.raises(DomainError):
        SphericalHarmonic(3, 2, mu=6)
    with pytest.raises(DomainError):
        eval_harmonic(SphericalHarmonic(3, 2), np.array([1.0, 1.0, 0.0]))
    with pytest.raises(DomainError):
        SphericalHarmonic(3, 2, kind=Kind.ZONAL, axis=(1.0, 1.0, 0.0))


@pytest.mark.parametrize("n", [2, 3])
def test_gram_matrix_through_degree_6(n):
    basis = [SphericalHarmonic(n, m, mu) for m in range(7) for mu in range(1, harmonic_dim(n, m) + 1)]

    def g(p):
        vals = np.array([Y(p) for Y in basis])
        return (vals[:, None, :] * vals[None, :, :]).reshape(len(basis) ** 2, -1)

    rep = integrate_sphere(g, n, QuadratureSpec())
    gram = sphere_area(n - 1) * rep.value.reshape(len(basis), len(basis))
    assert np.max(np.abs(gram - np.eye(len(basis)))) <= 1e-8


@pytest.mark.parametrize("n,m", [(2, 3), (3, 2), (4, 2), (5, 3)])
def test_zonal_normalization(n, m):
    Y = SphericalHarmonic(n, m, kind=Kind.ZONAL)
    if n <= 3:
        rep = integrate_sphere(lambda p: Y(p) ** 2, n, QuadratureSpec())
        assert sphere_area(n - 1) * rep.value == pytest.approx(1.0, rel=1e-10)
    # against the one-dimensional reduction: int C^2 (1 - t^2)^(lam - 1/2) dt times |S^(n-2)|
    from scipy.integrate import quad

    lam = (n - 2) / 2
    c = lambda t: Y(np.append(np.zeros(n - 1), t)) * zonal_norm(n, m)
    val = sphere_area(n - 2) * quad(lambda t: c(t) ** 2 * (1 - t * t) ** (lam - 0.5), -1, 1)[0]
    assert math.sqrt(val) == pytest.approx(zonal_norm(n, m), rel=1e-9)


def test_fourier_laplace_examples():
    Y21, Y31 = SphericalHarmonic(3, 2, 1), SphericalHarmonic(3, 3, 1)
    f = lambda th, r: Y21(th) * math.exp(-r)
    assert fourier_laplace_coeff(f, Y21, 1.0) == pytest.approx(math.exp(-1), rel=1e-10)
    assert abs(fourier_laplace_coeff(f, Y31, 1.0)) <= 1e-10
    absz = lambda th, r: np.abs(th[:, 2])
    assert fourier_laplace_coeff(absz, SphericalHarmonic(3, 0), 2.0) == pytest.approx(math.sqrt(4 * math.pi) / 2, rel=1e-6)


@given(a=st.floats(-2, 2), b=st.floats(-2, 2), mu=st.integers(1, 5))
@settings(max_examples=15, deadline=None)
def test_fourier_laplace_is_linear(a, b, mu):
    Y = SphericalHarmonic(3, 2, mu)
    f1 = lambda th, r: th[:, 0] * th[:, 1] * r
    f2 = lambda th, r: th[:, 2] ** 2 + th[:, 0]
    lhs = fourier_laplace_coeff(lambda th, r: a * f1(th, r) + b * f2(th, r), Y, 1.5)
    rhs = a * fourier_laplace_coeff(f1, Y, 1.5) + b * fourier_laplace_coeff(f2, Y, 1.5)
    assert lhs == pytest.approx(rhs, abs=1e-10)


@pytest.mark.parametrize("m,mu", [(m, mu) for m in range(5) for mu in (1, 2, 3) if mu <= 2 * m + 1])
def test_funk_hecke_great_circle_average(m, mu):
    Y = SphericalHarmonic(3, m, mu)
    rng = np.random.default_rng(10 * m + mu)
    p = _unit(rng.standard_normal(3))
    e1 = _unit(np.cross(p, [0.3, 0.5, 0.8]))
    e2 = np.cross(p, e1)
    phi = np.linspace(0, 2 * math.pi, 200, endpoint=False)
    circle = np.cos(phi)[:, None] * e1 + np.sin(phi)[:, None] * e2
    assert Y(circle).mean() == pytest.approx(funk_hecke_factor(3, m) * Y(p), abs=1e-12)


def test_separable_function_orientations():
    Y = SphericalHarmonic(2, 3, 2)
    prof = Profile(lambda t: np.exp(-t))
    f = SeparableFunction(prof, Y, Orientation.SPACE, coef=2.0)
    x = np.array([[0.3, -1.2]])
    r = np.linalg.norm(x)
    assert f(x)[0] == pytest.approx(2 * math.exp(-r) * Y(x / r)[0])
    phi = SeparableFunction(prof, Y, Orientation.CYLINDER)
    th = np.array([[0.6, 0.8]])
    # evenness on the cylinder
    assert phi(-th, np.array([-0.7]))[0] == pytest.approx(phi(th, np.array([0.7]))[0])
    assert np.all(f.abs()(x) >= 0)
