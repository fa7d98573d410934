"""Real spherical harmonics, separable functions and Fourier-Laplace coefficients.

Harmonics are orthonormal for the unnormalized surface measure on S^{n-1}.
Full bases are provided for n = 2 (Fourier modes) and n = 3 (real associated
Legendre functions); for any n the zonal harmonic about an axis is available.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np
from scipy.special import assoc_legendre_p

from geokern.errors import ConvergenceError, DomainError
from geokern.fracint import Profile
from geokern.quadrature import QuadratureSpec, integrate_sphere
from geokern.specfun import eval_poly, harmonic_dim, poly_for, sphere_area

__all__ = [
    "Kind",
    "Orientation",
    "SphericalHarmonic",
    "SeparableFunction",
    "eval_harmonic",
    "fourier_laplace_coeff",
    "zonal_norm",
    "funk_hecke_factor",
]


class Kind(str, enum.Enum):
    FULL = "full"
    ZONAL = "zonal"


class Orientation(str, enum.Enum):
    SPACE = "space"  # f(r theta) = u(r) Y(theta)
    CYLINDER = "cylinder"  # phi(theta, t) = v(t) Y(theta)


def zonal_norm(n: int, m: int) -> float:
    """L^2(S^{n-1}) norm of ``theta -> C^lam_m(axis . theta)`` (``T_m`` for n = 2)."""
    if n == 2:
        return math.sqrt(2 * math.pi if m == 0 else math.pi)
    lam = (n - 2) / 2
    # int_{-1}^1 C^2 (1-t^2)^(lam-1/2) dt, in log form to avoid overflow
    log_h = (
        math.log(math.pi) + (1 - 2 * lam) * math.log(2) + math.lgamma(m + 2 * lam)
        - math.lgamma(m + 1) - math.log(m + lam) - 2 * math.lgamma(lam)
    )
    return math.sqrt(sphere_area(n - 2) * math.exp(log_h))


def funk_hecke_factor(n: int, m: int) -> float:
    """``C^lam_m(0) / C^lam_m(1)``: great-sphere averages of a degree-m harmonic scale by this."""
    pid = poly_for((n - 2) / 2, m)
    return float(eval_poly(pid, 0.0) / eval_poly(pid, 1.0))


@dataclass(frozen=True)
class SphericalHarmonic:
    """``Y_{m,mu}`` on S^{n-1}.

    n = 2: mu = 1 is ``cos(m phi)``, mu = 2 is ``sin(m phi)``. n = 3: mu = 1 is
    the zonal element, then mu = 2k and 2k + 1 pair ``P_m^k`` with ``cos(k phi)``
    and ``sin(k phi)``. ``Kind.ZONAL`` ignores mu and uses ``axis``.
    """

    n: int
    m: int
    mu: int = 1
    kind: Kind = Kind.FULL
    axis: tuple[float, ...] | None = None

    def __post_init__(self):
        if self.n < 2 or self.m < 0:
            raise DomainError(f"need n >= 2 and m >= 0, got n={self.n}, m={self.m}")
        object.__setattr__(self, "kind", Kind(self.kind))
        if self.kind is Kind.FULL:
            if self.n > 3:
                raise DomainError(f"full harmonic bases are unsupported for n = {self.n}; use Kind.ZONAL")
            if not 1 <= self.mu <= harmonic_dim(self.n, self.m):
                raise DomainError(f"mu must lie in 1..{harmonic_dim(self.n, self.m)}, got {self.mu}")
        else:
            axis = np.zeros(self.n) if self.axis is None else np.asarray(self.axis, dtype=float)
            if self.axis is None:
                axis[-1] = 1.0
            if axis.shape != (self.n,) or not np.isclose(np.linalg.norm(axis), 1.0, atol=1e-12):
                raise DomainError("zonal axis must be a unit vector in R^n")
            object.__setattr__(self, "axis", tuple(float(a) for a in axis))

    @property
    def parity(self) -> int:
        return -1 if self.m % 2 else 1

    def __call__(self, theta):
        theta = np.asarray(theta, dtype=float)
        if self.kind is Kind.ZONAL:
            c = theta @ np.asarray(self.axis)
            return eval_poly(poly_for((self.n - 2) / 2, self.m), np.clip(c, -1.0, 1.0)) / zonal_norm(self.n, self.m)
        if self.n == 2:
            phi = np.arctan2(theta[..., 1], theta[..., 0])
            if self.m == 0:
                return np.full(phi.shape, 1.0 / math.sqrt(2 * math.pi))
            trig = np.cos if self.mu == 1 else np.sin
            return trig(self.m * phi) / math.sqrt(math.pi)
        z = np.clip(theta[..., 2], -1.0, 1.0)
        phi = np.arctan2(theta[..., 1], theta[..., 0])
        k = self.mu // 2
        norm = math.sqrt((2 * self.m + 1) / (4 * math.pi) * math.exp(math.lgamma(self.m - k + 1) - math.lgamma(self.m + k + 1)))
        leg = assoc_legendre_p(self.m, k, z)[0] * norm  # leading axis indexes derivatives
        if k == 0:
            return leg
        trig = np.cos if self.mu % 2 == 0 else np.sin
        return math.sqrt(2.0) * leg * trig(k * phi)


def eval_harmonic(Y: SphericalHarmonic, theta) -> np.ndarray:
    """``Y(theta)`` for unit vectors ``theta`` (last axis of length n)."""
    theta = np.asarray(theta, dtype=float)
    if theta.shape[-1] != Y.n:
        raise DomainError(f"theta must have last dimension {Y.n}")
    if np.any(np.abs(np.linalg.norm(theta, axis=-1) - 1.0) > 1e-12):
        raise DomainError("theta must be a unit vector (to 1e-12)")
    return Y(theta)


@dataclass(frozen=True)
class SeparableFunction:
    """``u(|x|) Y(x/|x|)`` on R^n, or ``v(t) Y(theta)`` on the cylinder S^{n-1} x R.

    On the cylinder only ``v`` on t > 0 is used; negative t follows the parity
    rule ``v(-t) = (-1)**m v(t)``, which makes the function even.
    """

    profile: Profile
    harmonic: SphericalHarmonic
    orientation: Orientation = Orientation.SPACE
    coef: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "orientation", Orientation(self.orientation))

    @property
    def n(self) -> int:
        return self.harmonic.n

    @property
    def m(self) -> int:
        return self.harmonic.m

    def radial(self, r):
        return self.coef * self.profile(r)

    def __call__(self, x, t=None):
        x = np.asarray(x, dtype=float)
        if self.orientation is Orientation.SPACE:
            # scaled norm: direct quadratures probe |x| beyond the square-root overflow point
            s = np.max(np.abs(x), axis=-1, keepdims=True)
            with np.errstate(invalid="ignore", divide="ignore"):
                theta = x / s
                theta = theta / np.linalg.norm(theta, axis=-1, keepdims=True)
                r = s[..., 0] * np.linalg.norm(x / s, axis=-1)
            return self.radial(r) * self.harmonic(theta)
        t = np.asarray(t, dtype=float)
        sign = np.where(t < 0, float(self.harmonic.parity), 1.0)
        return sign * self.radial(np.abs(t)) * self.harmonic(x)

    def abs(self) -> "SeparableFunction":
        """Pointwise absolute value, still labelled by this harmonic (only its modulus matters)."""
        return _AbsSeparable(self.profile, self.harmonic, self.orientation, abs(self.coef))


class _AbsSeparable(SeparableFunction):
    def __call__(self, x, t=None):
        return np.abs(SeparableFunction.__call__(self, x, t))


def fourier_laplace_coeff(f, Y: SphericalHarmonic, r: float, spec: QuadratureSpec = QuadratureSpec()) -> float:
    """``int_{S^{n-1}} f(theta, r) Y(theta) dtheta`` (unnormalized measure).

    ``f(theta, r)`` receives unit vectors of shape ``(N, n)``.
    """
    n = Y.n

    def g(theta):
        return np.asarray(f(theta, r), dtype=float) * Y(theta)

    rep = integrate_sphere(g, n, spec)
    if not rep.converged:
        raise ConvergenceError("Fourier-Laplace coefficient did not converge", rep)
    return float(sphere_area(n - 1) * rep.value)
