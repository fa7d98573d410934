"""Radon-type transforms of separable functions.

Every transform has a fast path, which reduces it to a one-dimensional
Gegenbauer-Chebyshev integral of the radial (or axial) profile, and a direct
path that integrates over the plane, sphere or geodesic by quadrature
(n in {2, 3}). The two routes share no code beyond the quadrature engines,
so agreement between them is a meaningful check.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from geokern.errors import ConvergenceError, DomainError
from geokern.fracint import OperatorParams, Profile, Side, gc_apply
from geokern.harmonics import Orientation, SeparableFunction, SphericalHarmonic
from geokern.quadrature import IntegrationReport, QuadratureSpec, integrate_semi_infinite, integrate_sphere, sphere_rule
from geokern.specfun import sphere_area

__all__ = [
    "Path",
    "Hyperplane",
    "Region",
    "HyperbolicPoint",
    "SphereFunction",
    "HyperbolicFunction",
    "lorentz",
    "reduction_constant",
    "radon",
    "dual_radon",
    "cormack_quinto",
    "funk",
    "slice_transform",
    "hyperbolic_geodesic",
    "unsigned_mass",
    "maps",
    "map_A",
    "map_B",
    "mu",
    "nu",
    "nu_inverse",
]

DEFAULT_SPEC = QuadratureSpec()
#: tolerance used for unsigned-mass estimates, which only set a scale
MASS_SPEC = QuadratureSpec(rel_tol=1e-3, abs_tol=1e-14)
#: below this |t| the reduction evaluates its kernel at 1/|t| and loses about eps/|t|
_MIN_PLANE_DISTANCE = 1e-6
_INNER_K0 = 16
_INNER_K_MAX = 256


class Path(str, enum.Enum):
    FAST = "fast"
    DIRECT = "direct"


def reduction_constant(n: int) -> float:
    """``Gamma(n/2) / sqrt(pi)``: the dual Radon transform of ``v(t) Y`` is this times ``G_+ v``."""
    return math.gamma(n / 2) / math.sqrt(math.pi)


def _unit(v, what="vector") -> np.ndarray:
    v = np.asarray(v, dtype=float)
    if v.ndim != 1 or abs(np.linalg.norm(v) - 1.0) > 1e-12:
        raise DomainError(f"{what} must be a unit vector")
    return v


def _frame(last, exclude=(), dim=None) -> np.ndarray:
    """Orthonormal rows spanning the complement of ``exclude``; the last row is ``last``."""
    last = np.asarray(last, dtype=float)
    dim = last.size if dim is None else dim
    cols = [np.asarray(e, dtype=float) for e in exclude] + [last]
    q, _ = np.linalg.qr(np.column_stack(cols + [np.eye(dim)]))
    k = len(cols)
    rest = q[:, k : dim].T
    return np.vstack([rest, last / np.linalg.norm(last)])


@dataclass(frozen=True)
class Hyperplane:
    """The plane ``{x : x . theta = t}``; ``(theta, t)`` and ``(-theta, -t)`` coincide."""

    theta: tuple[float, ...]
    t: float

    def __post_init__(self):
        th = _unit(self.theta, "plane normal")
        object.__setattr__(self, "theta", tuple(float(a) for a in th))
        object.__setattr__(self, "t", float(self.t))

    @property
    def n(self) -> int:
        return len(self.theta)

    @property
    def normal(self) -> np.ndarray:
        return np.asarray(self.theta)

    def canonical(self) -> "Hyperplane":
        th = self.normal
        if self.t < 0 or (self.t == 0 and th[np.flatnonzero(th)[0]] < 0):
            return Hyperplane(tuple(-th), -self.t)
        return self


class RegionSide(str, enum.Enum):
    EXTERIOR = "exterior"
    INTERIOR = "interior"


@dataclass(frozen=True)
class Region:
    """``|x| > a`` / ``|t| > a`` (exterior) or ``|x| < a`` / ``|t| < a`` (interior)."""

    a: float
    side: RegionSide = RegionSide.EXTERIOR

    def __post_init__(self):
        if self.a < 0:
            raise DomainError("region radius must be nonnegative")
        object.__setattr__(self, "side", RegionSide(self.side))

    def contains(self, r) -> np.ndarray:
        r = np.abs(np.asarray(r, dtype=float))
        return r > self.a if self.side is RegionSide.EXTERIOR else r < self.a


def lorentz(x, y) -> np.ndarray:
    """``[x, y] = -x_1 y_1 - ... - x_n y_n + x_{n+1} y_{n+1}``."""
    x, y = np.asarray(x, dtype=float), np.asarray(y, dtype=float)
    return x[..., -1] * y[..., -1] - np.sum(x[..., :-1] * y[..., :-1], axis=-1)


@dataclass(frozen=True)
class HyperbolicPoint:
    """A point of the hyperboloid ``[x, x] = 1, x_{n+1} > 0``, or a dual point ``[xi, xi] = -1``."""

    coords: tuple[float, ...]

    def __post_init__(self):
        x = np.asarray(self.coords, dtype=float)
        q = float(lorentz(x, x))
        if abs(q - 1.0) <= 1e-10:
            if x[-1] <= 0:
                raise DomainError("hyperboloid points need x_{n+1} > 0")
        elif abs(q + 1.0) > 1e-10:
            raise DomainError(f"[x, x] = {q}; expected 1 (point) or -1 (geodesic normal)")
        object.__setattr__(self, "coords", tuple(float(a) for a in x))

    @property
    def n(self) -> int:
        return len(self.coords) - 1

    @property
    def vector(self) -> np.ndarray:
        return np.asarray(self.coords)

    @property
    def is_dual(self) -> bool:
        return float(lorentz(self.vector, self.vector)) < 0

    @classmethod
    def from_polar(cls, r: float, theta) -> "HyperbolicPoint":
        th = _unit(theta, "direction")
        return cls(tuple(np.append(th * math.sinh(r), math.cosh(r))))

    @classmethod
    def normal(cls, height: float, direction) -> "HyperbolicPoint":
        """The dual point ``(sqrt(1 + h**2) omega, h)`` whose geodesic is ``[x, xi] = 0``."""
        om = _unit(direction, "direction")
        return cls(tuple(np.append(om * math.sqrt(1.0 + height * height), height)))

    def polar(self) -> tuple[float, np.ndarray]:
        x = self.vector
        rho = np.linalg.norm(x[:-1])
        theta = x[:-1] / rho if rho > 0 else np.eye(self.n)[-1]
        return math.asinh(rho), theta


@dataclass(frozen=True)
class SphereFunction:
    """``f(eta sin(a) + e cos(a)) = F(a) Y(eta)`` on S^n, ``a`` the angle from the north pole e.

    ``pole_exponent`` and ``far_exponent`` describe ``F`` near ``a = 0`` and
    near the far end of its range. With ``even=True`` (Funk transform) F is
    given on ``(0, pi/2]``, the far end is the equator and the lower
    hemisphere is filled in by ``f(-s) = f(s)``; otherwise F lives on
    ``(0, pi)`` and the far end is the south pole.
    """

    profile: Callable[[np.ndarray], np.ndarray]
    harmonic: SphericalHarmonic
    pole_exponent: float = 0.0
    far_exponent: float = 0.0
    even: bool = True
    coef: float = 1.0

    @property
    def n(self) -> int:
        return self.harmonic.n

    def __call__(self, s):
        s = np.asarray(s, dtype=float)
        if self.even:
            s = np.where(s[..., -1:] < 0, -s, s)
        rho = np.linalg.norm(s[..., :-1], axis=-1)
        angle = np.arctan2(rho, s[..., -1])
        with np.errstate(invalid="ignore", divide="ignore"):
            eta = s[..., :-1] / rho[..., None]
            return self.coef * np.asarray(self.profile(angle)) * self.harmonic(eta)


@dataclass(frozen=True)
class HyperbolicFunction:
    """``f(theta sinh r + e cosh r) = u(r) Y(theta)`` on the hyperboloid."""

    profile: Profile
    harmonic: SphericalHarmonic
    coef: float = 1.0

    @property
    def n(self) -> int:
        return self.harmonic.n

    def polar(self, r, theta):
        return self.coef * self.profile(r) * self.harmonic(theta)

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        rho = np.linalg.norm(x[..., :-1], axis=-1)
        with np.errstate(invalid="ignore", divide="ignore"):
            return self.polar(np.arcsinh(rho), x[..., :-1] / rho[..., None])


# ------------------------------------------------------------------- maps


def map_A(phi: Callable) -> Callable:
    """``(A phi)(x) = |x|**-n phi(x/|x|, 1/|x|)``."""

    def A(x):
        x = np.asarray(x, dtype=float)
        r = np.linalg.norm(x, axis=-1)
        if np.any(r == 0):
            raise DomainError("A is undefined at x = 0")
        return r ** (-x.shape[-1]) * phi(x / r[..., None], 1.0 / r)

    return A


def map_B(f: Callable) -> Callable:
    """``(B f)(theta, t) = |t|**-n f(theta / t)``."""

    def B(theta, t):
        theta = np.asarray(theta, dtype=float)
        t = np.asarray(t, dtype=float)
        if np.any(t == 0):
            raise DomainError("B is undefined at t = 0")
        return np.abs(t) ** (-theta.shape[-1]) * f(theta / t[..., None])

    return B


def mu(x) -> np.ndarray:
    """``(x + e) / |x + e|``: R^n onto the open upper hemisphere of S^n."""
    x = np.asarray(x, dtype=float)
    y = np.concatenate([x, np.ones(x.shape[:-1] + (1,))], axis=-1)
    return y / np.linalg.norm(y, axis=-1, keepdims=True)


def nu(x) -> np.ndarray:
    """Inverse stereographic projection from the north pole."""
    x = np.asarray(x, dtype=float)
    r2 = np.sum(x * x, axis=-1, keepdims=True)
    return np.concatenate([2.0 * x, r2 - 1.0], axis=-1) / (r2 + 1.0)


def nu_inverse(eta) -> np.ndarray:
    eta = np.asarray(eta, dtype=float)
    if np.any(np.isclose(eta[..., -1], 1.0, rtol=0, atol=1e-15)):
        raise DomainError("the north pole has no stereographic image")
    return eta[..., :-1] / (1.0 - eta[..., -1:])


def maps(kind: str, value):
    """Dispatch on ``kind`` in {"A", "B", "Mu", "Nu", "NuInverse"}."""
    table = {"a": map_A, "b": map_B, "mu": mu, "nu": nu, "nuinverse": nu_inverse}
    try:
        fn = table[kind.lower().replace("_", "")]
    except KeyError:
        raise DomainError(f"unknown map {kind!r}") from None
    return fn(value)


# --------------------------------------------------------------- helpers


def _finish(rep: IntegrationReport, what: str, factor=1.0) -> float:
    if not rep.converged:
        raise ConvergenceError(f"{what}: direct quadrature did not converge", rep)
    return float(np.asarray(rep.value) * factor)


def _nested(outer: Callable[[int], IntegrationReport], spec: QuadratureSpec) -> IntegrationReport:
    """Refine a fixed inner angular rule until the outer result stops changing."""
    k = _INNER_K0
    prev = outer(k)
    while True:
        k *= 2
        cur = outer(k)
        diff = abs(float(cur.value) - float(prev.value))
        ref = max(float(cur.magnitude), abs(float(cur.value)))
        if diff <= max(spec.abs_tol, spec.rel_tol * ref) or k >= _INNER_K_MAX:
            ok = cur.converged and diff <= max(spec.abs_tol, spec.rel_tol * ref)
            return IntegrationReport(cur.value, max(cur.error_estimate, diff), cur.nodes_used, ok, cur.magnitude)
        prev = cur


def _of(f, absolute: bool):
    if absolute:
        return lambda *a: np.abs(f(*a))
    return f


def _space_profile(f: SeparableFunction) -> Profile:
    p = f.profile
    if f.coef == 1.0:
        return p
    c = f.coef
    tail = None if p.pure_power_tail is None else (c * p.pure_power_tail[0], p.pure_power_tail[1])
    return Profile(lambda r: c * p(r), p.zero_exponent, p.infinity_exponent, tail, p.tail_start, p.support, p.name)


def _check_n(n, what):
    if n not in (2, 3):
        raise DomainError(f"{what}: direct quadrature is available for n in {{2, 3}}, got n = {n}")


# ------------------------------------------------------------------ Radon


def radon(f: SeparableFunction, plane: Hyperplane, path: Path = Path.FAST, spec: QuadratureSpec = DEFAULT_SPEC) -> float:
    """Integral of ``f(x) = u(|x|) Y(x/|x|)`` over the hyperplane."""
    path = Path(path)
    if f.orientation is not Orientation.SPACE:
        raise DomainError("radon expects a function on R^n")
    if plane.n != f.n:
        raise DomainError("plane and function dimensions differ")
    if path is Path.FAST:
        return _radon_fast(f, plane, spec)
    return _finish(_radon_direct(f, plane, spec), "radon")


def _radon_fast(f: SeparableFunction, plane: Hyperplane, spec) -> float:
    n, m = f.n, f.m
    t = plane.t
    if abs(t) < _MIN_PLANE_DISTANCE:
        raise DomainError("the reduction excludes planes through the origin")
    # B maps f to the cylinder function v(s) Y(theta), v(s) = s**-n u(1/s)
    v = _space_profile(f).reflected(float(n))
    inner = gc_apply(OperatorParams((n - 2) / 2, m, Side.LEFT), v, 1.0 / abs(t), spec)
    sign = 1.0 if t > 0 or m % 2 == 0 else -1.0
    Y = float(f.harmonic(plane.normal))
    return float(sphere_area(n - 1) / (2.0 * abs(t)) * reduction_constant(n) * inner * sign * Y)


def _radon_direct(f, plane: Hyperplane, spec, absolute=False) -> IntegrationReport:
    n = plane.n
    _check_n(n, "radon")
    F = _of(f, absolute)
    th, t = plane.normal, plane.t
    W = _frame(th)[:-1]
    p = f.profile.decay
    decay = p - (n - 2) if math.isfinite(p) else math.inf
    beta = 0.0
    if t == 0 and math.isfinite(f.profile.zero_exponent):
        beta = f.profile.zero_exponent + n - 2
    base = t * th

    if n == 2:
        w = W[0]

        def g(rho):
            rho = np.asarray(rho, dtype=float)
            pts = base + rho[..., None] * w
            pts2 = base - rho[..., None] * w
            return (F(pts) + F(pts2)) * rho ** (-beta)

        return integrate_semi_infinite(g, 0.0, decay, spec, endpoint_exponent=beta)

    def outer(k):
        dirs, wts = sphere_rule(2, k)
        dirs = dirs @ W
        scale = 2.0 * math.pi * wts

        def g(rho):
            rho = np.asarray(rho, dtype=float)
            pts = base + rho[..., None, None] * dirs
            return (F(pts) @ scale) * rho ** (1.0 - beta)

        return integrate_semi_infinite(g, 0.0, decay, spec, endpoint_exponent=beta)

    return _nested(outer, spec)


# ------------------------------------------------------------- dual Radon


def dual_radon(phi: SeparableFunction, x, path: Path = Path.FAST, spec: QuadratureSpec = DEFAULT_SPEC) -> float:
    """Average of ``phi(theta, x . theta)`` over the unit sphere."""
    path = Path(path)
    if phi.orientation is not Orientation.CYLINDER:
        raise DomainError("dual_radon expects a function on the cylinder")
    x = np.asarray(x, dtype=float)
    if x.shape != (phi.n,):
        raise DomainError("point has the wrong dimension")
    if path is Path.FAST:
        r = float(np.linalg.norm(x))
        if r == 0:
            raise DomainError("the reduction is stated for x != 0")
        n, m = phi.n, phi.m
        inner = gc_apply(OperatorParams((n - 2) / 2, m, Side.LEFT), _space_profile(phi), r, spec)
        return float(reduction_constant(n) * inner * phi.harmonic(x / r))
    return _finish(_dual_direct(phi, x, spec), "dual_radon")


def _dual_direct(phi, x, spec, absolute=False) -> IntegrationReport:
    n = phi.n
    _check_n(n, "dual_radon")
    F = _of(phi, absolute)
    r = np.linalg.norm(x)
    # kinks of the even extension sit on x . theta = 0: make that the rule's equator
    basis = _frame(x / r) if r > 0 else None
    return integrate_sphere(lambda th: F(th, th @ x), n, spec, basis=basis)


# --------------------------------------------------------- Cormack-Quinto


def cormack_quinto(f: SeparableFunction, x, path: Path = Path.FAST, spec: QuadratureSpec = DEFAULT_SPEC) -> float:
    """Mean of ``f`` over the sphere with centre ``x`` through the origin."""
    path = Path(path)
    if f.orientation is not Orientation.SPACE:
        raise DomainError("cormack_quinto expects a function on R^n")
    x = np.asarray(x, dtype=float)
    r = float(np.linalg.norm(x))
    if r == 0:
        raise DomainError("the sphere degenerates at x = 0")
    if path is Path.FAST:
        n, m = f.n, f.m
        u = _space_profile(f)
        k = float(n - 2)
        tail = None
        if u.is_pure_power:
            c, p = u.pure_power_tail
            tail = (c * 2.0 ** (k - p), p - k)
        v = Profile(
            lambda t: (2.0 * t) ** k * u(2.0 * t),
            zero_exponent=u.zero_exponent + k,
            infinity_exponent=u.infinity_exponent - k,
            pure_power_tail=tail,
            support=None if u.support is None else (u.support[0] / 2, u.support[1] / 2),
        )
        inner = gc_apply(OperatorParams((n - 2) / 2, m, Side.LEFT), v, r, spec)
        return float(r ** (2 - n) * reduction_constant(n) * inner * f.harmonic(x / r))
    return _finish(_cq_direct(f, x, spec), "cormack_quinto")


def _cq_direct(f, x, spec, absolute=False) -> IntegrationReport:
    n = len(x)
    _check_n(n, "cormack_quinto")
    F = _of(f, absolute)
    r = np.linalg.norm(x)
    q = f.profile.zero_exponent
    # the sphere passes through the origin at theta = -x/|x|, where |f| ~ |y|**q;
    # |y| is the square root of the pole distance, so the pole variable is used even for q = 0
    g = q / 2 if math.isfinite(q) else None
    return integrate_sphere(lambda th: F(x + r * th), n, spec, basis=_frame(-x / r), pole_exponent=g)


# ------------------------------------------------------------------- Funk


def _funk_profile(f: SphereFunction) -> Profile:
    n, F, c = f.n, f.profile, f.coef
    return Profile(
        lambda r: c * (1.0 + r * r) ** (-n / 2) * F(np.arctan(r)),
        zero_exponent=f.pole_exponent,
        infinity_exponent=n + f.far_exponent,
    )


def funk(f: SphereFunction, theta, path: Path = Path.FAST, spec: QuadratureSpec = DEFAULT_SPEC) -> float:
    """Average of an even ``f`` over the great sphere orthogonal to ``theta``."""
    path = Path(path)
    th = _unit(theta, "theta")
    n = f.n
    if th.size != n + 1:
        raise DomainError("theta must lie in R^{n+1}")
    if not f.even:
        raise DomainError("the Funk transform is taken of even functions")
    if path is Path.DIRECT:
        return _finish(_funk_direct(f, th, spec), "funk")
    z = th[-1]
    sin_d = math.sqrt(max(0.0, 1.0 - z * z))
    if sin_d < 1e-14:
        raise DomainError("theta = +-e_{n+1} is excluded on the fast path")
    eta = -th[:-1] / sin_d
    plane = Hyperplane(tuple(eta / np.linalg.norm(eta)), z / sin_d)
    g = SeparableFunction(_funk_profile(f), f.harmonic)
    return float(2.0 / (sphere_area(n - 1) * sin_d) * _radon_fast(g, plane, spec))


def _funk_direct(f, th, spec, absolute=False) -> IntegrationReport:
    n = f.n
    _check_n(n, "funk")
    F = _of(f, absolute)
    e = np.eye(n + 1)[-1]
    ep = e - th[-1] * th
    if np.linalg.norm(ep) < 1e-14:
        ep = np.eye(n + 1)[0] - th[0] * th
    # the great sphere meets the equatorial fold where it is orthogonal to ep
    basis = _frame(ep / np.linalg.norm(ep), exclude=[th])
    return integrate_sphere(F, n, spec, basis=basis)


# ------------------------------------------------------------------ slice


def _slice_profile(f: SphereFunction) -> Profile:
    n, F, c = f.n, f.profile, f.coef
    return Profile(
        lambda s: c * (2.0 / (s * s + 1.0)) ** (n - 1) * F(2.0 * np.arctan2(1.0, s)),
        zero_exponent=f.far_exponent,
        infinity_exponent=2.0 * (n - 1) + f.pole_exponent,
    )


def slice_transform(
    f: SphereFunction, theta, psi: float, path: Path = Path.FAST, spec: QuadratureSpec = DEFAULT_SPEC
) -> float:
    """Integral of ``f`` over the (n-1)-sphere through the north pole with axis ``theta sin psi + e cos psi``."""
    path = Path(path)
    th = _unit(theta, "theta")
    n = f.n
    if th.size != n:
        raise DomainError("theta must lie in R^n")
    if not 0 < psi <= math.pi / 2:
        raise DomainError("psi must lie in (0, pi/2]")
    if path is Path.DIRECT:
        return _finish(*_slice_direct(f, th, psi, spec))
    g = SeparableFunction(_slice_profile(f), f.harmonic)
    return _radon_fast(g, Hyperplane(tuple(th), 1.0 / math.tan(psi)), spec)


def _slice_direct(f, th, psi, spec, absolute=False):
    n = f.n
    _check_n(n, "slice")
    F = _of(f, absolute)
    e = np.eye(n + 1)[-1]
    c = np.append(th * math.sin(psi), math.cos(psi))
    we = (e - math.cos(psi) * c) / math.sin(psi)
    g = f.pole_exponent / 2
    basis = _frame(we, exclude=[c])
    rep = integrate_sphere(lambda w: F(math.cos(psi) * c + math.sin(psi) * w), n, spec, basis=basis, pole_exponent=g)
    return rep, "slice", sphere_area(n - 1) * math.sin(psi) ** (n - 1)


# ------------------------------------------------------------- hyperbolic


def _log_cosh(s):
    s = np.abs(s)
    return s + np.log1p(np.exp(-2.0 * s)) - math.log(2.0)


def _arccosh_scaled(a: float, s):
    """``arccosh(a cosh s)`` without overflow for large s."""
    lc = _log_cosh(s) + math.log(a)
    big = lc > 20.0
    x = np.exp(np.minimum(lc, 20.0))
    small = np.arccosh(np.maximum(x, 1.0))
    # arccosh X = log(2X) - 1/(4X^2) - ...
    large = math.log(2.0) + lc - 0.25 * np.exp(-2.0 * lc)
    return np.where(big, large, small)


def hyperbolic_geodesic(f: HyperbolicFunction, xi: HyperbolicPoint, spec: QuadratureSpec = DEFAULT_SPEC) -> float:
    """Integral of ``f`` over the totally geodesic hypersurface ``[x, xi] = 0`` (n in {2, 3})."""
    return _finish(_hyperbolic_direct(f, xi, spec), "hyperbolic_geodesic")


def _hyperbolic_direct(f, xi: HyperbolicPoint, spec, absolute=False) -> IntegrationReport:
    if not xi.is_dual:
        raise DomainError("xi must satisfy [xi, xi] = -1")
    n = xi.n
    _check_n(n, "hyperbolic_geodesic")
    if f.n != n:
        raise DomainError("function and geodesic dimensions differ")
    v = xi.vector
    h, vp = v[-1], v[:-1]
    a = float(np.linalg.norm(vp))
    om = vp / a
    # point closest to the origin: p = (h om, a); tangents are (w, 0), w orthogonal to om
    p_sp = h * om
    W = _frame(om)[:-1]
    polar = f.polar if not absolute else (lambda r, th: np.abs(f.polar(r, th)))
    pe = f.profile.decay

    def at(s, w):
        # x(s) = p cosh s + w sinh s, evaluated through r and the direction only
        s = np.asarray(s, dtype=float)
        r = _arccosh_scaled(a, s)
        d = p_sp + np.tanh(s)[..., None] * w
        d = d / np.linalg.norm(d, axis=-1, keepdims=True)
        return polar(r, d)

    if n == 2:
        w = W[0]

        def g(s):
            s = np.asarray(s, dtype=float)
            return at(s, w) + at(s, -w)

        return integrate_semi_infinite(g, 0.0, pe if math.isfinite(pe) else math.inf, spec)

    def outer(k):
        dirs, wts = sphere_rule(2, k)
        dirs = dirs @ W
        scale = 2.0 * math.pi * wts

        def g(s):
            s = np.asarray(s, dtype=float)
            ss = np.broadcast_to(s[..., None], s.shape + (len(wts),))
            vals = at(ss, np.broadcast_to(dirs, s.shape + dirs.shape)) @ scale
            with np.errstate(over="ignore", invalid="ignore"):
                out = vals * np.sinh(s)
            return np.where(np.isfinite(out), out, 0.0)

        return integrate_semi_infinite(g, 0.0, math.inf, spec)

    return _nested(outer, spec)


# ------------------------------------------------------------ mass scales


def unsigned_mass(kind: str, f, *args, spec: QuadratureSpec = MASS_SPEC) -> float:
    """The transform of ``|f|`` by direct quadrature: the scale of any cancellation.

    ``kind`` names the transform ("radon", "dual_radon", "cormack_quinto",
    "funk", "slice", "hyperbolic"); ``args`` are its geometric arguments.
    Convergence is not demanded (``|f|`` is usually only piecewise smooth).
    """
    kind = kind.lower()
    if kind == "radon":
        rep = _radon_direct(f, args[0], spec, absolute=True)
    elif kind == "dual_radon":
        rep = _dual_direct(f, np.asarray(args[0], dtype=float), spec, absolute=True)
    elif kind == "cormack_quinto":
        rep = _cq_direct(f, np.asarray(args[0], dtype=float), spec, absolute=True)
    elif kind == "funk":
        rep = _funk_direct(f, _unit(args[0]), spec, absolute=True)
    elif kind == "slice":
        rep, _, factor = _slice_direct(f, _unit(args[0]), args[1], spec, absolute=True)
        return float(rep.value * factor)
    elif kind == "hyperbolic":
        rep = _hyperbolic_direct(f, args[0], spec, absolute=True)
    else:
        raise DomainError(f"unknown transform {kind!r}")
    return float(rep.value)
