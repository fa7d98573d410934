"""Gegenbauer-Chebyshev fractional integrals and Riemann-Liouville calculus.

All eight operators are evaluated after the substitution ``r = t / s``
(right-sided) or ``t = r s`` (left-sided), which puts every kernel on
``s in (0, 1)`` with an algebraic factor ``(1 - s)**(lam - 1/2)`` at ``s = 1``.
That factor, and the algebraic behaviour at ``s = 0`` inherited from the
profile's declared exponents, become Gauss-Jacobi weights.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field, replace
from typing import Callable

import numpy as np
from scipy.special import loggamma, rgamma

from geokern.errors import ConvergenceError, DomainError
from geokern.quadrature import IntegrationReport, QuadratureSpec, integrate_jacobi, integrate_semi_infinite
from geokern.specfun import CHEBYSHEV_NORM, eval_poly, gamma_fn, norm_const, poly_for, reversed_poly

__all__ = [
    "Side",
    "OperatorParams",
    "Profile",
    "WeightSpec",
    "DEFAULT_SPEC",
    "gc_apply",
    "gc_report",
    "rl_integral",
    "rl_derivative",
    "compose_identity_residual",
    "ReflectionCheck",
    "reflect",
    "mellin_symbol",
    "mellin_numeric",
    "reconstruct_psi",
    "check_precondition",
]

DEFAULT_SPEC = QuadratureSpec()


class Side(str, enum.Enum):
    RIGHT = "-"
    LEFT = "+"


@dataclass(frozen=True)
class OperatorParams:
    """One of the eight operators; ``lam == 0`` selects the Chebyshev family."""

    lam: float
    m: int
    side: Side = Side.RIGHT
    starred: bool = False

    def __post_init__(self):
        if not self.lam > -0.5:
            raise DomainError(f"lambda must exceed -1/2, got {self.lam}")
        if self.m < 0 or int(self.m) != self.m:
            raise DomainError(f"m must be a nonnegative integer, got {self.m}")
        object.__setattr__(self, "side", Side(self.side))

    @property
    def chebyshev(self) -> bool:
        return self.lam == 0

    @property
    def prefactor(self) -> float:
        return CHEBYSHEV_NORM if self.chebyshev else 1.0 / norm_const(self.lam, self.m)

    @property
    def label(self) -> str:
        name = "T" if self.chebyshev else "G"
        star = "*" if self.starred else ""
        return f"{star}{name}{self.side.value}(lam={self.lam:g}, m={self.m})"


def _zeros(t):
    return np.zeros_like(np.asarray(t, dtype=float))


@dataclass(frozen=True)
class Profile:
    """A function on (0, inf) with declared endpoint behaviour.

    ``func`` must be vectorized. ``zero_exponent`` q means f(t) ~ t**q as
    t -> 0+, ``infinity_exponent`` p means f(t) = O(t**-p) as t -> inf (``inf``
    for rapid decay). ``pure_power_tail = (c, p)`` states that f equals
    ``c t**-p`` exactly on ``[tail_start, inf)``. ``support``, when given,
    is an interval outside of which f vanishes identically.
    """

    func: Callable[[np.ndarray], np.ndarray]
    zero_exponent: float = 0.0
    infinity_exponent: float = math.inf
    pure_power_tail: tuple[float, float] | None = None
    tail_start: float = 0.0
    support: tuple[float, float] | None = None
    name: str = field(default="", compare=False)

    def __call__(self, t):
        return self.func(np.asarray(t, dtype=float))

    @classmethod
    def power(cls, exponent: float, coef: float = 1.0) -> "Profile":
        """``coef * t**exponent`` on all of (0, inf)."""
        e = float(exponent)
        return cls(
            lambda t: coef * t**e,
            zero_exponent=e,
            infinity_exponent=-e,
            pure_power_tail=(coef, -e),
            name=f"{coef:g}*t^{e:g}",
        )

    @classmethod
    def zero(cls) -> "Profile":
        return cls(_zeros, zero_exponent=math.inf, infinity_exponent=math.inf, name="0")

    @property
    def is_pure_power(self) -> bool:
        return self.pure_power_tail is not None and self.tail_start == 0

    @property
    def decay(self) -> float:
        if self.pure_power_tail is not None:
            return self.pure_power_tail[1]
        return self.infinity_exponent

    def reflected(self, shift: float) -> "Profile":
        """``t**-shift * f(1/t)``, with exponents swapped accordingly."""
        f = self.func
        tail = None
        if self.is_pure_power:
            c, p = self.pure_power_tail
            tail = (c, shift - p)
        support = None
        if self.support is not None and self.support[0] > 0:
            a, b = self.support
            support = (1.0 / b, 1.0 / a)
        return Profile(
            lambda t: t ** (-shift) * f(1.0 / t),
            zero_exponent=self.infinity_exponent - shift,
            infinity_exponent=shift + self.zero_exponent,
            pure_power_tail=tail,
            support=support,
            name=f"reflect({self.name})",
        )

    def abs(self) -> "Profile":
        f = self.func
        tail = None if self.pure_power_tail is None else (abs(self.pure_power_tail[0]), self.pure_power_tail[1])
        return replace(self, func=lambda t: np.abs(f(t)), pure_power_tail=tail, name=f"|{self.name}|")

    def verify_exponents(self, grid_small=None, grid_large=None, bound: float = 1e6) -> bool:
        """Sampling check that the declared exponents are not violated."""
        small = np.geomspace(1e-6, 0.1, 50) if grid_small is None else np.asarray(grid_small)
        large = np.geomspace(10.0, 1e6, 50) if grid_large is None else np.asarray(grid_large)
        with np.errstate(all="ignore"):
            ok = True
            if math.isfinite(self.zero_exponent):
                ok &= bool(np.all(np.abs(self(small)) / small**self.zero_exponent <= bound))
            if math.isfinite(self.infinity_exponent):
                ok &= bool(np.all(np.abs(self(large)) * large**self.infinity_exponent <= bound))
        return ok


@dataclass(frozen=True)
class WeightSpec:
    """The weights kappa (left-sided) and kappa-tilde (right-sided) of the kernel theorems."""

    kind: str  # "kappa_left" | "kappa_tilde_right"
    lam: float
    m: int

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        lam, odd = self.lam, self.m % 2 == 1
        if self.kind == "kappa_left":
            if not odd:
                return np.ones_like(t)
            if lam < 0:
                return t ** (1 + 2 * lam)
            if lam == 0:
                return t * (1 + np.abs(np.log(t)))
            return t
        if self.kind == "kappa_tilde_right":
            if not odd:
                return t ** (2 * lam)
            if lam < 0:
                return 1.0 / t
            if lam == 0:
                return t ** (2 * lam - 1) * (1 + np.abs(np.log(t)))
            return t ** (2 * lam - 1)
        raise DomainError(f"unknown weight kind {self.kind!r}")

    def admits(self, profile: Profile, a: float) -> bool:
        """Finiteness of the weighted L^1 norm, decided from declared exponents.

        Left: integral over (0, a1) for a1 < a; right: over (a1, inf) for a1 > a.
        """
        lam, odd = self.lam, self.m % 2 == 1
        if self.kind == "kappa_left":
            q = profile.zero_exponent
            if not odd:
                return q > -1
            if lam < 0:
                return q + 1 + 2 * lam > -1
            return q + 1 > -1
        p = profile.infinity_exponent
        if not odd:
            return p - 2 * lam > 1
        if lam < 0:
            return p + 1 > 1
        return p - 2 * lam + 1 > 1


# --------------------------------------------------------------- operators


def check_precondition(params: OperatorParams, f: Profile) -> None:
    """Raise :class:`DomainError` unless the declared exponents give convergence."""
    lam, m = params.lam, params.m
    eta = m % 2
    if params.side is Side.RIGHT:
        p = f.decay
        if params.starred:
            if not p > m - 1:
                raise DomainError(f"{params.label}: need int_a^inf |f| t^(m-2) dt < inf (decay {p} <= {m - 1})")
        elif not p > 2 * lam - eta + 1:
            raise DomainError(
                f"{params.label}: need int_a^inf |f| t^(2lam-eta) dt < inf (decay {p} <= {2 * lam - eta + 1})"
            )
    else:
        q = f.zero_exponent
        if params.starred:
            if not q > m - 2:
                raise DomainError(f"{params.label}: need int_0^a t^(1-m) |f| dt < inf (zero exponent {q} <= {m - 2})")
        elif not q + eta > -1:
            raise DomainError(f"{params.label}: need int_0^a t^eta |f| dt < inf (zero exponent {q})")


def _kernel(params: OperatorParams):
    """(power of s, polynomial factor, power of t) after the substitution."""
    lam, m = params.lam, params.m
    pid = poly_for(lam, m)
    eta = m % 2
    if not params.starred:
        # odd C_m carries a factor s; move it into the weight exponent
        def poly(s):
            return eval_poly(pid, s) / s**eta

        s_pow = (-2 * lam - 2 + eta) if params.side is Side.RIGHT else float(eta)
        t_pow = 2 * lam + 1 if params.side is Side.RIGHT else 0.0
    else:
        def poly(s):
            return reversed_poly(pid, s)

        s_pow = float(-m) if params.side is Side.RIGHT else 1.0 - m
        t_pow = 0.0 if params.side is Side.RIGHT else 2 * lam + 1
    return s_pow, poly, t_pow


_CHUNK = 256


def gc_report(params: OperatorParams, f: Profile, t, spec: QuadratureSpec = DEFAULT_SPEC) -> IntegrationReport:
    """Operator value at ``t`` (array) as a full :class:`IntegrationReport`."""
    check_precondition(params, f)
    t_in = np.asarray(t, dtype=float)
    t = np.atleast_1d(t_in).ravel()
    if np.any(t <= 0):
        raise DomainError("operators are evaluated at t > 0")
    if t.size > _CHUNK:
        # bound the node-by-point arrays; nested operators call in with long batches
        parts = [gc_report(params, f, t[i : i + _CHUNK], spec) for i in range(0, t.size, _CHUNK)]
        return IntegrationReport(
            np.reshape(np.concatenate([p.value for p in parts]), t_in.shape),
            max(p.error_estimate for p in parts),
            max(p.nodes_used for p in parts),
            all(p.converged for p in parts),
            np.reshape(np.concatenate([p.magnitude for p in parts]), t_in.shape),
        )
    lam = params.lam
    alpha = lam - 0.5
    s_pow, poly, t_pow = _kernel(params)
    right = params.side is Side.RIGHT

    def arg(tt, s):
        return tt / s if right else tt * s

    if f.support is not None and (right or f.support[0] > 0):
        rep = _compact(params, f, t, spec, s_pow, poly, right)
    else:
        # algebraic behaviour of f(arg) at s -> 0 moves into the weight;
        # rapid decay there is left in the integrand
        exponent = f.decay if right else f.zero_exponent
        if math.isfinite(exponent):
            shift, beta = exponent, s_pow + exponent
        else:
            shift, beta = -s_pow, 0.0
        if beta <= -1:
            raise DomainError(f"{params.label}: integrand not integrable at s = 0 (exponent {beta})")
        tt = t[:, None]

        def h(s):
            with np.errstate(over="ignore", invalid="ignore"):
                v = (1.0 + s) ** alpha * poly(s) * s ** (-shift) * f(arg(tt, s))
            return np.where(np.isfinite(v), v, 0.0)

        rep = integrate_jacobi(h, 0.0, 1.0, spec, alpha=alpha, beta=beta)
    rep = rep.scaled(params.prefactor * t**t_pow)
    if not rep.converged:
        raise ConvergenceError(f"{params.label}: quadrature did not converge", rep)
    shape = t_in.shape
    rep.value = np.reshape(rep.value, shape)
    rep.magnitude = np.reshape(rep.magnitude, shape)
    return rep


def _compact(params, f, t, spec, s_pow, poly, right):
    """Profiles vanishing outside ``[a, b]``: integrate only where f(arg) != 0."""
    a, b = f.support
    alpha = params.lam - 0.5
    if right:
        lo, hi = t / b, (t / a if a > 0 else np.full_like(t, np.inf))
    else:
        lo, hi = a / t, b / t
    hi = np.minimum(hi, 1.0)
    value = np.zeros_like(t)
    mag = np.zeros_like(t)
    converged, err, nodes = True, 0.0, 0
    open_end = (hi < 1.0) & (lo < hi)
    closed_end = (hi >= 1.0) & (lo < 1.0)
    for mask, singular in ((open_end, False), (closed_end, True)):
        if not np.any(mask):
            continue
        tt = t[mask][:, None]

        def h(s, tt=tt, singular=singular):
            w = (1.0 + s) ** alpha if singular else (1.0 - s * s) ** alpha
            return w * poly(s) * s**s_pow * f(tt / s if right else tt * s)

        rep = integrate_jacobi(h, lo[mask], hi[mask], spec, alpha=alpha if singular else 0.0)
        value[mask] = rep.value
        mag[mask] = rep.magnitude
        converged &= rep.converged
        err = max(err, rep.error_estimate)
        nodes = max(nodes, rep.nodes_used)
    return IntegrationReport(value, err, nodes, converged, mag)


def gc_apply(params: OperatorParams, f: Profile, t, spec: QuadratureSpec = DEFAULT_SPEC):
    """Value of the selected Gegenbauer-Chebyshev operator applied to ``f`` at ``t``."""
    return gc_report(params, f, t, spec).value


def gc_profile(params: OperatorParams, f: Profile, spec: QuadratureSpec = DEFAULT_SPEC) -> Profile:
    """The operator output wrapped as a profile (for chaining operators)."""
    lam = params.lam
    p = f.decay
    if params.side is Side.RIGHT and not params.starred:
        inf_exp = p - 2 * lam - 1
    elif params.side is Side.RIGHT:
        inf_exp = p
    else:
        inf_exp = 0.0
    return Profile(
        lambda s: gc_apply(params, f, s, spec),
        zero_exponent=0.0,
        infinity_exponent=inf_exp,
        name=f"{params.label}[{f.name}]",
    )


# -------------------------------------------------------- Riemann-Liouville


def rl_integral(alpha: float, f: Profile, t, spec: QuadratureSpec = DEFAULT_SPEC):
    """``(1/Gamma(alpha)) int_t^inf f(s) (s-t)**(alpha-1) ds``."""
    if not alpha > 0:
        raise DomainError(f"order must be positive, got {alpha}")
    if not f.decay > alpha:
        raise DomainError(f"I^{alpha}_- diverges: decay exponent {f.decay} <= {alpha}")
    t_in = np.asarray(t, dtype=float)
    t = np.atleast_1d(t_in).ravel()
    if np.any(t < 0):
        raise DomainError("Riemann-Liouville integrals are evaluated at t >= 0")
    tt = t[:, None]
    rep = integrate_semi_infinite(
        lambda s: f(tt + s),
        0.0,
        f.decay if math.isfinite(f.decay) else math.inf,
        spec,
        endpoint_exponent=alpha - 1.0,
        pure_power=f.is_pure_power and np.all(t == 0),
    )
    if not rep.converged:
        raise ConvergenceError(f"I^{alpha}_-: quadrature did not converge", rep)
    return np.reshape(rep.value / gamma_fn(alpha), t_in.shape)


def _central_difference(order: int):
    """Coefficients and offsets (in units of h) of the centred M-th difference."""
    j = np.arange(order + 1)
    coeffs = np.array([(-1.0) ** (order - k) * math.comb(order, k) for k in j])
    return coeffs, j - order / 2.0


def rl_derivative(
    alpha: float,
    f: Profile,
    t,
    spec: QuadratureSpec = DEFAULT_SPEC,
    *,
    step=None,
    levels: int = 12,
    fd_tol: float = 1e-6,
    abs_floor: float = 0.0,
):
    """``(D^alpha_- f)(t) = (-d/dt)^M (I^{M-alpha}_- f)(t)``, M = ceil(alpha).

    The M-th derivative is a central difference refined by Ridders'
    extrapolation over ``levels`` step halvings, starting from ``step``
    (scalar or one per point; default ``0.8 min(t, 1) / M``). The tableau
    entry with the smallest error estimate is returned; if that estimate
    exceeds ``fd_tol`` (relative to the derivative scale) a
    :class:`ConvergenceError` is raised carrying the two competing estimates.
    ``abs_floor`` is an absolute error level always accepted, for callers that
    know the global size of the derivative.
    """
    if not alpha > 0:
        raise DomainError(f"order must be positive, got {alpha}")
    order = int(math.ceil(alpha - 1e-12))
    frac = order - alpha
    if abs(frac) < 1e-12:
        F = f
    else:
        F = Profile(lambda s: rl_integral(frac, f, s, spec), infinity_exponent=f.decay - frac)
    t_in = np.asarray(t, dtype=float)
    t = np.atleast_1d(t_in).ravel()
    if np.any(t <= 0):
        raise DomainError("fractional derivatives are evaluated at t > 0")
    if step is None:
        h0 = 0.8 / order * np.minimum(t, 1.0)
    else:
        h0 = np.broadcast_to(np.asarray(step, dtype=float).ravel(), t.shape).copy()
    coeffs, offsets = _central_difference(order)
    hs = h0[:, None] / 2.0 ** np.arange(levels)[None, :]
    pts = t[:, None, None] + hs[:, :, None] * offsets[None, None, :]
    vals = np.asarray(F(pts.ravel()), dtype=float).reshape(pts.shape)
    # Ridders tableau: keep, per point, the extrapolant with the smallest error estimate
    cols = [(vals[:, k, :] @ coeffs) / hs[:, k] ** order for k in range(levels)]
    best = cols[0].copy()
    err = np.full(t.shape, np.inf)
    second = cols[0].copy()
    prev = [cols[0]]
    for i in range(1, levels):
        cur = [cols[i]]
        for j in range(1, i + 1):
            fac = 4.0**j
            cur.append((fac * cur[j - 1] - prev[j - 1]) / (fac - 1.0))
            e = np.maximum(np.abs(cur[j] - cur[j - 1]), np.abs(cur[j] - prev[j - 1]))
            take = e < err
            second = np.where(take, prev[j - 1], second)
            best = np.where(take, cur[j], best)
            err = np.where(take, e, err)
        prev = cur
    scale = np.maximum(np.abs(best), np.max(np.abs(vals), axis=(1, 2)))
    bad = err > np.maximum(fd_tol * scale, max(spec.abs_tol, abs_floor))
    if np.any(bad):
        raise ConvergenceError(
            "finite-difference derivative unstable under step halving",
            (np.reshape(best, t_in.shape), np.reshape(second, t_in.shape)),
        )
    return np.reshape((-1.0) ** order * best, t_in.shape)


# ------------------------------------------------------------- identities


def compose_identity_residual(lam: float, m: int, f: Profile, t_grid, spec: QuadratureSpec = DEFAULT_SPEC) -> float:
    """Max relative gap between ``*G(G f)`` and ``2**(2lam+1) I^(2lam+1) f`` on the grid."""
    if m < 2:
        raise DomainError("the composition identity is stated for m >= 2")
    inner = OperatorParams(lam, m, Side.RIGHT, starred=False)
    outer = OperatorParams(lam, m, Side.RIGHT, starred=True)
    t = np.asarray(t_grid, dtype=float)
    lhs = gc_apply(outer, gc_profile(inner, f, spec), t, spec)
    rhs = 2.0 ** (2 * lam + 1) * rl_integral(2 * lam + 1, f, t, spec)
    return float(np.max(np.abs(lhs - rhs) / (np.abs(rhs) + spec.abs_tol), initial=0.0))


@dataclass
class ReflectionCheck:
    transformed: Profile
    direct: np.ndarray
    via_right: np.ndarray
    residual: float


def reflect(side_map: str, lam: float, m: int, f: Profile, grid, spec: QuadratureSpec = DEFAULT_SPEC) -> ReflectionCheck:
    """Compare a left-sided operator against its right-sided reflection.

    ``side_map`` is ``"unstarred"`` (``G+ f(r) = G- f1(1/r) / r`` with
    ``f1(t) = t**(-2lam-2) f(1/t)``) or ``"starred"`` (``*G+ f(r) =
    r**(2lam) *G- f2(1/r)`` with ``f2(t) = f(1/t) / t``). The residual is
    the max gap relative to the unsigned magnitude of the direct route.
    """
    r = np.asarray(grid, dtype=float)
    starred = {"unstarred": False, "starred": True}[side_map.lower().removeprefix("leftfromright_")]
    left = OperatorParams(lam, m, Side.LEFT, starred)
    right = OperatorParams(lam, m, Side.RIGHT, starred)
    rep = gc_report(left, f, r, spec)
    if starred:
        g = f.reflected(1.0)
        via = r ** (2 * lam) * gc_apply(right, g, 1.0 / r, spec)
    else:
        g = f.reflected(2 * lam + 2)
        via = gc_apply(right, g, 1.0 / r, spec) / r
    scale = max(float(np.max(rep.magnitude, initial=0.0)), spec.abs_tol)
    return ReflectionCheck(g, rep.value, via, float(np.max(np.abs(rep.value - via), initial=0.0)) / scale)


def mellin_symbol(lam: float, m: int, z, *, continued: bool = False):
    """Mellin transform of the kernel of ``*G^{lam,m}_-`` as a Gamma ratio.

    Valid for ``Re z > m - 1``; ``continued=True`` evaluates the meromorphic
    continuation elsewhere (``inf`` at poles of the numerator).
    """
    z = np.asarray(z, dtype=complex)
    if not continued and np.any(z.real <= m - 1):
        raise DomainError(f"Mellin symbol requires Re z > m - 1 = {m - 1}")
    a1 = (z + 1 - m) / 2
    a2 = lam + (z + 1 + m) / 2
    b1 = lam + (z + 1) / 2
    b2 = lam + (z + 2) / 2
    if continued:
        num_inv = rgamma(a1) * rgamma(a2)
        with np.errstate(divide="ignore", invalid="ignore"):
            out = rgamma(b1) * rgamma(b2) / num_inv
        out = np.where(num_inv == 0, np.inf, out)
    else:
        out = np.exp(loggamma(a1) + loggamma(a2) - loggamma(b1) - loggamma(b2))
    out = out[()] if out.ndim == 0 else out
    return out


def mellin_numeric(lam: float, m: int, z, spec: QuadratureSpec = DEFAULT_SPEC) -> complex:
    """Direct quadrature of ``int_0^1 g(s) s**(z-1) ds`` with the ``*G`` kernel g."""
    z = complex(z)
    if z.real <= m - 1:
        raise DomainError(f"Mellin integral diverges for Re z <= {m - 1}")
    params = OperatorParams(lam, m, Side.RIGHT, starred=True)
    pid = poly_for(lam, m)
    alpha = lam - 0.5
    beta = z.real - m

    if z.imag:
        return _mellin_log(params, pid, alpha, z, spec)
    re = integrate_jacobi(
        lambda s: params.prefactor * (1.0 + s) ** alpha * reversed_poly(pid, s), 0.0, 1.0, spec, alpha=alpha, beta=beta
    )
    if not re.converged:
        raise ConvergenceError("numeric Mellin transform did not converge", re)
    return complex(re.value, 0.0)


def _mellin_log(params, pid, alpha, z, spec):
    """Complex z: with s = exp(-u) the factor s**(i Im z) stops oscillating unboundedly near s = 0."""
    rate = z.real - params.m + 1.0  # exponential decay rate in u
    sp = spec.with_(truncation_radius=1.0 / rate)

    def h(u, part):
        s = np.exp(-u)
        with np.errstate(invalid="ignore", divide="ignore"):
            ratio = np.where(u > 0, -np.expm1(-u) / u, 1.0)
        base = params.prefactor * (1.0 + s) ** alpha * ratio**alpha * reversed_poly(pid, s) * np.exp(-rate * u)
        return base * (np.cos(z.imag * u) if part == 0 else -np.sin(z.imag * u))

    reps = [integrate_semi_infinite(lambda u, k=k: h(u, k), 0.0, math.inf, sp, endpoint_exponent=alpha) for k in (0, 1)]
    if not all(r.converged for r in reps):
        raise ConvergenceError("numeric Mellin transform did not converge", reps[0])
    return complex(reps[0].value, reps[1].value)


def reconstruct_psi(lam: float, m: int, phi: Profile, spec: QuadratureSpec = DEFAULT_SPEC, *, moment_tol: float = 1e-9, fd_tol: float = 1e-6) -> Profile:
    """``psi = 2**(-2lam-1) D^(2lam+1)_- *G^{lam,m}_- phi`` for phi in the moment space.

    ``phi`` must carry a compact ``support`` inside (0, inf) and satisfy the
    moment conditions (checked here by quadrature); then ``G^{lam,m}_- psi``
    reproduces phi and psi vanishes beyond the support.
    """
    from geokern.nullspace import moment_vector

    if phi.support is None or phi.support[0] <= 0:
        raise DomainError("phi must be compactly supported in (0, inf)")
    moments, scale = moment_vector(phi, m)
    if np.any(np.abs(moments) > moment_tol * max(scale, spec.abs_tol)):
        raise DomainError(f"phi violates the moment conditions: {moments}")
    a, b = phi.support
    star = OperatorParams(lam, m, Side.RIGHT, starred=True)
    F = Profile(lambda s: _gc_or_zero(star, phi, s, spec), support=(0.0, b), name=f"*G[{phi.name}]")
    order = 2 * lam + 1
    factor = 2.0 ** (-order)
    width = 0.25 * (b - a)
    M = math.ceil(order)
    # size of psi from a coarse difference pass; points where F is flat are judged against it
    coeffs, offsets = _central_difference(M)
    grid = np.linspace(a, b, 33)
    h = width / M
    coarse = (F((grid[:, None] + h * offsets[None, :]).ravel()).reshape(grid.size, -1) @ coeffs) / h**M
    floor = fd_tol * float(np.max(np.abs(coarse)))

    def psi(t):
        t = np.asarray(t, dtype=float)
        h = np.minimum(0.8 * np.minimum(t, 1.0), width) / M
        # beyond the support keep the stencil on one side of b, where F is smooth
        beyond = t > b
        h = np.where(beyond, np.minimum(h, 1.8 * (t - b) / M), h)
        return factor * rl_derivative(order, F, t, spec, step=h, fd_tol=fd_tol, abs_floor=floor)

    return Profile(psi, support=(0.0, b), name=f"psi[{phi.name}]")


def _gc_or_zero(params, f, s, spec):
    s = np.asarray(s, dtype=float)
    out = np.zeros_like(s)
    pos = s > 0
    if np.any(pos):
        out[pos] = gc_apply(params, f, s[pos], spec)
    return out
