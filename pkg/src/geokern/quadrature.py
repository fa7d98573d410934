"""Quadrature engines: Jacobi-weighted intervals, semi-infinite tails, spheres.

Integrand convention: every integrand receives an array of abscissae whose
last axis runs over quadrature nodes and returns values of the same shape
(leading axes are a batch, e.g. a grid of evaluation points). Convergence is
judged elementwise over the batch.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, replace
from functools import lru_cache
from typing import Callable

import numpy as np
from scipy.linalg import eigh_tridiagonal, eigvalsh_tridiagonal

from geokern.errors import DomainError

__all__ = [
    "Rule",
    "QuadratureSpec",
    "IntegrationReport",
    "gauss_jacobi",
    "gauss_legendre",
    "tanh_sinh",
    "integrate_jacobi",
    "integrate_singular_endpoint",
    "integrate_semi_infinite",
    "integrate_sphere",
    "sphere_rule",
]

Integrand = Callable[[np.ndarray], np.ndarray]


class Rule(str, enum.Enum):
    GAUSS_JACOBI = "gauss_jacobi"
    GAUSS_LEGENDRE = "gauss_legendre"
    TANH_SINH = "tanh_sinh"


@dataclass(frozen=True)
class QuadratureSpec:
    """Rule selection and tolerances.

    ``nodes`` is the starting node count; it is doubled until two successive
    estimates agree or ``max_nodes`` is exceeded. ``truncation_radius`` is the
    length scale of the map used on semi-infinite intervals.
    """

    rule: Rule = Rule.GAUSS_JACOBI
    nodes: int = 16
    singularity_exponent: float = 0.0
    truncation_radius: float = 1.0
    rel_tol: float = 1e-10
    abs_tol: float = 1e-12
    max_nodes: int = 2**15

    def __post_init__(self):
        if self.singularity_exponent <= -1:
            raise DomainError("singularity exponent must exceed -1")
        if self.rel_tol <= 0 or self.abs_tol <= 0:
            raise DomainError("tolerances must be positive")
        if self.nodes < 1 or self.max_nodes < self.nodes:
            raise DomainError("need 1 <= nodes <= max_nodes")
        if self.truncation_radius <= 0:
            raise DomainError("truncation radius must be positive")

    def with_(self, **kw) -> "QuadratureSpec":
        return replace(self, **kw)


@dataclass
class IntegrationReport:
    """Outcome of an adaptive integration.

    ``value`` and ``magnitude`` (the same rule applied to the absolute value
    of the integrand) are floats or arrays matching the integrand batch.
    """

    value: np.ndarray | float
    error_estimate: float
    nodes_used: int
    converged: bool
    magnitude: np.ndarray | float = 0.0

    def __add__(self, other: "IntegrationReport") -> "IntegrationReport":
        return IntegrationReport(
            self.value + other.value,
            self.error_estimate + other.error_estimate,
            max(self.nodes_used, other.nodes_used),
            self.converged and other.converged,
            self.magnitude + other.magnitude,
        )

    def scaled(self, factor) -> "IntegrationReport":
        factor = np.asarray(factor, dtype=float)
        return IntegrationReport(
            self.value * factor,
            float(np.max(np.abs(factor), initial=0.0)) * self.error_estimate,
            self.nodes_used,
            self.converged,
            self.magnitude * np.abs(factor),
        )


# ---------------------------------------------------------------- node tables


def _jacobi_recurrence(n: int, alpha: float, beta: float):
    k = np.arange(n, dtype=float)
    ab = alpha + beta
    diag = np.empty(n)
    with np.errstate(divide="ignore", invalid="ignore"):
        diag[:] = (beta**2 - alpha**2) / ((2 * k + ab) * (2 * k + ab + 2))
    diag[0] = (beta - alpha) / (ab + 2)
    kk = np.arange(1, n, dtype=float)
    s = 2 * kk + ab
    with np.errstate(divide="ignore", invalid="ignore"):
        off2 = 4 * kk * (kk + alpha) * (kk + beta) * (kk + ab) / (s**2 * (s + 1) * (s - 1))
    if n > 1:
        # k = 1 with the (k + ab) factor cancelled; safe when ab = -1
        off2[0] = 4 * (1 + alpha) * (1 + beta) / ((2 + ab) ** 2 * (3 + ab))
    mu0 = 2 ** (ab + 1) * math.gamma(alpha + 1) * math.gamma(beta + 1) / math.gamma(ab + 2)
    return diag, np.sqrt(off2), mu0


@lru_cache(maxsize=256)
def _gauss_jacobi_cached(n: int, alpha: float, beta: float):
    diag, off, mu0 = _jacobi_recurrence(n, alpha, beta)
    if n <= 600:
        x, vecs = eigh_tridiagonal(diag, off)
        w = mu0 * vecs[0, :] ** 2
    else:
        # Christoffel numbers from the orthonormal recurrence; O(n) memory
        x = eigvalsh_tridiagonal(diag, off, lapack_driver="sterf")
        x = _newton_polish(x, diag, off)
        q_prev = np.zeros(n)
        q = np.full(n, 1.0 / math.sqrt(mu0))
        acc = q * q
        for k in range(n - 1):
            q_prev, q = q, ((x - diag[k]) * q - (off[k - 1] if k else 0.0) * q_prev) / off[k]
            acc += q * q
        w = 1.0 / acc
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


def _newton_polish(x, diag, off):
    """One Newton step on the degree-n recurrence polynomial (its scale is irrelevant)."""
    n = diag.size
    q_prev, q = np.zeros_like(x), np.ones_like(x)
    d_prev, d = np.zeros_like(x), np.zeros_like(x)
    for k in range(n):
        b = off[k] if k < n - 1 else 1.0
        c = off[k - 1] if k else 0.0
        q_prev, q, d_prev, d = q, ((x - diag[k]) * q - c * q_prev) / b, d, (q + (x - diag[k]) * d - c * d_prev) / b
    return np.clip(x - q / d, -1.0, 1.0)


def gauss_jacobi(n: int, alpha: float = 0.0, beta: float = 0.0):
    """Nodes and weights for the weight ``(1-x)**alpha (1+x)**beta`` on [-1, 1].

    Golub-Welsch on the Jacobi three-term recurrence. Tables are cached and
    returned read-only.
    """
    if alpha <= -1 or beta <= -1:
        raise DomainError(f"Jacobi exponents must exceed -1, got ({alpha}, {beta})")
    return _gauss_jacobi_cached(int(n), float(alpha), float(beta))


def gauss_legendre(n: int):
    return gauss_jacobi(n, 0.0, 0.0)


@lru_cache(maxsize=64)
def _tanh_sinh_cached(level: int):
    h = 2.0 ** (-level)
    kmax = int(math.ceil(4.0 / h))  # |k h| <= 4 reaches double-precision endpoints
    s = h * np.arange(-kmax, kmax + 1)
    u = 0.5 * math.pi * np.sinh(s)
    # 1 - x computed without cancellation
    one_minus = 1.0 / (np.exp(u) * np.cosh(u))
    x = np.tanh(u)
    w = h * 0.5 * math.pi * np.cosh(s) / np.cosh(u) ** 2
    keep = (one_minus > 0) & (1.0 + x > 0) & (w > 0)
    out = (x[keep], w[keep], one_minus[keep])
    for a in out:
        a.setflags(write=False)
    return out


def tanh_sinh(level: int):
    """Double-exponential nodes on [-1, 1]: ``(x, w, 1 - x)``; step ``2**-level``."""
    return _tanh_sinh_cached(int(level))


# ------------------------------------------------------------- adaptive core


def _within(err, est, scale, spec: QuadratureSpec) -> bool:
    ref = np.maximum(np.abs(est), scale)
    return bool(np.all(err <= np.maximum(spec.abs_tol, spec.rel_tol * ref)))


def _adapt(evaluate, spec: QuadratureSpec, scale=None, start=None) -> IntegrationReport:
    """Double the node count until successive estimates agree.

    ``evaluate(n)`` returns ``(value, magnitude)``. The tolerance reference of
    each batch element is the unsigned magnitude (or ``scale`` if larger), so
    integrals that cancel to zero still terminate.
    """
    n = start or spec.nodes
    prev, prev_mag = evaluate(n)
    while True:
        n2 = 2 * n
        if n2 > spec.max_nodes:
            return IntegrationReport(prev, math.inf, n, False, prev_mag)
        cur, mag = evaluate(n2)
        err = np.abs(np.asarray(cur) - np.asarray(prev))
        ref = mag if scale is None else np.maximum(mag, scale)
        if _within(err, cur, ref, spec):
            return IntegrationReport(cur, float(np.max(err, initial=0.0)), n2, True, mag)
        prev, prev_mag, n = cur, mag, n2


def _sum(vals, w):
    vals = np.asarray(vals, dtype=float)
    return vals @ w, np.abs(vals) @ w


# ------------------------------------------------------------ finite interval


def integrate_jacobi(
    f: Integrand,
    a,
    b,
    spec: QuadratureSpec,
    *,
    alpha: float = 0.0,
    beta: float = 0.0,
    scale=None,
) -> IntegrationReport:
    """``int_a^b f(x) (b-x)**alpha (x-a)**beta dx``; the weight is not folded into f.

    ``a`` and ``b`` may be arrays (one interval per batch element); the nodes
    are then handed to ``f`` with shape ``a.shape + (n,)``.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if np.any(b <= a):
        raise DomainError("integration interval must satisfy a < b")
    half = 0.5 * (b - a)
    factor = half ** (alpha + beta + 1.0)
    if spec.rule is Rule.TANH_SINH:
        return _tanh_sinh_interval(f, a, b, spec, alpha, beta, scale)
    if spec.rule is Rule.GAUSS_LEGENDRE:
        # weight carried by the integrand instead of the rule
        def g(x):
            return f(x) * (b[..., None] - x) ** alpha * (x - a[..., None]) ** beta

        return integrate_jacobi(g, a, b, spec.with_(rule=Rule.GAUSS_JACOBI), scale=scale)

    def evaluate(n):
        y, w = gauss_jacobi(n, alpha, beta)
        x = a[..., None] + half[..., None] * (1.0 + y)
        v, mag = _sum(f(x), w) if x.ndim == 1 else _rowsum(f(x), w)
        return v * factor, mag * factor

    return _adapt(evaluate, spec, scale)


def _rowsum(vals, w):
    vals = np.asarray(vals, dtype=float)
    return np.einsum("...n,n->...", vals, w), np.einsum("...n,n->...", np.abs(vals), w)


def _tanh_sinh_interval(f, a, b, spec, alpha, beta, scale):
    half = 0.5 * (b - a)

    def evaluate(level):
        y, w, one_minus = tanh_sinh(level)
        one_plus = 2.0 - one_minus
        x = a[..., None] + half[..., None] * one_plus
        # distances to the endpoints without cancellation
        wt = w * (half[..., None] * one_minus) ** alpha * (half[..., None] * one_plus) ** beta
        vals = np.asarray(f(x), dtype=float) * wt
        return np.sum(vals, axis=-1) * half, np.sum(np.abs(vals), axis=-1) * half

    level = 1
    prev, _ = evaluate(level)
    while True:
        level += 1
        cur, mag = evaluate(level)
        err = np.abs(cur - prev)
        ref = mag if scale is None else np.maximum(mag, scale)
        if _within(err, cur, ref, spec):
            return IntegrationReport(cur, float(np.max(err)), len(tanh_sinh(level)[0]), True, mag)
        if len(tanh_sinh(level)[0]) > spec.max_nodes:
            return IntegrationReport(cur, float(np.max(err)), len(tanh_sinh(level)[0]), False, mag)
        prev = cur


def integrate_singular_endpoint(
    f: Integrand, a: float, b: float, alpha: float, spec: QuadratureSpec, *, endpoint: str = "b", scale=None
) -> IntegrationReport:
    """``int_a^b f(x) w(x) dx`` with ``w = (b-x)**alpha`` (or ``(x-a)**alpha``)."""
    if not alpha > -1:
        raise DomainError(f"endpoint exponent must exceed -1, got {alpha}")
    if endpoint == "b":
        return integrate_jacobi(f, a, b, spec, alpha=alpha, scale=scale)
    if endpoint == "a":
        return integrate_jacobi(f, a, b, spec, beta=alpha, scale=scale)
    raise DomainError(f"endpoint must be 'a' or 'b', got {endpoint!r}")


# ------------------------------------------------------------ semi-infinite

_LOG_W_MAX = 512.0


def integrate_semi_infinite(
    f: Integrand,
    a,
    decay_hint: float,
    spec: QuadratureSpec,
    *,
    endpoint_exponent: float = 0.0,
    pure_power: bool = False,
    scale=None,
) -> IntegrationReport:
    """``int_a^inf f(x) (x-a)**endpoint_exponent dx`` for ``|f| = O(x**-decay_hint)``.

    The interval is mapped by ``x = a + L u / (1-u)`` onto [0, 1) with ``L`` the
    truncation radius of spec. With ``pure_power``, or when the decay is slower
    than ``x**-2``, the algebraic behaviour of the tail becomes a Jacobi weight
    at ``u = 1``; that is exact for pure powers and spectrally accurate for
    tails expanding in powers of ``1/x``.
    When the integrand decays no faster than ``1/x`` the interval is instead
    integrated in ``w = log(1 + (x-a)/L)`` over geometric panels, and the part
    beyond ``w = 512`` is closed by a power law in ``w`` fitted to the last
    panel; an exponent ``<= 1`` there means divergence and is reported as
    nonconvergence.
    """
    a = np.asarray(a, dtype=float)
    beta = float(endpoint_exponent)
    if beta <= -1:
        raise DomainError("endpoint exponent must exceed -1")
    L = spec.truncation_radius
    if decay_hint - beta <= 1.0:
        return _log_tail(f, a, beta, spec, scale)
    # a slow tail leaves g singular at u = 1; its algebraic part then goes to the weight
    alpha = decay_hint - beta - 2.0 if pure_power or decay_hint - beta < 2.0 else 0.0
    if alpha <= -1:
        raise DomainError("pure-power tail is not integrable")

    def g(u):
        one_minus = 1.0 - u
        x = a[..., None] + L * u / one_minus if a.ndim else a + L * u / one_minus
        return f(x) * L ** (beta + 1.0) * one_minus ** (-beta - 2.0 - alpha)

    return integrate_jacobi(g, np.zeros_like(a), np.ones_like(a), spec, alpha=alpha, beta=beta, scale=scale)


def _log_tail(f, a, beta, spec, scale):
    L = spec.truncation_radius

    def g(w):
        x = (a[..., None] if a.ndim else a) + L * np.expm1(w)
        jac = L * np.exp(w)
        # (x - a)**beta = L**beta w**beta (expm1(w)/w)**beta; w**beta goes to the rule
        ratio = np.where(w > 0, np.expm1(w) / np.where(w > 0, w, 1.0), 1.0)
        return f(x) * jac * L**beta * ratio**beta

    edges = [0.0, 1.0]
    while edges[-1] < _LOG_W_MAX:
        edges.append(edges[-1] * 2.0)
    zeros = np.zeros_like(a)
    total = integrate_jacobi(g, zeros + edges[0], zeros + edges[1], spec, beta=beta, scale=scale)
    for lo, hi in zip(edges[1:-1], edges[2:]):
        total = total + integrate_jacobi(
            lambda w: g(w) * w**beta, zeros + lo, zeros + hi, spec, scale=scale
        )
    w1, w2 = _LOG_W_MAX / 2.0, _LOG_W_MAX
    g1 = np.asarray(g(np.array([w1])) * w1**beta, dtype=float)[..., 0]
    g2 = np.asarray(g(np.array([w2])) * w2**beta, dtype=float)[..., 0]
    with np.errstate(divide="ignore", invalid="ignore"):
        q = np.log(np.abs(g1) / np.abs(g2)) / math.log(w2 / w1)
        same_sign = np.sign(g1) == np.sign(g2)
        tail = np.where(g2 == 0, 0.0, g2 * w2 / (q - 1.0))
    ok = np.all((g2 == 0) | (same_sign & (q > 1.0 + 1e-3)))
    if not ok:
        return IntegrationReport(total.value, math.inf, total.nodes_used, False, total.magnitude)
    return IntegrationReport(
        total.value + tail,
        total.error_estimate,
        total.nodes_used,
        total.converged,
        total.magnitude + np.abs(tail),
    )


# ------------------------------------------------------------------ spheres


def sphere_rule(n: int, k: int, pole_exponent: float | None = None):
    """Points and normalized weights on S^{n-1}, n in {2, 3}, resolution ``k``.

    The last coordinate axis is the pole. n = 2: Gauss-Legendre (``k`` nodes)
    on each quarter arc between the poles and the equator. n = 3:
    Gauss-Legendre in the cosine of colatitude on each hemisphere times a
    ``2k``-point trapezoid in longitude. Splitting at the equator makes kinks
    there harmless. ``pole_exponent`` g declares an integrand behaving like
    ``(1 - z)**g`` at the pole; the rule then absorbs that factor (the
    integrand is passed unchanged). Weights sum to 1 for g = 0.
    """
    g = pole_exponent
    if n == 2:
        y, wy = gauss_legendre(k)
        u = 0.25 * math.pi * (1.0 + y)
        wu = 0.25 * math.pi * wy
        # arcs measured from the pole phi = pi/2 outwards
        near = [(u, wu)] * 2
        if g is not None:
            # the Jacobi variable is the arc length eps from the pole
            ye, we = gauss_jacobi(k, 0.0, 2.0 * g)
            eps = 0.25 * math.pi * (1.0 + ye)
            weff = (0.25 * math.pi) ** (2.0 * g + 1.0) * we * eps ** (-2.0 * g)
            near = [(eps, weff)] * 2
        phis, ws = [], []
        for sgn, (e, w) in zip((1.0, -1.0), near):
            phis.append(0.5 * math.pi + sgn * e)
            ws.append(w)
        for sgn in (1.0, -1.0):
            phis.append(1.5 * math.pi + sgn * u)
            ws.append(wu)
        phi = np.concatenate(phis)
        w = np.concatenate(ws) / (2.0 * math.pi)
        return np.stack([np.cos(phi), np.sin(phi)], axis=-1), w
    if n == 3:
        y, wy = gauss_legendre(k)
        zl = -0.5 * (1.0 + y)
        wl = 0.5 * wy
        if g is None:
            zu, wu = -zl, wl
        else:
            # upper hemisphere in zeta = sqrt(1 - z): dz = 2 zeta dzeta
            yz, wz = gauss_jacobi(k, 0.0, 2.0 * g + 1.0)
            zeta = 0.5 * (1.0 + yz)
            zu = 1.0 - zeta**2
            wu = 2.0 * 0.5 ** (2.0 * g + 2.0) * wz * zeta ** (-2.0 * g)
        z = np.concatenate([zl, zu])
        wz = np.concatenate([wl, wu])
        nphi = 2 * k
        phi = 2.0 * math.pi * (np.arange(nphi) + 0.5) / nphi
        s = np.sqrt(np.maximum(1.0 - z * z, 0.0))
        pts = np.stack(
            [
                (s[:, None] * np.cos(phi)[None, :]).ravel(),
                (s[:, None] * np.sin(phi)[None, :]).ravel(),
                np.repeat(z, nphi),
            ],
            axis=-1,
        )
        w = np.repeat(wz / 2.0, nphi) / nphi
        return pts, w
    raise DomainError(f"sphere quadrature supports n in {{2, 3}}, got {n}")


def integrate_sphere(
    g: Callable[[np.ndarray], np.ndarray],
    n: int,
    spec: QuadratureSpec,
    *,
    basis: np.ndarray | None = None,
    scale=None,
    pole_exponent: float | None = None,
) -> IntegrationReport:
    """Normalized average of ``g`` over S^{n-1}.

    ``g`` receives points of shape ``(N, D)`` and returns values with last axis
    ``N``. With ``basis`` (an ``n x D`` matrix with orthonormal rows) the sphere
    is the unit sphere of the span of those rows inside R^D; the last row is
    the pole of :func:`sphere_rule`.
    """

    def evaluate(k):
        pts, w = sphere_rule(n, k, pole_exponent)
        if basis is not None:
            pts = pts @ basis
        vals = np.asarray(g(pts), dtype=float)
        return _rowsum(vals, w)

    start = max(spec.nodes // 2, 4)
    if n == 3:
        # point count grows like 4 k**2
        spec = spec.with_(max_nodes=min(spec.max_nodes, _SPHERE_K_MAX))
    return _adapt(evaluate, spec, scale, start=start)


_SPHERE_K_MAX = 512
