"""Closed-form kernel generators, membership checks and moment-space constructions."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from geokern.errors import DomainError
from geokern.fracint import OperatorParams, Profile, Side, gc_report
from geokern.harmonics import Orientation, SeparableFunction, SphericalHarmonic
from geokern.quadrature import QuadratureSpec, Rule, integrate_jacobi
from geokern import transforms as tr

__all__ = [
    "Transform",
    "KernelElement",
    "KernelBasis",
    "kernel_basis",
    "AnnihilationReport",
    "verify_annihilation",
    "annihilation_closures",
    "DecompositionResult",
    "kernel_decompose",
    "moment_vector",
    "bump",
    "biorthogonal_system",
    "project_to_moment_space",
]


class Transform(str, enum.Enum):
    RADON_EXTERIOR = "radon_exterior"
    DUAL_INTERIOR = "dual_interior"
    CORMACK_QUINTO = "cormack_quinto"
    FUNK = "funk"
    SLICE = "slice"
    HYPERBOLIC = "hyperbolic"
    GC_RIGHT = "gc_right"
    GC_LEFT = "gc_left"


_RADIAL = {Transform.RADON_EXTERIOR, Transform.DUAL_INTERIOR, Transform.CORMACK_QUINTO, Transform.GC_RIGHT, Transform.GC_LEFT}


@dataclass(frozen=True)
class KernelElement:
    """The j-th generator; ``exponent`` is the power of the radial variable where meaningful."""

    transform: Transform
    n: int
    m: int
    j: int
    lam: float | None = None

    @property
    def exponent(self) -> float:
        n, m, j = self.n, self.m, self.j
        t = self.transform
        if t is Transform.RADON_EXTERIOR:
            return float(2 * j - m - n)
        if t in (Transform.DUAL_INTERIOR, Transform.GC_LEFT):
            return float(m - 2 * j)
        if t is Transform.CORMACK_QUINTO:
            # the inversion-type map to the dual Radon transform contributes r**(2-n)
            return float(m - 2 * j + 2 - n)
        if t is Transform.GC_RIGHT:
            # t**(-2 lam - k - 2) with m - k = 2j
            return float(2 * j - m - 2 * self.lam - 2)
        if t is Transform.FUNK:
            return float(m - 2 * j)  # power of cot
        if t is Transform.SLICE:
            return float(n + m - 2 * j)  # power of tan(phi/2)
        return float(m - 2 * j)  # power of coth

    @property
    def description(self) -> str:
        e = self.exponent
        t = self.transform
        if t in _RADIAL:
            return f"r^{e:g}"
        if t is Transform.FUNK:
            return f"sin^-{self.n}(psi) cot^{e:g}(psi)"
        if t is Transform.SLICE:
            return f"(1-cos phi)^{1 - self.n} tan^{e:g}(phi/2)"
        return f"sinh^-{self.n}(r) coth^{e:g}(r)"

    def __call__(self, x):
        """The generator as a function of its one real variable."""
        x = np.asarray(x, dtype=float)
        e, n = self.exponent, self.n
        t = self.transform
        if t in _RADIAL:
            return x**e
        if t is Transform.FUNK:
            return np.sin(x) ** (-n) / np.tan(x) ** e
        if t is Transform.SLICE:
            return (1.0 - np.cos(x)) ** (1 - n) * np.tan(x / 2) ** e
        with np.errstate(over="ignore"):
            return np.sinh(x) ** (-n) / np.tanh(x) ** e

    def profile(self) -> Profile:
        if self.transform not in _RADIAL:
            raise DomainError(f"{self.transform.value} generators are angular, not radial profiles")
        return Profile.power(self.exponent)

    def function(self, harmonic: SphericalHarmonic, coef: float = 1.0):
        """The generator times ``harmonic``, as the object its transform consumes."""
        t = self.transform
        if harmonic.m != self.m or harmonic.n != self.n:
            raise DomainError("harmonic degree/dimension does not match the generator")
        if t in (Transform.RADON_EXTERIOR, Transform.CORMACK_QUINTO):
            return SeparableFunction(self.profile(), harmonic, Orientation.SPACE, coef)
        if t is Transform.DUAL_INTERIOR:
            return SeparableFunction(self.profile(), harmonic, Orientation.CYLINDER, coef)
        e, n = self.exponent, self.n
        if t is Transform.FUNK:
            return tr.SphereFunction(self, harmonic, pole_exponent=-n - e, far_exponent=e, even=True, coef=coef)
        if t is Transform.SLICE:
            return tr.SphereFunction(self, harmonic, pole_exponent=2 - 2 * n + e, far_exponent=-e, even=False, coef=coef)
        if t is Transform.HYPERBOLIC:
            prof = Profile(self, zero_exponent=-n - e, infinity_exponent=math.inf, name=self.description)
            return tr.HyperbolicFunction(prof, harmonic, coef)
        raise DomainError("operator generators are plain profiles; use profile()")


@dataclass(frozen=True)
class KernelBasis:
    transform: Transform
    n: int
    m: int
    lam: float | None
    elements: tuple[KernelElement, ...]

    def __len__(self):
        return len(self.elements)

    @property
    def exponents(self) -> list[float]:
        return [e.exponent for e in self.elements]

    def design_matrix(self, grid) -> np.ndarray:
        grid = np.asarray(grid, dtype=float)
        return np.column_stack([e(grid) for e in self.elements]) if self.elements else np.zeros((grid.size, 0))


def kernel_basis(transform, n: int, m: int, lam: float | None = None) -> KernelBasis:
    """Generators of the kernel for degree ``m``; empty when ``m`` is 0 or 1."""
    transform = Transform(transform)
    if m < 0 or n < 2:
        raise DomainError("need m >= 0 and n >= 2")
    if transform in (Transform.GC_RIGHT, Transform.GC_LEFT):
        if lam is None:
            raise DomainError("operator kernels need lambda")
    elif lam is None:
        lam = (n - 2) / 2
    elements = tuple(KernelElement(transform, n, m, j, lam) for j in range(1, m // 2 + 1)) if m >= 2 else ()
    return KernelBasis(transform, n, m, lam, elements)


# ------------------------------------------------------------ membership


@dataclass
class AnnihilationReport:
    residuals: np.ndarray
    values: np.ndarray
    masses: np.ndarray
    tol: float

    @property
    def max_residual(self) -> float:
        return float(np.max(self.residuals, initial=0.0))

    @property
    def passed(self) -> bool:
        return self.max_residual <= self.tol


def verify_annihilation(
    evaluate: Callable, mass: Callable, points: Sequence, tol: float = 1e-5, floor: float = 1e-300
) -> AnnihilationReport:
    """``|T f| / T|f|`` at each point; PASS iff the maximum is at most ``tol``."""
    vals = np.array([float(evaluate(p)) for p in points])
    masses = np.array([float(mass(p)) for p in points])
    return AnnihilationReport(np.abs(vals) / np.maximum(masses, floor), vals, masses, tol)


def annihilation_closures(transform, f, spec: QuadratureSpec = QuadratureSpec(), path=tr.Path.DIRECT, lam=None, m=None):
    """``(evaluate, mass)`` for ``f`` under ``transform``.

    Geometric points: a Hyperplane (Radon), a point x (dual, Cormack-Quinto),
    theta in S^n (Funk), ``(theta, psi)`` (slice), a dual HyperbolicPoint.
    Operator points are t > 0 and ``f`` is a Profile.
    """
    transform = Transform(transform)
    if transform in (Transform.GC_RIGHT, Transform.GC_LEFT):
        side = Side.RIGHT if transform is Transform.GC_RIGHT else Side.LEFT
        params = OperatorParams(lam, m, side)

        def ev(t):
            return gc_report(params, f, t, spec).value

        def ms(t):
            return gc_report(params, f, t, spec).magnitude

        return ev, ms
    if transform is Transform.RADON_EXTERIOR:
        return (lambda p: tr.radon(f, p, path, spec)), (lambda p: tr.unsigned_mass("radon", f, p))
    if transform is Transform.DUAL_INTERIOR:
        return (lambda x: tr.dual_radon(f, x, path, spec)), (lambda x: tr.unsigned_mass("dual_radon", f, x))
    if transform is Transform.CORMACK_QUINTO:
        return (lambda x: tr.cormack_quinto(f, x, path, spec)), (lambda x: tr.unsigned_mass("cormack_quinto", f, x))
    if transform is Transform.FUNK:
        return (lambda th: tr.funk(f, th, path, spec)), (lambda th: tr.unsigned_mass("funk", f, th))
    if transform is Transform.SLICE:
        return (
            lambda q: tr.slice_transform(f, q[0], q[1], path, spec),
            lambda q: tr.unsigned_mass("slice", f, q[0], q[1]),
        )
    return (lambda xi: tr.hyperbolic_geodesic(f, xi, spec)), (lambda xi: tr.unsigned_mass("hyperbolic", f, xi))


# --------------------------------------------------------- decomposition


@dataclass
class DecompositionResult:
    coefficients: np.ndarray
    residual_norm: float
    relative_residual: float
    grid: np.ndarray
    rank_deficient: bool = False
    exponents: list = field(default_factory=list)


def kernel_decompose(samples, transform, n: int, m: int, lam: float | None = None, *, floor: float = 1e-300, rcond: float = 1e-12) -> DecompositionResult:
    """Least-squares fit of ``(t, value)`` samples onto the kernel generators.

    Columns are scaled to unit grid norm before a QR solve. A diagonal entry
    of R below ``rcond`` times the largest flags rank deficiency; the
    coefficients of the dependent columns are then set to zero.
    """
    samples = np.asarray(samples, dtype=float)
    grid, y = samples[:, 0], samples[:, 1]
    basis = kernel_basis(transform, n, m, lam)
    ynorm = float(np.linalg.norm(y))
    if len(basis) == 0:
        return DecompositionResult(np.zeros(0), ynorm, ynorm / max(ynorm, floor), grid, False, [])
    A = basis.design_matrix(grid)
    scale = np.linalg.norm(A, axis=0)
    if np.any(scale == 0) or not np.all(np.isfinite(A)):
        raise DomainError("generator columns must be finite and nonzero on the grid")
    q, r = np.linalg.qr(A / scale)
    d = np.abs(np.diag(r))
    keep = d > rcond * d.max()
    coef_scaled = np.zeros(len(basis))
    if np.all(keep):
        coef_scaled = np.linalg.solve(r, q.T @ y)
    else:
        # refit on the independent columns only
        cols = np.flatnonzero(keep)
        q2, r2 = np.linalg.qr((A / scale)[:, cols])
        coef_scaled[cols] = np.linalg.solve(r2, q2.T @ y)
    coef = coef_scaled / scale
    res = float(np.linalg.norm(y - A @ coef))
    return DecompositionResult(coef, res, res / max(ynorm, floor), grid, not bool(np.all(keep)), basis.exponents)


# ------------------------------------------------------------ moment space

# bumps resolve to 1e-12 within a few hundred nodes; the cap bounds the work spent
# on projected profiles that cancel to rounding noise (their moments are then ~eps)
_GL = QuadratureSpec(rule=Rule.GAUSS_LEGENDRE, nodes=32, rel_tol=1e-12, abs_tol=1e-300, max_nodes=2**11)


def _integrate(f, a, b):
    rep = integrate_jacobi(f, a, b, _GL)
    return float(rep.value), float(rep.magnitude)


def moment_vector(phi: Profile, m: int) -> tuple[np.ndarray, float]:
    """``int t**(m-2k) phi(t) dt`` for k = 1..[m/2], and the largest unsigned moment."""
    if phi.support is None:
        raise DomainError("moments are taken of compactly supported profiles")
    a, b = phi.support
    out, scale = [], 0.0
    for k in range(1, m // 2 + 1):
        v, mag = _integrate(lambda t, k=k: t ** (m - 2 * k) * phi(t), a, b)
        out.append(v)
        scale = max(scale, mag)
    return np.array(out), scale


def bump(a: float, b: float, height: float = 1.0) -> Profile:
    """``exp(-1/(1-u**2))`` on ``(a, b)`` with u the affine coordinate onto (-1, 1)."""
    if not 0 < a < b:
        raise DomainError("bump support must satisfy 0 < a < b")
    c, h = 0.5 * (a + b), 0.5 * (b - a)

    def f(t):
        u = (np.asarray(t, dtype=float) - c) / h
        inside = np.abs(u) < 1
        out = np.zeros_like(u)
        out[inside] = height * np.exp(-1.0 / (1.0 - u[inside] ** 2))
        return out

    return Profile(f, zero_exponent=math.inf, infinity_exponent=math.inf, support=(a, b), name=f"bump[{a:g},{b:g}]")


def _combine(terms, support, name) -> Profile:
    terms = [(float(c), p) for c, p in terms if c != 0.0]

    def f(t):
        t = np.asarray(t, dtype=float)
        out = np.zeros_like(t)
        for c, p in terms:
            out = out + c * p(t)
        return out

    return Profile(f, zero_exponent=math.inf, infinity_exponent=math.inf, support=support, name=name)


def biorthogonal_system(m: int, support, *, max_cond: float = 1e12) -> list[Profile]:
    """Profiles ``phi_{m-2k}``, k = 1..[m/2], with ``int t**(m-2j) phi_{m-2k} = delta_jk``.

    Each is a combination of bumps on [m/2] consecutive sub-intervals of the
    support; the combination solves the Gram system against the monomials.
    """
    if m < 2:
        raise DomainError("the moment conditions start at m = 2")
    a, b = map(float, support)
    if not 0 < a < b:
        raise DomainError("support must satisfy 0 < a < b")
    M = m // 2
    edges = np.linspace(a, b, M + 1)
    bumps = [bump(edges[i], edges[i + 1]) for i in range(M)]
    G = np.array([[_integrate(lambda t, j=j, p=p: t ** (m - 2 * j) * p(t), p.support[0], p.support[1])[0] for p in bumps] for j in range(1, M + 1)])
    cond = float(np.linalg.cond(G))
    if not cond < max_cond:
        raise DomainError(f"Gram system is ill-conditioned (condition number {cond:.3e}); widen the support")
    C = np.linalg.solve(G, np.eye(M))
    return [_combine(zip(C[:, k], bumps), (a, b), f"phi_{m - 2 * (k + 1)}") for k in range(M)]


def project_to_moment_space(phi: Profile, m: int, lam: float | None = None, *, support=None) -> Profile:
    """``phi - sum_k phi_{m-2k} int t**(m-2k) phi``: a function with vanishing moments.

    ``support`` picks the biorthogonal system's support (default: phi's).
    ``lam`` is accepted for interface symmetry; the moment space does not depend on it.
    """
    if phi.support is None or phi.support[0] <= 0:
        raise DomainError("phi must be compactly supported in (0, inf)")
    if m < 2:
        return phi
    sup = phi.support if support is None else tuple(support)
    system = biorthogonal_system(m, sup)
    moments, _ = moment_vector(phi, m)
    lo, hi = min(phi.support[0], sup[0]), max(phi.support[1], sup[1])
    return _combine([(1.0, phi)] + [(-mk, pk) for mk, pk in zip(moments, system)], (lo, hi), f"P[{phi.name}]")
