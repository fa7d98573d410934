"""Gegenbauer and Chebyshev polynomials, Gamma, and related constants."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from geokern.errors import DomainError

__all__ = [
    "Family",
    "PolyId",
    "eval_poly",
    "explicit_sum",
    "reversed_poly",
    "gegenbauer_coefficients",
    "norm_const",
    "CHEBYSHEV_NORM",
    "gamma_fn",
    "harmonic_dim",
    "sphere_area",
    "poly_for",
]

#: factor replacing ``1 / c_{lambda,m}`` in the Chebyshev operators
CHEBYSHEV_NORM = 2.0 / math.sqrt(math.pi)


class Family(str, enum.Enum):
    GEGENBAUER = "gegenbauer"
    CHEBYSHEV_T = "chebyshev_t"


@dataclass(frozen=True)
class PolyId:
    """Selects ``C^lam_m`` or ``T_m``; ``lam`` is ignored for Chebyshev."""

    family: Family
    degree: int
    lam: float = 0.0

    def __post_init__(self):
        if self.degree < 0 or int(self.degree) != self.degree:
            raise DomainError(f"degree must be a nonnegative integer, got {self.degree}")
        if self.family is Family.GEGENBAUER:
            if self.lam <= -0.5:
                raise DomainError(f"Gegenbauer index must exceed -1/2, got {self.lam}")
            if self.lam == 0:
                raise DomainError("Gegenbauer index 0 is not allowed; use ChebyshevT")


def poly_for(lam: float, m: int) -> PolyId:
    """The polynomial used by the operators with index ``lam``: T_m when lam == 0."""
    if lam == 0:
        return PolyId(Family.CHEBYSHEV_T, m)
    return PolyId(Family.GEGENBAUER, m, lam)


def eval_poly(pid: PolyId, t):
    """Evaluate the polynomial at ``t`` (any real, array-like).

    Uses the three-term recurrence. For Chebyshev on ``[-1, 1]`` the value is
    ``cos(m arccos t)``; outside it the recurrence is used.
    """
    t = np.asarray(t, dtype=float)
    m = pid.degree
    if pid.family is Family.CHEBYSHEV_T:
        inside = np.abs(t) <= 1.0
        out = _recurrence(t, m, 0.0, chebyshev=True)
        if np.any(inside):
            out = np.where(inside, np.cos(m * np.arccos(np.clip(t, -1.0, 1.0))), out)
        return out[()] if out.ndim == 0 else out
    out = _recurrence(t, m, pid.lam, chebyshev=False)
    return out[()] if out.ndim == 0 else out


def _recurrence(t, m, lam, chebyshev):
    p_prev = np.ones_like(t)
    if m == 0:
        return p_prev
    p = t.copy() if chebyshev else 2.0 * lam * t
    for k in range(1, m):
        if chebyshev:
            p_prev, p = p, 2.0 * t * p - p_prev
        else:
            p_prev, p = p, (2.0 * (k + lam) * t * p - (k + 2.0 * lam - 1.0) * p_prev) / (k + 1)
    return p


def reversed_poly(pid: PolyId, s):
    """``s**m * P(1/s)``, which stays bounded as ``s -> 0``.

    Obtained from the recurrence scaled by ``s**k``; no division by ``s``.
    """
    s = np.asarray(s, dtype=float)
    m = pid.degree
    s2 = s * s
    q_prev = np.ones_like(s)
    if m == 0:
        return q_prev[()] if q_prev.ndim == 0 else q_prev
    cheb = pid.family is Family.CHEBYSHEV_T
    q = np.ones_like(s) if cheb else np.full_like(s, 2.0 * pid.lam)
    for k in range(1, m):
        if cheb:
            q_prev, q = q, 2.0 * q - s2 * q_prev
        else:
            lam = pid.lam
            q_prev, q = q, (2.0 * (k + lam) * q - (k + 2.0 * lam - 1.0) * s2 * q_prev) / (k + 1)
    return q[()] if q.ndim == 0 else q


def gegenbauer_coefficients(lam: float, m: int) -> list[float]:
    """Coefficients ``c_{m,j}`` of ``t**(m-2j)``, j = 0..[m/2]."""
    PolyId(Family.GEGENBAUER, m, lam)
    return [
        (-1) ** j * 2.0 ** (m - 2 * j) * gamma_fn(m - j + lam)
        / (gamma_fn(lam) * math.factorial(j) * math.factorial(m - 2 * j))
        for j in range(m // 2 + 1)
    ]


def explicit_sum(lam: float, m: int, t):
    """``C^lam_m(t)`` from the explicit power sum (reference evaluation)."""
    t = np.asarray(t, dtype=float)
    coeffs = gegenbauer_coefficients(lam, m)
    return sum(c * t ** (m - 2 * j) for j, c in enumerate(coeffs))


def norm_const(lam: float, m: int) -> float:
    """``Gamma(2 lam + m) Gamma(lam + 1/2) / (2 m! Gamma(2 lam))``.

    Defined for lam > -1/2, lam != 0. The Chebyshev operators use
    :data:`CHEBYSHEV_NORM` in place of ``1 / c``.
    """
    if lam <= -0.5:
        raise DomainError(f"lambda must exceed -1/2, got {lam}")
    if lam == 0:
        raise DomainError("norm_const is undefined at lambda = 0 (Chebyshev case)")
    if m < 0:
        raise DomainError(f"m must be nonnegative, got {m}")
    return gamma_fn(2 * lam + m) * gamma_fn(lam + 0.5) / (2 * math.factorial(m) * gamma_fn(2 * lam))


def gamma_fn(x: float) -> float:
    """Gamma function; raises :class:`DomainError` at the poles."""
    if x <= 0 and float(x).is_integer():
        raise DomainError(f"Gamma has a pole at {x}")
    return math.gamma(x)


def harmonic_dim(n: int, m: int) -> int:
    """Dimension of the space of degree-``m`` spherical harmonics on S^{n-1}."""
    if n < 2 or m < 0:
        raise DomainError(f"need n >= 2 and m >= 0, got n={n}, m={m}")
    if m == 0:
        return 1
    if n == 2:
        return 2
    return (n + 2 * m - 2) * math.factorial(n + m - 3) // (math.factorial(m) * math.factorial(n - 2))


def sphere_area(k: int) -> float:
    """Surface area of the unit sphere S^k in R^{k+1}; ``sphere_area(0) == 2``."""
    return 2.0 * math.pi ** ((k + 1) / 2) / math.gamma((k + 1) / 2)
