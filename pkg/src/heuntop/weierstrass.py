"""Weierstrass elliptic function from its Laurent series and the duplication formula."""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .algebra import Q
from .errors import DomainError

_MAX_TERMS = 60


@dataclass(frozen=True)
class EllipticInvariants:
    g2: float | Fraction
    g3: float | Fraction

    @property
    def discriminant(self):
        return self.g2**3 - 27 * self.g3**2

    def cubic_roots(self) -> list[complex]:
        """Roots of ``4 t^3 - g2 t - g3``, sorted by real part descending."""
        r = np.roots([4.0, 0.0, -float(self.g2), -float(self.g3)])
        return sorted((complex(z) for z in r), key=lambda z: (-z.real, -z.imag))

    def as_floats(self) -> tuple[float, float]:
        return float(self.g2), float(self.g3)


def bc1_invariants(lam, delta) -> EllipticInvariants:
    """``g2 = 12 (lam^2 - delta)``, ``g3 = 4 lam (2 lam^2 - 3 delta)``, exact for rational input."""
    lam, delta = Q(lam), Q(delta)
    return EllipticInvariants(12 * (lam**2 - delta), 4 * lam * (2 * lam**2 - 3 * delta))


def cubic_residual(e, inv: EllipticInvariants):
    """``4 e^3 - g2 e - g3``; exact when everything is rational."""
    return 4 * e**3 - inv.g2 * e - inv.g3


@lru_cache(maxsize=64)
def laurent_coefficients(g2: float, g3: float, terms: int = _MAX_TERMS) -> tuple[float, ...]:
    """``c_k`` in ``P(z) = z^-2 + sum_{k>=2} c_k z^(2k-2)``, returned with ``c_0 = c_1 = 0``."""
    c = [0.0, 0.0, g2 / 20.0, g3 / 28.0]
    for k in range(4, terms):
        s = sum(c[m] * c[k - m] for m in range(2, k - 1))
        c.append(3.0 * s / ((2 * k + 1) * (k - 3)))
    return tuple(c)


def _series(z: complex, coeffs) -> tuple[complex, complex]:
    z2 = z * z
    p = 0j
    dp = 0j
    zp = z2  # z^(2k-2) at k = 2
    for k in range(2, len(coeffs)):
        # no early exit: for g2 = 0 or g3 = 0 whole subsequences of c_k vanish
        p += coeffs[k] * zp
        dp += (2 * k - 2) * coeffs[k] * zp / z
        zp *= z2
    return 1 / z2 + p, -2 / (z2 * z) + dp


def _scale(g2: float, g3: float) -> float:
    return max(abs(g2) ** 0.25, abs(g3) ** (1 / 6), 1e-12)


def weierstrass_p(tau, inv: EllipticInvariants, radius: float = 1.0):
    """Return ``(P(tau), P'(tau))``.

    ``tau`` is halved until ``|tau| * s <= radius`` (``s`` the natural scale of
    the invariants), the Laurent series is summed there, and the result is
    doubled back with

        P(2z)  = -2P + (P''/(2P'))^2,
        P'(2z) = -P' + P''(12 P P'^2 - P''^2) / (4 P'^3),     P'' = 6P^2 - g2/2.
    """
    if tau == 0:
        raise DomainError("pole: tau = 0")
    g2, g3 = inv.as_floats()
    real_input = isinstance(tau, (int, float)) and not isinstance(tau, complex)
    z = complex(tau)
    s = _scale(g2, g3)
    m = max(0, math.ceil(math.log2(abs(z) * s / radius))) if abs(z) * s > radius else 0
    z0 = z / 2**m
    p, dp = _series(z0, laurent_coefficients(g2, g3))
    for _ in range(m):
        ddp = 6 * p * p - g2 / 2
        if dp == 0:
            raise DomainError("reduction failed: P' vanished during duplication")
        p, dp = -2 * p + (ddp / (2 * dp)) ** 2, -dp + ddp * (12 * p * dp * dp - ddp * ddp) / (4 * dp**3)
    if not (cmath.isfinite(p) and cmath.isfinite(dp)):
        raise DomainError("reduction failed: non-finite value (tau at or near a lattice point)")
    if real_input:
        return p.real, dp.real
    return p, dp


def ode_residual(tau, inv: EllipticInvariants) -> float:
    """Relative residual of ``P'^2 = 4 P^3 - g2 P - g3``."""
    g2, g3 = inv.as_floats()
    p, dp = weierstrass_p(tau, inv)
    num = abs(dp * dp - 4 * p**3 + g2 * p + g3)
    den = abs(dp) ** 2 + 4 * abs(p) ** 3 + abs(g2 * p) + abs(g3)
    return num / den


def _agm(a: float, b: float) -> float:
    for _ in range(100):
        if abs(a - b) <= 1e-16 * abs(a):
            break
        a, b = (a + b) / 2, math.sqrt(a * b)
    return a


def real_half_period(inv: EllipticInvariants) -> float:
    """Real half-period ``w`` with ``P(w) = e1`` (largest root); requires three real roots."""
    e1, e2, e3 = inv.cubic_roots()
    if max(abs(e.imag) for e in (e1, e2, e3)) > 1e-12 * (1 + abs(e1)):
        raise DomainError("real half-period needs a non-negative discriminant")
    e1, e2, e3 = e1.real, e2.real, e3.real
    return math.pi / (2 * _agm(math.sqrt(e1 - e3), math.sqrt(e1 - e2)))
