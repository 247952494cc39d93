"""Gauge rotation of the Heun operator to Schrodinger form and the BC1 elliptic model."""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy import integrate

from .algebra import DiffOp, Poly, Q, RationalFn
from .errors import DomainError
from .heun import HeunParams, heun_operator, qes_solve
from .sl2 import differential_generators
from .weierstrass import EllipticInvariants, bc1_invariants, real_half_period, weierstrass_p


@dataclass(frozen=True)
class PotentialData:
    """``H_e`` rotated to ``-(P3 d^2 + P3'/2 d) + V + constant`` with ``V = B x + Q2/P3``.

    ``constant`` is the part of the rotated zeroth-order term that the
    additive freedom in ``c1`` absorbs.
    """

    B: Fraction
    Q2: Poly
    P3: Poly
    phase_log_derivative: RationalFn
    constant: Fraction

    def potential(self) -> RationalFn:
        return RationalFn(Poly((0, self.B))) + RationalFn(self.Q2, self.P3)

    def V(self, x: float) -> float:
        return float(self.B) * x + self.Q2(x) / self.P3(x)


def closed_form_B(h: HeunParams) -> Fraction:
    """Linear coefficient of the rotated potential: ``3 a0/16 + b0/2 + c0 + b0^2/(4 a0)``."""
    if h.a0 == 0:
        raise DomainError("a0 zero: the linear term B is undefined")
    return Fraction(3, 16) * h.a0 + h.b0 / 2 + h.c0 + h.b0**2 / (4 * h.a0)


def rotated_coefficients(h: HeunParams) -> tuple[RationalFn, RationalFn, RationalFn]:
    """Coefficients of ``d^2, d, 1`` in ``exp(-phi) H_e exp(phi)``, ``phi' = (P2 + P3'/2)/(2 P3)``."""
    p3, p2, p1 = h.p3, h.p2, h.p1
    if p3.is_zero():
        raise DomainError("P3 vanishes identically")
    phi = RationalFn(p2 + p3.derivative() * Fraction(1, 2), p3 * 2)
    first = RationalFn(p2) - RationalFn(p3) * phi * 2
    zeroth = -RationalFn(p3) * (phi.derivative() + phi * phi) + RationalFn(p2) * phi + RationalFn(p1)
    return RationalFn(-p3), first, zeroth


def gauge_to_schrodinger(h: HeunParams) -> PotentialData:
    if h.a0 == 0:
        raise DomainError("a0 zero: the linear term B is undefined")
    p3 = h.p3
    _, first, zeroth = rotated_coefficients(h)
    if first != RationalFn(-p3.derivative() * Fraction(1, 2)):
        raise AssertionError("rotation did not reach Laplace-Beltrami form")
    # zeroth = N / den with den | P3; bring it over P3 exactly
    factor, rem = p3.divmod(zeroth.den)
    if not rem.is_zero():
        raise AssertionError("potential denominator does not divide P3")
    num = zeroth.num * factor
    quo, q2 = num.divmod(p3)
    if q2.degree > 2:
        raise AssertionError("division remainder too large")
    if quo.degree > 1:
        raise AssertionError("potential grows faster than linearly")
    phi = RationalFn(h.p2 + p3.derivative() * Fraction(1, 2), p3 * 2)
    return PotentialData(B=quo[1], Q2=q2, P3=p3, phase_log_derivative=phi, constant=quo[0])


def tau_of_x(h: HeunParams, x0: float, x1: float, steps: int = 100) -> list[tuple[float, float]]:
    """``tau(x) = int_{x0}^{x} dt / sqrt(P3(t))`` on a uniform grid.

    Each segment is integrated in ``s`` with ``t = x0 + s^2``, which removes the
    inverse square-root singularity when ``x0`` is a simple zero of ``P3``.
    """
    if x1 <= x0 or steps < 1:
        raise DomainError("need x1 > x0 and steps >= 1")
    p3 = np.poly1d(h.p3.to_floats()[::-1] or [0.0])
    for r in np.roots(p3.coeffs) if p3.order > 0 else []:
        if abs(r.imag) < 1e-12 and x0 < r.real < x1 and abs(r.real - x0) > 1e-12 * max(1.0, abs(x0)):
            raise DomainError("P3 changes sign in range")
    scale = max(1.0, abs(x0))
    if abs(p3(x0)) < 1e-12 * scale and abs(p3.deriv()(x0)) < 1e-12 * scale:
        raise DomainError("tau diverges: x0 is a multiple zero of P3")
    xs = np.linspace(x0, x1, steps + 1)
    if np.any(p3(xs[1:]) <= 0):
        raise DomainError("P3 changes sign in range")

    def integrand(s):
        t = x0 + s * s
        val = p3(t)
        if s == 0.0:
            # limit 2 / sqrt(P3'(x0)) at a simple root, 0 otherwise
            return 2.0 / math.sqrt(p3.deriv()(x0)) if abs(p3(x0)) < 1e-300 else 0.0
        return 2.0 * s / math.sqrt(val)

    table = [(float(xs[0]), 0.0)]
    tau = 0.0
    for a, b in zip(xs[:-1], xs[1:]):
        seg, _ = integrate.quad(integrand, math.sqrt(a - x0), math.sqrt(b - x0), epsabs=1e-14, epsrel=1e-13, limit=200)
        tau += seg
        table.append((float(b), tau))
    return table


# ---------------------------------------------------------------------------
# BC1 elliptic Calogero-Moser-Sutherland
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BC1Instance:
    lam: Fraction
    delta: Fraction
    mu: Fraction
    n: int

    def __post_init__(self):
        object.__setattr__(self, "lam", Q(self.lam))
        object.__setattr__(self, "delta", Q(self.delta))
        object.__setattr__(self, "mu", Q(self.mu))
        if int(self.n) != self.n or self.n < 0:
            raise DomainError("n must be a nonnegative integer")
        object.__setattr__(self, "n", int(self.n))

    @property
    def invariants(self) -> EllipticInvariants:
        return bc1_invariants(self.lam, self.delta)

    @property
    def cubic(self) -> Poly:
        """``x^3 - 3 lam x^2 + 3 delta x``."""
        return Poly((0, 3 * self.delta, -3 * self.lam, 1))


def bc1_build(inst: BC1Instance) -> HeunParams:
    """``4 P d^2 + 6(1+2mu)(x^2 - 2 lam x + delta) d - 2n(2n+1+6mu)(x - lam)``, ``P = x^3 - 3 lam x^2 + 3 delta x``."""
    lam, de, mu, n = inst.lam, inst.delta, inst.mu, inst.n
    b = 6 * (1 + 2 * mu)
    c = -2 * n * (2 * n + 1 + 6 * mu)
    return HeunParams(a0=-4, a1=12 * lam, a2=-12 * de,
                      b0=b, b1=-2 * lam * b, b2=de * b,
                      c0=c, c1=-lam * c)


def bc1_sl2_form(inst: BC1Instance, j_plus_coefficient=None) -> DiffOp:
    """The BC1 operator assembled from sl(2) generators with spin ``n/2``.

    The default ``J+`` coefficient is ``2(3n + 1 + 6mu)``, the value that
    reproduces :func:`bc1_build`; pass another value to test alternatives.
    """
    lam, de, mu, n = inst.lam, inst.delta, inst.mu, inst.n
    jm, j0, jp = differential_generators(Fraction(n, 2))
    cp = 2 * (3 * n + 1 + 6 * mu) if j_plus_coefficient is None else Q(j_plus_coefficient)
    return (jp * j0 * 4 - j0 * j0 * (12 * lam) + j0 * jm * (12 * de)
            + jp * cp - j0 * (12 * lam * (n + 2 * mu)) + jm * (6 * de * (n + 1 + 2 * mu))
            + lam * n * (n + 2))


def bc1_sl2_residual(inst: BC1Instance, j_plus_coefficient=None) -> DiffOp:
    return bc1_sl2_form(inst, j_plus_coefficient) - heun_operator(bc1_build(inst))


def bc1_sl2_identity(inst: BC1Instance, j_plus_coefficient=None) -> bool:
    return bc1_sl2_residual(inst, j_plus_coefficient).is_zero()


def second_derivative(f, t: float, radius: float, points: int = 64) -> float:
    """``f''(t)`` for ``f`` analytic on a disc of radius > ``radius`` about real ``t``.

    Trapezoidal rule on the Cauchy integral over a circle: the error decays
    geometrically in ``points`` and rounding is amplified only by ``1/radius^2``.
    """
    theta = 2 * np.pi * np.arange(points) / points
    zs = t + radius * np.exp(1j * theta)
    vals = np.array([f(complex(z)) for z in zs])
    return float(np.real(np.sum(vals * np.exp(-2j * theta))) * 2 / (points * radius**2))


@dataclass(frozen=True)
class BC1Residual:
    eigenvalues: list  # QES eigenvalues eps of h (real ones used)
    energies: list  # -eps/2
    offsets: list  # fitted additive constant per eigenpair
    max_residual: float
    samples: list


def bc1_schrodinger_residual(inst: BC1Instance, tau_samples, max_radius: float = 0.2) -> BC1Residual:
    """Transport every real QES eigenpair of :func:`bc1_build` to the elliptic Hamiltonian.

    ``Psi(tau) = P(x)^(mu/2) phi(x)`` with ``x = P(tau) + lam``.  For each pair the
    constant offset between ``H Psi`` and ``(-eps/2) Psi`` is fitted at the first
    sample and the residual ``|H Psi - (E + offset) Psi|`` is maximized over the rest.
    ``Psi''`` is taken numerically on a circle that stays clear of the pole at 0
    and of the half-period, where ``P(x)`` vanishes.  Samples must lie in
    ``(0, w)`` with ``w`` the real half-period.
    """
    tau_samples = [float(t) for t in tau_samples]
    if len(tau_samples) < 2:
        raise DomainError("need at least two tau samples")
    h = bc1_build(inst)
    try:
        qes = qes_solve(h, inst.n)
    except DomainError as exc:
        raise DomainError(f"no QES sector: {exc}") from exc
    inv = inst.invariants
    lam, mu, n = float(inst.lam), float(inst.mu), inst.n
    cubic = inst.cubic
    c_dup = 2 * mu * (mu - 1)
    c_one = (2 * n + 1 + 2 * mu) * (n + 2 * mu)
    w = real_half_period(inv)
    if not all(0 < t < w for t in tau_samples):
        raise DomainError("tau samples must lie strictly inside the real half-period")

    eps_used, energies, offsets, worst = [], [], [], 0.0
    for eps, vec in zip(qes.eigenvalues, qes.eigenvectors):
        if abs(eps.imag) > 1e-9 * max(1.0, abs(eps.real)):
            continue
        phi = np.poly1d([float(np.real(c)) for c in vec][::-1])

        def psi(t, phi=phi):
            x = weierstrass_p(t, inv)[0] + lam
            return complex(cubic(x)) ** (mu / 2) * phi(x)

        def h_psi(t):
            radius = min(max_radius, 0.5 * t, 0.5 * (w - t))
            pot = c_dup * weierstrass_p(2 * t, inv)[0] + c_one * weierstrass_p(t, inv)[0]
            return -0.5 * second_derivative(psi, t, radius) + pot * psi(t).real

        energy = -eps.real / 2
        t0 = tau_samples[0]
        offset = (h_psi(t0) - energy * psi(t0).real) / psi(t0).real
        for t in tau_samples[1:]:
            worst = max(worst, abs(h_psi(t) - (energy + offset) * psi(t).real))
        eps_used.append(eps.real)
        energies.append(energy)
        offsets.append(offset)
    if not eps_used:
        raise DomainError("no QES sector: the block has no real eigenvalues")
    return BC1Residual(eps_used, energies, offsets, worst, tau_samples)


def default_tau_samples(inst: BC1Instance, count: int = 24) -> list[float]:
    """Points in the middle of the real half-period, away from the pole at 0."""
    w = real_half_period(inst.invariants)
    return list(np.linspace(0.45 * w, 0.95 * w, count))
