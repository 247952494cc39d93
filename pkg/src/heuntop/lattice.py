"""Shift- and dilation-lattice Heun operators and polynomial isospectrality."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from typing import Callable

from .algebra import Poly, Q
from .errors import DomainError
from .heun import HeunParams, band_action, char_poly, heun_to_top, _require_invariant
from .sl2 import (BasisOperator, identity, make_differential, make_dilation, make_shift, q_factorial, q_number,
                  quasi_monomial, to_quasi_basis, top_hamiltonian)

SHIFTS = (-3, -2, -1, 0, 1)


class ShiftOperator:
    """``sum_j A_j(x) T_{j delta}`` with exact polynomial coefficients."""

    def __init__(self, delta, terms: dict | None = None):
        self.delta = Q(delta)
        self.terms = {j: p for j, p in sorted((terms or {}).items()) if not p.is_zero()}

    @classmethod
    def shift(cls, delta, j: int = 1) -> "ShiftOperator":
        return cls(delta, {j: Poly.const(1)})

    @classmethod
    def mult(cls, delta, p) -> "ShiftOperator":
        return cls(delta, {0: p if isinstance(p, Poly) else Poly.const(p)})

    def __add__(self, other):
        if not isinstance(other, ShiftOperator):
            other = ShiftOperator.mult(self.delta, Q(other))
        out = dict(self.terms)
        for j, p in other.terms.items():
            out[j] = out.get(j, Poly()) + p
        return ShiftOperator(self.delta, out)

    __radd__ = __add__

    def __neg__(self):
        return self * -1

    def __sub__(self, other):
        return self + (-other if isinstance(other, ShiftOperator) else -Q(other))

    def __mul__(self, other):
        if not isinstance(other, ShiftOperator):
            c = Q(other)
            return ShiftOperator(self.delta, {j: p * c for j, p in self.terms.items()})
        # A(x) T_i B(x) T_j = A(x) B(x + i delta) T_{i+j}
        out: dict[int, Poly] = {}
        for i, a in self.terms.items():
            for j, b in other.terms.items():
                out[i + j] = out.get(i + j, Poly()) + a * b.shift(i * self.delta)
        return ShiftOperator(self.delta, out)

    def __rmul__(self, other):
        return self * other

    def __call__(self, f: Poly) -> Poly:
        out = Poly()
        for j, a in self.terms.items():
            out = out + a * f.shift(j * self.delta)
        return out


@dataclass(frozen=True)
class Stencil:
    """Five-point lattice operator ``H f(x) = sum_j A_j(x) f(x + j delta)``, ``j = -3..1``."""

    delta: Fraction
    coeffs: tuple  # Polys A_{-3}, A_{-2}, A_{-1}, A_0, A_{+1}

    def coeff(self, j: int) -> Poly:
        return self.coeffs[j + 3]

    def apply_poly(self, f: Poly) -> Poly:
        out = Poly()
        for j, a in zip(SHIFTS, self.coeffs):
            out = out + a * f.shift(j * self.delta)
        return out


def derive_stencil(h: HeunParams, delta) -> Stencil:
    """Substitute ``x -> x T_{-delta}`` and ``d -> (T_delta - 1)/delta`` into the Heun operator."""
    delta = Q(delta)
    if delta == 0:
        raise DomainError("zero spacing")
    xd = ShiftOperator(delta, {-1: Poly.x()})
    dd = (ShiftOperator.shift(delta, 1) - 1) * (1 / delta)
    xd2 = xd * xd
    xd3 = xd2 * xd
    op = (-(xd3 * h.a0 + xd2 * h.a1 + xd * h.a2) * (dd * dd)
          + (xd2 * h.b0 + xd * h.b1 + h.b2) * dd
          + xd * h.c0 + h.c1)
    if any(j not in SHIFTS for j in op.terms):
        raise AssertionError(f"unexpected shift range {sorted(op.terms)}")
    return Stencil(delta, tuple(op.terms.get(j, Poly()) for j in SHIFTS))


def apply_stencil(s: Stencil, samples: Callable[[float], float], x0: float) -> float:
    d = float(s.delta)
    return sum(a(float(x0)) * samples(x0 + j * d) for j, a in zip(SHIFTS, s.coeffs))


def isospectral_map_shift(phi: Poly, delta) -> Poly:
    """``sum a_k x^k -> sum a_k x^(k)`` re-expanded in monomials."""
    delta = Q(delta)
    out = Poly()
    for k, a in enumerate(phi.coeffs):
        if a:
            out = out + quasi_monomial(k, delta) * a
    return out


def q_rescale_factors(n: int, q) -> list[Fraction]:
    """``k! / {k}_q!`` for ``k = 0..n``."""
    q = Q(q)
    return [Fraction(factorial(k)) / q_factorial(k, q) for k in range(n + 1)]


def isospectral_map_q(phi: Poly, q) -> Poly:
    q = Q(q)
    if q in (0, 1):
        raise DomainError(f"invalid q = {q}: must differ from 0 and 1")
    return Poly(a * f for a, f in zip(phi.coeffs, q_rescale_factors(phi.degree, q)))


@dataclass(frozen=True)
class QuasiMonomialBasis:
    """``x^(0), .., x^(degree)`` for spacing ``delta``."""

    delta: Fraction
    degree: int

    def __post_init__(self):
        object.__setattr__(self, "delta", Q(self.delta))
        if self.degree < 0:
            raise DomainError("degree must be >= 0")

    def element(self, k: int) -> Poly:
        return quasi_monomial(k, self.delta)

    def to_monomial(self) -> list[list[Fraction]]:
        """Column ``k`` holds the monomial coefficients of ``x^(k)``; unit upper triangular."""
        size = self.degree + 1
        return [[self.element(k)[i] for k in range(size)] for i in range(size)]

    def from_monomial(self) -> list[list[Fraction]]:
        """Column ``k`` holds the quasi-monomial coordinates of ``x^k``; unit upper triangular."""
        size = self.degree + 1
        cols = [to_quasi_basis(Poly.monomial(k), self.delta) for k in range(size)]
        return [[cols[k].get(i, Fraction(0)) for k in range(size)] for i in range(size)]


@dataclass(frozen=True)
class QFactorialTable:
    q: Fraction
    numbers: tuple
    factorials: tuple

    @classmethod
    def build(cls, q, n: int) -> "QFactorialTable":
        q = Q(q)
        nums = tuple(q_number(k, q) for k in range(n + 1))
        facts = [Fraction(1)]
        for k in range(1, n + 1):
            facts.append(facts[-1] * nums[k])
        return cls(q, nums, tuple(facts))


# ---------------------------------------------------------------------------
# Isospectrality
# ---------------------------------------------------------------------------

def _realization_block(h: HeunParams, n: int, gen) -> list[list[Fraction]]:
    """Block of the top with ``top_to_heun = h`` (``c1`` restored) on the first ``n+1`` basis vectors."""
    nu = Fraction(n, 2)
    top = heun_to_top(h, nu)
    # the top carries -nu*B0 as constant; restore the requested c1
    shift = h.c1 + nu * top.B_0
    op = top_hamiltonian(gen, top) + shift
    for k in range(n + 1):
        if any(i > n for i in op.column(k)):
            raise AssertionError(f"{gen.kind} block not invariant at k={k}")
    return op.matrix(n + 1)


def _adjugate_last_column(block, n: int) -> list[Poly]:
    """Column ``n`` of ``adj(M - eps)`` for tridiagonal ``M``; entries are polynomials in eps."""
    eps = Poly.x()
    # theta[i] = det of the leading i x i block of (M - eps); theta[0] = 1
    theta = [Poly.const(1), Poly.const(block[0][0]) - eps]
    for k in range(1, n + 1):
        theta.append((Poly.const(block[k][k]) - eps) * theta[k]
                     - theta[k - 1] * (block[k - 1][k] * block[k][k - 1]))
    col = []
    for i in range(n + 1):
        prod = Fraction(1)
        for j in range(i, n):
            prod *= block[j][j + 1]
        col.append(theta[i] * (prod * (-1) ** (i + n)))
    return col


def _reduce(p: Poly, modulus: Poly) -> Poly:
    return p % modulus if modulus.degree > 0 else Poly()


@dataclass(frozen=True)
class IsospectralityReport:
    n: int
    delta: Fraction
    q: Fraction
    char_poly: Poly
    shift_block_identical: bool
    dilation_block_conjugate: bool
    shift_eigenrelation: bool
    dilation_eigenrelation: bool
    eigenvector_nontrivial: bool

    @property
    def ok(self) -> bool:
        return (self.shift_block_identical and self.dilation_block_conjugate and self.shift_eigenrelation
                and self.dilation_eigenrelation and self.eigenvector_nontrivial)


def isospectrality_check(h: HeunParams, n: int, delta, q) -> IsospectralityReport:
    """Compare the ``P_n`` blocks of the three realizations and transport the eigenvector.

    The eigenvector of the differential block is taken generically, as
    polynomials in the spectral variable ``eps`` (an adjugate column); all
    eigen-relations are then checked modulo the characteristic polynomial,
    which is exact for every root at once.
    """
    delta, q = Q(delta), Q(q)
    bands = band_action(h)
    _require_invariant(bands, n)
    nu = Fraction(n, 2)
    diff_block = bands.block(n)
    if _realization_block(h, n, make_differential(nu)) != diff_block:
        raise AssertionError("differential realization disagrees with band action")
    shift_block = _realization_block(h, n, make_shift(nu, delta))
    dil_block = _realization_block(h, n, make_dilation(nu, q))
    s = q_rescale_factors(n, q)
    conj = all(dil_block[i][j] == s[i] * diff_block[i][j] / s[j] for i in range(n + 1) for j in range(n + 1))

    cp = char_poly(bands, n)
    alpha = [_reduce(c, cp) for c in _adjugate_last_column(diff_block, n)]
    nontrivial = any(not a.is_zero() for a in alpha)
    eps = Poly.x()

    # shift lattice: apply the five-point operator to sum alpha_k x^(k)
    stencil = derive_stencil(h, delta) if delta != 0 else None
    images = [stencil.apply_poly(quasi_monomial(k, delta)) if stencil else None for k in range(n + 1)]
    shift_ok = True
    if stencil is not None:
        # residual_coeffs[i] in Q[eps]: coefficient of x^i of H phi_delta - eps phi_delta
        width = n + 2
        resid = [Poly() for _ in range(width)]
        for k in range(n + 1):
            img = images[k]
            for i, c in enumerate(img.coeffs):
                if i >= width:
                    resid.extend(Poly() for _ in range(i - width + 1))
                    width = i + 1
                resid[i] = resid[i] + alpha[k] * c
            for i, c in enumerate(quasi_monomial(k, delta).coeffs):
                resid[i] = resid[i] - alpha[k] * eps * c
        shift_ok = all(_reduce(r, cp).is_zero() for r in resid)

    # dilation: apply the dilation top to sum alpha_k (k!/{k}_q!) x^k
    dil = make_dilation(nu, q)
    top = heun_to_top(h, nu)
    hd = top_hamiltonian(dil, top) + (h.c1 + nu * top.B_0)
    resid = [Poly() for _ in range(n + 2)]
    for k in range(n + 1):
        for i, c in hd.column(k).items():
            resid[i] = resid[i] + alpha[k] * (s[k] * c)
        resid[k] = resid[k] - alpha[k] * eps * s[k]
    dil_ok = all(_reduce(r, cp).is_zero() for r in resid)

    return IsospectralityReport(n, delta, q, cp, shift_block == diff_block, conj, shift_ok, dil_ok, nontrivial)


def realized_heun(h: HeunParams, gen) -> "BasisOperator":
    """Substitute the canonical pair ``(D, X)`` of ``gen`` into the Heun normal form."""
    d, x = gen.d_op, gen.x_op
    x2 = x * x
    return (-(x2 * x * h.a0 + x2 * h.a1 + x * h.a2) * (d * d)
            + (x2 * h.b0 + x * h.b1 + identity() * h.b2) * d
            + x * h.c0 + identity() * h.c1)


def stencil_matches_composition(h: HeunParams, delta, polys) -> bool:
    """Stencil applied pointwise vs. the shift pair acting on quasi-monomial coordinates."""
    delta = Q(delta)
    s = derive_stencil(h, delta)
    gen = make_shift(0, delta)
    hs = realized_heun(h, gen)
    for p in polys:
        if s.apply_poly(p) != gen.to_poly(hs(gen.from_poly(p))):
            return False
    return True
