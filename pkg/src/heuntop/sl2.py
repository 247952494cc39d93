"""sl(2,R) generators in three realizations and the Euler-Arnold top built from them.

Every realization is given by a canonical pair ``(D, X)`` with ``[D, X] = 1``
on the graded basis, and the generators are always

    J- = D,    J0 = X D - nu,    J+ = X (X D - 2 nu).

The pairs are

* differential: ``D = d/dx``, ``X = x``, basis ``x^k``;
* shift: ``D`` the forward (Norlund) difference, ``X = x T_{-delta}``,
  basis the quasi-monomials ``x^(k) = x (x - delta) ... (x - (k-1) delta)``;
* dilation: ``D`` the Jackson derivative, ``X = x_q``, basis ``x^k``.

Operators are represented by their exact action on basis index ``k``.  For
the shift and Jackson pairs the action is computed by applying the genuine
lattice operator to a polynomial and re-expanding the image, so the
structure constants are derived here and are not hard-coded.
"""
from __future__ import annotations

from dataclasses import dataclass, fields
from fractions import Fraction
from functools import lru_cache
from typing import Callable

from .algebra import DiffOp, Poly, Q
from .errors import DomainError

Vector = dict  # sparse basis vector: index -> Fraction


def _clean(v: dict) -> dict:
    return {k: c for k, c in sorted(v.items()) if c}


def _axpy(out: dict, a, v: dict):
    for k, c in v.items():
        out[k] = out.get(k, 0) + a * c


class BasisOperator:
    """Linear operator given by its action on a graded basis.

    ``action(k)`` returns the image of basis element ``k`` as a sparse dict.
    Sums, scalar multiples and compositions build new operators lazily; every
    column is cached on first use.
    """

    def __init__(self, action: Callable[[int], dict], name: str = ""):
        self._action = lru_cache(maxsize=None)(lambda k: _clean(action(k)))
        self.name = name

    def column(self, k: int) -> dict:
        return dict(self._action(k))

    def __call__(self, v: dict) -> dict:
        out: dict = {}
        for k, c in v.items():
            if c:
                _axpy(out, c, self._action(k))
        return _clean(out)

    def __add__(self, other):
        if not isinstance(other, BasisOperator):
            other = identity() * Q(other)

        def act(k, a=self, b=other):
            out = a.column(k)
            _axpy(out, 1, b.column(k))
            return out

        return BasisOperator(act, f"({self.name} + {other.name})")

    __radd__ = __add__

    def __neg__(self):
        return self * -1

    def __sub__(self, other):
        if not isinstance(other, BasisOperator):
            other = identity() * Q(other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, BasisOperator):
            return BasisOperator(lambda k, a=self, b=other: a(b.column(k)),
                                 f"{self.name}{other.name}")
        c = Q(other)
        return BasisOperator(lambda k, a=self: {i: c * v for i, v in a.column(k).items()},
                             f"{c}*{self.name}")

    def __rmul__(self, other):
        c = Q(other)
        return self * c

    def matrix(self, size: int) -> list[list[Fraction]]:
        """Leading ``size x size`` block: ``M[i][j]`` = coefficient of basis ``i`` in the image of ``j``."""
        m = [[Fraction(0)] * size for _ in range(size)]
        for j in range(size):
            for i, c in self._action(j).items():
                if i < size:
                    m[i][j] = c
        return m

    def equals_on(self, other: "BasisOperator", max_degree: int) -> bool:
        return all(self.column(k) == other.column(k) for k in range(max_degree + 1))

    def __repr__(self):
        return f"BasisOperator({self.name or '?'})"


def identity() -> BasisOperator:
    return BasisOperator(lambda k: {k: Fraction(1)}, "1")


def commutator(a: BasisOperator, b: BasisOperator) -> BasisOperator:
    return a * b - b * a


# ---------------------------------------------------------------------------
# Bases and lattice primitives
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def quasi_monomial(k: int, delta: Fraction) -> Poly:
    """``x^(k) = x (x - delta) ... (x - (k-1) delta)``."""
    return Poly.from_roots([j * delta for j in range(k)])


def to_quasi_basis(p: Poly, delta: Fraction) -> dict:
    """Coordinates of ``p`` in the quasi-monomial basis (unitriangular solve)."""
    out = {}
    rem = p
    while not rem.is_zero():
        d = rem.degree
        c = rem.lc
        out[d] = c
        rem = rem - quasi_monomial(d, delta) * c
    return _clean(out)


def from_quasi_basis(coords: dict, delta: Fraction) -> Poly:
    p = Poly()
    for k, c in coords.items():
        p = p + quasi_monomial(k, delta) * c
    return p


def poly_to_vector(p: Poly) -> dict:
    return {k: c for k, c in enumerate(p.coeffs) if c}


def vector_to_poly(v: dict) -> Poly:
    if not v:
        return Poly()
    cs = [Fraction(0)] * (max(v) + 1)
    for k, c in v.items():
        cs[k] = c
    return Poly(cs)


def norlund_derivative(f: Poly, delta: Fraction) -> Poly:
    """``(f(x + delta) - f(x)) / delta``."""
    return (f.shift(delta) - f) * (1 / delta)


def lattice_x(f: Poly, delta: Fraction) -> Poly:
    """``x f(x - delta)``."""
    return Poly.x() * f.shift(-delta)


def q_number(n: int, q) -> Fraction:
    """``{n}_q = (1 - q^n)/(1 - q) = 1 + q + ... + q^(n-1)`` (for integer n >= 0)."""
    q = Q(q)
    return sum((q**i for i in range(n)), Fraction(0))


def q_factorial(n: int, q) -> Fraction:
    out = Fraction(1)
    for k in range(1, n + 1):
        out *= q_number(k, q)
    return out


def jackson_derivative(f: Poly, q: Fraction) -> Poly:
    """``(f(q x) - f(x)) / ((q - 1) x)``; exact division since the numerator vanishes at 0."""
    num = f.scale_arg(q) - f
    quo, rem = num.divmod(Poly.x())
    assert rem.is_zero()
    return quo * (1 / (q - 1))


# ---------------------------------------------------------------------------
# Realizations
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GeneratorTriple:
    j_minus: BasisOperator
    j_zero: BasisOperator
    j_plus: BasisOperator
    nu: Fraction
    kind: str  # "differential" | "shift" | "dilation"
    param: Fraction | None = None  # delta or q
    d_op: BasisOperator | None = None  # canonical pair (D, X)
    x_op: BasisOperator | None = None

    @property
    def basis(self) -> str:
        return "quasi-monomial" if self.kind == "shift" else "monomial"

    def to_poly(self, coords: dict) -> Poly:
        """Realize a basis vector as a polynomial in ``x``."""
        if self.kind == "shift":
            return from_quasi_basis(coords, self.param)
        return vector_to_poly(coords)

    def from_poly(self, p: Poly) -> dict:
        if self.kind == "shift":
            return to_quasi_basis(p, self.param)
        return poly_to_vector(p)


def _triple(d_op: BasisOperator, x_op: BasisOperator, nu: Fraction, kind, param=None) -> GeneratorTriple:
    one = identity()
    j0 = x_op * d_op - one * nu
    jp = x_op * (x_op * d_op - one * (2 * nu))
    j0.name, jp.name = "J0", "J+"
    jm = d_op * 1
    jm.name = "J-"
    return GeneratorTriple(jm, j0, jp, nu, kind, param, d_op, x_op)


def make_differential(nu) -> GeneratorTriple:
    nu = Q(nu)
    dd, xx = DiffOp.d(), DiffOp.x()
    d_op = BasisOperator(lambda k: poly_to_vector(dd(Poly.monomial(k))))
    x_op = BasisOperator(lambda k: poly_to_vector(xx(Poly.monomial(k))))
    return _triple(d_op, x_op, nu, "differential")


def make_shift(nu, delta) -> GeneratorTriple:
    """Shift-lattice realization; ``delta = 0`` falls back to the differential one."""
    nu, delta = Q(nu), Q(delta)
    if delta == 0:
        return make_differential(nu)
    d_op = BasisOperator(lambda k: to_quasi_basis(norlund_derivative(quasi_monomial(k, delta), delta), delta))
    x_op = BasisOperator(lambda k: to_quasi_basis(lattice_x(quasi_monomial(k, delta), delta), delta))
    return _triple(d_op, x_op, nu, "shift", delta)


def make_dilation(nu, q) -> GeneratorTriple:
    nu, q = Q(nu), Q(q)
    if q in (0, 1):
        raise DomainError(f"invalid q = {q}: must differ from 0 and 1")
    d_op = BasisOperator(lambda k: poly_to_vector(jackson_derivative(Poly.monomial(k), q)))
    # x_q is pseudodifferential; only its monomial action exists
    x_op = BasisOperator(lambda k: {k + 1: Fraction(k + 1) / q_number(k + 1, q)})
    return _triple(d_op, x_op, nu, "dilation", q)


def differential_generators(nu) -> tuple[DiffOp, DiffOp, DiffOp]:
    """``(J-, J0, J+)`` as explicit differential operators."""
    nu = Q(nu)
    x, d = Poly.x(), DiffOp.d()
    j_minus = d
    j_zero = DiffOp({1: x, 0: Poly.const(-nu)})
    j_plus = DiffOp({1: x * x, 0: x * (-2 * nu)})
    return j_minus, j_zero, j_plus


# ---------------------------------------------------------------------------
# The top
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TopParams:
    """Tensor of inertia, magnetic field and spin of the sl(2) top."""

    t_p0: Fraction = Fraction(0)
    t_pm: Fraction = Fraction(0)
    t_00: Fraction = Fraction(0)
    t_0m: Fraction = Fraction(0)
    B_p: Fraction = Fraction(0)
    B_0: Fraction = Fraction(0)
    B_m: Fraction = Fraction(0)
    nu: Fraction = Fraction(0)

    def __post_init__(self):
        for f in fields(self):
            object.__setattr__(self, f.name, Q(getattr(self, f.name)))

    def as_dict(self) -> dict:
        return {f.name: getattr(self, f.name) for f in fields(self)}


def _top_combination(jm, j0, jp, top: TopParams):
    return (jp * j0 * top.t_p0 + jp * jm * top.t_pm + j0 * j0 * top.t_00 + j0 * jm * top.t_0m
            + jp * top.B_p + j0 * top.B_0 + jm * top.B_m)


def top_hamiltonian(gen: GeneratorTriple, top: TopParams) -> BasisOperator:
    """``H = t+0 J+J0 + t+- J+J- + t00 J0J0 + t0- J0J- + B+ J+ + B0 J0 + B- J-`` on the basis of ``gen``.

    The spin of ``gen`` is used; ``top.nu`` is not consulted here.
    """
    h = _top_combination(gen.j_minus, gen.j_zero, gen.j_plus, top)
    h.name = "H"
    return h


def top_diffop(top: TopParams) -> DiffOp:
    """The top in the differential realization with spin ``top.nu``, expanded by composition."""
    jm, j0, jp = differential_generators(top.nu)
    return _top_combination(jm, j0, jp, top)


def casimir(gen: GeneratorTriple) -> BasisOperator:
    """``C2 = (J+J- + J-J+)/2 - J0 J0``."""
    jm, j0, jp = gen.j_minus, gen.j_zero, gen.j_plus
    return (jp * jm + jm * jp) * Fraction(1, 2) - j0 * j0


def casimir_residual(gen: GeneratorTriple, nu, max_degree: int) -> list[Fraction]:
    """Largest coefficient of ``(C2 + nu(nu+1)) e_k`` for each ``k <= max_degree``.

    All entries are exactly zero when the constraint holds.
    """
    if max_degree < 0:
        raise DomainError("max_degree must be >= 0")
    nu = Q(nu)
    op = casimir(gen) + nu * (nu + 1)
    out = []
    for k in range(max_degree + 1):
        col = op.column(k)
        out.append(max((abs(c) for c in col.values()), default=Fraction(0)))
    return out


def commutation_residuals(gen: GeneratorTriple, max_degree: int) -> dict[str, bool]:
    """Check ``[J0,J+] = J+``, ``[J0,J-] = -J-``, ``[J+,J-] = -2 J0`` exactly on degrees ``0..max_degree``."""
    jm, j0, jp = gen.j_minus, gen.j_zero, gen.j_plus
    return {
        "[J0,J+]=J+": commutator(j0, jp).equals_on(jp, max_degree),
        "[J0,J-]=-J-": commutator(j0, jm).equals_on(-jm, max_degree),
        "[J+,J-]=-2J0": commutator(jp, jm).equals_on(j0 * -2, max_degree),
    }
