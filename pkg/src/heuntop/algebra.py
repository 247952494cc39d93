"""Exact polynomial, rational-function and differential-operator arithmetic.

Scalars are :class:`fractions.Fraction`.  Polynomials are dense, indexed by
degree, and always stored without trailing zeros.  A :class:`DiffOp` is kept
normal-ordered: every term is ``p_j(x) * d^j`` with multiplication to the
left of differentiation.
"""
from __future__ import annotations

from fractions import Fraction
from math import comb, isqrt
from numbers import Rational as _RationalABC
from typing import Iterable, Mapping

Rational = Fraction


def Q(value) -> Fraction:
    """Coerce ``value`` (int, Fraction, ``"p/q"`` string or decimal string) to a Fraction.

    Floats are rejected: exact inputs must not silently pick up binary rounding.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, (int, _RationalABC)):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"not a rational: {value!r}") from exc
    raise TypeError(f"cannot convert {type(value).__name__} to an exact rational")


def format_rational(r: Fraction) -> str:
    r = Q(r)
    return str(r.numerator) if r.denominator == 1 else f"{r.numerator}/{r.denominator}"


def exact_sqrt(r: Fraction) -> Fraction | None:
    """Square root of a non-negative rational if it is rational, else None."""
    if r < 0:
        return None
    n, d = isqrt(r.numerator), isqrt(r.denominator)
    if n * n == r.numerator and d * d == r.denominator:
        return Fraction(n, d)
    return None


def quadratic_roots(a, b, c) -> tuple[list[Fraction], list[float]]:
    """Roots of ``a t^2 + b t + c`` (``a`` may be zero).

    Returns ``(exact, approximate)``: rational roots, and float approximations
    of real irrational roots.  Complex roots are dropped.
    """
    a, b, c = Q(a), Q(b), Q(c)
    if a == 0:
        if b == 0:
            return [], []
        return [-c / b], []
    disc = b * b - 4 * a * c
    if disc < 0:
        return [], []
    s = exact_sqrt(disc)
    if s is not None:
        roots = sorted({(-b - s) / (2 * a), (-b + s) / (2 * a)})
        return roots, []
    sf = float(disc) ** 0.5
    approx = sorted(((-float(b) - sf) / (2 * float(a)), (-float(b) + sf) / (2 * float(a))))
    return [], approx


class Poly:
    """Dense univariate polynomial with exact rational coefficients."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        cs = [Q(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs: tuple[Fraction, ...] = tuple(cs)

    @classmethod
    def x(cls) -> "Poly":
        return cls((0, 1))

    @classmethod
    def const(cls, c) -> "Poly":
        return cls((c,))

    @classmethod
    def monomial(cls, k: int, c=1) -> "Poly":
        return cls([0] * k + [c])

    @classmethod
    def from_roots(cls, roots) -> "Poly":
        p = cls.const(1)
        for r in roots:
            p = p * cls((-Q(r), 1))
        return p

    @property
    def degree(self) -> int:
        """Degree; the zero polynomial has degree -1."""
        return len(self.coeffs) - 1

    @property
    def lc(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def is_zero(self) -> bool:
        return not self.coeffs

    def __getitem__(self, k: int) -> Fraction:
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else Fraction(0)

    def __iter__(self):
        return iter(self.coeffs)

    def __len__(self):
        return len(self.coeffs)

    def __bool__(self):
        return bool(self.coeffs)

    @staticmethod
    def _coerce(other) -> "Poly | None":
        if isinstance(other, Poly):
            return other
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return Poly((other,))
        return None

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self.coeffs == o.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        n = max(len(self.coeffs), len(o.coeffs))
        return Poly(self[i] + o[i] for i in range(n))

    __radd__ = __add__

    def __neg__(self):
        return Poly(-c for c in self.coeffs)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            c = Q(other)
            return Poly(c * a for a in self.coeffs)
        if not isinstance(other, Poly):
            return NotImplemented
        if not self.coeffs or not other.coeffs:
            return Poly()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return Poly(out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power")
        result, base = Poly.const(1), self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __call__(self, x):
        """Evaluate by Horner's rule; ``x`` may be a number or another Poly."""
        acc = Poly() if isinstance(x, Poly) else 0
        for c in reversed(self.coeffs):
            acc = acc * x + (c if isinstance(x, (Poly, Fraction, int)) else _to_num(c, x))
        return acc

    def derivative(self, k: int = 1) -> "Poly":
        p = self
        for _ in range(k):
            p = Poly(i * c for i, c in enumerate(p.coeffs) if i > 0)
        return p

    def shift(self, c) -> "Poly":
        """Return ``p(x + c)``."""
        return self(Poly((Q(c), 1)))

    def scale_arg(self, s) -> "Poly":
        """Return ``p(s * x)``."""
        s = Q(s)
        return Poly(c * s**i for i, c in enumerate(self.coeffs))

    def divmod(self, other: "Poly") -> tuple["Poly", "Poly"]:
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dq = other.degree
        if self.degree < dq:
            return Poly(), self
        quo = [Fraction(0)] * (self.degree - dq + 1)
        inv = 1 / other.lc
        for i in range(self.degree - dq, -1, -1):
            c = rem[i + dq] * inv
            quo[i] = c
            if c:
                for j, b in enumerate(other.coeffs):
                    rem[i + j] -= c * b
        return Poly(quo), Poly(rem[:dq])

    def __floordiv__(self, other):
        return self.divmod(other)[0]

    def __mod__(self, other):
        return self.divmod(other)[1]

    def monic(self) -> "Poly":
        return self * (1 / self.lc) if self.coeffs else self

    def gcd(self, other: "Poly") -> "Poly":
        a, b = self, other
        while b:
            a, b = b, a % b
        return a.monic()

    def to_floats(self) -> list[float]:
        return [float(c) for c in self.coeffs]

    def __repr__(self):
        return f"Poly({[format_rational(c) for c in self.coeffs]})"

    def __str__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for k in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[k]
            if not c:
                continue
            mono = "" if k == 0 else ("x" if k == 1 else f"x^{k}")
            if mono and abs(c) == 1:
                term = mono
            else:
                term = format_rational(abs(c)) + ("*" + mono if mono else "")
            sign = "-" if c < 0 else "+"
            parts.append((sign, term))
        head = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        return head + "".join(f" {s} {t}" for s, t in parts[1:])


def _to_num(c: Fraction, like):
    if isinstance(like, complex):
        return complex(c)
    return float(c)


def poly_arith(a: Poly, b: Poly | None, op: str) -> Poly:
    """``op`` is one of ``"add"``, ``"mul"``, ``"derivative"`` (which ignores ``b``)."""
    if op == "add":
        return a + b
    if op == "mul":
        return a * b
    if op == "derivative":
        return a.derivative()
    raise ValueError(f"unknown polynomial op {op!r}")


class RationalFn:
    """Quotient of polynomials in lowest terms with a monic denominator."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=None):
        num = num if isinstance(num, Poly) else Poly.const(num)
        den = Poly.const(1) if den is None else (den if isinstance(den, Poly) else Poly.const(den))
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        if num.is_zero():
            self.num, self.den = Poly(), Poly.const(1)
            return
        g = num.gcd(den)
        num, den = num // g, den // g
        s = 1 / den.lc
        self.num, self.den = num * s, den * s

    def normalized(self) -> "RationalFn":
        return RationalFn(self.num, self.den)

    @staticmethod
    def _coerce(other):
        if isinstance(other, RationalFn):
            return other
        if isinstance(other, Poly) or (isinstance(other, (int, Fraction)) and not isinstance(other, bool)):
            return RationalFn(other)
        return None

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self.num == o.num and self.den == o.den

    def __hash__(self):
        return hash((self.num, self.den))

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return RationalFn(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return RationalFn(-self.num, self.den)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return RationalFn(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if o.num.is_zero():
            raise ZeroDivisionError("division by zero rational function")
        return RationalFn(self.num * o.den, self.den * o.num)

    def derivative(self) -> "RationalFn":
        return RationalFn(self.num.derivative() * self.den - self.num * self.den.derivative(),
                          self.den * self.den)

    def is_polynomial(self) -> bool:
        return self.den.degree == 0

    def __call__(self, x):
        return self.num(x) / self.den(x)

    def __repr__(self):
        return f"RationalFn(({self.num}) / ({self.den}))"


class DiffOp:
    """Normal-ordered linear differential operator ``sum_j p_j(x) d^j``."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[int, Poly] | Iterable[tuple[int, Poly]] = ()):
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict[int, Poly] = {}
        for j, p in items:
            if j < 0:
                raise ValueError("negative derivative order")
            p = p if isinstance(p, Poly) else Poly.const(p)
            acc[j] = acc.get(j, Poly()) + p
        self.terms: dict[int, Poly] = {j: acc[j] for j in sorted(acc) if acc[j]}

    @classmethod
    def d(cls, k: int = 1) -> "DiffOp":
        return cls({k: Poly.const(1)})

    @classmethod
    def mult(cls, p) -> "DiffOp":
        return cls({0: p if isinstance(p, Poly) else Poly.const(p)})

    @classmethod
    def x(cls) -> "DiffOp":
        return cls.mult(Poly.x())

    @property
    def order(self) -> int:
        return max(self.terms, default=-1)

    def coeff(self, j: int) -> Poly:
        return self.terms.get(j, Poly())

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other):
        if isinstance(other, (int, Fraction, Poly)) and not isinstance(other, bool):
            other = DiffOp.mult(other)
        if not isinstance(other, DiffOp):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(tuple(self.terms.items()))

    @staticmethod
    def _coerce(other):
        if isinstance(other, DiffOp):
            return other
        if isinstance(other, Poly) or (isinstance(other, (int, Fraction)) and not isinstance(other, bool)):
            return DiffOp.mult(other)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return DiffOp(list(self.terms.items()) + list(o.terms.items()))

    __radd__ = __add__

    def __neg__(self):
        return DiffOp({j: -p for j, p in self.terms.items()})

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        """Composition ``self o other``; scalars and polynomials act as multiplication operators."""
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return op_compose(self, o)

    def __rmul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return op_compose(o, self)

    def __pow__(self, k: int):
        result = DiffOp.mult(1)
        for _ in range(k):
            result = result * self
        return result

    def __call__(self, f: Poly) -> Poly:
        return op_apply(self, f)

    def __repr__(self):
        if not self.terms:
            return "DiffOp(0)"
        parts = []
        for j, p in self.terms.items():
            d = "" if j == 0 else ("d" if j == 1 else f"d^{j}")
            parts.append(f"({p}){d}")
        return "DiffOp(" + " + ".join(parts) + ")"


def op_compose(a: DiffOp, b: DiffOp) -> DiffOp:
    """Normal-ordered product, using ``d^i q = sum_k C(i,k) q^(k) d^(i-k)``."""
    out: list[tuple[int, Poly]] = []
    for i, p in a.terms.items():
        for j, q in b.terms.items():
            dq = q
            for k in range(i + 1):
                if dq.is_zero():
                    break
                out.append((i - k + j, p * dq * comb(i, k)))
                dq = dq.derivative()
    return DiffOp(out)


def op_apply(op: DiffOp, f: Poly) -> Poly:
    result = Poly()
    for j, p in op.terms.items():
        result = result + p * f.derivative(j)
    return result


def op_commutator(a: DiffOp, b: DiffOp) -> DiffOp:
    return op_compose(a, b) - op_compose(b, a)
