"""The Heun operator

    H_e = -(a0 x^3 + a1 x^2 + a2 x) d^2 + (b0 x^2 + b1 x + b2) d + c0 x + c1

as data: band action on monomials, correspondence with the sl(2) top,
quasi-exactly-solvable blocks, factorization and gauge covariance.
"""
from __future__ import annotations

from dataclasses import dataclass, fields, replace
from fractions import Fraction

import numpy as np

from .algebra import DiffOp, Poly, Q, quadratic_roots
from .errors import DomainError, FactorizationError, NotInvariantError
from .sl2 import TopParams, differential_generators, top_diffop

_ZERO = Fraction(0)


@dataclass(frozen=True)
class HeunParams:
    a0: Fraction = _ZERO
    a1: Fraction = _ZERO
    a2: Fraction = _ZERO
    b0: Fraction = _ZERO
    b1: Fraction = _ZERO
    b2: Fraction = _ZERO
    c0: Fraction = _ZERO
    c1: Fraction = _ZERO

    def __post_init__(self):
        for f in fields(self):
            object.__setattr__(self, f.name, Q(getattr(self, f.name)))

    @property
    def p3(self) -> Poly:
        """``a0 x^3 + a1 x^2 + a2 x`` (the operator carries ``-p3`` in front of ``d^2``)."""
        return Poly((0, self.a2, self.a1, self.a0))

    @property
    def p2(self) -> Poly:
        return Poly((self.b2, self.b1, self.b0))

    @property
    def p1(self) -> Poly:
        return Poly((self.c1, self.c0))

    def scaled(self, s) -> "HeunParams":
        s = Q(s)
        return HeunParams(**{f.name: getattr(self, f.name) * s for f in fields(self)})

    def with_c1(self, c1) -> "HeunParams":
        return replace(self, c1=Q(c1))

    def as_dict(self) -> dict:
        return {f.name: getattr(self, f.name) for f in fields(self)}

    @classmethod
    def from_polys(cls, p3: Poly, p2: Poly, p1: Poly) -> "HeunParams":
        if p3[0] != 0 or p3.degree > 3 or p2.degree > 2 or p1.degree > 1:
            raise DomainError("polynomials do not have Heun shape")
        return cls(a0=p3[3], a1=p3[2], a2=p3[1], b0=p2[2], b1=p2[1], b2=p2[0], c0=p1[1], c1=p1[0])


def heun_operator(h: HeunParams) -> DiffOp:
    return DiffOp({2: -h.p3, 1: h.p2, 0: h.p1})


# ---------------------------------------------------------------------------
# Band action
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BandAction:
    """``H x^k = L(k) x^(k+1) + D(k) x^k + U(k) x^(k-1)``; each band is a quadratic in ``k``."""

    L: Poly
    D: Poly
    U: Poly

    def lower(self, k) -> Fraction:
        return self.L(Q(k))

    def diag(self, k) -> Fraction:
        return self.D(Q(k))

    def upper(self, k) -> Fraction:
        return self.U(Q(k))

    def block(self, n: int) -> list[list[Fraction]]:
        """Leading ``(n+1) x (n+1)`` block in the basis ``1, x, ..., x^n``."""
        m = [[_ZERO] * (n + 1) for _ in range(n + 1)]
        for k in range(n + 1):
            m[k][k] = self.diag(k)
            if k + 1 <= n:
                m[k + 1][k] = self.lower(k)
            if k >= 1:
                m[k - 1][k] = self.upper(k)
        return m


def band_action(h: HeunParams) -> BandAction:
    # k(k-1) = -k + k^2
    kk1 = Poly((0, -1, 1))
    k = Poly.x()
    return BandAction(
        L=Poly.const(h.c0) + k * h.b0 - kk1 * h.a0,
        D=Poly.const(h.c1) + k * h.b1 - kk1 * h.a1,
        U=k * h.b2 - kk1 * h.a2,
    )


def char_poly(bands: BandAction, n: int) -> Poly:
    """``det(M - eps)`` of the leading ``(n+1)``-block via the three-term recurrence."""
    eps = Poly.x()
    prev, cur = Poly.const(1), Poly.const(bands.diag(0)) - eps
    for k in range(1, n + 1):
        prev, cur = cur, (Poly.const(bands.diag(k)) - eps) * cur - prev * (bands.upper(k) * bands.lower(k - 1))
    return cur


# ---------------------------------------------------------------------------
# Spin condition and the top correspondence
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SpinRoots:
    exact: list
    approximate: list  # irrational roots, float, flagged non-exact

    def __iter__(self):
        return iter(self.exact)


def spin_condition(h: HeunParams, nu) -> Fraction:
    """Left side of ``-2 nu (2 nu - 1) a0 + 2 nu b0 + c0 = 0``."""
    nu = Q(nu)
    return -2 * nu * (2 * nu - 1) * h.a0 + 2 * nu * h.b0 + h.c0


def spin_from_condition(h: HeunParams) -> SpinRoots:
    """All ``nu`` with ``4 a0 nu^2 - 2 (a0 + b0) nu - c0 = 0``."""
    if h.a0 == 0 and h.b0 == 0 and h.c0 == 0:
        raise DomainError("degenerate: a0 = b0 = c0 = 0, every nu satisfies the spin condition")
    if h.a0 == 0 and h.a0 + h.b0 == 0:
        # c0 != 0 here: no solution
        return SpinRoots([], [])
    exact, approx = quadratic_roots(4 * h.a0, -2 * (h.a0 + h.b0), -h.c0)
    return SpinRoots(exact, approx)


def top_to_heun(top: TopParams) -> HeunParams:
    nu = top.nu
    return HeunParams(
        a0=-top.t_p0,
        a1=-(top.t_pm + top.t_00),
        a2=-top.t_0m,
        b0=top.t_p0 * (1 - 3 * nu) + top.B_p,
        b1=-2 * nu * top.t_pm + (1 - 2 * nu) * top.t_00 + top.B_0,
        b2=-nu * top.t_0m + top.B_m,
        c0=2 * nu * (nu * top.t_p0 - top.B_p),
        c1=nu * nu * top.t_00 - nu * top.B_0,
    )


def heun_to_top(h: HeunParams, nu) -> TopParams:
    """Inverse of :func:`top_to_heun` in the gauge ``t00 = 0`` (``c1`` is not represented)."""
    nu = Q(nu)
    if spin_condition(h, nu) != 0:
        raise DomainError(f"spin violates condition: nu = {nu}")
    t_p0, t_pm, t_0m = -h.a0, -h.a1, -h.a2
    return TopParams(
        t_p0=t_p0, t_pm=t_pm, t_00=0, t_0m=t_0m,
        B_p=h.b0 - t_p0 * (1 - 3 * nu),
        B_0=h.b1 + 2 * nu * t_pm,
        B_m=h.b2 + nu * t_0m,
        nu=nu,
    )


# ---------------------------------------------------------------------------
# Quasi-exact solvability
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class QESResult:
    n: int
    eigenvalues: list  # complex, sorted by (real, imag)
    eigenvectors: list  # coefficient lists in 1, x, ..., x^n, max-abs entry = 1
    residual_norms: list
    char_poly: Poly
    exact_eigenvalues: list  # rational roots of char_poly, ascending
    block: list  # exact (n+1)x(n+1) block

    @property
    def spin(self) -> Fraction:
        return Fraction(self.n, 2)


def _require_invariant(bands: BandAction, n: int):
    if n < 0:
        raise DomainError("n must be a nonnegative integer")
    lo = bands.lower(n)
    if lo != 0:
        raise NotInvariantError(n, lo)


def _scale(block) -> float:
    s = max((abs(float(c)) for row in block for c in row), default=0.0)
    return s or 1.0


def eval_char_poly(cp: Poly, eps: complex, scale: float) -> complex:
    """Characteristic polynomial of the block divided by ``scale``, at ``eps / scale``."""
    z = eps / scale
    n = cp.degree
    acc = 0j
    for k in range(n, -1, -1):
        acc = acc * z + float(cp[k]) / scale ** (n - k)
    return acc


def qes_solve(h: HeunParams, n: int, tol: float = 1e-10) -> QESResult:
    """Spectrum of the ``(n+1)``-dimensional invariant block ``P_n``."""
    bands = band_action(h)
    _require_invariant(bands, n)
    block = bands.block(n)
    cp = char_poly(bands, n)
    s = _scale(block)
    m = np.array([[float(c) for c in row] for row in block]) / s
    w, v = np.linalg.eig(m)
    order = sorted(range(len(w)), key=lambda i: (round(w[i].real, 12), round(w[i].imag, 12)))
    eigenvalues, vectors, residuals = [], [], []
    for i in order:
        vec = v[:, i]
        vec = vec / vec[np.argmax(np.abs(vec))]
        lam = w[i]
        res = float(np.max(np.abs(m @ vec - lam * vec)))
        if res >= tol:
            raise DomainError(f"eigen residual {res:.3e} exceeds tolerance {tol:.1e}")
        eigenvalues.append(complex(lam * s))
        if np.allclose(vec.imag, 0.0):
            vectors.append([float(c) for c in vec.real])
        else:
            vectors.append([complex(c) for c in vec])
        residuals.append(res)
    exact = sorted({r for r in (_rationalize(e) for e in eigenvalues) if r is not None and cp(r) == 0})
    return QESResult(n, eigenvalues, vectors, residuals, cp, exact, block)


def _rationalize(z: complex) -> Fraction | None:
    if abs(z.imag) > 1e-9 * max(1.0, abs(z.real)):
        return None
    return Fraction(z.real).limit_denominator(10**6)


def particular_integral_image(h: HeunParams, n: int, p: Poly) -> Poly:
    """``[H_e, d^(n+1)] p`` computed exactly."""
    comm = heun_operator(h) * DiffOp.d(n + 1) - DiffOp.d(n + 1) * heun_operator(h)
    return comm(p)


def particular_integral_check(h: HeunParams, n: int, trials: int = 10, rng=None) -> bool:
    """True iff ``[H_e, d^(n+1)]`` annihilates the basis of ``P_n`` and ``trials`` random members."""
    import random

    _require_invariant(band_action(h), n)
    rng = rng or random.Random(0)
    tests = [Poly.monomial(k) for k in range(n + 1)]
    for _ in range(trials):
        tests.append(Poly(Fraction(rng.randint(-9, 9), rng.randint(1, 9)) for _ in range(n + 1)))
    return all(particular_integral_image(h, n, p).is_zero() for p in tests)


# ---------------------------------------------------------------------------
# Factorization H_e + c1 = T_a T_b
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FactorizationResult:
    """``T_a = alpha_a J+ + beta_a J0 + gamma_a J- + D_a``, ``T_b = beta_b J0 + gamma_b J- + D_b``.

    ``heun`` is the representative of the input whose additive constant is the
    one carried by the top, so that ``T_a T_b = H_e(heun) + c1`` with
    ``c1 = D_a D_b`` holds as an operator identity.
    """

    ta: tuple
    tb: tuple
    c1: Fraction
    nu: Fraction
    heun: HeunParams

    def operators(self) -> tuple[DiffOp, DiffOp]:
        jm, j0, jp = differential_generators(self.nu)
        al, be, ga, da = self.ta
        bb, gb, db = self.tb
        return jp * al + j0 * be + jm * ga + da, j0 * bb + jm * gb + db

    def product(self) -> DiffOp:
        ta, tb = self.operators()
        return ta * tb

    def verify(self) -> bool:
        return self.product() == heun_operator(self.heun) + self.c1


def _factor_candidate(h: HeunParams, nu: Fraction, gamma_b: Fraction):
    """Solve the matching equations for a fixed spin and ``gamma_b`` (``beta_b = 1``).

    The ``d^2`` coefficients fix ``alpha_a``, ``beta_a``, ``gamma_a``; the ``x^2 d`` and ``x d``
    coefficients fix ``D_b`` and ``D_a``.  The ``d`` coefficient is then the one
    remaining condition, and ``c0`` matches by the spin condition.
    """
    alpha_a = -h.a0
    beta_a = -h.a1 - alpha_a * gamma_b
    gamma_a = -h.a2 - beta_a * gamma_b
    if gamma_a * gamma_b != 0:
        return None
    d_b = (h.b0 - alpha_a * (1 - 3 * nu)) / alpha_a
    d_a = h.b1 - d_b * beta_a + 2 * alpha_a * gamma_b * nu + beta_a * (2 * nu - 1)
    top = TopParams(t_p0=alpha_a, t_pm=alpha_a * gamma_b, t_00=beta_a, t_0m=beta_a * gamma_b + gamma_a,
                    B_p=d_b * alpha_a, B_0=d_b * beta_a + d_a,
                    B_m=d_b * gamma_a + d_a * gamma_b + gamma_a, nu=nu)
    rep = top_to_heun(top)
    return FactorizationResult((alpha_a, beta_a, gamma_a, d_a), (Fraction(1), gamma_b, d_b),
                               d_a * d_b, nu, rep)


def factorize(h: HeunParams) -> FactorizationResult:
    """Factor ``H_e + c1 = T_a T_b`` in the differential realization, ``alpha_b = 0``, ``beta_b = 1``.

    ``gamma_a gamma_b = 0`` is forced (no constant term in front of ``d^2``), so
    both branches are tried: ``gamma_b = 0``, and ``gamma_a = 0`` with
    ``a0 gamma_b^2 - a1 gamma_b + a2 = 0``.  Raises :class:`FactorizationError`
    carrying the failing residual operator when neither branch closes.
    """
    if h.a0 == 0:
        raise DomainError("a0 is zero")
    spins = spin_from_condition(h)
    if not spins.exact:
        raise FactorizationError("no factorization under normalization: no rational spin root")
    gammas = [Fraction(0)] + [g for g in quadratic_roots(h.a0, -h.a1, h.a2)[0] if g != 0]
    target = heun_operator(h)
    first_residual = None
    for nu in spins.exact:
        for gb in gammas:
            cand = _factor_candidate(h, nu, gb)
            if cand is None:
                continue
            diff = cand.product() - target
            # the difference must be a pure constant (the shift of the additive constant)
            if all(j == 0 and diff.coeff(0).degree <= 0 for j in diff.terms):
                assert cand.verify()
                return cand
            if first_residual is None:
                first_residual = DiffOp({j: p for j, p in diff.terms.items() if not (j == 0 and p.degree <= 0)})
    raise FactorizationError(
        f"no factorization under normalization beta_b = 1: residual {first_residual!r}",
        residual=first_residual,
    )


# ---------------------------------------------------------------------------
# Gauge covariance and the exactly solvable reduction
# ---------------------------------------------------------------------------

def _translate(h: HeunParams, r: Fraction) -> HeunParams:
    """Operator in ``y = x - r``: coefficients ``P(y + r)``."""
    return HeunParams.from_polys(h.p3.shift(r), h.p2.shift(r), h.p1.shift(r))


def covariance_map(h: HeunParams, root) -> tuple[Fraction, HeunParams]:
    """Exponent ``mu`` and the Heun operator ``(x-root)^-mu H_e (x-root)^mu - D(mu)``.

    At the origin the bands shift as ``L(k) -> L(k+mu)``, ``D(k) -> D(k+mu) - D(mu)``,
    ``U(k) -> U(k+mu)`` with ``mu = 1 + b2/a2``; the constant ``D(mu)`` of the
    conjugated operator is dropped (``c1`` of the result is 0 in the shifted frame).
    """
    root = Q(root)
    if h.p3(root) != 0:
        raise DomainError(f"not a root: P3({root}) != 0")
    g = _translate(h, root) if root != 0 else h
    if g.a2 == 0:
        raise DomainError("a2 zero at origin-root: mu undefined")
    mu = 1 + g.b2 / g.a2
    bands = band_action(g)
    lo, di, up = bands.L.shift(mu), bands.D.shift(mu) - bands.diag(mu), bands.U.shift(mu)
    assert up[0] == 0
    # read the shifted bands back as Heun coefficients: k(k-1) coefficient is -a, k coefficient is b - a
    new = HeunParams(
        a0=-lo[2], a1=-di[2], a2=-up[2],
        b0=lo[1] + lo[2], b1=di[1] + di[2], b2=up[1] + up[2],
        c0=lo[0], c1=di[0],
    )
    if root != 0:
        new = _translate(new, -root)
    return mu, new


def es_spectrum(h: HeunParams, k_max: int) -> list[Fraction]:
    """Exact spectrum on ``P_{k_max}`` when ``a0 = b0 = c0 = 0`` (triangular band matrix)."""
    if h.a0 or h.b0 or h.c0:
        raise DomainError("not ES: a0, b0, c0 must all vanish")
    bands = band_action(h)
    return [bands.diag(k) for k in range(k_max + 1)]
