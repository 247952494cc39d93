import cmath
import math
import random
from fractions import Fraction

import pytest

from heuntop.errors import DomainError
from heuntop.weierstrass import (EllipticInvariants, bc1_invariants, cubic_residual, ode_residual, real_half_period,
                                 weierstrass_p)


def test_bc1_invariants_exact():
    inv = bc1_invariants(1, 0)
    assert (inv.g2, inv.g3) == (12, 8)
    for lam, delta in [(1, 0), (Fraction(2, 3), Fraction(-1, 5)), (-3, 7)]:
        assert cubic_residual(-Fraction(lam), bc1_invariants(lam, delta)) == 0


def test_degenerate_case_closed_form():
    # g2 = 12, g3 = 8: roots 2, -1, -1 and P = -1 + 3 / sin^2(sqrt(3) t)
    inv = bc1_invariants(1, 0)
    for t in (0.1, 0.37, 0.8):
        p, _ = weierstrass_p(t, inv)
        assert p == pytest.approx(-1 + 3 / math.sin(math.sqrt(3) * t) ** 2, rel=1e-12)
    assert real_half_period(inv) == pytest.approx(math.pi / (2 * math.sqrt(3)), rel=1e-14)


def test_half_period_hits_largest_root():
    inv = EllipticInvariants(7.0, -1.5)
    w = real_half_period(inv)
    p, dp = weierstrass_p(w, inv)
    assert p == pytest.approx(inv.cubic_roots()[0].real, rel=1e-10)
    assert abs(dp) < 1e-6


@pytest.mark.parametrize("g2,g3", [(12.0, 8.0), (0.0, 1.0), (1.0, 0.0), (3.7, -2.2), (40.0, 5.0)])
def test_ode_residual(g2, g3):
    inv = EllipticInvariants(g2, g3)
    rng = random.Random(3)
    for _ in range(100):
        t = complex(rng.uniform(0.05, 2.0), rng.uniform(-1.0, 1.0))
        assert ode_residual(t, inv) < 1e-10


def test_odd_derivative_and_even_function():
    inv = EllipticInvariants(3.0, 1.0)
    z = 0.4 + 0.3j
    p1, d1 = weierstrass_p(z, inv)
    p2, d2 = weierstrass_p(-z, inv)
    assert cmath.isclose(p1, p2, rel_tol=1e-12) and cmath.isclose(d1, -d2, rel_tol=1e-12)


def test_pole_rejected():
    with pytest.raises(DomainError, match="pole"):
        weierstrass_p(0, EllipticInvariants(1.0, 1.0))


def test_half_period_needs_real_roots():
    with pytest.raises(DomainError):
        real_half_period(EllipticInvariants(0.0, 1.0))
