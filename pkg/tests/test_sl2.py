from fractions import Fraction

import pytest
import sympy as sp
from hypothesis import given, strategies as st

from heuntop.algebra import Poly
from heuntop.errors import DomainError
from heuntop.sl2 import (TopParams, casimir_residual, commutation_residuals, differential_generators,
                         jackson_derivative, make_differential, make_dilation, make_shift, norlund_derivative,
                         q_factorial, q_number, quasi_monomial, top_diffop, top_hamiltonian)
from conftest import nonzero_rationals, rationals
from oracles import generators, x as X

q_values = st.builds(Fraction, st.integers(2, 9), st.integers(1, 9)).filter(lambda q: q != 1)


@given(rationals, nonzero_rationals, q_values)
def test_three_realizations_close_sl2(nu, delta, q):
    for gen in (make_differential(nu), make_shift(nu, delta), make_dilation(nu, q)):
        assert all(commutation_residuals(gen, 12).values()), gen.kind
        assert all(r == 0 for r in casimir_residual(gen, nu, 12)), gen.kind


def test_differential_generators_match_sympy():
    nu = Fraction(3, 2)
    jm, j0, jp = differential_generators(nu)
    sjm, sj0, sjp = generators(nu)
    f = Poly((2, -1, 0, 4, 1))
    fs = sum(int(c) * X**i for i, c in enumerate(f.coeffs))
    for op, sop in ((jm, sjm), (j0, sj0), (jp, sjp)):
        got = sum(sp.Rational(c.numerator, c.denominator) * X**i for i, c in enumerate(op(f).coeffs))
        assert sp.expand(got - sop(fs)) == 0


def test_integer_spin_leaves_p2n_invariant():
    gen = make_differential(2)
    assert gen.j_plus.column(4) == {}  # J+ x^4 = (4 - 4) x^5


def test_quasi_monomial():
    assert quasi_monomial(3, Fraction(1, 2)) == Poly.from_roots([0, Fraction(1, 2), 1])


def test_norlund_derivative_lowers_quasi_monomials():
    d = Fraction(1, 3)
    assert norlund_derivative(quasi_monomial(4, d), d) == quasi_monomial(3, d) * 4


def test_q_numbers():
    assert q_number(3, 2) == 7
    assert q_factorial(3, 2) == 21
    assert jackson_derivative(Poly.monomial(3), Fraction(2)) == Poly.monomial(2, 7)


def test_dilation_rejects_q_one_and_zero():
    for q in (0, 1):
        with pytest.raises(DomainError, match="invalid q"):
            make_dilation(1, q)


def test_shift_with_zero_spacing_is_differential():
    assert make_shift(1, 0).kind == "differential"


def test_dilation_bands_are_q_deformed():
    q = Fraction(3)
    dil = make_dilation(Fraction(1, 2), q)
    assert dil.j_minus.column(3) == {2: q_number(3, q)}
    assert dil.j_plus.column(2) == {3: Fraction(3) / q_number(3, q) * (2 - 1)}


def test_top_hamiltonian_agrees_across_differential_forms():
    top = TopParams(1, -2, Fraction(1, 3), 5, 2, -1, Fraction(7, 2), Fraction(3, 2))
    h_diff = top_diffop(top)
    h_basis = top_hamiltonian(make_differential(top.nu), top)
    for k in range(8):
        img = h_diff(Poly.monomial(k))
        assert {i: c for i, c in enumerate(img.coeffs) if c} == h_basis.column(k)


def test_dilation_canonical_pair():
    gen = make_dilation(1, 2)
    assert gen.x_op.column(1) == {2: Fraction(2, 3)}
    comm = gen.d_op * gen.x_op - gen.x_op * gen.d_op
    assert all(comm.column(k) == {k: 1} for k in range(10))
