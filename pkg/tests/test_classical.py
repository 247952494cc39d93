import random
from fractions import Fraction

import numpy as np
import pytest
from scipy.optimize import brentq

from heuntop.algebra import Poly
from heuntop.classical import (ClassicalHamiltonian, eval_h, integrate_trajectory, momentum_on_level, potential,
                               reversal_error, well)
from heuntop.errors import DomainError
from heuntop.heun import HeunParams
from heuntop.schrodinger import gauge_to_schrodinger


def test_zero_momentum_gives_potential():
    ch = well()
    for q in (0.3, 1.0, 2.5):
        assert eval_h(ch, q, 0.0) == pytest.approx(q + 1 / (q**3 + q), rel=1e-15)


def test_level_set_identity():
    ch = well()
    energy = 4.0
    for q in np.linspace(0.4, 3.0, 9):
        p = momentum_on_level(ch, energy, q)
        assert abs(eval_h(ch, q, p) - energy) < 1e-12
        assert abs(eval_h(ch, q, -p) - energy) < 1e-12


def test_shares_potential_with_gauge_map():
    h = HeunParams(a0=-4, a1=12, a2=-8, b0=5, b1=-2, b2=3, c0=-7, c1=1)
    pd = gauge_to_schrodinger(h)
    ch = ClassicalHamiltonian.from_heun(h)
    for q in (1.3, 1.7):
        assert potential(ch, q) == pytest.approx(pd.V(q), rel=1e-14)


def test_singular_locus():
    with pytest.raises(DomainError, match="on singular locus"):
        eval_h(well(), 0.0, 1.0)


def test_energy_drift_and_reversal():
    ch = well()
    rng = random.Random(7)
    for _ in range(3):
        q0, p0 = rng.uniform(0.5, 2.0), rng.uniform(-1.0, 1.0)
        tr = integrate_trajectory(ch, q0, p0, 10.0, 1e-10)
        assert tr.energy_drift < 1e-8
        assert reversal_error(ch, q0, p0, 10.0) < 1e-6


def test_fixed_point_is_stationary():
    ch = well()
    q_min = brentq(lambda q: 1 - (3 * q * q + 1) / (q**3 + q) ** 2, 0.5, 3.0, xtol=1e-15)
    tr = integrate_trajectory(ch, q_min, 0.0, 10.0, 1e-10)
    assert np.max(np.abs(tr.q - q_min)) < 1e-7
    assert np.max(np.abs(tr.p)) < 1e-7


def test_trajectory_reaching_singular_locus():
    ch = ClassicalHamiltonian(Poly((0, 1)), Fraction(1), Poly())
    with pytest.raises(DomainError, match="singular locus|step underflow"):
        integrate_trajectory(ch, 1.0, -1.0, 10.0)
