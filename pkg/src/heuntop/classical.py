"""Classical limit: the phase-space Hamiltonian P3(q) p^2 + B q + Q2(q)/P3(q)."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy.integrate import solve_ivp

from .algebra import Poly, Q
from .errors import DomainError
from .heun import HeunParams
from .schrodinger import PotentialData, gauge_to_schrodinger


@dataclass(frozen=True)
class ClassicalHamiltonian:
    p3: Poly
    B: Fraction
    q2: Poly

    def __post_init__(self):
        object.__setattr__(self, "B", Q(self.B))

    @classmethod
    def from_potential(cls, pd: PotentialData) -> "ClassicalHamiltonian":
        return cls(pd.P3, pd.B, pd.Q2)

    @classmethod
    def from_heun(cls, h: HeunParams) -> "ClassicalHamiltonian":
        return cls.from_potential(gauge_to_schrodinger(h))

    def _floats(self):
        return _horner(self.p3), float(self.B), _horner(self.q2)


def _horner(p: Poly):
    coeffs = tuple(reversed(p.to_floats())) or (0.0,)

    def f(x):
        acc = 0.0
        for c in coeffs:
            acc = acc * x + c
        return acc

    f.deriv = lambda: _horner(p.derivative())
    return f


def _check_regular(p3_val: float, q: float) -> None:
    if p3_val == 0.0:
        raise DomainError(f"on singular locus: P3({q!r}) = 0")


def potential(ch: ClassicalHamiltonian, q: float) -> float:
    p3, b, q2 = ch._floats()
    d = p3(q)
    _check_regular(d, q)
    return b * q + q2(q) / d


def eval_h(ch: ClassicalHamiltonian, q: float, p: float) -> float:
    p3, b, q2 = ch._floats()
    d = p3(q)
    _check_regular(d, q)
    return d * p * p + b * q + q2(q) / d


def momentum_on_level(ch: ClassicalHamiltonian, energy: float, q: float) -> float:
    """Nonnegative ``p`` with ``H(q, p) = energy``; the level set is ``p^2 = (E - V(q))/P3(q)``."""
    p3, _, _ = ch._floats()
    p_sq = (energy - potential(ch, q)) / p3(q)
    if p_sq < 0:
        raise DomainError(f"energy {energy!r} not reachable at q = {q!r}")
    return float(np.sqrt(p_sq))


@dataclass(frozen=True)
class Trajectory:
    t: np.ndarray
    q: np.ndarray
    p: np.ndarray
    energy: np.ndarray

    @property
    def energy_drift(self) -> float:
        return float(np.max(np.abs(self.energy - self.energy[0])))

    def rows(self):
        return zip(self.t.tolist(), self.q.tolist(), self.p.tolist(), self.energy.tolist())


def _vector_field(ch: ClassicalHamiltonian):
    p3, b, q2 = ch._floats()
    dp3, dq2 = p3.deriv(), q2.deriv()

    def rhs(_t, y):
        q, p = y
        d = p3(q)
        # dH/dq = P3' p^2 + B + (Q2' P3 - Q2 P3') / P3^2
        dhdq = dp3(q) * p * p + b + (dq2(q) * d - q2(q) * dp3(q)) / (d * d)
        return [2.0 * d * p, -dhdq]

    def singular(_t, y):
        return p3(y[0])

    singular.terminal = True
    return rhs, singular


def integrate_trajectory(ch: ClassicalHamiltonian, q0: float, p0: float, t_end: float,
                         tol: float = 1e-10, samples: int = 201) -> Trajectory:
    """Integrate Hamilton's equations with an adaptive Dormand-Prince 4(5) pair.

    ``tol`` is the accuracy asked of the whole trajectory; local errors add up
    over the steps, so the controller runs with ``rtol = tol/10`` and
    ``atol = tol/100``.  ``t_end`` may be negative (backward flow).  The returned
    table is sampled at ``samples`` equally spaced times with the energy at each.
    """
    q0, p0 = float(q0), float(p0)
    if not np.isfinite(eval_h(ch, q0, p0)):  # eval_h raises on the singular locus
        raise DomainError("non-finite initial energy")
    if t_end == 0:
        raise DomainError("t_end must be nonzero")
    rhs, singular = _vector_field(ch)
    times = np.linspace(0.0, float(t_end), samples)
    sol = solve_ivp(rhs, (0.0, float(t_end)), [q0, p0], method="RK45", t_eval=times,
                    rtol=tol / 10, atol=tol / 100, events=singular)
    if sol.status == 1:
        raise DomainError(f"hit singular locus at t = {sol.t_events[0][0]!r}")
    if sol.status == -1:
        raise DomainError(f"step underflow: {sol.message}")
    q, p = sol.y
    energy = np.array([eval_h(ch, a, b) for a, b in zip(q, p)])
    return Trajectory(sol.t, q, p, energy)


def reversal_error(ch: ClassicalHamiltonian, q0: float, p0: float, t_end: float, tol: float = 1e-10) -> float:
    """Distance back to ``(q0, p0)`` after flowing to ``t_end`` and then back to 0."""
    fwd = integrate_trajectory(ch, q0, p0, t_end, tol)
    back = integrate_trajectory(ch, fwd.q[-1], fwd.p[-1], -t_end, tol)
    return float(np.hypot(back.q[-1] - q0, back.p[-1] - p0))


def well() -> ClassicalHamiltonian:
    """``P3 = q^3 + q``, ``B = 1``, ``Q2 = 1``: a wall at ``q = 0`` and linear growth, so orbits in ``q > 0`` are closed."""
    return ClassicalHamiltonian(Poly((0, 1, 0, 1)), Fraction(1), Poly((1,)))
