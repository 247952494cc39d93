"""Named parameter sets with the properties they are expected to show."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .errors import DomainError
from .heun import HeunParams
from .schrodinger import BC1Instance, bc1_build


@dataclass(frozen=True)
class Preset:
    name: str
    description: str
    heun: HeunParams
    n: int | None = None  # QES degree, if the instance has one
    expected: dict = field(default_factory=dict)
    bc1: BC1Instance | None = None


def _catalog() -> dict[str, Preset]:
    bc1 = BC1Instance(1, 0, 0, 1)
    # P3 = -4 x (x - 1)(x - 2) with P2 = -P3'/2 and spin 1
    lame = HeunParams(a0=-4, a1=12, a2=-8, b0=6, b1=-12, b2=4, c0=-20, c1=0)
    return {
        "bc1-default": Preset(
            "bc1-default", "BC1 elliptic model, lambda=1, delta=0, mu=0, n=1",
            bc1_build(bc1), n=1, bc1=bc1,
            expected={"spectrum": [Fraction(-6), Fraction(6)]},
        ),
        "lame": Preset(
            "lame", "Lame-type operator: P2 = -P3'/2, P3 = -4x(x-1)(x-2), spin 1",
            lame, n=2,
            expected={"P2 = -P3'/2": True, "covariance mu at 0": Fraction(1, 2)},
        ),
        "es-linear": Preset(
            "es-linear", "exactly solvable, a0 = b0 = c0 = 0, eps_k = 2k",
            HeunParams(a2=-1, b1=2, b2=1), n=None,
            expected={"eps_k": "2k"},
        ),
        "es-quadratic": Preset(
            "es-quadratic", "exactly solvable, a0 = b0 = c0 = 0, eps_k = k^2",
            HeunParams(a1=-1, a2=-1, b1=1, b2=Fraction(1, 2)), n=None,
            expected={"eps_k": "k^2"},
        ),
    }


PRESETS = _catalog()


def get_preset(name: str) -> Preset:
    try:
        return PRESETS[name]
    except KeyError:
        raise DomainError(f"unknown preset {name!r}; known: {', '.join(sorted(PRESETS))}") from None
