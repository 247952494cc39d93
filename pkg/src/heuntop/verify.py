"""Deterministic identity suite run by ``heuntop verify``."""
from __future__ import annotations

import random
from fractions import Fraction
from typing import Callable, Iterator

from .algebra import Poly
from .heun import HeunParams, heun_to_top, top_to_heun, heun_operator
from .lattice import isospectrality_check, stencil_matches_composition
from .presets import PRESETS
from .schrodinger import BC1Instance, bc1_sl2_identity, closed_form_B, gauge_to_schrodinger
from .sl2 import TopParams, casimir_residual, commutation_residuals, make_differential, make_dilation, make_shift, top_diffop

MAX_DEGREE = 25


def _rat(rng: random.Random, lo: int = -9, hi: int = 9) -> Fraction:
    return Fraction(rng.randint(lo, hi), rng.randint(1, 6))


def _realizations(rng: random.Random):
    nu = _rat(rng)
    delta = _rat(rng, 1, 9)
    q = Fraction(rng.randint(2, 9), rng.randint(1, 9))
    if q == 1:
        q = Fraction(3, 2)
    return nu, [make_differential(nu), make_shift(nu, delta), make_dilation(nu, q)]


def checks(seed: int = 0) -> Iterator[tuple[str, Callable[[], bool]]]:
    rng = random.Random(seed)
    for i in range(3):
        nu, gens = _realizations(rng)
        for gen in gens:
            tag = f"{gen.kind}(nu={nu}, param={gen.param})"
            yield f"commutators {tag}", lambda g=gen: all(commutation_residuals(g, MAX_DEGREE).values())
            yield f"casimir {tag}", lambda g=gen, v=nu: all(r == 0 for r in casimir_residual(g, v, MAX_DEGREE))
    for i in range(5):
        top = TopParams(_rat(rng), _rat(rng), 0, _rat(rng), _rat(rng), _rat(rng), _rat(rng), _rat(rng))
        yield f"top round trip #{i}", lambda t=top: heun_to_top(top_to_heun(t), t.nu) == t
        yield f"top operator #{i}", lambda t=top: top_diffop(t) == heun_operator(top_to_heun(t))
    for name in ("bc1-default", "lame"):
        p = PRESETS[name]
        yield f"isospectrality {name}", lambda p=p: isospectrality_check(p.heun, p.n, Fraction(1, 3), Fraction(2)).ok
    polys = [Poly.monomial(k) for k in range(8)]
    for name in ("bc1-default", "lame", "es-linear"):
        h = PRESETS[name].heun
        yield f"stencil composition {name}", lambda h=h: stencil_matches_composition(h, Fraction(1, 4), polys)
    yield "bc1 sl(2) form", lambda: bc1_sl2_identity(BC1Instance(Fraction(1, 2), Fraction(-1, 3), Fraction(3, 2), 2))
    h = HeunParams(-3, 1, 2, Fraction(5, 2), -1, 4, 7, 0)
    yield "B closed form", lambda: gauge_to_schrodinger(h).B == closed_form_B(h)


def run_suite(seed: int = 0) -> list[tuple[str, bool]]:
    return [(name, bool(fn())) for name, fn in checks(seed)]
