"""Command-line entry point: ``heuntop <command> [flags]``.

Exit codes: 0 on success, 2 on domain errors, 1 on usage errors.  Output is
deterministic: fields in a fixed order, rationals as ``p/q`` strings, floats
with 17 significant digits.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import re
import sys
from dataclasses import dataclass, field
from fractions import Fraction

from .algebra import Poly, Q, format_rational
from .classical import ClassicalHamiltonian, integrate_trajectory, well
from .errors import DomainError
from .heun import HeunParams, es_spectrum, heun_to_top, qes_solve, top_to_heun
from .lattice import derive_stencil, isospectrality_check, SHIFTS
from .presets import PRESETS, get_preset
from .schrodinger import (BC1Instance, bc1_build, bc1_schrodinger_residual, closed_form_B, default_tau_samples,
                          gauge_to_schrodinger, tau_of_x)
from .sl2 import TopParams
from .verify import run_suite

COMMANDS = ("spectrum", "convert", "stencil", "isospectral", "potential", "bc1", "classical", "presets", "verify")
HEUN_KEYS = ("a0", "a1", "a2", "b0", "b1", "b2", "c0", "c1")
TOP_KEYS = ("t_p0", "t_pm", "t_00", "t_0m", "B_p", "B_0", "B_m")


class UsageError(Exception):
    pass


@dataclass
class JobSpec:
    command: str
    params: dict = field(default_factory=dict)
    fmt: str = "json"


@dataclass
class Report:
    """``fields`` for JSON; ``header``/``rows`` for CSV."""

    fields: dict
    header: list
    rows: list


# ---------------------------------------------------------------------------
# Serialization
# ---------------------------------------------------------------------------

def _scalar(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, Fraction):
        return json.dumps(format_rational(v))
    if isinstance(v, int):
        return str(v)
    if isinstance(v, float):
        return format(v, ".17g") if math.isfinite(v) else "null"
    if v is None:
        return "null"
    return json.dumps(str(v))


def to_json(obj, indent: int = 0) -> str:
    pad, inner = "  " * indent, "  " * (indent + 1)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{inner}{json.dumps(str(k))}: {to_json(v, indent + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        if all(not isinstance(v, (dict, list, tuple)) for v in obj):
            return "[" + ", ".join(_scalar(v) for v in obj) + "]"
        return "[\n" + ",\n".join(inner + to_json(v, indent + 1) for v in obj) + "\n" + pad + "]"
    return _scalar(obj)


def _cell(v) -> str:
    if isinstance(v, Fraction):
        return format_rational(v)
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return format(v, ".17g")
    return "" if v is None else str(v)


def to_csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([_cell(v) for v in r])
    return buf.getvalue()


def serialize(report: Report, fmt: str) -> str:
    if fmt == "csv":
        return to_csv(report.header, report.rows)
    return to_json(report.fields) + "\n"


def _poly(p: Poly) -> list:
    """Coefficients in ascending degree as exact rationals."""
    return list(p.coeffs)


def _heun_dict(h: HeunParams) -> dict:
    return {k: getattr(h, k) for k in HEUN_KEYS}


# ---------------------------------------------------------------------------
# Parameter access
# ---------------------------------------------------------------------------

def _rational(params, key, default=None, required=False) -> Fraction | None:
    v = params.get(key)
    if v is None:
        if required:
            raise UsageError(f"missing required parameter --{key.replace('_', '-')}")
        return None if default is None else Q(default)
    try:
        return Q(v)
    except (ValueError, TypeError) as exc:
        raise UsageError(f"--{key.replace('_', '-')}: {exc}") from exc


def _integer(params, key, default=None, required=False) -> int | None:
    v = params.get(key)
    if v is None:
        if required:
            raise UsageError(f"missing required parameter --{key}")
        return default
    try:
        return int(v)
    except ValueError:
        raise UsageError(f"--{key}: not an integer: {v!r}") from None


def _float(params, key, default) -> float:
    v = params.get(key)
    if v is None:
        return default
    try:
        return float(Fraction(v)) if "/" in str(v) else float(v)
    except ValueError:
        raise UsageError(f"--{key.replace('_', '-')}: not a number: {v!r}") from None


def _heun_from(params) -> tuple[HeunParams, int | None]:
    name = params.get("preset")
    if name:
        if any(params.get(k) is not None for k in HEUN_KEYS):
            raise UsageError("--preset cannot be combined with --a0..--c1")
        p = get_preset(name)
        return p.heun, p.n
    if all(params.get(k) is None for k in HEUN_KEYS):
        raise UsageError("missing Heun parameters: give --a0 .. --c1 or --preset")
    return HeunParams(**{k: _rational(params, k, 0) for k in HEUN_KEYS}), None


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------

def cmd_spectrum(params) -> Report:
    h, n_default = _heun_from(params)
    n = _integer(params, "n", n_default)
    if n is None and h.a0 == 0 and h.b0 == 0 and h.c0 == 0:
        k_max = _integer(params, "k_max", 10)
        eps = es_spectrum(h, k_max)
        fields = {"command": "spectrum", "params": _heun_dict(h), "exactly_solvable": True, "k_max": k_max,
                  "exact_eigenvalues": eps}
        return Report(fields, ["k", "exact"], [[k, e] for k, e in enumerate(eps)])
    if n is None:
        raise UsageError("missing required parameter --n")
    res = qes_solve(h, n)
    fields = {
        "command": "spectrum",
        "params": _heun_dict(h),
        "n": n,
        "char_poly": _poly(res.char_poly),
        "eigenvalues": [e.real for e in res.eigenvalues],
        "eigenvalues_imag": [e.imag for e in res.eigenvalues],
        "exact_eigenvalues": res.exact_eigenvalues,
        "residual_norms": res.residual_norms,
    }
    rows = []
    for i, e in enumerate(res.eigenvalues):
        r = Fraction(e.real).limit_denominator(10**6) if abs(e.imag) < 1e-9 else None
        rows.append([i, e.real, e.imag, r if r in res.exact_eigenvalues else None])
    return Report(fields, ["index", "eigenvalue", "eigenvalue_imag", "exact"], rows)


def cmd_convert(params) -> Report:
    direction = params.get("direction") or "heun-to-top"
    nu = _rational(params, "nu", required=True)
    if direction == "heun-to-top":
        h, _ = _heun_from(params)
        top = heun_to_top(h, nu)
        back = top_to_heun(top)
        fields = {"command": "convert", "direction": direction, "nu": nu, "heun": _heun_dict(h),
                  "top": {k: getattr(top, k) for k in TOP_KEYS}, "round_trip": _heun_dict(back)}
        rows = [["heun", k, getattr(h, k)] for k in HEUN_KEYS] + [["top", k, getattr(top, k)] for k in TOP_KEYS]
    elif direction == "top-to-heun":
        top = TopParams(**{k: _rational(params, k, 0) for k in TOP_KEYS}, nu=nu)
        h = top_to_heun(top)
        fields = {"command": "convert", "direction": direction, "nu": nu,
                  "top": {k: getattr(top, k) for k in TOP_KEYS}, "heun": _heun_dict(h)}
        rows = [["top", k, getattr(top, k)] for k in TOP_KEYS] + [["heun", k, getattr(h, k)] for k in HEUN_KEYS]
    else:
        raise UsageError(f"--direction: expected heun-to-top or top-to-heun, got {direction!r}")
    return Report(fields, ["block", "key", "value"], rows)


def cmd_stencil(params) -> Report:
    h, _ = _heun_from(params)
    delta = _rational(params, "delta", required=True)
    s = derive_stencil(h, delta)
    coeffs = {str(j): _poly(s.coeff(j)) for j in SHIFTS}
    rows = [[j, d, c] for j in SHIFTS for d, c in enumerate(s.coeff(j).coeffs)]
    return Report({"command": "stencil", "params": _heun_dict(h), "delta": delta, "shifts": list(SHIFTS),
                   "coefficients": coeffs}, ["shift", "degree", "coefficient"], rows)


def cmd_isospectral(params) -> Report:
    h, n_default = _heun_from(params)
    n = _integer(params, "n", n_default, required=n_default is None)
    delta = _rational(params, "delta", required=True)
    q = _rational(params, "q", required=True)
    r = isospectrality_check(h, n, delta, q)
    checks = {
        "shift_block_identical": r.shift_block_identical,
        "dilation_block_conjugate": r.dilation_block_conjugate,
        "shift_eigenrelation": r.shift_eigenrelation,
        "dilation_eigenrelation": r.dilation_eigenrelation,
        "eigenvector_nontrivial": r.eigenvector_nontrivial,
    }
    fields = {"command": "isospectral", "params": _heun_dict(h), "n": n, "delta": delta, "q": q,
              "char_poly": _poly(r.char_poly), **checks, "ok": r.ok}
    return Report(fields, ["check", "passed"], [[k, v] for k, v in checks.items()] + [["ok", r.ok]])


def cmd_potential(params) -> Report:
    h, _ = _heun_from(params)
    pd = gauge_to_schrodinger(h)
    fields = {"command": "potential", "params": _heun_dict(h), "B": pd.B, "B_closed_form": closed_form_B(h),
              "Q2": _poly(pd.Q2), "P3": _poly(pd.P3), "constant": pd.constant}
    rows = []
    if params.get("x0") is not None or params.get("x1") is not None:
        x0, x1 = _float(params, "x0", 0.0), _float(params, "x1", 1.0)
        steps = _integer(params, "steps", 20)
        table = tau_of_x(h, x0, x1, steps)
        rows = [[x, tau, pd.V(x) if pd.P3(Fraction(x)) != 0 else None] for x, tau in table]
        fields["table"] = [{"x": x, "tau": t, "V": v} for x, t, v in rows]
    return Report(fields, ["x", "tau", "V"], rows)


def cmd_bc1(params) -> Report:
    lam = _rational(params, "lambda", 1)
    delta = _rational(params, "delta", 0)
    mu = _rational(params, "mu", 0)
    n = _integer(params, "n", 1)
    inst = BC1Instance(lam, delta, mu, n)
    h = bc1_build(inst)
    count = _integer(params, "samples", 24)
    res = bc1_schrodinger_residual(inst, default_tau_samples(inst, count))
    inv = inst.invariants
    fields = {"command": "bc1", "lambda": lam, "delta": delta, "mu": mu, "n": n, "params": _heun_dict(h),
              "g2": inv.g2, "g3": inv.g3, "eigenvalues": res.eigenvalues, "energies": res.energies,
              "offsets": res.offsets, "max_residual": res.max_residual, "samples": len(res.samples)}
    rows = [[e, E, o] for e, E, o in zip(res.eigenvalues, res.energies, res.offsets)]
    return Report(fields, ["eigenvalue", "energy", "offset"], rows)


def cmd_classical(params) -> Report:
    if params.get("preset") == "classical-well" or (params.get("preset") is None
                                                    and all(params.get(k) is None for k in HEUN_KEYS)):
        ch = well()
    else:
        h, _ = _heun_from(params)
        ch = ClassicalHamiltonian.from_heun(h)
    q0, p0 = _float(params, "q0", 1.0), _float(params, "p0", 0.5)
    t_end, tol = _float(params, "t_end", 10.0), _float(params, "tol", 1e-10)
    tr = integrate_trajectory(ch, q0, p0, t_end, tol, _integer(params, "samples", 201))
    rows = [list(r) for r in tr.rows()]
    fields = {"command": "classical", "P3": _poly(ch.p3), "B": ch.B, "Q2": _poly(ch.q2), "q0": q0, "p0": p0,
              "t_end": t_end, "tol": tol, "energy": float(tr.energy[0]), "energy_drift": tr.energy_drift,
              "path": [{"t": t, "q": q, "p": p, "energy": e} for t, q, p, e in rows]}
    return Report(fields, ["t", "q", "p", "energy"], rows)


def cmd_presets(params) -> Report:
    cat = {}
    rows = []
    for name, p in PRESETS.items():
        cat[name] = {"description": p.description, "params": _heun_dict(p.heun), "n": p.n,
                     "expected": {k: (v if not isinstance(v, list) else list(v)) for k, v in p.expected.items()}}
        rows.append([name, p.n] + [getattr(p.heun, k) for k in HEUN_KEYS] + [p.description])
    cat["classical-well"] = {"description": "classical phase-space well P3 = q^3 + q, B = 1, Q2 = 1",
                             "params": None, "n": None, "expected": {"bounded orbits": True}}
    rows.append(["classical-well", None] + [None] * len(HEUN_KEYS) + [cat["classical-well"]["description"]])
    return Report({"command": "presets", "presets": cat}, ["name", "n", *HEUN_KEYS, "description"], rows)


def cmd_verify(params) -> Report:
    results = run_suite(_integer(params, "seed", 0))
    failed = [name for name, ok in results if not ok]
    summary = (f"all {len(results)} checks passed" if not failed
               else f"{len(failed)} of {len(results)} checks failed")
    fields = {"command": "verify", "checks": {name: ok for name, ok in results}, "summary": summary}
    report = Report(fields, ["check", "passed"], [[n, ok] for n, ok in results])
    report.failed = failed
    report.summary = summary
    return report


HANDLERS = {
    "spectrum": cmd_spectrum, "convert": cmd_convert, "stencil": cmd_stencil, "isospectral": cmd_isospectral,
    "potential": cmd_potential, "bc1": cmd_bc1, "classical": cmd_classical, "presets": cmd_presets,
    "verify": cmd_verify,
}


def run(spec: JobSpec) -> tuple[int, str, str]:
    """Execute ``spec``; returns ``(exit code, stdout text, stderr text)``."""
    if spec.command not in HANDLERS:
        return 1, "", f"usage error: unknown command {spec.command!r}\n"
    if spec.fmt not in ("json", "csv"):
        return 1, "", f"usage error: --format must be json or csv, got {spec.fmt!r}\n"
    try:
        report = HANDLERS[spec.command](spec.params)
    except UsageError as exc:
        return 1, "", f"usage error: {exc}\n"
    except DomainError as exc:
        return 2, "", f"domain error: {exc}\n"
    out = serialize(report, spec.fmt)
    if spec.command == "verify":
        err = report.summary + "\n"
        if report.failed:
            return 2, out, err + "".join(f"FAILED {n}\n" for n in report.failed)
        return 0, out, err
    return 0, out, ""


# ---------------------------------------------------------------------------
# argparse front end
# ---------------------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"usage error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="heuntop", description="Heun operator as the sl(2) top: spectra, lattices, potentials.")
    ap.add_argument("command", choices=COMMANDS)
    ap.add_argument("--format", default="json", choices=("json", "csv"))
    ap.add_argument("--out", help="write the report here instead of stdout")
    ap.add_argument("--preset", help="named parameter set (see the presets command)")
    for k in HEUN_KEYS:
        ap.add_argument(f"--{k}", metavar="P/Q")
    for k in ("nu", "delta", "q", "lambda", "mu"):
        ap.add_argument(f"--{k}", metavar="P/Q")
    ap.add_argument("--n", metavar="N")
    ap.add_argument("--k-max", dest="k_max", metavar="K")
    ap.add_argument("--direction", choices=("heun-to-top", "top-to-heun"))
    for k in TOP_KEYS:
        ap.add_argument("--" + k.replace("_", "-"), dest=k, metavar="P/Q")
    for k in ("x0", "x1", "q0", "p0", "tol"):
        ap.add_argument(f"--{k}", metavar="X")
    ap.add_argument("--t-end", dest="t_end", metavar="T")
    ap.add_argument("--steps", metavar="N")
    ap.add_argument("--samples", metavar="N")
    ap.add_argument("--seed", metavar="N")
    return ap


_NEGATIVE = re.compile(r"^-(\d+(/\d+)?|\d*\.\d+([eE][-+]?\d+)?)$")


def _join_negative_values(argv: list[str]) -> list[str]:
    """``--c0 -11/6`` -> ``--c0=-11/6``; argparse would take ``-11/6`` for an option."""
    out: list[str] = []
    for tok in argv:
        if out and _NEGATIVE.match(tok) and out[-1].startswith("--") and "=" not in out[-1]:
            out[-1] = f"{out[-1]}={tok}"
        else:
            out.append(tok)
    return out


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    args = vars(build_parser().parse_args(_join_negative_values(argv)))
    command, fmt, out_path = args.pop("command"), args.pop("format"), args.pop("out")
    code, out, err = run(JobSpec(command, {k: v for k, v in args.items() if v is not None}, fmt))
    if err:
        sys.stderr.write(err)
    if out:
        if out_path:
            with open(out_path, "w", encoding="utf-8", newline="") as fh:
                fh.write(out)
        else:
            sys.stdout.write(out)
    return code


if __name__ == "__main__":
    sys.exit(main())
