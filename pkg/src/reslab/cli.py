"""Command-line front end: config ingestion, tables as CSV/JSON, and the verification runner.

Exit codes: 0 success, 1 verification failure, 2 config error, 3 resource
guard, 4 precision exhaustion.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

import mpmath
import numpy as np

from . import counting, dioph, verify
from .cusp import AngleSpec, CuspGroup, enumerate_modes, make_group
from .errors import ExplosionGuard, PrecisionExhausted, ReslabError
from .specfn import PrecisionContext

SCHEMA_VERSION = "1"
EXIT_OK, EXIT_VERIFY, EXIT_CONFIG, EXIT_GUARD, EXIT_PRECISION = 0, 1, 2, 3, 4


class ConfigError(ReslabError, ValueError):
    pass


# ---------------------------------------------------------------- config

@dataclass
class Config:
    dimension_n: int
    cusps: list               # CuspGroup per cusp
    defaults: PrecisionContext
    worst_case: list          # WorstCaseSpec or None per cusp


def _angle(entry, default_bits):
    if isinstance(entry, str):
        return AngleSpec.parse(entry) if "/" in entry or entry.strip().lstrip("-").isdigit() \
            else AngleSpec.decimal(entry, default_bits)
    if isinstance(entry, dict) and "value" in entry:
        return AngleSpec.decimal(str(entry["value"]), int(entry.get("precision_bits", default_bits)))
    raise ConfigError(f"angle must be a 'p/q' string or {{value, precision_bits}}, got {entry!r}")


def parse_config(doc: dict) -> Config:
    """Validate a config tree and build its cusp groups."""
    if not isinstance(doc, dict):
        raise ConfigError("config must be an object")
    if str(doc.get("schema_version")) != SCHEMA_VERSION:
        raise ConfigError(f"schema_version must be {SCHEMA_VERSION!r}")
    try:
        n = int(doc["dimension_n"])
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError("dimension_n must be an integer") from exc
    d = doc.get("defaults") or {}
    try:
        ctx = PrecisionContext(d.get("mode", "binary64"), int(d.get("bits", 53)))
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"bad defaults: {exc}") from exc
    default_bits = max(ctx.bits, 64)
    cusps = doc.get("cusps")
    if not isinstance(cusps, list) or not cusps:
        raise ConfigError("cusps must be a nonempty list")
    groups, worst = [], []
    for i, c in enumerate(cusps):
        if not isinstance(c, dict):
            raise ConfigError(f"cusp {i} must be an object")
        if "worst_case" in c:
            w = c["worst_case"]
            spec = dioph.WorstCaseSpec(int(w.get("q", 1)), int(w.get("depth", 4)), float(w.get("ell", 1.0)),
                                       int(w.get("precision_bits", 65600)))
            groups.append(dioph.worst_case_group(spec, n))
            worst.append(spec)
            continue
        gens = c.get("generators")
        if not isinstance(gens, list) or not gens:
            raise ConfigError(f"cusp {i} needs a nonempty generator list")
        if "rank" in c and int(c["rank"]) != len(gens):
            raise ConfigError(f"cusp {i}: rank {c['rank']} does not match {len(gens)} generators")
        try:
            angles = [[_angle(a, default_bits) for a in gdoc["rotation_angles_over_2pi"]] for gdoc in gens]
            trans = [[float(Fraction(str(v))) if "/" in str(v) else float(str(v)) for v in gdoc["translation"]]
                     for gdoc in gens]
        except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
            raise ConfigError(f"cusp {i}: {exc}") from exc
        groups.append(make_group(n, angles, trans))
        worst.append(None)
    return Config(n, groups, ctx, worst)


def load_config(path: str) -> Config:
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    return parse_config(doc)


# ---------------------------------------------------------------- output

def fmt(v) -> str:
    """Locale-independent text for one table cell."""
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, mpmath.mpf):
        digits = max(17, mpmath.mp.prec // 3)
        return mpmath.nstr(v, digits, strip_zeros=False, min_fixed=1, max_fixed=0)
    if isinstance(v, (float, np.floating)):
        v = float(v)
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        return format(v, ".17g")
    return str(v)


@dataclass
class OutputTable:
    columns: list
    rows: list                # lists aligned with columns

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(self.columns)
        for r in self.rows:
            w.writerow([fmt(v) for v in r])
        return buf.getvalue()

    def to_json(self) -> str:
        recs = [{c: _jsonable(v) for c, v in zip(self.columns, r)} for r in self.rows]
        return json.dumps(recs, indent=1, allow_nan=False) + "\n"


def _jsonable(v):
    if isinstance(v, dict):
        return {str(k): _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if isinstance(v, (bool, np.bool_)):
        return bool(v)
    if isinstance(v, (int, np.integer)):
        return int(v)
    if isinstance(v, (complex, np.complexfloating)):
        return {"re": _jsonable(float(v.real)), "im": _jsonable(float(v.imag))}
    if isinstance(v, (float, np.floating)):
        v = float(v)
        return v if math.isfinite(v) else ("inf" if v > 0 else "-inf" if v < 0 else "nan")
    if isinstance(v, (mpmath.mpf, Fraction)):
        return fmt(v)
    return v


def _format_for(args) -> str:
    if getattr(args, "format", None):
        return args.format
    out = getattr(args, "out", None)
    return "json" if out and out.lower().endswith(".json") else "csv"


def _emit_text(text: str, out: str | None):
    if out:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def emit(table: OutputTable, args):
    _emit_text(table.to_json() if _format_for(args) == "json" else table.to_csv(), args.out)


def threads() -> int:
    try:
        return max(1, int(os.environ.get("RESLAB_THREADS", "1")))
    except ValueError:
        return 1


def _grid(text: str, name: str) -> list:
    """'a,b,c' or 'start:stop:count' (geometric when prefixed with 'geom:')."""
    try:
        if text.startswith("geom:"):
            a, b, k = text[5:].split(":")
            vals = np.geomspace(float(a), float(b), int(k)).tolist()
        elif text.count(":") == 2:
            a, b, k = text.split(":")
            vals = np.linspace(float(a), float(b), int(k)).tolist()
        else:
            vals = [float(v) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        raise ConfigError(f"bad {name} {text!r}") from exc
    if not vals:
        raise ConfigError(f"empty {name}")
    return sorted(vals)


# ---------------------------------------------------------------- commands

def cmd_modes(args) -> int:
    cfg = load_config(args.config)
    groups = cfg.cusps
    width = max(g.rank for g in groups)
    rows = []
    for cid, g in enumerate(groups):
        modes = enumerate_modes(g, args.m_max, args.b_max, cap=args.cap)
        for md in sorted(modes, key=lambda md: (md.m, md.b, md.p, md.vstar)):
            vs = list(md.vstar) + [None] * (width - len(md.vstar))
            rows.append([cid, md.m, md.p, *vs, md.b, md.is_zero])
    cols = ["cusp_id", "m", "p", *[f"vstar_{i + 1}" for i in range(width)], "b", "is_zero"]
    emit(OutputTable(cols, rows), args)
    return EXIT_OK


def worst_case_slope(spec: dioph.WorstCaseSpec, g: CuspGroup) -> dict:
    """Log-log slope of the growth function at the terms a_k >= 16 and their squares below a_depth."""
    a = dioph.worst_case_sequence(spec.q, spec.depth)
    us = sorted({u for u in a if u >= 16} | {u * u for u in a if 16 <= u and u * u < a[-1]})
    vals = [dioph.lambda_growth(g, u)[0] for u in us]
    return {"u": us, "lambda": vals, "slope": dioph.loglog_slope(us, vals) if len(us) > 1 else None,
            "expected_slope": spec.q + 1}


def cmd_lambda(args) -> int:
    cfg = load_config(args.config)
    us = _grid(args.u_grid, "u grid")
    if any(u <= 0 for u in us):
        raise ConfigError("u grid must be positive")
    cols = ["u"]
    for cid in range(len(cfg.cusps)):
        cols += [f"lambda_{cid}", f"witness_m_{cid}", f"witness_b_{cid}"]
    cols.append("lambda_x")
    rows = []
    for u in us:
        row, best = [u], -math.inf
        for g in cfg.cusps:
            val, wit = dioph.lambda_growth(g, u)
            best = max(best, val)
            row += [val, wit[0] if wit else None, wit[1].b if wit and wit[1] is not None else None]
        rows.append(row + [best])
    emit(OutputTable(cols, rows), args)
    meta = {str(cid): worst_case_slope(spec, g)
            for cid, (spec, g) in enumerate(zip(cfg.worst_case, cfg.cusps)) if spec is not None}
    if meta:
        text = json.dumps({"worst_case_slope_check": _jsonable(meta)}, indent=1, sort_keys=True)
        if args.out:
            _emit_text(text + "\n", args.out + ".meta.json")
        sys.stderr.write(text + "\n")
    return EXIT_OK


def cmd_resonances(args) -> int:
    if not args.R > 0:
        raise ConfigError("R must be positive")
    rows = []
    if args.config:
        cfg = load_config(args.config)
        for g in cfg.cusps:
            for p in counting.cusp_pole_lattice(g, args.R, args.c_bound):
                rows.append([p.location.real, p.location.imag, p.multiplicity, p.exactness])
    else:
        if args.n is None:
            raise ConfigError("give --n or --config")
        pts, _ = counting.hyperbolic_resonances(args.n, args.R)
        rows = [[p.location.real, p.location.imag, p.multiplicity, p.exactness] for p in pts]
    emit(OutputTable(["location_re", "location_im", "multiplicity", "exactness"], rows), args)
    return EXIT_OK


def cmd_bound(args) -> int:
    cfg = load_config(args.config)
    Rs = _grid(args.R_grid, "R grid")
    if any(R <= 1 for R in Rs):
        raise ConfigError("R must exceed 1")
    rows = []
    for R in Rs:
        gen = counting.theorem_bound(cfg.cusps, cfg.dimension_n, R, args.C)
        dio = counting.theorem_bound(cfg.cusps, cfg.dimension_n, R, args.C, diophantine_form=True) \
            if args.diophantine else None
        rows.append([R, gen, dio])
    emit(OutputTable(["R", "bound_general", "bound_diophantine"], rows), args)
    return EXIT_OK


SUITES = ("beta", "bessel", "fkernel", "resolvent", "coefficients", "wronskian")


def corrupted_bessel():
    """A deliberately wrong K (breaks K_{-λ} = K_λ), used to exercise the failure path."""
    from .specfn import bessel_i, bessel_ik, bessel_k

    def k(lam, x):
        return bessel_k(lam, x) * math.exp(0.01 * complex(lam).real)

    def ik(lam, x, ctx=None):
        i, kk = bessel_ik(lam, x)
        return i, kk * math.exp(0.01 * complex(lam).real)
    return (k, lambda lam, x: bessel_i(lam, x)), ik


def run_suite(name: str, grid_scale: float, fault: bool = False) -> dict:
    pair, ik = corrupted_bessel() if fault else (None, None)
    if name == "beta":
        rep = verify.verify_beta_bounds(grid_scale)
    elif name == "bessel":
        rep = verify.verify_bessel_bounds(grid_scale, bessel=pair)
    elif name == "fkernel":
        rep = verify.verify_f_bound(grid_scale, bessel=pair)
    elif name == "coefficients":
        rep = verify.verify_coefficients()
    elif name == "wronskian":
        count = max(2, round(100 * grid_scale))
        rep = verify.verify_wronskian(n_lambda=count, n_x=max(2, round(40 * grid_scale)), bessel_pair=ik)
    elif name == "resolvent":
        rep = verify.verify_resolvent_consistency()
        from .hyperbolic import HalfSpacePoint
        w, wp = HalfSpacePoint(0.7, (0.1,)), HalfSpacePoint(1.3, (-0.4,))
        res = []
        for k in range(3):
            got, want = verify.residue_contour_check(1, k, w, wp)
            res.append({"n": 1, "k": k, "contour": got, "residue": want, "rel_dev": abs(got - want) / abs(want)})
        got, _ = verify.residue_contour_check(2, 1, HalfSpacePoint(0.7, (0.1, 0.2)), HalfSpacePoint(1.3, (-0.4, 0.3)))
        res.append({"n": 2, "k": 1, "contour": got, "residue": 0.0, "abs": abs(got)})
        ok = all(r.get("rel_dev", 0) < 1e-6 for r in res) and abs(got) < 1e-8
        rep = rep._replace(stable=rep.stable and ok, details={**rep.details, "residues": res})
    else:
        raise ConfigError(f"unknown suite {name!r}")
    return _jsonable(rep._asdict())


def cmd_verify(args) -> int:
    names = SUITES if args.suite == "all" else (args.suite,)
    if not args.grid_scale > 0:
        raise ConfigError("grid scale must be positive")
    workers = min(threads(), len(names))
    if workers > 1:
        with ProcessPoolExecutor(workers) as ex:
            reports = list(ex.map(run_suite, names, [args.grid_scale] * len(names), [args.inject_fault] * len(names)))
    else:
        reports = [run_suite(n, args.grid_scale, args.inject_fault) for n in names]
    ok = all(r["stable"] for r in reports)
    doc = {"schema_version": SCHEMA_VERSION, "pass": ok, "suites": dict(zip(names, reports))}
    _emit_text(json.dumps(doc, indent=1, sort_keys=True, allow_nan=False) + "\n", args.out)
    for n, r in zip(names, reports):
        sys.stderr.write(f"{n}: {'stable' if r['stable'] else 'FAILED'} deficit_sup={fmt(r['deficit_sup'])}\n")
    return EXIT_OK if ok else EXIT_VERIFY


def cmd_worstcase(args) -> int:
    spec = dioph.WorstCaseSpec(args.q, args.depth, args.ell, args.precision_bits)
    _, rows, _ = dioph.worst_case_angle(spec)
    out = []
    with mpmath.workprec(spec.precision_bits):
        for k, r in enumerate(rows, start=1):
            out.append([k, r.m, r.m, r.predicted_b, r.computed_b, r.computed_b / r.predicted_b])
    with mpmath.workprec(spec.precision_bits):
        emit(OutputTable(["k", "a_k", "m", "predicted_b", "computed_b", "ratio"], out), args)
    return EXIT_OK


# ---------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="reslab", description="Resonance and cusp-model computations.")
    sub = p.add_subparsers(dest="command", required=True)

    def out_opts(sp):
        sp.add_argument("--out", help="output path (stdout when omitted)")
        sp.add_argument("--format", choices=("csv", "json"), help="defaults to the --out extension, else csv")

    sp = sub.add_parser("modes", help="enumerate Fourier-Bessel modes of each cusp")
    sp.add_argument("--config", required=True)
    sp.add_argument("--m-max", type=int, required=True)
    sp.add_argument("--b-max", type=float, required=True)
    sp.add_argument("--cap", type=int, default=2_000_000, help="abort above this many candidate modes")
    out_opts(sp)
    sp.set_defaults(func=cmd_modes)

    sp = sub.add_parser("lambda", help="growth function of each cusp on a u grid")
    sp.add_argument("--config", required=True)
    sp.add_argument("--u-grid", required=True, help="'a,b,c', 'lo:hi:count' or 'geom:lo:hi:count'")
    out_opts(sp)
    sp.set_defaults(func=cmd_lambda)

    sp = sub.add_parser("resonances", help="model resonances or cusp pole candidates")
    sp.add_argument("--n", type=int)
    sp.add_argument("--config")
    sp.add_argument("--R", type=float, required=True)
    sp.add_argument("--c-bound", type=float, default=1.0, help="rank-bound constant for cusp poles")
    out_opts(sp)
    sp.set_defaults(func=cmd_resonances)

    sp = sub.add_parser("bound", help="resonance counting bounds on an R grid")
    sp.add_argument("--config", required=True)
    sp.add_argument("--R-grid", required=True)
    sp.add_argument("--C", type=float, default=1.0)
    sp.add_argument("--diophantine", action="store_true", help="also emit the Diophantine-form bound")
    out_opts(sp)
    sp.set_defaults(func=cmd_bound)

    sp = sub.add_parser("verify", help="run verification suites; JSON report")
    sp.add_argument("--suite", choices=SUITES + ("all",), default="all")
    sp.add_argument("--grid-scale", type=float, default=1.0)
    sp.add_argument("--out")
    sp.add_argument("--inject-fault", action="store_true", help=argparse.SUPPRESS)
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("worstcase", help="worst-case Liouville-type rotation angle table")
    sp.add_argument("--q", type=int, default=1)
    sp.add_argument("--depth", type=int, default=4)
    sp.add_argument("--ell", type=float, default=1.0)
    sp.add_argument("--precision-bits", type=int, default=65600)
    out_opts(sp)
    sp.set_defaults(func=cmd_worstcase)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ExplosionGuard as exc:
        sys.stderr.write(f"resource guard: {exc}\n")
        return EXIT_GUARD
    except PrecisionExhausted as exc:
        sys.stderr.write(f"precision exhausted: {exc}\n")
        return EXIT_PRECISION
    except ReslabError as exc:
        sys.stderr.write(f"config error: {exc}\n")
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
