"""Command line front end.

    atiyah-sasaki report MODEL.yaml [--out P] [--samples N] [--seed S] [--tol T]
    atiyah-sasaki verify SUITE [--samples N] [--seed S] [--tol T] [--model F] [--corrupt]
    atiyah-sasaki scan GRID --out FILE.csv

Exit codes: 0 success, 1 verification failure, 2 usage or parse error.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
import time
from fractions import Fraction
from pathlib import Path

import numpy as np
import yaml

from . import kernels
from .algebra import ExactnessError, to_fraction
from .atiyah import FiberPair, supra_vanishes, varpi_space_form, xi_closed_space_form
from .base_geometry import ModelError, SpaceForm
from .io import DocumentError, load_model
from .sphere_bundle import (AtiyahBundle, SphereBundleModel, _float_model, _largest_r, constant_scalar_check,
                            default_constants, einstein_check, eqcurv1, positivity_bounds,
                            ricci_matrix, ricci_trace, sample_planes, scalar, sectional_batch)
from .suites import SUITES
from .unimodular3 import PRINTED_CASES, scan_parameters, write_scan_csv

DEFAULT_SEED = 20240101


class UsageError(Exception):
    pass


def _jsonable(x):
    if isinstance(x, Fraction):
        return {"exact": f"{x.numerator}/{x.denominator}", "float": float(x)}
    if isinstance(x, (np.floating, float)):
        x = float(x)
        return x if math.isfinite(x) else str(x)
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, (np.bool_,)):
        return bool(x)
    if isinstance(x, np.ndarray):
        return [_jsonable(v) for v in x.tolist()]
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    return x


def dumps(obj) -> str:
    return json.dumps(_jsonable(obj), sort_keys=True, indent=2) + "\n"


def build_report(doc, samples: int = 1000, seed: int = DEFAULT_SEED, tol: float = 1e-9,
                 timing: bool = False) -> dict:
    t0 = time.perf_counter()
    model: SphereBundleModel = doc.model
    fm = _float_model(model)
    rng = np.random.default_rng(seed)
    tau = scalar(model)
    out = {
        "inputs": {"document": doc.data, "source": Path(doc.source).name, "samples": samples, "seed": seed, "tol": tol},
        "model": {"n": model.n, "m": model.m, "r": model.r, "exact": model.exact,
                  "bundle": model.bundle.kind, "a": model.a},
        "scalar": {"tau": tau, "base_scalar": model.s_M, "ricci_trace": ricci_trace(model)},
    }
    if samples > 0:
        K = sectional_batch(fm, *sample_planes(fm, samples, rng))
        out["sectional"] = {"min": float(K.min()), "max": float(K.max()), "mean": float(K.mean()), "samples": samples}
    ev = np.linalg.eigvalsh(ricci_matrix(fm))
    out["ricci"] = {"min": float(ev[0]), "max": float(ev[-1]), "spread": float(ev[-1] - ev[0])}
    ein = einstein_check(fm, samples=min(samples, 1000), seed=seed, tol=tol)
    out["einstein"] = {"einstein": ein.einstein, "constant": ein.constant, "method": ein.method,
                       "witness": ein.witness}
    cs = constant_scalar_check(model)
    out["constant_scalar"] = {"s1": cs.s1, "ratio": cs.ratio, "spread": cs.spread, "s2": cs.s2, "witness": cs.witness}
    if isinstance(model.bundle, AtiyahBundle):
        van = supra_vanishes(model.spec)
        out["supra"] = {"vanishes": van.vanishes, "method": van.method, "witness": van.witness}
        if isinstance(model.base, SpaceForm):
            fr = model.spec.frame.split(model.a)
            xi = xi_closed_space_form(model.n, model.base.c if model.exact else float(model.base.c),
                                      model.spec.k, FiberPair(fr.tangent, fr.skew))
            out["supra"]["varpi"] = varpi_space_form(to_fraction(model.base.c) if model.exact else float(model.base.c),
                                                     model.spec.k)
            out["supra"]["xi_closed"] = xi
            out["supra"]["tau_closed"] = model.s_M + (model.m - 1) * (model.m - 2) / model.r ** 2 - xi / 4
    consts = default_constants(fm)
    which = ["thek_rank2"] if model.m == 2 else ["eqcurv1", "vertical"]
    usable = [w for w in which if consts.get("C") is not None or w == "vertical"]
    if consts["rho"] > 0:
        usable.append("thricci")
    out["bounds"] = {"constants": consts, "results": positivity_bounds(fm, consts, usable) if usable else {}}
    if timing:
        out["timing_s"] = time.perf_counter() - t0
        out["backend"] = kernels.BACKEND
    return out


def cmd_report(args) -> int:
    doc = load_model(args.file)
    rep = build_report(doc, args.samples, args.seed, args.tol, args.timing)
    text = dumps(rep)
    _emit(text, args.out)
    return 0


def _emit(text: str, out):
    if out in (None, "-"):
        sys.stdout.write(text)
        return
    try:
        Path(out).write_text(text)
    except OSError as exc:
        raise UsageError(f"cannot write {out}: {exc.strerror}") from None


def cmd_verify(args) -> int:
    if args.suite not in SUITES:
        raise UsageError(f"unknown suite {args.suite!r}; choose from {', '.join(sorted(SUITES))}")
    kw = {}
    models = None
    if args.model:
        doc = load_model(args.model)
        models = [(Path(args.model).stem, _float_model(doc.model))]
    if args.suite in ("trace-identity", "basis-invariance", "cp-trace", "supra-vanishing"):
        kw["seed"] = args.seed
        if args.samples is not None:
            kw["samples"] = args.samples
    if args.tol is not None and args.suite != "milnor-tables":
        kw["tol"] = args.tol
    if models is not None and args.suite in ("trace-identity", "skew-adjoint", "basis-invariance", "xi-psd"):
        kw["models"] = models
    if args.corrupt:
        if args.suite != "skew-adjoint":
            raise UsageError("--corrupt only applies to the skew-adjoint suite")
        kw["corrupt"] = True
    res = SUITES[args.suite](**kw)
    for c in res.checks:
        print(f"{'PASS' if c.ok else 'FAIL'} {res.name}: {c.label}")
        if not c.ok or c.detail.get("flag"):
            print("  " + json.dumps(_jsonable(c.detail), sort_keys=True))
    print(f"{res.name}: {'pass' if res.passed else 'FAIL'} ({len(res.checks) - len(res.failures())}/{len(res.checks)})")
    return 0 if res.passed else 1


def _fmt(x) -> str:
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, Fraction):
        return f"{x.numerator}/{x.denominator}"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return format(float(x), ".17g")


def ksweep_rows(n: int, c, ks, r=1.0):
    rows = []
    for k in ks:
        k = float(k)
        w = varpi_space_form(float(c), k)
        K = 8 * abs(w)
        val = eqcurv1(float(c), K, float(r), n)
        rmax = _largest_r(lambda s: eqcurv1(float(c), K, s, n) >= 0)
        rows.append([k, w, K, val, val >= 0, rmax])
    return rows


KSWEEP_HEADER = ["k", "varpi", "K", "eqcurv1_at_r", "holds_at_r", "r_max"]


def _parse_grid(spec: str) -> dict:
    """Grid specs: 'reference-cases', 'milnor:LO:HI:STEP', 'ksweep:N:C:KLO:KHI:STEP[:R]' or a YAML file."""
    if spec == "reference-cases":
        return {"kind": "milnor", "points": [p for p, _, _ in PRINTED_CASES]}
    if spec.startswith("milnor:"):
        parts = spec.split(":")[1:]
        if len(parts) != 3:
            raise UsageError("milnor grid is milnor:LO:HI:STEP")
        lo, hi, st = parts
        return {"kind": "milnor", "ranges": {k: (lo, hi) for k in "mnp"}, "step": st}
    if spec.startswith("ksweep:"):
        parts = spec.split(":")[1:]
        if len(parts) not in (5, 6):
            raise UsageError("k-sweep grid is ksweep:N:C:KLO:KHI:STEP[:R]")
        return {"kind": "ksweep", "n": int(parts[0]), "c": parts[1], "k": parts[2:5],
                "r": parts[5] if len(parts) == 6 else 1}
    p = Path(spec)
    if not p.exists():
        raise UsageError(f"unknown grid {spec!r} (not a preset and no such file)")
    try:
        data = yaml.safe_load(p.read_text())
    except yaml.YAMLError as exc:
        mark = getattr(exc, "problem_mark", None)
        where = f":{mark.line + 1}:{mark.column + 1}" if mark else ""
        raise UsageError(f"{spec}{where}: invalid YAML") from None
    if not isinstance(data, dict) or "kind" not in data:
        raise UsageError(f"{spec}: grid file needs a 'kind' field")
    return data


def cmd_scan(args) -> int:
    g = _parse_grid(args.grid)
    try:
        if g["kind"] == "milnor":
            if "points" in g:
                res = scan_parameters(points=g["points"], workers=args.workers)
            else:
                res = scan_parameters(ranges=g["ranges"], step=g["step"], workers=args.workers)
            text = write_scan_csv(res)
            summary = res.summary()
        elif g["kind"] == "ksweep":
            lo, hi, st = (to_fraction(x) for x in g["k"])
            if st <= 0:
                raise UsageError("k step must be positive")
            ks, k = [], lo
            while k <= hi:
                if k > 0:
                    ks.append(k)
                k += st
            if not ks:
                raise ValueError("empty grid")
            rows = ksweep_rows(int(g["n"]), to_fraction(g["c"]), ks, float(to_fraction(g.get("r", 1))))
            buf = io.StringIO()
            w = csv.writer(buf, lineterminator="\n")
            w.writerow(KSWEEP_HEADER)
            for row in rows:
                w.writerow([_fmt(v) if not (isinstance(v, float) and math.isinf(v)) else "inf" for v in row])
            text = buf.getvalue()
            summary = {"rows": len(rows), "holds": sum(1 for r_ in rows if r_[4])}
        else:
            raise UsageError(f"unknown grid kind {g['kind']!r}")
    except (ValueError, KeyError) as exc:
        raise UsageError(f"bad grid: {exc}") from None
    if args.out in (None, "-"):
        sys.stdout.write(text)
    else:
        _emit(text, args.out)
        print(json.dumps(summary, sort_keys=True), file=sys.stderr)
    return 0


def make_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="atiyah-sasaki", description="Curvature of sphere bundles with the Sasaki metric.")
    sub = ap.add_subparsers(dest="cmd", required=True)
    r = sub.add_parser("report", help="evaluate every invariant of a model document")
    r.add_argument("file")
    r.add_argument("--out")
    r.add_argument("--samples", type=int, default=1000)
    r.add_argument("--seed", type=int, default=DEFAULT_SEED)
    r.add_argument("--tol", type=float, default=1e-9)
    r.add_argument("--timing", action="store_true", help="include wall time (breaks byte-identical output)")
    r.set_defaults(func=cmd_report)
    v = sub.add_parser("verify", help="run a named property suite")
    v.add_argument("suite", help=", ".join(sorted(SUITES)))
    v.add_argument("--samples", type=int)
    v.add_argument("--seed", type=int, default=DEFAULT_SEED)
    v.add_argument("--tol", type=float)
    v.add_argument("--model", help="run on this model document instead of the built-in ones")
    v.add_argument("--corrupt", action="store_true", help="perturb a table (negative control)")
    v.set_defaults(func=cmd_verify)
    s = sub.add_parser("scan", help="parameter scans written as CSV")
    s.add_argument("grid", help="reference-cases | milnor:LO:HI:STEP | ksweep:N:C:KLO:KHI:STEP[:R] | grid.yaml")
    s.add_argument("--out")
    s.add_argument("--workers", type=int, default=1)
    s.set_defaults(func=cmd_scan)
    return ap


def main(argv=None) -> int:
    ap = make_parser()
    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except (DocumentError, UsageError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ModelError, ExactnessError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
