"""Command-line interface.

Subcommands: count, scan, fit-exponent, approx, nearfar, verify.
All commands accept --config pointing at a flat key=value file (keys:
default_Q, default_eta, default_epsilon, quad_tol, jobs); explicit flags
override config values.  The environment variable CIRCLESUM_OUT_DIR, when
set, prefixes relative output paths.

Exit codes: 0 success / all checks pass, 1 verification failure,
2 domain or usage error, 3 unwritable output path, 4 too few dyadic blocks.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from datetime import datetime, timezone
from pathlib import Path

from . import __version__
from .counting import BACKEND, count_lattice

CONFIG_KEYS = ("default_Q", "default_eta", "default_epsilon", "quad_tol", "jobs")


def load_config(path: str | None) -> dict:
    if path is None:
        return {}
    cfg = {}
    text = Path(path).read_text(encoding="utf-8")
    for ln, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"{path}:{ln}: expected key = value")
        key, value = (s.strip() for s in line.split("=", 1))
        if key not in CONFIG_KEYS:
            raise ValueError(f"{path}:{ln}: unknown key {key!r}")
        cfg[key] = value
    return cfg


def _resolve_out(path: str) -> Path:
    base = os.environ.get("CIRCLESUM_OUT_DIR")
    p = Path(path)
    if base and not p.is_absolute():
        return Path(base) / p
    return p


def cmd_count(args) -> int:
    try:
        res = count_lattice(args.t, args.method)
    except (ValueError, OverflowError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(f"P({res.t}) = {res.count}")
    return 0


def cmd_scan(args, cfg) -> int:
    from . import experiment

    jobs = args.jobs if args.jobs is not None else int(cfg.get("jobs", 1))
    try:
        records = experiment.scan(args.t_min, args.t_max, args.stride,
                                  method=args.method, jobs=jobs,
                                  slow_ok=args.slow_ok)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    out = _resolve_out(args.out)
    started = datetime.now(timezone.utc).isoformat()
    try:
        digest = experiment.write_csv(records, out)
    except OSError as exc:
        print(f"error: cannot write {out}: {exc}", file=sys.stderr)
        return 3
    manifest = experiment.RunManifest(
        command=" ".join(sys.argv),
        config={k: cfg[k] for k in sorted(cfg)},
        seed=None,
        version=__version__,
        started_utc=started,
        finished_utc=datetime.now(timezone.utc).isoformat(),
        digest_sha256=digest,
        rows=len(records),
    )
    try:
        Path(str(out) + ".manifest.json").write_text(manifest.to_json() + "\n",
                                                     encoding="utf-8")
    except OSError as exc:
        print(f"error: cannot write manifest: {exc}", file=sys.stderr)
        return 3
    print(f"wrote {len(records)} records to {out} (digest {digest[:16]}...)")
    return 0


def cmd_fit_exponent(args) -> int:
    from . import experiment

    try:
        records = experiment.read_csv(args.csv)
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    try:
        fit = experiment.fit_exponent(records)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4
    print(f"dyadic blocks: {fit.n_blocks}")
    print(f"slope = {fit.slope:.6f}  (stderr {fit.stderr:.6f}, "
          f"95% band [{fit.ci_low:.6f}, {fit.ci_high:.6f}])")
    for t, m, r in zip(fit.block_t, fit.block_max, fit.residuals):
        print(f"  block max at t={t}: |delta|={m:.6f}  residual={r:+.4f}")
    return 0


def cmd_approx(args, cfg) -> int:
    from .diskapprox import TruncationParams, bessel_sum, disk_quadrature_sum

    q_default = int(cfg.get("default_Q", 3))
    Q = args.Q if args.Q is not None else q_default
    try:
        params = TruncationParams(Q, fourier_N=args.fourier_N or 0,
                                  mu_max=args.mu_max or 0, nu_max=args.nu_max or 0)
        rep = bessel_sum(args.t, params)
    except (ValueError, OverflowError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(f"t = {rep.t}, Q = {Q}, cutoffs mu/nu = {params.mu_max}/{params.nu_max}")
    print(f"bessel-sum value   = {rep.approx_value:.6f}")
    print(f"exact count        = {rep.exact_P}")
    print(f"abs error          = {rep.abs_error:.6f}")
    print(f"normalized (Q/rt)  = {rep.normalized_error:.6f}")
    if args.with_quadrature:
        quad_tol = float(cfg.get("quad_tol", 1e-7))
        try:
            fq = disk_quadrature_sum(args.t, params, tol=quad_tol)
        except ValueError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 2
        print(f"quadrature value   = {fq:.6f}")
        print(f"|quadrature - bessel| = {abs(fq - rep.approx_value):.6f}")
    return 0


def cmd_nearfar(args, cfg) -> int:
    from .nearfar import SplitParams, default_r_cutoff, nearfar_report

    eps = float(cfg.get("default_epsilon", 0.05))
    eta = args.eta if args.eta is not None else float(cfg.get("default_eta", 0.1))
    R = args.R if args.R is not None else default_r_cutoff(args.t, eps)
    try:
        split = SplitParams(args.t, eta)
        rep = nearfar_report(args.t, R=R, mu_max=args.mu_max,
                             skip_direct=args.skip_direct)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(f"t = {rep.t}, R = {rep.R}")
    print(f"split: eta = {eta}, near-zone half-width tau = {split.tau}, "
          f"alpha = {split.alpha}, n in [{split.n_range[0]}, {split.n_range[1]}]")
    if rep.E_direct is not None:
        print(f"near-circle sum, direct  = {rep.E_direct:.8f}")
    print(f"near-circle sum, reduced = {rep.E_reduced:.8f}")
    if rep.E_direct is not None:
        print(f"|direct - reduced| / ln^2 t = "
              f"{abs(rep.E_direct - rep.E_reduced) / math.log(rep.t) ** 2:.6f}")
    if rep.L_value is not None:
        print(f"shifted-cosine functional = {rep.L_value:.8f}")
    print(f"sawtooth circle sum = {rep.psi_sum:.8f}")
    print(f"residual vs (pi t - P(t))/8 = {rep.pick_residual:.8f}")
    return 0


def cmd_verify(args) -> int:
    from .verify import SUITES, run_suite

    if args.suite not in SUITES:
        print(f"error: unknown suite {args.suite!r}; choose from {', '.join(SUITES)}",
              file=sys.stderr)
        return 2
    report = run_suite(args.suite, quick=args.quick)
    for c in report["checks"]:
        status = "PASS" if c["pass"] else "FAIL"
        print(f"[{status}] {c['name']}: residual {c['residual']:.3e} "
              f"(bound {c['bound']:.3e})")
    print(f"suite {report['suite']}: {'PASS' if report['pass'] else 'FAIL'}")
    if args.json:
        out = _resolve_out(args.json)
        try:
            out.write_text(json.dumps(report, indent=2) + "\n", encoding="utf-8")
        except OSError as exc:
            print(f"error: cannot write {out}: {exc}", file=sys.stderr)
            return 3
    return 0 if report["pass"] else 1


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="circlesum",
        description="Lattice points in circles: exact counts, summation "
                    "formulas, Bessel-sum approximations, error-term scans "
                    f"(counting backend: {BACKEND})")
    ap.add_argument("--config", help="flat key=value config file")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("count", help="exact lattice count P(t)")
    p.add_argument("--t", type=int, required=True)
    p.add_argument("--method", choices=("rows", "brute", "kernel"), default="rows")

    p = sub.add_parser("scan", help="discrepancy scan over a t range")
    p.add_argument("--t-min", type=int, default=1)
    p.add_argument("--t-max", type=int, required=True)
    p.add_argument("--stride", type=int, default=1)
    p.add_argument("--method", choices=("rows", "brute"), default="rows")
    p.add_argument("--out", required=True)
    p.add_argument("--jobs", type=int, default=None)
    p.add_argument("--slow-ok", action="store_true")

    p = sub.add_parser("fit-exponent", help="dyadic-max slope of a scan CSV")
    p.add_argument("--csv", required=True)

    p = sub.add_parser("approx", help="Bessel-sum approximation diagnostics")
    p.add_argument("--t", type=int, required=True)
    p.add_argument("--Q", type=int, default=None)
    p.add_argument("--mu-max", type=int, default=None)
    p.add_argument("--nu-max", type=int, default=None)
    p.add_argument("--fourier-N", type=int, default=None)
    p.add_argument("--with-quadrature", action="store_true")

    p = sub.add_parser("nearfar", help="near/far circle analysis at one t")
    p.add_argument("--t", type=int, required=True)
    p.add_argument("--R", type=int, default=None)
    p.add_argument("--eta", type=float, default=None)
    p.add_argument("--mu-max", type=int, default=None)
    p.add_argument("--skip-direct", action="store_true")

    p = sub.add_parser("verify", help="run a named invariant suite")
    p.add_argument("--suite", required=True)
    p.add_argument("--quick", action="store_true")
    p.add_argument("--json", help="also write the JSON report here")
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        cfg = load_config(args.config)
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    if args.command == "count":
        code = cmd_count(args)
    elif args.command == "scan":
        code = cmd_scan(args, cfg)
    elif args.command == "fit-exponent":
        code = cmd_fit_exponent(args)
    elif args.command == "approx":
        code = cmd_approx(args, cfg)
    elif args.command == "nearfar":
        code = cmd_nearfar(args, cfg)
    elif args.command == "verify":
        code = cmd_verify(args)
    else:  # pragma: no cover
        code = 2
    return code


if __name__ == "__main__":
    sys.exit(main())
