"""Command line: ``verify``, ``orbits`` and ``limits``."""

from __future__ import annotations

import argparse
import json
import sys
from collections import Counter

from .boundary import (
    diag_orbit_class,
    hsigma1_orbit_class,
    hsigma_m_invariant,
    sample_ext_p1,
    sample_p1,
    slf_orbit_on_ext_boundary,
)
from .errors import ConfigError
from .extension import ExtField
from .limits import Converged, Direction, LimitFamily, detect_limit, limit_sequence, predicted_accumulation
from .projective import proj_depth
from .report import emit_report
from .suites import EXT_NAMES, M_NAMES, SUITES, Config, parse_b, run_suite

EXIT_PASS, EXIT_FAIL, EXIT_CONFIG = 0, 1, 2


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--prime", type=int, default=5)
    p.add_argument("--precision", type=int, default=12)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--involution", choices=("diag", "conj", "inner"), default="inner")
    p.add_argument("--m", choices=tuple(M_NAMES), default="one")
    p.add_argument("--ext", choices=tuple(EXT_NAMES), default="unram")
    p.add_argument("--format", choices=("json", "text"), default="json")
    p.add_argument("--tau", type=int, default=None, help="rank threshold (default N - 2)")
    p.add_argument("--figures", metavar="DIR", default=None, help="also write PNG figures to DIR")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(prog="wonderful-sl2", description="p-adic checks for SL(2) symmetric varieties")
    sub = parser.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", parents=[common], help="run a verification suite")
    v.add_argument("suite", choices=SUITES + ("all",))
    v.add_argument("--b", default="2", help="family parameter: rational, or 'u,w' for u + w alpha")
    v.add_argument("--n-max", type=int, default=None)
    v.add_argument("--direction", choices=("contract", "expand"), default="contract")
    v.add_argument("--parallel", action="store_true")

    o = sub.add_parser("orbits", parents=[common], help="label histogram of random boundary points")
    o.add_argument("--space", choices=("f", "e"), default="f")
    o.add_argument("--group", choices=("diag", "h1", "hm", "slf"), default="diag")

    li = sub.add_parser("limits", parents=[common], help="print one limit sequence")
    li.add_argument("--b", default="2")
    li.add_argument("--n-max", type=int, default=None)
    li.add_argument("--direction", choices=("contract", "expand"), default="contract")
    return parser


def _config(args) -> Config:
    cfg = Config(
        prime=args.prime,
        precision=args.precision,
        seed=args.seed,
        trials=args.trials,
        involution=args.involution,
        m=args.m,
        ext=args.ext,
        b=getattr(args, "b", "2"),
        n_max=getattr(args, "n_max", None),
        direction=getattr(args, "direction", "contract"),
        tau=args.tau,
    )
    cfg.validate()
    return cfg


def _write(data: bytes) -> None:
    sys.stdout.buffer.write(data)
    sys.stdout.flush()


def cmd_verify(args) -> int:
    cfg = _config(args)
    report = run_suite(args.suite, cfg, parallel=args.parallel)
    _write(emit_report(report, args.format))
    if args.figures:
        from .plotting import report_figures

        for path in report_figures(report.to_dict(), args.figures):
            print(f"figure: {path}", file=sys.stderr)
    return EXIT_PASS if report.ok else EXIT_FAIL


def orbit_histogram(cfg: Config, space: str, group: str) -> Counter:
    F = cfg.field
    rng = cfg.rng(f"orbits.{space}.{group}")
    if group == "slf" or space == "e":
        if group != "slf":
            raise ConfigError(f"group {group} acts on P^1(F); use --space f")
        E = ExtField(F, EXT_NAMES[cfg.ext])
        return Counter(slf_orbit_on_ext_boundary(sample_ext_p1(rng, E)) for _ in range(cfg.trials))
    pts = [sample_p1(rng, F) for _ in range(cfg.trials)]
    if group == "diag":
        return Counter(diag_orbit_class(x) for x in pts)
    if group == "h1":
        return Counter(hsigma1_orbit_class(x) for x in pts)
    if cfg.m == "one":
        raise ConfigError("--group hm needs --m u|pi|upi")
    m = F.class_rep(M_NAMES[cfg.m])
    # class of m x^2 - y^2, constant on H_{sigma_m}-orbits
    return Counter(hsigma_m_invariant(m, x).value for x in pts)


def cmd_orbits(args) -> int:
    cfg = _config(args)
    hist = orbit_histogram(cfg, args.space, args.group)
    hist = dict(sorted(hist.items()))
    if args.format == "json":
        doc = {"params": cfg.params() | {"space": args.space, "group": args.group, "points": cfg.trials}, "histogram": hist}
        _write((json.dumps(doc, indent=2) + "\n").encode())
    else:
        width = max(len(k) for k in hist)
        lines = [f"{'label':<{width}}  count"] + [f"{k:<{width}}  {v}" for k, v in hist.items()]
        _write(("\n".join(lines) + "\n").encode())
    if args.figures:
        from pathlib import Path

        from .plotting import histogram_figure

        path = histogram_figure(hist, f"{args.group} on P^1({args.space.upper()})", Path(args.figures) / f"orbits_{args.space}_{args.group}.png")
        print(f"figure: {path}", file=sys.stderr)
    return EXIT_PASS


def cmd_limits(args) -> int:
    cfg = _config(args)
    spec = cfg.spec()
    b = parse_b(cfg, spec)
    N = spec.field.N
    fam = LimitFamily(spec, b, Direction(cfg.direction))
    pts = limit_sequence(fam, cfg.n_max or N - 2)
    pred = predicted_accumulation(spec, b, gi=fam.representative)
    rows = [{"n": n, "point": P.render(), "depth": min(proj_depth(pred, P), N)} for n, P in enumerate(pts, 1)]
    res = detect_limit(pts, spec.cell)
    verdict = {"status": type(res).__name__, "predicted": pred.render()}
    if isinstance(res, Converged):
        verdict["limit"] = res.limit.render()
    else:
        verdict["evidence"] = res.evidence
    ok = isinstance(res, Converged) == (fam.direction is Direction.CONTRACTING)
    if args.format == "json":
        doc = {"params": cfg.params() | {"b": cfg.b, "direction": cfg.direction}, "rows": rows, "result": verdict}
        _write((json.dumps(doc, indent=2) + "\n").encode())
    else:
        lines = [f"{r['n']:>3}  {r['depth']:>3}  {r['point']}" for r in rows]
        lines.append(" ".join(f"{k}={v}" for k, v in verdict.items()))
        _write(("\n".join(lines) + "\n").encode())
    if args.figures:
        from pathlib import Path

        from .plotting import limit_figure

        path = limit_figure({f"{cfg.involution} b={cfg.b}": [[r["depth"] for r in rows]]}, N, Path(args.figures) / "limits_depth_vs_n.png")
        print(f"figure: {path}", file=sys.stderr)
    return EXIT_PASS if ok else EXIT_FAIL


COMMANDS = {"verify": cmd_verify, "orbits": cmd_orbits, "limits": cmd_limits}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
