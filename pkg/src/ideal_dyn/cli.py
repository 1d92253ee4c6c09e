"""Command line entry point ``ideal-dyn``.

Exit codes: 0 success or all checks passed, 1 a check failed (or a replayed
counterexample still fails), 2 usage or configuration error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import analysis, density, harness, ideals
from .dynsys import PrecisionError, make_system
from .intset import build


def _horizon(text: str) -> int:
    text = text.strip()
    if "^" in text:
        base, exp = text.split("^", 1)
        return int(base) ** int(exp)
    if "e" in text.lower():
        return int(float(text))
    return int(text)


def _cmd_density(args) -> int:
    s = build(args.set, args.horizon)
    kinds = density.KINDS if args.kind == "all" else (args.kind,)
    print("set_spec,kind,horizon,value,window_min,window_max")
    for k in kinds:
        print(density.csv_row(args.set, density.estimate(s, k)))
    return 0


def _cmd_verdict(args) -> int:
    s = build(args.set, args.horizon)
    m = ideals.parse_submeasure(args.ideal, horizon_hint=args.horizon)
    v = ideals.membership_verdict(m, args.regime, s, args.threshold)
    print("set_spec,submeasure,regime,status,witness,horizon")
    print(ideals.verdict_csv_row(args.set, args.ideal, v))
    return 0


def _cmd_returnset(args) -> int:
    rep = analysis.return_set(make_system(args.system), args.point, args.center, args.radius, args.horizon)
    print(analysis.RETURNSET_HEADER)
    print(rep.csv_row())
    if args.members:
        Path(args.members).write_text("".join(f"{n}\n" for n in rep.returns.members().tolist()))
    return 0


def _cmd_cluster(args) -> int:
    m = ideals.parse_submeasure(args.ideal, horizon_hint=args.horizon)
    rep = analysis.cluster_value(make_system(args.system), args.point, args.eta, args.r0, args.K, m, args.horizon,
                                 args.threshold)
    print(analysis.CLUSTER_HEADER)
    for row in rep.csv_rows():
        print(row)
    return 0


def _cmd_classify(args) -> int:
    m = ideals.parse_submeasure(args.ideal, horizon_hint=args.horizon)
    sysm = make_system(args.system)
    targets = int(args.targets) if args.targets.isdigit() else args.targets.split(";")
    rep = analysis.classify(sysm, args.point, m, targets, args.radius, args.horizon, K=args.K,
                            threshold=args.threshold, workers=args.workers)
    print(analysis.CLASSIFY_HEADER)
    for row in rep.csv_rows():
        print(row)
    return 0


def _cmd_verify(args) -> int:
    text = Path(args.config).read_text() if args.config else ""
    cfg = harness.parse_config(text, horizon=args.horizon, seed=args.seed, suite=args.suite,
                               workers=args.workers, trials=args.trials, threshold=args.threshold)
    results, code = harness.run_suite(cfg, args.out)
    sys.stdout.write(harness.summary_text(cfg, results))
    if any(r.status == "inconclusive" for r in results):
        print("warning: some checks were inconclusive at this horizon", file=sys.stderr)
    return code


def _cmd_replay(args) -> int:
    text = Path(args.counterexample).read_text() if Path(args.counterexample).is_file() else args.counterexample
    verdict, detail = harness.replay(text)
    print(json.dumps({"verdict": verdict, "detail": detail}, sort_keys=True))
    return 1 if verdict == harness.VIOLATION else 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="ideal-dyn", description="Ideal-based recurrence experiments on orbits.")
    sub = p.add_subparsers(dest="command", required=True)

    d = sub.add_parser("density", help="density estimates of a set")
    d.add_argument("--set", required=True)
    d.add_argument("--kind", default="all", choices=("all", *density.KINDS))
    d.add_argument("--horizon", type=_horizon, default=1 << 20)
    d.set_defaults(func=_cmd_density)

    v = sub.add_parser("verdict", help="ideal-membership verdict of a set")
    v.add_argument("--set", required=True)
    v.add_argument("--ideal", default="nu")
    v.add_argument("--regime", default="exh", choices=("fin", "exh"))
    v.add_argument("--threshold", type=float, default=ideals.DEFAULT_THRESHOLD)
    v.add_argument("--horizon", type=_horizon, default=1 << 20)
    v.set_defaults(func=_cmd_verdict)

    r = sub.add_parser("returnset", help="return set N(x, B(center, radius))")
    r.add_argument("--system", required=True)
    r.add_argument("--point", required=True)
    r.add_argument("--center", required=True)
    r.add_argument("--radius", type=float, required=True)
    r.add_argument("--horizon", type=_horizon, default=10**6)
    r.add_argument("--members", help="also write the members to this file")
    r.set_defaults(func=_cmd_returnset)

    c = sub.add_parser("cluster", help="norms along a shrinking radius schedule")
    c.add_argument("--system", required=True)
    c.add_argument("--point", required=True)
    c.add_argument("--eta", required=True)
    c.add_argument("--ideal", default="nu")
    c.add_argument("--r0", type=float, default=0.2)
    c.add_argument("--K", type=int, default=9)
    c.add_argument("--threshold", type=float, default=ideals.DEFAULT_THRESHOLD)
    c.add_argument("--horizon", type=_horizon, default=10**6)
    c.set_defaults(func=_cmd_cluster)

    k = sub.add_parser("classify", help="recurrence and universality verdicts")
    k.add_argument("--system", required=True)
    k.add_argument("--point", required=True)
    k.add_argument("--ideal", default="nu")
    k.add_argument("--targets", default="32", help="grid size, or ';'-separated point literals")
    k.add_argument("--radius", type=float, default=1 / 64)
    k.add_argument("--K", type=int, default=9)
    k.add_argument("--threshold", type=float, default=ideals.DEFAULT_THRESHOLD)
    k.add_argument("--workers", type=int, default=1)
    k.add_argument("--horizon", type=_horizon, default=10**6)
    k.set_defaults(func=_cmd_classify)

    f = sub.add_parser("verify", help="run the property-check suite")
    f.add_argument("--suite", default=None, help="all or comma-separated check names")
    f.add_argument("--config", help="key=value config file")
    f.add_argument("--horizon", type=_horizon, default=None)
    f.add_argument("--seed", type=int, default=None)
    f.add_argument("--trials", type=int, default=None)
    f.add_argument("--threshold", type=float, default=None)
    f.add_argument("--workers", type=int, default=None)
    f.add_argument("--out", default=None)
    f.set_defaults(func=_cmd_verify)

    x = sub.add_parser("replay", help="re-run a serialized counterexample")
    x.add_argument("counterexample", help="JSON text or a file containing it")
    x.set_defaults(func=_cmd_replay)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except harness.ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, PrecisionError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
