"""Run every suite at acceptance size and print a per-suite table.

    python scripts/verify_all.py --trials 1000 --seed 42 --out report.json
"""
import argparse
import time
from pathlib import Path

from orbit.harness import run_suite
from orbit.suites import DEFAULT_SUITE


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--trials", type=int, default=1000)
    ap.add_argument("--seed", type=int, default=42)
    ap.add_argument("--dims", default="1..8")
    ap.add_argument("--out", type=Path, default=None)
    args = ap.parse_args()
    lo, hi = (int(x) for x in args.dims.split(".."))
    dims = list(range(lo, hi + 1))

    failed = 0
    start = time.perf_counter()
    print(f"{'suite':22s} {'instances':>9s} {'failures':>8s} {'noise':>5s} {'worst margin':>13s} {'secs':>6s}")
    for sid in DEFAULT_SUITE:
        rep = run_suite([sid], dims, args.trials, args.seed)
        stats = rep.statements.get(sid)
        worst = f"{stats.worst_margin:13.3e}" if stats and stats.applicable else f"{'n/a':>13s}"
        noise = sum(s.noise for s in rep.statements.values())
        print(f"{sid:22s} {stats.applicable if stats else 0:9d} {len(rep.failures):8d} {noise:5d} "
              f"{worst} {rep.wall_time:6.1f}")
        failed += len(rep.failures)
    print(f"total failures {failed} in {time.perf_counter() - start:.1f}s")

    if args.out:
        full = run_suite("all", dims, args.trials, args.seed)
        args.out.write_text(full.dumps())
        print(f"report written to {args.out}")
    return 1 if failed else 0


if __name__ == "__main__":
    raise SystemExit(main())
