"""Sample around the three open questions and summarize what was seen.

Findings are descriptive; a clean run is evidence, not a proof.
"""
import argparse
import json
from pathlib import Path

from orbit.harness import CONJECTURES, fuzz_conjecture


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--budget", type=int, default=10_000)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--outdir", type=Path, default=Path("findings"))
    args = ap.parse_args()
    args.outdir.mkdir(parents=True, exist_ok=True)

    for cid in CONJECTURES:
        out = fuzz_conjecture(cid, budget=args.budget, seed=args.seed)
        path = args.outdir / f"{cid}.json"
        path.write_text(out.dumps())
        print(f"== {cid} -> {path}")
        summary = {k: v for k, v in out.summary.items() if k != "note"}
        print(json.dumps(summary, indent=2, default=str))


if __name__ == "__main__":
    main()
