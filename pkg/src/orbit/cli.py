"""Command line entry point: ``orbit verify | witness | fuzz | repro-3.10``.

Exit codes: 0 when everything holds, 1 on a violation or invalid
certificate, 2 on usage or IO errors.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from orbit import linalg, witnesses
from orbit.functions import parse_function
from orbit.harness import CONJECTURES, HarnessError, fuzz_conjecture, reproduce_counterexample, run_suite
from orbit.maps import map_from_json
from orbit.suites import SUITES

EXIT_PASS, EXIT_VIOLATION, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def parse_dims(text: str) -> list[int]:
    """``"3"``, ``"1..8"`` or ``"2,4,6"``."""
    try:
        if ".." in text:
            lo, hi = text.split("..", 1)
            dims = list(range(int(lo), int(hi) + 1))
        else:
            dims = [int(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise UsageError(f"bad --dim value {text!r}") from exc
    if not dims or min(dims) < 1:
        raise UsageError(f"--dim must name positive dimensions, got {text!r}")
    return dims


def parse_suites(text: str) -> list[str] | str:
    if text == "all":
        return "all"
    ids = [s.strip() for s in text.split(",") if s.strip()]
    unknown = [s for s in ids if s not in SUITES]
    if unknown:
        raise UsageError(f"unknown suite id(s): {', '.join(unknown)}")
    return ids


def _write(payload: str, out: str | None) -> None:
    if out is None or out == "-":
        sys.stdout.write(payload + "\n")
        return
    try:
        Path(out).write_text(payload + "\n")
    except OSError as exc:
        raise UsageError(f"cannot write {out}: {exc}") from exc


# --- witness command ------------------------------------------------------------


def _matrix(doc: dict, key: str) -> np.ndarray:
    if key not in doc:
        raise UsageError(f"input is missing matrix {key!r}")
    return linalg.matrix_from_json(doc[key])


def _function(doc: dict, default: str | None = None):
    spec = doc.get("function", default)
    if spec is None:
        raise UsageError("input needs a 'function' entry")
    return parse_function(spec)


def _jensen(statement: str):
    def run(doc):
        phi = map_from_json(doc["map"]) if "map" in doc else None
        if phi is None:
            raise UsageError("Jensen statements need a 'map' descriptor")
        f, A = _function(doc), _matrix(doc, "A")
        if statement == "jensen-monotone":
            return witnesses.jensen_witness_monotone(f, phi, A, strict=False)
        if statement == "jensen-subunital":
            return witnesses.jensen_witness_subunital(f, phi, A, strict=False)
        return witnesses.jensen_witness(f, phi, A, statement_id=statement, strict=False)
    return run


def _pair(fn):
    return lambda doc: fn(_function(doc), _matrix(doc, "A"), _matrix(doc, "B"), strict=False)


def _block(doc):
    split = doc.get("split")
    if not isinstance(split, int):
        raise UsageError("block decomposition needs an integer 'split'")
    dec = witnesses.block_decompose(_matrix(doc, "H"), split)
    return witnesses.block_certificate(dec)


def _pinch(doc):
    res = witnesses.diagonal_pinch(_matrix(doc, "A"), _function(doc), strict=False)
    return res.certificate, {"trace_margin": res.trace_margin,
                             "projections": [linalg.matrix_to_json(E) for E in res.E]}


def _normal(doc):
    return witnesses.normal_triangle_witness(_matrix(doc, "X"), _matrix(doc, "Y"), strict=False)


def _positive_part(doc):
    res = witnesses.positive_part_witness(_matrix(doc, "A"), _matrix(doc, "B"), _function(doc),
                                          strict=False)
    return res.full, {"pinch": res.pinch.to_json(), "W": linalg.matrix_to_json(res.W)}


WITNESS_COMMANDS = {
    **{s: _jensen(s) for s in ("jensen-monotone", "jensen", "jensen-mean", "jensen-cstar",
                               "jensen-contraction", "jensen-schur", "jensen-subunital")},
    "subadditivity": _pair(witnesses.subadd_witness),
    "superadditivity": _pair(witnesses.subadd_witness),
    "difference": _pair(witnesses.difference_witness),
    "block-decomposition": _block,
    "diagonal-pinch": _pinch,
    "normal-triangle": _normal,
    "cartesian": _pair(witnesses.cartesian_witness),
    "positive-part": _positive_part,
}


def build_witness(statement: str, doc: dict) -> tuple[witnesses.WitnessCertificate, dict]:
    if statement not in WITNESS_COMMANDS:
        raise UsageError(f"unknown statement {statement!r}; choose from {', '.join(WITNESS_COMMANDS)}")
    out = WITNESS_COMMANDS[statement](doc)
    cert, extra = out if isinstance(out, tuple) else (out, {})
    return cert, extra


# --- commands -------------------------------------------------------------------


def cmd_verify(args) -> int:
    suites = parse_suites(args.suite)
    dims = parse_dims(args.dim)
    if args.trials < 0:
        raise UsageError("--trials must be non-negative")
    report = run_suite(suites, dims, args.trials, args.seed, args.tol, function=args.function,
                       reverify=not args.no_reverify)
    _write(report.dumps(include_timing=not args.no_timing), args.out)
    line = "PASS" if report.passed else "FAIL"
    print(f"{line}: {len(report.failures)} failure(s); worst margin {report.worst_margin:.3e}",
          file=sys.stderr)
    return EXIT_PASS if report.passed else EXIT_VIOLATION


def cmd_witness(args) -> int:
    try:
        doc = json.loads(Path(args.input).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read {args.input}: {exc}") from exc
    if not isinstance(doc, dict):
        raise UsageError("witness input must be a JSON object")
    cert, extra = build_witness(args.statement, doc)
    payload = {**cert.to_json(), **extra}
    _write(json.dumps(payload, indent=2, sort_keys=True), args.out)
    return EXIT_PASS if cert.valid else EXIT_VIOLATION


def cmd_fuzz(args) -> int:
    if args.conjecture not in CONJECTURES:
        raise UsageError(f"unknown conjecture {args.conjecture!r}; choose from {', '.join(CONJECTURES)}")
    findings = fuzz_conjecture(args.conjecture, args.budget, args.seed)
    _write(findings.dumps(), args.out)
    return EXIT_PASS


def cmd_repro(args) -> int:
    if args.s <= 0 or args.t <= 0:
        raise UsageError("--s and --t must be positive")
    margin = reproduce_counterexample(args.s, args.t, args.function)
    verdict = "violation reproduced" if margin < 0 else "no violation"
    _write(json.dumps({"s": args.s, "t": args.t, "function": args.function,
                       "margin": margin, "verdict": verdict}, indent=2), args.out)
    return EXIT_VIOLATION if margin < 0 else EXIT_PASS


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="orbit", description="Unitary-orbit matrix inequality harness")
    sub = p.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", help="run randomized inequality suites")
    v.add_argument("--suite", default="all", help="comma separated suite ids or 'all'")
    v.add_argument("--dim", default="1..8", help="dimension range like 1..8 or a list 2,3")
    v.add_argument("--trials", type=int, default=100)
    v.add_argument("--seed", type=int, default=42)
    v.add_argument("--tol", type=float, default=linalg.TAU_ORDER)
    v.add_argument("--function", default=None, help="restrict to one scalar function spec")
    v.add_argument("--no-reverify", action="store_true", help="skip high precision triage")
    v.add_argument("--no-timing", action="store_true", help="omit wall time for byte-stable output")
    v.add_argument("--out", default=None)
    v.set_defaults(run=cmd_verify)

    w = sub.add_parser("witness", help="build a unitary witness for one instance")
    w.add_argument("--statement", required=True)
    w.add_argument("--input", required=True)
    w.add_argument("--out", default=None)
    w.set_defaults(run=cmd_witness)

    z = sub.add_parser("fuzz", help="probe an open question with random instances")
    z.add_argument("--conjecture", required=True)
    z.add_argument("--budget", type=int, default=1000)
    z.add_argument("--seed", type=int, default=0)
    z.add_argument("--out", default=None)
    z.set_defaults(run=cmd_fuzz)

    r = sub.add_parser("repro-3.10", help="superadditive but non-concave counterexample")
    r.add_argument("--s", type=float, default=4.0)
    r.add_argument("--t", type=float, default=1.0)
    r.add_argument("--function", default="pow:2")
    r.add_argument("--out", default=None)
    r.set_defaults(run=cmd_repro)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_PASS if exc.code == 0 else EXIT_USAGE
    try:
        return args.run(args)
    except (UsageError, HarnessError, linalg.LinalgError, witnesses.WitnessError, KeyError) as exc:
        print(f"orbit: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as exc:
        print(f"orbit: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
