"""Command-line interface.

Subcommands::

    gen counterexample --a A --b B --c C --out FILE [--force]
    moments --state FILE --mode exact|mc|design [--subset 1,2 ...] [--settings N] [--shots K] [--seed S] [--json]
    lu --a-state FILE --b-state FILE [--restarts R] [--seed S] [--tol T] [--json]
    entanglement --state FILE [--json]
    scan --grid STEP --out FILE
    examples em1|em5 --out-dir DIR

Exit codes: 0 success, 2 bad input or unwritable output, 3 unsupported
dimensions. ``lu`` reports its verdict in the exit code: 0 equivalent
(single qubit), 10 not equivalent, 11 consistent but unproven.
"""
from __future__ import annotations

import argparse
import json
import logging
import math
import sys
from dataclasses import asdict
from pathlib import Path

import numpy as np

from .bloch import bloch_from_state
from .counterexamples import CeParams, build_ce, ce_positive, em1_states, em5_states, scan_ce, write_scan_csv
from .entanglement import entanglement_report
from .luequiv import Verdict, lu_verdict
from .moments import moment_set
from .sampling import EstimatorConfig, NonQubitError, estimate_moment, moment_from_design
from .statefile import load_state, save_state
from .states import StateError, all_subsets, canonical_subset

log = logging.getLogger("marginal_moments")

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_DIMS = 3
VERDICT_EXIT = {
    Verdict.EQUIVALENT_SINGLE_QUBIT: 0,
    Verdict.NOT_EQUIVALENT: 10,
    Verdict.CONSISTENT_BUT_UNPROVEN: 11,
}


class CliError(Exception):
    def __init__(self, message: str, code: int = EXIT_INPUT):
        super().__init__(message)
        self.code = code


def _seed(text: str) -> int:
    value = int(text)
    if not 0 <= value < 2**64:
        raise argparse.ArgumentTypeError("seed must be a 64-bit unsigned integer")
    return value


def _subset(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.strip("()").split(",") if x.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad subset {text!r}; use e.g. 1,2") from None


def _label(subset) -> str:
    return "(" + ",".join(str(m) for m in subset) + ")"


def _load(path, validate=True):
    try:
        return load_state(path, validate)
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc.strerror}") from exc
    except StateError as exc:
        raise CliError(f"{path}: {exc}") from exc


def _save(rho, path):
    try:
        save_state(rho, path)
    except OSError as exc:
        raise CliError(f"cannot write {path}: {exc.strerror}") from exc


def _emit(lines, payload, as_json):
    if as_json:
        print(json.dumps(payload, indent=1, sort_keys=True))
    else:
        print("\n".join(lines))


def cmd_gen(args) -> int:
    a, b, c = args.a, args.b, args.c
    n2 = a * a + b * b + c * c
    if n2 == 0:
        raise CliError("a, b, c must not all vanish")
    if abs(n2 - 1) > 1e-6:
        log.warning("a^2 + b^2 + c^2 = %r; renormalizing", n2)
    p = CeParams.normalized(a, b, c)
    if not ce_positive(p) and not args.force:
        raise CliError(f"({p.a}, {p.b}, {p.c}) lies outside the positivity region; use --force")
    _save(build_ce(p, unchecked=True), args.out)
    return EXIT_OK


def cmd_moments(args) -> int:
    rho = _load(args.state, not args.no_validate)
    try:
        subsets = (
            [canonical_subset(s, rho.n_sites) for s in args.subset]
            if args.subset
            else all_subsets(rho.n_sites)
        )
    except ValueError as exc:
        raise CliError(str(exc)) from exc
    lines = [f"mode={args.mode}"]
    results = []
    if args.mode == "exact":
        ms = moment_set(bloch_from_state(rho))
        for s in subsets:
            lines.append(f"R{_label(s)}={ms[s]!r}")
            results.append({"subset": list(s), "value": ms[s]})
    else:
        try:
            for i, s in enumerate(subsets):
                if args.mode == "mc":
                    cfg = EstimatorConfig(s, args.settings, args.shots, 2, args.seed)
                    est = estimate_moment(rho, cfg)
                else:
                    rng = np.random.default_rng(np.random.SeedSequence(args.seed, spawn_key=(i,)))
                    est = moment_from_design(rho, s, args.shots, rng)
                lines.append(
                    f"R{_label(s)}={est.value!r} stderr={est.stderr!r} "
                    f"settings={est.settings_used} shots={est.shots_used}"
                )
                results.append({"subset": list(s), **asdict(est)})
        except NonQubitError as exc:
            raise CliError(str(exc), EXIT_DIMS) from exc
        except ValueError as exc:
            raise CliError(str(exc)) from exc
    _emit(lines, {"mode": args.mode, "moments": results}, args.json)
    return EXIT_OK


def cmd_lu(args) -> int:
    rho_a = _load(args.a_state)
    rho_b = _load(args.b_state)
    if rho_a.dims != rho_b.dims:
        raise CliError(f"dimension mismatch: {rho_a.dims} vs {rho_b.dims}", EXIT_DIMS)
    if not rho_a.is_qubits:
        raise CliError("lu comparison supports qubit systems only", EXIT_DIMS)
    v = lu_verdict(rho_a, rho_b, args.restarts, np.random.default_rng(args.seed), args.tol)
    payload = {
        "moments_equal": v.moments_equal,
        "invariants_equal": v.invariants_equal,
        "product_residual": v.product_residual,
        "mirsky_bound": v.mirsky_bound,
        "verdict": v.verdict.value,
    }
    lines = [
        f"{k}={str(val).lower() if isinstance(val, bool) else (val if isinstance(val, str) else repr(val))}"
        for k, val in payload.items()
    ]
    _emit(lines, payload, args.json)
    return VERDICT_EXIT[v.verdict]


def cmd_entanglement(args) -> int:
    rho = _load(args.state, not args.no_validate)
    if rho.dims != (2, 2):
        raise CliError(f"entanglement report needs two qubits, got dims {rho.dims}", EXIT_DIMS)
    rep = entanglement_report(rho)
    payload = asdict(rep)
    lines = [
        f"concurrence={rep.concurrence!r}",
        f"eof={rep.eof!r}",
        f"negativity={rep.negativity!r}",
        f"ppt={str(rep.ppt).lower()}",
    ]
    _emit(lines, payload, args.json)
    return EXIT_OK


def cmd_scan(args) -> int:
    try:
        records = scan_ce(args.grid)
    except ValueError as exc:
        raise CliError(str(exc)) from exc
    try:
        with open(args.out, "w", newline="") as fh:
            write_scan_csv(records, fh)
    except OSError as exc:
        raise CliError(f"cannot write {args.out}: {exc.strerror}") from exc
    best = max((r for r in records if not math.isnan(r.eof)), key=lambda r: r.eof)
    print(f"points={len(records)}")
    print(f"max_eof={best.eof!r} a={best.a!r} b={best.b!r} c={best.c!r}")
    return EXIT_OK


def cmd_examples(args) -> int:
    out = Path(args.out_dir)
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise CliError(f"cannot create {out}: {exc.strerror}") from exc
    states = em1_states() if args.which == "em1" else em5_states()
    for i, rho in enumerate(states, start=1):
        path = out / f"{args.which}_{i}.json"
        _save(rho, path)
        print(path)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="marginal-moments",
        description="Second-order marginal moments and LU certificates for qubit states.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="write a counterexample state file")
    p.add_argument("kind", choices=["counterexample"])
    p.add_argument("--a", type=float, required=True)
    p.add_argument("--b", type=float, required=True)
    p.add_argument("--c", type=float, required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--force", action="store_true", help="write even outside the positivity region")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("moments", help="exact or simulated marginal moments")
    p.add_argument("--state", required=True)
    p.add_argument("--mode", choices=["exact", "mc", "design"], default="exact")
    p.add_argument("--subset", type=_subset, action="append", help="comma-separated labels, repeatable")
    p.add_argument("--settings", type=int, default=10_000)
    p.add_argument("--shots", type=int, default=0, help="0 means exact expectation values")
    p.add_argument("--seed", type=_seed, default=0)
    p.add_argument("--json", action="store_true")
    p.add_argument("--no-validate", action="store_true")
    p.set_defaults(func=cmd_moments)

    p = sub.add_parser("lu", help="LU-equivalence verdict for two states")
    p.add_argument("--a-state", required=True)
    p.add_argument("--b-state", required=True)
    p.add_argument("--restarts", type=int, default=32)
    p.add_argument("--seed", type=_seed, default=0)
    p.add_argument("--tol", type=float, default=1e-10)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_lu)

    p = sub.add_parser("entanglement", help="two-qubit entanglement report")
    p.add_argument("--state", required=True)
    p.add_argument("--json", action="store_true")
    p.add_argument("--no-validate", action="store_true")
    p.set_defaults(func=cmd_entanglement)

    p = sub.add_parser("scan", help="sweep the counterexample family and write CSV")
    p.add_argument("--grid", type=float, default=0.05)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("examples", help="write the example state pairs")
    p.add_argument("which", choices=["em1", "em5"])
    p.add_argument("--out-dir", required=True)
    p.set_defaults(func=cmd_examples)
    return parser


def main(argv=None) -> int:
    logging.basicConfig(format="%(levelname)s: %(message)s")
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code


if __name__ == "__main__":
    sys.exit(main())
