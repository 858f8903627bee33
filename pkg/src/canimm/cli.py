"""Command-line entry point: build constructions, run checks, print measures.

Same flags produce byte-identical outputs; every emitted trace replays
through the library to the same prefix.  Exit status is 0 on success, 1 on
usage or input errors, 2 when a check finds what it should not (or fails
to find an expected failure under --expect-fail).
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import checkers, constructions as cons, mathias, programs as pg, schnorr
from .machine import encode
from .numberings import Numbering, Registry, default_pool
from .records import parse_trace, render_trace, render_value

BUILD_NAMES = (
    "delta2",
    "bci",
    "cofinal",
    "ci-hi",
    "ci-not-hi",
    "hi-not-ci",
    "effectivize",
    "2generic-witness",
    "generic",
)

CHECK_SUITES = ("immunity", "domination", "effective", "schnorr")

DEFAULT_COFINAL_BITS = "10" * 16


def modulus_catalog() -> dict[str, int]:
    return {
        "identity": pg.identity_code(),
        "zero": pg.zero_code(),
        "succ": pg.succ_code(),
        "double": pg.double_code(),
        "cofinal": encode(pg.succ_(pg.mul_(pg.c_(2), pg.P0))),
        "bci": encode(pg.add_(pg.mul_(pg.c_(4), pg.pair_(pg.P0, pg.P0)), pg.c_(3))),
        "twof": encode(pg.mul_(pg.c_(2), pg.pair_(pg.P0, pg.P0))),
    }


def default_functions() -> list[int]:
    return [pg.identity_code(), pg.zero_code(), pg.succ_code(), pg.double_code()]


def _load_pool(path: str | None) -> Registry:
    if path is None:
        return default_pool()
    return Registry.deserialize(Path(path).read_text())


def _emit(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


def _fill_pairs(pool, index_bound: int) -> int:
    return cons.pool_value_ceiling(list(pool), index_bound) // 2 + 2


def cmd_build(args) -> int:
    pool = _load_pool(args.pool)
    name = args.construction
    if name == "delta2":
        prefix, trace = cons.delta2_prefix(pool.codes(), args.stages, args.markers)
        text = render_trace(trace, {"R": prefix})
    elif name == "bci":
        r, q, trace = cons.bci_run(list(pool), args.stages, _fill_pairs(pool, args.index_bound))
        text = render_trace(trace, {"Q": q, "R": r})
    elif name == "cofinal":
        prefix, trace = cons.cofinal_encode(list(pool), DEFAULT_COFINAL_BITS)
        text = render_trace(trace, {"R": prefix})
    elif name == "ci-hi":
        prefix, trace = cons.ci_hi_run(list(pool), default_functions(), args.stages)
        text = render_trace(trace, {"R": prefix})
    elif name == "ci-not-hi":
        prefix, trace = cons.ci_not_hi_run(list(pool), args.stages, _fill_pairs(pool, args.index_bound))
        text = render_trace(trace, {"R": prefix})
    elif name == "hi-not-ci":
        result = cons.hi_not_ci_run(default_functions(), args.blocks, target_index=0)
        result.trace.meta["witness_rule"] = result.witness_rule
        result.trace.meta["witness_positions"] = list(result.witness_positions)
        text = render_trace(result.trace, {"R": result.prefix})
    elif name == "effectivize":
        base, base_trace = cons.delta2_prefix(pool.codes(), args.stages, args.markers)
        quotient, trace = cons.effectivize_inside(base, args.markers // 2, args.budget)
        trace.meta["base_stages"] = args.stages
        text = render_trace(trace, {"Q": quotient, "R": base})
    elif name == "2generic-witness":
        entries, numbering, trace = cons.build_2generic_witness(
            "", pg.enumerate_oracle_ones_code(), pg.zero_code(), args.index_bound, args.index_bound
        )
        trace.meta["witness_rule"] = numbering.rule
        text = render_trace(trace, {})
    elif name == "generic":
        schedule = mathias.default_schedule(
            list(pool), thin_count=args.index_bound, avoid_count=args.blocks, stem_target=args.markers
        )
        try:
            run = mathias.build_generic(mathias.Condition.empty(), schedule, horizon=args.stages)
        except mathias.ExtensionOrderError as err:
            print(f"error: {err}", file=sys.stderr)
            return 2
        run.trace.meta["missed_blocks"] = list(run.avoidance.missed_blocks) if run.avoidance else []
        run.trace.meta["thin_certs"] = [
            (c.numbering_id, c.start, c.bound) for c in run.thin_certificates
        ]
        text = render_trace(run.trace, {"R": run.prefix})
    else:
        raise AssertionError(name)
    _emit(text, args.out)
    return 0


def _check_exit(found_fail: bool, expect_fail: bool) -> int:
    if expect_fail:
        return 0 if found_fail else 2
    return 2 if found_fail else 0


def cmd_check(args) -> int:
    path = Path(args.trace)
    if not path.exists():
        print(f"error: no such trace file: {path}", file=sys.stderr)
        return 1
    parsed = parse_trace(path.read_text())
    pool = _load_pool(args.pool)
    moduli = modulus_catalog()
    lines = []
    found_fail = False

    if args.suite == "immunity":
        h = moduli[args.modulus]
        if parsed.name == "hi-not-ci" and args.modulus == "identity":
            # the trace carries the numbering built to refute its target
            registry = Registry()
            witness = registry.register(parsed.meta["witness_rule"], surjective=True, label="witness")
            scan: list[Numbering] = [witness]
            k_map = {witness.id: 0}
            bound = max(parsed.meta["witness_positions"])
        else:
            scan = list(pool)
            k_map = None
            bound = args.index_bound
        for label, prefix in sorted(parsed.prefixes.items()):
            verdict = checkers.check_canonical_immunity(prefix, h, scan, bound, k_map)
            found_fail |= verdict.failed
            lines.append(f"{label}\t{checkers.serialize_verdict(verdict)}")
    elif args.suite == "domination":
        f = moduli[args.modulus]
        for label, prefix in sorted(parsed.prefixes.items()):
            members = prefix.members()
            verdict = checkers.refute_domination(members, f, range(1, len(members) + 1))
            found_fail |= verdict.failed
            lines.append(f"{label}\t{checkers.serialize_verdict(verdict)}")
    elif args.suite == "effective":
        h = moduli[args.modulus]
        for label, prefix in sorted(parsed.prefixes.items()):
            verdict = checkers.check_effective_immunity(prefix, h, range(args.index_bound + 1), args.budget)
            found_fail |= verdict.failed
            lines.append(f"{label}\t{checkers.serialize_verdict(verdict)}")
    elif args.suite == "schnorr":
        prefix = parsed.prefixes["R"]
        missed = parsed.meta.get("missed_blocks", [])
        top = 0
        while schnorr.block_span(top + 1) <= prefix.length:
            top += 1
        covered = [i for i in missed if i <= top]
        if not covered:
            lines.append("schnorr\tinconclusive\tno covered missed blocks")
            found_fail = True
        else:
            m = max(covered)
            for n in range(len(missed)):
                if n >= m:
                    break
                ok, witness = schnorr.in_U_n(prefix, n, m)
                found_fail |= not ok
                lines.append(f"schnorr\tU_{n}\t{'member' if ok else 'MISSING'}\twitness\t{render_value(witness or 0)}")
    else:
        raise AssertionError(args.suite)

    _emit("".join(line if line.endswith("\n") else line + "\n" for line in lines), args.out)
    return _check_exit(found_fail, args.expect_fail)


def cmd_measure(args) -> int:
    if args.m <= args.n:
        print("error: need M > n", file=sys.stderr)
        return 1
    value = schnorr.measure_U_trunc(args.n, args.m)
    bound = schnorr.DyadicRational.power(args.n)
    ok = value <= bound
    print(f"{value.serialize()} ≤ {bound.serialize()}: {'true' if ok else 'false'}")
    return 0 if ok else 2


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="canimm", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    b = sub.add_parser("build", help="run a construction and emit its trace")
    b.add_argument("construction", choices=BUILD_NAMES)
    b.add_argument("--stages", type=int, default=1000)
    b.add_argument("--markers", type=int, default=32)
    b.add_argument("--index-bound", type=int, default=16)
    b.add_argument("--budget", type=int, default=256)
    b.add_argument("--blocks", type=int, default=6)
    b.add_argument("--pool", default=None)
    b.add_argument("--out", default=None)
    b.set_defaults(func=cmd_build)

    c = sub.add_parser("check", help="run a checker suite over a trace file")
    c.add_argument("suite", choices=CHECK_SUITES)
    c.add_argument("trace")
    c.add_argument("--pool", default=None)
    c.add_argument("--index-bound", type=int, default=16)
    c.add_argument("--budget", type=int, default=256)
    c.add_argument("--modulus", default="identity", choices=sorted(modulus_catalog()))
    c.add_argument("--expect-fail", action="store_true")
    c.add_argument("--out", default=None)
    c.set_defaults(func=cmd_check)

    m = sub.add_parser("measure", help="exact truncated measure and its bound")
    m.add_argument("n", type=int)
    m.add_argument("m", type=int)
    m.set_defaults(func=cmd_measure)

    return parser


def _positive(parser: argparse.ArgumentParser, args) -> bool:
    for flag in ("stages", "markers", "index_bound", "budget"):
        if getattr(args, flag, 1) < 1:
            parser.error(f"--{flag.replace('_', '-')} must be positive")
    if getattr(args, "blocks", 0) < 0:
        parser.error("--blocks must be nonnegative")
    return True


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    _positive(parser, args)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
