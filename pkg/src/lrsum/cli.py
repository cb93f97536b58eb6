"""Command-line front end.

Exit codes: 0 success or valid, 1 invalid input, 2 oracle disagreement or
failed overlay check, 3 internal invariant failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

from .dual_flow import build_dual_graph, canonical_flow
from .errors import InvalidInput, InvariantError, TraceMismatch
from .hive import Hive, count_hives, filling_to_hive, hive_to_filling, validate_hive
from .honeycomb import (
    canonical_honeycomb_flow,
    check_honeycomb_flow,
    flows_equal,
    honeycomb_from_filling,
    honeycombs_equal,
    overlay,
    overlay_flow,
    render_svg,
    replay_trace_on_flow,
)
from .lr_filling import LRFilling, count_fillings, enumerate_fillings, validate_lr
from .partition import Partition
from .summation import sum_fillings

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_MISMATCH = 2
EXIT_INTERNAL = 3


def _partition(text: str) -> Partition:
    try:
        parts = tuple(int(p) for p in text.split(",") if p.strip() != "")
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"not a comma-separated list of integers: {text!r}") from exc
    try:
        return Partition(parts)
    except InvalidInput as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


def _read_json(path: str):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise InvalidInput(f"cannot read {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise InvalidInput(f"{path} is not valid JSON: {exc}") from exc


def _read_filling(path: str) -> LRFilling:
    f = LRFilling.from_json(_read_json(path))
    report = validate_lr(f)
    if not report.ok:
        raise InvalidInput(f"{path} is not an LR filling: {report.summary()}")
    return f


def _dump(data) -> str:
    return json.dumps(data, indent=2, sort_keys=False)


def _write(path: str, text: str) -> None:
    Path(path).write_text(text, encoding="utf-8")


def _type_line(mu, nu, lam) -> str:
    return f"{mu} {nu} {lam}"


def cmd_validate(args) -> int:
    data = _read_json(args.file)
    report = validate_hive(Hive.from_json(data)) if args.hive else validate_lr(LRFilling.from_json(data))
    print(report.summary())
    return EXIT_OK if report.ok else EXIT_INVALID


def cmd_count(args) -> int:
    triple = (args.mu, args.nu, args.lam)
    if args.oracle == "filling":
        print(count_fillings(*triple))
        return EXIT_OK
    if args.oracle == "hive":
        print(count_hives(*triple))
        return EXIT_OK
    with ThreadPoolExecutor(max_workers=2) as pool:
        a, b = pool.submit(count_fillings, *triple), pool.submit(count_hives, *triple)
        by_filling, by_hive = a.result(), b.result()
    print(by_filling, by_hive)
    if by_filling != by_hive:
        print("oracles disagree", file=sys.stderr)
        return EXIT_MISMATCH
    return EXIT_OK


def cmd_enumerate(args) -> int:
    fillings = enumerate_fillings(args.mu, args.nu, args.lam)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    width = max(4, len(str(len(fillings))))
    for t, f in enumerate(fillings, start=1):
        _write(str(out / f"filling_{t:0{width}d}.json"), _dump(f.to_json()) + "\n")
    print(len(fillings))
    return EXIT_OK


def cmd_to_hive(args) -> int:
    print(_dump(filling_to_hive(_read_filling(args.file)).to_json()))
    return EXIT_OK


def cmd_from_hive(args) -> int:
    H = Hive.from_json(_read_json(args.file))
    report = validate_hive(H)
    if not report.ok:
        raise InvalidInput(f"{args.file} is not a hive: {report.summary()}")
    print(_dump(hive_to_filling(H).to_json()))
    return EXIT_OK


def cmd_sum(args) -> int:
    f1, f2 = _read_filling(args.a), _read_filling(args.b)
    s, trace = sum_fillings(f1, f2)
    print(_type_line(*s.type))
    text = _dump(s.to_json())
    if args.out:
        _write(args.out, text + "\n")
    else:
        print(text)
    if args.trace:
        _write(args.trace, _dump(trace.to_json()) + "\n")
    if args.svg:
        h, fl = overlay_flow(f1, f2)
        _write(args.svg, render_svg(h, replay_trace_on_flow(fl, trace)))
    return EXIT_OK


def cmd_flow(args) -> int:
    print(_dump(canonical_flow(_read_filling(args.file)).to_json()))
    return EXIT_OK


def cmd_honeycomb(args) -> int:
    f = _read_filling(args.file)
    h = honeycomb_from_filling(f)
    if args.svg:
        _write(args.svg, render_svg(h, canonical_honeycomb_flow(f) if args.flow else None))
    else:
        print(_dump(h.to_json()))
    return EXIT_OK


def cmd_overlay_check(args) -> int:
    f1, f2 = _read_filling(args.a), _read_filling(args.b)
    s, trace = sum_fillings(f1, f2)
    same = honeycombs_equal(honeycomb_from_filling(s), overlay(honeycomb_from_filling(f1), honeycomb_from_filling(f2)))
    print(f"honeycombs equal: {'yes' if same else 'no'}")
    h, fl = overlay_flow(f1, f2)
    try:
        replayed = replay_trace_on_flow(fl, trace)
    except TraceMismatch as exc:
        print(f"replay failed: {exc}")
        return EXIT_MISMATCH
    report = check_honeycomb_flow(replayed)
    canonical = report.ok and flows_equal(replayed, canonical_honeycomb_flow(s, fl.cuts))
    print(f"replayed flow valid: {'yes' if report.ok else 'no (' + report.summary() + ')'}")
    print(f"replayed flow canonical: {'yes' if canonical else 'no'}")
    return EXIT_OK if same and canonical else EXIT_MISMATCH


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="lrsum", description="Sums of Littlewood-Richardson fillings and their hives and honeycombs.")
    sub = parser.add_subparsers(dest="command", required=True)

    def triple(p):
        p.add_argument("--mu", type=_partition, required=True, help="comma-separated parts")
        p.add_argument("--nu", type=_partition, required=True)
        p.add_argument("--lambda", dest="lam", type=_partition, required=True)

    p = sub.add_parser("validate", help="check a filling (or a hive with --hive)")
    p.add_argument("file")
    p.add_argument("--hive", action="store_true")
    p.set_defaults(run=cmd_validate)

    p = sub.add_parser("count", help="count LR fillings of a type")
    triple(p)
    p.add_argument("--oracle", choices=("filling", "hive", "both"), default="filling")
    p.set_defaults(run=cmd_count)

    p = sub.add_parser("enumerate", help="write every LR filling of a type to a directory")
    triple(p)
    p.add_argument("--out", required=True)
    p.set_defaults(run=cmd_enumerate)

    p = sub.add_parser("to-hive", help="filling JSON to hive JSON")
    p.add_argument("file")
    p.set_defaults(run=cmd_to_hive)

    p = sub.add_parser("from-hive", help="hive JSON to filling JSON")
    p.add_argument("file")
    p.set_defaults(run=cmd_from_hive)

    p = sub.add_parser("sum", help="sum two fillings; prints the type line, then the filling")
    p.add_argument("a")
    p.add_argument("b")
    p.add_argument("--out", help="write the summed filling here instead of stdout")
    p.add_argument("--trace", help="write the step trace as JSON")
    p.add_argument("--svg", help="draw the overlay with the corrected flow")
    p.set_defaults(run=cmd_sum)

    p = sub.add_parser("flow", help="canonical flow of a filling as JSON")
    p.add_argument("file")
    p.set_defaults(run=cmd_flow)

    p = sub.add_parser("honeycomb", help="honeycomb of a filling as JSON or SVG")
    p.add_argument("file")
    p.add_argument("--svg")
    p.add_argument("--flow", action="store_true", help="colour the drawing by the canonical flow")
    p.set_defaults(run=cmd_honeycomb)

    p = sub.add_parser("overlay-check", help="compare the honeycomb of the sum with the overlay")
    p.add_argument("a")
    p.add_argument("b")
    p.set_defaults(run=cmd_overlay_check)
    return parser


def run(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INVALID if exc.code else EXIT_OK
    try:
        return args.run(args)
    except InvariantError as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except TraceMismatch as exc:
        print(f"trace does not match flow: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except InvalidInput as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
