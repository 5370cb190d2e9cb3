"""Command-line interface.

Subcommands:
  build       construct a named gate or compile a netlist file to JSON
  sim         run one simulation, optionally exporting trace and SVG
  table       enumerate a truth table, optionally verifying expressions
  verify-all  check all five library gates against their truth functions
  report      write truth-table CSV and matplotlib figures to a directory

The environment variable ROOTGATE_SEED is reserved for future stochastic
features and is currently unused: the engine is fully deterministic.
"""

from __future__ import annotations

import argparse
import os
import sys

from .engine import SimulationError, TiePolicy, simulate
from .gates import GATE_BUILDERS, GATE_EXPECTATIONS, GateParams
from .netlist import compile_netlist, parse_netlist
from .network import load_network, network_to_json, save_network
from .render import render_svg
from .verify import enumerate_truth_table, verify_against


def _parse_tie(text: str) -> TiePolicy:
    if text == "error":
        return TiePolicy.error()
    if text == "both":
        return TiePolicy.both_deflect()
    if text.startswith("priority="):
        names = [n.strip() for n in text[len("priority="):].split(",") if n.strip()]
        return TiePolicy.priority_by_input(names)
    raise argparse.ArgumentTypeError(
        f"bad tie policy {text!r}; use error, both, or priority=a,b,..."
    )


def _parse_assignment(text: str) -> dict[str, bool]:
    result: dict[str, bool] = {}
    for item in text.split(","):
        item = item.strip()
        if not item:
            continue
        if "=" not in item:
            raise argparse.ArgumentTypeError(f"bad assignment item {item!r}")
        name, value = item.split("=", 1)
        if value.strip() not in ("0", "1"):
            raise argparse.ArgumentTypeError(f"value for {name!r} must be 0 or 1")
        result[name.strip()] = value.strip() == "1"
    return result


def _parse_delays(text: str) -> dict[str, int]:
    result: dict[str, int] = {}
    for item in text.split(","):
        item = item.strip()
        if not item:
            continue
        name, value = item.split("=", 1)
        result[name.strip()] = int(value)
    return result


def _parse_expectations(text: str) -> dict[str, str]:
    result: dict[str, str] = {}
    for item in text.split(";"):
        item = item.strip()
        if not item:
            continue
        name, expr = item.split("=", 1)
        result[name.strip()] = expr.strip()
    return result


def _load(path: str):
    return load_network(path)


def cmd_build(args) -> int:
    params = GateParams(margin=args.margin, scale=args.scale)
    if args.target in GATE_BUILDERS:
        net = GATE_BUILDERS[args.target](params)
    elif os.path.exists(args.target):
        with open(args.target, "r", encoding="utf-8") as fh:
            nl = parse_netlist(fh.read())
        net = compile_netlist(nl, params)
    else:
        print(
            f"error: {args.target!r} is neither a gate name "
            f"({', '.join(sorted(GATE_BUILDERS))}) nor a netlist file",
            file=sys.stderr,
        )
        return 2
    if args.output:
        save_network(net, args.output)
        print(f"wrote {args.output}")
    else:
        sys.stdout.write(network_to_json(net))
    return 0


def cmd_sim(args) -> int:
    net = _load(args.network)
    inputs = {name: False for name in net.logical_inputs}
    inputs.update(_parse_assignment(args.set or ""))
    unknown = set(inputs) - set(net.logical_inputs)
    if unknown:
        print(f"error: unknown inputs {sorted(unknown)}", file=sys.stderr)
        return 2
    delays = _parse_delays(args.delay) if args.delay else None
    try:
        outcome = simulate(net, inputs, args.tie, delays)
    except SimulationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(" ".join(f"{k}={int(v)}" for k, v in sorted(outcome.outputs.items())))
    if args.trace:
        with open(args.trace, "w", encoding="utf-8") as fh:
            fh.write(outcome.trace_jsonl())
        print(f"wrote {args.trace}")
    if args.svg:
        with open(args.svg, "w", encoding="utf-8") as fh:
            fh.write(render_svg(net, outcome))
        print(f"wrote {args.svg}")
    return 0


def cmd_table(args) -> int:
    net = _load(args.network)
    if args.expect:
        report = verify_against(net, _parse_expectations(args.expect), args.tie)
        print(report.format())
        return 0 if report.verdict else 1
    print(enumerate_truth_table(net, args.tie).format())
    return 0


def cmd_verify_all(args) -> int:
    params = GateParams(margin=args.margin, scale=args.scale)
    all_pass = True
    for name in sorted(GATE_BUILDERS):
        expected, tie_name = GATE_EXPECTATIONS[name]
        tie = TiePolicy.both_deflect() if tie_name == "both" else TiePolicy.error()
        net = GATE_BUILDERS[name](params)
        report = verify_against(net, expected, tie)
        status = "PASS" if report.verdict else "FAIL"
        formulas = " ".join(f"{k}={v}" for k, v in sorted(expected.items()))
        print(f"{name:8s} {status}  ({formulas})")
        all_pass = all_pass and report.verdict
    return 0 if all_pass else 1


def cmd_report(args) -> int:
    from .report import write_report

    net = _load(args.network)
    name = os.path.splitext(os.path.basename(args.network))[0]
    written = write_report(net, args.output, args.tie, name=name)
    for path in written:
        print(f"wrote {path}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rootgate",
        description="Channel-network logic gate simulator and circuit compiler.",
        epilog="ROOTGATE_SEED is reserved and currently unused; the engine is "
               "deterministic.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build", help="build a gate or compile a netlist file")
    p.add_argument("target", help="gate name or netlist file path")
    p.add_argument("--margin", type=int, default=2)
    p.add_argument("--scale", type=int, default=1)
    p.add_argument("-o", "--output", help="write network JSON here")
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("sim", help="simulate one input assignment")
    p.add_argument("network", help="network JSON file")
    p.add_argument("--set", help="input assignment, e.g. x=1,y=0")
    p.add_argument("--delay", help="per-input delays, e.g. x=5")
    p.add_argument("--tie", type=_parse_tie, default=TiePolicy.error())
    p.add_argument("--trace", help="write JSON-lines event trace here")
    p.add_argument("--svg", help="write an SVG rendering here")
    p.set_defaults(func=cmd_sim)

    p = sub.add_parser("table", help="enumerate the full truth table")
    p.add_argument("network")
    p.add_argument("--expect", help='expected functions, e.g. "p=x&y;q=x|y"')
    p.add_argument("--tie", type=_parse_tie, default=TiePolicy.error())
    p.set_defaults(func=cmd_table)

    p = sub.add_parser(
        "verify-all", help="verify all library gates against their functions"
    )
    p.add_argument("--margin", type=int, default=2)
    p.add_argument("--scale", type=int, default=1)
    p.set_defaults(func=cmd_verify_all)

    p = sub.add_parser("report", help="write CSV table and figures")
    p.add_argument("network")
    p.add_argument("-o", "--output", required=True, help="report directory")
    p.add_argument("--tie", type=_parse_tie, default=TiePolicy.error())
    p.set_defaults(func=cmd_report)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
