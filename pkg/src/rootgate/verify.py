"""Exhaustive truth-table enumeration and verification against expressions."""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from . import boolexpr
from .engine import TiePolicy, simulate
from .network import ChannelNetwork


@dataclass(frozen=True)
class TruthRow:
    inputs: tuple[int, ...]
    outputs: dict[str, bool]
    expected: dict[str, bool] | None = None
    ok: bool | None = None


@dataclass(frozen=True)
class TruthTable:
    input_names: tuple[str, ...]
    output_names: tuple[str, ...]
    rows: tuple[TruthRow, ...]

    def row_map(self) -> dict[tuple[int, ...], dict[str, bool]]:
        return {r.inputs: dict(r.outputs) for r in self.rows}

    def format(self) -> str:
        headers = list(self.input_names) + list(self.output_names)
        lines = [" ".join(f"{h:>3}" for h in headers)]
        lines.append("-" * len(lines[0]))
        for r in self.rows:
            cells = [str(v) for v in r.inputs]
            cells += [str(int(r.outputs[o])) for o in self.output_names]
            mark = ""
            if r.ok is not None:
                mark = "  ok" if r.ok else "  MISMATCH"
            lines.append(" ".join(f"{c:>3}" for c in cells) + mark)
        return "\n".join(lines)

    def to_csv(self) -> str:
        headers = list(self.input_names) + list(self.output_names)
        lines = [",".join(headers)]
        for r in self.rows:
            cells = [str(v) for v in r.inputs]
            cells += [str(int(r.outputs[o])) for o in self.output_names]
            lines.append(",".join(cells))
        return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class VerifyReport:
    table: TruthTable
    verdict: bool

    def format(self) -> str:
        status = "PASS" if self.verdict else "FAIL"
        return self.table.format() + f"\nverdict: {status}"


def enumerate_truth_table(
    net: ChannelNetwork, tie: TiePolicy, delays: dict[str, int] | None = None
) -> TruthTable:
    """Simulate every input assignment in ascending binary order."""
    names = net.logical_inputs
    outputs = tuple(sorted(p.id for p in net.output_ports))
    rows = []
    for bits in itertools.product((0, 1), repeat=len(names)):
        assignment = {n: bool(b) for n, b in zip(names, bits)}
        outcome = simulate(net, assignment, tie, delays)
        rows.append(TruthRow(bits, dict(sorted(outcome.outputs.items()))))
    return TruthTable(names, outputs, tuple(rows))


def verify_against(
    net: ChannelNetwork,
    expected: dict[str, str],
    tie: TiePolicy,
) -> VerifyReport:
    """Compare enumeration against Boolean expressions over the inputs."""
    names = set(net.logical_inputs)
    parsed = {}
    for out, text in sorted(expected.items()):
        ast = boolexpr.parse_expr(text)
        unknown = boolexpr.expr_names(ast) - names
        if unknown:
            raise boolexpr.ExprError(
                f"expression for {out!r} references unknown inputs: "
                f"{', '.join(sorted(unknown))}"
            )
        if out not in {p.id for p in net.output_ports}:
            raise boolexpr.ExprError(f"no output port named {out!r}")
        parsed[out] = ast

    base = enumerate_truth_table(net, tie)
    rows = []
    verdict = True
    for row in base.rows:
        env = {n: bool(b) for n, b in zip(base.input_names, row.inputs)}
        want = {out: boolexpr.eval_expr(ast, env) for out, ast in parsed.items()}
        ok = all(row.outputs[out] == want[out] for out in want)
        verdict = verdict and ok
        rows.append(TruthRow(row.inputs, row.outputs, want, ok))
    return VerifyReport(
        TruthTable(base.input_names, base.output_names, tuple(rows)), verdict
    )
