"""Random single-regime netlist generator shared by compiler tests."""

from __future__ import annotations

import random

from rootgate.netlist import GATE_KINDS, Netlist, parse_netlist


def random_netlist(rng: random.Random, max_gates: int = 5,
                   max_inputs: int = 6) -> Netlist:
    regime = rng.choice(["gravity", "attraction"])
    n_gates = rng.randint(1, max_gates)
    kinds = [k for k, s in GATE_KINDS.items() if s.regime == regime]
    pool = [f"i{k}" for k in range(max_inputs)]
    used_inputs: list[str] = []
    lines: list[str] = []
    produced: list[str] = []  # refs eligible for cascading
    sinkable: list[str] = []  # refs eligible as primary outputs

    def fresh_input() -> str:
        unused = [p for p in pool if p not in used_inputs]
        if unused and (not used_inputs or rng.random() < 0.7):
            name = rng.choice(unused)
            used_inputs.append(name)
            return name
        return rng.choice(used_inputs)

    for g in range(n_gates):
        kind = rng.choice(kinds)
        spec = GATE_KINDS[kind]
        args = []
        for formal in spec.inputs:
            # Stick to shapes the compiler accepts: HALFADD needs the point
            # arrival windows only primary feeds give, and attraction wiring
            # must pair south-exit outputs with north-side inputs (q -> x)
            # and east-exit outputs with west-side inputs (p -> y), since
            # crossing routing channels are rejected under attraction.
            if regime == "attraction":
                if kind == "HALFADD":
                    candidates = []
                else:
                    want = ".q" if formal == "x" else ".p"
                    candidates = [r for r in produced if r.endswith(want)]
            else:
                candidates = list(produced)
            if candidates and rng.random() < 0.5:
                args.append(rng.choice(candidates))
            else:
                args.append(fresh_input())
        gid = f"g{g}"
        lines.append(f"{gid} = {kind}({', '.join(args)});")
        if kind != "HALFADD":  # half-adder outputs terminate at the edge
            produced.extend(f"{gid}.{out}" for out in spec.outputs)
        sinkable.extend(f"{gid}.{out}" for out in spec.outputs)

    n_outs = rng.randint(1, min(3, len(sinkable)))
    refs = rng.sample(sinkable, n_outs)
    outs = ", ".join(f"o{i} = {ref}" for i, ref in enumerate(refs))
    text = (
        "in " + ", ".join(sorted(set(used_inputs))) + ";\n"
        + "\n".join(lines)
        + f"\nout {outs};\n"
    )
    return parse_netlist(text)
