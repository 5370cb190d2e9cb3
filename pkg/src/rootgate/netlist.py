"""Netlist DSL parser, Boolean oracle, and layout compiler.

The DSL::

    in x, y;            # primary inputs
    g1 = GRAV2(x, y);   # gate instance; args are inputs or inst.port refs
    g2 = GRAV2(g1.q, y);
    out s = g2.p, c = g2.q;   # primary outputs
    # comments run to end of line

Compilation instantiates one physical gate layout per *consumption* of a
gate output (roots cannot split, so fan-out duplicates the driving cone),
connects copies with routing channels, and pads routing-channel lengths so
that every gate's internal arrival-order requirement holds for worst-case
arrival windows measured from the primary inputs.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

from . import boolexpr
from .gates import GATE_BUILDERS, GateParams
from .network import (
    Channel,
    ChannelNetwork,
    Junction,
    Port,
    path_length,
    validate_network,
)
from .tropism import route_network


class ParseError(ValueError):
    def __init__(self, message: str, line: int, col: int):
        super().__init__(f"line {line}, column {col}: {message}")
        self.line = line
        self.col = col


class CompileError(ValueError):
    pass


# ---------------------------------------------------------------------------
# Gate kinds
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GateKindSpec:
    kind: str
    inputs: tuple[str, ...]
    outputs: tuple[str, ...]
    functions: dict[str, str]
    builder: str
    regime: str
    # (early input, late input, junction) arrival-order requirements,
    # expressed against the builder's input ports and junction ids.
    orderings: tuple[tuple[str, str, str], ...]


GATE_KINDS: dict[str, GateKindSpec] = {
    "GRAV2": GateKindSpec(
        "GRAV2", ("x", "y"), ("p", "q"),
        {"p": "x&y", "q": "x|y"},
        "grav2", "gravity", (("y", "x", "j"),),
    ),
    "GRAV3": GateKindSpec(
        "GRAV3", ("x", "y", "z"), ("p", "q", "r"),
        {"p": "x|y|z", "q": "x&y", "r": "z&(x|y)"},
        "grav3", "gravity", (("x", "y", "j"), ("y", "z", "j")),
    ),
    "ATTR": GateKindSpec(
        "ATTR", ("x", "y"), ("p", "q"),
        {"p": "!x&y", "q": "x"},
        "attr", "attraction", (("x", "y", "j"),),
    ),
    "HALFADD": GateKindSpec(
        "HALFADD", ("x", "y"), ("p", "q", "r"),
        {"p": "x^y", "q": "x|y", "r": "x&y"},
        "halfadd", "attraction",
        (("x_n", "y_n", "j1"), ("y_s", "x_s", "j4"), ("x_n", "y_s", "j3")),
    ),
}


# ---------------------------------------------------------------------------
# Netlist model
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GateInstance:
    id: str
    kind: str
    args: tuple[str, ...]  # primary input name or "instance.port"


@dataclass(frozen=True)
class Netlist:
    primary_inputs: tuple[str, ...]
    primary_outputs: tuple[tuple[str, str], ...]  # (name, "instance.port")
    gates: tuple[GateInstance, ...]

    def gate(self, gid: str) -> GateInstance:
        for g in self.gates:
            if g.id == gid:
                return g
        raise KeyError(gid)

    @property
    def wires(self) -> tuple[tuple[str, tuple[str, str]], ...]:
        """Derived wire list: (driver "inst.port", (consumer inst, formal))."""
        out = []
        for g in self.gates:
            kind = GATE_KINDS[g.kind]
            for formal, arg in zip(kind.inputs, g.args):
                if "." in arg:
                    out.append((arg, (g.id, formal)))
        return tuple(out)


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------

_PUNCT = set(",;=().")


def _tokenize(text: str):
    line, col, pos = 1, 1, 0
    tokens = []  # (value, kind, line, col)
    while pos < len(text):
        ch = text[pos]
        if ch == "\n":
            line += 1
            col = 1
            pos += 1
            continue
        if ch.isspace():
            pos += 1
            col += 1
            continue
        if ch == "#":
            while pos < len(text) and text[pos] != "\n":
                pos += 1
            continue
        if ch in _PUNCT:
            tokens.append((ch, "punct", line, col))
            pos += 1
            col += 1
            continue
        if ch.isalpha() or ch == "_":
            start = pos
            while pos < len(text) and (text[pos].isalnum() or text[pos] == "_"):
                pos += 1
            word = text[start:pos]
            kind = "kind" if word.isupper() else "ident"
            tokens.append((word, kind, line, col))
            col += pos - start
            continue
        raise ParseError(f"unexpected character {ch!r}", line, col)
    tokens.append(("", "eof", line, col))
    return tokens


def parse_netlist(text: str) -> Netlist:
    """Parse and structurally validate a circuit description."""
    tokens = _tokenize(text)
    pos = 0

    def peek():
        return tokens[pos]

    def take(expected_value=None, expected_kind=None, what=None):
        nonlocal pos
        value, kind, line, col = tokens[pos]
        if expected_value is not None and value != expected_value:
            raise ParseError(
                f"expected {what or expected_value!r}, found {value or 'end of input'!r}",
                line, col,
            )
        if expected_kind is not None and kind != expected_kind:
            raise ParseError(
                f"expected {what or expected_kind}, found {value or 'end of input'!r}",
                line, col,
            )
        pos += 1
        return value, line, col

    primary_inputs: list[str] = []
    primary_outputs: list[tuple[str, str]] = []
    gates: list[GateInstance] = []

    def parse_ref():
        name, line, col = take(expected_kind="ident", what="identifier")
        if peek()[0] == ".":
            take(".")
            port, _, _ = take(expected_kind="ident", what="port name")
            return f"{name}.{port}", line, col
        return name, line, col

    while peek()[1] != "eof":
        value, kind, line, col = peek()
        if value == "in":
            take("in")
            while True:
                name, l, c = take(expected_kind="ident", what="input name")
                if name in primary_inputs:
                    raise ParseError(f"duplicate primary input {name!r}", l, c)
                primary_inputs.append(name)
                if peek()[0] == ",":
                    take(",")
                    continue
                break
            take(";")
        elif value == "out":
            take("out")
            while True:
                name, l, c = take(expected_kind="ident", what="output name")
                take("=")
                ref, rl, rc = parse_ref()
                if "." not in ref:
                    raise ParseError(
                        "primary output must reference an instance output "
                        "(instance.port)", rl, rc,
                    )
                if any(n == name for n, _ in primary_outputs):
                    raise ParseError(f"duplicate primary output {name!r}", l, c)
                primary_outputs.append((name, ref))
                if peek()[0] == ",":
                    take(",")
                    continue
                break
            take(";")
        elif kind == "ident":
            gid, l, c = take(expected_kind="ident")
            take("=")
            kname, kl, kc = take(expected_kind="kind", what="gate kind")
            if kname not in GATE_KINDS:
                raise ParseError(
                    f"unknown gate kind {kname!r} (known: {', '.join(sorted(GATE_KINDS))})",
                    kl, kc,
                )
            take("(")
            args = []
            if peek()[0] != ")":
                while True:
                    ref, _, _ = parse_ref()
                    args.append(ref)
                    if peek()[0] == ",":
                        take(",")
                        continue
                    break
            take(")")
            take(";")
            if any(g.id == gid for g in gates) or gid in primary_inputs:
                raise ParseError(f"duplicate identifier {gid!r}", l, c)
            spec = GATE_KINDS[kname]
            if len(args) != len(spec.inputs):
                raise ParseError(
                    f"{kname} takes {len(spec.inputs)} inputs, got {len(args)}",
                    kl, kc,
                )
            gates.append(GateInstance(gid, kname, tuple(args)))
        else:
            raise ParseError(
                f"expected 'in', 'out' or an instance definition, found {value!r}",
                line, col,
            )

    nl = Netlist(tuple(primary_inputs), tuple(primary_outputs), tuple(gates))
    _validate_netlist(nl)
    return nl


def _validate_netlist(nl: Netlist) -> None:
    ids = {g.id for g in nl.gates}

    def check_ref(ref: str, context: str):
        if "." in ref:
            inst, port = ref.split(".", 1)
            if inst not in ids:
                raise ParseError(
                    f"{context} references undefined instance {inst!r} "
                    "(dangling wire)", 0, 0,
                )
            spec = GATE_KINDS[nl.gate(inst).kind]
            if port not in spec.outputs:
                raise ParseError(
                    f"{context}: {inst!r} ({spec.kind}) has no output {port!r}",
                    0, 0,
                )
        else:
            if ref not in nl.primary_inputs:
                raise ParseError(
                    f"{context} references undeclared input {ref!r} "
                    "(dangling wire)", 0, 0,
                )

    for g in nl.gates:
        for arg in g.args:
            check_ref(arg, f"instance {g.id!r}")
    if not nl.primary_outputs:
        raise ParseError("netlist declares no primary outputs", 0, 0)
    for name, ref in nl.primary_outputs:
        check_ref(ref, f"output {name!r}")

    # Cycle check over the instance graph.
    colors: dict[str, int] = {}

    def visit(gid: str, stack: tuple[str, ...]):
        state = colors.get(gid, 0)
        if state == 1:
            cyc = " -> ".join(stack + (gid,))
            raise ParseError(f"netlist contains a cycle: {cyc}", 0, 0)
        if state == 2:
            return
        colors[gid] = 1
        for arg in nl.gate(gid).args:
            if "." in arg:
                visit(arg.split(".", 1)[0], stack + (gid,))
        colors[gid] = 2

    for g in nl.gates:
        visit(g.id, ())


def netlist_to_text(nl: Netlist) -> str:
    lines = []
    if nl.primary_inputs:
        lines.append("in " + ", ".join(nl.primary_inputs) + ";")
    for g in nl.gates:
        lines.append(f"{g.id} = {g.kind}(" + ", ".join(g.args) + ");")
    if nl.primary_outputs:
        lines.append(
            "out " + ", ".join(f"{n} = {ref}" for n, ref in nl.primary_outputs) + ";"
        )
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Boolean oracle
# ---------------------------------------------------------------------------

def topo_order(nl: Netlist) -> list[GateInstance]:
    done: dict[str, bool] = {}
    order: list[GateInstance] = []

    def visit(gid: str):
        if done.get(gid):
            return
        for arg in nl.gate(gid).args:
            if "." in arg:
                visit(arg.split(".", 1)[0])
        done[gid] = True
        order.append(nl.gate(gid))

    for g in nl.gates:
        visit(g.id)
    return order


def eval_oracle(nl: Netlist, inputs: dict[str, bool]) -> dict[str, bool]:
    """Pure Boolean evaluation of the netlist; no simulation involved."""
    if set(inputs) != set(nl.primary_inputs):
        raise ValueError(
            f"assignment domain {sorted(inputs)} does not match primary "
            f"inputs {sorted(nl.primary_inputs)}"
        )
    values: dict[str, bool] = {}  # "inst.port" -> value
    for g in topo_order(nl):
        spec = GATE_KINDS[g.kind]
        env = {}
        for formal, arg in zip(spec.inputs, g.args):
            env[formal] = values[arg] if "." in arg else inputs[arg]
        for out in spec.outputs:
            values[f"{g.id}.{out}"] = boolexpr.evaluate(spec.functions[out], env)
    return {name: values[ref] for name, ref in nl.primary_outputs}


# ---------------------------------------------------------------------------
# Compiler
# ---------------------------------------------------------------------------

_WIRE_GAP = 4  # vertical clearance reserved for wire doglegs between boxes
_STEM_RISE = 2  # how far a primary stem port sits outside its gate port


@dataclass
class _Copy:
    """One physical instantiation of a gate builder."""

    cid: str
    spec: GateKindSpec
    net: ChannelNetwork
    # builder-local input port id -> ("primary", name) | ("wire", _Copy, out_port)
    feeders: dict[str, tuple] = field(default_factory=dict)
    # consumed outputs: builder-local output port id -> final exposed name or None
    consumed: dict[str, str | None] = field(default_factory=dict)
    offset: tuple[int, int] = (0, 0)

    def key(self) -> str:
        return self.cid


class _Compilation:
    def __init__(self, nl: Netlist, params: GateParams):
        self.nl = nl
        self.params = params
        self.copies: list[_Copy] = []
        self._copy_counts: dict[str, int] = {}
        self.regime = self._check_regime()
        self.pads: dict[str, int] = {}  # feeder key -> extra length beyond 1

    def _check_regime(self) -> str:
        regimes = {GATE_KINDS[g.kind].regime for g in self.nl.gates}
        if len(regimes) != 1:
            raise CompileError(
                "mixed-regime netlist: gravity and attraction gates cannot "
                "share one network"
            )
        return regimes.pop()

    # -- physical expansion (fan-out duplication) --------------------------

    def _new_copy(self, inst: GateInstance) -> _Copy:
        n = self._copy_counts.get(inst.id, 0)
        self._copy_counts[inst.id] = n + 1
        cid = inst.id if n == 0 else f"{inst.id}~{n}"
        spec = GATE_KINDS[inst.kind]
        net = GATE_BUILDERS[spec.builder](self.params)
        copy = _Copy(cid, spec, net)
        for formal, arg in zip(spec.inputs, inst.args):
            for port in sorted(net.input_bindings[formal]):
                if "." in arg:
                    drv_inst, drv_port = arg.split(".", 1)
                    driver = self._new_copy(self.nl.gate(drv_inst))
                    driver.consumed[drv_port] = None
                    copy.feeders[port] = ("wire", driver, drv_port)
                else:
                    copy.feeders[port] = ("primary", arg)
        self.copies.append(copy)
        return copy

    def expand(self) -> list[_Copy]:
        """Build the physical forest: one tree per primary-output sink group,
        plus standalone trees for gates outside every output cone (their
        channels exist physically even though nobody reads the exits)."""
        trees: list[_Copy] = []
        by_instance: dict[str, list[_Copy]] = {}
        for name, ref in self.nl.primary_outputs:
            inst_id, port = ref.split(".", 1)
            target = None
            for cand in by_instance.get(inst_id, []):
                if port not in cand.consumed:
                    target = cand
                    break
            if target is None:
                target = self._new_copy(self.nl.gate(inst_id))
                by_instance.setdefault(inst_id, []).append(target)
                trees.append(target)
            target.consumed[port] = name
        instantiated = {c.cid.split("~", 1)[0] for c in self.copies}
        for g in self.nl.gates:
            if g.id not in instantiated:
                referenced = any(
                    arg.split(".", 1)[0] == g.id
                    for other in self.nl.gates
                    for arg in other.args
                    if "." in arg
                )
                if referenced:
                    continue  # covered when its consumer gets instantiated
                trees.append(self._new_copy(g))
                instantiated = {c.cid.split("~", 1)[0] for c in self.copies}
        for name in self.nl.primary_inputs:
            if not any(
                f[0] == "primary" and f[1] == name
                for c in self.copies
                for f in c.feeders.values()
            ):
                raise CompileError(f"primary input {name!r} drives nothing")
        return trees

    # -- timing: arrival windows and padding --------------------------------

    def _feeder_key(self, copy: _Copy, port: str) -> str:
        return f"{copy.cid}/{port}"

    def _feeder_length(self, copy: _Copy, port: str) -> int:
        return 1 + self.pads.get(self._feeder_key(copy, port), 0)

    def _internal_paths(self, copy: _Copy, src_port: str, dst_port: str) -> list[int]:
        """Lengths of all simple forward paths between two builder ports."""
        net = copy.net
        results: list[int] = []

        def walk(element: str, acc: int, seen: frozenset[str]):
            if element == dst_port:
                results.append(acc)
                return
            for c in net.outgoing_channels(element):
                if c.id in seen:
                    continue
                walk(c.to_end, acc + c.length, seen | {c.id})

        walk(src_port, 0, frozenset())
        return results

    def _port_window(self, copy: _Copy, port: str,
                     memo: dict) -> tuple[int, int]:
        """Earliest/latest arrival tick at a copy's input port (its via)."""
        key = ("port", copy.cid, port)
        if key in memo:
            return memo[key]
        feeder = copy.feeders[port]
        flen = self._feeder_length(copy, port)
        if feeder[0] == "primary":
            window = (flen, flen)
        else:
            _, driver, drv_port = feeder
            e, l = self._output_window(driver, drv_port, memo)
            window = (e + flen, l + flen)
        memo[key] = window
        return window

    def _output_window(self, copy: _Copy, out_port: str,
                       memo: dict) -> tuple[int, int]:
        key = ("out", copy.cid, out_port)
        if key in memo:
            return memo[key]
        lo, hi = None, None
        for in_port in sorted(copy.feeders):
            paths = self._internal_paths(copy, in_port, out_port)
            if not paths:
                continue
            e, l = self._port_window(copy, in_port, memo)
            plo, phi = e + min(paths), l + max(paths)
            lo = plo if lo is None else min(lo, plo)
            hi = phi if hi is None else max(hi, phi)
        if lo is None:
            raise CompileError(
                f"output {out_port} of {copy.cid} is fed by no input"
            )
        memo[key] = (lo, hi)
        return memo[key]

    def _constraints(self):
        """(early copy+port+path, late copy+port+path, label) triples."""
        out = []
        for copy in self.copies:
            for early, late, junction in copy.spec.orderings:
                p_early = path_length(copy.net, early, junction)
                p_late = path_length(copy.net, late, junction)
                label = (
                    f"{copy.cid}: {early} must reach {junction} "
                    f"{self.params.margin}+ ticks before {late}"
                )
                out.append((copy, early, p_early, late, p_late, label))
        return out

    def solve_padding(self) -> None:
        constraints = self._constraints()
        margin = self.params.margin
        for _ in range(10000):
            memo: dict = {}
            violated = None
            for copy, early, p_e, late, p_l, label in constraints:
                _, l_early = self._port_window(copy, early, memo)
                e_late, _ = self._port_window(copy, late, memo)
                deficit = (l_early + p_e + margin) - (e_late + p_l)
                if deficit > 0:
                    violated = (copy, late, deficit, label)
                    break
            if violated is None:
                return
            copy, late, deficit, _ = violated
            self.pads[self._feeder_key(copy, late)] = (
                self.pads.get(self._feeder_key(copy, late), 0) + deficit
            )
        memo = {}
        remaining = []
        for copy, early, p_e, late, p_l, label in constraints:
            _, l_early = self._port_window(copy, early, memo)
            e_late, _ = self._port_window(copy, late, memo)
            if l_early + p_e + margin > e_late + p_l:
                remaining.append(label)
        raise CompileError(
            "infeasible arrival-order constraint system: " + "; ".join(remaining)
        )

    # -- geometry ------------------------------------------------------------

    def _bbox(self, copy: _Copy) -> tuple[int, int, int, int]:
        xs, ys = [], []
        for c in copy.net.channels:
            for x, y in c.points:
                xs.append(x)
                ys.append(y)
        return min(xs), min(ys), max(xs), max(ys)

    def place_tree(self, copy: _Copy, ox: int, oy: int) -> tuple[int, int, int, int]:
        """Assign offsets so each driver subtree has its own disjoint region.

        Gravity stacks drivers above their consumer; attraction puts the
        x-side driver north and the y-side driver west (rows strictly split
        at the consumer's top edge so subtrees cannot collide).
        """
        x0, y0, x1, y1 = self._bbox(copy)
        copy.offset = (ox - x0, oy - y0)
        width = x1 - x0
        height = y1 - y0
        total = (ox, oy, ox + width, oy + height)
        gap = _WIRE_GAP + 2
        if self.regime == "gravity":
            child_x = ox
            child_y = oy + height + _WIRE_GAP + len(copy.feeders)
            for port in self._ports_left_to_right(copy):
                feeder = copy.feeders[port]
                if feeder[0] != "wire":
                    continue
                driver = feeder[1]
                sub = self.place_tree(driver, child_x, child_y)
                child_x = sub[2] + 4
                total = _merge_box(total, sub)
        else:
            # North subtrees live strictly above this gate's top edge, west
            # subtrees strictly left of it with their tops at or below that
            # edge; the row split keeps arbitrary subtrees disjoint.
            for port in sorted(copy.feeders):
                feeder = copy.feeders[port]
                if feeder[0] != "wire":
                    continue
                driver = feeder[1]
                side = self._attraction_side(copy, port)
                bx0, by0, bx1, by1 = self.place_tree(driver, 0, 0)
                if side == "north":
                    dx = ox
                    dy = (oy + height + gap) - by0
                else:
                    dx = (ox - gap) - bx1
                    dy = (oy + height) - by1
                _shift_tree(driver, dx, dy)
                total = _merge_box(
                    total, (bx0 + dx, by0 + dy, bx1 + dx, by1 + dy)
                )
        return total

    def _ports_left_to_right(self, copy: _Copy) -> list[str]:
        ports = {p.id: p.position for p in copy.net.input_ports}
        return sorted(copy.feeders, key=lambda pid: (ports[pid][0], pid))

    def _attraction_side(self, copy: _Copy, port: str) -> str:
        # A port whose root enters growing mostly southward is fed from the
        # north; one entering eastward is fed from the west.
        channel = copy.net.outgoing_channels(port)[0]
        dx, dy = channel.ray_at(port)
        return "north" if abs(dy) >= abs(dx) and dy < 0 else "west"

    # -- assembly --------------------------------------------------------------

    def assemble(self, trees: list[_Copy]) -> ChannelNetwork:
        junctions: list[Junction] = []
        channels: list[Channel] = []
        input_ports: list[Port] = []
        output_ports: list[Port] = []
        bindings: dict[str, set[str]] = {}
        attractants: set[str] = set()
        stem_counter: dict[str, int] = {}

        def shift(copy: _Copy, point):
            return (point[0] + copy.offset[0], point[1] + copy.offset[1])

        for copy in self.copies:
            pref = copy.cid + "/"
            local_ports = {p.id: p for p in copy.net.input_ports + copy.net.output_ports}

            def element_id(eid: str) -> str:
                if eid in local_ports:
                    port = local_ports[eid]
                    if port.kind == "output":
                        exposed = copy.consumed.get(eid, "drain")
                        if exposed is None:
                            return pref + eid  # becomes a via junction
                        if exposed == "drain":
                            return pref + eid
                        return exposed
                return pref + eid

            for j in copy.net.junctions:
                junctions.append(Junction(pref + j.id, shift(copy, j.position)))
            for p in copy.net.input_ports:
                junctions.append(Junction(pref + p.id, shift(copy, p.position)))
            for p in copy.net.output_ports:
                exposed = copy.consumed.get(p.id, "drain")
                if exposed is None:
                    junctions.append(Junction(pref + p.id, shift(copy, p.position)))
                else:
                    name = pref + p.id if exposed == "drain" else exposed
                    output_ports.append(Port(name, "output", shift(copy, p.position)))
                    if self.regime == "attraction":
                        attractants.add(name)
            for c in copy.net.channels:
                channels.append(
                    Channel(
                        pref + c.id,
                        element_id(c.from_end),
                        element_id(c.to_end),
                        c.length,
                        tuple(shift(copy, pt) for pt in c.points),
                    )
                )

        wire_index = 0
        for copy in self.copies:
            for port in sorted(copy.feeders):
                feeder = copy.feeders[port]
                via_id = f"{copy.cid}/{port}"
                via_pos = next(
                    j.position for j in junctions if j.id == via_id
                )
                length = self._feeder_length(copy, port)
                ray = copy.net.outgoing_channels(port)[0].ray_at(port)
                if feeder[0] == "primary":
                    name = feeder[1]
                    n = stem_counter.get(name, 0)
                    stem_counter[name] = n + 1
                    pid = f"{name}#{n}"
                    sgn = lambda v: (v > 0) - (v < 0)
                    ppos = (via_pos[0] - _STEM_RISE * sgn(ray[0]),
                            via_pos[1] - _STEM_RISE * sgn(ray[1]))
                    input_ports.append(Port(pid, "input", ppos))
                    bindings.setdefault(name, set()).add(pid)
                    channels.append(
                        Channel(f"stem:{via_id}", pid, via_id, length,
                                (ppos, via_pos))
                    )
                else:
                    _, driver, drv_port = feeder
                    src_id = f"{driver.cid}/{drv_port}"
                    src_pos = next(j.position for j in junctions if j.id == src_id)
                    if (
                        self.regime == "attraction"
                        and self._attraction_side(copy, port) == "west"
                    ):
                        points = _corridor_polyline(src_pos, via_pos, wire_index)
                    else:
                        points = _wire_polyline(src_pos, via_pos, wire_index)
                    wire_index += 1
                    channels.append(
                        Channel(f"wire:{src_id}->{via_id}", src_id, via_id,
                                length, points)
                    )

        net = ChannelNetwork(
            junctions=tuple(junctions),
            channels=tuple(channels),
            input_ports=tuple(input_ports),
            output_ports=tuple(output_ports),
            input_bindings={k: frozenset(v) for k, v in bindings.items()},
            attractant_ports=frozenset(attractants),
        )
        net = self._apply_crossings(net)
        net = route_network(net)
        violations = validate_network(net)
        if violations:
            raise CompileError(
                "compiled network failed validation: " + "; ".join(violations)
            )
        return net

    def _apply_crossings(self, net: ChannelNetwork) -> ChannelNetwork:
        crossings = detect_channel_crossings(net)
        if not crossings:
            return net
        if self.regime == "attraction":
            listing = ", ".join(
                f"{a}×{b}" for a, b in sorted(tuple(sorted(p)) for p in crossings)
            )
            raise CompileError(
                "routing channels would cross, which has no defined meaning "
                f"under attraction: {listing}"
            )
        return replace(net, bridges=frozenset(frozenset(p) for p in crossings))


def _merge_box(a, b):
    return (min(a[0], b[0]), min(a[1], b[1]), max(a[2], b[2]), max(a[3], b[3]))


def _wire_polyline(src, dst, index: int):
    (x0, y0), (x1, y1) = src, dst
    if x0 == x1 or y0 == y1:
        return (src, dst)
    # Dogleg: leave the driver along its exit axis, jog, then approach the
    # consumer along its entry axis. Stagger jogs so parallel wires differ.
    ym = y1 + 2 + (index % 3)
    return (src, (x0, ym), (x1, ym), dst)


def _corridor_polyline(src, dst, index: int):
    """West-side wires step east into the gap column next to the consumer
    first, so they cannot run back through the driver subtree's rows."""
    (x0, y0), (x1, y1) = src, dst
    if y0 == y1:
        return (src, dst)
    cx = x1 - 2 - (index % 3)
    pts = [src]
    if cx != x0:
        pts.append((cx, y0))
    pts.append((cx, y1))
    pts.append(dst)
    return tuple(pts)


def _segments(channel: Channel):
    return list(zip(channel.points[:-1], channel.points[1:]))


def _orient(a, b, c) -> int:
    v = (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
    return (v > 0) - (v < 0)


def _on_segment(a, b, p) -> bool:
    return (
        min(a[0], b[0]) <= p[0] <= max(a[0], b[0])
        and min(a[1], b[1]) <= p[1] <= max(a[1], b[1])
    )


def _segments_intersect(p1, p2, p3, p4) -> bool:
    d1 = _orient(p3, p4, p1)
    d2 = _orient(p3, p4, p2)
    d3 = _orient(p1, p2, p3)
    d4 = _orient(p1, p2, p4)
    if d1 != d2 and d3 != d4:
        return True
    if d1 == 0 and _on_segment(p3, p4, p1):
        return True
    if d2 == 0 and _on_segment(p3, p4, p2):
        return True
    if d3 == 0 and _on_segment(p1, p2, p3):
        return True
    if d4 == 0 and _on_segment(p1, p2, p4):
        return True
    return False


def detect_channel_crossings(net: ChannelNetwork) -> set[tuple[str, str]]:
    """Pairs of non-incident channels whose drawn polylines intersect."""
    crossings: set[tuple[str, str]] = set()
    chans = sorted(net.channels, key=lambda c: c.id)
    for i in range(len(chans)):
        for k in range(i + 1, len(chans)):
            a, b = chans[i], chans[k]
            if {a.from_end, a.to_end} & {b.from_end, b.to_end}:
                continue
            if any(
                _segments_intersect(s1[0], s1[1], s2[0], s2[1])
                for s1 in _segments(a)
                for s2 in _segments(b)
            ):
                crossings.add((a.id, b.id))
    return crossings


def _shift_tree(copy: _Copy, dx: int, dy: int) -> None:
    copy.offset = (copy.offset[0] + dx, copy.offset[1] + dy)
    for feeder in copy.feeders.values():
        if feeder[0] == "wire":
            _shift_tree(feeder[1], dx, dy)


def compile_netlist(nl: Netlist, params: GateParams = GateParams()) -> ChannelNetwork:
    """Compile a netlist into one routed, validated channel network."""
    comp = _Compilation(nl, params)
    trees = comp.expand()
    comp.solve_padding()
    cursor_x = 0
    for tree in trees:
        box = comp.place_tree(tree, 0, 0)
        # Attraction subtrees can extend left of their root; normalize so
        # each tree occupies its own column range.
        _shift_tree(tree, cursor_x - box[0], 0)
        cursor_x += (box[2] - box[0]) + 8
    return comp.assemble(trees)
