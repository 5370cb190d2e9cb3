"""Builders for the five channel-network gates.

Every builder fixes geometry (for crossing detection and rendering), channel
lengths (which carry all the timing), logical input bindings and attractant
marks, then lets the tropism module generate the routing tables. Lengths are
``base * scale`` with ``margin`` units of slack wherever one root has to
clear a junction before a contender arrives.
"""

from __future__ import annotations

from dataclasses import dataclass

from .network import Channel, ChannelNetwork, Junction, Port, path_length, validate_network
from .tropism import attraction_routing, gravity_routing


@dataclass(frozen=True)
class GateParams:
    """Layout knobs: ``margin`` separates arrival orders, ``scale`` stretches
    every channel."""

    margin: int = 2
    scale: int = 1

    def __post_init__(self):
        if self.margin < 1:
            raise ValueError("margin must be >= 1")
        if self.scale < 1:
            raise ValueError("scale must be >= 1")


class _NetBuilder:
    def __init__(self):
        self.junctions: list[Junction] = []
        self.channels: list[Channel] = []
        self.inputs: list[Port] = []
        self.outputs: list[Port] = []

    def junction(self, jid: str, pos) -> str:
        self.junctions.append(Junction(jid, tuple(pos)))
        return jid

    def input_port(self, pid: str, pos) -> str:
        self.inputs.append(Port(pid, "input", tuple(pos)))
        return pid

    def output_port(self, pid: str, pos) -> str:
        self.outputs.append(Port(pid, "output", tuple(pos)))
        return pid

    def channel(self, cid: str, src: str, dst: str, length: int,
                via=()) -> str:
        pos = {p.id: p.position for p in self.inputs + self.outputs}
        pos.update({j.id: j.position for j in self.junctions})
        points = (pos[src], *[tuple(p) for p in via], pos[dst])
        self.channels.append(Channel(cid, src, dst, length, points))
        return cid

    def finish(self, bindings: dict[str, set[str]],
               attractants: set[str] | None = None) -> ChannelNetwork:
        net = ChannelNetwork(
            junctions=tuple(self.junctions),
            channels=tuple(self.channels),
            input_ports=tuple(self.inputs),
            output_ports=tuple(self.outputs),
            input_bindings={k: frozenset(v) for k, v in bindings.items()},
            attractant_ports=frozenset(attractants or ()),
        )
        net = attraction_routing(net) if attractants else gravity_routing(net)
        violations = validate_network(net)
        if violations:
            raise AssertionError(f"builder produced invalid network: {violations}")
        return net


def build_basic_gravity_gate(params: GateParams = GateParams()) -> ChannelNetwork:
    """Symmetric two-in three-out gravity gate.

    Both arms reach the junction in the same number of ticks, so a double
    input genuinely contends for the central channel and the tie policy
    decides the outcome. Not cascadable for that reason.
    """
    s = params.scale
    b = _NetBuilder()
    b.input_port("x", (0, 6))
    b.input_port("y", (12, 6))
    b.junction("j", (6, 4))
    b.output_port("p", (8, 1))
    b.output_port("q", (6, 0))
    b.output_port("r", (4, 1))
    b.channel("a", "x", "j", 2 * s)
    b.channel("b", "y", "j", 2 * s)
    b.channel("cq", "j", "q", 2 * s)
    b.channel("cp", "j", "p", 2 * s)
    b.channel("cr", "j", "r", 2 * s)
    return b.finish({"x": {"x"}, "y": {"y"}})


def build_gravity_gate_2x2(params: GateParams = GateParams()) -> ChannelNetwork:
    """Two-in two-out gravity gate computing p = x AND y, q = x OR y.

    Segment ``a`` is ``margin`` units longer than ``b``, so a y-root always
    owns the junction first and an x-root contending with it deflects into
    ``c``.
    """
    s, m = params.scale, params.margin
    b = _NetBuilder()
    b.input_port("x", (1, 6))
    b.input_port("y", (3, 6))
    b.junction("j", (2, 4))
    b.output_port("q", (2, 0))
    b.output_port("p", (6, 2))
    b.channel("a", "x", "j", (1 + m) * s)
    b.channel("b", "y", "j", 1 * s)
    b.channel("d", "j", "q", 2 * s)
    b.channel("c", "j", "p", 2 * s)
    net = b.finish({"x": {"x"}, "y": {"y"}})
    assert path_length(net, "x", "j") >= path_length(net, "y", "j") + m
    return net


def build_gravity_gate_3x3(params: GateParams = GateParams()) -> ChannelNetwork:
    """Three-in three-out gravity gate: p = x|y|z, q = x&y, r = z&(x|y).

    Arrival order at the junction is x, then y, then z. The first root takes
    the central drop to p; a later y bounces to its only admissible lateral
    q, a later z to r.
    """
    s, m = params.scale, params.margin
    b = _NetBuilder()
    b.input_port("x", (6, 8))
    b.input_port("y", (2, 10))
    b.input_port("z", (10, 10))
    b.junction("j", (6, 4))
    b.output_port("p", (6, 0))
    b.output_port("q", (12, 2))
    b.output_port("r", (0, 2))
    b.channel("ax", "x", "j", 1 * s)
    b.channel("ay", "y", "j", (1 + m) * s)
    b.channel("az", "z", "j", (1 + 2 * m) * s)
    b.channel("cp", "j", "p", 2 * s)
    b.channel("cq", "j", "q", 2 * s)
    b.channel("cr", "j", "r", 2 * s)
    net = b.finish({"x": {"x"}, "y": {"y"}, "z": {"z"}})
    assert path_length(net, "x", "j") + m <= path_length(net, "y", "j")
    assert path_length(net, "y", "j") + m <= path_length(net, "z", "j")
    return net


def build_attraction_gate(params: GateParams = GateParams()) -> ChannelNetwork:
    """Attraction gate computing p = (NOT x) AND y, q = x.

    The x and y through-lines cross at the junction. The x-root passes first
    and its body across the junction blocks a later y-root outright: no
    deflection, the y-root just stops.
    """
    s, m = params.scale, params.margin
    b = _NetBuilder()
    b.input_port("x", (4, 8))
    b.input_port("y", (0, 4))
    b.junction("j", (4, 4))
    b.output_port("q", (4, 0))
    b.output_port("p", (8, 4))
    b.channel("cx", "x", "j", 1 * s)
    b.channel("cy", "y", "j", (1 + m) * s)
    b.channel("cq", "j", "q", 2 * s)
    b.channel("cp", "j", "p", 2 * s)
    net = b.finish({"x": {"x"}, "y": {"y"}}, attractants={"p", "q"})
    assert path_length(net, "x", "j") + m <= path_length(net, "y", "j")
    return net


def build_half_adder(params: GateParams = GateParams()) -> ChannelNetwork:
    """Half-adder from two crossed attraction stages plus physical fan-out.

    Each logical input feeds two input channels. The northern stage (j1)
    crosses x against y; the southern stage (j4) crosses them the other way
    round and adds the carry exit r. Outputs merge at j2 (sum side) and j3
    (or side): p = x XOR y, q = x OR y, r = x AND y.

    Ordering, enforced by lengths: the northern x-root clears j1 before the
    northern y-root arrives and clears j3 before the southern y-root
    arrives; the southern y-root clears j4 before the southern x-root
    arrives, so a double input diverts the southern x-root into r.
    """
    s, m = params.scale, params.margin
    b = _NetBuilder()
    b.input_port("x_n", (3, 10))
    b.input_port("y_n", (0, 7))
    b.input_port("x_s", (7, 0))
    b.input_port("y_s", (10, 3))
    b.junction("j1", (3, 7))
    b.junction("j2", (7, 7))
    b.junction("j3", (3, 3))
    b.junction("j4", (7, 3))
    b.output_port("q", (3, -1))
    b.output_port("p", (10, 7))
    b.output_port("r", (9, 1))
    b.channel("xn_in", "x_n", "j1", 1 * s)
    b.channel("yn_in", "y_n", "j1", (1 + m) * s)
    b.channel("ys_in", "y_s", "j4", 1 * s)
    b.channel("xs_in", "x_s", "j4", (1 + m) * s)
    b.channel("w_xq", "j1", "j3", 1 * s)
    b.channel("w_yp", "j1", "j2", 1 * s)
    b.channel("w_yq", "j4", "j3", (1 + m) * s)
    b.channel("w_xp", "j4", "j2", 1 * s)
    b.channel("o_q", "j3", "q", 1 * s)
    b.channel("o_p", "j2", "p", 1 * s)
    b.channel("c_r", "j4", "r", 1 * s)
    net = b.finish(
        {"x": {"x_n", "x_s"}, "y": {"y_n", "y_s"}},
        attractants={"p", "q", "r"},
    )
    # Northern x clears j1 before northern y arrives.
    assert path_length(net, "x_n", "j1") + m <= path_length(net, "y_n", "j1")
    # Southern y clears j4 before southern x arrives (divert-to-r ordering).
    assert path_length(net, "y_s", "j4") + m <= path_length(net, "x_s", "j4")
    # Northern x clears the q-merge before the southern y reaches it.
    assert path_length(net, "x_n", "j3") + m <= path_length(net, "y_s", "j3")
    return net


GATE_BUILDERS = {
    "basic": build_basic_gravity_gate,
    "grav2": build_gravity_gate_2x2,
    "grav3": build_gravity_gate_3x3,
    "attr": build_attraction_gate,
    "halfadd": build_half_adder,
}

# Reference truth functions per gate, with the tie policy each table is
# defined under. The basic gate is only deterministic once a policy is
# chosen; under simultaneous deflection both laterals carry the AND.
GATE_EXPECTATIONS: dict[str, tuple[dict[str, str], str]] = {
    "basic": ({"p": "x&y", "q": "x^y", "r": "x&y"}, "both"),
    "grav2": ({"p": "x&y", "q": "x|y"}, "error"),
    "grav3": ({"q": "x&y", "p": "x|y|z", "r": "z&(x|y)"}, "error"),
    "attr": ({"p": "!x&y", "q": "x"}, "error"),
    "halfadd": ({"p": "x^y", "q": "x|y", "r": "x&y"}, "error"),
}
