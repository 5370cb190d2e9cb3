"""Channel-network data model: channels, junctions, ports, routing and occupancy.

A network is a planar directed graph. Roots enter at input ports, grow through
channels at unit speed, make decisions at junctions according to per-junction
routing tables, and leave at output ports. Channels hold at most one root,
ever: a root's body permanently fills everything it has traversed.
"""

from __future__ import annotations

import functools
import json
from dataclasses import dataclass, field, replace

Vec = tuple[int, int]
Point = tuple[int, int]

GRAVITY_DOWN: Vec = (0, -1)


@dataclass(frozen=True)
class Port:
    """Entry or exit point of the network. ``kind`` is "input" or "output"."""

    id: str
    kind: str
    position: Point


@dataclass(frozen=True)
class Channel:
    """Directed channel segment of unit capacity.

    ``points`` is the rendered polyline from the ``from_end`` element to the
    ``to_end`` element; only the end segments matter for routing decisions,
    the rest is drawing geometry. ``length`` is the abstract growth length in
    integer units and is independent of the drawn polyline.
    """

    id: str
    from_end: str
    to_end: str
    length: int
    points: tuple[Point, ...]

    def ray_at(self, element_id: str) -> Vec:
        """Direction of this channel at one of its endpoint elements.

        The ray points from the element into the channel body: for the
        ``from_end`` it is the first segment, for the ``to_end`` it is the
        last segment reversed.
        """
        if element_id == self.from_end:
            (x0, y0), (x1, y1) = self.points[0], self.points[1]
            return (x1 - x0, y1 - y0)
        if element_id == self.to_end:
            (x0, y0), (x1, y1) = self.points[-1], self.points[-2]
            return (x1 - x0, y1 - y0)
        raise KeyError(f"channel {self.id} does not touch {element_id}")

    def heading_at_end(self) -> Vec:
        """Growth direction of a root arriving at ``to_end``."""
        (x0, y0), (x1, y1) = self.points[-2], self.points[-1]
        return (x1 - x0, y1 - y0)


@dataclass(frozen=True)
class RouteEntry:
    """One preference: take ``out_channel`` unless anything in ``blocked_by``
    is already occupied by another root."""

    out_channel: str
    blocked_by: frozenset[str]


# Routing table of one junction: incoming channel id -> ordered preferences.
RoutingTable = dict[str, tuple[RouteEntry, ...]]


@dataclass(frozen=True)
class Junction:
    id: str
    position: Point
    routing: RoutingTable = field(default_factory=dict)


@dataclass(frozen=True)
class ChannelNetwork:
    """Immutable gate or circuit layout.

    ``input_bindings`` maps each logical input name to the set of input ports
    a root is initiated at when that input is true. ``attractant_ports``
    marks output ports that carry an attractant source; non-empty means the
    network was routed under the attraction regime, empty means gravity.
    """

    junctions: tuple[Junction, ...]
    channels: tuple[Channel, ...]
    input_ports: tuple[Port, ...]
    output_ports: tuple[Port, ...]
    input_bindings: dict[str, frozenset[str]]
    gravity: Vec = GRAVITY_DOWN
    attractant_ports: frozenset[str] = frozenset()
    bridges: frozenset[frozenset[str]] = frozenset()

    def junction(self, jid: str) -> Junction:
        return self._junctions_by_id[jid]

    def channel(self, cid: str) -> Channel:
        return self._channels_by_id[cid]

    def port(self, pid: str) -> Port:
        return self._ports_by_id[pid]

    @property
    def _junctions_by_id(self) -> dict[str, Junction]:
        cache = self.__dict__.get("_jcache")
        if cache is None:
            cache = {j.id: j for j in self.junctions}
            object.__setattr__(self, "_jcache", cache)
        return cache

    @property
    def _channels_by_id(self) -> dict[str, Channel]:
        cache = self.__dict__.get("_ccache")
        if cache is None:
            cache = {c.id: c for c in self.channels}
            object.__setattr__(self, "_ccache", cache)
        return cache

    @property
    def _ports_by_id(self) -> dict[str, Port]:
        cache = self.__dict__.get("_pcache")
        if cache is None:
            cache = {p.id: p for p in self.input_ports + self.output_ports}
            object.__setattr__(self, "_pcache", cache)
        return cache

    def element_position(self, element_id: str) -> Point:
        if element_id in self._junctions_by_id:
            return self._junctions_by_id[element_id].position
        return self._ports_by_id[element_id].position

    def incoming_channels(self, element_id: str) -> tuple[Channel, ...]:
        return tuple(c for c in self.channels if c.to_end == element_id)

    def outgoing_channels(self, element_id: str) -> tuple[Channel, ...]:
        return tuple(c for c in self.channels if c.from_end == element_id)

    @property
    def logical_inputs(self) -> tuple[str, ...]:
        return tuple(sorted(self.input_bindings))

    @property
    def regime(self) -> str:
        return "attraction" if self.attractant_ports else "gravity"

    def with_routing(self, tables: dict[str, RoutingTable]) -> ChannelNetwork:
        new_junctions = tuple(
            replace(j, routing=tables.get(j.id, j.routing)) for j in self.junctions
        )
        return replace(self, junctions=new_junctions)

    def total_length(self) -> int:
        return sum(c.length for c in self.channels)


@dataclass
class OccupancyState:
    """Mutable per-simulation occupancy. Grows monotonically, never vacates.

    ``owner`` records the first root to claim an element. Channels are
    exclusive; a junction may be traversed by several roots (a deflecting
    root slides past the first body) but keeps its first owner.
    """

    occupied_channels: set[str] = field(default_factory=set)
    occupied_junctions: set[str] = field(default_factory=set)
    owner: dict[str, str] = field(default_factory=dict)

    def claim_channel(self, channel_id: str, root_id: str) -> None:
        if channel_id in self.occupied_channels:
            raise ValueError(f"channel {channel_id} already occupied")
        self.occupied_channels.add(channel_id)
        self.owner[channel_id] = root_id

    def pass_junction(self, junction_id: str, root_id: str) -> None:
        if junction_id not in self.occupied_junctions:
            self.occupied_junctions.add(junction_id)
            self.owner[junction_id] = root_id

    def is_blocking(self, element_id: str, root_id: str) -> bool:
        """True if ``element_id`` is occupied by a root other than ``root_id``."""
        holder = self.owner.get(element_id)
        return holder is not None and holder != root_id

    def snapshot(self) -> dict:
        return {
            "channels": sorted(self.occupied_channels),
            "junctions": sorted(self.occupied_junctions),
            "owner": dict(sorted(self.owner.items())),
        }

    @classmethod
    def from_snapshot(cls, data: dict) -> OccupancyState:
        return cls(
            occupied_channels=set(data["channels"]),
            occupied_junctions=set(data["junctions"]),
            owner=dict(data["owner"]),
        )


# ---------------------------------------------------------------------------
# Exact integer-vector angular predicates
# ---------------------------------------------------------------------------

def dot(a: Vec, b: Vec) -> int:
    return a[0] * b[0] + a[1] * b[1]


def cross(a: Vec, b: Vec) -> int:
    return a[0] * b[1] - a[1] * b[0]


def same_ray(a: Vec, b: Vec) -> bool:
    return cross(a, b) == 0 and dot(a, b) > 0


def circular_sort(vectors: list[tuple[Vec, object]]) -> list[object]:
    """Sort tagged direction vectors counterclockwise, exactly."""

    def compare(pa: tuple[Vec, object], pb: tuple[Vec, object]) -> int:
        a, b = pa[0], pb[0]
        ha = 0 if (a[1] > 0 or (a[1] == 0 and a[0] > 0)) else 1
        hb = 0 if (b[1] > 0 or (b[1] == 0 and b[0] > 0)) else 1
        if ha != hb:
            return -1 if ha < hb else 1
        c = cross(a, b)
        if c > 0:
            return -1
        if c < 0:
            return 1
        return 0

    return [tag for _, tag in sorted(vectors, key=functools.cmp_to_key(compare))]


def chords_interleave(a: tuple[Vec, Vec], b: tuple[Vec, Vec]) -> bool:
    """Do two chords on a small circle around a junction cross each other?

    Each chord is a pair of rays (direction vectors out of the junction).
    The chords cross iff their endpoints alternate around the circle. Chords
    sharing a ray never cross.
    """
    for u in a:
        for w in b:
            if same_ray(u, w):
                return False
    order = circular_sort(
        [(a[0], "a"), (a[1], "a"), (b[0], "b"), (b[1], "b")]
    )
    return order[0] != order[1] and order[1] != order[2] and order[2] != order[3]


def compare_cosine(h: Vec, v1: Vec, v2: Vec) -> int:
    """Exact comparison of cos(angle(h, v1)) vs cos(angle(h, v2)).

    Returns negative if v1's angle to h is smaller (cosine larger),
    positive if larger, 0 if equal.
    """
    c1, c2 = dot(h, v1), dot(h, v2)
    l1, l2 = dot(v1, v1), dot(v2, v2)
    s1 = (c1 > 0) - (c1 < 0)
    s2 = (c2 > 0) - (c2 < 0)
    if s1 != s2:
        return -1 if s1 > s2 else 1
    lhs = c1 * c1 * l2
    rhs = c2 * c2 * l1
    if s1 >= 0:
        if lhs > rhs:
            return -1
        if lhs < rhs:
            return 1
        return 0
    if lhs < rhs:
        return -1
    if lhs > rhs:
        return 1
    return 0


def compare_alignment(g: Vec, v1: Vec, v2: Vec) -> int:
    """Exact comparison of gravity alignment of two out-directions.

    Alignment is cos(angle(v, g)); returns negative if v1 is more aligned.
    """
    return compare_cosine(g, v1, v2)


# ---------------------------------------------------------------------------
# Structural operations
# ---------------------------------------------------------------------------

def validate_network(net: ChannelNetwork) -> list[str]:
    """Check every structural invariant; returns human-readable violations.

    An empty list means the network is valid. Violations name the offending
    element.
    """
    violations: list[str] = []
    junction_ids = {j.id for j in net.junctions}
    port_ids = {p.id for p in net.input_ports + net.output_ports}
    element_ids = junction_ids | port_ids
    seen: set[str] = set()
    for c in net.channels:
        if c.id in seen:
            violations.append(f"duplicate channel id {c.id}")
        seen.add(c.id)
        if not isinstance(c.length, int) or c.length <= 0:
            violations.append(f"channel {c.id} has non-positive length {c.length}")
        for end in (c.from_end, c.to_end):
            if end not in element_ids:
                violations.append(f"channel {c.id} endpoint {end} does not exist")
        if len(c.points) < 2:
            violations.append(f"channel {c.id} polyline needs at least two points")

    input_ids = {p.id for p in net.input_ports}
    bound: set[str] = set()
    for name, ports in sorted(net.input_bindings.items()):
        if not ports:
            violations.append(f"logical input {name} binds no ports")
        for pid in sorted(ports):
            if pid not in input_ids:
                violations.append(f"logical input {name} binds unknown port {pid}")
            elif pid in bound:
                violations.append(f"input port {pid} bound to more than one logical input")
            bound.add(pid)

    for pid in sorted(net.attractant_ports):
        if pid not in {p.id for p in net.output_ports}:
            violations.append(f"attractant on unknown output port {pid}")

    for j in net.junctions:
        incoming = {c.id for c in net.incoming_channels(j.id)}
        outgoing = {c.id for c in net.outgoing_channels(j.id)}
        for cid in sorted(incoming):
            if cid not in j.routing:
                violations.append(f"junction {j.id} routing omits incoming channel {cid}")
        for cid, entries in sorted(j.routing.items()):
            if cid not in incoming:
                violations.append(f"junction {j.id} routes unknown incoming channel {cid}")
            for entry in entries:
                if entry.out_channel not in outgoing:
                    violations.append(
                        f"junction {j.id} routes {cid} into non-incident channel "
                        f"{entry.out_channel}"
                    )
                for blocker in sorted(entry.blocked_by):
                    if blocker not in incoming | outgoing and blocker != j.id:
                        violations.append(
                            f"junction {j.id} entry {cid}->{entry.out_channel} "
                            f"blocked by non-local element {blocker}"
                        )

    # Connectivity: every input port must reach some output port forward,
    # every output port must be fed by some input port.
    fwd: dict[str, list[str]] = {}
    for c in net.channels:
        fwd.setdefault(c.from_end, []).append(c.to_end)
    out_port_ids = {p.id for p in net.output_ports}

    def reaches_output(start: str) -> bool:
        stack, visited = [start], set()
        while stack:
            e = stack.pop()
            if e in out_port_ids:
                return True
            if e in visited:
                continue
            visited.add(e)
            stack.extend(fwd.get(e, ()))
        return False

    for p in net.input_ports:
        if not reaches_output(p.id):
            violations.append(f"input port {p.id} reaches no output port")
    back: dict[str, list[str]] = {}
    for c in net.channels:
        back.setdefault(c.to_end, []).append(c.from_end)

    def fed_by_input(start: str) -> bool:
        stack, visited = [start], set()
        while stack:
            e = stack.pop()
            if e in input_ids:
                return True
            if e in visited:
                continue
            visited.add(e)
            stack.extend(back.get(e, ()))
        return False

    for p in net.output_ports:
        if not fed_by_input(p.id):
            violations.append(f"output port {p.id} is fed by no input port")

    return violations


def path_length(net: ChannelNetwork, src: str, dst: str) -> int | None:
    """Total length of the forward path from element ``src`` to ``dst``.

    Returns None when no forward path exists. Networks built here have a
    unique forward path between any connected pair; if several exist the
    shortest is returned.
    """
    if src == dst:
        return 0
    best: dict[str, int] = {src: 0}
    frontier = [src]
    while frontier:
        nxt: list[str] = []
        for e in frontier:
            for c in net.channels:
                if c.from_end != e:
                    continue
                d = best[e] + c.length
                if c.to_end not in best or d < best[c.to_end]:
                    best[c.to_end] = d
                    nxt.append(c.to_end)
        frontier = nxt
    return best.get(dst)


def straight_through(net: ChannelNetwork, junction: Junction) -> dict[str, str]:
    """Map each incoming channel to its geometrically straightest outgoing one.

    The straight continuation minimises the turning angle at the junction;
    exact-angle ties fall back to channel id order.
    """
    incoming = net.incoming_channels(junction.id)
    outgoing = sorted(net.outgoing_channels(junction.id), key=lambda c: c.id)
    result: dict[str, str] = {}
    for cin in incoming:
        if not outgoing:
            continue
        heading = cin.heading_at_end()
        best = outgoing[0]
        for cand in outgoing[1:]:
            if compare_cosine(
                heading, cand.ray_at(junction.id), best.ray_at(junction.id)
            ) < 0:
                best = cand
        result[cin.id] = best.id
    return result


def channels_crossing_at(
    net: ChannelNetwork, junction: Junction
) -> set[frozenset[tuple[str, str]]]:
    """Pairs of straight-through paths whose continuations cross at a junction.

    Each element is a frozenset of two (in_channel, out_channel) paths. Paths
    that merge into or split from a shared channel do not cross.
    """
    st = straight_through(net, junction)
    paths = sorted(st.items())
    crossings: set[frozenset[tuple[str, str]]] = set()
    for i in range(len(paths)):
        for k in range(i + 1, len(paths)):
            (in_a, out_a), (in_b, out_b) = paths[i], paths[k]
            if len({in_a, out_a, in_b, out_b}) < 4:
                continue
            chord_a = (
                net.channel(in_a).ray_at(junction.id),
                net.channel(out_a).ray_at(junction.id),
            )
            chord_b = (
                net.channel(in_b).ray_at(junction.id),
                net.channel(out_b).ray_at(junction.id),
            )
            if chords_interleave(chord_a, chord_b):
                crossings.add(frozenset(((in_a, out_a), (in_b, out_b))))
    return crossings


# ---------------------------------------------------------------------------
# JSON serialization
# ---------------------------------------------------------------------------

def network_to_dict(net: ChannelNetwork) -> dict:
    return {
        "junctions": [
            {
                "id": j.id,
                "position": list(j.position),
                "routing": {
                    cin: [
                        {"out": e.out_channel, "blocked_by": sorted(e.blocked_by)}
                        for e in entries
                    ]
                    for cin, entries in sorted(j.routing.items())
                },
            }
            for j in net.junctions
        ],
        "channels": [
            {
                "id": c.id,
                "from": c.from_end,
                "to": c.to_end,
                "length": c.length,
                "points": [list(p) for p in c.points],
            }
            for c in net.channels
        ],
        "ports": [
            {"id": p.id, "kind": p.kind, "position": list(p.position)}
            for p in net.input_ports + net.output_ports
        ],
        "bindings": {name: sorted(ports) for name, ports in sorted(net.input_bindings.items())},
        "gravity": list(net.gravity),
        "attractants": sorted(net.attractant_ports),
        "bridges": sorted(sorted(pair) for pair in net.bridges),
    }


def network_from_dict(data: dict) -> ChannelNetwork:
    junctions = tuple(
        Junction(
            id=j["id"],
            position=tuple(j["position"]),
            routing={
                cin: tuple(
                    RouteEntry(e["out"], frozenset(e["blocked_by"])) for e in entries
                )
                for cin, entries in j.get("routing", {}).items()
            },
        )
        for j in data["junctions"]
    )
    channels = tuple(
        Channel(
            id=c["id"],
            from_end=c["from"],
            to_end=c["to"],
            length=c["length"],
            points=tuple(tuple(p) for p in c["points"]),
        )
        for c in data["channels"]
    )
    inputs = tuple(
        Port(p["id"], p["kind"], tuple(p["position"]))
        for p in data["ports"]
        if p["kind"] == "input"
    )
    outputs = tuple(
        Port(p["id"], p["kind"], tuple(p["position"]))
        for p in data["ports"]
        if p["kind"] == "output"
    )
    return ChannelNetwork(
        junctions=junctions,
        channels=channels,
        input_ports=inputs,
        output_ports=outputs,
        input_bindings={
            name: frozenset(ports) for name, ports in data["bindings"].items()
        },
        gravity=tuple(data["gravity"]),
        attractant_ports=frozenset(data.get("attractants", [])),
        bridges=frozenset(
            frozenset(pair) for pair in data.get("bridges", [])
        ),
    )


def save_network(net: ChannelNetwork, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(network_to_json(net))


def network_to_json(net: ChannelNetwork) -> str:
    return json.dumps(network_to_dict(net), sort_keys=True, indent=2) + "\n"


def load_network(path: str) -> ChannelNetwork:
    with open(path, "r", encoding="utf-8") as fh:
        return network_from_dict(json.load(fh))
