"""Deterministic discrete-event engine advancing root apexes through a network.

Time is an integer tick count; a root traverses a length-L channel in exactly
L ticks. All same-tick processing happens in a fixed order (junction
decisions before new initiations, each sub-ordered by root id), so identical
inputs always produce bit-identical traces.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .network import ChannelNetwork, OccupancyState, RouteEntry, validate_network

GROWING = "growing"
BLOCKED = "blocked"
EXITED = "exited"

INITIATED = "Initiated"
ARRIVED = "ArrivedAtJunction"
ENTERED = "EnteredChannel"
DEFLECTED = "Deflected"
BLOCKED_EVENT = "Blocked"
EXITED_EVENT = "Exited"


class SimulationError(RuntimeError):
    pass


class TieContentionError(SimulationError):
    """Raised under the Error tie policy when roots genuinely contend."""

    def __init__(self, junction_id: str, time: int, root_ids: list[str]):
        super().__init__(
            f"tie at junction {junction_id} at t={time} between roots "
            f"{', '.join(root_ids)}"
        )
        self.junction_id = junction_id
        self.time = time
        self.root_ids = list(root_ids)


@dataclass(frozen=True)
class TiePolicy:
    """What happens when two apexes contend for the same channel at one tick.

    ``error`` refuses to guess, ``both_deflect`` sends every contender to its
    next preference (the ideal simultaneous collision), ``priority`` lets the
    root of the highest-ranked logical input push through.
    """

    kind: str
    priority: tuple[str, ...] = ()

    @classmethod
    def error(cls) -> TiePolicy:
        return cls("error")

    @classmethod
    def both_deflect(cls) -> TiePolicy:
        return cls("both_deflect")

    @classmethod
    def priority_by_input(cls, names) -> TiePolicy:
        return cls("priority", tuple(names))


@dataclass(frozen=True)
class TraceEvent:
    time: int
    kind: str
    root: str
    element: str

    def as_dict(self) -> dict:
        return {"time": self.time, "kind": self.kind, "root": self.root,
                "element": self.element}


@dataclass
class RootApex:
    """A growing root: where it came from, what it has filled, where it is."""

    id: str
    source_port: str
    input_name: str
    trajectory: list[str]
    current_channel: str | None = None
    entered_time: int = 0
    arrival_time: int = 0
    status: str = GROWING
    exit_port: str | None = None

    @property
    def position(self) -> tuple[str | None, int]:
        if self.current_channel is None:
            return (None, 0)
        return (self.current_channel, self.arrival_time - self.entered_time)


@dataclass(frozen=True)
class SimOutcome:
    outputs: dict[str, bool]
    roots: tuple[RootApex, ...]
    trace: tuple[TraceEvent, ...]

    def output_values(self) -> dict[str, bool]:
        return dict(self.outputs)

    def trace_jsonl(self) -> str:
        import json

        return "\n".join(json.dumps(e.as_dict()) for e in self.trace) + "\n"


class Engine:
    """One simulation run over an immutable network."""

    def __init__(
        self,
        net: ChannelNetwork,
        inputs: dict[str, bool],
        tie: TiePolicy,
        delays: dict[str, int] | None = None,
        validate: bool = True,
    ):
        if validate:
            violations = validate_network(net)
            if violations:
                raise SimulationError(
                    "network is not valid: " + "; ".join(violations)
                )
        expected = set(net.input_bindings)
        if set(inputs) != expected:
            raise SimulationError(
                f"input assignment domain {sorted(inputs)} does not match "
                f"logical inputs {sorted(expected)}"
            )
        if tie.kind == "priority" and sorted(tie.priority) != sorted(expected):
            raise SimulationError(
                "priority tie policy must list every logical input exactly once"
            )
        delays = delays or {}
        for name, d in delays.items():
            if name not in expected or d < 0:
                raise SimulationError(f"bad delay for input {name!r}: {d}")

        self.net = net
        self.tie = tie
        self.time = 0
        self.occupancy = OccupancyState()
        self.roots: dict[str, RootApex] = {}
        self.trace: list[TraceEvent] = []
        self._pending: list[tuple[int, str, str]] = []  # (tick, name, port)
        for name in sorted(net.input_bindings):
            if inputs[name]:
                for port in sorted(net.input_bindings[name]):
                    self._pending.append((delays.get(name, 0), name, port))
        self._pending.sort()
        self._max_ticks = net.total_length() + max(
            [d for d in delays.values()] + [0]
        ) + 1

    # -- state inspection ---------------------------------------------------

    @property
    def growing(self) -> list[RootApex]:
        return [r for r in self.roots.values() if r.status == GROWING]

    def done(self) -> bool:
        return not self.growing and not self._pending

    # -- serializable state for replay ---------------------------------------

    def snapshot(self) -> dict:
        return {
            "time": self.time,
            "pending": [list(p) for p in self._pending],
            "occupancy": self.occupancy.snapshot(),
            "roots": [
                {
                    "id": r.id,
                    "source_port": r.source_port,
                    "input_name": r.input_name,
                    "trajectory": list(r.trajectory),
                    "current_channel": r.current_channel,
                    "entered_time": r.entered_time,
                    "arrival_time": r.arrival_time,
                    "status": r.status,
                    "exit_port": r.exit_port,
                }
                for r in sorted(self.roots.values(), key=lambda r: r.id)
            ],
        }

    @classmethod
    def resume(cls, net: ChannelNetwork, tie: TiePolicy, state: dict) -> Engine:
        eng = cls.__new__(cls)
        eng.net = net
        eng.tie = tie
        eng.time = state["time"]
        eng.occupancy = OccupancyState.from_snapshot(state["occupancy"])
        eng.trace = []
        eng._pending = [tuple(p) for p in state["pending"]]
        eng.roots = {
            r["id"]: RootApex(
                id=r["id"],
                source_port=r["source_port"],
                input_name=r["input_name"],
                trajectory=list(r["trajectory"]),
                current_channel=r["current_channel"],
                entered_time=r["entered_time"],
                arrival_time=r["arrival_time"],
                status=r["status"],
                exit_port=r["exit_port"],
            )
            for r in state["roots"]
        }
        eng._max_ticks = net.total_length() + state["time"] + 1
        return eng

    # -- core stepping --------------------------------------------------------

    def step(self) -> list[TraceEvent]:
        """Advance to the next event tick and process everything due then."""
        if self.done():
            return []
        times = [r.arrival_time for r in self.growing]
        times.extend(t for t, _, _ in self._pending)
        t = min(times)
        if t > self._max_ticks:
            raise SimulationError("termination bound exceeded; network is cyclic?")
        self.time = t
        emitted_start = len(self.trace)

        due = sorted(
            (r for r in self.growing if r.arrival_time == t),
            key=lambda r: r.id,
        )
        settled: set[str] = set()
        for root in due:
            if root.id in settled:
                continue
            channel = self.net.channel(root.current_channel)
            target = channel.to_end
            if target in self.net._ports_by_id:
                self._emit(EXITED_EVENT, root.id, target)
                root.status = EXITED
                root.exit_port = target
                root.trajectory.append(target)
                settled.add(root.id)
                continue
            group = [
                r
                for r in due
                if r.id not in settled
                and self.net.channel(r.current_channel).to_end == target
            ]
            self._resolve_junction(target, group)
            settled.update(r.id for r in group)

        still_pending: list[tuple[int, str, str]] = []
        for tick, name, port in self._pending:
            if tick != t:
                still_pending.append((tick, name, port))
                continue
            self._initiate(name, port)
        self._pending = still_pending
        return self.trace[emitted_start:]

    def run(self) -> SimOutcome:
        while not self.done():
            self.step()
        outputs = {p.id: False for p in self.net.output_ports}
        for r in self.roots.values():
            if r.status == EXITED:
                outputs[r.exit_port] = True
        return SimOutcome(
            outputs=outputs,
            roots=tuple(sorted(self.roots.values(), key=lambda r: r.id)),
            trace=tuple(self.trace),
        )

    # -- internals -------------------------------------------------------------

    def _emit(self, kind: str, root: str, element: str) -> None:
        self.trace.append(TraceEvent(self.time, kind, root, element))

    def _initiate(self, name: str, port: str) -> None:
        outs = self.net.outgoing_channels(port)
        if len(outs) != 1:
            raise SimulationError(f"input port {port} must feed exactly one channel")
        channel = outs[0]
        if channel.id in self.occupancy.occupied_channels:
            raise SimulationError(
                f"root initiated into occupied input channel {channel.id}"
            )
        root = RootApex(
            id=port,
            source_port=port,
            input_name=name,
            trajectory=[port, channel.id],
            current_channel=channel.id,
            entered_time=self.time,
            arrival_time=self.time + channel.length,
        )
        self.roots[root.id] = root
        self.occupancy.claim_channel(channel.id, root.id)
        self._emit(INITIATED, root.id, port)
        self._emit(ENTERED, root.id, channel.id)

    def _first_open_entry(
        self, root: RootApex, junction_id: str, banned: set[str]
    ) -> tuple[int, RouteEntry] | None:
        routing = self.net.junction(junction_id).routing
        prefs = routing.get(root.current_channel, ())
        for index, entry in enumerate(prefs):
            if entry.out_channel in banned:
                continue
            if any(
                self.occupancy.is_blocking(el, root.id) for el in entry.blocked_by
            ):
                continue
            return index, entry
        return None

    def _take(self, root: RootApex, junction_id: str, index: int,
              entry: RouteEntry) -> None:
        if index > 0:
            self._emit(DEFLECTED, root.id, junction_id)
        self.occupancy.pass_junction(junction_id, root.id)
        self.occupancy.claim_channel(entry.out_channel, root.id)
        channel = self.net.channel(entry.out_channel)
        root.trajectory.extend([junction_id, entry.out_channel])
        root.current_channel = entry.out_channel
        root.entered_time = self.time
        root.arrival_time = self.time + channel.length
        self._emit(ENTERED, root.id, entry.out_channel)

    def _block(self, root: RootApex, junction_id: str) -> None:
        root.status = BLOCKED
        self._emit(BLOCKED_EVENT, root.id, junction_id)

    def _resolve_junction(self, junction_id: str, group: list[RootApex]) -> None:
        group = sorted(group, key=lambda r: r.id)
        for root in group:
            self._emit(ARRIVED, root.id, junction_id)
        banned: dict[str, set[str]] = {r.id: set() for r in group}
        unsettled = list(group)
        while unsettled:
            wants: dict[str, tuple[int, RouteEntry] | None] = {}
            for root in unsettled:
                wants[root.id] = self._first_open_entry(
                    root, junction_id, banned[root.id]
                )
            by_target: dict[str, list[RootApex]] = {}
            for root in unsettled:
                w = wants[root.id]
                if w is not None:
                    by_target.setdefault(w[1].out_channel, []).append(root)
            contended = {c: rs for c, rs in by_target.items() if len(rs) > 1}
            if not contended:
                for root in unsettled:
                    w = wants[root.id]
                    if w is None:
                        self._block(root, junction_id)
                    else:
                        self._take(root, junction_id, *w)
                unsettled = []
                continue
            target = min(contended)
            contenders = contended[target]
            if self.tie.kind == "error":
                raise TieContentionError(
                    junction_id, self.time, [r.id for r in contenders]
                )
            if self.tie.kind == "both_deflect":
                for root in contenders:
                    banned[root.id].add(target)
                continue
            rank = {name: i for i, name in enumerate(self.tie.priority)}
            winner = min(contenders, key=lambda r: (rank[r.input_name], r.id))
            w = wants[winner.id]
            self._take(winner, junction_id, *w)
            unsettled.remove(winner)


def simulate(
    net: ChannelNetwork,
    inputs: dict[str, bool],
    tie: TiePolicy,
    delays: dict[str, int] | None = None,
) -> SimOutcome:
    """Run one simulation to completion."""
    return Engine(net, inputs, tie, delays).run()


def apply_delay_insensitivity_probe(
    net: ChannelNetwork,
    inputs: dict[str, bool],
    tie: TiePolicy,
    input_name: str,
    delay_grid: list[int],
) -> list[dict[str, bool]]:
    """Outputs of one simulation per delay value applied to ``input_name``."""
    results = []
    for d in delay_grid:
        outcome = simulate(net, inputs, tie, delays={input_name: d})
        results.append(outcome.outputs)
    return results
