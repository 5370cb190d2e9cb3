"""Routing-table generation from geometry under the two tropism regimes.

Gravity: at every junction a root prefers the outgoing channel best aligned
with the gravity vector, never grows against gravity, and never reverses
(an out-channel at or beyond a right angle from the approach direction is
inadmissible). A blocked preference falls through to the next one.

Attraction: a root heads for whichever outgoing channel continues its own
direction most closely among those from which an attractant port is
reachable. Crossing another root's body at the junction is impossible; the
block is carried by the crossing path's outgoing channel, which is occupied
exactly when a body lies across the junction. With every admissible entry
blocked the root stops for good.
"""

from __future__ import annotations

import enum

from .network import (
    Channel,
    ChannelNetwork,
    Junction,
    RouteEntry,
    RoutingTable,
    chords_interleave,
    compare_alignment,
    compare_cosine,
    dot,
    straight_through,
)


class TropismRegime(enum.Enum):
    GRAVITY = "gravity"
    ATTRACTION = "attraction"


class RoutingError(ValueError):
    """Geometry admits no usable routing (dead end or missing gradient)."""


def gravity_routing(net: ChannelNetwork) -> ChannelNetwork:
    """Fill every junction's routing table from gravity alignment.

    Preferences are ordered by descending alignment of the out-direction
    with the gravity vector; exact ties fall back to channel id. Each entry
    is blocked only by its own target channel being occupied.
    """
    tables: dict[str, RoutingTable] = {}
    for junction in net.junctions:
        table: dict[str, tuple[RouteEntry, ...]] = {}
        outgoing = sorted(net.outgoing_channels(junction.id), key=lambda c: c.id)
        for cin in sorted(net.incoming_channels(junction.id), key=lambda c: c.id):
            heading = cin.heading_at_end()
            admissible = [
                c
                for c in outgoing
                if dot(c.ray_at(junction.id), net.gravity) >= 0
                and dot(heading, c.ray_at(junction.id)) > 0
            ]
            if not admissible:
                raise RoutingError(
                    f"dead-end under gravity at junction {junction.id} "
                    f"for incoming channel {cin.id}"
                )
            ordered = _sort_by_alignment(net, junction, admissible)
            table[cin.id] = tuple(
                RouteEntry(c.id, frozenset({c.id})) for c in ordered
            )
        tables[junction.id] = table
    return net.with_routing(tables)


def attraction_routing(net: ChannelNetwork) -> ChannelNetwork:
    """Fill routing tables for growth toward attractant output ports.

    Admissible out-channels are those from which an attractant port is
    forward-reachable, ordered straightest-first (ascending turning angle,
    ties by channel id). An entry is blocked by its own target channel and
    by the outgoing half of any straight-through path whose body line the
    entry would cross at the junction.
    """
    if not net.attractant_ports:
        raise RoutingError("attraction routing requires at least one attractant port")
    reach_cache: dict[str, bool] = {}
    tables: dict[str, RoutingTable] = {}
    for junction in net.junctions:
        st = straight_through(net, junction)
        table: dict[str, tuple[RouteEntry, ...]] = {}
        outgoing = sorted(net.outgoing_channels(junction.id), key=lambda c: c.id)
        for cin in sorted(net.incoming_channels(junction.id), key=lambda c: c.id):
            heading = cin.heading_at_end()
            admissible = [
                c for c in outgoing if _reaches_attractant(net, c, reach_cache)
            ]
            if not admissible:
                raise RoutingError(
                    f"no attractant gradient at junction {junction.id} "
                    f"for incoming channel {cin.id}"
                )
            ordered = _sort_by_turn(net, junction, heading, admissible)
            entries = []
            for cout in ordered:
                blocked = {cout.id}
                entry_chord = (
                    cin.ray_at(junction.id),
                    cout.ray_at(junction.id),
                )
                for tin_id, tout_id in sorted(st.items()):
                    if len({cin.id, cout.id, tin_id, tout_id}) < 4:
                        continue
                    through_chord = (
                        net.channel(tin_id).ray_at(junction.id),
                        net.channel(tout_id).ray_at(junction.id),
                    )
                    if chords_interleave(entry_chord, through_chord):
                        blocked.add(tout_id)
                entries.append(RouteEntry(cout.id, frozenset(blocked)))
            table[cin.id] = tuple(entries)
        tables[junction.id] = table
    return net.with_routing(tables)


def route_network(net: ChannelNetwork) -> ChannelNetwork:
    """Apply the regime the network's own data implies."""
    if net.attractant_ports:
        return attraction_routing(net)
    return gravity_routing(net)


def regime_of(net: ChannelNetwork) -> TropismRegime:
    return TropismRegime.ATTRACTION if net.attractant_ports else TropismRegime.GRAVITY


def _sort_by_alignment(
    net: ChannelNetwork, junction: Junction, channels: list[Channel]
) -> list[Channel]:
    ordered = sorted(channels, key=lambda c: c.id)
    result: list[Channel] = []
    for c in ordered:
        i = 0
        while i < len(result) and compare_alignment(
            net.gravity, result[i].ray_at(junction.id), c.ray_at(junction.id)
        ) <= 0:
            i += 1
        result.insert(i, c)
    return result


def _sort_by_turn(
    net: ChannelNetwork, junction: Junction, heading, channels: list[Channel]
) -> list[Channel]:
    ordered = sorted(channels, key=lambda c: c.id)
    result: list[Channel] = []
    for c in ordered:
        i = 0
        while i < len(result) and compare_cosine(
            heading, result[i].ray_at(junction.id), c.ray_at(junction.id)
        ) <= 0:
            i += 1
        result.insert(i, c)
    return result


def _reaches_attractant(
    net: ChannelNetwork, channel: Channel, cache: dict[str, bool]
) -> bool:
    if channel.id in cache:
        return cache[channel.id]
    stack, visited = [channel.to_end], set()
    found = False
    while stack:
        e = stack.pop()
        if e in net.attractant_ports:
            found = True
            break
        if e in visited:
            continue
        visited.add(e)
        stack.extend(c.to_end for c in net.outgoing_channels(e))
    cache[channel.id] = found
    return found
