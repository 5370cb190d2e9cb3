"""Static SVG rendering of layouts and simulated trajectories.

Output is a plain hand-assembled SVG string: byte-stable across runs for
identical inputs, so renders can be golden-file tested.
"""

from __future__ import annotations

from .engine import BLOCKED, EXITED, SimOutcome
from .network import ChannelNetwork

_SCALE = 20
_PAD = 40
_PALETTE = ("#d62728", "#1f77b4", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b")


def _bounds(net: ChannelNetwork):
    xs, ys = [], []
    for c in net.channels:
        for x, y in c.points:
            xs.append(x)
            ys.append(y)
    for p in net.input_ports + net.output_ports:
        xs.append(p.position[0])
        ys.append(p.position[1])
    return min(xs), min(ys), max(xs), max(ys)


def render_svg(net: ChannelNetwork, outcome: SimOutcome | None = None) -> str:
    """Channels as strokes, junctions as dots, labelled ports; optionally the
    coloured root trajectories of one simulation, with blocked apexes marked."""
    x0, y0, x1, y1 = _bounds(net)

    def tx(p):
        return (p[0] - x0) * _SCALE + _PAD

    def ty(p):
        return (y1 - p[1]) * _SCALE + _PAD

    width = (x1 - x0) * _SCALE + 2 * _PAD
    height = (y1 - y0) * _SCALE + 2 * _PAD
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {width} {height}" '
        f'width="{width}" height="{height}">',
        f'<rect width="{width}" height="{height}" fill="#fcfcf8"/>',
        '<g id="channels" stroke="#b8b2a5" stroke-width="9" fill="none" '
        'stroke-linecap="round" stroke-linejoin="round">',
    ]
    for c in sorted(net.channels, key=lambda c: c.id):
        pts = " ".join(f"{tx(p)},{ty(p)}" for p in c.points)
        parts.append(f'<polyline id="channel-{c.id}" points="{pts}"/>')
    parts.append("</g>")

    parts.append('<g id="junctions" fill="#6b6558">')
    for j in sorted(net.junctions, key=lambda j: j.id):
        parts.append(
            f'<circle id="junction-{j.id}" cx="{tx(j.position)}" '
            f'cy="{ty(j.position)}" r="5"/>'
        )
    parts.append("</g>")

    if outcome is not None:
        parts.append(
            '<g id="trajectories" fill="none" stroke-width="4" '
            'stroke-linecap="round" stroke-linejoin="round">'
        )
        roots = sorted(outcome.roots, key=lambda r: r.id)
        for i, root in enumerate(roots):
            color = _PALETTE[i % len(_PALETTE)]
            pts = [net.element_position(root.source_port)]
            for element in root.trajectory:
                channel = net._channels_by_id.get(element)
                if channel is not None:
                    pts.extend(channel.points[1:])
            coords = " ".join(f"{tx(p)},{ty(p)}" for p in pts)
            parts.append(
                f'<polyline id="root-{root.id}" stroke="{color}" '
                f'points="{coords}"/>'
            )
            if root.status == BLOCKED:
                bx, by = tx(pts[-1]), ty(pts[-1])
                parts.append(
                    f'<g id="blocked-{root.id}" stroke="{color}" stroke-width="3">'
                    f'<line x1="{bx - 7}" y1="{by - 7}" x2="{bx + 7}" y2="{by + 7}"/>'
                    f'<line x1="{bx - 7}" y1="{by + 7}" x2="{bx + 7}" y2="{by - 7}"/>'
                    "</g>"
                )
            if root.status == EXITED:
                ex, ey = tx(pts[-1]), ty(pts[-1])
                parts.append(
                    f'<circle id="exit-{root.id}" cx="{ex}" cy="{ey}" r="6" '
                    f'fill="{color}" stroke="none"/>'
                )
        parts.append("</g>")

    parts.append('<g id="ports" font-family="monospace" font-size="14">')
    for p in sorted(net.input_ports, key=lambda p: p.id):
        cx, cy = tx(p.position), ty(p.position)
        parts.append(f'<circle cx="{cx}" cy="{cy}" r="5" fill="#2e7d32"/>')
        parts.append(
            f'<text id="label-{p.id}" x="{cx + 8}" y="{cy - 8}" '
            f'fill="#2e7d32">{p.id}</text>'
        )
    for p in sorted(net.output_ports, key=lambda p: p.id):
        cx, cy = tx(p.position), ty(p.position)
        parts.append(f'<circle cx="{cx}" cy="{cy}" r="5" fill="#b3541e"/>')
        parts.append(
            f'<text id="label-{p.id}" x="{cx + 8}" y="{cy + 16}" '
            f'fill="#b3541e">{p.id}</text>'
        )
    parts.append("</g>")
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
