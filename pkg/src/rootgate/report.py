"""Report generation: truth-table CSV plus matplotlib figures on disk."""

from __future__ import annotations

import os

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from .engine import BLOCKED, EXITED, SimOutcome, TiePolicy, simulate
from .network import ChannelNetwork
from .render import _PALETTE
from .verify import enumerate_truth_table

_FIGSIZE = (6, 6)


def draw_network(ax, net: ChannelNetwork, outcome: SimOutcome | None = None,
                 title: str = "") -> None:
    for c in net.channels:
        xs = [p[0] for p in c.points]
        ys = [p[1] for p in c.points]
        ax.plot(xs, ys, color="0.75", linewidth=6, solid_capstyle="round",
                zorder=1)
    for j in net.junctions:
        ax.plot(*j.position, "o", color="0.45", markersize=5, zorder=2)
    for p in net.input_ports:
        ax.plot(*p.position, "o", color="seagreen", markersize=6, zorder=3)
        ax.annotate(p.id, p.position, textcoords="offset points",
                    xytext=(5, 5), color="seagreen", fontsize=9)
    for p in net.output_ports:
        ax.plot(*p.position, "o", color="sienna", markersize=6, zorder=3)
        ax.annotate(p.id, p.position, textcoords="offset points",
                    xytext=(5, -10), color="sienna", fontsize=9)
    if outcome is not None:
        for i, root in enumerate(sorted(outcome.roots, key=lambda r: r.id)):
            color = _PALETTE[i % len(_PALETTE)]
            pts = [net.element_position(root.source_port)]
            for element in root.trajectory:
                channel = net._channels_by_id.get(element)
                if channel is not None:
                    pts.extend(channel.points[1:])
            xs = [p[0] for p in pts]
            ys = [p[1] for p in pts]
            ax.plot(xs, ys, color=color, linewidth=2.5, zorder=4,
                    label=f"root {root.id}")
            if root.status == BLOCKED:
                ax.plot(xs[-1], ys[-1], "x", color=color, markersize=12,
                        markeredgewidth=3, zorder=5)
            elif root.status == EXITED:
                ax.plot(xs[-1], ys[-1], "o", color=color, markersize=8, zorder=5)
        if outcome.roots:
            ax.legend(loc="best", fontsize=8)
    ax.set_aspect("equal")
    ax.set_title(title)
    ax.set_axis_off()


def write_report(
    net: ChannelNetwork,
    outdir: str,
    tie: TiePolicy,
    name: str = "network",
) -> list[str]:
    """Write table.csv plus layout and per-assignment trajectory figures."""
    os.makedirs(outdir, exist_ok=True)
    written = []

    table = enumerate_truth_table(net, tie)
    csv_path = os.path.join(outdir, f"{name}_table.csv")
    with open(csv_path, "w", encoding="utf-8") as fh:
        fh.write(table.to_csv())
    written.append(csv_path)

    fig, ax = plt.subplots(figsize=_FIGSIZE)
    draw_network(ax, net, title=f"{name}: layout")
    path = os.path.join(outdir, f"{name}_layout.png")
    fig.savefig(path, dpi=120, bbox_inches="tight")
    plt.close(fig)
    written.append(path)

    for row in table.rows:
        assignment = {n: bool(b) for n, b in zip(table.input_names, row.inputs)}
        outcome = simulate(net, assignment, tie)
        label = "".join(str(b) for b in row.inputs)
        fig, ax = plt.subplots(figsize=_FIGSIZE)
        inputs_text = ",".join(
            f"{n}={b}" for n, b in zip(table.input_names, row.inputs)
        )
        draw_network(ax, net, outcome, title=f"{name}: {inputs_text}")
        path = os.path.join(outdir, f"{name}_case_{label}.png")
        fig.savefig(path, dpi=120, bbox_inches="tight")
        plt.close(fig)
        written.append(path)
    return written
