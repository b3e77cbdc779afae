"""Deterministic SVG space-time diagrams.

x is the node position (cumulative latency), y is time growing downward; both
use the same pixels-per-unit scale, so the SVG user coordinate of any event is
exactly ``value * scale``.  A viewBox shifts negative times into view.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Optional
from xml.sax.saxutils import escape

from .model import AppClass, LinkKind, Path
from .timing import Schedule, WaitReport, evaluate

COLORS = {
    "photon": "#000000",
    "ack": "#555555",
    "trigger": "#1f4fd8",
    "pauli": "#1a9a3a",
    "wait": "#d62020",
    "node": "#bbbbbb",
}


def num(value) -> str:
    return f"{float(value):.6f}"


class _Canvas:
    def __init__(self, scale: Fraction):
        self.scale = scale
        self.items: list[str] = []
        self.ys: list[Fraction] = []

    def line(self, x1, y1, x2, y2, kind: str, ident: Optional[str] = None, dashed: bool = False) -> None:
        s = self.scale
        self.ys += [y1, y2]
        attrs = f'x1="{num(x1 * s)}" y1="{num(y1 * s)}" x2="{num(x2 * s)}" y2="{num(y2 * s)}"'
        extra = ' stroke-dasharray="4 3"' if dashed else ""
        width = "3" if kind == "wait" else "1.5"
        id_attr = f' id="{ident}"' if ident else ""
        self.items.append(
            f'<line{id_attr} class="{kind}" {attrs} stroke="{COLORS[kind]}" stroke-width="{width}"{extra}/>'
        )

    def polyline(self, points, kind: str, ident: str) -> None:
        s = self.scale
        self.ys += [y for _, y in points]
        pts = " ".join(f"{num(x * s)},{num(y * s)}" for x, y in points)
        self.items.append(
            f'<polyline id="{ident}" class="{kind}" points="{pts}" fill="none" stroke="{COLORS[kind]}" stroke-width="1.5"/>'
        )


def _link_lines(canvas: _Canvas, j: int, kind: LinkKind, x_left, x_right, f, t) -> None:
    mid = (x_left + x_right) / 2
    half = t / 2
    tag = f"link-{j + 1}"
    if kind is LinkKind.SENDER_RECEIVER:
        canvas.line(x_left, f, x_right, f + t, "photon", f"{tag}-photon")
        canvas.line(x_right, f + t, x_left, f + 2 * t, "ack", f"{tag}-ack", dashed=True)
    elif kind is LinkKind.RECEIVER_SENDER:
        canvas.line(x_right, f, x_left, f + t, "photon", f"{tag}-photon")
        canvas.line(x_left, f + t, x_right, f + 2 * t, "ack", f"{tag}-ack", dashed=True)
    elif kind is LinkKind.MEET_IN_THE_MIDDLE:
        canvas.line(x_left, f, mid, f + half, "photon", f"{tag}-photon-left")
        canvas.line(x_right, f, mid, f + half, "photon", f"{tag}-photon-right")
        canvas.line(mid, f + half, x_left, f + t, "ack", f"{tag}-ack-left", dashed=True)
        canvas.line(mid, f + half, x_right, f + t, "ack", f"{tag}-ack-right", dashed=True)
    else:
        canvas.line(mid, f, x_left, f + half, "photon", f"{tag}-photon-left")
        canvas.line(mid, f, x_right, f + half, "photon", f"{tag}-photon-right")
        canvas.line(x_left, f + half, x_right, f + half + t, "ack", f"{tag}-ack-left", dashed=True)
        canvas.line(x_right, f + half, x_left, f + half + t, "ack", f"{tag}-ack-right", dashed=True)


def _trigger_x(kind: LinkKind, x_left, x_right):
    if kind is LinkKind.SENDER_RECEIVER:
        return x_left
    if kind is LinkKind.RECEIVER_SENDER:
        return x_right
    return (x_left + x_right) / 2


def render_svg(
    path: Path,
    schedule: Schedule,
    app_class: AppClass = AppClass.T,
    scale=40,
    report: Optional[WaitReport] = None,
    units: str = "",
) -> str:
    rep = report or evaluate(path, schedule)
    sc = Fraction(scale)
    if sc <= 0:
        raise ValueError("scale must be positive")
    pos = path.node_positions()
    h = path.hops
    canvas = _Canvas(sc)

    for j, (link, f) in enumerate(zip(path, schedule.fire_times)):
        _link_lines(canvas, j, link.kind, pos[j], pos[j + 1], f, link.latency)

    trigger = [(_trigger_x(link.kind, pos[j], pos[j + 1]), f) for j, (link, f) in enumerate(zip(path, schedule.fire_times))]
    canvas.polyline(trigger, "trigger", "trigger")

    for j in range(h):
        canvas.line(pos[j], rep.swap_times[j], pos[h], rep.pauli_arrivals[j], "pauli", f"pauli-{j}")

    for j, wait in enumerate(rep.node_waits, start=1):
        if wait > 0:
            end = rep.swap_times[j]
            canvas.line(pos[j], end - wait, pos[j], end, "wait", f"wait-node-{j}")
    if app_class is AppClass.T and rep.dest_pauli_wait > 0:
        canvas.line(pos[h], rep.dest_ready, pos[h], rep.dest_ready + rep.dest_pauli_wait, "wait", f"wait-node-{h}")

    margin = Fraction(20)
    y_lo = min(canvas.ys) * sc - margin
    y_hi = max(canvas.ys) * sc + margin
    x_lo = -margin
    x_hi = pos[-1] * sc + margin
    width = x_hi - x_lo
    height = y_hi - y_lo

    axes = []
    for i, p in enumerate(pos):
        axes.append(
            f'<line id="node-{i}" class="node" x1="{num(p * sc)}" y1="{num(y_lo + margin / 2)}" '
            f'x2="{num(p * sc)}" y2="{num(y_hi - margin / 2)}" stroke="{COLORS["node"]}" stroke-width="1"/>'
        )
    title = f"{schedule.pattern or 'custom'} timing, class {app_class.value}, {h} hops"
    if units:
        title += f", 1 unit = {units}"
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{num(width)}" height="{num(height)}" '
        f'viewBox="{num(x_lo)} {num(y_lo)} {num(width)} {num(height)}">',
        f"<title>{escape(title)}</title>",
        '<g id="nodes">',
        *axes,
        "</g>",
        '<g id="timing">',
        *canvas.items,
        "</g>",
        "</svg>",
    ]
    return "\n".join(out) + "\n"
