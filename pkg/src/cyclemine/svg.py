"""Minimal static SVG rendering for dendrograms. No plotting dependency;
the output is a plain bracket diagram any browser can open."""

from __future__ import annotations

from .hcluster import Dendrogram

_MARGIN = 40
_LEAF_SPACING = 28
_HEIGHT_PX = 320


def render_dendrogram(tree: Dendrogram, leaf_labels=None, title: str = "") -> str:
    n = tree.leaf_count
    if leaf_labels is None:
        leaf_labels = [str(i) for i in range(n)]
    order = tree.leaf_order()
    x_of = {leaf: _MARGIN + order.index(leaf) * _LEAF_SPACING for leaf in range(n)}

    max_h = max((m[2] for m in tree.merges), default=1.0) or 1.0
    baseline = _MARGIN + _HEIGHT_PX

    def y_of(height):
        return baseline - (height / max_h) * _HEIGHT_PX

    # node position: leaves sit on the baseline, merged nodes at their height
    pos = {leaf: (x_of[leaf], baseline) for leaf in range(n)}
    segments = []
    for t, (left, right, height, _) in enumerate(tree.merges):
        (xl, yl), (xr, yr) = pos[int(left)], pos[int(right)]
        y = y_of(height)
        segments.append((xl, yl, xl, y))          # riser left
        segments.append((xr, yr, xr, y))          # riser right
        segments.append((min(xl, xr), y, max(xl, xr), y))  # crossbar
        pos[n + t] = ((xl + xr) / 2.0, y)

    width = 2 * _MARGIN + max(n - 1, 1) * _LEAF_SPACING
    total_height = baseline + 2 * _MARGIN
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" '
        f'height="{total_height}" viewBox="0 0 {width} {total_height}">',
        f'<text x="{_MARGIN}" y="{_MARGIN - 16}" font-size="13" '
        f'font-family="sans-serif">{title}</text>',
    ]
    for x1, y1, x2, y2 in segments:
        parts.append(
            f'<line x1="{x1:.1f}" y1="{y1:.1f}" x2="{x2:.1f}" y2="{y2:.1f}" '
            f'stroke="black" stroke-width="1"/>'
        )
    for leaf in range(n):
        parts.append(
            f'<text x="{x_of[leaf]:.1f}" y="{baseline + 16}" font-size="11" '
            f'font-family="sans-serif" text-anchor="middle">{leaf_labels[leaf]}</text>'
        )
    parts.append("</svg>")
    return "\n".join(parts)
