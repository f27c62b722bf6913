"""SVG and CSV output for planar projected cycles."""
from __future__ import annotations

import os
import tempfile
from pathlib import Path
from xml.sax.saxutils import escape

from .chains import SimplicialChain, reduce
from .nullproj import Face, planar_faces


def write_atomic(path: str | Path, text: str) -> None:
    """Write through a temporary file in the same directory, then rename."""
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent or ".", prefix=f".{path.name}.")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def render_svg(S: SimplicialChain, faces: list[Face] | None = None, size: int = 480, title: str = "") -> str:
    """Draw a 1-cycle in the plane with its face winding numbers as labels.

    Segments are drawn with arrowheads in their orientation; multiplicities
    other than one are written next to the segment midpoint.
    """
    if S.ambient_dim != 2 or S.dim != 1:
        raise ValueError("render_svg draws 1-chains in the plane")
    R = reduce(S if S.exact else S.to_exact())
    if faces is None:
        faces = planar_faces(R) if not R.is_empty() else []
    pts = [tuple(float(c) for c in v) for v in R.vertices()]
    if not pts:
        pts = [(0.0, 0.0), (1.0, 1.0)]
    xs, ys = [p[0] for p in pts], [p[1] for p in pts]
    lo_x, hi_x, lo_y, hi_y = min(xs), max(xs), min(ys), max(ys)
    span = max(hi_x - lo_x, hi_y - lo_y) or 1.0
    pad = 0.08 * span
    scale = (size - 20) / (span + 2 * pad)

    def tr(p):
        x = 10 + (float(p[0]) - lo_x + pad) * scale
        y = size - 10 - (float(p[1]) - lo_y + pad) * scale
        return f"{x:.3f}", f"{y:.3f}"

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" viewBox="0 0 {size} {size}">',
        '<defs><marker id="arrow" viewBox="0 0 10 10" refX="9" refY="5" markerWidth="6" markerHeight="6" '
        'orient="auto-start-reverse"><path d="M0,0 L10,5 L0,10 z" fill="#333"/></marker></defs>',
    ]
    if title:
        out.append(f"<title>{escape(title)}</title>")
    out.append('<g class="segments" stroke="#333" stroke-width="1.5" fill="none">')
    for c in R.cells:
        a, b = c.vertices
        if c.multiplicity < 0:
            a, b = b, a
        (x1, y1), (x2, y2) = tr(a), tr(b)
        out.append(f'<line x1="{x1}" y1="{y1}" x2="{x2}" y2="{y2}" marker-end="url(#arrow)" '
                   f'data-multiplicity="{abs(c.multiplicity)}"/>')
        if abs(c.multiplicity) != 1:
            mx, my = tr(((float(a[0]) + float(b[0])) / 2, (float(a[1]) + float(b[1])) / 2))
            out.append(f'<text x="{mx}" y="{my}" font-size="10" stroke="none" fill="#a00">'
                       f'x{abs(c.multiplicity)}</text>')
    out.append("</g>")
    out.append('<g class="faces" font-family="sans-serif" font-size="12" text-anchor="middle">')
    for f in faces:
        if not f.bounded:
            continue
        x, y = tr(f.sample)
        colour = "#06c" if f.winding > 0 else "#c60" if f.winding < 0 else "#888"
        out.append(f'<text class="face" x="{x}" y="{y}" fill="{colour}" data-face="{f.index}" '
                   f'data-winding="{f.winding}">{f.winding}</text>')
    out.append("</g></svg>")
    return "\n".join(out) + "\n"
