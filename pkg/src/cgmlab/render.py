"""Static SVG pictures of a geodesic tree, its dual tree and an interface.

``tree_report`` collects everything the picture needs into plain data;
``svg_from_report`` is a pure function of that data.
"""
from __future__ import annotations

from xml.sax.saxutils import escape

from .busemann import field_for_direction, terminal_for
from .competition import boundary_lpp_plus, competition_interface_plus
from .lattice import DownRightPath, LatticeWindow, Site
from .trees import arrow_field, dual_arrows_from_southwest, southwest_arrows
from .weights import make_weight_field


def tree_report(alpha: float, N: int, seed: int, size: int = 40) -> dict:
    """Arrows, dual arrows and the competition interface on a ``size`` box
    whose lower-left corner is the origin."""
    v = terminal_for(alpha, N)
    lo = Site(-1, -1)
    bf = field_for_direction(make_weight_field(seed, LatticeWindow(lo, v)), alpha, N, lo=lo)
    box = LatticeWindow((0, 0), (size - 1, size - 1))
    if bf.trusted is None or not bf.trusted.contains_window(box):
        raise ValueError(f"a {size}x{size} box is not trusted at N={N}")
    A = arrow_field(bf, box)
    D = dual_arrows_from_southwest(southwest_arrows(bf, box.shift((1, 1)).intersect(bf.trusted)))
    D_box = D.window.intersect(box)
    dual = D.is_m1[D.window.slices(D_box)]
    boundary = DownRightPath.axes((0, 0), size - 1, size - 1)
    bl = boundary_lpp_plus(bf, boundary, box)
    phi = competition_interface_plus(bl, 0)
    return {
        "alpha": alpha,
        "N": N,
        "seed": seed,
        "size": size,
        "arrows": ["".join("1" if e else "2" for e in row) for row in A.is_e1],
        "dual_lo": list(D_box.lo),
        "dual": ["".join("1" if e else "2" for e in row) for row in dual],
        "interface": [list(p) for p in phi.sites],
    }


def svg_from_report(rep: dict, cell: int = 12) -> str:
    size = rep["size"]
    pad = cell
    W = size * cell + 2 * pad

    def X(x1: float) -> float:
        return pad + x1 * cell

    def Yc(x2: float) -> float:
        return W - pad - x2 * cell

    lines = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{W}" viewBox="0 0 {W} {W}">',
        f"<title>{escape('geodesic tree, alpha=%g, N=%d, seed=%d' % (rep['alpha'], rep['N'], rep['seed']))}</title>",
        "<style>.primal{stroke:#1f4e99;stroke-width:1.4}.dual{stroke:#c0392b;stroke-width:1;stroke-dasharray:2,2}"
        ".interface{stroke:#111;stroke-width:3;fill:none}</style>",
    ]
    for a, row in enumerate(rep["arrows"]):
        for b, c in enumerate(row):
            a2, b2 = (a + 1, b) if c == "1" else (a, b + 1)
            if a2 < size and b2 < size:
                lines.append(f'<line class="primal" x1="{X(a)}" y1="{Yc(b)}" x2="{X(a2)}" y2="{Yc(b2)}"/>')
    d1, d2 = rep["dual_lo"]
    for i, row in enumerate(rep["dual"]):
        for j, c in enumerate(row):
            a, b = d1 + i + 0.5, d2 + j + 0.5
            a2, b2 = (a - 1, b) if c == "1" else (a, b - 1)
            lines.append(f'<line class="dual" x1="{X(a)}" y1="{Yc(b)}" x2="{X(a2)}" y2="{Yc(b2)}"/>')
    pts = " ".join(f"{X(p[0])},{Yc(p[1])}" for p in rep["interface"])
    lines.append(f'<polyline class="interface" points="{pts}"/>')
    lines.append("</svg>")
    return "\n".join(lines) + "\n"
