"""Write an SVG of the geodesic tree, its dual and the competition interface."""
import argparse
from pathlib import Path

from cgmlab.render import svg_from_report, tree_report

p = argparse.ArgumentParser(description=__doc__)
p.add_argument("--alpha", type=float, default=0.5)
p.add_argument("--n", type=int, default=200)
p.add_argument("--seed", type=int, default=7)
p.add_argument("--size", type=int, default=40)
p.add_argument("--out", type=Path, default=Path("tree.svg"))
a = p.parse_args()
a.out.write_text(svg_from_report(tree_report(a.alpha, a.n, a.seed, a.size)))
print(a.out)
