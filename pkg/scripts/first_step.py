"""Frequency of e1-arrows against alpha and the along-geodesic e1 density."""
import argparse
import json

from cgmlab.experiments import run_first_step

p = argparse.ArgumentParser(description=__doc__)
p.add_argument("--alpha", type=float, nargs="+", default=[0.3, 1 / 3, 0.5, 0.7])
p.add_argument("--n", type=int, default=1600)
p.add_argument("--replicas", type=int, default=100)
p.add_argument("--seed", type=int, default=1)
a = p.parse_args()
out = {f"{al:.4f}": run_first_step(al, a.n, replicas=a.replicas, seed=a.seed).to_dict() for al in a.alpha}
print(json.dumps(out, indent=2))
