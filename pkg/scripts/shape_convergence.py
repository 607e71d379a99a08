"""Relative gap between G(0, Nu)/N and the shape function for a ladder of N."""
import argparse
import json

from cgmlab.experiments import run_shape_convergence

p = argparse.ArgumentParser(description=__doc__)
p.add_argument("--sizes", type=int, nargs="+", default=[100, 300, 1000])
p.add_argument("--seeds", type=int, default=20)
p.add_argument("--seed", type=int, default=1)
a = p.parse_args()
print(json.dumps(run_shape_convergence(a.sizes, seeds=a.seeds, seed=a.seed).to_dict(), indent=2))
