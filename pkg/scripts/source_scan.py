"""Density of sources across a grid of directions."""
import argparse
import json

import numpy as np

from cgmlab.experiments import run_source_scan

p = argparse.ArgumentParser(description=__doc__)
p.add_argument("--points", type=int, default=7)
p.add_argument("--n", type=int, default=400)
p.add_argument("--fields", type=int, default=20)
p.add_argument("--seed", type=int, default=1)
a = p.parse_args()
alphas = np.linspace(0.2, 0.8, a.points)
print(json.dumps(run_source_scan(alphas, a.n, fields=a.fields, seed=a.seed).to_dict(), indent=2))
