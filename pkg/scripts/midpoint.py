"""Probability that the n-midpoint lies on the semi-infinite geodesic, per n."""
import argparse
import json

from cgmlab.experiments import run_midpoint

p = argparse.ArgumentParser(description=__doc__)
p.add_argument("--alpha", type=float, default=0.5)
p.add_argument("--ns", type=int, nargs="+", default=[20, 80, 320])
p.add_argument("--replicas", type=int, default=500)
p.add_argument("--batches", type=int, default=20)
p.add_argument("--seed", type=int, default=1)
a = p.parse_args()
print(json.dumps(run_midpoint(a.alpha, a.ns, replicas=a.replicas, batches=a.batches, seed=a.seed).to_dict(), indent=2))
