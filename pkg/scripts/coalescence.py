"""Coalescence of adjacent geodesics and the backward-cluster size tail."""
import argparse
import json

from cgmlab.experiments import run_coalescence

p = argparse.ArgumentParser(description=__doc__)
p.add_argument("--alpha", type=float, default=0.5)
p.add_argument("--trials", type=int, default=200)
p.add_argument("--side", type=int, default=400)
p.add_argument("--seed", type=int, default=1)
a = p.parse_args()
print(json.dumps(run_coalescence(a.alpha, trials=a.trials, side=a.side, seed=a.seed).to_dict(), indent=2))
