"""Scaled deviation of B(0, x) from its linear limit; reported, not gated."""
import argparse
import json

from cgmlab.experiments import run_ergodic_diagnostic

p = argparse.ArgumentParser(description=__doc__)
p.add_argument("--alpha", type=float, default=0.5)
p.add_argument("--n", type=int, default=400)
p.add_argument("--replicas", type=int, default=10)
p.add_argument("--seed", type=int, default=1)
a = p.parse_args()
print(json.dumps(run_ergodic_diagnostic(a.alpha, a.n, replicas=a.replicas, seed=a.seed).to_dict(), indent=2))
