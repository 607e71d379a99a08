"""Arrow agreement between horizons N and 2N against distance to the terminal."""
import argparse
import json

from cgmlab.experiments import run_arrow_stability

p = argparse.ArgumentParser(description=__doc__)
p.add_argument("--alpha", type=float, default=0.5)
p.add_argument("--n", type=int, default=200)
p.add_argument("--replicas", type=int, default=50)
p.add_argument("--seed", type=int, default=1)
a = p.parse_args()
print(json.dumps(run_arrow_stability(a.alpha, a.n, replicas=a.replicas, seed=a.seed).to_dict(), indent=2))
