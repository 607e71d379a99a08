"""Mean Busemann increments minus their limits as the horizon N grows."""
import argparse
import json

from cgmlab.busemann import bias_ladder

p = argparse.ArgumentParser(description=__doc__)
p.add_argument("--alpha", type=float, default=0.5)
p.add_argument("--ns", type=int, nargs="+", default=[100, 200, 400, 800])
p.add_argument("--replicas", type=int, default=50)
p.add_argument("--seed", type=int, default=1)
a = p.parse_args()
print(json.dumps(bias_ladder(a.alpha, a.ns, a.replicas, seed=a.seed), indent=2, default=float))
