"""Empirical {s,c,h,v} chain along antidiagonals next to its Bernoulli oracle."""
import argparse
import json

from cgmlab.experiments import run_markov_chain

p = argparse.ArgumentParser(description=__doc__)
p.add_argument("--alpha", type=float, nargs="+", default=[1 / 3, 0.5])
p.add_argument("--n", type=int, default=1600)
p.add_argument("--length", type=int, default=100_000)
p.add_argument("--seed", type=int, default=1)
a = p.parse_args()
out = {f"{al:.4f}": run_markov_chain(al, a.n, chain_length=a.length, seed=a.seed) for al in a.alpha}
print(json.dumps(out, indent=2, default=float))
