"""Synthetic inputs: uniform random graphs versus skewed Kronecker graphs."""
import numpy as np

from slimsell.generators import gen_erdos_renyi, gen_kronecker, parse_spec
from slimsell.graph import degree_stats

n = 1 << 12
er = gen_erdos_renyi(n, 16 / n, seed=1)
kr = gen_kronecker(12, 8, seed=1)

for name, g in (("erdos-renyi", er), ("kronecker", kr)):
    ds = degree_stats(g)
    print(f"{name:12s} n={g.n} m={g.m} avg={float(ds.avg_degree):.2f} max={ds.max_degree} "
          f"max/avg={ds.max_degree / float(ds.avg_degree):.1f}")

# Degree histograms, coarse buckets.
for name, g in (("erdos-renyi", er), ("kronecker", kr)):
    h = np.bincount(np.minimum(g.degrees(), 64) // 8)
    print(name, " ".join(f"{int(c):4d}" for c in h))

# The same strings drive the command line; a spec plus seed fixes the graph.
spec = parse_spec("kron:scale=10,ef=16,seed=7")
assert spec.build() == spec.build()
print(spec.label(), "->", spec.build().m, "edges")
