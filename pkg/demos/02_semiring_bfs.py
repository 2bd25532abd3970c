"""BFS as repeated sparse products under four semirings."""
import numpy as np

from slimsell.bfs import BfsOptions, bfs_spmv, bfs_traditional, validate_parents
from slimsell.generators import gen_erdos_renyi
from slimsell.layout import build_slimsell, spmv_step
from slimsell.semiring import INF, init_state

g = gen_erdos_renyi(200, 3 / 200, seed=4)
lay = build_slimsell(g, C=8, sigma=32)
root = 0

# %% One min-plus step by hand: the root's neighbors get distance 1.
x0 = init_state("tropical", g.n, int(lay.inv_perm[root]), lay.n_padded).x
x1 = spmv_step(lay, "tropical", x0)
print("reached after one step:", int(np.count_nonzero(x1 != INF)), "of", g.n)

# %% Full runs. Distances agree; parents may differ (sel-max keeps the
# largest-ID frontier neighbor, the others derive the smallest-ID one).
ref = bfs_traditional(g, root)
for variant in ("tropical", "real", "boolean", "selmax"):
    res = bfs_spmv(lay, root, BfsOptions(variant))
    same = np.array_equal(res.d, ref.d)
    print(f"{variant:9s} iterations={res.iterations}  distances match={same}  "
          f"parents valid={validate_parents(g, res.d, res.p) is None}")

reached = ref.d != INF
print("eccentricity:", int(ref.d[reached].max()), " unreachable:", int((~reached).sum()))
