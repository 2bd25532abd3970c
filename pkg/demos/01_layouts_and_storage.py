"""Chunked layouts on a tiny graph, then storage accounting on a bigger one."""
import numpy as np

from slimsell.analysis import storage_report
from slimsell.generators import gen_fixture, gen_kronecker
from slimsell.layout import build_sell_c_sigma, build_slimsell, dump

# %% A path 0-1-2-3 cut into chunks of two rows, no sorting.
path = gen_fixture("path", 4)
print(dump(build_slimsell(path, C=2, sigma=1)))

# Rows 0 and 3 have one neighbor, rows 1 and 2 have two, so each chunk pads
# one cell (the -1 entries). Sorting the whole graph by degree packs the two
# long rows together and the padding disappears.
print(dump(build_slimsell(path, C=2, sigma=4)))

# %% The weighted variant keeps a value array next to col; padding holds the
# additive identity of the chosen semiring.
print(dump(build_sell_c_sigma(path, C=2, sigma=1, semiring="tropical")))

# %% Storage on a skewed graph as the sort scope grows.
g = gen_kronecker(scale=12, edgefactor=16, seed=1)
print(f"kron scale 12: n={g.n} m={g.m}")
for sigma in (1, 8, 64, 512, g.n):
    rep = storage_report(g, C=8, sigma=sigma)
    print(f"sigma={sigma:5d}  padding={rep.padding:7d}  slimsell={rep.slimsell.measured:7d}  "
          f"sell={rep.sell_c_sigma.measured:7d}  al={rep.al.measured:7d}  "
          f"slim/sell={rep.ratio_slimsell_sell:.3f}  slim/al={rep.ratio_slimsell_al:.3f}")

# Every measured count equals its closed form once P is known.
assert all(e.exact for e in rep.entries)
