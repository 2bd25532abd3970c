"""Skipping finished chunks and splitting long ones."""
import numpy as np

from slimsell.bfs import BfsOptions, bfs_spmv
from slimsell.generators import gen_kronecker
from slimsell.layout import build_slimsell

g = gen_kronecker(scale=12, edgefactor=16, seed=1)
lay = build_slimsell(g, C=8, sigma=g.n)
root = int(np.argmax(g.degrees()))

# %% Without skipping every iteration touches every chunk.
plain = bfs_spmv(lay, root, BfsOptions("tropical"))
slim = bfs_spmv(lay, root, BfsOptions("tropical", slimwork=True))
print("iter  chunks(plain)  chunks(skip)  columns(plain)  columns(skip)")
for a, b in zip(plain.per_iter, slim.per_iter):
    print(f"{a.k:4d}  {a.chunks_processed:13d}  {b.chunks_processed:12d}  "
          f"{a.columns_processed:14d}  {b.columns_processed:13d}")
total_a = sum(s.columns_processed for s in plain.per_iter)
total_b = sum(s.columns_processed for s in slim.per_iter)
print(f"work kept: {total_b / total_a:.1%}; same distances: {np.array_equal(plain.d, slim.d)}")

# %% After a full sort the first chunk is as long as the largest degree.
# Splitting into segments of L columns caps the work of one scheduling unit.
print("longest chunk:", int(lay.cl.max()), "columns")
for L in (None, 64, 16, 4):
    res = bfs_spmv(lay, root, BfsOptions("tropical", slimchunk=L))
    first = res.per_iter[0]
    print(f"L={L}: units in iteration 1 = {first.subchunks_processed or first.chunks_processed}, "
          f"largest unit = {first.max_unit_cells} cells, same result = {np.array_equal(res.d, plain.d)}")
