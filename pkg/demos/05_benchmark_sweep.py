"""Drive the benchmark harness from Python and summarize its CSV output."""
import csv
import tempfile
from collections import defaultdict
from pathlib import Path

from slimsell.bench import RunConfig, run

out = Path(tempfile.mkdtemp(prefix="slimsell-"))
cfg = RunConfig(
    graph="kron:scale=10,ef=16,seed=1",
    chunk_heights=[4, 8],
    sigmas=["1", "sqrt_n", "n"],
    semirings=["tropical", "boolean"],
    root="random:3",
    seed=1,
    slimwork=True,
    repeat=3,
    out=out,
)
outcome = run(cfg)
print("exit code", outcome.exit_code, "->", out)

rows = list(csv.DictReader(open(out / "summary.csv")))
by_cfg = defaultdict(list)
for r in rows:
    by_cfg[(r["C"], r["sigma"], r["semiring"])].append(float(r["median_elapsed_ns"]) / 1e6)
print("C  sigma  semiring   median ms (per root)")
for (C, sigma, sem), ms in sorted(by_cfg.items(), key=lambda kv: (int(kv[0][0]), int(kv[0][1]), kv[0][2])):
    print(f"{C:>2} {sigma:>6}  {sem:9s}  " + "  ".join(f"{v:6.2f}" for v in ms))

# Work counters are deterministic, unlike the timings.
it = list(csv.DictReader(open(out / "iterations.csv")))
cols = sum(int(r["columns_processed"]) for r in it if r["repeat"] == "0")
print("chunk-columns processed over one repeat of the sweep:", cols)
