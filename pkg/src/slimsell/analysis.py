"""Storage accounting and work-bound predictors for the chunked layouts."""
from __future__ import annotations

import math
from dataclasses import dataclass

from .graph import Graph, degree_stats
from .layout import build_slimsell, sell_from_slimsell, storage_cells
from .semiring import TROPICAL


@dataclass(frozen=True)
class StorageEntry:
    name: str
    measured: int
    predicted: int

    @property
    def exact(self) -> bool:
        return self.measured == self.predicted


@dataclass(frozen=True)
class StorageReport:
    """Cell counts for one (graph, C, sigma).

    ``csr`` counts the unweighted arrays (col + row = 2m + n + 1);
    ``csr_with_val`` is the weighted accounting 4m + n. Predictions for the
    chunked layouts use the measured padding ``P`` and ``n_chunks = ceil(n/C)``.
    """

    n: int
    m: int
    C: int
    sigma: int
    n_chunks: int
    padding: int
    slimsell: StorageEntry
    sell_c_sigma: StorageEntry
    al: StorageEntry
    csr: StorageEntry
    csr_with_val: int

    @property
    def entries(self) -> tuple[StorageEntry, ...]:
        return (self.slimsell, self.sell_c_sigma, self.al, self.csr)

    @property
    def ratio_slimsell_sell(self) -> float:
        return self.slimsell.measured / self.sell_c_sigma.measured if self.sell_c_sigma.measured else float("nan")

    @property
    def ratio_slimsell_al(self) -> float:
        return self.slimsell.measured / self.al.measured if self.al.measured else float("nan")

    @property
    def slimsell_beats_al(self) -> bool:
        # 2m + 2n_c + P < 2m + n  <=>  P < n - 2 n_c
        return self.padding < self.n - 2 * self.n_chunks

    def as_row(self) -> dict:
        return {
            "n": self.n, "m": self.m, "C": self.C, "sigma": self.sigma,
            "n_chunks": self.n_chunks, "padding": self.padding,
            "slimsell_cells": self.slimsell.measured, "slimsell_predicted": self.slimsell.predicted,
            "sellcs_cells": self.sell_c_sigma.measured, "sellcs_predicted": self.sell_c_sigma.predicted,
            "al_cells": self.al.measured, "al_predicted": self.al.predicted,
            "csr_cells": self.csr.measured, "csr_predicted": self.csr.predicted,
            "csr_with_val_cells": self.csr_with_val,
            "ratio_slimsell_sellcs": f"{self.ratio_slimsell_sell:.6f}",
            "ratio_slimsell_al": f"{self.ratio_slimsell_al:.6f}",
            "slimsell_beats_al": int(self.slimsell_beats_al),
        }


def predicted_cells(m: int, n: int, n_chunks: int, padding: int) -> dict[str, int]:
    """Closed-form cell counts given the structural parameters."""
    return {
        "slimsell": 2 * m + 2 * n_chunks + padding,
        "sell_c_sigma": 4 * m + 2 * padding + 2 * n_chunks,
        "al": 2 * m + n,
        "csr": 2 * m + n + 1,
        "csr_with_val": 4 * m + n,
    }


def storage_report(g: Graph, C: int, sigma: int, layout=None) -> StorageReport:
    slim = layout if layout is not None else build_slimsell(g, C, sigma)
    sell = sell_from_slimsell(slim, TROPICAL)
    P = slim.padding
    pred = predicted_cells(g.m, g.n, slim.n_chunks, P)
    return StorageReport(
        n=g.n, m=g.m, C=slim.C, sigma=slim.sigma, n_chunks=slim.n_chunks, padding=P,
        slimsell=StorageEntry("SlimSell", storage_cells(slim), pred["slimsell"]),
        sell_c_sigma=StorageEntry("Sell-C-sigma", storage_cells(sell), pred["sell_c_sigma"]),
        al=StorageEntry("AL", g.to_al().cells, pred["al"]),
        csr=StorageEntry("CSR", g.csr.cells, pred["csr"]),
        csr_with_val=pred["csr_with_val"],
    )


GENERAL = "general"
ERDOS_RENYI = "erdos_renyi"
POWER_LAW = "power_law"


@dataclass(frozen=True)
class WorkBound:
    model: str
    params: dict
    value: float


def work_bound(model: str, D, n, m, C, max_degree=None, alpha=None, beta=None) -> WorkBound:
    """Dominant-term work estimate ``D*n + D*m + D*C*T`` with constants dropped.

    ``T`` is the maximum degree (general), ``ln n`` (Erdos-Renyi) or
    ``(alpha * n * ln n) ** (1 / (beta - 1))`` (power law).
    """
    if min(D, n, C) <= 0 or m < 0:
        raise ValueError("D, n, C must be positive and m non-negative")
    if model == GENERAL:
        if max_degree is None or max_degree < 0:
            raise ValueError("general model needs max_degree >= 0")
        t = max_degree
    elif model == ERDOS_RENYI:
        t = math.log(n)
    elif model == POWER_LAW:
        if beta is None or beta <= 1:
            raise ValueError("power-law model needs beta > 1")
        if alpha is None or alpha <= 0:
            raise ValueError("power-law model needs alpha > 0")
        t = (alpha * n * math.log(n)) ** (1.0 / (beta - 1))
    else:
        raise ValueError(f"unknown work model {model!r}")
    params = dict(D=D, n=n, m=m, C=C, max_degree=max_degree, alpha=alpha, beta=beta)
    return WorkBound(model, params, D * n + D * m + D * C * t)


@dataclass(frozen=True)
class PaddingBound:
    measured_cells: int
    bound: int

    @property
    def holds(self) -> bool:
        return self.measured_cells <= self.bound


def check_padding_bound(g: Graph, C: int) -> PaddingBound:
    """Fully sorted layout: ``len(col) <= 2m + C * max_degree``."""
    slim = build_slimsell(g, C, max(g.n, 1))
    max_deg = degree_stats(g).max_degree if g.n else 0
    return PaddingBound(len(slim.col), 2 * g.m + C * max_deg)


def format_report_table(rows: list[dict], columns: list[str]) -> str:
    widths = {c: max(len(c), *(len(str(r[c])) for r in rows)) if rows else len(c) for c in columns}
    head = "  ".join(c.rjust(widths[c]) for c in columns)
    body = ["  ".join(str(r[c]).rjust(widths[c]) for c in columns) for r in rows]
    return "\n".join([head, *body]) + "\n"
