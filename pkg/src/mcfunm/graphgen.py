"""Synthetic graph generators: rewired ring lattices and recursive
quadrant-sampled power-law graphs.

Both are deterministic under a fixed seed and produce simple undirected
graphs satisfying the storage invariants (no loops, no duplicates,
symmetric). Generated matrices carry edge-count accounting in ``meta``
since "edges" can mean either undirected edges or stored nonzeros.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ArgumentError
from .sparsemat import SparseMatrix, simple_graph_from_edges

__all__ = ["SmallWorldParams", "KroneckerParams", "gen_smallworld", "gen_kronecker"]


@dataclass
class SmallWorldParams:
    """Ring lattice of n nodes, each tied to k/2 neighbours per side, with
    every lattice edge independently rewired with probability rewire_prob."""

    n: int
    k: int
    rewire_prob: float = 0.1
    seed: int = 0

    def __post_init__(self):
        if self.k % 2 != 0:
            raise ArgumentError("neighbour count k must be even")
        if not (0 < self.k < self.n):
            raise ArgumentError("need 0 < k < n")
        if not (0.0 <= self.rewire_prob <= 1.0):
            raise ArgumentError("rewire_prob must lie in [0, 1]")


@dataclass
class KroneckerParams:
    """Recursive quadrant-sampled random graph (edge_factor * 2**scale edge
    draws over a 2**scale node universe). Defaults follow the Graph500
    quadrant probabilities."""

    scale: int
    edge_factor: int = 16
    pa: float = 0.57
    pb: float = 0.19
    pc: float = 0.19
    seed: int = 0

    def __post_init__(self):
        if self.scale < 1:
            raise ArgumentError("scale must be at least 1")
        if self.edge_factor < 1:
            raise ArgumentError("edge_factor must be at least 1")
        probs = (self.pa, self.pb, self.pc)
        if any(p < 0 for p in probs) or sum(probs) > 1.0 + 1e-12:
            raise ArgumentError("quadrant probabilities must be non-negative and sum to at most 1")

    @property
    def pd(self) -> float:
        return 1.0 - self.pa - self.pb - self.pc


def _rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64DXSM(np.random.SeedSequence(seed)))


def gen_smallworld(p: SmallWorldParams) -> SparseMatrix:
    """Rewired ring lattice.

    Rewiring replaces lattice edge (i, j) by (i, m) with m drawn uniformly
    among non-neighbours of i, so the total edge count n*k/2 is preserved
    exactly and loops/duplicates never appear.
    """
    rng = _rng(p.seed)
    n, half = p.n, p.k // 2
    adjacency = [set() for _ in range(n)]
    for offset in range(1, half + 1):
        for i in range(n):
            j = (i + offset) % n
            adjacency[i].add(j)
            adjacency[j].add(i)

    for offset in range(1, half + 1):
        for i in range(n):
            j = (i + offset) % n
            if rng.random() >= p.rewire_prob:
                continue
            if len(adjacency[i]) >= n - 1:
                continue  # no non-neighbour available
            while True:
                m = int(rng.integers(n))
                if m != i and m not in adjacency[i]:
                    break
            adjacency[i].discard(j)
            adjacency[j].discard(i)
            adjacency[i].add(m)
            adjacency[m].add(i)

    us, vs = [], []
    for i in range(n):
        for j in adjacency[i]:
            if i < j:
                us.append(i)
                vs.append(j)
    meta = {
        "generator": "smallworld",
        "n": n,
        "k": p.k,
        "rewire_prob": p.rewire_prob,
        "seed": p.seed,
        "undirected_edges": len(us),
        "nnz": 2 * len(us),
    }
    return simple_graph_from_edges(
        np.asarray(us), np.asarray(vs), directed=False, drop_isolated=False, meta=meta
    )


def gen_kronecker(p: KroneckerParams) -> SparseMatrix:
    """Recursive quadrant edge sampling, then cleanup.

    Each of the edge_factor * 2**scale draws picks one quadrant per level:
    with a single uniform r, the row bit is r >= pa+pb and the column bit is
    r in [pa, pa+pb) or r >= pa+pb+pc. The raw digraph is then symmetrized,
    deduplicated, loop-free, and compacted over non-isolated nodes.
    """
    rng = _rng(p.seed)
    n_draws = p.edge_factor << p.scale
    rows = np.zeros(n_draws, dtype=np.int64)
    cols = np.zeros(n_draws, dtype=np.int64)
    ab = p.pa + p.pb
    abc = ab + p.pc
    for _ in range(p.scale):
        r = rng.random(n_draws)
        row_bit = r >= ab
        col_bit = ((r >= p.pa) & ~row_bit) | (r >= abc)
        rows = (rows << 1) | row_bit
        cols = (cols << 1) | col_bit

    meta = {
        "generator": "kronecker",
        "scale": p.scale,
        "edge_factor": p.edge_factor,
        "quadrants": (p.pa, p.pb, p.pc, p.pd),
        "seed": p.seed,
        "requested_edges": int(n_draws),
    }
    out = simple_graph_from_edges(rows, cols, directed=False, meta=meta)
    out.meta["undirected_edges"] = out.nnz // 2
    out.meta["nnz"] = out.nnz
    return out
