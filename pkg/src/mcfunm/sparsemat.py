"""Sparse matrix storage with simultaneous row- and column-major access.

Random-walk generation needs fast row sampling while the estimators need
fast column extraction, so every matrix is kept in both CSR and CSC form
(memory cost 2*nnz). Matrices are immutable after construction and safe
to share across threads.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy import sparse

from .errors import ArgumentError, DataError, DegenerateInputError, ParseError

__all__ = [
    "SparseMatrix",
    "GraphSource",
    "load_graph",
    "symmetrize_digraph",
    "scale",
    "row_abs_sums",
]


@dataclass
class SparseMatrix:
    """Square sparse matrix stored in both CSR and CSC form.

    Attributes
    ----------
    csr, csc : scipy.sparse.csr_array / csc_array
        The same set of (row, col, value) triples in both orders.
    symmetric_hint : bool
        True when the matrix was built from an undirected graph (or any
        construction guaranteeing A == A.T).
    original_ids : np.ndarray or None
        When node ids were compacted (isolated-node removal), maps the
        internal index 0..n-1 back to the original id. None means identity.
    meta : dict
        Free-form provenance (generator parameters, edge counts, ...).
    """

    csr: sparse.csr_array
    csc: sparse.csc_array
    symmetric_hint: bool = False
    original_ids: np.ndarray | None = None
    meta: dict = field(default_factory=dict)

    @property
    def n(self) -> int:
        return self.csr.shape[0]

    @property
    def nnz(self) -> int:
        return self.csr.nnz

    @classmethod
    def from_coo(
        cls,
        rows,
        cols,
        vals,
        n: int,
        symmetric_hint: bool = False,
        original_ids=None,
        meta=None,
    ) -> "SparseMatrix":
        """Build from triples; rejects duplicates, explicit zeros and
        out-of-range indices rather than silently repairing them."""
        rows = np.asarray(rows, dtype=np.int64)
        cols = np.asarray(cols, dtype=np.int64)
        vals = np.asarray(vals, dtype=np.float64)
        if rows.shape != cols.shape or rows.shape != vals.shape:
            raise ArgumentError("rows, cols and vals must have equal length")
        if n <= 0:
            raise ArgumentError("matrix dimension must be positive")
        if rows.size:
            if rows.min() < 0 or cols.min() < 0 or rows.max() >= n or cols.max() >= n:
                raise ArgumentError(f"indices out of range for n={n}")
            if np.any(vals == 0.0):
                raise ArgumentError("explicit zero values are not stored")
            keys = rows * np.int64(n) + cols
            if np.unique(keys).size != keys.size:
                raise ArgumentError("duplicate (row, col) entries")
        coo = sparse.coo_array((vals, (rows, cols)), shape=(n, n))
        csr = coo.tocsr()
        csr.sort_indices()
        csc = coo.tocsc()
        csc.sort_indices()
        return cls(
            csr=csr,
            csc=csc,
            symmetric_hint=symmetric_hint,
            original_ids=None if original_ids is None else np.asarray(original_ids, dtype=np.int64),
            meta=dict(meta or {}),
        )

    @classmethod
    def from_dense(cls, arr, symmetric_hint: bool = False) -> "SparseMatrix":
        arr = np.asarray(arr, dtype=np.float64)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
            raise ArgumentError("dense input must be a square 2-D array")
        rows, cols = np.nonzero(arr)
        return cls.from_coo(rows, cols, arr[rows, cols], arr.shape[0], symmetric_hint)

    def row_entries(self, i: int):
        """(column ids, values) of row i, sorted by column. Views; do not mutate."""
        p0, p1 = self.csr.indptr[i], self.csr.indptr[i + 1]
        return self.csr.indices[p0:p1], self.csr.data[p0:p1]

    def col_entries(self, j: int):
        """(row ids, values) of column j, sorted by row. Views; do not mutate."""
        p0, p1 = self.csc.indptr[j], self.csc.indptr[j + 1]
        return self.csc.indices[p0:p1], self.csc.data[p0:p1]

    def diagonal(self) -> np.ndarray:
        return self.csr.diagonal()

    def toarray(self) -> np.ndarray:
        return self.csr.toarray()

    def triples(self) -> np.ndarray:
        """All stored (i, j, v) triples sorted by (i, j); used by tests."""
        coo = self.csr.tocoo()
        order = np.lexsort((coo.col, coo.row))
        return np.column_stack([coo.row[order], coo.col[order], coo.data[order]])

    def is_transpose_consistent(self) -> bool:
        """Row-major and column-major views must describe identical triples."""
        coo_r = self.csr.tocoo()
        coo_c = self.csc.tocoo()
        a = np.lexsort((coo_r.col, coo_r.row))
        b = np.lexsort((coo_c.col, coo_c.row))
        return (
            np.array_equal(coo_r.row[a], coo_c.row[b])
            and np.array_equal(coo_r.col[a], coo_c.col[b])
            and np.array_equal(coo_r.data[a], coo_c.data[b])
        )

    def is_symmetric(self) -> bool:
        diff = self.csr - self.csr.T
        return diff.nnz == 0 or np.abs(diff.data).max() == 0.0


@dataclass
class GraphSource:
    """Description of a graph file plus the cleanup filters to apply.

    format : "edgelist" or "matrix-market"
    directed : if False, every edge (u, v) also stores (v, u)
    The drop_* filters are idempotent.
    """

    path: str | Path
    format: str = "edgelist"
    directed: bool = False
    drop_loops: bool = True
    drop_duplicates: bool = True
    drop_isolated: bool = True


def _parse_edgelist(path: Path):
    us, vs = [], []
    with open(path, "r") as fh:
        for lineno, line in enumerate(fh, start=1):
            stripped = line.strip()
            if not stripped or stripped[0] in "#%":
                continue
            parts = stripped.split()
            if len(parts) < 2:
                raise ParseError(f"{path}:{lineno}: expected at least two columns")
            try:
                u, v = int(parts[0]), int(parts[1])
            except ValueError:
                raise ParseError(f"{path}:{lineno}: node ids must be integers") from None
            if u < 0 or v < 0:
                raise ParseError(f"{path}:{lineno}: node ids must be non-negative")
            us.append(u)
            vs.append(v)
    return np.asarray(us, dtype=np.int64), np.asarray(vs, dtype=np.int64)


def _parse_matrix_market(path: Path):
    """Coordinate Matrix Market subset: real|pattern values, general|symmetric
    storage. Returns 0-based directed edge arrays (symmetric storage already
    expanded). Zero-valued entries are skipped."""
    with open(path, "r") as fh:
        header = fh.readline()
        if not header.startswith("%%MatrixMarket"):
            raise ParseError(f"{path}:1: missing MatrixMarket header")
        fields = header.strip().split()
        if len(fields) < 5 or fields[1].lower() != "matrix" or fields[2].lower() != "coordinate":
            raise ParseError(f"{path}:1: only 'matrix coordinate' files are supported")
        value_type = fields[3].lower()
        storage = fields[4].lower()
        if value_type not in ("real", "pattern", "integer"):
            raise ParseError(f"{path}:1: unsupported value type '{fields[3]}'")
        if storage not in ("general", "symmetric"):
            raise ParseError(f"{path}:1: unsupported storage '{fields[4]}'")
        pattern = value_type == "pattern"

        size = None
        us, vs = [], []
        for lineno, line in enumerate(fh, start=2):
            stripped = line.strip()
            if not stripped or stripped[0] == "%":
                continue
            parts = stripped.split()
            if size is None:
                if len(parts) != 3:
                    raise ParseError(f"{path}:{lineno}: size line must be 'rows cols nnz'")
                nrows, ncols, _ = (int(p) for p in parts)
                if nrows != ncols:
                    raise ParseError(f"{path}:{lineno}: adjacency matrix must be square")
                size = nrows
                continue
            want = 2 if pattern else 3
            if len(parts) < want:
                raise ParseError(f"{path}:{lineno}: expected {want} columns")
            try:
                i, j = int(parts[0]) - 1, int(parts[1]) - 1
                value = 1.0 if pattern else float(parts[2])
            except ValueError:
                raise ParseError(f"{path}:{lineno}: malformed entry") from None
            if i < 0 or j < 0 or i >= size or j >= size:
                raise ParseError(f"{path}:{lineno}: index out of declared range")
            if value == 0.0:
                continue
            us.append(i)
            vs.append(j)
            if storage == "symmetric" and i != j:
                us.append(j)
                vs.append(i)
    if size is None:
        raise ParseError(f"{path}: missing size line")
    return np.asarray(us, dtype=np.int64), np.asarray(vs, dtype=np.int64)


def simple_graph_from_edges(
    u,
    v,
    directed: bool = False,
    drop_loops: bool = True,
    drop_duplicates: bool = True,
    drop_isolated: bool = True,
    meta=None,
) -> SparseMatrix:
    """Apply the cleanup filters to raw edge arrays and build a binary matrix.

    Filter order: loops, undirected expansion, duplicate removal, isolated-node
    removal with id compaction. All stored values are 1.
    """
    u = np.asarray(u, dtype=np.int64)
    v = np.asarray(v, dtype=np.int64)
    if drop_loops and u.size:
        keep = u != v
        u, v = u[keep], v[keep]
    if not directed and u.size:
        u, v = np.concatenate([u, v]), np.concatenate([v, u])
    if drop_duplicates and u.size:
        pairs = np.unique(np.column_stack([u, v]), axis=0)
        u, v = pairs[:, 0], pairs[:, 1]
    if u.size == 0:
        raise DegenerateInputError("graph is empty after filtering")

    original_ids = None
    if drop_isolated:
        present = np.unique(np.concatenate([u, v]))
        if present.size != present[-1] + 1:
            remap = np.full(present[-1] + 1, -1, dtype=np.int64)
            remap[present] = np.arange(present.size)
            u, v = remap[u], remap[v]
            original_ids = present
        n = present.size
    else:
        n = int(max(u.max(), v.max())) + 1

    return SparseMatrix.from_coo(
        u,
        v,
        np.ones(u.size),
        n,
        symmetric_hint=not directed,
        original_ids=original_ids,
        meta=meta,
    )


def load_graph(source: GraphSource) -> SparseMatrix:
    """Read a graph file and return its binary adjacency matrix.

    The result is unweighted (all values 1) with the requested filters
    applied; isolated-node removal compacts ids and records the old ids in
    ``original_ids``.
    """
    path = Path(source.path)
    if not path.exists():
        raise DataError(f"input file not found: {path}")
    if source.format == "edgelist":
        u, v = _parse_edgelist(path)
    elif source.format in ("matrix-market", "mtx"):
        u, v = _parse_matrix_market(path)
    else:
        raise ArgumentError(f"unknown graph format '{source.format}'")
    return simple_graph_from_edges(
        u,
        v,
        directed=source.directed,
        drop_loops=source.drop_loops,
        drop_duplicates=source.drop_duplicates,
        drop_isolated=source.drop_isolated,
        meta={"source": str(path), "format": source.format, "directed": source.directed},
    )


def symmetrize_digraph(a: SparseMatrix) -> SparseMatrix:
    """Bipartite symmetrization of a directed matrix.

    Returns the 2n x 2n block matrix [[0, A], [A.T, 0]], separating every
    node into an out-copy (rows 0..n-1) and an in-copy (rows n..2n-1).
    """
    block = sparse.bmat([[None, a.csr], [a.csr.T, None]], format="csr")
    block = sparse.csr_array(block)
    block.sort_indices()
    csc = sparse.csc_array(block.tocsc())
    csc.sort_indices()
    meta = dict(a.meta)
    meta["symmetrized_blocks"] = a.n
    if a.original_ids is not None:
        meta["source_original_ids"] = a.original_ids.tolist()
    return SparseMatrix(csr=block, csc=csc, symmetric_hint=True, original_ids=None, meta=meta)


def scale(a: SparseMatrix, gamma: float) -> SparseMatrix:
    """Multiply every stored value by gamma > 0; structure is unchanged."""
    if not gamma > 0:
        raise ArgumentError(f"gamma must be positive, got {gamma}")
    csr = sparse.csr_array(a.csr * gamma)
    csc = sparse.csc_array(a.csc * gamma)
    meta = dict(a.meta)
    meta["gamma"] = meta.get("gamma", 1.0) * gamma
    return SparseMatrix(
        csr=csr,
        csc=csc,
        symmetric_hint=a.symmetric_hint,
        original_ids=a.original_ids,
        meta=meta,
    )


def row_abs_sums(a: SparseMatrix) -> np.ndarray:
    """Vector of per-row absolute sums; zero for empty rows."""
    out = np.zeros(a.n)
    if a.nnz:
        np.add.at(out, a.csr.tocoo().row, np.abs(a.csr.data))
    return out
