"""Markov-chain walk machinery.

A walk starts at a column drawn from the column-norm distribution and jumps
row-to-row with probabilities proportional to absolute entry values. Along
the way it carries a multiplicative weight W that corrects for the sampling
bias: after stepping from state i to state j, W picks up a factor
a_ij / t_ij. A walk ends when |W| falls to a relative cutoff, when it lands
in an empty (absorbing) row, or at a hard step cap.

Every starting column owns an independent counter-based RNG substream
derived from (seed, column), so results do not depend on scheduling order.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, NamedTuple

import numpy as np

from .errors import ArgumentError, DegenerateInputError
from .sparsemat import SparseMatrix, row_abs_sums
from .series import CoefficientStream

__all__ = [
    "ABSORBING",
    "TransitionModel",
    "WalkConfig",
    "build_transition_model",
    "allocate_walks",
    "largest_remainder",
    "rng_for_column",
    "step",
    "run_walk",
    "run_walks_batch",
    "WalkOutcome",
    "alpha_diagnostic",
]

# Terminal marker returned by `step` for absorbing (empty) rows.
ABSORBING = -1


@dataclass
class WalkConfig:
    """Sampling budget and termination parameters for a batch of walks.

    n_walks : total walk budget, split across starting columns
    weight_cutoff : relative weight threshold in (0, 1); a walk stops once
        |W| <= weight_cutoff * W0
    max_steps : hard cap guarding against non-decaying weights
    seed : base seed for the per-column RNG substreams
    """

    n_walks: int
    weight_cutoff: float = 1e-6
    max_steps: int = 10_000
    seed: int = 0

    def __post_init__(self):
        self.n_walks = int(self.n_walks)
        if self.n_walks < 1:
            raise ArgumentError("n_walks must be at least 1")
        if not (0.0 < self.weight_cutoff < 1.0):
            raise ArgumentError("weight_cutoff must lie strictly between 0 and 1")
        if self.max_steps < 1:
            raise ArgumentError("max_steps must be at least 1")


@dataclass
class TransitionModel:
    """Per-row sampling tables plus the initial column distribution.

    All arrays are flat and aligned with the matrix's CSR layout:
    row_cdf[e] is the within-row cumulative transition probability of entry
    e, cdf_key[e] = row(e) + row_cdf[e] enables one vectorized searchsorted
    across all rows, and step_ratio[e] = a_e / t_e is the weight update for
    taking entry e.
    """

    n: int
    row_ptr: np.ndarray
    col_ids: np.ndarray
    values: np.ndarray
    row_cdf: np.ndarray
    cdf_key: np.ndarray
    step_ratio: np.ndarray
    row_abs_sum: np.ndarray
    col_norms: np.ndarray
    init_prob: np.ndarray
    init_cdf: np.ndarray

    def is_absorbing(self, state: int) -> bool:
        return self.row_ptr[state + 1] == self.row_ptr[state]


def build_transition_model(a: SparseMatrix) -> TransitionModel:
    """Precompute transition CDFs, weight-update ratios and the
    column-norm initial distribution for matrix ``a``."""
    if a.nnz == 0:
        raise DegenerateInputError(
            "all columns are zero: the initial distribution is undefined"
        )
    n = a.n
    row_ptr = np.asarray(a.csr.indptr, dtype=np.int64)
    col_ids = np.asarray(a.csr.indices, dtype=np.int64)
    values = np.asarray(a.csr.data, dtype=np.float64)

    rsum = row_abs_sums(a)
    rows_of_entry = np.repeat(np.arange(n, dtype=np.int64), np.diff(row_ptr))

    absvals = np.abs(values)
    # Within-row cumulative sums: subtract the running total at each row start.
    csum = np.cumsum(absvals)
    row_base = np.concatenate([[0.0], csum])[row_ptr[rows_of_entry]]
    row_total = rsum[rows_of_entry]
    row_cdf = np.minimum((csum - row_base) / row_total, 1.0)
    # Pin each row's final cumulative value to exactly 1 so that a uniform
    # draw u < 1 can never escape the row's segment of cdf_key.
    last_in_row = row_ptr[1:][np.diff(row_ptr) > 0] - 1
    row_cdf[last_in_row] = 1.0
    cdf_key = rows_of_entry + row_cdf

    # a/t simplifies to sign(a) * row absolute sum; copysign keeps it exact.
    step_ratio = np.copysign(row_total, values)

    col_norms = np.sqrt(np.asarray(a.csc.multiply(a.csc).sum(axis=0)).ravel())
    total = col_norms.sum()
    init_prob = col_norms / total
    init_cdf = np.cumsum(init_prob)
    init_cdf /= init_cdf[-1]

    return TransitionModel(
        n=n,
        row_ptr=row_ptr,
        col_ids=col_ids,
        values=values,
        row_cdf=row_cdf,
        cdf_key=cdf_key,
        step_ratio=step_ratio,
        row_abs_sum=rsum,
        col_norms=col_norms,
        init_prob=init_prob,
        init_cdf=init_cdf,
    )


def largest_remainder(probs: np.ndarray, total: int) -> np.ndarray:
    """Round probs * total to integers that sum exactly to ``total``.

    Entries with zero probability never receive a walk.
    """
    probs = np.asarray(probs, dtype=np.float64)
    targets = probs * total
    counts = np.floor(targets).astype(np.int64)
    residue = int(total - counts.sum())
    if residue > 0:
        remainders = targets - counts
        remainders[probs == 0.0] = -1.0  # keep zero-probability entries at zero
        order = np.argsort(-remainders, kind="stable")
        counts[order[:residue]] += 1
    return counts


def allocate_walks(model: TransitionModel, n_walks: int) -> np.ndarray:
    """Per-column walk budgets N_i ~ p_i * n_walks with largest-remainder
    correction; the budgets sum exactly to n_walks."""
    if n_walks < 1:
        raise ArgumentError("n_walks must be at least 1")
    return largest_remainder(model.init_prob, int(n_walks))


def rng_for_column(seed: int, column: int) -> np.random.Generator:
    """Independent counter-based substream for one starting column.

    Derived from (seed, column) so walk results are reproducible and
    independent of scheduling order or worker count.
    """
    ss = np.random.SeedSequence(entropy=seed, spawn_key=(column,))
    return np.random.Generator(np.random.PCG64DXSM(ss))


def _step_entry(model: TransitionModel, state: int, rng: np.random.Generator) -> int:
    """Sample an outgoing entry index of ``state``; -1 if absorbing."""
    lo, hi = model.row_ptr[state], model.row_ptr[state + 1]
    if lo == hi:
        return -1
    u = rng.random()
    return int(lo + np.searchsorted(model.row_cdf[lo:hi], u, side="right"))


def step(model: TransitionModel, current_state: int, rng: np.random.Generator) -> int:
    """Inverse-CDF transition from ``current_state``; ABSORBING for empty rows."""
    e = _step_entry(model, current_state, rng)
    if e < 0:
        return ABSORBING
    return int(model.col_ids[e])


class WalkOutcome(NamedTuple):
    steps: int
    truncated: bool


def run_walk(
    model: TransitionModel,
    coeffs: CoefficientStream,
    start_column: int,
    config: WalkConfig,
    sink: Callable[[int, int, float], None],
    w0: float = 1.0,
    rng: np.random.Generator | None = None,
) -> WalkOutcome:
    """Reference single-walk driver.

    Starting at ``start_column`` with weight ``w0``, emits
    (k, state, coeff(k+2) * W) to ``sink`` at every step while
    |W| > weight_cutoff * |w0| and k < max_steps, then reports the number
    of emissions and whether the step cap cut the walk short.

    The two leading series terms are handled analytically by the
    estimators, hence the k+2 coefficient offset here.
    """
    if rng is None:
        rng = rng_for_column(config.seed, start_column)
    state = int(start_column)
    weight = float(w0)
    threshold = config.weight_cutoff * abs(w0)
    zeta = coeffs.coeff(2)
    k = 0
    while abs(weight) > threshold:
        if k >= config.max_steps:
            return WalkOutcome(k, True)
        sink(k, state, zeta * weight)
        e = _step_entry(model, state, rng)
        if e < 0:  # absorbing row
            return WalkOutcome(k + 1, False)
        weight *= model.step_ratio[e]
        state = int(model.col_ids[e])
        zeta *= coeffs.ratio(k + 2)
        k += 1
    return WalkOutcome(k, False)


def run_walks_batch(
    model: TransitionModel,
    start: int,
    n_walks: int,
    config: WalkConfig,
    rng: np.random.Generator,
    on_step: Callable[[int, np.ndarray, np.ndarray, np.ndarray], None],
) -> WalkOutcome:
    """Advance ``n_walks`` synchronized walks from column ``start``.

    Calls on_step(k, states, weights, walk_ids) once per step with the
    still-active subset; weights include the 1/n_walks initial factor, so a
    sink can sum emissions without a final divide. Returns total emissions
    and the number of walks truncated by the step cap.

    Semantically identical to ``run_walk`` repeated n_walks times; draws are
    consumed in synchronized step order instead of walk order.
    """
    w0 = 1.0 / n_walks
    threshold = config.weight_cutoff * w0
    states = np.full(n_walks, start, dtype=np.int64)
    weights = np.full(n_walks, w0)
    ids = np.arange(n_walks)
    emissions = 0
    k = 0
    while states.size and k < config.max_steps:
        on_step(k, states, weights, ids)
        emissions += states.size

        has_next = model.row_ptr[states + 1] > model.row_ptr[states]
        if not has_next.all():
            states, weights, ids = states[has_next], weights[has_next], ids[has_next]
            if not states.size:
                return WalkOutcome(emissions, False)

        draws = rng.random(states.size)
        entries = np.searchsorted(model.cdf_key, states + draws, side="right")
        weights = weights * model.step_ratio[entries]
        states = model.col_ids[entries]
        k += 1

        alive = np.abs(weights) > threshold
        if not alive.all():
            states, weights, ids = states[alive], weights[alive], ids[alive]
    truncated = int(states.size) if k >= config.max_steps else 0
    return WalkOutcome(emissions, truncated)


def alpha_diagnostic(a: SparseMatrix) -> float:
    """Maximum squared absolute row sum.

    Governs the variance bound of the walk estimators: the resolvent
    requires a value strictly below 1, while the exponential tolerates any
    value (its coefficients decay fast enough on their own).
    """
    if a.nnz == 0:
        return 0.0
    return float(np.max(row_abs_sums(a)) ** 2)
