"""Exact and near-exact references used for verification.

``dense_funm`` evaluates the truncated power series by repeated dense
multiplication; ``cg_solve`` is an unpreconditioned conjugate gradient for
the attenuated linear system (I - gamma*A) x = b. Both are meant for tests
and cross-checks, not production-sized inputs.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ArgumentError, ConvergenceError, ResourceError
from .sparsemat import SparseMatrix, row_abs_sums
from .series import CoefficientStream

__all__ = ["DenseMatrix", "dense_funm", "cg_solve", "gershgorin_gamma"]

_DENSE_LIMIT = 2048
_DEFAULT_EXP_TERMS = 64


@dataclass
class DenseMatrix:
    """Dense series evaluation plus a bound on the discarded tail.

    tail_bound is None when the geometric bound does not apply
    (coefficient ratio times the infinity norm is not below 1).
    """

    values: np.ndarray
    terms: int
    tail_bound: float | None

    @property
    def n(self) -> int:
        return self.values.shape[0]


def dense_funm(a: SparseMatrix, coeffs: CoefficientStream, terms: int | None = None) -> DenseMatrix:
    """Truncated power series of ``a`` evaluated densely.

    ``terms`` is the highest retained power. Defaults to 64 for the
    exponential (tail far below double precision for moderate norms); the
    resolvent has no safe default and requires an explicit count.
    """
    if a.n > _DENSE_LIMIT:
        raise ResourceError(
            f"dense evaluation capped at n={_DENSE_LIMIT} (got n={a.n})"
        )
    if terms is None:
        if coeffs.tag == "exponential":
            terms = _DEFAULT_EXP_TERMS
        else:
            raise ArgumentError(
                f"'{coeffs.tag}' has no default truncation; pass terms explicitly"
            )
    if terms < 0:
        raise ArgumentError("terms must be non-negative")

    ad = a.toarray()
    zeta = coeffs.prefix(terms + 1)
    out = zeta[0] * np.eye(a.n)
    power = np.eye(a.n)
    for k in range(1, terms + 1):
        power = power @ ad
        if zeta[k] != 0.0:
            out += zeta[k] * power

    # Geometric tail bound sum_{k>terms} zeta_k * norm^k, valid while the
    # coefficient ratio keeps the remaining series dominated.
    norm_inf = float(np.max(row_abs_sums(a))) if a.nnz else 0.0
    ratio = coeffs.ratio(terms + 1)
    tail_bound = None
    if ratio * norm_inf < 1.0:
        head = coeffs.coeff(terms + 1) * norm_inf ** (terms + 1)
        tail_bound = head / (1.0 - ratio * norm_inf)
    return DenseMatrix(values=out, terms=terms, tail_bound=tail_bound)


def cg_solve(
    a: SparseMatrix,
    gamma: float,
    b: np.ndarray,
    tol: float = 1e-10,
    max_iter: int = 1000,
) -> np.ndarray:
    """Unpreconditioned conjugate gradient for (I - gamma*A) x = b.

    Requires the system matrix to be symmetric positive definite, which
    holds for symmetric A whenever the spectral radius of gamma*A stays
    below 1. Convergence criterion: ||b - (I - gamma*A) x||_2 <= tol*||b||_2.
    """
    b = np.asarray(b, dtype=np.float64)
    if b.shape != (a.n,):
        raise ArgumentError(f"right-hand side must have length {a.n}")
    if gamma < 0:
        raise ArgumentError("gamma must be non-negative")

    def matvec(x):
        return x - gamma * (a.csr @ x)

    x = np.zeros_like(b)
    r = b.copy()
    p = r.copy()
    rs = float(r @ r)
    limit = tol * np.linalg.norm(b)
    if np.sqrt(rs) <= limit:
        return x
    for _ in range(max_iter):
        ap = matvec(p)
        alpha = rs / float(p @ ap)
        x += alpha * p
        r -= alpha * ap
        rs_next = float(r @ r)
        if np.sqrt(rs_next) <= limit:
            return x
        p = r + (rs_next / rs) * p
        rs = rs_next
    raise ConvergenceError(
        f"conjugate gradient did not reach tol={tol} in {max_iter} iterations",
        residual=float(np.sqrt(rs)),
    )


def gershgorin_gamma(a: SparseMatrix, fraction: float) -> float:
    """Attenuation factor keeping the spectral radius of gamma*A at or
    below ``fraction``, via the maximum absolute row sum bound."""
    if not (0.0 < fraction < 1.0):
        raise ArgumentError("fraction must lie strictly between 0 and 1")
    if a.nnz == 0:
        raise ArgumentError("zero matrix has no meaningful attenuation factor")
    max_sum = float(np.max(row_abs_sums(a)))
    return fraction / max_sum
