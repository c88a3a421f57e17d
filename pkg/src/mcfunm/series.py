"""Power-series coefficient streams for the supported matrix functions.

Any attenuation factor is folded into the matrix values beforehand, so the
streams here carry only the base-function coefficients: 1/k! for the
exponential and the all-ones geometric coefficients for the resolvent.
Coefficients are always produced by the term-to-term recurrence, never via
an explicit factorial, so large orders underflow cleanly to zero.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ArgumentError

__all__ = [
    "EXPONENTIAL",
    "RESOLVENT",
    "CoefficientStream",
    "coeff",
    "coeff_ratio",
]

_TAGS = ("exponential", "resolvent")


def _check_tag(tag: str):
    if tag not in _TAGS:
        raise ArgumentError(f"unknown function tag '{tag}', expected one of {_TAGS}")


def _check_order(k: int):
    if k < 0:
        raise ArgumentError("series order must be non-negative")


@dataclass(frozen=True)
class CoefficientStream:
    """Restartable, side-effect-free source of series coefficients.

    Instances are pure value objects; concurrent readers can share them.
    New function tags slot in by extending the tables in this module.
    """

    tag: str

    def __post_init__(self):
        _check_tag(self.tag)

    def coeff(self, k: int) -> float:
        """Coefficient of the k-th power term."""
        _check_order(k)
        if self.tag == "resolvent":
            return 1.0
        value = 1.0
        for i in range(1, k + 1):
            value /= i
        return value

    def ratio(self, k: int) -> float:
        """coeff(k + 1) / coeff(k), used by convergence diagnostics."""
        _check_order(k)
        if self.tag == "resolvent":
            return 1.0
        return 1.0 / (k + 1)

    def prefix(self, count: int) -> np.ndarray:
        """First ``count`` coefficients as a vector."""
        if count <= 0:
            return np.empty(0)
        if self.tag == "resolvent":
            return np.ones(count)
        out = np.empty(count)
        out[0] = 1.0
        if count > 1:
            with np.errstate(under="ignore"):
                out[1:] = np.cumprod(1.0 / np.arange(1.0, count))
        return out


EXPONENTIAL = CoefficientStream("exponential")
RESOLVENT = CoefficientStream("resolvent")


def coeff(tag: str, k: int) -> float:
    return CoefficientStream(tag).coeff(k)


def coeff_ratio(tag: str, k: int) -> float:
    return CoefficientStream(tag).ratio(k)
