"""Kernel-dimension averaging over Folner windows.

For a nonzero ring element a, the averaged squared projections of the basis
deltas onto the truncated kernel,

    (1/|F_n|) * sum over gamma in F_n of ||P_ker delta_gamma||^2,

estimate the squared kernel projection of delta_e for the untruncated
operator.  The finite-n value equals nullity/|F_n|; the per-delta projection
series is computed from a re-orthonormalized kernel basis and cross-checked
against that identity.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .cocycles import Cocycle
from .folner import WindowSpec, folner_set
from .ring import RingElement, ToleranceConfig
from .zerodivisor import build_truncated_operator, kernel_search


def orthonormalize(columns: np.ndarray) -> np.ndarray:
    """Modified Gram-Schmidt with one re-orthogonalization pass over the
    columns; input columns must be linearly independent."""
    out = np.array(columns, dtype=complex, copy=True)
    m, k = out.shape
    for j in range(k):
        v = out[:, j]
        for _ in range(2):
            for i in range(j):
                v = v - (out[:, i].conj() @ v) * out[:, i]
        nrm = float(np.linalg.norm(v))
        if nrm < 1e-14:
            raise ValueError("columns are numerically dependent")
        out[:, j] = v / nrm
    return out


@dataclass(frozen=True)
class DimensionEstimate:
    """One point of the dimension series at window radius n."""

    radius: int
    value: float
    nullity: int
    interior_ratio: float
    window_size: int
    interior_size: int


def vn_dim_estimate(
    a: RingElement,
    sigma: Cocycle,
    n: int,
    tol: ToleranceConfig = ToleranceConfig(),
) -> DimensionEstimate:
    """Averaged kernel projection of the basis deltas at radius n.

    The value nullity/|F_n| is an underestimate of the limiting kernel
    projection; convergence in n carries no rate and is not asserted here.
    """
    report = kernel_search(a, sigma, WindowSpec(n), tol)
    f = folner_set(a.group, n)
    value = report.nullity / len(f)
    if report.basis:
        cols = np.column_stack(
            [
                np.array([complex(b.coefficient(p)) for p in f], dtype=complex)
                for b in report.basis
            ]
        )
        onb = orthonormalize(cols)
        projection_sum = 0.0
        for i in range(len(f)):
            projection_sum += float(np.sum(np.abs(onb[i, :]) ** 2))
        if abs(projection_sum - report.nullity) > 1e-8 * max(1.0, report.nullity):
            raise RuntimeError(
                f"kernel projections sum to {projection_sum}, expected "
                f"{report.nullity}; rank tolerance misclassified a singular value?"
            )
    return DimensionEstimate(
        radius=n,
        value=value,
        nullity=report.nullity,
        interior_ratio=report.interior_size / len(f),
        window_size=len(f),
        interior_size=report.interior_size,
    )


def dimension_series(
    a: RingElement,
    sigma: Cocycle,
    radii: Sequence[int],
    tol: ToleranceConfig = ToleranceConfig(),
) -> list[DimensionEstimate]:
    return [vn_dim_estimate(a, sigma, n, tol) for n in radii]


@dataclass(frozen=True)
class RankNullityReport:
    """Both sides of (dim ker + dim ran)/|F_n| = |int_K(F_n)|/|F_n| plus the
    worst kernel-basis residual as a misclassification telltale."""

    radius: int
    rank: int
    nullity: int
    interior_size: int
    window_size: int
    max_kernel_residual: float

    @property
    def lhs(self) -> float:
        return (self.rank + self.nullity) / self.window_size

    @property
    def rhs(self) -> float:
        return self.interior_size / self.window_size

    @property
    def passed(self) -> bool:
        return self.rank + self.nullity == self.interior_size


def rank_nullity_check(
    a: RingElement,
    sigma: Cocycle,
    n: int,
    tol: ToleranceConfig = ToleranceConfig(),
) -> RankNullityReport:
    report = kernel_search(a, sigma, WindowSpec(n), tol)
    op = build_truncated_operator(a, sigma, WindowSpec(n))
    worst = 0.0
    for b in report.basis:
        vec = np.array([complex(b.coefficient(p)) for p in op.cols], dtype=complex)
        worst = max(worst, float(np.linalg.norm(op.matrix @ vec)))
    return RankNullityReport(
        radius=n,
        rank=report.rank,
        nullity=report.nullity,
        interior_size=report.interior_size,
        window_size=report.window_size,
        max_kernel_residual=worst,
    )
