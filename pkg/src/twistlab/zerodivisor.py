"""Zero-divisor laboratory: torsion certificates, truncated convolution
operators with SVD kernel extraction, and degree-map filtration machinery.

The truncated operator of a nonzero element a maps the interior window
space V' = span{delta_g : g in int_K(F)} into V = span{delta_g : g in F},
K = supp(a); its column at g is a * delta_g.  A kernel vector is a finitely
supported right cofactor witnessing a as a zero divisor.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm
from typing import Union

import numpy as np

from .cocycles import Cocycle
from .exactphase import PhaseSum
from .folner import WindowSpec, folner_set, interior
from .groups import (
    CYCLIC_PRODUCT,
    FREE_ABELIAN,
    HEISENBERG3,
    GroupDescriptor,
    GroupPoint,
    compose,
    power as point_power,
)
from .ring import RingElement, ToleranceConfig, add, convolve, is_zero, scale


class InfiniteOrderError(ValueError):
    """The point has infinite order, so no torsion construction applies."""


class EmptyInteriorError(ValueError):
    """The window is too small relative to supp(a): no interior columns."""


@dataclass(frozen=True)
class DegreeMap:
    """Surjective homomorphism to the integers, given by integer weights.

    On free abelian groups the degree is weights . coords; on the Heisenberg
    group the two weights apply to the (a, b) coordinates only (the center is
    forced to weight zero by the homomorphism property).  Surjectivity is
    equivalent to the nonzero weights having gcd 1.
    """

    group: GroupDescriptor
    weights: tuple[int, ...]

    def __post_init__(self) -> None:
        weights = tuple(int(w) for w in self.weights)
        object.__setattr__(self, "weights", weights)
        if self.group.kind == CYCLIC_PRODUCT:
            raise ValueError("finite groups admit no degree map")
        expected = self.group.rank if self.group.kind == FREE_ABELIAN else 2
        if len(weights) != expected:
            raise ValueError(f"expected {expected} weights for {self.group.name}")
        nonzero = [abs(w) for w in weights if w != 0]
        if not nonzero or gcd(*nonzero) != 1:
            raise ValueError("weights must have gcd 1 (surjectivity)")

    def degree(self, p: GroupPoint) -> int:
        if p.group != self.group:
            raise ValueError(f"point of {p.group.name} fed to a degree map on {self.group.name}")
        return sum(w * c for w, c in zip(self.weights, p.coords))


def element_order(g: GroupPoint) -> int:
    """Minimal n >= 1 with g^n = e; raises InfiniteOrderError outside
    torsion coordinates."""
    if g.is_identity:
        return 1
    if g.group.kind != CYCLIC_PRODUCT:
        raise InfiniteOrderError(f"{g!r} has infinite order")
    n = 1
    for c, o in zip(g.coords, g.group.orders):
        if c != 0:
            n = lcm(n, o // gcd(o, c))
    return n


def torsion_zero_divisor(
    gamma: GroupPoint, sigma: Cocycle
) -> tuple[RingElement, RingElement]:
    """Zero-divisor factor pair built from a torsion point.

    With n the order of gamma and alpha the product of sigma(gamma, gamma^k)
    for k = 1..n-1, set a = alpha^(-1/n) delta_gamma (principal root).  Then
    a^n = delta_e and

        (delta_e + a + a^2 + ... + a^(n-1)) * (a - delta_e) = 0

    by telescoping.  Returns (left, right) = (power sum, a - delta_e); on
    cocycle families with exact turns the product cancels to literal zero.
    """
    if gamma.is_identity:
        raise ValueError("need a nontrivial torsion point")
    n = element_order(gamma)
    group = gamma.group
    identity = group.identity()

    if sigma.exact:
        alpha = PhaseSum.one()
        for k in range(1, n):
            alpha = alpha * PhaseSum.unit(sigma.turn(gamma, point_power(gamma, k)))
        root: Union[complex, PhaseSum] = alpha.principal_power(Fraction(-1, n))
        one: Union[complex, PhaseSum] = PhaseSum.one()
    else:
        alpha_c = 1.0 + 0.0j
        for k in range(1, n):
            alpha_c *= sigma.value(gamma, point_power(gamma, k))
        root = cmath.exp(-cmath.log(alpha_c) / n)
        one = 1.0 + 0.0j

    a = RingElement(group, {gamma: root})
    left = RingElement(group, {identity: one})
    pw = a
    for _ in range(n - 1):
        left = add(left, pw)
        pw = convolve(pw, a, sigma)
    right = a - RingElement(group, {identity: one})
    return left, right


@dataclass
class TruncatedOperator:
    """Matrix of the convolution operator from the interior window space into
    the window space, with the index maps that label rows and columns."""

    matrix: np.ndarray
    rows: tuple[GroupPoint, ...]
    cols: tuple[GroupPoint, ...]
    element: RingElement

    @property
    def row_index(self) -> dict[GroupPoint, int]:
        return {p: i for i, p in enumerate(self.rows)}

    @property
    def col_index(self) -> dict[GroupPoint, int]:
        return {p: i for i, p in enumerate(self.cols)}


def build_truncated_operator(
    a: RingElement, sigma: Cocycle, window: WindowSpec
) -> TruncatedOperator:
    if not a.terms:
        raise ValueError("element must be nonzero")
    f = folner_set(a.group, window.radius)
    cols = interior(a.support(), f)
    if not cols:
        raise EmptyInteriorError(
            f"supp(a) of {len(a.terms)} points leaves no interior in the "
            f"radius-{window.radius} window"
        )
    rows = tuple(sorted(f, key=lambda p: p.coords))
    row_of = {p: i for i, p in enumerate(rows)}
    matrix = np.zeros((len(rows), len(cols)), dtype=complex)
    for j, g in enumerate(cols):
        # column j holds a * delta_g restricted to the window
        for g1, c1 in a.terms.items():
            target = compose(g1, g)
            matrix[row_of[target], j] += complex(sigma.scalar(g1, g) * c1)
    return TruncatedOperator(matrix=matrix, rows=rows, cols=cols, element=a)


@dataclass
class KernelReport:
    """Numerical kernel of a truncated operator: SVD rank split and the
    kernel basis mapped back to ring elements on the interior points."""

    singular_values: tuple[float, ...]
    rank: int
    nullity: int
    tolerance: float
    basis: tuple[RingElement, ...]
    window: WindowSpec
    interior_size: int
    window_size: int

    def to_dict(self) -> dict:
        """Structured document: singular values descending, rank split, and
        the kernel basis in the ring-element record format (an empty basis
        stays an explicit empty array)."""
        return {
            "singular_values": list(self.singular_values),
            "rank": self.rank,
            "nullity": self.nullity,
            "tolerance": self.tolerance,
            "radius": self.window.radius,
            "window_size": self.window_size,
            "interior_size": self.interior_size,
            "kernel_basis": [b.to_records() for b in self.basis],
        }


def kernel_search(
    a: RingElement,
    sigma: Cocycle,
    window: WindowSpec,
    tol: ToleranceConfig = ToleranceConfig(),
) -> KernelReport:
    """SVD kernel search on the truncated operator.

    Numerical rank counts singular values above rank_tol_factor * sigma_max.
    An empty basis certifies that no zero-divisor cofactor is supported in
    this window; it says nothing about larger windows.
    """
    op = build_truncated_operator(a, sigma, window)
    _, svals, vh = np.linalg.svd(op.matrix)
    smax = float(svals[0]) if len(svals) else 0.0
    threshold = tol.rank_tol_factor * smax
    rank = int(np.sum(svals > threshold))
    ncols = op.matrix.shape[1]
    nullity = ncols - rank
    basis = []
    for row in vh[rank:]:
        vec = row.conj()
        basis.append(
            RingElement(a.group, {p: complex(vec[i]) for i, p in enumerate(op.cols)})
        )
    return KernelReport(
        singular_values=tuple(float(s) for s in svals),
        rank=rank,
        nullity=nullity,
        tolerance=threshold,
        basis=tuple(basis),
        window=window,
        interior_size=ncols,
        window_size=op.matrix.shape[0],
    )


@dataclass
class ZeroDivisorSearch:
    """Outcome of the escalating window search for a right cofactor."""

    found: bool
    cofactor: RingElement | None
    radius_found: int | None
    nullities: tuple[tuple[int, int], ...]  # (radius, nullity) pairs
    report: KernelReport | None  # kernel report at the decisive radius

    @property
    def message(self) -> str:
        if self.found:
            return f"cofactor found at radius {self.radius_found}"
        return "no cofactor within window"


def search_zero_divisor(
    a: RingElement,
    sigma: Cocycle,
    max_radius: int,
    tol: ToleranceConfig = ToleranceConfig(),
) -> ZeroDivisorSearch:
    """Try windows of radius 1..max_radius, stopping at the first nonzero
    nullity.  A trivial kernel at max_radius is a bounded-window statement,
    never a proof of absence."""
    nullities = []
    last_report = None
    for n in range(1, max_radius + 1):
        try:
            report = kernel_search(a, sigma, WindowSpec(n), tol)
        except EmptyInteriorError:
            continue
        last_report = report
        nullities.append((n, report.nullity))
        if report.nullity > 0:
            return ZeroDivisorSearch(
                found=True,
                cofactor=report.basis[0],
                radius_found=n,
                nullities=tuple(nullities),
                report=report,
            )
    return ZeroDivisorSearch(
        found=False,
        cofactor=None,
        radius_found=None,
        nullities=tuple(nullities),
        report=last_report,
    )


def homogeneous_decompose(a: RingElement, phi: DegreeMap) -> dict[int, RingElement]:
    """Split a into homogeneous parts indexed by degree; the parts sum back
    to a exactly."""
    buckets: dict[int, dict[GroupPoint, complex]] = {}
    for p, c in a.terms.items():
        buckets.setdefault(phi.degree(p), {})[p] = c
    return {
        deg: RingElement(a.group, terms) for deg, terms in sorted(buckets.items())
    }


@dataclass
class LeadingStepReport:
    """Check of the minimal-degree factorization a*b = a'*b' + R."""

    degree_a: int
    degree_b: int
    leading_deviation: float
    leading_matches: bool
    higher_parts_ok: bool
    supports_disjoint: bool
    min_product_nonzero: bool
    product_nonzero: bool

    @property
    def implication_held(self) -> bool:
        """Did (a'*b' != 0) imply (a*b != 0) on this instance?"""
        return (not self.min_product_nonzero) or self.product_nonzero

    @property
    def passed(self) -> bool:
        return self.leading_matches and self.higher_parts_ok and self.implication_held


def verify_leading_step(
    a: RingElement,
    b: RingElement,
    sigma: Cocycle,
    phi: DegreeMap,
    tol: float = 1e-10,
) -> LeadingStepReport:
    """Verify that the minimal-degree homogeneous parts a', b' carry the
    lowest-degree part of the product: the degree-(k+l) part of a*b equals
    a'*b' and every other part sits in strictly higher degree."""
    if not a.terms or not b.terms:
        raise ValueError("factors must be nonzero")
    parts_a = homogeneous_decompose(a, phi)
    parts_b = homogeneous_decompose(b, phi)
    k = min(parts_a)
    l = min(parts_b)
    a_min = parts_a[k]
    b_min = parts_b[l]
    lead = convolve(a_min, b_min, sigma)
    product = convolve(a, b, sigma)
    parts_prod = homogeneous_decompose(product, phi)
    observed = parts_prod.get(k + l, RingElement.zero(a.group))
    deviation = (observed - lead).max_abs()
    higher_ok = all(deg >= k + l for deg in parts_prod)
    remainder_support = {
        p for deg, part in parts_prod.items() if deg != k + l for p in part.support()
    }
    disjoint = not (set(lead.support()) & remainder_support)
    return LeadingStepReport(
        degree_a=k,
        degree_b=l,
        leading_deviation=deviation,
        leading_matches=deviation <= tol,
        higher_parts_ok=higher_ok,
        supports_disjoint=disjoint,
        min_product_nonzero=not is_zero(lead, tol),
        product_nonzero=not is_zero(product, tol),
    )


def degree_nonneg(a: RingElement, phi: DegreeMap | None = None) -> int:
    """Polynomial-style degree of a non-negative element: the maximum
    coordinate sum over the support (or phi-degree when a map is supplied);
    the zero element has degree -1.

    Every support point must have all coordinates >= 0 (the monomial basis
    u_1^{i_1} ... u_d^{i_d} with nonnegative exponents).
    """
    if a.group.kind != FREE_ABELIAN:
        raise ValueError("degree is defined on free abelian groups")
    for p in a.terms:
        if any(c < 0 for c in p.coords):
            raise ValueError(f"negative support coordinate at {p.coords}")
    if not a.terms:
        return -1
    if phi is None:
        return max(sum(p.coords) for p in a.terms)
    return max(phi.degree(p) for p in a.terms)


def commutator_phase(sigma: Cocycle, i: int, j: int) -> complex:
    """z_{i,j} = sigma(e_i, e_j) * conj(sigma(e_j, e_i)), the phase in
    u_i u_j = z_{i,j} u_j u_i; verified against the convolution product."""
    group = sigma.group
    if group.kind != FREE_ABELIAN:
        raise ValueError("commutator phases are defined on free abelian groups")
    d = group.rank
    if not (1 <= i <= d and 1 <= j <= d):
        raise IndexError(f"indices must be in 1..{d}")
    ei = GroupPoint(group, tuple(1 if t == i - 1 else 0 for t in range(d)))
    ej = GroupPoint(group, tuple(1 if t == j - 1 else 0 for t in range(d)))
    z = sigma.value(ei, ej) * sigma.value(ej, ei).conjugate()
    lhs = convolve(RingElement.delta(group, ei), RingElement.delta(group, ej), sigma)
    rhs = scale(
        convolve(RingElement.delta(group, ej), RingElement.delta(group, ei), sigma), z
    )
    if not is_zero(lhs - rhs, 1e-12):
        raise ArithmeticError(
            f"commutation relation violated at indices ({i},{j}): "
            f"residual {(lhs - rhs).max_abs():.3e}"
        )
    return z
