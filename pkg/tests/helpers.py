"""Shared generators and independent oracles for the test suite."""

from __future__ import annotations

import math
from fractions import Fraction

import numpy as np

from twistlab import (
    BicharacterCocycle,
    CyclicRootCocycle,
    DegreeMap,
    GroupDescriptor,
    GroupPoint,
    RingElement,
    TimeFrequencyLatticeCocycle,
)
from twistlab.groups import CYCLIC_PRODUCT, FREE_ABELIAN


def random_coefficient(rng) -> complex:
    """Random phase with modulus in [0.5, 1.5] (bounded away from zero)."""
    r = 0.5 + rng.random()
    phi = 2.0 * math.pi * rng.random()
    return r * complex(math.cos(phi), math.sin(phi))


def random_element(
    group: GroupDescriptor,
    rng,
    max_support: int = 4,
    coord_range: int = 3,
    nonneg: bool = False,
) -> RingElement:
    """Nonzero element with at most max_support distinct support points."""
    size = int(rng.integers(1, max_support + 1))
    terms: dict[GroupPoint, complex] = {}
    while len(terms) < size:
        if group.kind == CYCLIC_PRODUCT:
            coords = tuple(int(rng.integers(0, o)) for o in group.orders)
        elif nonneg:
            coords = tuple(int(rng.integers(0, coord_range + 1)) for _ in range(group.dim))
        else:
            coords = tuple(
                int(rng.integers(-coord_range, coord_range + 1)) for _ in range(group.dim)
            )
        terms[GroupPoint(group, coords)] = random_coefficient(rng)
    return RingElement(group, terms)


def random_bicharacter(group: GroupDescriptor, rng) -> BicharacterCocycle:
    d = group.rank
    theta = tuple(tuple(float(rng.uniform(-1.0, 1.0)) for _ in range(d)) for _ in range(d))
    return BicharacterCocycle(group, theta)


def random_tf_lattice(group: GroupDescriptor, rng, d: int = 1) -> TimeFrequencyLatticeCocycle:
    k = group.rank
    basis = tuple(tuple(float(rng.uniform(-2.0, 2.0)) for _ in range(k)) for _ in range(2 * d))
    return TimeFrequencyLatticeCocycle(group, basis)


def random_cyclic_root(group: GroupDescriptor, rng) -> CyclicRootCocycle:
    """Random consistent turn table: entry (i, j) is a multiple of
    1/gcd(order_i, order_j), which passes the reduction-consistency check."""
    orders = group.orders
    k = len(orders)
    table = []
    for i in range(k):
        row = []
        for j in range(k):
            g = math.gcd(orders[i], orders[j])
            row.append(Fraction(int(rng.integers(0, g)), g))
        table.append(tuple(row))
    return CyclicRootCocycle(group, tuple(table))


def random_degree_map(group: GroupDescriptor, rng, bound: int = 3) -> DegreeMap:
    size = group.rank if group.kind == FREE_ABELIAN else 2
    while True:
        weights = tuple(int(rng.integers(-bound, bound + 1)) for _ in range(size))
        nonzero = [abs(w) for w in weights if w != 0]
        if nonzero and math.gcd(*nonzero) == 1:
            return DegreeMap(group, weights)


def ambiguity_quadrature(x: float, xi: float, half_width: float = 8.0, step: float = 1e-3) -> complex:
    """Independent trapezoid quadrature of <g, pi(x, xi) g> for the unit
    Gaussian: integral of 2^(1/2) exp(-pi t^2 - pi (t-x)^2) exp(-2*pi*i*xi*t)."""
    n = int(round(2 * half_width / step)) + 1
    t = -half_width + step * np.arange(n)
    integrand = (
        math.sqrt(2.0)
        * np.exp(-math.pi * t * t - math.pi * (t - x) ** 2)
        * np.exp(-2j * math.pi * xi * t)
    )
    total = np.sum(integrand) - 0.5 * (integrand[0] + integrand[-1])
    return complex(step * total)


def convolve_bruteforce(a: RingElement, b: RingElement, sigma) -> dict[tuple, complex]:
    """Direct evaluation of (a*b)(g') = sum_g sigma(g, g^-1 g') a(g) b(g^-1 g'),
    independent of the library's pairwise accumulation."""
    from twistlab.groups import compose, inverse

    out: dict[tuple, complex] = {}
    targets = set()
    for g1 in a.support():
        for g2 in b.support():
            targets.add(compose(g1, g2))
    for gp in targets:
        total = 0.0 + 0.0j
        for g in a.support():
            rest = compose(inverse(g), gp)
            cb = b.coefficient(rest)
            if cb == 0:
                continue
            total += sigma.value(g, rest) * complex(a.coefficient(g)) * complex(cb)
        out[gp.coords] = total
    return out
