"""Folner windows for the supported groups, interior sets, and the
window-shrinkage diagnostic.

Window rules: centered boxes {-n..n}^d on free abelian groups, the whole
group on cyclic products, and {-n..n} x {-n..n} x {-n^2..n^2} on the
Heisenberg group (quadratic range on the center coordinate keeps the
symmetric-difference ratio vanishing under its polynomial growth).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Sequence

from .groups import (
    CYCLIC_PRODUCT,
    FREE_ABELIAN,
    GroupDescriptor,
    GroupPoint,
    compose,
)
from .ring import RingElement


@dataclass(frozen=True)
class WindowSpec:
    """Truncation window: the group's standard Folner set at this radius."""

    radius: int

    def __post_init__(self) -> None:
        if self.radius < 1:
            raise ValueError("window radius must be >= 1")


def folner_set(group: GroupDescriptor, n: int) -> tuple[GroupPoint, ...]:
    """The n-th Folner set, sorted lexicographically by coordinates."""
    if n < 1:
        raise ValueError("radius must be >= 1")
    if group.kind == FREE_ABELIAN:
        ranges = [range(-n, n + 1)] * group.rank
    elif group.kind == CYCLIC_PRODUCT:
        ranges = [range(o) for o in group.orders]
    else:
        ranges = [range(-n, n + 1), range(-n, n + 1), range(-n * n, n * n + 1)]
    return tuple(GroupPoint(group, coords) for coords in itertools.product(*ranges))


@dataclass(frozen=True)
class FolnerSequence:
    group: GroupDescriptor

    def set(self, n: int) -> tuple[GroupPoint, ...]:
        return folner_set(self.group, n)

    def symmetric_difference_ratio(self, n: int, gamma: GroupPoint) -> float:
        """|F_n symdiff F_n*gamma| / |F_n| for the right translate."""
        f = set(self.set(n))
        translated = {compose(p, gamma) for p in f}
        return len(f ^ translated) / len(f)


def interior(K: Iterable[GroupPoint], F: Iterable[GroupPoint]) -> tuple[GroupPoint, ...]:
    """int_K(F) = points of F that remain in F under left multiplication by
    every element of K."""
    k_list = list(K)
    if not k_list:
        raise ValueError("K must be nonempty")
    f_set = set(F)
    inner = [p for p in f_set if all(compose(k, p) in f_set for k in k_list)]
    inner.sort(key=lambda p: p.coords)
    return tuple(inner)


def folner_ratio_diagnostic(a: RingElement, radii: Sequence[int]) -> list[float]:
    """|int_K(F_n)| / |F_n| for K = supp(a), one value per radius."""
    if not a.terms:
        raise ValueError("element must be nonzero")
    k = a.support()
    out = []
    for n in radii:
        f = folner_set(a.group, n)
        out.append(len(interior(k, f)) / len(f))
    return out
