"""Supported discrete groups and their elements.

Three families are implemented: free abelian lattices Z^d, finite products
of cyclic groups, and the integer Heisenberg group on triples (a, b, c).
All coordinates are plain Python integers, so group arithmetic is exact.
"""

from __future__ import annotations

from dataclasses import dataclass

FREE_ABELIAN = "free_abelian"
CYCLIC_PRODUCT = "cyclic_product"
HEISENBERG3 = "heisenberg3"

_KINDS = (FREE_ABELIAN, CYCLIC_PRODUCT, HEISENBERG3)


class GroupMismatchError(ValueError):
    """Operands belong to different groups."""


@dataclass(frozen=True)
class GroupDescriptor:
    """Identifies one of the supported groups.

    ``rank`` is used by free abelian groups, ``orders`` by cyclic products;
    the Heisenberg group needs no parameters (elements are integer triples).
    """

    kind: str
    rank: int = 0
    orders: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        if self.kind == FREE_ABELIAN:
            if self.rank < 1:
                raise ValueError("free abelian rank must be >= 1")
        elif self.kind == CYCLIC_PRODUCT:
            orders = tuple(int(o) for o in self.orders)
            if not orders or any(o < 2 for o in orders):
                raise ValueError("cyclic product needs orders, all >= 2")
            object.__setattr__(self, "orders", orders)
        elif self.kind == HEISENBERG3:
            pass
        else:
            raise ValueError(f"unknown group kind {self.kind!r}")

    @property
    def dim(self) -> int:
        """Length of the coordinate tuples of this group's elements."""
        if self.kind == FREE_ABELIAN:
            return self.rank
        if self.kind == CYCLIC_PRODUCT:
            return len(self.orders)
        return 3

    @property
    def name(self) -> str:
        if self.kind == FREE_ABELIAN:
            return f"Z^{self.rank}"
        if self.kind == CYCLIC_PRODUCT:
            return " x ".join(f"Z/{o}" for o in self.orders)
        return "H3(Z)"

    def identity(self) -> GroupPoint:
        return GroupPoint(self, (0,) * self.dim)

    def point(self, *coords: int) -> GroupPoint:
        return GroupPoint(self, tuple(coords))

    def to_dict(self) -> dict:
        if self.kind == FREE_ABELIAN:
            params: dict = {"rank": self.rank}
        elif self.kind == CYCLIC_PRODUCT:
            params = {"orders": list(self.orders)}
        else:
            params = {}
        return {"kind": self.kind, "params": params}

    @classmethod
    def from_dict(cls, doc: dict) -> GroupDescriptor:
        kind = doc.get("kind")
        params = doc.get("params", {})
        if kind == FREE_ABELIAN:
            return cls(FREE_ABELIAN, rank=int(params["rank"]))
        if kind == CYCLIC_PRODUCT:
            return cls(CYCLIC_PRODUCT, orders=tuple(int(o) for o in params["orders"]))
        if kind == HEISENBERG3:
            return cls(HEISENBERG3)
        raise ValueError(f"unknown group kind {kind!r}")


def free_abelian(rank: int) -> GroupDescriptor:
    return GroupDescriptor(FREE_ABELIAN, rank=rank)


def cyclic_product(*orders: int) -> GroupDescriptor:
    return GroupDescriptor(CYCLIC_PRODUCT, orders=tuple(orders))


def heisenberg3() -> GroupDescriptor:
    return GroupDescriptor(HEISENBERG3)


@dataclass(frozen=True)
class GroupPoint:
    """An element of a supported group; cyclic coordinates are kept canonical
    (reduced into [0, order))."""

    group: GroupDescriptor
    coords: tuple[int, ...]

    def __post_init__(self) -> None:
        coords = tuple(int(c) for c in self.coords)
        if len(coords) != self.group.dim:
            raise ValueError(
                f"expected {self.group.dim} coordinates for {self.group.name}, got {len(coords)}"
            )
        if self.group.kind == CYCLIC_PRODUCT:
            coords = tuple(c % o for c, o in zip(coords, self.group.orders))
        object.__setattr__(self, "coords", coords)

    @property
    def is_identity(self) -> bool:
        return all(c == 0 for c in self.coords)

    def __mul__(self, other: GroupPoint) -> GroupPoint:
        return compose(self, other)

    def __repr__(self) -> str:
        return f"{self.group.name}{self.coords}"


def _check_same_group(g: GroupPoint, h: GroupPoint) -> None:
    if g.group != h.group:
        raise GroupMismatchError(f"mixed groups: {g.group.name} and {h.group.name}")


def compose(g: GroupPoint, h: GroupPoint) -> GroupPoint:
    """Group product g*h.

    Free abelian and cyclic products add coordinatewise (cyclic coordinates
    reduce modulo their orders); the Heisenberg product is
    (a,b,c)(a',b',c') = (a+a', b+b', c+c'+a*b').
    """
    _check_same_group(g, h)
    grp = g.group
    if grp.kind == HEISENBERG3:
        a, b, c = g.coords
        ap, bp, cp = h.coords
        return GroupPoint(grp, (a + ap, b + bp, c + cp + a * bp))
    return GroupPoint(grp, tuple(x + y for x, y in zip(g.coords, h.coords)))


def inverse(g: GroupPoint) -> GroupPoint:
    grp = g.group
    if grp.kind == HEISENBERG3:
        a, b, c = g.coords
        return GroupPoint(grp, (-a, -b, a * b - c))
    return GroupPoint(grp, tuple(-x for x in g.coords))


def power(g: GroupPoint, n: int) -> GroupPoint:
    """n-fold product of g with itself; n = 0 gives the identity, n < 0 uses
    the inverse."""
    if n < 0:
        return power(inverse(g), -n)
    acc = g.group.identity()
    for _ in range(n):
        acc = compose(acc, g)
    return acc
