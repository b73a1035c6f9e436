"""Unit-modulus 2-cocycles on the supported groups.

Four closed-form families: the trivial cocycle, bicharacters
exp(2*pi*i * x^T Theta y) on free abelian groups, the time-frequency
lattice pullback exp(-2*pi*i * (Bm)_x . (Bn)_xi), and exact root-of-unity
bicharacters on cyclic products (rational turn tables, evaluated exactly).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, ClassVar, Iterable, Sequence, Union

from .exactphase import PhaseSum
from .groups import (
    CYCLIC_PRODUCT,
    FREE_ABELIAN,
    GroupDescriptor,
    GroupMismatchError,
    GroupPoint,
    compose,
)

_TWO_PI = 2.0 * math.pi


def _cis(turns: float) -> complex:
    """exp(2*pi*i*turns)."""
    return cmath.exp(complex(0.0, _TWO_PI * turns))


def _matrix(rows: Iterable[Iterable[float]]) -> tuple[tuple[float, ...], ...]:
    return tuple(tuple(float(x) for x in row) for row in rows)


class Cocycle:
    """Base class; subclasses provide ``value`` and, when the family admits
    exact rational turns, ``turn``.

    ``scalar`` returns a :class:`PhaseSum` on exact families and a complex
    number otherwise; ring operations use it so exact inputs stay exact.
    """

    exact: ClassVar[bool] = False

    def value(self, g: GroupPoint, h: GroupPoint) -> complex:
        raise NotImplementedError

    def turn(self, g: GroupPoint, h: GroupPoint) -> Fraction:
        raise NotImplementedError(f"{type(self).__name__} has no exact turn form")

    def scalar(self, g: GroupPoint, h: GroupPoint) -> Union[complex, PhaseSum]:
        if self.exact:
            return PhaseSum.unit(self.turn(g, h))
        return self.value(g, h)

    def check_arguments(self, g: GroupPoint, h: GroupPoint) -> None:
        if g.group != self.group or h.group != self.group:
            raise GroupMismatchError(
                f"cocycle on {self.group.name} applied to points of "
                f"{g.group.name}/{h.group.name}"
            )

    def to_dict(self) -> dict:
        raise NotImplementedError


@dataclass(frozen=True)
class TrivialCocycle(Cocycle):
    group: GroupDescriptor
    exact: ClassVar[bool] = True

    def value(self, g: GroupPoint, h: GroupPoint) -> complex:
        self.check_arguments(g, h)
        return 1.0 + 0.0j

    def turn(self, g: GroupPoint, h: GroupPoint) -> Fraction:
        self.check_arguments(g, h)
        return Fraction(0)

    def to_dict(self) -> dict:
        return {"family": "trivial", "params": {}}


@dataclass(frozen=True)
class BicharacterCocycle(Cocycle):
    """sigma(x, y) = exp(2*pi*i * x^T Theta y) on a free abelian group."""

    group: GroupDescriptor
    theta: tuple[tuple[float, ...], ...]

    def __post_init__(self) -> None:
        if self.group.kind != FREE_ABELIAN:
            raise ValueError("bicharacter cocycles need a free abelian group")
        d = self.group.rank
        theta = _matrix(self.theta)
        if len(theta) != d or any(len(row) != d for row in theta):
            raise ValueError(f"theta must be {d}x{d}")
        object.__setattr__(self, "theta", theta)

    def value(self, g: GroupPoint, h: GroupPoint) -> complex:
        self.check_arguments(g, h)
        s = 0.0
        for xi, row in zip(g.coords, self.theta):
            for yj, t in zip(h.coords, row):
                s += xi * t * yj
        return _cis(s)

    def to_dict(self) -> dict:
        return {"family": "bicharacter", "params": {"theta": [list(r) for r in self.theta]}}


@dataclass(frozen=True)
class TimeFrequencyLatticeCocycle(Cocycle):
    """Pullback of the time-frequency composition phase to lattice coordinates.

    ``basis`` is a 2d x k matrix B whose columns span the lattice in
    R^d x R^d; sigma(m, n) = exp(-2*pi*i * (Bm)_x . (Bn)_xi) where _x are the
    first d rows and _xi the last d.
    """

    group: GroupDescriptor
    basis: tuple[tuple[float, ...], ...]

    def __post_init__(self) -> None:
        if self.group.kind != FREE_ABELIAN:
            raise ValueError("time-frequency lattice cocycles need a free abelian group")
        basis = _matrix(self.basis)
        if len(basis) % 2 != 0 or not basis:
            raise ValueError("basis must have an even number of rows (2d)")
        k = self.group.rank
        if any(len(row) != k for row in basis):
            raise ValueError(f"basis rows must have length {k}")
        object.__setattr__(self, "basis", basis)

    def _apply(self, coords: tuple[int, ...]) -> list[float]:
        return [sum(b * c for b, c in zip(row, coords)) for row in self.basis]

    def value(self, g: GroupPoint, h: GroupPoint) -> complex:
        self.check_arguments(g, h)
        d = len(self.basis) // 2
        u = self._apply(g.coords)
        v = self._apply(h.coords)
        s = -sum(u[i] * v[d + i] for i in range(d))
        return _cis(s)

    def to_dict(self) -> dict:
        return {
            "family": "time_frequency_lattice",
            "params": {"basis": [list(r) for r in self.basis]},
        }


@dataclass(frozen=True)
class CyclicRootCocycle(Cocycle):
    """Root-of-unity bicharacter on a cyclic product, given by a table Q of
    rational turn fractions: sigma(g, h) = exp(2*pi*i * g^T Q h).

    Well-definedness on canonical representatives requires order_i * Q[i][j]
    and Q[i][j] * order_j to be integers; this is checked at construction.
    """

    group: GroupDescriptor
    turns: tuple[tuple[Fraction, ...], ...]
    exact: ClassVar[bool] = True

    def __post_init__(self) -> None:
        if self.group.kind != CYCLIC_PRODUCT:
            raise ValueError("cyclic root cocycles need a cyclic product group")
        orders = self.group.orders
        k = len(orders)
        table = tuple(tuple(Fraction(q) for q in row) for row in self.turns)
        if len(table) != k or any(len(row) != k for row in table):
            raise ValueError(f"turn table must be {k}x{k}")
        for i, row in enumerate(table):
            for j, q in enumerate(row):
                if (q * orders[i]).denominator != 1 or (q * orders[j]).denominator != 1:
                    raise ValueError(
                        f"turn table entry ({i},{j}) = {q} is not consistent "
                        f"under reduction modulo orders {orders[i]},{orders[j]}"
                    )
        object.__setattr__(self, "turns", table)

    def turn(self, g: GroupPoint, h: GroupPoint) -> Fraction:
        self.check_arguments(g, h)
        s = Fraction(0)
        for gi, row in zip(g.coords, self.turns):
            for hj, q in zip(h.coords, row):
                s += gi * q * hj
        return s % 1

    def value(self, g: GroupPoint, h: GroupPoint) -> complex:
        return complex(PhaseSum.unit(self.turn(g, h)))

    def to_dict(self) -> dict:
        return {
            "family": "cyclic_root",
            "params": {"turns": [[str(q) for q in row] for row in self.turns]},
        }


def cocycle_eval(sigma: Cocycle, g: GroupPoint, h: GroupPoint) -> complex:
    """Closed-form value sigma(g, h); unit modulus up to rounding."""
    return sigma.value(g, h)


def cocycle_from_dict(group: GroupDescriptor, doc: dict) -> Cocycle:
    family = doc.get("family")
    params = doc.get("params", {})
    if family == "trivial":
        return TrivialCocycle(group)
    if family == "bicharacter":
        return BicharacterCocycle(group, _matrix(params["theta"]))
    if family == "time_frequency_lattice":
        return TimeFrequencyLatticeCocycle(group, _matrix(params["basis"]))
    if family == "cyclic_root":
        table = tuple(tuple(Fraction(q) for q in row) for row in params["turns"])
        return CyclicRootCocycle(group, table)
    raise ValueError(f"unknown cocycle family {family!r}")


def pair_to_dict(group: GroupDescriptor, sigma: Cocycle) -> dict:
    return {"group": group.to_dict(), "cocycle": sigma.to_dict()}


def pair_from_dict(doc: dict) -> tuple[GroupDescriptor, Cocycle]:
    group = GroupDescriptor.from_dict(doc["group"])
    return group, cocycle_from_dict(group, doc["cocycle"])


CocycleLike = Union[Cocycle, Callable[[GroupPoint, GroupPoint], complex]]


@dataclass(frozen=True)
class CocycleCheckReport:
    """Result of sampling the cocycle identity
    sigma(x,y) sigma(xy,z) = sigma(x,yz) sigma(y,z)."""

    samples: int
    max_deviation: float
    identity_one: bool
    tolerance: float
    worst_triple: tuple[tuple[int, ...], ...] | None

    @property
    def passed(self) -> bool:
        return self.identity_one and self.max_deviation <= self.tolerance


def cocycle_check(
    sigma: CocycleLike,
    triples: Sequence[tuple[GroupPoint, GroupPoint, GroupPoint]],
    tol: float = 1e-10,
) -> CocycleCheckReport:
    """Evaluate the 2-cocycle identity on the given point triples.

    Accepts a family :class:`Cocycle` or any callable (g, h) -> complex, so
    corrupted candidate maps can be diagnosed too.  A failing map yields a
    failing report, never an exception.
    """
    if not triples:
        raise ValueError("need at least one sample triple")
    val = sigma.value if isinstance(sigma, Cocycle) else sigma
    worst = 0.0
    worst_triple = None
    for x, y, z in triples:
        lhs = val(x, y) * val(compose(x, y), z)
        rhs = val(x, compose(y, z)) * val(y, z)
        dev = abs(lhs - rhs)
        if dev > worst:
            worst = dev
            worst_triple = (x.coords, y.coords, z.coords)
    e = triples[0][0].group.identity()
    identity_one = abs(val(e, e) - 1.0) <= 1e-12
    return CocycleCheckReport(
        samples=len(triples),
        max_deviation=worst,
        identity_one=identity_one,
        tolerance=tol,
        worst_triple=worst_triple,
    )


def _random_coord_block(group: GroupDescriptor, count: int, rng, coord_range: int):
    if group.kind == CYCLIC_PRODUCT:
        cols = [rng.integers(0, o, size=count) for o in group.orders]
    else:
        cols = [
            rng.integers(-coord_range, coord_range + 1, size=count)
            for _ in range(group.dim)
        ]
    return [tuple(int(col[i]) for col in cols) for i in range(count)]


def random_point(group: GroupDescriptor, rng, coord_range: int = 6) -> GroupPoint:
    """A pseudo-random element with coordinates in [-coord_range, coord_range]
    (cyclic coordinates are drawn inside their order)."""
    return GroupPoint(group, _random_coord_block(group, 1, rng, coord_range)[0])


def random_triples(
    group: GroupDescriptor, count: int, rng, coord_range: int = 6
) -> list[tuple[GroupPoint, GroupPoint, GroupPoint]]:
    coords = _random_coord_block(group, 3 * count, rng, coord_range)
    points = [GroupPoint(group, c) for c in coords]
    return [
        (points[3 * i], points[3 * i + 1], points[3 * i + 2]) for i in range(count)
    ]
