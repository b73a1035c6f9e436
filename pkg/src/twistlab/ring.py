"""Finitely supported elements of a twisted group ring.

The product is the sigma-twisted convolution

    (a * b)(g') = sum over g of sigma(g, g^-1 g') a(g) b(g^-1 g'),

computed pairwise over supports via delta_g * delta_h = sigma(g,h) delta_{gh}.
Coefficients are complex doubles, or :class:`PhaseSum` values on the exact
path used by root-of-unity constructions; exact coefficients survive
convolution whenever the cocycle has exact turns.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Union

from .cocycles import Cocycle
from .exactphase import PhaseSum
from .groups import GroupDescriptor, GroupMismatchError, GroupPoint, compose

Coefficient = Union[complex, PhaseSum]


@dataclass(frozen=True)
class ToleranceConfig:
    """Numerical thresholds: ``zero_tol`` declares coefficients zero,
    ``rank_tol_factor`` scales sigma_max into the numerical-rank cutoff."""

    zero_tol: float = 1e-10
    rank_tol_factor: float = 1e-8

    def __post_init__(self) -> None:
        if self.zero_tol < 0 or self.rank_tol_factor < 0:
            raise ValueError("tolerances must be nonnegative")


def _is_exact_zero(c: Coefficient) -> bool:
    if isinstance(c, PhaseSum):
        return c.is_zero
    return c == 0


class RingElement:
    """Immutable finitely supported map GroupPoint -> coefficient.

    Exact zeros are pruned at construction and terms are kept in
    lexicographic coordinate order, so iteration (and hence every derived
    float sum) is deterministic.
    """

    __slots__ = ("group", "terms")

    def __init__(self, group: GroupDescriptor, terms: Mapping[GroupPoint, Coefficient]):
        clean: dict[GroupPoint, Coefficient] = {}
        for point in sorted(terms, key=lambda p: p.coords):
            if point.group != group:
                raise GroupMismatchError(
                    f"term {point!r} does not belong to {group.name}"
                )
            c = terms[point]
            if _is_exact_zero(c):
                continue
            clean[point] = c if isinstance(c, PhaseSum) else complex(c)
        object.__setattr__(self, "group", group)
        object.__setattr__(self, "terms", clean)

    def __setattr__(self, name, value):
        raise AttributeError("RingElement is immutable")

    @classmethod
    def zero(cls, group: GroupDescriptor) -> RingElement:
        return cls(group, {})

    @classmethod
    def delta(
        cls,
        group: GroupDescriptor,
        point: GroupPoint | Iterable[int],
        coefficient: Coefficient = 1.0 + 0.0j,
    ) -> RingElement:
        if not isinstance(point, GroupPoint):
            point = GroupPoint(group, tuple(point))
        return cls(group, {point: coefficient})

    def support(self) -> tuple[GroupPoint, ...]:
        return tuple(self.terms)

    def coefficient(self, point: GroupPoint) -> Coefficient:
        return self.terms.get(point, 0.0 + 0.0j)

    @property
    def is_exact(self) -> bool:
        return all(isinstance(c, PhaseSum) for c in self.terms.values())

    def max_abs(self) -> float:
        return max((abs(c) for c in self.terms.values()), default=0.0)

    def as_complex(self) -> RingElement:
        """Copy with all coefficients converted to complex doubles."""
        return RingElement(self.group, {p: complex(c) for p, c in self.terms.items()})

    def to_records(self) -> list[dict]:
        out = []
        for p, c in self.terms.items():
            z = complex(c)
            out.append({"coords": list(p.coords), "re": z.real, "im": z.imag})
        return out

    @classmethod
    def from_records(cls, group: GroupDescriptor, records: Iterable[Mapping]) -> RingElement:
        terms: dict[GroupPoint, Coefficient] = {}
        for rec in records:
            p = GroupPoint(group, tuple(int(c) for c in rec["coords"]))
            z = complex(float(rec["re"]), float(rec.get("im", 0.0)))
            terms[p] = terms.get(p, 0.0 + 0.0j) + z
        return cls(group, terms)

    def __add__(self, other: RingElement) -> RingElement:
        return add(self, other)

    def __sub__(self, other: RingElement) -> RingElement:
        return add(self, scale(other, -1))

    def __rmul__(self, c: Coefficient) -> RingElement:
        return scale(self, c)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, RingElement):
            return NotImplemented
        if self.group != other.group or set(self.terms) != set(other.terms):
            return False
        return all(complex(self.terms[p]) == complex(other.terms[p]) for p in self.terms)

    def __hash__(self):
        raise TypeError("RingElement is not hashable")

    def __repr__(self) -> str:
        if not self.terms:
            return f"RingElement({self.group.name}, 0)"
        parts = [f"{complex(c):.6g}*d{p.coords}" for p, c in list(self.terms.items())[:6]]
        if len(self.terms) > 6:
            parts.append(f"... ({len(self.terms)} terms)")
        return f"RingElement({self.group.name}, " + " + ".join(parts) + ")"


def _check_shared_group(a: RingElement, b: RingElement) -> None:
    if a.group != b.group:
        raise GroupMismatchError(f"mixed groups: {a.group.name} and {b.group.name}")


def convolve(a: RingElement, b: RingElement, sigma: Cocycle) -> RingElement:
    """sigma-twisted convolution a * b."""
    _check_shared_group(a, b)
    if sigma.group != a.group:
        raise GroupMismatchError(
            f"cocycle on {sigma.group.name} used with elements of {a.group.name}"
        )
    acc: dict[GroupPoint, Coefficient] = {}
    for g1, c1 in a.terms.items():
        for g2, c2 in b.terms.items():
            term = sigma.scalar(g1, g2) * c1 * c2
            key = compose(g1, g2)
            if key in acc:
                acc[key] = acc[key] + term
            else:
                acc[key] = term
    return RingElement(a.group, acc)


def power(a: RingElement, n: int, sigma: Cocycle) -> RingElement:
    """Left-to-right n-fold twisted convolution power, n >= 1."""
    if n < 1:
        raise ValueError("power needs n >= 1")
    acc = a
    for _ in range(n - 1):
        acc = convolve(acc, a, sigma)
    return acc


def add(a: RingElement, b: RingElement) -> RingElement:
    _check_shared_group(a, b)
    merged: dict[GroupPoint, Coefficient] = dict(a.terms)
    for p, c in b.terms.items():
        if p in merged:
            merged[p] = merged[p] + c
        else:
            merged[p] = c
    return RingElement(a.group, merged)


def scale(a: RingElement, c: Coefficient) -> RingElement:
    if _is_exact_zero(c):
        return RingElement.zero(a.group)
    return RingElement(a.group, {p: c * v for p, v in a.terms.items()})


def is_zero(a: RingElement, tol: float = 0.0) -> bool:
    """True iff every coefficient has modulus <= tol (exact-path zeros are
    recognized structurally)."""
    return all(abs(c) <= tol for c in a.terms.values())
