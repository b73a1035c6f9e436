"""Exact arithmetic with sums of rational-turn unit phases.

A :class:`PhaseSum` stores ``{turn: coefficient}`` with both sides
:class:`~fractions.Fraction`, representing ``sum(c * exp(2*pi*i*t))``.
Sums and products of such values stay exact, so root-of-unity telescoping
(torsion zero-divisor certificates) cancels to a literal zero instead of
1e-16 float noise.  Mixing with ordinary complex numbers degrades the
result to ``complex``, which is the intended fallback.
"""

from __future__ import annotations

import cmath
import math
from fractions import Fraction
from numbers import Rational

_TWO_PI = 2.0 * math.pi


def _cis_turn(turn: Fraction) -> complex:
    return cmath.exp(complex(0.0, _TWO_PI * float(turn)))


class PhaseSum:
    """Finite formal sum of unit phases with rational turns and rational
    coefficients."""

    __slots__ = ("_terms",)

    def __init__(self, terms: dict[Fraction, Fraction] | None = None):
        clean: dict[Fraction, Fraction] = {}
        if terms:
            for turn, coeff in terms.items():
                if coeff == 0:
                    continue
                key = turn % 1
                new = clean.get(key, Fraction(0)) + coeff
                if new:
                    clean[key] = new
                else:
                    clean.pop(key, None)
        self._terms = clean

    @classmethod
    def zero(cls) -> PhaseSum:
        return cls()

    @classmethod
    def one(cls) -> PhaseSum:
        return cls.unit(Fraction(0))

    @classmethod
    def unit(cls, turn: Fraction | int) -> PhaseSum:
        """The pure phase exp(2*pi*i*turn)."""
        return cls({Fraction(turn): Fraction(1)})

    @property
    def is_zero(self) -> bool:
        return not self._terms

    @property
    def terms(self) -> dict[Fraction, Fraction]:
        return dict(self._terms)

    def conjugate(self) -> PhaseSum:
        return PhaseSum({-t: c for t, c in self._terms.items()})

    def principal_power(self, exponent: Fraction) -> PhaseSum:
        """Principal branch of z**exponent for a single unit phase.

        The stored turn is moved to its representative in (-1/2, 1/2]
        (i.e. principal argument) before scaling by the exponent.
        """
        if len(self._terms) != 1:
            raise ValueError("principal_power needs a single-phase value")
        ((turn, coeff),) = self._terms.items()
        if coeff != 1:
            raise ValueError("principal_power needs a unit coefficient")
        centered = turn if turn <= Fraction(1, 2) else turn - 1
        return PhaseSum.unit(centered * Fraction(exponent))

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, PhaseSum):
            return self._terms == other._terms
        return NotImplemented

    def __hash__(self) -> int:
        return hash(frozenset(self._terms.items()))

    def __neg__(self) -> PhaseSum:
        return PhaseSum({t: -c for t, c in self._terms.items()})

    def __add__(self, other):
        if isinstance(other, PhaseSum):
            merged = dict(self._terms)
            for t, c in other._terms.items():
                merged[t] = merged.get(t, Fraction(0)) + c
            return PhaseSum(merged)
        if isinstance(other, Rational):
            return self + PhaseSum({Fraction(0): Fraction(other)})
        if isinstance(other, (int, float, complex)):
            return complex(self) + other
        return NotImplemented

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, PhaseSum):
            prod: dict[Fraction, Fraction] = {}
            for t1, c1 in self._terms.items():
                for t2, c2 in other._terms.items():
                    key = (t1 + t2) % 1
                    prod[key] = prod.get(key, Fraction(0)) + c1 * c2
            return PhaseSum(prod)
        if isinstance(other, Rational):
            q = Fraction(other)
            return PhaseSum({t: c * q for t, c in self._terms.items()})
        if isinstance(other, (int, float, complex)):
            return complex(self) * other
        return NotImplemented

    __rmul__ = __mul__

    def __complex__(self) -> complex:
        acc = 0.0 + 0.0j
        for turn in sorted(self._terms):
            acc += float(self._terms[turn]) * _cis_turn(turn)
        return acc

    def __abs__(self) -> float:
        return abs(complex(self))

    def __repr__(self) -> str:
        if not self._terms:
            return "PhaseSum(0)"
        parts = [f"{c}*e({t})" for t, c in sorted(self._terms.items())]
        return "PhaseSum(" + " + ".join(parts) + ")"
