"""Exact data model for airplane refueling (ARP) and vehicle exploration (NVEP).

All arithmetic is done with :class:`fractions.Fraction`.  A permutation is a
tuple of 1-based airplane ids; ``order[0]`` drops out first and ``order[-1]``
is the airplane that flies farthest.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence

from .errors import EmptyInstance, InvalidPermutation, NonPositiveValue, WrongKind

Rational = Fraction
Permutation = tuple  # tuple[int, ...], 1-based ids


class Kind(enum.Enum):
    ARP = "arp"
    NVEP = "nvep"


@dataclass(frozen=True)
class Airplane:
    id: int
    v: Fraction
    c: Fraction

    def __post_init__(self):
        if self.v <= 0 or self.c <= 0:
            raise NonPositiveValue(
                f"airplane {self.id}: v and c must be positive (got v={self.v}, c={self.c})"
            )


@dataclass(frozen=True)
class IntegerView:
    """Instance rescaled to integers.

    ``v_int[i] = v[i] * v_scale`` and ``c_int[i] = c[i] * c_scale``, so every
    objective value satisfies ``S = factor * S_int`` with ``factor > 0``.
    Comparisons between orders are therefore unchanged, and the search code
    can run on plain ints.
    """

    v: tuple[int, ...]
    c: tuple[int, ...]
    factor: Fraction


@dataclass(frozen=True)
class Instance:
    kind: Kind
    items: tuple[Airplane, ...]
    label: str = ""

    def __post_init__(self):
        if not self.items:
            raise EmptyInstance("instance has no airplanes")
        for pos, a in enumerate(self.items, start=1):
            if a.id != pos:
                raise ValueError(f"airplane ids must be 1..n in order; position {pos} has id {a.id}")

    @property
    def n(self) -> int:
        return len(self.items)

    @property
    def v(self) -> tuple[Fraction, ...]:
        return tuple(a.v for a in self.items)

    @property
    def c(self) -> tuple[Fraction, ...]:
        return tuple(a.c for a in self.items)

    def values(self) -> list[tuple[Fraction, Fraction]]:
        return [(a.v, a.c) for a in self.items]

    @cached_property
    def integer_view(self) -> IntegerView:
        v_scale = math.lcm(*(a.v.denominator for a in self.items))
        c_scale = math.lcm(*(a.c.denominator for a in self.items))
        v_int = tuple(int(a.v * v_scale) for a in self.items)
        c_int = tuple(int(a.c * c_scale) for a in self.items)
        return IntegerView(v_int, c_int, Fraction(c_scale, v_scale))


@dataclass(frozen=True)
class Evaluation:
    total: Fraction
    legs: tuple[Fraction, ...]
    suffix_sums: tuple[Fraction, ...]


def to_rational(x) -> Fraction:
    """Exact conversion; floats are rejected because they are already rounded."""
    if isinstance(x, float):
        raise TypeError("floats are not accepted; pass int, Fraction, Decimal or a string")
    return Fraction(x)


def make_instance(kind: Kind | str, values: Iterable[tuple], label: str = "") -> Instance:
    """Build an instance from ``(v, c)`` pairs, assigning ids 1..n in order."""
    kind = Kind(kind) if not isinstance(kind, Kind) else kind
    pairs = list(values)
    if not pairs:
        raise EmptyInstance("instance has no airplanes")
    items = tuple(
        Airplane(i, to_rational(v), to_rational(c)) for i, (v, c) in enumerate(pairs, start=1)
    )
    return Instance(kind, items, label)


def check_permutation(inst: Instance, perm: Sequence[int]) -> tuple[int, ...]:
    order = tuple(perm)
    if len(order) != inst.n or sorted(order) != list(range(1, inst.n + 1)):
        raise InvalidPermutation(f"{order!r} is not a permutation of 1..{inst.n}")
    return order


def cumulative_consumption(inst: Instance, perm: Sequence[int]) -> list[Fraction]:
    """Suffix sums of consumption rates, position 1 first (strictly decreasing)."""
    order = check_permutation(inst, perm)
    out = []
    acc = Fraction(0)
    for pid in reversed(order):
        acc += inst.items[pid - 1].c
        out.append(acc)
    out.reverse()
    return out


def evaluate(inst: Instance, perm: Sequence[int]) -> Evaluation:
    order = check_permutation(inst, perm)
    suffix = cumulative_consumption(inst, order)
    legs = tuple(inst.items[pid - 1].v / s for pid, s in zip(order, suffix))
    return Evaluation(sum(legs, Fraction(0)), legs, tuple(suffix))


def nvep_distance(inst: Instance, perm: Sequence[int]) -> Fraction:
    """Distance reached by the last vehicle of an NVEP instance."""
    if inst.kind is not Kind.NVEP:
        raise WrongKind(f"nvep_distance needs an NVEP instance, got {inst.kind.value}")
    order = check_permutation(inst, perm)
    a = [inst.items[pid - 1].v for pid in order]
    b = [inst.items[pid - 1].c for pid in order]
    return sum((a[j] / sum(b[j:], Fraction(0)) for j in range(len(order))), Fraction(0))


def reduce_nvep_to_arp(inst: Instance) -> Instance:
    """Map vehicles (a_i, b_i) to airplanes with v_i = a_i, c_i = b_i."""
    if inst.kind is not Kind.NVEP:
        raise WrongKind(f"reduction input must be NVEP, got {inst.kind.value}")
    return Instance(Kind.ARP, inst.items, inst.label)


def verify_certificate(inst: Instance, perm, threshold) -> bool:
    """Accept iff ``perm`` uses every airplane once and reaches ``threshold``.

    Malformed certificates are rejected, never raised.
    """
    try:
        order = tuple(perm)
        if not all(isinstance(p, int) and not isinstance(p, bool) for p in order):
            return False
        order = check_permutation(inst, order)
        return evaluate(inst, order).total >= to_rational(threshold)
    except (InvalidPermutation, TypeError, ValueError):
        return False
