"""Periodic words: is a pointwise product of periodic sequences trivial on
an initial segment?"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

from . import kernels
from .groups import Group, GroupError


@dataclass(frozen=True)
class PeriodicFunction:
    values: tuple

    def __post_init__(self):
        if not self.values:
            raise ValueError("a periodic function needs at least one value")

    @property
    def period(self) -> int:
        return len(self.values)

    def __call__(self, t: int):
        return self.values[t % len(self.values)]


@dataclass(frozen=True)
class RecurrenceBound:
    order: int
    nilpotency_class: int
    max_period: int


def _class_bound(c: int, n: int) -> int:
    # order valid for every element of the subgroup generated by functions of
    # period <= n, in a group of class <= c
    if c == 0:
        return 0
    return n * (n + 1) // 2 + _class_bound(c - 1, n ** (2 * c))


def recurrence_order_bound(c: int, periods: Sequence[int]) -> RecurrenceBound:
    if c < 1:
        raise ValueError("nilpotency class must be >= 1")
    if not periods or min(periods) < 1:
        raise ValueError("periods must be positive")
    n = max(periods)
    order = sum(periods) if c == 1 else _class_bound(c, n)
    return RecurrenceBound(order, c, n)


def _lcm(periods) -> int:
    out = 1
    for p in periods:
        out = out * p // math.gcd(out, p)
    return out


@lru_cache(maxsize=16)
def _cayley(group: Group):
    elems = group.elements()
    index = {e: i for i, e in enumerate(elems)}
    table = [[index[group.mul(a, b)] for b in elems] for a in elems]
    return index, table


def first_failure(group: Group, fs: Sequence[PeriodicFunction], count: int) -> int:
    """Smallest t < count with prod f_i(t) != 1, or -1."""
    if count <= 0 or not fs:
        return -1
    order = group.order() if group.finite else None
    if order is not None and order <= 4096:
        index, table = _cayley(group)
        seqs = [[index[v] for v in f.values] for f in fs]
        return kernels.table_first_failure(table, seqs, index[group.identity()], count)
    mul, one = group.mul, group.identity()
    for t in range(count):
        acc = one
        for f in fs:
            acc = mul(acc, f(t))
        if not group.is_identity(acc):
            return t
    return -1


def positions_to_check(group: Group, fs: Sequence[PeriodicFunction], T: int, require_class: bool = True) -> int:
    periods = [f.period for f in fs]
    count = min(T + 1, _lcm(periods))
    c = group.nilpotency_class
    if c is not None:
        count = min(count, recurrence_order_bound(c, periods).order)
    elif require_class:
        raise GroupError(f"nilpotency class of {group.descriptor} is not declared")
    return count


def periodic_check(group: Group, fs: Sequence[PeriodicFunction], T: int) -> bool:
    """True iff prod_i f_i(t) = 1 for all 0 <= t <= T."""
    if not fs or T < 0:
        return True
    fs = [f if isinstance(f, PeriodicFunction) else PeriodicFunction(tuple(f)) for f in fs]
    return first_failure(group, fs, positions_to_check(group, fs, T)) < 0


def periodic_check_any(group: Group, fs: Sequence[PeriodicFunction], T: int) -> bool:
    """Same contract, for any group: uses the recurrence bound when a class
    is declared and the lcm window otherwise."""
    if not fs or T < 0:
        return True
    return first_failure(group, fs, positions_to_check(group, fs, T, require_class=False)) < 0
