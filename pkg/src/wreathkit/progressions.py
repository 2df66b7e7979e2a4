"""Arithmetic progressions of indices, the interval partitioner and the
progression-sum support test."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from . import kernels


@dataclass(frozen=True)
class ArithmeticProgression:
    offset: int
    period: int
    length: int

    def __post_init__(self):
        if self.period < 1 or self.length < 1 or self.offset < 0:
            raise ValueError(f"invalid progression {self}")

    @property
    def last(self) -> int:
        return self.offset + self.period * (self.length - 1)

    def __contains__(self, x: int) -> bool:
        return self.offset <= x <= self.last and (x - self.offset) % self.period == 0

    def positions(self) -> range:
        return range(self.offset, self.last + 1, self.period)


class _Overflow:
    _inst = None

    def __new__(cls):
        if cls._inst is None:
            cls._inst = super().__new__(cls)
        return cls._inst

    def __repr__(self):
        return "Overflow"


Overflow = _Overflow()


def interval_partition(intervals: Sequence[tuple[int, int]]) -> list[tuple[int, int, list[int]]]:
    """Split the union hull of ``intervals`` into pieces [lo, hi] such that
    every input interval contains or misses each piece.

    Returns (lo, hi, members) with members the indices of input intervals
    containing the piece; pieces covered by nothing are omitted.
    """
    cuts = set()
    for lo, hi in intervals:
        if lo <= hi:
            cuts.add(lo)
            cuts.add(hi + 1)
    pts = sorted(cuts)
    out = []
    for lo, nxt in zip(pts, pts[1:]):
        members = [i for i, (a, b) in enumerate(intervals) if a <= lo and nxt - 1 <= b]
        if members:
            out.append((lo, nxt - 1, members))
    return out


def _as_vec(a) -> tuple:
    return (a,) if isinstance(a, int) else tuple(a)


def _nonzero_in(M, members, lo, hi, modulus, limit):
    starts, periods, values = [], [], []
    r = len(_as_vec(M[members[0]][1]))
    for i in members:
        prog, a = M[i]
        starts.append((prog.offset - lo) % prog.period)
        periods.append(prog.period)
        values.extend(_as_vec(a))
    hits = kernels.residue_nonzero(starts, periods, values, r, hi - lo + 1, modulus, limit)
    return [lo + h for h in hits]


def progression_sum_support(M: Iterable, b: int, modulus: int = 0):
    """Positions t where the sum of a over the pairs (s, a) in M with
    t in s is nonzero.

    Returns the sorted list of positions when fewer than ``b`` exist and
    ``Overflow`` otherwise.  Values are integer vectors (or ints), summed in
    Z^r, or in (Z/modulus)^r when modulus > 0.
    """
    if b < 1:
        raise ValueError("b must be positive")
    M = [(s, a) for s, a in M if any(_as_vec(a))]
    if not M:
        return []
    window = b * sum(s.period for s, _ in M)
    found: list[int] = []
    for lo, hi, members in interval_partition([(s.offset, s.last) for s, _ in M]):
        if hi - lo + 1 < window:
            found.extend(_nonzero_in(M, members, lo, hi, modulus, b - len(found)))
            if len(found) >= b:
                return Overflow
        else:
            hits = _nonzero_in(M, members, lo, lo + window - 1, modulus, b)
            if len(hits) >= b:
                return Overflow
            # fewer than b hits leaves a zero run at least as long as the
            # recurrence order, so the sum vanishes on the whole piece
            assert not hits
    return sorted(found)
