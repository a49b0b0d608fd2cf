"""Finite unions of closed intervals, used for conservative support tracking."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

INF = math.inf


def _merge(pieces):
    pieces = sorted((float(lo), float(hi)) for lo, hi in pieces if lo <= hi)
    out: list[tuple[float, float]] = []
    for lo, hi in pieces:
        if out and lo <= out[-1][1]:
            out[-1] = (out[-1][0], max(out[-1][1], hi))
        else:
            out.append((lo, hi))
    return tuple(out)


def _mul_pair(a, b):
    cands = []
    for x in a:
        for y in b:
            if (x == 0 and math.isinf(y)) or (y == 0 and math.isinf(x)):
                cands.append(0.0)
            else:
                cands.append(x * y)
    return min(cands), max(cands)


@dataclass(frozen=True)
class IntervalSet:
    """A sorted tuple of disjoint closed intervals ``(lo, hi)``."""

    pieces: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "pieces", _merge(self.pieces))

    @classmethod
    def of(cls, lo, hi):
        return cls(((lo, hi),))

    @classmethod
    def full(cls):
        return cls(((-INF, INF),))

    @property
    def empty(self):
        return not self.pieces

    @property
    def bounded(self):
        return bool(self.pieces) and math.isfinite(self.pieces[0][0]) and math.isfinite(self.pieces[-1][1])

    @property
    def is_full(self):
        return self.pieces == ((-INF, INF),)

    @property
    def lo(self):
        return self.pieces[0][0]

    @property
    def hi(self):
        return self.pieces[-1][1]

    def hull(self):
        return IntervalSet(((self.lo, self.hi),)) if self.pieces else self

    def abs_range(self):
        """Smallest and largest value of ``|x|`` over the set."""
        lo = min(0.0 if a <= 0 <= b else min(abs(a), abs(b)) for a, b in self.pieces)
        hi = max(max(abs(a), abs(b)) for a, b in self.pieces)
        return lo, hi

    def distance_to(self, x):
        d = INF
        for a, b in self.pieces:
            if a <= x <= b:
                return 0.0
            d = min(d, abs(a - x), abs(b - x))
        return d

    def contains(self, x):
        x = np.asarray(x)
        if self.is_full:
            return np.ones(x.shape, bool)
        m = np.zeros(x.shape, bool)
        for a, b in self.pieces:
            m |= (x >= a) & (x <= b)
        return m

    def subset_of(self, other, rtol=0.0):
        """Containment, with ``rtol`` absorbing rounding of computed endpoints."""
        def slack(x):
            return rtol * (1.0 + abs(x)) if math.isfinite(x) else 0.0
        return all(any(c - slack(c) <= a and b <= d + slack(d) for c, d in other.pieces) for a, b in self.pieces)

    def __or__(self, other):
        return IntervalSet(self.pieces + other.pieces)

    def __and__(self, other):
        out = []
        for a, b in self.pieces:
            for c, d in other.pieces:
                lo, hi = max(a, c), min(b, d)
                if lo <= hi:
                    out.append((lo, hi))
        return IntervalSet(tuple(out))

    def __neg__(self):
        return IntervalSet(tuple((-b, -a) for a, b in self.pieces))

    def __add__(self, other):
        if not isinstance(other, IntervalSet):
            return IntervalSet(tuple((a + other, b + other) for a, b in self.pieces))
        return IntervalSet(tuple((a + c, b + d) for a, b in self.pieces for c, d in other.pieces))

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, IntervalSet):
            other = IntervalSet.of(other, other)
        return IntervalSet(tuple(_mul_pair((a, b), (c, d)) for a, b in self.pieces for c, d in other.pieces))

    __rmul__ = __mul__

    def recip(self):
        out = []
        for a, b in self.pieces:
            if a > 0 or b < 0:
                out.append((1.0 / b if math.isfinite(b) else 0.0, 1.0 / a if math.isfinite(a) else 0.0))
            elif a == 0 and b == 0:
                return IntervalSet.full()
            else:
                if b > 0:
                    out.append((1.0 / b if math.isfinite(b) else 0.0, INF))
                if a < 0:
                    out.append((-INF, 1.0 / a if math.isfinite(a) else 0.0))
        return IntervalSet(tuple(out))

    def __truediv__(self, other):
        if not isinstance(other, IntervalSet):
            other = IntervalSet.of(other, other)
        return self * other.recip()

    def __rtruediv__(self, other):
        return IntervalSet.of(other, other) * self.recip()

    def abs(self):
        out = []
        for a, b in self.pieces:
            if a >= 0:
                out.append((a, b))
            elif b <= 0:
                out.append((-b, -a))
            else:
                out.append((0.0, max(-a, b)))
        return IntervalSet(tuple(out))

    def __repr__(self):
        return "IntervalSet(" + " u ".join(f"[{a:.6g}, {b:.6g}]" for a, b in self.pieces) + ")"


FULL = IntervalSet.full()


def box(*bounds):
    """Support box from ``(lo, hi)`` pairs."""
    return tuple(IntervalSet.of(lo, hi) for lo, hi in bounds)


def full_support(n):
    return (FULL,) * n


def support_mask(support, X):
    m = None
    for ivs, x in zip(support, X):
        if ivs.is_full:
            continue
        c = ivs.contains(x)
        m = c if m is None else (m & c)
    return m


def intersect_support(s1, s2):
    return tuple(a & b for a, b in zip(s1, s2))


def union_support(s1, s2):
    return tuple(a | b for a, b in zip(s1, s2))


def support_bounded(support):
    return all(s.bounded for s in support)
