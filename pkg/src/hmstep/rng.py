"""Seeded random generation for the property suites.

All randomness in the package flows through :class:`SeededRng`, a thin
wrapper around the Mersenne Twister (``random.Random``) that only consumes
``randrange``/``getrandbits``, whose output is stable across platforms and
CPython versions.  A suite is reproducible from its single 64-bit seed;
per-case seeds are derived with a SplitMix-style mix so failures replay
in isolation.
"""

from __future__ import annotations

import random
from fractions import Fraction

_MASK64 = (1 << 64) - 1
_MIX = 0x9E3779B97F4A7C15


def case_seed(suite_seed: int, index: int) -> int:
    """Derive the seed of case ``index`` from the suite seed."""
    x = (suite_seed + (index + 1) * _MIX) & _MASK64
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & _MASK64
    return (x ^ (x >> 31)) & _MASK64


class SeededRng:
    """Deterministic generator of the small exact-rational objects the
    suites need."""

    def __init__(self, seed: int):
        self.seed = seed
        self._r = random.Random(seed)

    def int_in(self, lo: int, hi: int) -> int:
        """Uniform integer in [lo, hi], inclusive."""
        return self._r.randrange(lo, hi + 1)

    def choice(self, seq):
        return seq[self._r.randrange(len(seq))]

    def bool(self) -> bool:
        return self._r.randrange(2) == 1

    def fraction(self, lo: Fraction, hi: Fraction, max_den: int = 64) -> Fraction:
        """Rational in [lo, hi] with denominator at most ``max_den``."""
        den = self.int_in(1, max_den)
        lo_num = -((-lo.numerator * den) // lo.denominator)  # ceil(lo*den)
        hi_num = (hi.numerator * den) // hi.denominator      # floor(hi*den)
        if lo_num > hi_num:
            return Fraction(lo)
        return Fraction(self.int_in(lo_num, hi_num), den)

    def unit_fraction(self, max_den: int = 64) -> Fraction:
        return self.fraction(Fraction(0), Fraction(1), max_den)

    def distinct_unit_fractions(self, count: int, max_den: int = 64) -> list[Fraction]:
        """``count`` distinct rationals strictly inside (0, 1), sorted."""
        out: set[Fraction] = set()
        while len(out) < count:
            f = self.fraction(Fraction(1, max_den), Fraction(max_den - 1, max_den), max_den)
            if 0 < f < 1:
                out.add(f)
        return sorted(out)

    def shuffled(self, seq):
        items = list(seq)
        for i in range(len(items) - 1, 0, -1):  # Fisher-Yates on randrange only
            j = self._r.randrange(i + 1)
            items[i], items[j] = items[j], items[i]
        return items
