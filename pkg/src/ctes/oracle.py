"""Ground truth by plain integer arithmetic.

Nothing in here is clever on purpose: trial division, divisor pairs, and an
exhaustive residue search that expands the squared modulus as pairwise
cosines instead of summing phasors, so it cannot share a bug with
:mod:`ctes.sumcore`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError


@dataclass(frozen=True)
class Factorization:
    N: int
    prime_powers: tuple  # ((p, e), ...) with p ascending

    def value(self):
        out = 1
        for p, e in self.prime_powers:
            out *= p ** e
        return out

    def divisors_in(self, lo, hi):
        return divisors_in(self.N, lo, hi)


def trial_division(N):
    """Prime factorization of ``N >= 2`` by dividing out candidates up to sqrt(N)."""
    N = int(N)
    if N < 2:
        raise DomainError(f"trial_division needs N >= 2, got {N}")
    powers = []
    rest = N
    d = 2
    while d * d <= rest:
        e = 0
        while rest % d == 0:
            rest //= d
            e += 1
        if e:
            powers.append((d, e))
        d += 1 if d == 2 else 2
    if rest > 1:
        powers.append((rest, 1))
    return Factorization(N, tuple(powers))


def divisors_in(N, lo, hi):
    """All divisors of ``N`` in the closed interval ``[lo, hi]``, ascending."""
    N, lo, hi = int(N), int(lo), int(hi)
    found = set()
    for d in range(1, math.isqrt(N) + 1):
        if N % d == 0:
            found.add(d)
            found.add(N // d)
    return sorted(d for d in found if lo <= d <= hi)


def is_composite(N):
    return N >= 4 and bool(divisors_in(N, 2, math.isqrt(N)))


def residue_max_intensity(cfg, ell):
    """Worst non-factor residue at ``ell`` and its intensity.

    Uses |sum_m e^{i a_m t}|^2 = M + 2 sum_{m<n} cos((a_m - a_n) t) with the
    phase differences reduced exactly modulo ``ell``. Returns ``(r, I)`` with
    the smallest maximizing residue.
    """
    ell = int(ell)
    if ell < 2:
        raise DomainError(f"ell must be >= 2, got {ell}")
    a = [k ** cfg.j for k in range(cfg.M)]
    r = np.arange(1, ell, dtype=np.int64)
    total = np.full(r.shape, float(cfg.M))
    for m in range(cfg.M):
        for n in range(m + 1, cfg.M):
            diff = (a[n] - a[m]) % ell
            total += 2.0 * np.cos(2.0 * np.pi * ((diff * r) % ell) / ell)
    values = total / cfg.M ** 2
    k = int(np.argmax(values))
    return int(r[k]), float(values[k])
