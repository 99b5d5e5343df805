"""Noiseless evaluation of continuous truncated exponential sums.

The intensity of an ``M``-path interferometer of order ``j`` at the argument
``u`` is

    I(u) = |(1/M) * sum_{m=1..M} exp(2 pi i (m-1)^j u)|^2

which is 1 exactly when ``u`` is an integer. Factor discrimination lives in
the fractional part of ``u``, so every routine here reduces the argument
modulo 1 before forming phases.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from numbers import Integral

import numpy as np

from .errors import DomainError


@dataclass(frozen=True)
class SumConfig:
    """Number of interfering paths ``M`` and sum order ``j``."""

    M: int = 3
    j: int = 2

    def __post_init__(self):
        if int(self.M) != self.M or self.M < 2:
            raise DomainError(f"M must be an integer >= 2, got {self.M!r}")
        if int(self.j) != self.j or self.j < 1:
            raise DomainError(f"j must be an integer >= 1, got {self.j!r}")

    @property
    def exponents(self):
        """Integer path multipliers (m-1)**j for m = 1..M."""
        return tuple(k ** self.j for k in range(self.M))


def _intensity_from_fractions(cfg, frac_phases):
    # frac_phases[k] holds ((k)^j * u) mod 1 for each path; shape (M, ...)
    re = np.zeros(np.shape(frac_phases[0]))
    im = np.zeros_like(re)
    for f in frac_phases:
        phi = 2.0 * np.pi * f
        re += np.cos(phi)
        im += np.sin(phi)
    return (re * re + im * im) / (cfg.M * cfg.M)


def ctes_intensity(cfg, u):
    """Intensity of the truncated sum at argument ``u`` (scalar or array).

    The argument is reduced modulo 1 first; multiplying an integer exponent
    by the reduced value keeps the phases accurate even when ``u`` runs into
    the millions.
    """
    arr = np.asarray(u, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise DomainError("ctes_intensity requires a finite argument")
    frac = np.mod(arr, 1.0)
    phases = [np.mod(e * frac, 1.0) for e in cfg.exponents]
    out = _intensity_from_fractions(cfg, phases)
    if np.ndim(u) == 0:
        return float(out)
    return out


def ctes_intensity_ratio(cfg, num, den):
    """Intensity at the rational argument ``num/den`` using exact residues.

    ``num`` and ``den`` are integers (``den > 0``); ``num`` may be a 1-D
    integer array, in which case an array is returned.
    """
    den = int(den)
    if den <= 0:
        raise DomainError("denominator must be positive")
    if np.ndim(num) == 0:
        num = int(num)
        # int / int is correctly rounded in Python, whatever the magnitudes
        phases = [((e * num) % den) / den for e in cfg.exponents]
        return float(_intensity_from_fractions(cfg, phases))
    if den > 2**40:
        return np.array([ctes_intensity_ratio(cfg, int(r), den) for r in num])
    residues = np.mod(np.asarray(num, dtype=np.int64), den)
    phases = [((e % den) * residues % den) / den for e in cfg.exponents]
    return _intensity_from_fractions(cfg, phases)


def intensity_at_wavelength(cfg, x, lam):
    """Normalized interferogram value at wavelength ``lam`` for path unit ``x``.

    Both lengths share a unit (nm throughout this package).
    """
    if not (x > 0 and lam > 0):
        raise DomainError(f"x and lambda must be positive, got x={x}, lambda={lam}")
    return ctes_intensity(cfg, x / lam)


def rescaled_intensity(cfg, N, xi_N):
    """Intensity of the interferogram rescaled for the integer ``N``.

    Evaluates I(N / xi_N). Integer ``xi_N`` uses the residue ``N mod xi_N``;
    float ``xi_N`` is reduced through its exact binary fraction, so no
    precision is lost to the division.
    """
    if N < 1 or int(N) != N:
        raise DomainError(f"N must be a positive integer, got {N!r}")
    if not (xi_N > 0) or not math.isfinite(xi_N):
        raise DomainError(f"xi_N must be positive and finite, got {xi_N!r}")
    if isinstance(xi_N, Integral):
        return ctes_intensity_ratio(cfg, int(N), int(xi_N))
    q = Fraction(int(N)) / Fraction(xi_N)
    return ctes_intensity_ratio(cfg, q.numerator, q.denominator)


def _window(cfg, ell):
    # exponents 0 and 1 are always present, so the pair term gives
    # I(r/ell) <= 1 - 2(1 - cos(2 pi r/ell))/M^2; residues that could beat
    # I(1/ell) therefore sit within d of 0 or ell
    ell = np.asarray(ell, dtype=np.int64)
    floor_ = _intensity_from_fractions(cfg, [(e % ell) / ell for e in cfg.exponents])
    cos_min = np.minimum(1.0, 1.0 - cfg.M**2 * (1.0 - floor_) / 2.0 - 1e-12)
    d = np.where(cos_min <= -1.0, ell, ell * np.arccos(np.maximum(cos_min, -1.0)) / (2 * np.pi) + 1)
    return d.astype(np.int64)


@lru_cache(maxsize=None)
def _ceiling(M, j, ell):
    return float(nonfactor_ceilings(SumConfig(M, j), [ell])[0])


_BATCH = 1 << 18


def nonfactor_ceilings(cfg, ells):
    """:func:`nonfactor_ceiling` for an array of trial factors at once."""
    ells = np.asarray(ells, dtype=np.int64)
    out = np.empty(len(ells))
    if np.any(ells < 2):
        raise DomainError("trial factors must be >= 2")
    huge = ells > 2**40
    for k in np.nonzero(huge)[0]:
        out[k] = _ceiling_windowed(cfg, int(ells[k]))
    idx = np.nonzero(~huge)[0]
    if not len(idx):
        return out
    ell = ells[idx]
    d = np.minimum(_window(cfg, ell), ell // 2)
    order = np.argsort(d, kind="stable")
    # rows grouped by window width keep the residue block rectangular
    start = 0
    while start < len(order):
        width = int(d[order[start]])
        stop = start + max(1, _BATCH // (2 * width + 1))
        rows = order[start:stop]
        width = int(d[rows].max())
        L = ell[rows].reshape(-1, 1)
        k = np.arange(1, width + 1)
        r = np.concatenate([np.broadcast_to(k, (len(rows), width)), L - k], axis=1)
        r = np.where((r >= 1) & (r < L), r, 1)
        phases = [((e % L) * r % L) / L for e in cfg.exponents]
        out[idx[rows]] = _intensity_from_fractions(cfg, phases).max(axis=1)
        start = stop
    return out


def _ceiling_windowed(cfg, ell):
    d = min(ell // 2, int(_window(cfg, ell)))
    r = sorted({*range(1, d + 1), *range(ell - d, ell)})
    return max(ctes_intensity_ratio(cfg, k, ell) for k in r)


def nonfactor_ceiling(cfg, ell):
    """Largest intensity a non-divisor can show at integer trial factor ``ell``.

    A non-factor ``ell`` of ``N`` leaves a residue ``r = N mod ell`` in
    ``1..ell-1``; the worst case over residues bounds every non-factor.
    Results are memoized per ``(M, j, ell)``.
    """
    if not isinstance(ell, Integral) or ell < 2:
        raise DomainError(f"trial factor must be an integer >= 2, got {ell!r}")
    return _ceiling(cfg.M, cfg.j, int(ell))


def threshold(cfg, ell, rho=0.5):
    """Decision level sitting a fraction ``rho`` of the way from ceiling to 1."""
    c = nonfactor_ceiling(cfg, ell)
    return c + rho * (1.0 - c)
