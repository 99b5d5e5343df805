"""Reading trial factors off a recorded interferogram.

For an integer ``N`` the wavelength axis is rescaled to ``xi_N = N*lam/x``;
a trial factor ``ell`` is read at ``lam = ell*x/N`` and accepted when the
interpolated intensity clears a per-``ell`` threshold placed a fraction
``rho`` of the way from the worst non-factor intensity up to 1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import NamedTuple

import numpy as np

from .errors import DomainError
from .sumcore import nonfactor_ceilings

FACTOR = "factor"
NON_FACTOR = "non-factor"
UNCOVERED = "uncovered"

DEFAULT_RHO = 0.5


def exact(value):
    """Rational value of a length as written in decimal (``repr``)."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    return Fraction(repr(float(value)))


class Interval(NamedTuple):
    lo: int
    hi: int

    @property
    def empty(self):
        return self.lo > self.hi

    def __contains__(self, ell):
        return self.lo <= ell <= self.hi

    def __len__(self):
        return max(0, self.hi - self.lo + 1)


def coverage(x, band, N):
    """Integer trial factors readable from one interferogram.

    ``[ceil(N*lam_min/x), floor(N*lam_max/x)]`` clipped to ``[2, N]``,
    computed in exact rational arithmetic.
    """
    q = Fraction(int(N)) / exact(x)
    lo = math.ceil(q * exact(band.lam_min))
    hi = math.floor(q * exact(band.lam_max))
    return Interval(max(lo, 2), min(hi, int(N)))


def _nearest_triples(lam, t):
    n = len(lam)
    j = np.clip(np.searchsorted(lam, t), 1, n - 1)
    # bracket (j-1, j); add whichever outer neighbour is closer
    left = j - 2
    right = j + 1
    use_left = np.where(
        left < 0, False,
        np.where(right > n - 1, True, (t - lam[np.maximum(left, 0)]) <= (lam[np.minimum(right, n - 1)] - t)),
    )
    return np.where(use_left, j - 2, j - 1)


def _quadratic(lam, y, i0, t):
    x0, x1, x2 = lam[i0], lam[i0 + 1], lam[i0 + 2]
    y0, y1, y2 = y[i0], y[i0 + 1], y[i0 + 2]
    l0 = ((t - x1) * (t - x2)) / ((x0 - x1) * (x0 - x2))
    l1 = ((t - x0) * (t - x2)) / ((x1 - x0) * (x1 - x2))
    l2 = ((t - x0) * (t - x1)) / ((x2 - x0) * (x2 - x1))
    return y0 * l0 + y1 * l1 + y2 * l2


def sample_at(ig, lam):
    """Quadratic interpolation through the three samples nearest ``lam``.

    Accepts a scalar or an array of wavelengths inside the band. Grid points
    return their recorded value exactly.
    """
    t = np.asarray(lam, dtype=float)
    band = ig.setup.band
    if np.any(t < band.lam_min) or np.any(t > band.lam_max):
        raise DomainError(f"wavelength outside band [{band.lam_min}, {band.lam_max}]")
    i0 = _nearest_triples(ig.lam, t)
    out = _quadratic(ig.lam, ig.intensity, i0, t)
    return float(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class TrialCheck:
    N: int
    ell: int
    lam_target: float
    intensity: float | None
    ceiling: float | None
    threshold: float | None
    verdict: str

    def to_dict(self):
        return {
            "ell": self.ell,
            "lambda_target_nm": self.lam_target,
            "intensity": self.intensity,
            "ceiling": self.ceiling,
            "threshold": self.threshold,
            "verdict": self.verdict,
        }


@dataclass
class FactorReport:
    N: int
    covered: Interval
    checks: list = field(default_factory=list)
    rho: float = DEFAULT_RHO
    coverage_empty: bool = False

    @property
    def factors(self):
        return sorted(c.ell for c in self.checks if c.verdict == FACTOR)

    def to_dict(self):
        return {
            "N": self.N,
            "coverage": [self.covered.lo, self.covered.hi],
            "coverage_empty": self.coverage_empty,
            "rho": self.rho,
            "factors": self.factors,
            "checks": [c.to_dict() for c in self.checks],
        }


def _verdicts(ig, N, ells, rho):
    band = ig.setup.band
    lam_t = np.clip(np.asarray(ells, dtype=float) * ig.setup.x / N, band.lam_min, band.lam_max)
    values = np.atleast_1d(sample_at(ig, lam_t)) if len(ells) else np.array([])
    ceils = nonfactor_ceilings(ig.setup.cfg, ells) if len(ells) else np.array([])
    thrs = ceils + rho * (1.0 - ceils)
    checks = []
    for ell, lt, v, c, thr in zip(ells, lam_t.tolist(), values.tolist(), ceils.tolist(), thrs.tolist()):
        checks.append(TrialCheck(N, ell, lt, v, c, thr, FACTOR if v > thr else NON_FACTOR))
    return checks


def check_trial(ig, N, ell, rho=DEFAULT_RHO, rel_tol=0.0):
    """Classify one trial factor ``ell`` of ``N``.

    ``rel_tol`` lets a target within that relative distance of a band edge
    count as covered (it is then read at the edge).
    """
    N, ell = int(N), int(ell)
    if N < 2 or ell < 2:
        raise DomainError(f"need N >= 2 and ell >= 2, got N={N}, ell={ell}")
    lam_t = ell * ig.setup.x / N
    if rel_tol:
        covered = ell <= N and ig.setup.band.contains(lam_t, rel_tol)
    else:
        covered = ell in coverage(ig.setup.x, ig.setup.band, N)
    if not covered:
        return TrialCheck(N, ell, lam_t, None, None, None, UNCOVERED)
    return _verdicts(ig, N, [ell], rho)[0]


def factor_scan(ig, N, rho=DEFAULT_RHO, include_two=False):
    """Check every trial factor the interferogram covers for ``N``."""
    N = int(N)
    if N < 2:
        raise DomainError(f"need N >= 2, got {N}")
    cov = coverage(ig.setup.x, ig.setup.band, N)
    lo = cov.lo if include_two else max(cov.lo, 3)
    ells = list(range(lo, cov.hi + 1))
    return FactorReport(N, cov, _verdicts(ig, N, ells, rho), rho, coverage_empty=not ells)


def scan_range(ig, N, lo, hi, rho=DEFAULT_RHO):
    """Check trial factors ``lo..hi`` that the caller already knows are covered."""
    ells = list(range(int(lo), int(hi) + 1))
    return _verdicts(ig, int(N), ells, rho)


def multi_scan(ig, Ns, rho=DEFAULT_RHO, include_two=False):
    """Factor several integers from the same interferogram."""
    return [factor_scan(ig, N, rho, include_two) for N in Ns]


def locate_maxima(ig, N):
    """Local maxima of the rescaled interferogram as ``(xi_N, intensity)``.

    A maximum is a sample strictly above both neighbours; its position and
    height are refined with the parabola through the triple.
    """
    y = ig.intensity
    lam = ig.lam
    mid = np.nonzero((y[1:-1] > y[:-2]) & (y[1:-1] > y[2:]))[0] + 1
    scale = int(N) / ig.setup.x
    out = []
    for k in mid:
        d0, d2 = lam[k - 1] - lam[k], lam[k + 1] - lam[k]
        s0 = (y[k - 1] - y[k]) / d0
        s2 = (y[k + 1] - y[k]) / d2
        a = (s2 - s0) / (d2 - d0)  # < 0 for a strict maximum
        b = s0 - a * d0
        out.append((scale * (lam[k] - b / (2 * a)), float(y[k] - b * b / (4 * a))))
    return out


def peak_width(ig, N, ell, level=0.5):
    """Full width in ``xi_N`` of the peak nearest trial factor ``ell``.

    Walks outward from the highest sample near the target until the
    intensity drops below ``level`` times the peak sample, interpolating the
    crossing linearly. Returns ``nan`` if a side runs off the band.
    """
    lam, y = ig.lam, ig.intensity
    t = int(ell) * ig.setup.x / int(N)
    k = int(np.clip(np.searchsorted(lam, t), 0, len(lam) - 1))
    while 0 < k and y[k - 1] > y[k]:
        k -= 1
    while k < len(lam) - 1 and y[k + 1] > y[k]:
        k += 1
    cut = level * y[k]

    def crossing(step):
        i = k
        while 0 <= i + step < len(lam) and y[i + step] >= cut:
            i += step
        if not 0 <= i + step < len(lam):
            return math.nan
        a, b = i, i + step
        return lam[a] + (cut - y[a]) * (lam[b] - lam[a]) / (y[b] - y[a])

    return int(N) / ig.setup.x * (crossing(1) - crossing(-1))
