"""How many interferograms, at which path units, to factor a range of N.

Two strategies are supported. ``METHOD1`` checks trial factors in
``[3, sqrt(N)]``; ``METHOD2`` checks ``[sqrt(N), N]``. A sequence of path
units ``x_0 > x_0/c > x_0/c^2 > ...`` with ``c = lam_max/lam_min`` makes the
trial-factor windows of consecutive interferograms abut, so their union is
one contiguous window growing by a factor ``c`` per interferogram.
"""

from __future__ import annotations

import enum
import json
import math
import warnings
from dataclasses import dataclass, field
from fractions import Fraction

from . import analysis
from .analysis import FactorReport, Interval, exact
from .errors import CoverageViolation, DomainError, PlanningError
from .instrument import Band, NoiseSpec, SetupSpec, max_step, simulate
from .sumcore import SumConfig

ABUT_RTOL = 1e-9


class MethodKind(enum.Enum):
    METHOD1 = 1
    METHOD2 = 2

    @classmethod
    def parse(cls, value):
        if isinstance(value, cls):
            return value
        text = str(value).strip().lower().replace("method", "")
        try:
            return cls(int(text))
        except ValueError:
            raise DomainError(f"unknown method {value!r}; use 1 or 2") from None


def target_interval(method, N):
    """Real interval of trial factors a method must cover for ``N``."""
    root = math.sqrt(N)
    if method is MethodKind.METHOD1:
        return 3.0, root
    return root, float(N)


# -- single interferogram ---------------------------------------------------

@dataclass(frozen=True)
class SingleShotRange:
    method: MethodKind
    x: float
    band: Band
    N_lo: int
    N_hi: int
    valid: bool


def single_range(x, band, method):
    """Integers fully factorable with one interferogram at path unit ``x``."""
    method = MethodKind.parse(method)
    if not x > 0:
        raise DomainError(f"x must be positive, got {x}")
    X, lo, hi = exact(x), exact(band.lam_min), exact(band.lam_max)
    if method is MethodKind.METHOD1:
        return SingleShotRange(method, x, band, math.ceil(X * X / (hi * hi)), math.floor(3 * X / lo),
                               X <= 3 * hi * hi / lo)
    return SingleShotRange(method, x, band, 1, math.floor(X * X / (lo * lo)), X <= hi)


def max_single(band, method):
    """Largest N a single interferogram can handle.

    METHOD1 gives the one integer ``9 c^2``; when that is not an integer the
    floor is returned and a :class:`UserWarning` is issued.
    """
    method = MethodKind.parse(method)
    c = exact(band.lam_max) / exact(band.lam_min)
    if method is MethodKind.METHOD1:
        value = 9 * c * c
        if value.denominator != 1:
            warnings.warn(f"9*c^2 = {float(value):.6g} is not an integer; returning its floor", stacklevel=2)
        return math.floor(value)
    return math.floor(c * c)


# -- sequences --------------------------------------------------------------

@dataclass(frozen=True)
class SequencePlan:
    method: MethodKind
    band: Band
    N_min: int
    N_max: int
    x0: float
    c: float
    n: int
    xs: tuple

    def to_dict(self):
        return {
            "method": self.method.value,
            "lambda_min_nm": self.band.lam_min,
            "lambda_max_nm": self.band.lam_max,
            "N_min": self.N_min,
            "N_max": self.N_max,
            "x0_nm": self.x0,
            "c": self.c,
            "n": self.n,
            "x_nm": list(self.xs),
        }

    @classmethod
    def from_dict(cls, d):
        try:
            return cls(
                MethodKind.parse(d["method"]),
                Band(float(d["lambda_min_nm"]), float(d["lambda_max_nm"])),
                int(d["N_min"]),
                int(d["N_max"]),
                float(d["x0_nm"]),
                float(d["c"]),
                int(d["n"]),
                tuple(float(v) for v in d["x_nm"]),
            )
        except KeyError as exc:
            raise PlanningError(f"plan is missing {exc.args[0]!r}") from None

    def save(self, path):
        with open(path, "w") as fh:
            json.dump(self.to_dict(), fh, indent=2)
            fh.write("\n")

    @classmethod
    def load(cls, path):
        with open(path) as fh:
            return cls.from_dict(json.load(fh))


def min_x0(N_max, band, method):
    """Smallest admissible first path unit (exact where possible)."""
    lo = exact(band.lam_min)
    if method is MethodKind.METHOD1:
        return lo * N_max / 3
    r = math.isqrt(N_max)
    if r * r == N_max:
        return lo * r
    # irrational bound: round up to the next float above lam_min*sqrt(N_max)
    x0 = float(band.lam_min) * math.sqrt(N_max)
    while (Fraction(x0) / lo) ** 2 < N_max:
        x0 = math.nextafter(x0, math.inf)
    return Fraction(x0)


def _count(method, x0, band, N_min):
    """Smallest n >= 1 with c^n reaching the method's required span."""
    c = exact(band.lam_max) / exact(band.lam_min)
    ratio_sq = (x0 / exact(band.lam_min)) ** 2
    if method is MethodKind.METHOD1:
        ratio_sq /= N_min
    n = 1
    while c ** (2 * n) < ratio_sq:
        n += 1
    return n


def plan(N_min, N_max, band, method, x0=None):
    """Geometric sequence of path units covering every N in ``[N_min, N_max]``."""
    method = MethodKind.parse(method)
    N_min, N_max = int(N_min), int(N_max)
    if not 1 <= N_min <= N_max:
        raise PlanningError(f"need 1 <= N_min <= N_max, got [{N_min}, {N_max}]")
    floor_x0 = min_x0(N_max, band, method)
    if x0 is None:
        X0 = floor_x0
    else:
        X0 = exact(x0)
        if X0 < floor_x0:
            raise PlanningError(
                f"x0 = {float(X0):.12g} nm is below the method minimum x0 = {float(floor_x0):.12g} nm "
                f"for N_max = {N_max}"
            )
    n = _count(method, X0, band, N_min)
    c = band.lam_max / band.lam_min
    xs = [float(X0)]
    for _ in range(n - 1):
        xs.append(xs[-1] / c)
    return SequencePlan(method, band, N_min, N_max, float(X0), c, n, tuple(xs))


@dataclass
class CoverageProof:
    """Per-interferogram trial-factor windows for one N and who owns what.

    ``windows[i]`` is the real interval read by interferogram ``i``;
    ``owned[i]`` the integers it is responsible for (shared endpoints go to
    the lower index, so the owned ranges are disjoint).
    """

    N: int
    method: MethodKind
    windows: list
    owned: list
    target: tuple

    def index_of(self, ell):
        for i, (lo, hi) in enumerate(self.owned):
            if lo <= ell <= hi:
                return i
        return None

    def to_dict(self):
        return {
            "N": self.N,
            "method": self.method.value,
            "target": list(self.target),
            "windows": [list(w) for w in self.windows],
            "owned": [list(o) for o in self.owned],
        }


def _owned_ranges(N, windows):
    owned, nxt = [], 2
    for lo, hi in windows:
        a = max(nxt, math.ceil(lo * (1 - ABUT_RTOL)))
        b = min(N, math.floor(hi * (1 + ABUT_RTOL)))
        owned.append((a, b))
        nxt = max(nxt, b + 1)
    return owned


def verify_coverage(plan, N):
    """Check that the plan's windows abut and contain the method's target for N.

    Raises :class:`CoverageViolation` listing uncovered sub-intervals.
    """
    N = int(N)
    if not plan.N_min <= N <= plan.N_max:
        raise PlanningError(f"N = {N} outside plan range [{plan.N_min}, {plan.N_max}]")
    lo_l, hi_l = plan.band.lam_min, plan.band.lam_max
    windows = [(N * lo_l / x, N * hi_l / x) for x in plan.xs]
    gaps = []
    for (_, up), (low, _) in zip(windows, windows[1:]):
        if low > up * (1 + ABUT_RTOL):
            gaps.append((up, low))
    t_lo, t_hi = target_interval(plan.method, N)
    if windows and windows[0][0] > t_lo * (1 + ABUT_RTOL):
        gaps.insert(0, (t_lo, windows[0][0]))
    if windows and windows[-1][1] < t_hi * (1 - ABUT_RTOL):
        gaps.append((windows[-1][1], t_hi))
    # only gaps overlapping the target matter
    gaps = [(max(a, t_lo), min(b, t_hi)) for a, b in gaps if b > t_lo and a < t_hi]
    if gaps:
        desc = ", ".join(f"({a:.6g}, {b:.6g})" for a, b in gaps)
        raise CoverageViolation(f"trial factors of N = {N} left unchecked in {desc}", gaps)
    return CoverageProof(N, plan.method, windows, _owned_ranges(N, windows), (t_lo, t_hi))


# -- uncertainty ------------------------------------------------------------

@dataclass(frozen=True)
class UncertaintyBudget:
    lam: float
    x: float
    dlam: float
    dx: float
    N: int
    d_xi: float
    d_xi_N: float
    l_max: int
    resolvable: bool
    discriminable: bool


def uncertainty(lam, x, dlam, dx, N, l_max=None):
    """Error in xi = lam/x from errors in wavelength and path unit.

    ``resolvable`` means adjacent integer trial factors stay apart
    (d_xi_N < 1/2); ``discriminable`` applies the stricter bound
    d_xi_N < 1/(2 l_max), with ``l_max`` defaulting to the trial factor read
    at ``lam``.
    """
    if not (lam > 0 and x > 0) or dlam < 0 or dx < 0:
        raise DomainError("need positive lam, x and non-negative errors")
    d_xi = lam / (x * x) * dx + dlam / x
    d_xi_N = N * d_xi
    if l_max is None:
        l_max = max(2, round(N * lam / x))
    return UncertaintyBudget(lam, x, dlam, dx, N, d_xi, d_xi_N, l_max,
                             d_xi_N < 0.5, d_xi_N < 1.0 / (2 * l_max))


# -- running a sequence -----------------------------------------------------

@dataclass
class SequenceReport(FactorReport):
    """Merged report for one N over all interferograms of a plan.

    ``sources`` maps each checked trial factor to the interferogram index
    that read it.
    """

    sources: dict = field(default_factory=dict)
    complete: bool = False
    certified_prime: bool = False
    method: MethodKind = MethodKind.METHOD1

    def to_dict(self):
        d = super().to_dict()
        d.update(
            method=self.method.value,
            complete=self.complete,
            certified_prime=self.certified_prime,
            sources={str(k): v for k, v in sorted(self.sources.items())},
        )
        return d


AUTO_SAMPLES_PER_FRINGE = 24


def auto_step(cfg, x, band, default=0.01):
    """Hardware step unless the fringes at ``x`` need a finer grid."""
    return min(default, max_step(cfg, x, band) * 8 / AUTO_SAMPLES_PER_FRINGE)


def sequence_setups(plan, cfg=SumConfig(), noise=None, dlam=None):
    noise = noise or NoiseSpec()
    setups = []
    for i, x in enumerate(plan.xs):
        step = auto_step(cfg, x, plan.band) if dlam is None else dlam
        n_i = NoiseSpec(noise.sigma_I, noise.dlam_cal, noise.dx_cal, noise.amp, noise.seed + i)
        setups.append(SetupSpec(cfg, x, plan.band, step, n_i))
    return setups


def run_sequence(plan, Ns, noise=None, dlam=None, cfg=SumConfig(), rho=analysis.DEFAULT_RHO):
    """Simulate every interferogram of ``plan`` and factor each N across them.

    Interferogram ``i`` uses seed ``noise.seed + i``. ``dlam=None`` picks the
    0.01 nm hardware step, refined where the fringes demand it.
    """
    Ns = [int(N) for N in Ns]
    for N in Ns:
        if not plan.N_min <= N <= plan.N_max:
            raise PlanningError(f"N = {N} outside plan range [{plan.N_min}, {plan.N_max}]")
    proofs = {N: verify_coverage(plan, N) for N in Ns}
    reports = {N: SequenceReport(N, Interval(2, 1), [], rho, method=plan.method) for N in Ns}

    for i, setup in enumerate(sequence_setups(plan, cfg, noise, dlam)):
        ig = simulate(setup)
        for N in Ns:
            lo, hi = proofs[N].owned[i]
            lo = max(lo, 3)
            if lo > hi:
                continue
            for check in analysis.scan_range(ig, N, lo, hi, rho):
                reports[N].checks.append(check)
                reports[N].sources[check.ell] = i

    for N, rep in reports.items():
        checked = sorted(rep.sources)
        rep.covered = Interval(checked[0], checked[-1]) if checked else Interval(2, 1)
        rep.coverage_empty = not checked
        t_lo, t_hi = target_interval(plan.method, N)
        need = range(max(3, math.ceil(t_lo)), math.floor(t_hi) + 1)
        rep.complete = all(ell in rep.sources for ell in need)
        # a proper divisor inside the target proves compositeness
        proper = [f for f in rep.factors if f in need and f != N]
        rep.certified_prime = rep.complete and N >= 3 and N % 2 == 1 and not proper
    return [reports[N] for N in Ns]
