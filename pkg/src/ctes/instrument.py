"""Virtual multi-path Michelson interferometer read out by a spectrometer.

All lengths are in nanometres. A :class:`SetupSpec` fixes everything needed
to synthesize an :class:`Interferogram`; with a fixed seed the result is
bit-identical between runs.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigurationError, DomainError, ParseError, ValidationError
from .sumcore import SumConfig, ctes_intensity

FORMAT_TAG = "ctes-interferogram v1"
SAMPLES_PER_FRINGE = 8
INTENSITY_CLAMP = (0.0, 1.2)

# spectrometer / translation-stage figures used as defaults
DEFAULT_STEP = 0.01
DEFAULT_WAVELENGTH_ERROR = 0.006
DEFAULT_PATH_ERROR = 10.0
DEFAULT_INTENSITY_NOISE = 0.01


@dataclass(frozen=True)
class Band:
    lam_min: float
    lam_max: float

    def __post_init__(self):
        if not (0 < self.lam_min < self.lam_max) or not math.isfinite(self.lam_max):
            raise DomainError(f"band needs 0 < lam_min < lam_max, got [{self.lam_min}, {self.lam_max}]")

    @property
    def ratio(self):
        return self.lam_max / self.lam_min

    def contains(self, lam, rel_tol=0.0):
        slack = rel_tol * self.lam_max
        return self.lam_min - slack <= lam <= self.lam_max + slack

    @classmethod
    def parse(cls, text):
        """Parse ``"lo:hi"``."""
        try:
            lo, hi = (float(v) for v in str(text).split(":"))
        except ValueError:
            raise DomainError(f"band must look like LO:HI, got {text!r}") from None
        return cls(lo, hi)


@dataclass(frozen=True)
class NoiseSpec:
    """Instrument imperfections.

    ``sigma_I`` is per-sample additive Gaussian noise on the normalized
    intensity; ``dlam_cal`` bounds a static per-pixel wavelength reading
    error; ``dx_cal`` bounds a static per-arm path error; ``amp`` gives
    relative arm amplitudes (``None`` means balanced).
    """

    sigma_I: float = 0.0
    dlam_cal: float = 0.0
    dx_cal: float = 0.0
    amp: tuple | None = None
    seed: int = 0

    def __post_init__(self):
        if self.sigma_I < 0 or self.dlam_cal < 0 or self.dx_cal < 0:
            raise DomainError("noise magnitudes must be non-negative")
        if self.amp is not None:
            object.__setattr__(self, "amp", tuple(float(a) for a in self.amp))
            if any(not a > 0 for a in self.amp):
                raise DomainError("arm amplitudes must be positive")

    @classmethod
    def hardware_default(cls, seed=0):
        return cls(DEFAULT_INTENSITY_NOISE, DEFAULT_WAVELENGTH_ERROR, DEFAULT_PATH_ERROR, None, seed)

    @property
    def is_zero(self):
        return self.sigma_I == 0 and self.dlam_cal == 0 and self.dx_cal == 0


@dataclass(frozen=True)
class SetupSpec:
    cfg: SumConfig
    x: float
    band: Band
    dlam: float = DEFAULT_STEP
    noise: NoiseSpec = field(default_factory=NoiseSpec)

    def __post_init__(self):
        if not (self.x > 0) or not math.isfinite(self.x):
            raise DomainError(f"displacement unit x must be positive, got {self.x}")
        if not (self.dlam > 0):
            raise DomainError(f"grid step must be positive, got {self.dlam}")
        if self.noise.amp is not None and len(self.noise.amp) != self.cfg.M:
            raise DomainError(f"need {self.cfg.M} arm amplitudes, got {len(self.noise.amp)}")
        if self.band.lam_max - self.band.lam_min < 2 * self.dlam:
            raise ConfigurationError(f"band narrower than two grid steps of {self.dlam} nm")
        bound = max_step(self.cfg, self.x, self.band)
        if self.dlam > bound:
            raise ConfigurationError(
                f"grid step {self.dlam} nm undersamples the fringes; "
                f"need dlam <= {bound:.6g} nm ({SAMPLES_PER_FRINGE} samples per fringe at {self.band.lam_min} nm)"
            )


def path_offsets(setup):
    """Arm lengths relative to the reference path: (m-1)^j * x."""
    return [e * setup.x for e in setup.cfg.exponents]


def _period(cfg, x, lam):
    return lam * lam / ((cfg.M - 1) ** cfg.j * x)


def fringe_period(setup, lam):
    """Local period in wavelength of the fastest interference term."""
    if not setup.band.contains(lam):
        raise DomainError(f"wavelength {lam} nm outside band [{setup.band.lam_min}, {setup.band.lam_max}]")
    return _period(setup.cfg, setup.x, lam)


def max_step(cfg, x, band):
    """Coarsest grid step that still resolves the shortest in-band fringe."""
    return _period(cfg, x, band.lam_min) / SAMPLES_PER_FRINGE


def wavelength_grid(band, dlam):
    """lam_min, lam_min + dlam, ... ending exactly on lam_max.

    A trailing remainder shorter than half a step is absorbed by moving the
    last regular point onto lam_max; a longer one gets its own point.
    """
    span = band.lam_max - band.lam_min
    steps = int(math.floor(span / dlam + 1e-9))
    grid = band.lam_min + dlam * np.arange(steps + 1)
    rest = band.lam_max - grid[-1]
    if rest > 0.5 * dlam:
        grid = np.append(grid, band.lam_max)
    else:
        grid[-1] = band.lam_max
    return grid


@dataclass(frozen=True, eq=False)
class Interferogram:
    setup: SetupSpec
    lam: np.ndarray
    intensity: np.ndarray

    def __post_init__(self):
        lam = np.array(self.lam, dtype=float)
        inten = np.array(self.intensity, dtype=float)
        lam.flags.writeable = False
        inten.flags.writeable = False
        object.__setattr__(self, "lam", lam)
        object.__setattr__(self, "intensity", inten)
        validate(self)

    def __len__(self):
        return len(self.lam)

    def __eq__(self, other):
        if not isinstance(other, Interferogram):
            return NotImplemented
        return (
            self.setup == other.setup
            and np.array_equal(self.lam, other.lam)
            and np.array_equal(self.intensity, other.intensity)
        )

    @property
    def samples(self):
        return list(zip(self.lam.tolist(), self.intensity.tolist()))


def validate(ig):
    lam, inten = ig.lam, ig.intensity
    if lam.ndim != 1 or lam.shape != inten.shape or len(lam) < 3:
        raise ValidationError("an interferogram needs matching 1-D columns with at least 3 samples")
    if not (np.all(np.isfinite(lam)) and np.all(np.isfinite(inten))):
        raise ValidationError("non-finite sample")
    steps = np.diff(lam)
    if np.any(steps <= 0):
        k = int(np.argmax(steps <= 0))
        raise ValidationError(f"wavelengths must increase strictly (sample {k + 1}: {lam[k + 1]} after {lam[k]})")
    band, tol = ig.setup.band, ig.setup.noise.dlam_cal + 1e-9 * ig.setup.band.lam_max
    if abs(lam[0] - band.lam_min) > tol or abs(lam[-1] - band.lam_max) > tol:
        raise ValidationError(f"samples span [{lam[0]}, {lam[-1]}], expected band [{band.lam_min}, {band.lam_max}]")
    lo, hi = INTENSITY_CLAMP
    if np.any(inten < lo) or np.any(inten > hi):
        raise ValidationError(f"intensities must lie in [{lo}, {hi}]")


def _draw_noise(setup, n):
    noise = setup.noise
    rng = np.random.default_rng(noise.seed)
    eps = rng.uniform(-noise.dx_cal, noise.dx_cal, setup.cfg.M)
    # keep recorded abscissae strictly increasing
    eta_bound = min(noise.dlam_cal, 0.45 * setup.dlam)
    eta = rng.uniform(-eta_bound, eta_bound, n)
    gauss = rng.normal(0.0, 1.0, n) * noise.sigma_I
    return eps, eta, gauss


def simulate(setup):
    """Sample the normalized output intensity across the setup's band."""
    grid = wavelength_grid(setup.band, setup.dlam)
    noise = setup.noise
    if noise.is_zero:
        inten = ctes_intensity(setup.cfg, setup.x / grid)
        return Interferogram(setup, grid, np.clip(inten, *INTENSITY_CLAMP))

    eps, eta, gauss = _draw_noise(setup, len(grid))
    amp = np.ones(setup.cfg.M) if noise.amp is None else np.asarray(noise.amp)
    frac = np.mod(setup.x / grid, 1.0)
    re = np.zeros_like(grid)
    im = np.zeros_like(grid)
    for a, e, err in zip(amp, setup.cfg.exponents, eps):
        phi = 2.0 * np.pi * (np.mod(e * frac, 1.0) + err / grid)
        re += a * np.cos(phi)
        im += a * np.sin(phi)
    inten = (re * re + im * im) / amp.sum() ** 2 + gauss
    return Interferogram(setup, grid + eta, np.clip(inten, *INTENSITY_CLAMP))


# -- files ------------------------------------------------------------------

def setup_to_dict(setup):
    n = setup.noise
    return {
        "M": setup.cfg.M,
        "j": setup.cfg.j,
        "x_nm": setup.x,
        "lambda_min_nm": setup.band.lam_min,
        "lambda_max_nm": setup.band.lam_max,
        "dlambda_nm": setup.dlam,
        "noise": {
            "sigma_I": n.sigma_I,
            "dlambda_cal_nm": n.dlam_cal,
            "dx_cal_nm": n.dx_cal,
            "amp": None if n.amp is None else list(n.amp),
            "seed": n.seed,
        },
    }


def setup_from_dict(d):
    try:
        n = d.get("noise") or {}
        noise = NoiseSpec(
            float(n.get("sigma_I", 0.0)),
            float(n.get("dlambda_cal_nm", 0.0)),
            float(n.get("dx_cal_nm", 0.0)),
            n.get("amp"),
            int(n.get("seed", 0)),
        )
        return SetupSpec(
            SumConfig(int(d["M"]), int(d["j"])),
            float(d["x_nm"]),
            Band(float(d["lambda_min_nm"]), float(d["lambda_max_nm"])),
            float(d["dlambda_nm"]),
            noise,
        )
    except KeyError as exc:
        raise ValidationError(f"metadata is missing {exc.args[0]!r}") from None
    except (DomainError, ConfigurationError) as exc:
        raise ValidationError(str(exc)) from None


def write_interferogram(ig, path):
    """Write a CSV body preceded by a commented JSON metadata header.

    Floats are written with ``repr`` so the round trip is exact.
    """
    lines = [f"# {FORMAT_TAG}", "# " + json.dumps(setup_to_dict(ig.setup), sort_keys=True), "lambda_nm,intensity"]
    lines += [f"{lam!r},{val!r}" for lam, val in zip(ig.lam.tolist(), ig.intensity.tolist())]
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def read_interferogram(path):
    with open(path) as fh:
        lines = fh.read().splitlines()
    if not lines or lines[0].strip() != f"# {FORMAT_TAG}":
        raise ParseError(f"missing '# {FORMAT_TAG}' header", line=1)
    if len(lines) < 2 or not lines[1].startswith("#"):
        raise ParseError("missing metadata header", line=2)
    try:
        meta = json.loads(lines[1][1:])
    except json.JSONDecodeError as exc:
        raise ParseError(f"bad metadata JSON: {exc.msg}", line=2) from None
    if len(lines) < 3 or lines[2].strip() != "lambda_nm,intensity":
        raise ParseError("expected column header 'lambda_nm,intensity'", line=3)
    setup = setup_from_dict(meta)
    lam, inten = [], []
    for lineno, text in enumerate(lines[3:], start=4):
        if not text.strip():
            continue
        parts = text.split(",")
        if len(parts) != 2:
            raise ParseError(f"expected 2 columns, got {len(parts)}", line=lineno)
        try:
            lam.append(float(parts[0]))
            inten.append(float(parts[1]))
        except ValueError:
            raise ParseError(f"not a number: {text!r}", line=lineno) from None
    return Interferogram(setup, np.array(lam), np.array(inten))
