"""Simulation and analysis of exponential-sum interferograms for factoring."""

from .analysis import FactorReport, TrialCheck, check_trial, coverage, factor_scan, locate_maxima, multi_scan, sample_at
from .instrument import Band, Interferogram, NoiseSpec, SetupSpec, read_interferogram, simulate, write_interferogram
from .planner import MethodKind, SequencePlan, max_single, plan, run_sequence, single_range, uncertainty, verify_coverage
from .sumcore import SumConfig, ctes_intensity, intensity_at_wavelength, nonfactor_ceiling, nonfactor_ceilings, rescaled_intensity

__version__ = "0.1.0"
