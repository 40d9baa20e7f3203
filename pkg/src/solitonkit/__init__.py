"""Numerical toolkit for solitons: KdV and NLS propagation, collision dynamics,
squeezing statistics, polychromatic solitons and wavelet analysis."""
from .exceptions import (ConfigurationError, DomainError, FitConvergenceError,
                         IncompleteCollisionError, NumericalInstabilityError, SolitonKitError,
                         ValidationError)
from .field import ComplexEnvelope, Grid1D, PulseSpec, RealField, make_grid, make_pulse
from .kdv import KdvRunConfig, KdvSolitonSpec, kdv_collision_report, kdv_propagate, kdv_soliton_profile
from .nls import GuidingFilter, NlsParams, WdmConfig, encode_nrz, nls_propagate, wdm_propagate
from .collision import CollisionParams, CollisionState, simulate_collision
from .squeeze import SqueezeParams, fit_sech2_envelope, min_quadrature_variance
from .pcs import PcsParams, pcs_propagate, pcs_stationary_amplitudes
from .wavelets import compress_threshold, dwt_forward, dwt_inverse, get_filter, wft_spectrogram
from .scenarios import RunReport, emit_report, run_scenario

__version__ = "0.1.0"
