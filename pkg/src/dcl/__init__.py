"""Diophantine-constrained primes: certified kernels and desk experiments.

Library layout:

- ``intervals``: dyadic interval arithmetic with MPFR-backed transcendentals
- ``quadratic``: exact quadratic irrationals and continued fractions
- ``torus``: phases on R/Z, nearest-integer distance, Dirichlet approximation
- ``params``: exponent system and validated scale hierarchies
- ``primes``: segmented sieve, von Mangoldt weights, the sharp cutoff
- ``bump``: the smoothing weight and its certified Fourier data
- ``ntt``: exact integer convolution over word-sized prime fields
- ``circle``: exponential sums, exceptional sets, arcs and their checks
- ``additive``: progression counts, Goldbach scans, variance, arc split
- ``cli``: the ``dcl`` command
"""

from .bump import BumpFunction, FourierCoeffs, fourier_coefficient, fourier_coeffs
from .config import RunConfig, load_config, parse_config, save_config
from .intervals import CertifiedInterval, refine_until, set_precision_cap
from .params import (
    NPower,
    ParameterSet,
    build_parameter_set,
    choose_eta,
    choose_goldbach_mu,
    choose_J,
    derive_N,
    desk_parameters,
    effective_delta,
    mu_star,
)
from .primes import (
    DiophantineSet,
    PrimeSegment,
    WeightedSequence,
    bohr_weight_sum,
    chebyshev_psi,
    diophantine_primes,
    primes_up_to,
    sieve_segment,
    von_mangoldt,
    weighted_lambda_sequence,
)
from .quadratic import (
    Convergent,
    QuadraticIrrational,
    cf_expansion,
    convergent_below,
    parse_alpha,
)
from .torus import TorusPoint, dirichlet_approx, nearest_int_distance, phase

__version__ = "0.1.0"

__all__ = [
    "BumpFunction",
    "CertifiedInterval",
    "Convergent",
    "DiophantineSet",
    "FourierCoeffs",
    "NPower",
    "ParameterSet",
    "PrimeSegment",
    "QuadraticIrrational",
    "RunConfig",
    "TorusPoint",
    "WeightedSequence",
    "bohr_weight_sum",
    "build_parameter_set",
    "cf_expansion",
    "chebyshev_psi",
    "choose_J",
    "choose_eta",
    "choose_goldbach_mu",
    "convergent_below",
    "derive_N",
    "desk_parameters",
    "diophantine_primes",
    "dirichlet_approx",
    "effective_delta",
    "fourier_coefficient",
    "fourier_coeffs",
    "load_config",
    "mu_star",
    "nearest_int_distance",
    "parse_alpha",
    "parse_config",
    "phase",
    "primes_up_to",
    "refine_until",
    "save_config",
    "set_precision_cap",
    "sieve_segment",
    "von_mangoldt",
    "weighted_lambda_sequence",
]
