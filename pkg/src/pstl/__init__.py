"""Numerical laboratory for ``[p1^c] + [p2^c] + [p3^c] = N`` in primes near squares."""

__version__ = "0.1.0"

from .params import Params, ParamsError, derive, derive_from_n, with_overrides
from .primes import (PrimeRecord, PrimeTable, near_square_subset, nearest_int_distance,
                     primes_upto, sieve)
from .smoothing import BumpSpec, chi, chi_series, tail_bound
from .expsums import (FloorPowerMap, H_smooth, S, U, V, c_h, exact_integral_power,
                      floor_power, lemma2_residual, lemma3_rhs, sup_V_scan, v1_v2_rhs)
from .representations import (WeightedSpectrum, build_spectrum, gamma_sharp, gamma_smooth,
                              main_term, ratio_scan, ternary_count)

__all__ = [
    "Params", "ParamsError", "derive", "derive_from_n", "with_overrides",
    "PrimeRecord", "PrimeTable", "near_square_subset", "nearest_int_distance",
    "primes_upto", "sieve",
    "BumpSpec", "chi", "chi_series", "tail_bound",
    "FloorPowerMap", "H_smooth", "S", "U", "V", "c_h", "exact_integral_power",
    "floor_power", "lemma2_residual", "lemma3_rhs", "sup_V_scan", "v1_v2_rhs",
    "WeightedSpectrum", "build_spectrum", "gamma_sharp", "gamma_smooth", "main_term",
    "ratio_scan", "ternary_count",
]
