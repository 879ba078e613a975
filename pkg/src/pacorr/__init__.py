"""Exact and Monte Carlo tools for periodic autocorrelations of binary sequences.

The library computes autocorrelation spectra of +-1 sequences with a
bit-packed popcount kernel, reproduces the concentration of the max
statistic around sqrt(2 m ln m) empirically, and verifies the supporting
probabilistic and combinatorial inequalities against exact enumeration.
"""

from .autocorr import (AutocorrSpectrum, aperiodic_autocorrelation,
                       full_spectrum, naive_spectrum, periodic_autocorrelation,
                       truncated_max, truncated_values)
from .errors import (FeasibilityError, InvalidInputError, InvalidLengthError,
                     InvalidShiftError, PremiseError, UnsupportedInputError)
from .seqcore import (BinarySequence, RngStream, constant_sequence, is_prime,
                      legendre_sequence, next_prime, primes_between,
                      read_sequences, sample_uniform, write_sequences)

__version__ = "0.1.0"

__all__ = [
    "AutocorrSpectrum", "BinarySequence", "RngStream",
    "aperiodic_autocorrelation", "constant_sequence", "full_spectrum",
    "is_prime", "legendre_sequence", "naive_spectrum", "next_prime",
    "periodic_autocorrelation", "primes_between", "read_sequences",
    "sample_uniform", "truncated_max", "truncated_values", "write_sequences",
    "FeasibilityError", "InvalidInputError", "InvalidLengthError",
    "InvalidShiftError", "PremiseError", "UnsupportedInputError",
    "__version__",
]
