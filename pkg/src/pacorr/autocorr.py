"""Exact cyclic and acyclic autocorrelations of packed +-1 sequences.

Fast path: with the bit convention of seqcore, the shift-u correlation is
m - 2 * popcount(bits XOR rotate(bits, u)). Rotation is done on a doubled
integer so each shift is a single big-int operation; gmpy2 supplies the
wide popcount. A plain O(m^2) numpy oracle is kept for equivalence tests.
"""

from __future__ import annotations

from dataclasses import dataclass

import gmpy2
import numpy as np

from .errors import InvalidLengthError, InvalidShiftError
from .seqcore import BinarySequence


@dataclass(frozen=True, eq=False)
class AutocorrSpectrum:
    """All shift correlations of one sequence.

    values[u] is the shift-u correlation for u in [0, m); values[0] = m.
    max_nontrivial is max |values[u]| over u != 0.
    """

    m: int
    values: np.ndarray
    max_nontrivial: int


def periodic_autocorrelation(S: BinarySequence, u: int) -> int:
    """Sum of s_i * s_{i+u} over all i, indices mod m. Exact integer."""
    m = S.m
    if not 0 <= u < m:
        raise InvalidShiftError(f"shift must be in [0, {m}), got {u}")
    mask = (1 << m) - 1
    rot = ((S.bits >> u) | (S.bits << (m - u))) & mask
    return m - 2 * (S.bits ^ rot).bit_count()


def full_spectrum(S: BinarySequence) -> AutocorrSpectrum:
    """All m correlations by XOR + popcount; uses values[u] = values[m-u] to halve work."""
    m = S.m
    if m < 2:
        raise InvalidLengthError("spectrum needs m >= 2 (no nonzero shifts otherwise)")
    bits = gmpy2.mpz(S.bits)
    mask = (gmpy2.mpz(1) << m) - 1
    doubled = bits | (bits << m)
    values = np.empty(m, dtype=np.int64)
    values[0] = m
    best = 0
    for u in range(1, m // 2 + 1):
        c = m - 2 * gmpy2.popcount((doubled ^ (doubled >> u)) & mask)
        values[u] = c
        values[m - u] = c
        a = -c if c < 0 else c
        if a > best:
            best = a
    return AutocorrSpectrum(m=m, values=values, max_nontrivial=best)


def naive_spectrum(S: BinarySequence) -> np.ndarray:
    """Reference implementation: decode and take rolled dot products. Quadratic."""
    v = S.values().astype(np.int64)
    return np.array([int(np.dot(v, np.roll(v, -u))) for u in range(S.m)], dtype=np.int64)


def aperiodic_autocorrelation(S: BinarySequence, u: int) -> int:
    """Sum of s_k * s_{k+u} over the m-u in-range pairs only (no wrap)."""
    m = S.m
    if not 0 <= u < m:
        raise InvalidShiftError(f"shift must be in [0, {m}), got {u}")
    v = S.values().astype(np.int64)
    return int(np.dot(v[: m - u], v[u:]))


def truncated_values(S: BinarySequence) -> np.ndarray:
    """Shift-u sums excluding the i=0 and i=-u terms, for u in [1, m); slot 0 is unused.

    Each truncated sum equals the full cyclic sum minus s_0*s_u minus s_{m-u}*s_0,
    the two excluded products.
    """
    m = S.m
    if m < 3:
        raise InvalidLengthError("truncated statistic needs m >= 3")
    spec = full_spectrum(S)
    v = S.values().astype(np.int64)
    out = np.zeros(m, dtype=np.int64)
    out[1:] = spec.values[1:] - v[0] * (v[1:] + v[1:][::-1])
    return out


def truncated_max(S: BinarySequence) -> int:
    """Max over u != 0 of |truncated shift-u sum|."""
    t = truncated_values(S)
    return int(np.max(np.abs(t[1:])))
