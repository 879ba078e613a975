"""Exact reference computations used to validate the fast paths.

Everything here favors transparency over speed: enumeration over all 2^m
sequences, rational arithmetic, and a closed-form single-shift law that is
derived independently of the bit-twiddling kernel. Enumeration is capped at
EXHAUSTIVE_MAX_M.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import evenseq
from .autocorr import full_spectrum
from .errors import FeasibilityError, InvalidInputError, UnsupportedInputError
from .evenseq import LemmaReport
from .seqcore import BinarySequence, is_prime

EXHAUSTIVE_MAX_M = 22      # max length for 2^m enumeration
_ENUM_CHUNK = 1 << 16      # sequences per enumeration chunk
_MOMENT_CHUNK = 512        # rows per chunk when accumulating large powers


@dataclass(frozen=True)
class ExactPmf:
    """Distribution of one autocorrelation coordinate as exact rationals."""

    m: int
    support: tuple  # ((value, Fraction probability), ...) sorted by value

    def total_mass(self) -> Fraction:
        return sum((p for _, p in self.support), Fraction(0))

    def mean(self) -> Fraction:
        return sum((v * p for v, p in self.support), Fraction(0))

    def tail_geq_abs(self, t) -> Fraction:
        """P(|value| >= t)."""
        return sum((p for v, p in self.support if abs(v) >= t), Fraction(0))


def exact_pmf_Cu(m: int) -> ExactPmf:
    """Law of any single nontrivial shift coordinate for odd prime m.

    For u != 0 the pairs {i, i-u} tuple into (m-1)/2 transpositions plus a
    residual term whose sign is determined by the parity of the number of
    -1 draws among the free coordinates: with n = m - 1 and k the number of
    sign flips among the free spins, the coordinate equals (n - 2k) + (-1)^k.
    """
    if not is_prime(m) or m == 2:
        raise UnsupportedInputError("closed-form single-shift law needs an odd prime")
    n = m - 1
    probs: dict = {}
    c = 1  # running binomial coefficient comb(n, k)
    denom = Fraction(1, 2 ** n)
    for k in range(n + 1):
        v = (n - 2 * k) + (-1) ** k
        probs[v] = probs.get(v, Fraction(0)) + c * denom
        c = c * (n - k) // (k + 1)
    return ExactPmf(m, tuple(sorted(probs.items())))


def _sign_matrix(m: int, start: int, stop: int) -> np.ndarray:
    # rows start..stop-1 as +-1 values; row r encodes bits of r, bit=1 -> -1
    idx = np.arange(start, stop, dtype=np.uint64)[:, None]
    bits = (idx >> np.arange(m, dtype=np.uint64)[None, :]) & 1
    return 1 - 2 * bits.astype(np.int64)


def _check_enum_cap(m: int):
    if m > EXHAUSTIVE_MAX_M:
        raise FeasibilityError(
            f"m = {m} exceeds EXHAUSTIVE_MAX_M ({EXHAUSTIVE_MAX_M})",
            cap_name="EXHAUSTIVE_MAX_M", cap_value=EXHAUSTIVE_MAX_M)
    if m < 1:
        raise InvalidInputError("m must be positive")


def exhaustive_pmf_Cu(m: int, u: int) -> ExactPmf:
    """Law of one shift coordinate by enumerating all 2^m sequences."""
    _check_enum_cap(m)
    if not 1 <= u <= m - 1:
        raise InvalidInputError("u must satisfy 1 <= u <= m-1")
    counts: dict = {}
    for start in range(0, 1 << m, _ENUM_CHUNK):
        V = _sign_matrix(m, start, min(start + _ENUM_CHUNK, 1 << m))
        c = (V * np.roll(V, -u, axis=1)).sum(axis=1)
        vals, cnt = np.unique(c, return_counts=True)
        for v, k in zip(vals.tolist(), cnt.tolist()):
            counts[v] = counts.get(v, 0) + k
    denom = Fraction(1, 2 ** m)
    return ExactPmf(m, tuple(sorted((v, k * denom) for v, k in counts.items())))


def _max_abs_nontrivial(V: np.ndarray, m: int) -> np.ndarray:
    best = np.zeros(len(V), dtype=np.int64)
    for u in range(1, m // 2 + 1):
        c = np.abs((V * np.roll(V, -u, axis=1)).sum(axis=1))
        np.maximum(best, c, out=best)
    return best


def exhaustive_expectation_C(m: int) -> Fraction:
    """E[max nontrivial |C_u|] over the uniform measure, exact."""
    _check_enum_cap(m)
    if m < 2:
        raise InvalidInputError("need m >= 2 for a nontrivial shift")
    total = 0
    for start in range(0, 1 << m, _ENUM_CHUNK):
        V = _sign_matrix(m, start, min(start + _ENUM_CHUNK, 1 << m))
        total += int(_max_abs_nontrivial(V, m).sum())
    return Fraction(total, 2 ** m)


def exhaustive_max_pmf(m: int) -> ExactPmf:
    """Law of the max nontrivial |C_u| by enumeration."""
    _check_enum_cap(m)
    if m < 2:
        raise InvalidInputError("need m >= 2 for a nontrivial shift")
    counts: dict = {}
    for start in range(0, 1 << m, _ENUM_CHUNK):
        V = _sign_matrix(m, start, min(start + _ENUM_CHUNK, 1 << m))
        vals, cnt = np.unique(_max_abs_nontrivial(V, m), return_counts=True)
        for v, k in zip(vals.tolist(), cnt.tolist()):
            counts[v] = counts.get(v, 0) + k
    denom = Fraction(1, 2 ** m)
    return ExactPmf(m, tuple(sorted((v, k * denom) for v, k in counts.items())))


def exact_event_probability(m: int, predicate) -> Fraction:
    """P(predicate(spectrum)) over the uniform measure, by enumeration.

    predicate receives the full spectrum as an int64 array of length m
    (index 0 holds the trivial coordinate m).
    """
    _check_enum_cap(m)
    hits = 0
    for bits in range(1 << m):
        spec = full_spectrum(BinarySequence(m, bits))
        if predicate(spec.values):
            hits += 1
    return Fraction(hits, 2 ** m)


@dataclass(frozen=True)
class IndependenceReport:
    """Exact joint-distribution audit of the pair products s_x s_{x+u}."""

    m: int
    u: int
    plan: dict
    subsets_tested: int
    total_violations: int
    violations: tuple  # first few offenders, each a dict

    @property
    def exact(self) -> bool:
        return self.total_violations == 0

    def to_json_dict(self) -> dict:
        def conv(v):
            if isinstance(v, Fraction):
                return f"{v.numerator}/{v.denominator}"
            if isinstance(v, dict):
                return {str(k): conv(x) for k, x in v.items()}
            if isinstance(v, (list, tuple)):
                return [conv(x) for x in v]
            return v
        return {"m": self.m, "u": self.u, "plan": conv(self.plan),
                "subsets_tested": self.subsets_tested, "exact": self.exact,
                "total_violations": self.total_violations,
                "violations": conv(self.violations)}


_VIOLATION_RECORD_CAP = 50


def verify_independence(m: int, u: int, *, max_subset_size: int = 3,
                        include_full: bool = True, n_random: int = 1000,
                        seed: int = 0) -> IndependenceReport:
    """Exact joint-independence audit of X_x = s_x s_{x+u} for x in F_m^*.

    For each tested subset E of {1..m-1} and every sign pattern b over E,
    the number of sequences realizing the pattern is compared against the
    independence prediction 2^(m-|E|). Tests all subsets of size up to
    max_subset_size, the full set, and n_random seeded random subsets.
    Zero violations are expected when m is prime; for composite m the
    offending subsets are returned (e.g. m=4, u=2 where X_1 = X_3).
    """
    _check_enum_cap(m)
    if not 1 <= u <= m - 1:
        raise InvalidInputError("u must satisfy 1 <= u <= m-1")
    if m < 2:
        raise InvalidInputError("m must be >= 2")
    nvars = m - 1
    # one histogram over the full joint sign pattern serves every subset
    count_full = np.zeros(1 << nvars, dtype=np.int64)
    for start in range(0, 1 << m, _ENUM_CHUNK):
        V = _sign_matrix(m, start, min(start + _ENUM_CHUNK, 1 << m))
        pat = np.zeros(len(V), dtype=np.int64)
        for x in range(1, m):
            neg = (V[:, x] * V[:, (x + u) % m]) < 0
            pat |= neg.astype(np.int64) << (x - 1)
        count_full += np.bincount(pat, minlength=1 << nvars)

    masks: list = []
    seen = set()

    def add_mask(mask: int):
        if mask and mask not in seen:
            seen.add(mask)
            masks.append(mask)

    for mask in range(1, 1 << nvars):
        if mask.bit_count() <= max_subset_size:
            add_mask(mask)
    if include_full:
        add_mask((1 << nvars) - 1)
    rng = np.random.Generator(np.random.Philox(
        key=np.array([seed, 0], dtype=np.uint64)))
    for _ in range(n_random):
        size = int(rng.integers(1, nvars + 1))
        picks = rng.choice(nvars, size=size, replace=False)
        add_mask(int(np.bitwise_or.reduce(1 << picks.astype(np.int64))))

    idx = np.arange(1 << nvars, dtype=np.int64)
    total_violations = 0
    recorded: list = []
    for mask in masks:
        K = mask.bit_count()
        expected = 1 << (m - K)
        counts = np.bincount(idx & mask, weights=count_full,
                             minlength=mask + 1).astype(np.int64)
        patterns = np.unique(idx & mask)
        bad = patterns[counts[patterns] != expected]
        total_violations += len(bad)
        for w in bad[: max(0, _VIOLATION_RECORD_CAP - len(recorded))]:
            subset = [x for x in range(1, m) if mask >> (x - 1) & 1]
            signs = {x: -1 if int(w) >> (x - 1) & 1 else 1 for x in subset}
            recorded.append({
                "subset": subset, "signs": signs,
                "count": int(counts[int(w)]), "expected": expected,
                "probability": Fraction(int(counts[int(w)]), 1 << m)})
    plan = {"max_subset_size": max_subset_size, "include_full": include_full,
            "n_random_requested": n_random, "seed": seed,
            "n_subsets_unique": len(masks)}
    return IndependenceReport(m=m, u=u, plan=plan, subsets_tested=len(masks),
                              total_violations=total_violations,
                              violations=tuple(recorded))


@dataclass(frozen=True)
class JointMoment:
    """Sum over all sequences of (C_a C_b)^(2p) and the exact expectation."""

    m: int
    a: int
    b: int
    p: int
    total: int

    @property
    def expectation(self) -> Fraction:
        return Fraction(self.total, 2 ** self.m)


def exact_joint_moment(m: int, a: int, b: int, p: int, *,
                       cross_check: bool = True) -> JointMoment:
    """Sum_S (C_a C_b)^(2p) over all 2^m sequences, by enumeration.

    The expectation total / 2^m equals the even-template count E(xi) for
    xi holding a and b each 2p times; with cross_check that identity is
    asserted (both sides exact, so any mismatch raises).
    """
    _check_enum_cap(m)
    if not (1 <= a < m and 1 <= b < m):
        raise InvalidInputError("a and b must be nonzero shifts")
    if p < 1:
        raise InvalidInputError("p must be >= 1")
    total = 0
    for start in range(0, 1 << m, _MOMENT_CHUNK):
        V = _sign_matrix(m, start, min(start + _MOMENT_CHUNK, 1 << m))
        ca = (V * np.roll(V, -a, axis=1)).sum(axis=1)
        cb = (V * np.roll(V, -b, axis=1)).sum(axis=1)
        prod = (ca * cb).astype(object) ** (2 * p)
        total += int(prod.sum())
    if cross_check and a != b:
        xi = evenseq.XiSequence(m, (a,) * (2 * p) + (b,) * (2 * p))
        exi = evenseq.count_xi_even(xi)
        if total != exi << m:
            raise AssertionError(
                f"moment/count disagreement at m={m} a={a} b={b} p={p}: "
                f"sum = {total}, 2^m E(xi) = {exi << m}")
    return JointMoment(m=m, a=a, b=b, p=p, total=total)


def check_pair_tail_bound(m: int, a: int, b: int, p: int,
                          theta1, theta2) -> LemmaReport:
    """P(|C_a| >= t1 and |C_b| >= t2) <= E[(C_a C_b)^(2p)] / (t1 t2)^(2p).

    Both sides exact: the probability by enumeration, the thresholds
    rationalized, the moment an exact integer.
    """
    if theta1 <= 0 or theta2 <= 0:
        raise InvalidInputError("thresholds must be positive")
    t1 = Fraction(theta1).limit_denominator(10**6)
    t2 = Fraction(theta2).limit_denominator(10**6)
    lhs = exact_event_probability(
        m, lambda v: abs(int(v[a])) >= t1 and abs(int(v[b])) >= t2)
    rhs = exact_joint_moment(m, a, b, p, cross_check=False).expectation \
        / (t1 * t2) ** (2 * p)
    rep = LemmaReport("eq1", {"m": m, "a": a, "b": b, "p": p,
                              "theta1": float(t1), "theta2": float(t2)},
                      lhs=lhs, rhs=rhs)
    if lhs > rhs:
        rep.verdict = "FAIL"
    return rep


def exact_abs_tail(m: int, t: int) -> Fraction:
    """P(|coordinate| >= t) under the closed-form law, exact."""
    return exact_pmf_Cu(m).tail_geq_abs(t)


def abs_tail_probability(m: int, t: float) -> float:
    """P(|coordinate| >= t) for odd prime m, floating point, log-space.

    Matches exact_abs_tail to ~1e-13 relative on overlapping inputs but
    stays finite far into the tail where the rational path is expensive.
    The coordinate is (n - 2k) + (-1)^k with n = m - 1 and k binomial:
    value >= t on the even-k side means k <= (n + 1 - t)/2, on the odd-k
    side k <= (n - 1 - t)/2, and the lower tail mirrors by k -> n - k.
    """
    if not is_prime(m) or m == 2:
        raise UnsupportedInputError("closed-form single-shift law needs an odd prime")
    if t <= 0:
        return 1.0
    if t > m:
        return 0.0
    n = m - 1
    log_half_n = n * math.log(0.5)

    def lp(k: int) -> float:
        return math.lgamma(n + 1) - math.lgamma(k + 1) - math.lgamma(n - k + 1) + log_half_n

    def head_mass(k_hi: int, parity: int) -> float:
        # sum of pmf(k) for k <= k_hi with k = parity (mod 2), descending ratio
        k = k_hi - (k_hi % 2 != parity)
        if k < 0:
            return 0.0
        base = lp(k)
        terms = [1.0]
        term = 1.0
        running = 1.0
        while k >= 2:
            term *= (k * (k - 1)) / ((n - k + 1) * (n - k + 2))
            terms.append(term)
            running += term
            if term < running * 1e-18:
                break
            k -= 2
        return math.exp(base) * math.fsum(terms)

    # upper tail: value = n - 2k + (-1)^k >= t
    k_even = math.floor((n + 1 - t) / 2)
    k_odd = math.floor((n - 1 - t) / 2)
    up = 0.0
    if k_even >= 0:
        up += head_mass(k_even, 0)
    if k_odd >= 0:
        up += head_mass(k_odd, 1)
    # lower tail: value <= -t; mirror j = n - k keeps pmf and parity (n even),
    # turning the conditions into j <= (n - t - 1)/2 (even j), (n - t + 1)/2 (odd)
    j_even = math.floor((n - t - 1) / 2)
    j_odd = math.floor((n - t + 1) / 2)
    down = 0.0
    if j_even >= 0:
        down += head_mass(j_even, 0)
    if j_odd >= 0:
        down += head_mass(j_odd, 1)
    return min(1.0, up + down)


def oracle_expected_max(m: int) -> float:
    """E[C] approximation treating the (m-1)/2 distinct coordinates as independent.

    Uses the exact single-coordinate law: with G(t) = P(|C_u| >= t) and
    M = (m-1)/2 coordinates, E[max] = sum_t 1 - (1 - G(t))^M over t >= 1,
    evaluated stably via expm1/log1p. Exact at m = 3 (a single coordinate);
    an approximation above that, empirically within a few percent.
    """
    if not is_prime(m) or m == 2:
        raise UnsupportedInputError("closed-form single-shift law needs an odd prime")
    if m > 10**6:
        raise FeasibilityError(f"m = {m} exceeds ORACLE_MAX_M (10^6)",
                               cap_name="ORACLE_MAX_M", cap_value=10**6)
    n = m - 1
    k = np.arange(n + 1)
    logpmf = np.zeros(n + 1)
    # log comb(n, k) by cumulative log ratios, then shift by n log 1/2
    ratios = np.log((n - k[:-1]) / (k[:-1] + 1.0))
    logpmf[1:] = np.cumsum(ratios)
    logpmf += n * math.log(0.5)
    vals = (n - 2 * k) + (-1) ** k
    pmf = np.exp(logpmf)
    absv = np.abs(vals).astype(np.int64)
    w = np.bincount(absv, weights=pmf)
    # G[t] = P(|value| >= t); suffix sums of the abs-value histogram
    G = np.cumsum(w[::-1])[::-1]
    M = (m - 1) // 2
    t = np.arange(1, len(G))
    with np.errstate(divide="ignore"):
        log1mG = np.log1p(-np.minimum(G[1:], 1.0))
    return float(np.sum(-np.expm1(M * log1mG)))
