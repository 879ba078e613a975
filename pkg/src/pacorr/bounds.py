"""Closed-form probability bounds for the max autocorrelation statistic.

All logarithms are natural. Every evaluator returns a plain float; premise
violations raise or are flagged, never silently produce NaN. The exact
binomial-tail machinery lives here too, with a rational twin used as its
own accuracy oracle at small sizes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from . import oracles
from .errors import FeasibilityError, InvalidInputError, PremiseError
from .seqcore import primes_between

CRAMER_MAX_K = 10**6  # largest sum length for the exact binomial tail


def lambda_m(m: int) -> float:
    """The concentration threshold sqrt(2 m ln m)."""
    if m < 2:
        raise InvalidInputError("m must be >= 2")
    return math.sqrt(2.0 * m * math.log(m))


def normal_cdf_neg(z: float) -> float:
    """Phi(-z), the standard normal lower tail, via erfc (relative error ~1e-15)."""
    return 0.5 * math.erfc(z / math.sqrt(2.0))


def gaussian_tail_sandwich(z: float) -> tuple:
    """(lower, upper) enclosing Phi(-z) for z > 0:
    (1/(sqrt(2 pi) z)) (1 - 1/z^2) exp(-z^2/2) <= Phi(-z) <= (1/(sqrt(2 pi) z)) exp(-z^2/2).
    """
    if z <= 0:
        raise InvalidInputError("sandwich needs z > 0")
    core = math.exp(-z * z / 2.0) / (math.sqrt(2.0 * math.pi) * z)
    return core * (1.0 - 1.0 / (z * z)), core


def union_bound_prop2(m: int, eps: float,
                      include_cardinality_factor: bool = True) -> float:
    """Upper bound on P(C / sqrt(2 m ln m) > 1 + eps).

    Evaluates 2 exp(-(mu - 1)^2 / (2m - 2)) with mu = (1 + eps) sqrt(2 m ln m);
    the default multiplies by the number of nontrivial shifts (m - 1), the
    conservative union-bound reading. eps = 0 is allowed as the degenerate
    threshold-at-lambda case.
    """
    if m < 3:
        raise InvalidInputError("m must be >= 3")
    if eps < 0:
        raise InvalidInputError("eps must be >= 0")
    mu = (1.0 + eps) * lambda_m(m)
    val = 2.0 * math.exp(-((mu - 1.0) ** 2) / (2.0 * m - 2.0))
    if include_cardinality_factor:
        val *= m - 1
    return val


def tail_lower_prop4(m: int) -> float:
    """Lower bound 1 / (2 m sqrt(ln m)) on P(|C_u| >= lambda_m), m prime large."""
    if m < 3:
        raise InvalidInputError("m must be >= 3")
    return 1.0 / (2.0 * m * math.sqrt(math.log(m)))


def pair_bound_prop5(m: int) -> float:
    """Upper bound 6 e^2 / m^2 on P(|C_u| >= lambda ∩ |C_v| >= lambda)."""
    if m < 3:
        raise InvalidInputError("m must be >= 3")
    return 6.0 * math.e ** 2 / (m * m)


def prop5_premise_met(m: int, u: int, v: int) -> bool:
    """Premise u + v < m / (2 ln m) for the pair bound (distinct nonzero shifts)."""
    if not (1 <= u <= m - 1 and 1 <= v <= m - 1) or u == v:
        return False
    return u + v < m / (2.0 * math.log(m))


def mcdiarmid_bound(m: int, theta: float) -> float:
    """2 exp(-theta^2 / (8(m-1))): deviation bound for the truncated statistic
    around its mean under single-coordinate flips."""
    if m < 3:
        raise InvalidInputError("m must be >= 3")
    if theta < 0:
        raise InvalidInputError("theta must be >= 0")
    return 2.0 * math.exp(-(theta * theta) / (8.0 * (m - 1)))


def mcdiarmid_bound_shifted(m: int, theta_prime: float) -> float:
    """2 exp(-(theta' - 4)^2 / (8(m-1))): the same bound carried from the
    truncated statistic to the full one, valid for theta' > 4."""
    if m < 3:
        raise InvalidInputError("m must be >= 3")
    if theta_prime <= 4:
        raise PremiseError("shifted deviation bound needs theta' > 4")
    return 2.0 * math.exp(-((theta_prime - 4.0) ** 2) / (8.0 * (m - 1)))


def bonferroni_lower_lemma9(m: int) -> float:
    """Lower bound 1 / (15 (ln m)^(3/2)) on P(C >= lambda_m), m prime large."""
    if m < 3:
        raise InvalidInputError("m must be >= 3")
    return 1.0 / (15.0 * math.log(m) ** 1.5)


def binom_upper_tail_exact(k: int, t: float) -> Fraction:
    """P(Y >= t) for Y a sum of k fair +-1 steps, exact rational."""
    if k < 1:
        raise InvalidInputError("k must be >= 1")
    if t > k:
        return Fraction(0)
    # Y = k - 2j >= t  <=>  j <= (k - t)/2
    j_max = min(k, math.floor((k - t) / 2.0))
    if j_max < 0:
        return Fraction(0)
    c = 1
    total = 0
    for j in range(j_max + 1):
        total += c
        c = c * (k - j) // (j + 1)
    return Fraction(total, 2 ** k)


def binom_upper_tail(k: int, t: float) -> float:
    """P(Y >= t) for Y a sum of k fair +-1 steps, log-space float.

    Descending-ratio summation anchored at the largest admissible term;
    agrees with the exact rational path to ~1e-13 relative.
    """
    if k < 1:
        raise InvalidInputError("k must be >= 1")
    if k > CRAMER_MAX_K:
        raise FeasibilityError(f"k = {k} exceeds CRAMER_MAX_K ({CRAMER_MAX_K})",
                               cap_name="CRAMER_MAX_K", cap_value=CRAMER_MAX_K)
    if t > k:
        return 0.0
    if t <= -k:
        return 1.0  # full mass: Y >= -k always
    j_max = min(k, math.floor((k - t) / 2.0))
    if j_max < 0:
        return 0.0
    j = j_max
    base = (math.lgamma(k + 1) - math.lgamma(j + 1) - math.lgamma(k - j + 1)
            + k * math.log(0.5))
    terms = [1.0]
    term = 1.0
    running = 1.0
    while j >= 1:
        term *= j / (k - j + 1.0)  # pmf(j-1)/pmf(j)
        terms.append(term)
        running += term
        if term < running * 1e-18:
            break
        j -= 1
    return min(1.0, math.exp(base) * math.fsum(terms))


def sum_abs_tail(k: int, t: float) -> float:
    """P(|Y| >= t) for Y a sum of k fair +-1 steps, t > 0 (symmetry doubles)."""
    if t <= 0:
        return 1.0
    return min(1.0, 2.0 * binom_upper_tail(k, t))


def cramer_ratio(k: int, theta: float) -> float:
    """Exact P(|Y_k| >= theta sqrt(k)) divided by the normal prediction 2 Phi(-theta)."""
    if theta <= 1:
        raise InvalidInputError("theta must exceed 1")
    return sum_abs_tail(k, theta * math.sqrt(k)) / (2.0 * normal_cdf_neg(theta))


def stirling_step(m: int) -> tuple:
    """((2p-1)!!^2 / (2^(2p) (ln m)^(2p)), 3 e^2 / m^2) with p = floor(ln m).

    The first component is evaluated in log space via log-gamma:
    ln (2p-1)!! = lgamma(2p+1) - lgamma(p+1) - p ln 2.
    """
    if m < 3:
        raise InvalidInputError("m must be >= 3")
    p = math.floor(math.log(m))
    if p < 1:
        raise InvalidInputError("need ln m >= 1")
    log_dfac = math.lgamma(2 * p + 1) - math.lgamma(p + 1) - p * math.log(2.0)
    log_val = 2.0 * log_dfac - 2 * p * math.log(2.0) - 2 * p * math.log(math.log(m))
    return math.exp(log_val), 3.0 * math.e ** 2 / (m * m)


@dataclass(frozen=True)
class OnsetReport:
    """Where the closed-form lower tail bound starts holding against exact tails."""

    m_max: int
    onset: int | None       # smallest prime from which the bound holds through
                            # m_max; None when the last checked prime violates
    violations: tuple       # primes below onset where it fails
    primes_checked: int
    min_margin: float       # min of exact_tail / bound over the holding range
    cross_checked: int      # primes where the float tail was audited rationally


def prop4_onset_scan(m_max: int = 10**5, *, exact_below: int = 600) -> OnsetReport:
    """Scan odd primes up to m_max for exact P(|C_u| >= lambda_m) >= 1/(2m sqrt(ln m)).

    Returns the empirical onset of validity: the smallest prime after the
    last violation. Tail probabilities use the log-space evaluator; primes
    below exact_below are additionally audited against the exact rational
    tail (agreement to 1e-12 relative enforced).
    """
    if m_max < 3:
        raise InvalidInputError("m_max must be >= 3")
    violations = []
    margins = []
    cross_checked = 0
    primes = [q for q in primes_between(3, m_max)]
    for q in primes:
        lam = lambda_m(q)
        tail = oracles.abs_tail_probability(q, lam)
        if q < exact_below:
            exact = float(oracles.exact_abs_tail(q, lam))
            if exact > 0 and abs(tail - exact) > 1e-12 * exact:
                raise AssertionError(f"tail evaluator drift at m={q}: {tail} vs {exact}")
            cross_checked += 1
        bound = tail_lower_prop4(q)
        if tail < bound:
            violations.append(q)
        else:
            margins.append((q, tail / bound))
    onset: int | None = 3
    if violations:
        last_bad = violations[-1]
        later = [q for q in primes if q > last_bad]
        onset = later[0] if later else None
    if onset is None:
        min_margin = math.inf
    else:
        min_margin = min((r for q, r in margins if q >= onset), default=math.inf)
    return OnsetReport(m_max=m_max, onset=onset, violations=tuple(violations),
                       primes_checked=len(primes), min_margin=min_margin,
                       cross_checked=cross_checked)


@dataclass(frozen=True)
class BoundValue:
    """One evaluated bound for tabular output."""

    name: str
    m: int
    value: float | None
    premise_met: bool | None = None
    params: dict = field(default_factory=dict)


def evaluate_bounds(m: int, *, eps: float = 0.1, theta: float | None = None,
                    theta_prime: float | None = None, k: int | None = None,
                    u: int | None = None, v: int | None = None) -> list:
    """All closed-form bounds at one modulus, as BoundValue rows."""
    rows = [
        BoundValue("lambda_m", m, lambda_m(m)),
        BoundValue("union_prop2_conservative", m,
                   union_bound_prop2(m, eps, True), True, {"epsilon": eps}),
        BoundValue("union_prop2_printed", m,
                   union_bound_prop2(m, eps, False), True, {"epsilon": eps}),
        BoundValue("tail_lower_prop4", m, tail_lower_prop4(m)),
        BoundValue("pair_prop5", m, pair_bound_prop5(m),
                   prop5_premise_met(m, u, v) if u is not None and v is not None
                   else None,
                   {} if u is None else {"u": u, "v": v}),
        BoundValue("bonferroni_lemma9", m, bonferroni_lower_lemma9(m)),
    ]
    if theta is not None:
        rows.append(BoundValue("mcdiarmid_truncated", m, mcdiarmid_bound(m, theta),
                               True, {"theta": theta}))
        if theta > 4:
            rows.append(BoundValue("mcdiarmid_shifted", m,
                                   mcdiarmid_bound_shifted(m, theta), True,
                                   {"theta": theta}))
        else:
            rows.append(BoundValue("mcdiarmid_shifted", m, None, False,
                                   {"theta": theta}))
    if theta_prime is not None:
        if theta_prime > 4:
            rows.append(BoundValue("mcdiarmid_shifted", m,
                                   mcdiarmid_bound_shifted(m, theta_prime), True,
                                   {"theta": theta_prime}))
        else:
            rows.append(BoundValue("mcdiarmid_shifted", m, None, False,
                                   {"theta": theta_prime}))
    if k is not None and theta is not None and theta > 1:
        rows.append(BoundValue("cramer_ratio", m, cramer_ratio(k, theta), True,
                               {"k": k, "theta": theta}))
    sv, sb = stirling_step(m)
    rows.append(BoundValue("stirling_step_value", m, sv))
    rows.append(BoundValue("stirling_step_bound", m, sb))
    return rows
