"""Seeded Monte Carlo harness for the max autocorrelation statistic.

Runs are a pure function of (config, master seed): sample j of modulus m
always draws from the counter-based stream with id (m << 32) | j, so worker
count and scheduling cannot change any output byte. Workers return integer
tallies that merge associatively.
"""

from __future__ import annotations

import math
import multiprocessing
from dataclasses import dataclass

from . import autocorr, oracles
from .errors import FeasibilityError, InvalidInputError
from .seqcore import RngStream, is_prime, sample_uniform

SPECTRUM_MAX_M = 10**6  # per-m guard for spectrum cost
_SPOT_EVERY = 100       # spot-check one sample in this many

CSV_HEADER = ("m,is_prime,samples,seed,mean_C,std_C,normalized_mean,"
              "normalized_std,lambda_m,p_exceed_lambda,epsilon,p_outside_eps,"
              "oracle_mean")


@dataclass(frozen=True)
class ExperimentConfig:
    m_list: tuple
    samples: int
    master_seed: int
    workers: int = 1
    epsilon: float = 0.1
    out_path: str | None = None
    out_format: str = "csv"

    def __post_init__(self):
        ms = tuple(int(m) for m in self.m_list)
        object.__setattr__(self, "m_list", ms)
        if not ms:
            raise InvalidInputError("m_list must be non-empty")
        if any(m < 3 for m in ms):
            raise InvalidInputError("every m must be >= 3")
        for m in ms:
            if m > SPECTRUM_MAX_M:
                raise FeasibilityError(
                    f"m = {m} exceeds SPECTRUM_MAX_M ({SPECTRUM_MAX_M})",
                    cap_name="SPECTRUM_MAX_M", cap_value=SPECTRUM_MAX_M)
        if self.samples < 1:
            raise InvalidInputError("samples must be >= 1")
        if not 0 <= self.master_seed < 1 << 64:
            raise InvalidInputError("master_seed must fit in 64 bits")
        if self.workers < 1:
            raise InvalidInputError("workers must be >= 1")
        if self.epsilon < 0:
            raise InvalidInputError("epsilon must be >= 0")
        if self.out_format not in ("csv", "json"):
            raise InvalidInputError("format must be csv or json")


@dataclass(frozen=True)
class RunRecord:
    """Aggregated statistics for one modulus; field order matches the CSV."""

    m: int
    is_prime: bool
    samples: int
    seed: int
    mean_C: float
    std_C: float
    normalized_mean: float   # mean / sqrt(m ln m)
    normalized_std: float
    lambda_m: float
    p_exceed_lambda: float   # empirical P(C >= lambda_m)
    epsilon: float
    p_outside_eps: float     # empirical P(|C / sqrt(2 m ln m) - 1| > eps)
    oracle_mean: float | None  # independence-approximation prediction (APPROX)
    p_exceed_upper: float = 0.0  # one-sided: P(C / sqrt(2 m ln m) > 1 + eps)


def _spot_check(values, m: int):
    # symmetry, parity and range invariants on a sampled spectrum
    if int(values[0]) != m:
        raise AssertionError("trivial coordinate must equal m")
    for u in (1, 2, m // 2):
        if u % m and int(values[u]) != int(values[m - u]):
            raise AssertionError(f"symmetry violated at u={u}")
    for u in range(1, m):
        c = int(values[u])
        if abs(c) > m or (c - m) % 2:
            raise AssertionError(f"range/parity violated at u={u}")


def _tally_range(args) -> tuple:
    """Worker: statistics over samples lo..hi-1 of one modulus (exact integers)."""
    m, master_seed, lo, hi, eps, collect_raw = args
    lam = math.sqrt(2.0 * m * math.log(m))
    denom = lam
    n = 0
    s1 = 0
    s2 = 0
    c_lam = 0
    c_out = 0
    c_up = 0
    raw = [] if collect_raw else None
    for j in range(lo, hi):
        seq = sample_uniform(m, RngStream(master_seed, (m << 32) | j))
        spec = autocorr.full_spectrum(seq)
        if j % _SPOT_EVERY == 0:
            _spot_check(spec.values, m)
        c = spec.max_nontrivial
        n += 1
        s1 += c
        s2 += c * c
        ratio = c / denom
        if c >= lam:
            c_lam += 1
        if abs(ratio - 1.0) > eps:
            c_out += 1
        if ratio > 1.0 + eps:
            c_up += 1
        if collect_raw:
            raw.append((j, c))
    return n, s1, s2, c_lam, c_out, c_up, raw


def _chunks(samples: int, workers: int):
    step = max(1, -(-samples // (workers * 4)))
    return [(lo, min(lo + step, samples)) for lo in range(0, samples, step)]


def _run_one(m: int, cfg: ExperimentConfig, collect_raw: bool):
    jobs = [(m, cfg.master_seed, lo, hi, cfg.epsilon, collect_raw)
            for lo, hi in _chunks(cfg.samples, cfg.workers)]
    if cfg.workers == 1 or len(jobs) == 1:
        parts = [_tally_range(j) for j in jobs]
    else:
        ctx = multiprocessing.get_context("fork")
        with ctx.Pool(cfg.workers) as pool:
            parts = list(pool.imap(_tally_range, jobs))
    n = sum(p[0] for p in parts)
    s1 = sum(p[1] for p in parts)
    s2 = sum(p[2] for p in parts)
    c_lam = sum(p[3] for p in parts)
    c_out = sum(p[4] for p in parts)
    c_up = sum(p[5] for p in parts)
    raw = None
    if collect_raw:
        raw = sorted(pair for p in parts for pair in p[6])
    mean = s1 / n
    if n > 1:
        var_num = n * s2 - s1 * s1  # exact integer
        std = math.sqrt(var_num / (n * (n - 1)))
    else:
        std = 0.0
    root = math.sqrt(m * math.log(m))
    prime = is_prime(m)
    oracle = oracles.oracle_expected_max(m) if prime and m % 2 else None
    rec = RunRecord(
        m=m, is_prime=prime, samples=n, seed=cfg.master_seed,
        mean_C=mean, std_C=std,
        normalized_mean=mean / root, normalized_std=std / root,
        lambda_m=math.sqrt(2.0 * m * math.log(m)),
        p_exceed_lambda=c_lam / n, epsilon=cfg.epsilon,
        p_outside_eps=c_out / n, oracle_mean=oracle,
        p_exceed_upper=c_up / n)
    return rec, raw


def run(cfg: ExperimentConfig, *, collect_raw: bool = False):
    """Execute the config; returns (records, raw) with raw[m] = [(j, C), ...]."""
    records = []
    raw: dict = {}
    for m in cfg.m_list:
        rec, rw = _run_one(m, cfg, collect_raw)
        records.append(rec)
        if collect_raw:
            raw[m] = rw
    return records, raw


def mc_expectation(cfg: ExperimentConfig) -> list:
    """Sample mean of the max statistic per modulus."""
    return run(cfg)[0]


def concentration_run(cfg: ExperimentConfig) -> list:
    """Two-sided and one-sided exceedance rates at the configured epsilon."""
    if cfg.epsilon <= 0:
        raise InvalidInputError("concentration runs need epsilon > 0")
    return run(cfg)[0]


def composite_scan(cfg: ExperimentConfig) -> list:
    """Same statistics with composite moduli allowed; exploratory output."""
    if any(m < 4 for m in cfg.m_list):
        raise InvalidInputError("composite scan expects m >= 4")
    return run(cfg)[0]


def default_prime_grid() -> tuple:
    """Smallest prime at or above each default anchor."""
    from .seqcore import next_prime
    return tuple(next_prime(x) for x in (101, 499, 1009, 4999, 10007, 100003))


def _fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, int):
        return str(x)
    return f"{x:.12g}"


def records_to_csv_text(records) -> str:
    lines = [CSV_HEADER]
    for r in records:
        lines.append(",".join(_fmt(v) for v in (
            r.m, r.is_prime, r.samples, r.seed, r.mean_C, r.std_C,
            r.normalized_mean, r.normalized_std, r.lambda_m,
            r.p_exceed_lambda, r.epsilon, r.p_outside_eps, r.oracle_mean)))
    return "\n".join(lines) + "\n"


def _jval(x) -> str:
    if x is None:
        return "null"
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, int):
        return str(x)
    return f"{x:.12g}"


def records_to_json_text(records) -> str:
    # hand-rolled so float formatting matches the CSV byte for byte
    fields = CSV_HEADER.split(",")
    rows = []
    for r in records:
        vals = (r.m, r.is_prime, r.samples, r.seed, r.mean_C, r.std_C,
                r.normalized_mean, r.normalized_std, r.lambda_m,
                r.p_exceed_lambda, r.epsilon, r.p_outside_eps, r.oracle_mean)
        body = ", ".join(f'"{k}": {_jval(v)}' for k, v in zip(fields, vals))
        rows.append("  {" + body + "}")
    return "[\n" + ",\n".join(rows) + "\n]\n"


def raw_to_csv_text(raw: dict) -> str:
    """Per-sample values: m,sample_index,C rows in deterministic order."""
    lines = ["m,sample_index,C"]
    for m in sorted(raw):
        for j, c in raw[m]:
            lines.append(f"{m},{j},{c}")
    return "\n".join(lines) + "\n"
