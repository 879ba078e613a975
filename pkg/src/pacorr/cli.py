"""Command line interface.

Exit codes: 0 success, 1 verification failure, 2 usage/input error,
3 feasibility (a named cap was exceeded). stderr carries the resolved
config and human diagnostics; stdout and output files carry only
machine-readable results.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import autocorr, bounds, evenseq, experiments, oracles
from .errors import (FeasibilityError, InvalidInputError, InvalidLengthError,
                     InvalidShiftError, PremiseError, UnsupportedInputError)
from .evenseq import SpecialXi, XiSequence
from .seqcore import (BinarySequence, RngStream, constant_sequence, is_prime,
                      legendre_sequence, primes_between, read_sequences,
                      sample_uniform)

_USAGE_ERRORS = (InvalidInputError, InvalidLengthError, InvalidShiftError,
                 UnsupportedInputError, PremiseError, OSError, ValueError)


def _echo(msg: str):
    print(f"# {msg}", file=sys.stderr)


def _write_text(path: str | None, text: str):
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", newline="") as fh:
            fh.write(text)


def _int_list(s: str) -> list:
    return [int(x) for x in s.split(",") if x.strip() != ""]


# ---------------------------------------------------------------- sources

def _add_source_flags(p: argparse.ArgumentParser):
    p.add_argument("--random", type=int, metavar="M", help="uniform sequence of length M")
    p.add_argument("--seed", type=int, help="master seed (required with --random)")
    p.add_argument("--index", type=int, default=0, help="sample index within the stream")
    p.add_argument("--legendre", type=int, metavar="M", help="quadratic-residue sequence, odd prime M")
    p.add_argument("--constant", type=int, metavar="M", help="all-ones sequence of length M")
    p.add_argument("--minus", action="store_true", help="with --constant: all minus ones")
    p.add_argument("--infile", help="read sequences from a +/- text file")
    p.add_argument("--line", type=int, default=0, help="line number within --infile")


def _resolve_sequence(args) -> BinarySequence:
    picked = [k for k in ("random", "legendre", "constant", "infile")
              if getattr(args, k) is not None]
    if len(picked) != 1:
        raise InvalidInputError("choose exactly one of --random/--legendre/--constant/--infile")
    if args.random is not None:
        if args.seed is None:
            raise InvalidInputError("--random requires --seed")
        m = args.random
        return sample_uniform(m, RngStream(args.seed, (m << 32) | args.index))
    if args.legendre is not None:
        return legendre_sequence(args.legendre)
    if args.constant is not None:
        return constant_sequence(args.constant, -1 if args.minus else 1)
    seqs = read_sequences(args.infile)
    if not 0 <= args.line < len(seqs):
        raise InvalidInputError(f"--line out of range (file has {len(seqs)} sequences)")
    return seqs[args.line]


# ---------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="pacorr",
        description="periodic autocorrelation of binary sequences: exact kernels, "
                    "Monte Carlo experiments, closed-form bounds, combinatorial checks")
    sub = ap.add_subparsers(dest="cmd", required=True)

    p = sub.add_parser("autocorr", help="one periodic autocorrelation coordinate")
    _add_source_flags(p)
    p.add_argument("--u", type=int, required=True, help="shift, 0 <= u < m")
    p.add_argument("--out", help="write the value here instead of stdout")

    p = sub.add_parser("spectrum", help="all shifts of one sequence as CSV")
    _add_source_flags(p)
    p.add_argument("--out", help="output CSV path (default stdout)")

    for name, blurb in (("mc", "Monte Carlo means of the max statistic"),
                        ("concentration", "exceedance rates around the threshold"),
                        ("composite-scan", "Monte Carlo over composite moduli")):
        p = sub.add_parser(name, help=blurb)
        p.add_argument("--m", type=int, help="single modulus")
        p.add_argument("--m-list", type=_int_list, help="comma list of moduli")
        p.add_argument("--primes-from", type=int, help="include primes from here")
        p.add_argument("--primes-to", type=int, help="through here")
        p.add_argument("--samples", type=int, required=True)
        p.add_argument("--seed", type=int, required=True, help="master seed")
        p.add_argument("--epsilon", type=float, default=0.1)
        p.add_argument("--workers", type=int, default=0,
                       help="process count (default: available parallelism)")
        p.add_argument("--out", help="output path (default stdout)")
        p.add_argument("--format", choices=("csv", "json"), default="csv")
        p.add_argument("--raw-out", help="per-sample CSV (m,sample_index,C)")

    p = sub.add_parser("bounds", help="closed-form bound table for one modulus")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--epsilon", type=float, default=0.1)
    p.add_argument("--theta", type=float)
    p.add_argument("--theta-prime", type=float)
    p.add_argument("--k", type=int)
    p.add_argument("--u", type=int)
    p.add_argument("--v", type=int)
    p.add_argument("--out", help="output CSV path (default stdout)")

    p = sub.add_parser("evenseq", help="even-multiplicity template counting")
    p.add_argument("action", choices=("count", "canon", "subset", "partitions"))
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--xi", type=_int_list, help="template entries, comma list")
    p.add_argument("--indices", type=_int_list, help="1-based index subset for 'subset'")
    p.add_argument("--a", type=int)
    p.add_argument("--b", type=int)
    p.add_argument("--p", type=int)
    p.add_argument("--cap-override", type=int)
    p.add_argument("--out", help="output path (default stdout)")

    p = sub.add_parser("verify", help="run one named exact verification")
    p.add_argument("check", choices=(
        "eq1", "independence", "pmf", "lemma8", "lemma10", "lemma11",
        "lemma12", "lemma13", "split", "ep-bound", "pair-base",
        "pair-partition", "ck-zero", "ck-base", "ck-bounds", "ck-sum",
        "exi-sum", "prop14", "prop4-onset", "bridge"))
    p.add_argument("--m", type=int)
    p.add_argument("--m-list", type=_int_list)
    p.add_argument("--n-list", type=_int_list)
    p.add_argument("--n-max", type=int, default=3)
    p.add_argument("--m-max", type=int, default=10**5)
    p.add_argument("--xi", type=_int_list)
    p.add_argument("--Ns", type=_int_list)
    p.add_argument("--a", type=int)
    p.add_argument("--b", type=int)
    p.add_argument("--p", type=int)
    p.add_argument("--u", type=int)
    p.add_argument("--theta1", type=float, default=3.0)
    p.add_argument("--theta2", type=float, default=3.0)
    p.add_argument("--max-size", type=int, default=3)
    p.add_argument("--random-subsets", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--samples", type=int, default=1000)
    p.add_argument("--require-onset", type=int)
    p.add_argument("--out", help="write the JSON report here (default stdout)")
    return ap


# ---------------------------------------------------------------- commands

def _cmd_autocorr(args) -> int:
    seq = _resolve_sequence(args)
    _echo(f"config: cmd=autocorr m={seq.m} u={args.u}")
    val = autocorr.periodic_autocorrelation(seq, args.u % seq.m)
    _write_text(args.out, f"{val}\n")
    return 0


def _cmd_spectrum(args) -> int:
    seq = _resolve_sequence(args)
    _echo(f"config: cmd=spectrum m={seq.m}")
    spec = autocorr.full_spectrum(seq)
    lines = ["u,value"] + [f"{u},{int(spec.values[u])}" for u in range(seq.m)]
    _write_text(args.out, "\n".join(lines) + "\n")
    _echo(f"max nontrivial |C_u| = {spec.max_nontrivial}")
    return 0


def _resolve_m_list(args, default_grid: bool) -> list:
    ms: list = []
    if args.m is not None:
        ms.append(args.m)
    if args.m_list:
        ms.extend(args.m_list)
    if args.primes_from is not None or args.primes_to is not None:
        lo = args.primes_from if args.primes_from is not None else 3
        hi = args.primes_to if args.primes_to is not None else lo
        ms.extend(primes_between(lo, hi))
    if not ms and default_grid:
        ms = list(experiments.default_prime_grid())
    if not ms:
        raise InvalidInputError("no moduli given (use --m/--m-list/--primes-from)")
    out = []
    for m in ms:
        if m not in out:
            out.append(m)
    return out


def _cmd_mc(args, kind: str) -> int:
    workers = args.workers if args.workers >= 1 else (os.cpu_count() or 1)
    ms = _resolve_m_list(args, default_grid=kind != "composite-scan")
    cfg = experiments.ExperimentConfig(
        m_list=tuple(ms), samples=args.samples, master_seed=args.seed,
        workers=workers, epsilon=args.epsilon,
        out_path=args.out, out_format=args.format)
    _echo(f"config: cmd={kind} m_list={ms} samples={cfg.samples} seed={cfg.master_seed} "
          f"epsilon={cfg.epsilon:.12g} workers={cfg.workers} format={cfg.out_format} "
          f"out={cfg.out_path or '-'} raw_out={args.raw_out or '-'}")
    if kind == "concentration" and cfg.epsilon <= 0:
        raise InvalidInputError("concentration runs need epsilon > 0")
    if kind == "composite-scan" and any(m < 4 for m in ms):
        raise InvalidInputError("composite scan expects m >= 4")
    collect = args.raw_out is not None
    records = []
    raws: dict = {}
    for m in ms:
        sub = experiments.ExperimentConfig(
            m_list=(m,), samples=cfg.samples, master_seed=cfg.master_seed,
            workers=cfg.workers, epsilon=cfg.epsilon)
        recs, raw = experiments.run(sub, collect_raw=collect)
        rec = recs[0]
        records.append(rec)
        if collect:
            raws.update(raw)
        line = (f"m={m} done mean_C={rec.mean_C:.12g} "
                f"normalized_mean={rec.normalized_mean:.12g} "
                f"p_exceed_lambda={rec.p_exceed_lambda:.12g}")
        if kind == "concentration":
            line += (f" p_outside_eps={rec.p_outside_eps:.12g}"
                     f" p_exceed_upper={rec.p_exceed_upper:.12g}")
        _echo(line)
    if cfg.out_format == "csv":
        text = experiments.records_to_csv_text(records)
    else:
        text = experiments.records_to_json_text(records)
    _write_text(args.out, text)
    if collect:
        _write_text(args.raw_out, experiments.raw_to_csv_text(raws))
    return 0


def _cmd_bounds(args) -> int:
    _echo(f"config: cmd=bounds m={args.m} epsilon={args.epsilon:.12g}")
    rows = bounds.evaluate_bounds(
        args.m, eps=args.epsilon, theta=args.theta, theta_prime=args.theta_prime,
        k=args.k, u=args.u, v=args.v)
    lines = ["name,m,epsilon,theta,k,u,v,value,premise_met"]
    for r in rows:
        pm = "" if r.premise_met is None else ("true" if r.premise_met else "false")
        val = "" if r.value is None else f"{r.value:.12g}"
        get = r.params.get
        cells = [r.name, str(r.m)]
        for key in ("epsilon", "theta", "k", "u", "v"):
            x = get(key)
            cells.append("" if x is None else
                         (str(x) if isinstance(x, int) else f"{x:.12g}"))
        cells += [val, pm]
        lines.append(",".join(cells))
    _write_text(args.out, "\n".join(lines) + "\n")
    return 0


def _cmd_evenseq(args) -> int:
    _echo(f"config: cmd=evenseq action={args.action} m={args.m}")
    if args.action == "count":
        if not args.xi:
            raise InvalidInputError("count needs --xi")
        xi = XiSequence(args.m, tuple(args.xi))
        val = evenseq.count_xi_even(xi, cap_override=args.cap_override)
        _write_text(args.out, f"{val}\n")
        return 0
    if args.action == "canon":
        if not args.xi:
            raise InvalidInputError("canon needs --xi")
        canon = evenseq.canonicalize(XiSequence(args.m, tuple(args.xi)))
        _write_text(args.out, ",".join(str(a) for a in canon.entries) + "\n")
        return 0
    if args.action == "subset":
        if not args.xi or not args.indices:
            raise InvalidInputError("subset needs --xi and --indices")
        ok = evenseq.is_xi_subset(args.indices, XiSequence(args.m, tuple(args.xi)))
        _write_text(args.out, ("true" if ok else "false") + "\n")
        return 0
    # partitions: census of the doubled two-value template
    if args.a is None or args.b is None or args.p is None:
        raise InvalidInputError("partitions needs --a --b --p")
    sxi = SpecialXi(args.m, args.a, args.b, args.p)
    census = evenseq._partition_census(sxi)
    lines = ["k,n,count,sum_E"]
    for (k, n) in sorted(census):
        cnt, se = census[(k, n)]
        lines.append(f"{k},{n},{cnt},{se}")
    _write_text(args.out, "\n".join(lines) + "\n")
    return 0


# ---------------------------------------------------------------- verify

def _need(args, *names):
    missing = [n for n in names if getattr(args, n) is None]
    if missing:
        raise InvalidInputError(
            "missing flags: " + " ".join(f"--{n.replace('_', '-')}" for n in missing))


def _sxi_from(args) -> SpecialXi:
    _need(args, "m", "a", "b", "p")
    return SpecialXi(args.m, args.a, args.b, args.p)


def _verify_eq1(args) -> list:
    _need(args, "m", "a", "b", "p")
    jm = oracles.exact_joint_moment(args.m, args.a, args.b, args.p)
    xi = XiSequence(args.m, (args.a,) * (2 * args.p) + (args.b,) * (2 * args.p))
    exi = evenseq.count_xi_even(xi)
    ident = evenseq.LemmaReport(
        "eq1_identity", {"m": args.m, "a": args.a, "b": args.b, "p": args.p},
        lhs=jm.total, rhs=exi << args.m,
        verdict="PASS" if jm.total == exi << args.m else "FAIL",
        detail={"E_xi": exi})
    markov = oracles.check_pair_tail_bound(args.m, args.a, args.b, args.p,
                                           args.theta1, args.theta2)
    return [ident, markov]


def _verify_independence(args) -> list:
    _need(args, "m", "u")
    rep = oracles.verify_independence(
        args.m, args.u, max_subset_size=args.max_size,
        n_random=args.random_subsets, seed=args.seed)
    out = evenseq.LemmaReport(
        "independence", {"m": args.m, "u": args.u},
        lhs=rep.total_violations, rhs=0,
        verdict="PASS" if rep.exact else "FAIL",
        detail=rep.to_json_dict())
    return [out]


def _verify_pmf(args) -> list:
    _need(args, "m")
    closed = oracles.exact_pmf_Cu(args.m).support
    bad = []
    for u in range(1, args.m):
        if oracles.exhaustive_pmf_Cu(args.m, u).support != closed:
            bad.append(u)
    rep = evenseq.LemmaReport(
        "pmf", {"m": args.m}, lhs=len(bad), rhs=0,
        verdict="PASS" if not bad else "FAIL",
        detail={"mismatched_shifts": bad,
                "support_size": len(closed),
                "total_mass_is_one": float(sum(p for _, p in closed)) == 1.0})
    return [rep]


def _verify_lemma10(args) -> list:
    if args.xi:
        _need(args, "m")
        return [evenseq.check_even_count_bound(XiSequence(args.m, tuple(args.xi)))]
    m_values = args.m_list or [3, 5, 7]
    n_values = args.n_list or [2, 3, 4]
    return [evenseq.check_even_count_bound_grid(m_values, n_values)]


def _verify_prop4_onset(args) -> list:
    rep = bounds.prop4_onset_scan(args.m_max)
    verdict = "PASS"
    if args.require_onset is not None and (rep.onset is None
                                           or rep.onset > args.require_onset):
        verdict = "FAIL"
    out = evenseq.LemmaReport(
        "prop4_onset", {"m_max": args.m_max, "require_onset": args.require_onset},
        lhs=rep.onset, rhs=args.require_onset, verdict=verdict,
        detail={"violations": list(rep.violations),
                "n_violations": len(rep.violations),
                "primes_checked": rep.primes_checked,
                "min_margin_from_onset": rep.min_margin,
                "rational_cross_checks": rep.cross_checked})
    return [out]


def _verify_bridge(args) -> list:
    _need(args, "m")
    worst = 0
    for j in range(args.samples):
        seq = sample_uniform(args.m, RngStream(args.seed, (args.m << 32) | j))
        spec = autocorr.full_spectrum(seq)
        trunc = autocorr.truncated_values(seq)
        gap = max(abs(int(spec.values[u]) - int(trunc[u])) for u in range(1, args.m))
        worst = max(worst, gap)
    rep = evenseq.LemmaReport(
        "bridge", {"m": args.m, "samples": args.samples, "seed": args.seed},
        lhs=worst, rhs=2, verdict="PASS" if worst <= 2 else "FAIL",
        detail={"max_gap": worst})
    return [rep]


def _cmd_verify(args) -> int:
    _echo(f"config: cmd=verify check={args.check}")
    simple = {
        "lemma8": lambda: [evenseq.check_scaling_invariance(args.m, args.n_max)],
        "lemma11": lambda: [evenseq.check_factorial_product(args.Ns or [])],
        "pair-base": lambda: [evenseq.check_pair_base(args.m)],
        "lemma12": lambda: [evenseq.check_type_decomposition(_sxi_from(args))],
        "lemma13": lambda: [evenseq.check_partition_shape(_sxi_from(args))],
        "split": lambda: [evenseq.check_split_step(_sxi_from(args))],
        "ep-bound": lambda: [evenseq.check_block_value_bound(_sxi_from(args))],
        "pair-partition": lambda: [evenseq.check_pair_partition_value(_sxi_from(args))],
        "ck-zero": lambda: [evenseq.check_ck_zero(_sxi_from(args))],
        "ck-base": lambda: [evenseq.check_ck_base(_sxi_from(args))],
        "ck-bounds": lambda: [evenseq.check_ck_bounds(_sxi_from(args))],
        "ck-sum": lambda: [evenseq.check_ck_sum(_sxi_from(args))],
        "exi-sum": lambda: [evenseq.check_partition_sum_dominates(_sxi_from(args))],
        "prop14": lambda: [evenseq.check_moment_ceiling(_sxi_from(args))],
        "eq1": lambda: _verify_eq1(args),
        "independence": lambda: _verify_independence(args),
        "pmf": lambda: _verify_pmf(args),
        "lemma10": lambda: _verify_lemma10(args),
        "prop4-onset": lambda: _verify_prop4_onset(args),
        "bridge": lambda: _verify_bridge(args),
    }
    if args.check in ("lemma8", "pair-base"):
        _need(args, "m")
    reports = simple[args.check]()
    payload = {"check": args.check,
               "reports": [r.to_json_dict() for r in reports]}
    _write_text(args.out, json.dumps(payload, indent=2) + "\n")
    failed = False
    for r in reports:
        _echo(f"{r.lemma}: {r.verdict}")
        failed = failed or r.verdict == "FAIL"
    return 1 if failed else 0


# ---------------------------------------------------------------- entry

def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        if args.cmd == "autocorr":
            return _cmd_autocorr(args)
        if args.cmd == "spectrum":
            return _cmd_spectrum(args)
        if args.cmd in ("mc", "concentration", "composite-scan"):
            return _cmd_mc(args, args.cmd)
        if args.cmd == "bounds":
            return _cmd_bounds(args)
        if args.cmd == "evenseq":
            return _cmd_evenseq(args)
        if args.cmd == "verify":
            return _cmd_verify(args)
        raise InvalidInputError(f"unknown command {args.cmd}")
    except FeasibilityError as e:
        cap = f" (cap {e.cap_name}={e.cap_value})" if e.cap_name else ""
        print(f"error: {e}{cap}", file=sys.stderr)
        return 3
    except _USAGE_ERRORS as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
