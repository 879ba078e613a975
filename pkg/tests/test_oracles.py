from fractions import Fraction
from itertools import product

import pytest

from pacorr import errors, oracles
from pacorr.seqcore import primes_between


def _brute_spectra(m):
    """Independent reference: spectra of all 2^m sequences as Python tuples."""
    out = []
    for signs in product((1, -1), repeat=m):
        out.append(tuple(sum(signs[i] * signs[(i + u) % m] for i in range(m))
                         for u in range(m)))
    return out


class TestExactPmf:
    def test_m3_law(self):
        pmf = oracles.exact_pmf_Cu(3)
        assert pmf.support == ((-1, Fraction(3, 4)), (3, Fraction(1, 4)))

    def test_total_mass_one(self):
        for m in (3, 5, 7, 11, 13, 101):
            assert oracles.exact_pmf_Cu(m).total_mass() == 1

    def test_matches_exhaustive_all_primes_to_13(self):
        for m in primes_between(3, 13):
            closed = oracles.exact_pmf_Cu(m).support
            for u in range(1, m):
                assert oracles.exhaustive_pmf_Cu(m, u).support == closed

    def test_composite_unsupported(self):
        for m in (2, 9, 15):
            with pytest.raises(errors.UnsupportedInputError):
                oracles.exact_pmf_Cu(m)

    def test_tail_helper(self):
        pmf = oracles.exact_pmf_Cu(3)
        assert pmf.tail_geq_abs(3) == Fraction(1, 4)
        assert pmf.tail_geq_abs(1) == 1
        assert pmf.tail_geq_abs(4) == 0


class TestExhaustive:
    def test_expectation_m3(self):
        assert oracles.exhaustive_expectation_C(3) == Fraction(3, 2)

    def test_max_pmf_m3(self):
        pmf = oracles.exhaustive_max_pmf(3)
        assert pmf.support == ((1, Fraction(3, 4)), (3, Fraction(1, 4)))

    def test_expectation_matches_direct_reference(self):
        for m in (4, 5):
            spectra = _brute_spectra(m)
            want = Fraction(sum(max(abs(c) for c in sp[1:]) for sp in spectra),
                            2 ** m)
            assert oracles.exhaustive_expectation_C(m) == want

    def test_cap_enforced(self):
        with pytest.raises(errors.FeasibilityError) as ei:
            oracles.exhaustive_expectation_C(23)
        assert ei.value.cap_name == "EXHAUSTIVE_MAX_M"


class TestEventProbability:
    def test_m3_constant_event(self):
        p = oracles.exact_event_probability(
            3, lambda v: max(abs(int(v[1])), abs(int(v[2]))) >= 3)
        assert p == Fraction(1, 4)

    def test_impossible_event(self):
        assert oracles.exact_event_probability(5, lambda v: abs(int(v[1])) > 5) == 0


class TestIndependence:
    def test_prime_m7_all_subsets_pass(self):
        rep = oracles.verify_independence(7, 1, n_random=200)
        assert rep.exact
        assert rep.total_violations == 0
        assert rep.plan["max_subset_size"] == 3

    def test_prime_all_u_to_13(self):
        for m in primes_between(3, 13):
            for u in range(1, m):
                assert oracles.verify_independence(m, u, n_random=30).exact, (m, u)

    def test_m4_u2_counterexample(self):
        rep = oracles.verify_independence(4, 2, n_random=0)
        assert not rep.exact
        # X_1 = s_1 s_3 = X_3, so the (+1, -1) pattern on subset {1,3} never occurs
        hit = [v for v in rep.violations
               if v["subset"] == [1, 3] and v["signs"] == {1: 1, 3: -1}]
        assert hit and hit[0]["count"] == 0 and hit[0]["probability"] == 0

    def test_m5_full_set_uniform(self):
        rep = oracles.verify_independence(5, 2, max_subset_size=0, n_random=0)
        assert rep.subsets_tested == 1  # just the full set
        assert rep.exact  # every pattern hits 2^(m-4) = 2 sequences

    def test_report_serializes(self):
        d = oracles.verify_independence(4, 2, n_random=0).to_json_dict()
        assert d["exact"] is False
        assert isinstance(d["violations"][0]["probability"], str)


class TestJointMoment:
    def test_cross_identity_small(self):
        jm = oracles.exact_joint_moment(5, 1, 2, 1)  # raises on mismatch
        assert jm.expectation == Fraction(jm.total, 32)
        assert jm.expectation.denominator == 1

    def test_against_direct_reference(self):
        for (m, a, b, p) in ((5, 1, 2, 1), (7, 1, 3, 1)):
            spectra = _brute_spectra(m)
            want = sum((sp[a] * sp[b]) ** (2 * p) for sp in spectra)
            assert oracles.exact_joint_moment(m, a, b, p).total == want

    def test_markov_pair_bound(self):
        rep = oracles.check_pair_tail_bound(7, 1, 2, 1, 3, 3)
        assert rep.verdict == "PASS"
        spectra = _brute_spectra(7)
        lhs_direct = Fraction(
            sum(1 for sp in spectra if abs(sp[1]) >= 3 and abs(sp[2]) >= 3), 128)
        assert rep.lhs == lhs_direct

    def test_bad_shifts_rejected(self):
        with pytest.raises(errors.InvalidInputError):
            oracles.exact_joint_moment(5, 0, 2, 1)


class TestFloatTails:
    def test_matches_exact_rational(self):
        for m in (101, 499, 1009):
            for t in (10.5, 40, 2 * (m ** 0.5)):
                ex = oracles.exact_abs_tail(m, t)
                fl = oracles.abs_tail_probability(m, t)
                if ex:
                    assert abs(fl - float(ex)) <= 1e-12 * float(ex)

    def test_edges(self):
        assert oracles.abs_tail_probability(101, 0) == 1.0
        assert oracles.abs_tail_probability(101, -3) == 1.0
        assert oracles.abs_tail_probability(101, 102) == 0.0


class TestExpectedMaxOracle:
    def test_exact_at_m3(self):
        # a single distinct coordinate, so the independence view is exact
        assert oracles.oracle_expected_max(3) == pytest.approx(1.5, abs=1e-12)

    def test_close_to_truth_at_m5_m7(self):
        for m in (5, 7):
            truth = float(oracles.exhaustive_expectation_C(m))
            approx = oracles.oracle_expected_max(m)
            assert abs(approx - truth) / truth < 0.10

    def test_normalized_prediction_increases(self):
        import math
        prev = 0.0
        for m in (101, 1009, 10007, 100003):
            x = oracles.oracle_expected_max(m) / math.sqrt(m * math.log(m))
            assert x > prev
            prev = x
        assert prev < math.sqrt(2)
