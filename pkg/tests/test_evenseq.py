from fractions import Fraction
from itertools import product

import pytest

from pacorr import errors, evenseq
from pacorr.evenseq import SpecialXi, XiSequence


def _ref_partitions(sxi):
    """Independent reference: all set partitions of {1..4p} (grow-block recursion),
    filtered to those whose blocks all pass the signed-zero-sum predicate."""
    xi = sxi.xi()
    n = sxi.n_elements
    found = []

    def rec(i, blocks):
        if i > n:
            found.append(tuple(frozenset(b) for b in blocks))
            return
        for b in blocks:
            b.append(i)
            rec(i + 1, blocks)
            b.pop()
        blocks.append([i])
        rec(i + 1, blocks)
        blocks.pop()

    rec(1, [])
    return [P for P in found
            if all(evenseq.is_xi_subset(J, xi) for J in P)]


def _ref_block_type(J, sxi):
    k = sum(1 for j in J if j > 2 * sxi.p)
    return len(J) - k, k


class TestIsEven:
    def test_examples(self):
        assert evenseq.is_even((1, 2, 1, 2))
        assert not evenseq.is_even((1, 1, 2))
        assert evenseq.is_even(())


class TestIsXiEven:
    def test_zero_template(self):
        assert evenseq.is_xi_even((2, 4), XiSequence(5, (0, 0)))

    def test_wraparound_pair(self):
        # x(xi) = (0, 2, 2, 0) since 2 + 3 = 0 mod 5
        assert evenseq.is_xi_even((0, 2), XiSequence(5, (2, 3)))

    def test_incompatible_pair_never_even(self):
        xi = XiSequence(5, (1, 2))
        assert not any(evenseq.is_xi_even(x, xi) for x in product(range(5), repeat=2))

    def test_length_mismatch(self):
        with pytest.raises(errors.InvalidInputError):
            evenseq.is_xi_even((1,), XiSequence(5, (2, 3)))

    def test_exactly_xi_even(self):
        xi = XiSequence(5, (2, 3))
        assert evenseq.is_exactly_xi_even((0, 2), xi)
        xi4 = XiSequence(5, (1, 1, 1, 1))
        # (0,1,0,1,1,2,1,2) is even but the first two positions already are
        assert evenseq.is_xi_even((0, 0, 1, 1), xi4)
        assert not evenseq.is_exactly_xi_even((0, 0, 1, 1), xi4)


class TestCountXiEven:
    def test_pair_values(self):
        assert evenseq.count_xi_even(XiSequence(5, (2, 3))) == 5
        assert evenseq.count_xi_even(XiSequence(5, (1, 2))) == 0
        assert evenseq.count_xi_even(XiSequence(7, (0, 0))) == 49

    def test_pair_law_all_small_m(self):
        for m in (5, 7):
            assert evenseq.check_pair_base(m).verdict == "PASS"

    def test_parity_walk_equals_bruteforce(self):
        for m in (3, 5):
            for ent in product(range(m), repeat=3):
                xi = XiSequence(m, ent)
                assert (evenseq._count_parity_dp(m, ent)
                        == evenseq.count_xi_even_bruteforce(xi)), ent

    def test_parity_walk_closed_form_mod2(self):
        # over Z_2 with all entries 1, each pair is {0,1}; even iff n is even
        assert evenseq.count_xi_even(XiSequence(2, (1,) * 20)) == 2 ** 20
        assert evenseq.count_xi_even(XiSequence(2, (1,) * 21)) == 0

    def test_memoize_false_recomputes(self):
        xi = XiSequence(7, (2, 5, 3, 4))
        a = evenseq.count_xi_even(xi, memoize=False)
        b = evenseq.count_xi_even(xi, memoize=False)
        assert a == b == evenseq.count_xi_even_bruteforce(xi)

    def test_cap(self):
        with pytest.raises(errors.FeasibilityError) as ei:
            evenseq.count_xi_even(XiSequence(29, (1,) * 6))
        assert ei.value.cap_name == "XI_BRUTE_CAP"
        with pytest.raises(errors.FeasibilityError):
            evenseq.count_xi_even_bruteforce(XiSequence(11, (1,) * 9))


class TestCanonicalize:
    def test_scaling_classes_merge(self):
        c1 = evenseq.canonicalize(XiSequence(5, (2, 3)))
        c2 = evenseq.canonicalize(XiSequence(5, (1, 4)))
        assert c1 == c2

    def test_permutation(self):
        a = evenseq.canonicalize(XiSequence(7, (3, 1, 2)))
        b = evenseq.canonicalize(XiSequence(7, (1, 2, 3)))
        assert a == b

    def test_idempotent(self):
        xi = XiSequence(11, (9, 4, 4))
        once = evenseq.canonicalize(xi)
        assert evenseq.canonicalize(once) == once

    def test_composite_sorts_only(self):
        assert evenseq.canonicalize(XiSequence(6, (5, 2))).entries == (2, 5)

    def test_count_invariant(self):
        for ent in ((2, 3), (1, 4), (3, 2)):
            assert evenseq.count_xi_even(XiSequence(5, ent), memoize=False) == 5


class TestXiSubset:
    def test_examples(self):
        xi = XiSequence(5, (2, 3))
        assert evenseq.is_xi_subset({1, 2}, xi)
        assert not evenseq.is_xi_subset({1}, xi)
        assert evenseq.is_xi_subset(set(), xi)

    def test_bad_indices(self):
        with pytest.raises(errors.InvalidInputError):
            evenseq.is_xi_subset({0, 1}, XiSequence(5, (2, 3)))
        with pytest.raises(errors.InvalidInputError):
            evenseq.is_xi_subset({3}, XiSequence(5, (2, 3)))

    def test_nonzero_count_implies_full_subset(self):
        # exhaustive: any xi-even witness forces {1..n} to sign-sum to zero
        for m, n_max in ((3, 5), (5, 4)):
            for n in range(1, n_max + 1):
                for ent in product(range(m), repeat=n):
                    xi = XiSequence(m, ent)
                    if evenseq.count_xi_even(xi) > 0:
                        assert evenseq.is_xi_subset(range(1, n + 1), xi), ent


class TestSpecialXi:
    def test_derived_fields(self):
        s = SpecialXi(13, 1, 2, 2)
        assert (s.d, s.N, s.n_elements) == (1, 1, 8)
        assert s.xi().entries == (1, 1, 1, 1, 2, 2, 2, 2)

    def test_premises(self):
        assert SpecialXi(11, 1, 2, 1).premises_met()
        assert not SpecialXi(7, 1, 2, 2).premises_met()   # 2p(a+b) = 12 >= 7
        assert not SpecialXi(11, 2, 3, 1).premises_met()  # a even

    def test_validation(self):
        with pytest.raises(errors.InvalidInputError):
            SpecialXi(11, 2, 2, 1)
        with pytest.raises(errors.InvalidInputError):
            SpecialXi(11, 0, 2, 1)
        with pytest.raises(errors.InvalidInputError):
            SpecialXi(11, 1, 2, 0)

    def test_canonicalized(self):
        c = SpecialXi(7, 2, 3, 1).canonicalized()
        assert (c.a, c.b) == (1, 3)
        assert c.a % 2 == 1
        # scaling preserves the count
        assert (evenseq.count_xi_even(SpecialXi(7, 2, 3, 1).xi(), memoize=False)
                == evenseq.count_xi_even(c.xi(), memoize=False))

    def test_canonicalized_needs_prime(self):
        with pytest.raises(errors.UnsupportedInputError):
            SpecialXi(8, 1, 2, 1).canonicalized()


class TestPartitionEnumeration:
    def test_matches_reference_p1(self):
        sxi = SpecialXi(11, 1, 2, 1)
        ref = {P for P in map(frozenset, _ref_partitions(sxi))}
        got = list(evenseq.enumerate_xi_partitions(sxi))
        assert {frozenset(P.blocks) for P in got} == ref
        for P in got:
            assert P.length == len(P.blocks)
            assert P.types == tuple(_ref_block_type(J, sxi) for J in P.blocks)
            assert P.b_count == sum(1 for (_, k) in P.types if k % 2)
            assert P.b_count % 2 == 0

    def test_matches_reference_p2_counts(self):
        sxi = SpecialXi(13, 1, 2, 2)
        ref = _ref_partitions(sxi)
        got = list(evenseq.enumerate_xi_partitions(sxi))
        assert len(got) == len(ref)
        census: dict = {}
        for P in ref:
            k = 2 * sxi.p - len(P)
            b = sum(1 for J in P if _ref_block_type(J, sxi)[1] % 2)
            assert b % 2 == 0
            census[(k, b // 2)] = census.get((k, b // 2), 0) + 1
        for (k, n), cnt in census.items():
            assert evenseq.count_ckn(sxi, k, n) == cnt
        assert sum(census.values()) == len(got)

    def test_ck_base_value_p2(self):
        sxi = SpecialXi(13, 1, 2, 2)
        assert evenseq.count_ckn(sxi, 0, 0) == 9  # (3!!)^2
        assert evenseq.double_factorial_odd(2) ** 2 == 9

    def test_ck_zero_region(self):
        sxi = SpecialXi(13, 1, 2, 2)  # d = 1, N = 1
        assert evenseq.count_ckn(sxi, 0, 1) == 0
        assert evenseq.count_ckn(sxi, 1, 2) == 0

    def test_partition_E_matches_bruteforce_blocks(self):
        sxi = SpecialXi(11, 1, 2, 1)
        for P in evenseq.enumerate_xi_partitions(sxi):
            want = 1
            for J in P.blocks:
                ent = tuple(sxi.xi().entries[j - 1] for j in sorted(J))
                want *= evenseq.count_xi_even_bruteforce(XiSequence(sxi.m, ent))
            assert evenseq.partition_E(P, sxi) == want

    def test_sum_E_consistency_p1(self):
        sxi = SpecialXi(11, 1, 2, 1)
        by_hand: dict = {}
        for P in evenseq.enumerate_xi_partitions(sxi):
            key = (2 * sxi.p - P.length, P.b_count // 2)
            by_hand[key] = by_hand.get(key, 0) + evenseq.partition_E(P, sxi)
        for key, total in by_hand.items():
            assert evenseq.sum_E_ckn(sxi, *key) == total

    def test_feasibility_cap(self):
        with pytest.raises(errors.FeasibilityError) as ei:
            list(evenseq.enumerate_xi_partitions(SpecialXi(101, 1, 2, 4)))
        assert ei.value.cap_name == "PARTITION_MAX_ELEMENTS"


class TestDoubleFactorial:
    def test_matches_direct_product(self):
        for p in range(1, 11):
            direct = 1
            for odd in range(1, 2 * p, 2):
                direct *= odd
            assert evenseq.double_factorial_odd(p) == direct


class TestCheckers:
    def test_lemma10_single_and_grid(self):
        rep = evenseq.check_even_count_bound(XiSequence(7, (1, 2, 4)))
        assert rep.verdict == "PASS" and rep.lhs <= rep.rhs
        grid = evenseq.check_even_count_bound_grid((3, 5), (2, 3))
        assert grid.verdict == "PASS"
        assert grid.detail["failures"] == []
        assert grid.detail["instances"] == (2 ** 2 + 2 ** 3) + (4 ** 2 + 4 ** 3)

    def test_lemma10_zero_entry_premise(self):
        rep = evenseq.check_even_count_bound(XiSequence(7, (0, 3)))
        assert rep.verdict == "PREMISE_UNMET"

    def test_lemma11_equality_case(self):
        rep = evenseq.check_factorial_product((2, 3))
        assert (rep.lhs, rep.rhs, rep.verdict) == (8, 8, "PASS")
        assert evenseq.check_factorial_product((3, 3, 3)).verdict == "PASS"
        assert evenseq.check_factorial_product((1, 3)).verdict == "PREMISE_UNMET"

    def test_scaling_invariance_small(self):
        rep = evenseq.check_scaling_invariance(5, 2)
        assert rep.verdict == "PASS"
        assert rep.detail["failures"] == []
        assert rep.detail["comparisons"] == (5 + 5 ** 2) * 4

    def test_scaling_invariance_needs_prime(self):
        with pytest.raises(errors.UnsupportedInputError):
            evenseq.check_scaling_invariance(6, 2)

    def test_structure_battery_p1(self):
        sxi = SpecialXi(11, 1, 2, 1)
        for which in ("lemma12", "lemma13", "split", "ep_bound", "pair_partition",
                      "ck_zero", "ck_base", "ck_bounds", "ck_sum", "exi_sum"):
            rep = evenseq.check_appendix_bounds(which, sxi=sxi)
            assert rep.verdict == "PASS", (which, rep.detail)

    def test_structure_battery_p2(self):
        sxi = SpecialXi(13, 1, 2, 2)
        for which in ("lemma12", "lemma13", "split", "ep_bound", "pair_partition",
                      "ck_zero", "ck_base", "ck_bounds", "ck_sum", "exi_sum"):
            rep = evenseq.check_appendix_bounds(which, sxi=sxi)
            assert rep.verdict == "PASS", (which, rep.detail)

    def test_premise_gate(self):
        rep = evenseq.check_type_decomposition(SpecialXi(7, 1, 2, 2))
        assert rep.verdict == "PREMISE_UNMET"
        assert rep.detail["two_p_a_plus_b"] == 12

    def test_moment_ceiling_reports_premise(self):
        rep = evenseq.check_moment_ceiling(SpecialXi(11, 1, 2, 1))
        assert rep.verdict == "PREMISE_UNMET"  # p != floor(ln 11) = 2
        assert rep.detail["holds"] is True

    def test_ck_closed_form_recorded_not_asserted(self):
        rep = evenseq.check_ck_bounds(SpecialXi(13, 1, 2, 2))
        rows = rep.detail["k_equal_nd_closed_form"]
        assert rows, "expected k = nd comparison rows"
        assert all("enumerated" in r and "closed_form" in r for r in rows)
        assert rep.verdict == "PASS"

    def test_dispatcher_rejects_unknown(self):
        with pytest.raises(errors.InvalidInputError):
            evenseq.check_appendix_bounds("lemma99")

    def test_report_json_shape(self):
        rep = evenseq.check_factorial_product((2, 3))
        d = rep.to_json_dict()
        assert set(d) == {"lemma", "params", "lhs", "rhs", "verdict", "detail"}
        rep.lhs = Fraction(1, 3)
        assert rep.to_json_dict()["lhs"] == "1/3"
