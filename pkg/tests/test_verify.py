import itertools

import numpy as np
import pytest

import oracles
from gendiag import verify
from gendiag.errors import CaseSearchFailed, DegreeMismatch, DegreeTooLarge, NotIncomparable
from gendiag.matrix import PsdVerdict, certify
from gendiag.order import Relation, RelationVerdict, Setting, class_members, classify, cycle_equiv
from gendiag.perm import Permutation, all_permutations, parse_cycles
from gendiag.verify import (
    choose_pq,
    exhaustive_poset,
    find_separation,
    find_violation,
    full_theorem_audit,
    monte_carlo_pair,
    random_equivalent_pair,
)


def P(text, n):
    return parse_cycles(text, n)


class TestExhaustivePoset:
    @pytest.mark.parametrize("n, count", [(0, 1), (1, 1), (2, 2), (3, 5), (4, 17)])
    def test_class_counts(self, n, count):
        assert oracles.class_count(n) == count
        rep = exhaustive_poset(n)
        assert rep.class_count == count
        assert rep.ok

    def test_relation_matches_oracle(self):
        rep = exhaustive_poset(4)
        expected = set()
        for t, s in itertools.product(all_permutations(4), repeat=2):
            if oracles.class_leq(t.images, s.images):
                expected.add((oracles.class_of(t.images), oracles.class_of(s.images)))
        got = {
            (frozenset(m.images for m in class_members(a)),
             frozenset(m.images for m in class_members(b)))
            for a, b in rep.relation
        }
        assert got == expected

    def test_counts_pairs(self):
        rep = exhaustive_poset(3)
        assert rep.pairs_examined == 36
        # each sigma sits above one tau per subset of its nontrivial cycles
        assert rep.cycle_leq_pairs == sum(2 ** len(p.nontrivial_cycles) for p in all_permutations(3))

    def test_too_large(self):
        with pytest.raises(DegreeTooLarge):
            exhaustive_poset(8)

    def test_detects_broken_bruhat(self, monkeypatch):
        monkeypatch.setattr(verify, "bruhat_leq", lambda t, s: t == s)
        assert exhaustive_poset(3).bruhat_containment_failures

    def test_detects_broken_equivalence(self, monkeypatch):
        # equality forgets that a 3-cycle and its reverse share a class
        monkeypatch.setattr(verify, "cycle_equiv", lambda a, b: a == b)
        assert exhaustive_poset(3).axiom_failures


class TestMonteCarlo:
    def test_inclusion_pair(self):
        r = monte_carlo_pair(P("(1 3 2)(4 5)", 5), P("(1 3 2)", 5), Setting.COMPLEX_ABS, 1000, 1)
        assert r.verdict_expected is Relation.SIGMA_LEQ_TAU
        assert r.violations == 0

    def test_equivalent_pair(self):
        r = monte_carlo_pair(P("(1 2 3)", 3), P("(3 2 1)", 3), Setting.COMPLEX_ABS, 1000, 2)
        assert r.verdict_expected is Relation.ALWAYS_EQUAL
        assert r.violations == 0 and r.max_slack_used <= 1e-9

    @pytest.mark.parametrize("setting", list(Setting))
    def test_identical(self, setting):
        for p in (P("(1 2 3)", 4), P("(1 2)(3 4)", 4), Permutation.identity(4)):
            assert monte_carlo_pair(p, p, setting, 50, 3).violations == 0

    def test_undefined_sees_nonreal(self):
        r = monte_carlo_pair(P("(1 2 3)", 3), Permutation.identity(3), Setting.COMPLEX_PLAIN, 30, 4)
        assert r.verdict_expected is Relation.UNDEFINED
        assert r.nonreal_seen > 0 and r.violations == 0

    def test_real_plain(self):
        r = monte_carlo_pair(P("(1 2)(3 4 5)", 5), P("(1 2)", 5), Setting.REAL_PLAIN, 500, 5)
        assert r.verdict_expected is Relation.SIGMA_LEQ_TAU and r.violations == 0

    @pytest.mark.parametrize("wrong", [Relation.SIGMA_LEQ_TAU, Relation.TAU_LEQ_SIGMA, Relation.ALWAYS_EQUAL])
    def test_catches_false_claims(self, monkeypatch, wrong):
        monkeypatch.setattr(verify, "classify", lambda s, t, st: RelationVerdict(wrong))
        r = monte_carlo_pair(P("(1 2 3)", 4), P("(1 2 4)", 4), Setting.COMPLEX_ABS, 200, 6)
        assert r.violations > 0

    def test_catches_false_real_claim(self, monkeypatch):
        # a positive diagonal product is not bounded by a 3-cycle product
        monkeypatch.setattr(verify, "classify", lambda s, t, st: RelationVerdict(Relation.SIGMA_LEQ_TAU))
        r = monte_carlo_pair(Permutation.identity(3), P("(1 2 3)", 3), Setting.REAL_PLAIN, 200, 7)
        assert r.violations > 0

    def test_catches_false_undefined(self, monkeypatch):
        monkeypatch.setattr(verify, "classify", lambda s, t, st: RelationVerdict(Relation.UNDEFINED))
        r = monte_carlo_pair(P("(1 2)", 3), Permutation.identity(3), Setting.COMPLEX_PLAIN, 50, 8)
        assert r.violations == 1

    def test_errors(self):
        with pytest.raises(DegreeMismatch):
            monte_carlo_pair(Permutation.identity(2), Permutation.identity(3), Setting.COMPLEX_ABS, 5, 0)
        with pytest.raises(ValueError):
            monte_carlo_pair(Permutation.identity(2), Permutation.identity(2), Setting.COMPLEX_ABS, 0, 0)

    def test_deterministic(self):
        args = (P("(1 2 3)", 4), P("(1 2)", 4), Setting.COMPLEX_ABS, 20, 9)
        assert monte_carlo_pair(*args) == monte_carlo_pair(*args)


class TestChoosePQ:
    def test_three_cycle_case(self):
        case, pq = choose_pq(P("(1 2 3)", 4), P("(1 2 4)", 4))
        assert case == 1 and pq == (2, 3)

    def test_two_cycle_case(self):
        assert choose_pq(P("(1 2)", 3), P("(1 3)", 3)) == (2, (1, 2))

    def test_matched_cycles_fail(self):
        with pytest.raises(CaseSearchFailed):
            choose_pq(P("(1 2 3)", 4), P("(3 2 1)(4)", 4))

    def test_case_conditions_exhaustive(self):
        for n in range(2, 6):
            for s, t in itertools.product(all_permutations(n), repeat=2):
                if classify(s, t, Setting.COMPLEX_ABS).relation is not Relation.INCOMPARABLE:
                    continue
                case, (p, q) = choose_pq(s, t)
                assert (p, q) in s.arcs
                if case == 1:
                    assert (p, q) not in t.arcs and (q, p) not in t.arcs
                else:
                    assert (q, p) in s.arcs
                    assert len({(p, q), (q, p)} & t.arcs) <= 1


class TestFindViolation:
    @pytest.mark.parametrize("s, t, n", [("(1 2 3)", "(1 2 4)", 4), ("(1 2)", "(1 3)", 3)])
    def test_examples(self, s, t, n):
        sigma, tau = P(s, n), P(t, n)
        w = find_violation(sigma, tau)
        assert w.holds()
        for A in (w.A, w.A_prime):
            assert A.is_real() and certify(A).verdict is PsdVerdict.PD
        assert 0 < oracles.diag_product(w.A.entries.tolist(), sigma.images).real < \
            oracles.diag_product(w.A.entries.tolist(), tau.images).real
        assert w.A[w.chosen_pq] == w.epsilon_used

    def test_swapped_gives_prime_direction(self):
        s, t = P("(1 2 3)", 4), P("(1 2 4)", 4)
        w, v = find_violation(s, t), find_violation(t, s)
        assert w.A_prime == v.A and v.A_prime == w.A
        assert w.values["A_prime_tau"] == v.values["A_sigma"]

    def test_not_incomparable(self):
        with pytest.raises(NotIncomparable):
            find_violation(P("(1 2)", 3), Permutation.identity(3))

    def test_halving_schedule(self):
        # five transposition-like factors of 3 push the needed epsilon below 1e-3
        n = 8
        s, t = P("(1 2)", n), P("(1 3)(4 5 6 7 8)", n)
        w = find_violation(s, t)
        assert w.holds()
        assert w.epsilon_used <= 1e-3


def test_separation_for_strict_comparisons():
    lo, hi = Permutation.identity(4), P("(1 2 3)", 4)
    s = find_separation(hi, lo)
    assert 0 < s.lower_value < s.upper_value


class TestAudit:
    @pytest.mark.parametrize("n, trials, pairs", [(2, 100, 4), (3, 100, 36)])
    def test_small(self, n, trials, pairs):
        rep = full_theorem_audit(n, trials, 42)
        assert rep.pairs == pairs and rep.ok
        assert rep.witnesses == rep.verdict_counts["Incomparable"]

    def test_n4(self):
        rep = full_theorem_audit(4, 50, 42)
        assert rep.pairs == 576 and rep.ok

    def test_too_large(self):
        with pytest.raises(DegreeTooLarge):
            full_theorem_audit(6, 1, 0)

    def test_failure_is_reported(self, monkeypatch):
        monkeypatch.setattr(
            verify, "classify",
            lambda s, t, st: RelationVerdict(Relation.SIGMA_LEQ_TAU if s != t else Relation.ALWAYS_EQUAL),
        )
        rep = full_theorem_audit(3, 20, 1)
        assert not rep.ok
        assert {f["kind"] for f in rep.failures} >= {"monte_carlo"}


def test_random_equivalent_pair():
    rng = np.random.default_rng(0)
    flipped = 0
    for _ in range(100):
        s, t = random_equivalent_pair(7, rng)
        assert cycle_equiv(s, t)
        flipped += s != t
    assert flipped > 10
