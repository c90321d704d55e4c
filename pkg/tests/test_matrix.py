import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from gendiag.construct import Field, GeneratorSpec, Kind, random_gram
from gendiag.errors import DegreeMismatch, MalformedInput, NotCertified, OutOfRange
from gendiag.matrix import (
    ComplexMatrix,
    PsdVerdict,
    certify,
    cycle_factor_check,
    format_matrix,
    generalized_diagonal,
    hadamard_pair_check,
    log_magnitude_gap,
    parse_matrix,
)
from gendiag.order import canonicalize_class, class_members, cycle_leq
from gendiag.perm import Permutation, all_permutations, is_involution, parse_cycles


def gram(n, seed, **kw):
    return random_gram(GeneratorSpec(n, seed, **kw))


class TestGeneralizedDiagonal:
    def test_identity_is_diagonal_product(self):
        X = gram(4, 3)
        v = generalized_diagonal(X, Permutation.identity(4))
        assert math.isclose(v.magnitude, float(np.prod(X.entries.diagonal().real)), rel_tol=1e-12)
        assert v.is_real and v.sign == 1

    def test_two_by_two(self):
        X = ComplexMatrix([[2, 1], [1, 2]])
        v = generalized_diagonal(X, parse_cycles("(1 2)", 2))
        assert v.log_magnitude == 0.0 and v.value == 1

    def test_three_cycle_and_reverse(self):
        X = gram(3, 11)
        a = generalized_diagonal(X, parse_cycles("(1 2 3)", 3))
        b = generalized_diagonal(X, parse_cycles("(1 3 2)", 3))
        assert abs(log_magnitude_gap(a, b)) <= 1e-12
        assert not a.is_real
        assert np.isclose(a.value, np.conj(b.value))

    def test_zero_factor(self):
        X = ComplexMatrix([[1, 0], [0, 1]])
        v = generalized_diagonal(X, parse_cycles("(1 2)", 2))
        assert v.is_zero and v.log_magnitude == -math.inf and v.phase is None and v.value == 0
        assert log_magnitude_gap(v, v) == 0.0

    def test_degree_mismatch(self):
        with pytest.raises(DegreeMismatch):
            generalized_diagonal(ComplexMatrix(np.eye(3)), Permutation.identity(2))

    def test_empty(self):
        v = generalized_diagonal(ComplexMatrix(np.zeros((0, 0))), Permutation(()))
        assert v.log_magnitude == 0.0 and v.sign == 1

    def test_no_underflow_for_long_products(self):
        n = 400
        X = ComplexMatrix(np.full((n, n), 1e-3) + np.eye(n) * 1e-3)
        v = generalized_diagonal(X, Permutation.identity(n))
        assert math.isclose(v.log_magnitude, n * math.log(2e-3), rel_tol=1e-12)
        assert np.prod(X.entries.diagonal()) == 0  # the naive product underflows

    @settings(max_examples=60, deadline=None)
    @given(st.integers(1, 7), st.integers(0, 2**32), st.data())
    def test_matches_direct_product(self, n, seed, data):
        X = gram(n, seed)
        p = Permutation(tuple(data.draw(st.permutations(range(1, n + 1)))))
        v = generalized_diagonal(X, p)
        direct = oracles.diag_product(X.entries.tolist(), p.images)
        assert np.isclose(v.value, direct, rtol=1e-10, atol=0)


class TestCertify:
    def test_examples(self):
        assert certify(ComplexMatrix(np.eye(3))).verdict is PsdVerdict.PD
        assert certify(ComplexMatrix([[1, 2], [2, 1]])).verdict is PsdVerdict.NOT_PSD
        c = certify(ComplexMatrix([[1, 1], [1, 1]]))
        assert c.verdict is PsdVerdict.PSD and c.is_psd
        assert certify(ComplexMatrix([[1, 1j], [1j, 1]])).verdict is PsdVerdict.NOT_HERMITIAN

    def test_empty_and_zero(self):
        assert certify(ComplexMatrix(np.zeros((0, 0)))).verdict is PsdVerdict.PD
        assert certify(ComplexMatrix(np.zeros((3, 3)))).verdict is PsdVerdict.PSD

    def test_cached(self):
        X = ComplexMatrix(np.eye(2))
        assert certify(X) is certify(X)

    def test_bad_tol(self):
        with pytest.raises(ValueError):
            certify(ComplexMatrix(np.eye(2)), tol=0)

    @settings(max_examples=100, deadline=None)
    @given(st.integers(1, 8), st.integers(1, 8), st.integers(0, 2**32), st.booleans())
    def test_any_gram_is_psd(self, n, r, seed, cplx):
        rng = np.random.default_rng(seed)
        B = rng.standard_normal((n, r)) * rng.uniform(0.01, 100)
        if cplx:
            B = B + 1j * rng.standard_normal((n, r))
        G = B @ B.conj().T
        assert certify(ComplexMatrix((G + G.conj().T) / 2)).is_psd

    def test_immutable(self):
        X = ComplexMatrix(np.eye(2))
        with pytest.raises(ValueError):
            X.entries[0, 0] = 5

    def test_rejects_bad_shapes(self):
        with pytest.raises(MalformedInput):
            ComplexMatrix(np.ones((2, 3)))
        with pytest.raises(MalformedInput):
            ComplexMatrix([[np.nan]])


class TestHadamardChecks:
    def test_examples(self):
        assert hadamard_pair_check(ComplexMatrix(np.eye(4)))
        assert hadamard_pair_check(ComplexMatrix([[2, 1], [1, 2]]))
        assert cycle_factor_check(ComplexMatrix([[2, 1], [1, 2]]), (1, 2))
        X = gram(5, 0)
        assert cycle_factor_check(X, (3,))
        assert cycle_factor_check(X, (1, 3, 5))

    def test_requires_certificate(self):
        bad = ComplexMatrix([[1, 2], [2, 1]])
        with pytest.raises(NotCertified):
            hadamard_pair_check(bad)
        with pytest.raises(NotCertified):
            cycle_factor_check(bad, (1, 2))

    def test_cycle_out_of_range(self):
        with pytest.raises(OutOfRange):
            cycle_factor_check(ComplexMatrix(np.eye(3)), (1, 4))

    def test_zero_diagonal_row(self):
        X = ComplexMatrix([[0, 0, 0], [0, 2, 1], [0, 1, 2]])
        assert hadamard_pair_check(X)
        assert cycle_factor_check(X, (1, 2, 3))

    @settings(max_examples=200, deadline=None)
    @given(st.integers(2, 8), st.integers(0, 2**32), st.sampled_from(list(Field)), st.data())
    def test_random_gram(self, n, seed, field, data):
        r = data.draw(st.integers(1, n))
        X = random_gram(GeneratorSpec(n, seed, field, Kind.PSD, rank=r))
        assert hadamard_pair_check(X)
        elems = data.draw(st.lists(st.integers(1, n), min_size=1, max_size=n, unique=True))
        assert cycle_factor_check(X, elems)


class TestInvariants:
    def test_equivalent_permutations_equal_magnitude(self):
        for seed in range(20):
            X = gram(5, seed, rank=1 + seed % 5)
            for p in all_permutations(5):
                ref = generalized_diagonal(X, p)
                for q in class_members(canonicalize_class(p)):
                    assert abs(log_magnitude_gap(generalized_diagonal(X, q), ref)) <= 1e-9

    def test_cycle_inclusion_inequality(self):
        perms = list(all_permutations(4))
        for seed in range(20):
            X = gram(4, seed, rank=1 + seed % 4)
            vals = {p: generalized_diagonal(X, p) for p in perms}
            for t in perms:
                for s in perms:
                    if cycle_leq(t, s):
                        assert log_magnitude_gap(vals[s], vals[t]) <= 1e-9

    def test_involutions_nonnegative_real(self):
        for seed in range(30):
            X = gram(4, seed, rank=1 + seed % 4)
            for t in all_permutations(4):
                if is_involution(t):
                    v = generalized_diagonal(X, t)
                    assert v.is_zero or (v.is_real and v.sign == 1)


class TestFileFormat:
    def test_round_trip(self):
        X = gram(4, 5)
        Y = parse_matrix(format_matrix(X))
        assert np.array_equal(X.entries, Y.entries)

    def test_parse_literals(self):
        X = parse_matrix("2\n1 2.5-0.5i\n2.5+0.5i 3e0\n")
        assert X[1, 2] == 2.5 - 0.5j and X[2, 1] == 2.5 + 0.5j and X[2, 2] == 3

    def test_zero_dimension(self):
        assert parse_matrix("0\n").n == 0
        assert format_matrix(ComplexMatrix(np.zeros((0, 0)))) == "0\n"

    @pytest.mark.parametrize("text", [
        "", "x\n", "2\n1 2\n", "2\n1 2\n3\n", "1\nabc\n", "1\ninf\n", "2\n1 2 3\n4 5 6\n",
    ])
    def test_parse_errors(self, text):
        with pytest.raises(MalformedInput):
            parse_matrix(text)

    def test_real_entries_written_plainly(self):
        assert format_matrix(ComplexMatrix([[1.5]])) == "1\n1.5\n"
        assert format_matrix(ComplexMatrix([[1 - 2j]])) == "1\n1.0-2.0i\n"

    def test_one_based_indexing(self):
        X = ComplexMatrix([[1, 2], [3, 4]])
        assert X[2, 1] == 3
        with pytest.raises(OutOfRange):
            X[0, 1]
