import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st
from sympy import Matrix

from lcagroups.errors import (
    ImpureSubmoduleError, LinearDependenceError, NoUnitPivotError, PrecisionError,
)
from lcagroups.zpmodule import (
    ZpMatrix, complete_to_summand, elementary_divisor_valuations, has_root, in_span,
    is_pure, triangular_basis,
)

from zp_oracle import brute_pure, hermite_lattices, minor_valuation, same_span, spans_everything_mod_p


class TestTriangular:
    def test_identity(self):
        b = triangular_basis([(1, 0)], 2, 3)
        assert b.vectors == ((1, 0),) and b.permutation == (0, 1)

    def test_swap(self):
        b = triangular_basis([(2, 1)], 2, 2)
        assert b.permutation == (1, 0)
        assert b.vectors == ((1, 2),)
        assert b.in_original_coordinates() == [(2, 1)]

    def test_pair(self):
        b = triangular_basis([(1, 5, 0), (0, 1, 5)], 3, 5, M=8)
        assert b.is_triangular()
        assert b.vectors[1][0] == 0 and b.vectors[0][0] == b.vectors[1][1] == 1
        assert same_span(b.in_original_coordinates(), [(1, 5, 0), (0, 1, 5)], 5, 3)

    def test_unit_scaling(self):
        b = triangular_basis([(3, 6)], 2, 5, M=4)
        assert b.vectors[0][0] == 1
        assert b.in_original_coordinates()[0] == (1, 2)

    def test_errors(self):
        with pytest.raises(NoUnitPivotError):
            triangular_basis([(2, 4)], 2, 2)
        with pytest.raises(LinearDependenceError):
            triangular_basis([(1, 1), (2, 2)], 2, 3)
        with pytest.raises(NoUnitPivotError):
            triangular_basis([(1, 0, 0), (3, 3, 0)], 3, 3)

    def test_growing_rank_chain(self):
        # an increasing chain of summands of rank 1, 2, ..., R
        rng = random.Random(7)
        p, R = 3, 8
        vecs = []
        for i in range(R):
            v = [rng.randrange(p ** 6) for _ in range(R)]
            v[i] = 1 + p * rng.randrange(100)
            for j in range(i):
                v[j] = p * rng.randrange(100)
            vecs.append(v)
            b = triangular_basis(vecs, R, p, M=6)
            assert b.is_triangular() and len(b.vectors) == i + 1
            assert is_pure(b.in_original_coordinates(), R, p, M=6)

    def test_fractions_accepted(self):
        m = ZpMatrix.from_rows([[Fraction(1, 2), 3]], 3, 2)
        assert m.rows == ((5, 3),)
        with pytest.raises(ValueError):
            ZpMatrix.from_rows([[Fraction(1, 3)]], 3, 2)


class TestPure:
    def test_examples(self):
        assert is_pure([(1, 0)], 2, 2)
        assert not is_pure([(2, 0)], 2, 2)
        assert is_pure([(1, 3)], 2, 3)

    def test_precision_exhaustion(self):
        with pytest.raises(PrecisionError):
            is_pure([(8, 0)], 2, 2, M=3)

    def test_elementary_divisors(self):
        assert elementary_divisor_valuations([(2, 0), (0, 4)], 2, 2) == [1, 2]
        assert elementary_divisor_valuations([(2, 4), (4, 8 + 16)], 2, 2) == [1, 4]

    def test_against_brute_force_p2(self):
        for amb in (1, 2, 3):
            for r in (1, 2):
                if r > amb:
                    continue
                for L in hermite_lattices(2, amb, r):
                    if minor_valuation(L, 2) < 3:
                        assert is_pure(L, amb, 2) == brute_pure(L, 2), L
                    else:
                        assert not is_pure(L, amb, 2)


class TestComplete:
    def test_examples(self):
        assert complete_to_summand([(1, 0)], 2, 5).vectors == ((1, 0), (0, 1))
        b = complete_to_summand([(1, 1)], 2, 2)
        assert Matrix(b.vectors).det() % 2 == 1
        assert complete_to_summand([(1, 3), (0, 1)], 2, 3).vectors == ((1, 3), (0, 1))

    def test_impure(self):
        with pytest.raises(ImpureSubmoduleError):
            complete_to_summand([(2, 0)], 2, 2)

    @given(st.integers(0, 10 ** 6))
    def test_random_completion(self, seed):
        rng = random.Random(seed)
        p = rng.choice([2, 3, 5])
        n = rng.randint(1, 4)
        r = rng.randint(1, n)
        sub = [[rng.randrange(p ** 8) for _ in range(n)] for _ in range(r)]
        if Matrix(sub).rank(iszerofunc=lambda x: x % p == 0) < r:
            return
        try:
            pure = is_pure(sub, n, p, M=8)
        except PrecisionError:
            return
        if not pure:
            return
        b = complete_to_summand(sub, n, p, M=8)
        assert [list(v) for v in b.vectors[:r]] == [[x % p ** 8 for x in v] for v in sub]
        assert Matrix(b.vectors).det() % p != 0
        assert spans_everything_mod_p(b.vectors, p)


class TestRoots:
    def test_examples(self):
        assert has_root((2, 0), 2, [(1, 0)], 2) == (1, 0)
        assert has_root((1, 0), 2, [(1, 0)], 2) is None
        assert has_root((3, 0), 3, [(1, 0)], 5) == (1, 0)

    def test_root_outside_submodule(self):
        # 2*(1, 1) = (2, 2) but (1, 1) is not in span{(2, 2)}
        assert has_root((2, 2), 2, [(2, 2)], 2) is None
        assert has_root((4, 4), 2, [(2, 2)], 2) == (2, 2)

    def test_precision_exhaustion(self):
        with pytest.raises(PrecisionError):
            has_root((0, 0), 2 ** 5, [(1, 0)], 2, M=5)

    @given(st.sampled_from([2, 3, 5]), st.integers(1, 200),
           st.lists(st.integers(-1000, 1000), min_size=3, max_size=3))
    def test_root_times_n_is_v(self, p, n, w):
        M = 20
        sub = [(1, 0, 0), (0, 1, 0)]
        v = tuple(n * x for x in w)
        root = has_root(v, n, sub, p, M)
        k = 0
        while n % p ** (k + 1) == 0:
            k += 1
        mod = p ** (M - k)
        # the unique root is w; it lies in the submodule iff its last coordinate vanishes
        assert (root is not None) == (w[2] % mod == 0)
        if root is not None:
            assert all((n * a - b) % mod == 0 for a, b in zip(root, v))
            assert in_span(root, sub, p, M - k)

    def test_coprime_roots_always_exist(self):
        for n in (1, 3, 7, 9, 11):
            assert has_root((5, 1), n, [(1, 0), (0, 1)], 2) is not None
