import math

import pytest
from hypothesis import given, settings, strategies as st

from qsuper.laurent import LaurentPoly, ONE
from qsuper.algebra import (
    AlgebraElement,
    NonHomogeneous,
    Shape,
    count_monomials,
    enumerate_block,
    matrix_parity,
    straighten_pair,
    x_norm,
)

S11 = Shape(1, 1)
S21 = Shape(2, 1)
S22 = Shape(2, 2)


def lp(d):
    return LaurentPoly(d)


def gen(shape, i, j):
    return AlgebraElement.generator(shape, i, j)


class TestShape:
    def test_parity(self):
        assert S21.parity(1) == 0
        assert S21.parity(2) == 0
        assert S21.parity(3) == 1
        with pytest.raises(IndexError):
            S21.parity(4)

    def test_gen_parity(self):
        assert S11.gen_parity(1, 2) == 1
        assert S11.gen_parity(2, 2) == 0
        assert S11.gen_parity(1, 1) == 0


class TestStraightenPair:
    def test_odd_pair_anticommutes(self):
        got = straighten_pair(S11, (2, 1), (1, 2))
        assert got == AlgebraElement(S11, {(0, 1, 1, 0): lp({0: -1})})

    def test_lower_correction(self):
        got = straighten_pair(S11, (2, 2), (1, 1))
        assert got == AlgebraElement(
            S11, {(1, 0, 0, 1): ONE, (0, 1, 1, 0): lp({2: 1, -2: -1})}
        )

    def test_same_row_q_power(self):
        got = straighten_pair(S11, (1, 2), (1, 1))
        assert got == AlgebraElement(S11, {(1, 1, 0, 0): lp({-2: 1})})

    def test_same_column_q_power(self):
        # x_{11}x_{21} = q^2 x_{21}x_{11} at (1,1): column 1 is even
        got = straighten_pair(S11, (2, 1), (1, 1))
        assert got == AlgebraElement(S11, {(1, 0, 1, 0): lp({-2: 1})})

    def test_odd_square_vanishes(self):
        assert straighten_pair(S11, (1, 2), (1, 2)).is_zero()
        assert straighten_pair(S11, (2, 1), (2, 1)).is_zero()

    def test_ordered_pair_untouched(self):
        got = straighten_pair(S11, (1, 1), (2, 2))
        assert got == AlgebraElement(S11, {(1, 0, 0, 1): ONE})


class TestMultiply:
    def test_unit(self):
        f = gen(S11, 2, 2) * gen(S11, 1, 1)
        assert AlgebraElement.one(S11) * f == f
        assert f * AlgebraElement.one(S11) == f

    def test_odd_square(self):
        x12 = gen(S11, 1, 2)
        assert (x12 * x12).is_zero()

    def test_matches_pair_rule(self):
        assert gen(S11, 2, 2) * gen(S11, 1, 1) == straighten_pair(S11, (2, 2), (1, 1))

    def test_shape_mismatch(self):
        from qsuper.algebra import ShapeMismatch

        with pytest.raises(ShapeMismatch):
            gen(S11, 1, 1) * gen(S21, 1, 1)

    def test_relation_closure_three_letters(self):
        # (x22 x21) x12 and x22 (x21 x12) agree
        a, b, c = gen(S11, 2, 2), gen(S11, 2, 1), gen(S11, 1, 2)
        assert (a * b) * c == a * (b * c)


words = st.lists(
    st.tuples(st.integers(1, 3), st.integers(1, 3)), min_size=0, max_size=3
)


@settings(max_examples=60, deadline=None)
@given(words, words, words, st.sampled_from([S11, S21, Shape(1, 2)]))
def test_multiply_associative(w1, w2, w3, shape):
    N = shape.size
    ws = [tuple((min(i, N), min(j, N)) for i, j in w) for w in (w1, w2, w3)]
    f, g, h = (AlgebraElement.from_word(shape, w) for w in ws)
    assert (f * g) * h == f * (g * h)


@settings(max_examples=30, deadline=None)
@given(
    st.lists(st.tuples(st.integers(1, 4), st.integers(1, 4)), max_size=3),
    st.lists(st.tuples(st.integers(1, 4), st.integers(1, 4)), max_size=3),
)
def test_multiply_associative_2x2(w1, w2):
    f = AlgebraElement.from_word(S22, w1)
    g = AlgebraElement.from_word(S22, w2)
    h = AlgebraElement.from_word(S22, w2[::-1])
    assert (f * g) * h == f * (g * h)


class TestBar:
    def test_generator_fixed(self):
        f = gen(S11, 1, 1).scale(lp({1: 1}))
        assert f.bar() == gen(S11, 1, 1).scale(lp({-1: 1}))

    def test_odd_product_fixed(self):
        f = gen(S11, 1, 2) * gen(S11, 2, 1)
        assert f.bar() == f

    def test_diagonal_product(self):
        f = gen(S11, 1, 1) * gen(S11, 2, 2)
        expect = f + (gen(S11, 1, 2) * gen(S11, 2, 1)).scale(lp({2: 1, -2: -1}))
        assert f.bar() == expect

    @settings(max_examples=50, deadline=None)
    @given(words, st.sampled_from([S11, S21]))
    def test_involutive(self, w, shape):
        N = shape.size
        f = AlgebraElement.from_word(shape, [(min(i, N), min(j, N)) for i, j in w])
        assert f.bar().bar() == f

    @settings(max_examples=50, deadline=None)
    @given(words, words, st.sampled_from([S11, S21]))
    def test_anti_automorphism(self, w1, w2, shape):
        N = shape.size
        f = AlgebraElement.from_word(shape, [(min(i, N), min(j, N)) for i, j in w1])
        g = AlgebraElement.from_word(shape, [(min(i, N), min(j, N)) for i, j in w2])
        if f.is_zero() or g.is_zero():
            return
        sign = (-1) ** (f.parity() * g.parity())
        assert (f * g).bar() == (g.bar() * f.bar()).scale(sign)

    def test_diagonal_coefficient_bar_fixed(self):
        # the self-coefficient of bar(x(M)) equals that of x(M)
        for shape in (S11, S21):
            N = shape.size
            for k in range(3):
                for ro in _compositions(k, N):
                    for co in _compositions(k, N):
                        for M in enumerate_block(shape, ro, co):
                            f = x_norm(shape, M)
                            assert f.bar().coeff(M) == f.coeff(M)


def _compositions(total, parts):
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


class TestNormalizedMonomials:
    def test_square_no_pairs(self):
        assert x_norm(S11, (2, 0, 0, 0)) == AlgebraElement(S11, {(2, 0, 0, 0): ONE})

    def test_row_pair(self):
        assert x_norm(S11, (1, 1, 0, 0)) == AlgebraElement(
            S11, {(1, 1, 0, 0): lp({-1: 1})}
        )

    def test_diagonal_no_pairs(self):
        assert x_norm(S11, (1, 0, 0, 1)) == AlgebraElement(S11, {(1, 0, 0, 1): ONE})

    def test_odd_column_pair(self):
        # column 2 has parity 1, so its pair contributes with opposite sign
        assert x_norm(S11, (0, 1, 0, 1)) == AlgebraElement(
            S11, {(0, 1, 0, 1): lp({1: 1})}
        )


class TestBiweight:
    def test_monomials(self):
        f = gen(S11, 1, 1) * gen(S11, 2, 2)
        assert f.biweight() == ((1, 1), (1, 1))
        assert (gen(S11, 1, 2) * gen(S11, 2, 1)).biweight() == ((1, 1), (1, 1))
        assert AlgebraElement.one(S11).biweight() == ((0, 0), (0, 0))

    def test_rejects_mixed(self):
        with pytest.raises(NonHomogeneous):
            (gen(S11, 1, 1) + AlgebraElement.one(S11)).biweight()

    @settings(max_examples=50, deadline=None)
    @given(words, words)
    def test_additive(self, w1, w2):
        f = AlgebraElement.from_word(S21, [(min(i, 3), min(j, 3)) for i, j in w1])
        g = AlgebraElement.from_word(S21, [(min(i, 3), min(j, 3)) for i, j in w2])
        if f.is_zero() or g.is_zero() or (f * g).is_zero():
            return
        (r1, c1), (r2, c2) = f.biweight(), g.biweight()
        assert (f * g).biweight() == (
            tuple(a + b for a, b in zip(r1, r2)),
            tuple(a + b for a, b in zip(c1, c2)),
        )


class TestEnumerateBlock:
    def test_degree_one_block(self):
        assert enumerate_block(S11, (1, 1), (1, 1)) == [(0, 1, 1, 0), (1, 0, 0, 1)]

    def test_empty_biweight(self):
        assert enumerate_block(S11, (0, 0), (0, 0)) == [(0, 0, 0, 0)]

    def test_odd_cap_excludes(self):
        assert enumerate_block(S11, (2, 0), (0, 2)) == []

    def test_mismatched_sums(self):
        assert enumerate_block(S11, (1, 0), (0, 0)) == []


class TestCounting:
    @pytest.mark.parametrize("shape", [S11, S21, Shape(1, 2), S22])
    def test_dimension_formula(self, shape):
        m, n = shape.m, shape.n
        for k in range(7):
            expect = sum(
                math.comb(m * m + n * n + r - 1, r) * math.comb(2 * m * n, k - r)
                for r in range(k + 1)
                if k - r <= 2 * m * n
            )
            assert count_monomials(shape, k) == expect


class TestSerialization:
    def test_roundtrip_and_sorting(self):
        f = gen(S11, 2, 2) * gen(S11, 1, 1)
        obj = f.to_json()
        assert obj["m"] == 1 and obj["n"] == 1
        mats = [t["matrix"] for t in obj["terms"]]
        assert mats == sorted(mats)
        assert AlgebraElement.from_json(obj) == f

    def test_rejects_bad_matrix(self):
        with pytest.raises(ValueError):
            AlgebraElement.from_json(
                {"m": 1, "n": 1, "terms": [{"matrix": [[0, 2], [0, 0]], "coeff": {"0": 1}}]}
            )


def test_matrix_parity():
    assert matrix_parity(S11, (1, 0, 0, 1)) == 0
    assert matrix_parity(S11, (0, 1, 0, 0)) == 1
    assert matrix_parity(S11, (0, 1, 1, 0)) == 0
