import itertools

import pytest

from qsuper.laurent import LaurentPoly, ONE
from qsuper.algebra import AlgebraElement, Shape
from qsuper.superspace import (
    b_block_minor_star,
    c_block_minor,
    coact,
    coact_star,
    covariant_minor,
    covariant_minor_star,
    det_q_A,
    det_qinv_D,
    evec,
    interval,
    laplace_verify,
    minor,
    minor_star,
    sub_minor_A,
    valid_vector,
)

S11 = Shape(1, 1)
S21 = Shape(2, 1)
S22 = Shape(2, 2)


def lp(d):
    return LaurentPoly(d)


def gen(shape, i, j):
    return AlgebraElement.generator(shape, i, j)


class TestCoact:
    def test_generator(self):
        comps = coact(S21, (1, 0, 0))
        assert comps == {
            (1, 0, 0): gen(S21, 1, 1),
            (0, 1, 0): gen(S21, 1, 2),
            (0, 0, 1): gen(S21, 1, 3),
        }

    def test_empty(self):
        assert coact(S11, (0, 0)) == {(0, 0): AlgebraElement.one(S11)}

    def test_degree_two_component(self):
        comps = coact(S11, (1, 1))
        expect = gen(S11, 1, 1) * gen(S11, 2, 2) - (
            gen(S11, 1, 2) * gen(S11, 2, 1)
        ).scale(lp({-2: 1}))
        assert comps[(1, 1)] == expect

    def test_invalid_vector_is_zero(self):
        assert coact(S11, (0, 2)) == {}
        assert not valid_vector(S11, (0, 2), False)

    def test_star_generator(self):
        comps = coact_star(S11, (1, 0))
        assert comps == {(1, 0): gen(S11, 1, 1), (0, 1): gen(S11, 1, 2)}

    def test_star_determinant_component(self):
        comps = coact_star(S21, (1, 1, 0))
        expect = gen(S21, 1, 1) * gen(S21, 2, 2) - (
            gen(S21, 1, 2) * gen(S21, 2, 1)
        ).scale(lp({2: 1}))
        assert comps[(1, 1, 0)] == expect

    def test_degrees_match(self):
        for b in coact(S22, (1, 0, 1, 0)):
            assert sum(b) == 2


class TestDeterminants:
    def test_det_A_rank_one(self):
        assert det_q_A(S11) == gen(S11, 1, 1)

    def test_det_A_rank_two(self):
        expect = gen(S21, 1, 1) * gen(S21, 2, 2) - (
            gen(S21, 1, 2) * gen(S21, 2, 1)
        ).scale(lp({2: 1}))
        assert det_q_A(S21) == expect

    @pytest.mark.parametrize("shape", [S11, S21, S22, Shape(3, 1)])
    def test_det_A_matches_coaction(self, shape):
        rows = interval(1, shape.m)
        assert det_q_A(shape) == minor_star(shape, rows, rows)

    def test_det_D_rank_one(self):
        assert det_qinv_D(S21) == gen(S21, 3, 3)

    def test_det_D_rank_two(self):
        expect = gen(S22, 3, 3) * gen(S22, 4, 4) - (
            gen(S22, 3, 4) * gen(S22, 4, 3)
        ).scale(lp({-2: 1}))
        assert det_qinv_D(S22) == expect

    @pytest.mark.parametrize("shape", [S11, S21, S22, Shape(1, 2)])
    def test_det_D_matches_coaction(self, shape):
        rows = interval(shape.m + 1, shape.size)
        assert det_qinv_D(shape) == minor(shape, rows, rows)


class TestSubMinors:
    def test_rank_one_empty(self):
        assert sub_minor_A(S11, 1, 1) == AlgebraElement.one(S11)

    def test_rank_two(self):
        assert sub_minor_A(S21, 1, 1) == gen(S21, 2, 2)
        assert sub_minor_A(S21, 1, 2) == gen(S21, 2, 1)
        assert sub_minor_A(S21, 2, 2) == gen(S21, 1, 1)

    def test_rank_three(self):
        s31 = Shape(3, 1)
        expect = gen(s31, 2, 1) * gen(s31, 3, 3) - (
            gen(s31, 2, 3) * gen(s31, 3, 1)
        ).scale(lp({2: 1}))
        assert sub_minor_A(s31, 1, 2) == expect

    def test_out_of_block(self):
        with pytest.raises(IndexError):
            sub_minor_A(S11, 1, 2)


class TestBlockMinors:
    @pytest.mark.parametrize("shape,r", [(S11, 1), (S21, 1), (S22, 1), (S22, 2)])
    def test_c_block_against_coaction(self, shape, r):
        rows = interval(shape.m + 1, shape.m + r)
        assert c_block_minor(shape, r) == minor(shape, rows, interval(1, r))

    @pytest.mark.parametrize("shape,r", [(S11, 1), (S21, 1), (S22, 1), (S22, 2)])
    def test_b_block_against_coaction(self, shape, r):
        cols = interval(shape.m + 1, shape.m + r)
        assert b_block_minor_star(shape, r) == minor_star(shape, interval(1, r), cols)

    def test_covariant_edges(self):
        assert covariant_minor_star(S21, 1) == gen(S21, 1, 3)
        assert covariant_minor(S21, 1) == gen(S21, 3, 1)
        assert not covariant_minor_star(S22, 2).is_zero()


class TestBarInvariance:
    @pytest.mark.parametrize("shape", [S21, S22, Shape(3, 1)])
    def test_consecutive_star_minors(self, shape):
        N = shape.size
        for r in range(1, N + 1):
            for s in range(1, N - r + 2):
                f = minor_star(shape, interval(1, r), interval(s, s + r - 1))
                if f.is_zero():
                    continue
                assert f.bar() == f, (shape, r, s)

    @pytest.mark.parametrize("shape", [S11, S21, S22])
    def test_determinants(self, shape):
        assert det_q_A(shape).bar() == det_q_A(shape)
        assert det_qinv_D(shape).bar() == det_qinv_D(shape)

    @pytest.mark.parametrize("shape", [S11, S21, S22])
    def test_c_block(self, shape):
        for r in range(1, min(shape.m, shape.n) + 1):
            f = c_block_minor(shape, r)
            assert f.bar() == f


def _vectors(shape, deg, star):
    N = shape.size
    caps = [
        1 if (shape.parity(i) == (0 if star else 1)) else deg
        for i in range(1, N + 1)
    ]
    for a in itertools.product(*(range(min(c, deg) + 1) for c in caps)):
        if sum(a) == deg:
            yield a


class TestLaplace:
    def test_basic_pair(self):
        assert laplace_verify(S11, (1, 0), (0, 1), star=False)
        assert laplace_verify(S11, (1, 0), (0, 1), star=True)

    def test_trivial_factor(self):
        assert laplace_verify(S21, (1, 1, 0), (0, 0, 0), star=False)

    def test_three_rows(self):
        assert laplace_verify(S21, (1, 0, 0), (0, 1, 1), star=False)
        assert laplace_verify(S21, (1, 0, 0), (0, 1, 1), star=True)

    @pytest.mark.parametrize("shape", [S11, S21])
    @pytest.mark.parametrize("star", [False, True])
    def test_low_degree_sweep(self, shape, star):
        for d1 in range(3):
            for d2 in range(3 - d1):
                for a in _vectors(shape, d1, star):
                    for a2 in _vectors(shape, d2, star):
                        assert laplace_verify(shape, a, a2, star), (a, a2)
