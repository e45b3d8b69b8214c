"""Quantum superspaces, their coactions, and quantum minors.

The row space A_q (variables x_i) and column space A_q* (variables xi_i,
with flipped parity) are comodule algebras over the supermatrix algebra;
quantum minors are the coaction coefficients.  Determinants and
sub-minors are also built directly from permutation sums, giving an
independent code path used for cross-checks.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import permutations

from qsuper.laurent import LaurentPoly, ONE
from qsuper.algebra import AlgebraElement, Shape


# -- superspace monomials ------------------------------------------------
#
# Both spaces have ordered-monomial bases v_1^{a_1} ... v_N^{a_N}.  The
# only data that differ are the variable parities (flipped for the dual
# side) and the q-power picked up when two variables are swapped.


def var_parity(shape: Shape, i: int, star: bool) -> int:
    p = shape.parity(i)
    return (1 - p) if star else p


def valid_vector(shape: Shape, a, star: bool) -> bool:
    if len(a) != shape.size:
        return False
    for i, v in enumerate(a, start=1):
        if v < 0:
            return False
        if v > 1 and var_parity(shape, i, star):
            return False
    return True


def vector_parity(shape: Shape, a, star: bool) -> int:
    """[a] (unstarred) or {a} (starred): sum of variable parities."""
    return sum(v * var_parity(shape, i, star) for i, v in enumerate(a, start=1)) % 2


def evec(shape: Shape, indices) -> tuple:
    """Exponent vector with one unit per listed index (with multiplicity)."""
    a = [0] * shape.size
    for i in indices:
        a[i - 1] += 1
    return tuple(a)


def interval(lo: int, hi: int):
    return list(range(lo, hi + 1))


def reorder_factor(shape: Shape, u, v, star: bool) -> LaurentPoly:
    """Monomial f with v^u * v^v = f * v^(u+v) in the superspace.

    Every crossing pair i > j (i from u, j from v) contributes the swap
    factor of the defining relations: sign from the variable parities
    and q^-2 (row space) or q^2 (dual space).
    """
    sign = 0
    cross = 0
    N = shape.size
    for i in range(2, N + 1):
        if not u[i - 1]:
            continue
        pi = var_parity(shape, i, star)
        for j in range(1, i):
            if v[j - 1]:
                cross += u[i - 1] * v[j - 1]
                sign += pi * var_parity(shape, j, star) * u[i - 1] * v[j - 1]
    base = 2 if star else -2
    return LaurentPoly.q_power(base * cross, (-1) ** (sign % 2))


def _times_gen(shape: Shape, b, j: int, star: bool):
    """(factor, b + e_j) for v^b * v_j, or None when the square vanishes."""
    pj = var_parity(shape, j, star)
    if pj and b[j - 1] >= 1:
        return None
    cross = sum(b[j:])
    oddcross = sum(
        b[k - 1] for k in range(j + 1, shape.size + 1) if var_parity(shape, k, star)
    )
    base = 2 if star else -2
    factor = LaurentPoly.q_power(base * cross, (-1) ** ((pj * oddcross) % 2))
    nb = list(b)
    nb[j - 1] += 1
    return factor, tuple(nb)


# -- coactions and minors -------------------------------------------------


@lru_cache(maxsize=None)
def _coact_cached(shape: Shape, a, star: bool):
    if not valid_vector(shape, a, star):
        return ()
    N = shape.size
    word = [i for i in range(1, N + 1) for _ in range(a[i - 1])]
    comps = {(0,) * N: AlgebraElement.one(shape)}
    for i in word:
        nxt: dict = {}
        for b, F in comps.items():
            pb = vector_parity(shape, b, star)
            for j in range(1, N + 1):
                hit = _times_gen(shape, b, j, star)
                if hit is None:
                    continue
                factor, nb = hit
                # tensor sign: the space part of the left factor moves
                # past the matrix generator of the right factor
                sgn = (-1) ** (pb * shape.gen_parity(i, j))
                term = (F * AlgebraElement.generator(shape, i, j)).scale(
                    factor.scale(sgn)
                )
                acc = nxt.get(nb, AlgebraElement.zero(shape)) + term
                if acc.is_zero():
                    nxt.pop(nb, None)
                else:
                    nxt[nb] = acc
        comps = nxt
    return tuple(sorted(comps.items()))


def coact(shape: Shape, a) -> dict:
    """Components of the coaction of x^a: map b -> minor element."""
    return dict(_coact_cached(shape, tuple(a), False))


def coact_star(shape: Shape, a) -> dict:
    """Components of the coaction of xi^a: map b -> starred minor."""
    return dict(_coact_cached(shape, tuple(a), True))


def minor(shape: Shape, rows, cols) -> AlgebraElement:
    """Quantum minor: coefficient of x^cols in the coaction of x^rows."""
    comps = coact(shape, evec(shape, rows))
    return comps.get(evec(shape, cols), AlgebraElement.zero(shape))


def minor_star(shape: Shape, rows, cols) -> AlgebraElement:
    comps = coact_star(shape, evec(shape, rows))
    return comps.get(evec(shape, cols), AlgebraElement.zero(shape))


# -- permutation-sum determinants (independent of the coactions) -----------


def _inversions(sigma) -> int:
    return sum(
        1 for s in range(len(sigma)) for t in range(s + 1, len(sigma)) if sigma[s] > sigma[t]
    )


def _perm_sum(shape: Shape, rows, cols, base: int, sign: int = -1) -> AlgebraElement:
    """Sum over bijections of (sign * q^base)^inversions, rows in order.

    Even-block determinants use sign -1; for the odd blocks the super
    swap cancels the -1 and each inversion contributes +q^base.
    """
    total = AlgebraElement.zero(shape)
    for sigma in permutations(range(len(cols))):
        l = _inversions(sigma)
        coeff = LaurentPoly.q_power(base * l, sign**l)
        word = [(rows[t], cols[sigma[t]]) for t in range(len(rows))]
        total = total + AlgebraElement.from_word(shape, word, coeff)
    return total


def det_q_A(shape: Shape) -> AlgebraElement:
    return _perm_sum(shape, interval(1, shape.m), interval(1, shape.m), 2)


def det_qinv_D(shape: Shape) -> AlgebraElement:
    lo, hi = shape.m + 1, shape.size
    return _perm_sum(shape, interval(lo, hi), interval(lo, hi), -2)


def sub_minor_A(shape: Shape, l: int, k: int) -> AlgebraElement:
    """Determinant of the even q-block with row l and column k removed."""
    if not (1 <= l <= shape.m and 1 <= k <= shape.m):
        raise IndexError(f"sub-minor index ({l},{k}) outside the q-block")
    rows = [i for i in interval(1, shape.m) if i != l]
    cols = [j for j in interval(1, shape.m) if j != k]
    return _perm_sum(shape, rows, cols, 2)


def c_block_minor(shape: Shape, r: int) -> AlgebraElement:
    """Explicit q^-2-permutation sum for the lower-left block minor.

    The entries here are odd, so an inversion contributes +q^-2: the
    super sign of the swap absorbs the -1 of the even-block formula.
    """
    return _perm_sum(shape, interval(shape.m + 1, shape.m + r), interval(1, r), -2, sign=1)


def b_block_minor_star(shape: Shape, r: int) -> AlgebraElement:
    """Explicit q^2-permutation sum for the upper-right block minor."""
    return _perm_sum(shape, interval(1, r), interval(shape.m + 1, shape.m + r), 2, sign=1)


def covariant_minor_star(shape: Shape, r: int) -> AlgebraElement:
    """Starred minor on rows 1..r against the last r columns."""
    N = shape.size
    return minor_star(shape, interval(1, r), interval(N - r + 1, N))


def covariant_minor(shape: Shape, s: int) -> AlgebraElement:
    """Unstarred minor on the last s rows against columns 1..s."""
    N = shape.size
    return minor(shape, interval(N - s + 1, N), interval(1, s))


# -- Laplace expansion ------------------------------------------------------


def laplace_expand(shape: Shape, a, a2, star: bool) -> dict:
    """Right-hand side of the Laplace expansion of the minors of a + a2.

    Expands each component of the product coaction with the explicit
    crossing prefactor reorder_factor(c, c2) / reorder_factor(a, a2) and
    the super sign from the space part passing the second minor.
    """
    a, a2 = tuple(a), tuple(a2)
    global_factor = reorder_factor(shape, a, a2, star)
    ((ge, gc),) = global_factor.terms.items()
    inv_global = LaurentPoly.q_power(-ge, gc)
    left = _coact_cached(shape, a, star)
    right = _coact_cached(shape, a2, star)
    pa2 = vector_parity(shape, a2, star)
    out: dict = {}
    for c, F in left:
        pc = vector_parity(shape, c, star)
        for c2, G in right:
            b = tuple(x + y for x, y in zip(c, c2))
            if not valid_vector(shape, b, star):
                continue
            sgn = (-1) ** (pc * ((pa2 + vector_parity(shape, c2, star)) % 2))
            factor = (reorder_factor(shape, c, c2, star) * inv_global).scale(sgn)
            term = (F * G).scale(factor)
            acc = out.get(b, AlgebraElement.zero(shape)) + term
            if acc.is_zero():
                out.pop(b, None)
            else:
                out[b] = acc
    return out


def laplace_verify(shape: Shape, a, a2, star: bool) -> bool:
    """Minor-of-a-sum against the expanded product form; exact equality."""
    ab = tuple(x + y for x, y in zip(a, a2))
    lhs = dict(_coact_cached(shape, ab, star))
    return laplace_expand(shape, a, a2, star) == lhs
