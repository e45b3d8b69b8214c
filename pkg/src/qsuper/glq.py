"""The determinant localization of the supermatrix algebra, in mixed coordinates.

Internally every element is manipulated in a *raw* form: sums of
ordered x-monomials with a power of the even-block determinant detA at
the far right (the only inverted element the raw form needs).  Public
elements live in the mixed normal form: monomials in the generators
x_ij (i <= m or j <= m) and the Schur-complement entries y_uv, times
detA^a * detD'^d, where the even diagonal blocks of the exponent matrix
each keep at least one zero diagonal entry.  Products are computed raw
and re-expressed over the constrained family by exact linear solving.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import permutations

from qsuper.laurent import LaurentPoly, ONE
from qsuper.algebra import (
    AlgebraElement,
    Shape,
    col_sums,
    enumerate_block,
    mat_entry,
    matrix_to_word,
    row_sums,
    zero_matrix,
)
from qsuper.superspace import det_q_A, sub_minor_A
from qsuper.exactlinalg import LinearSolveFailure, solve_in_span

QSQ_DIFF = LaurentPoly({2: 1, -2: -1})  # q^2 - q^-2


# -- raw form: dict (monomial matrix, detA power) -> coefficient ----------


def raw_zero():
    return {}


def raw_one(shape: Shape):
    return {(zero_matrix(shape.size), 0): ONE}


def _raw_put(raw, key, c):
    s = raw.get(key, LaurentPoly.zero()) + c
    if s.is_zero():
        raw.pop(key, None)
    else:
        raw[key] = s


def raw_add(r1, r2):
    out = dict(r1)
    for k, c in r2.items():
        _raw_put(out, k, c)
    return out


def raw_scale(raw, c):
    if isinstance(c, int):
        c = LaurentPoly.from_int(c)
    if c.is_zero():
        return {}
    return {k: v * c for k, v in raw.items()}


def raw_shift_det(raw, k: int):
    if k == 0:
        return dict(raw)
    return {(N, e + k): c for (N, e), c in raw.items()}


def raw_from_alg(f: AlgebraElement):
    return {(N, 0): c for N, c in f.terms.items()}


def raw_freeze(raw):
    return tuple(sorted((N, e, c) for (N, e), c in raw.items()))


def raw_thaw(frozen):
    return {(N, e): c for N, e, c in frozen}


def _det_push_series(e: int) -> LaurentPoly:
    """(q^(4e) - 1)/(q^4 - 1): the geometric factor when detA^e passes a
    lower-block generator."""
    if e >= 0:
        return LaurentPoly({4 * t: 1 for t in range(e)})
    return LaurentPoly({-4 * t: -1 for t in range(1, -e + 1)})


@lru_cache(maxsize=None)
def _cofactor_sum(shape: Shape, mu: int, nu: int, esign: int) -> AlgebraElement:
    """sum_{k,l} (-q^2)^(esign*(k-l)) x_uk A_lk x_lv over the q-block,
    with A_lk the sub-determinant deleting row l and column k."""
    m = shape.m
    out = AlgebraElement.zero(shape)
    for k in range(1, m + 1):
        for l in range(1, m + 1):
            e = esign * (k - l)
            coeff = LaurentPoly.q_power(2 * e, (-1) ** e)
            term = (
                AlgebraElement.generator(shape, mu, k)
                * sub_minor_A(shape, l, k)
                * AlgebraElement.generator(shape, l, nu)
            ).scale(coeff)
            out = out + term
    return out


def t_correction(shape: Shape, mu: int, nu: int) -> AlgebraElement:
    """T_uv with detA * x_uv = x_uv * detA + (q^2 - q^-2) T_uv."""
    return _cofactor_sum(shape, mu, nu, 1)


def raw_times_gen(shape: Shape, raw, i: int, j: int):
    """Right-multiply a raw element by the generator x_ij."""
    m = shape.m
    gen = AlgebraElement.generator(shape, i, j)
    out: dict = {}
    for (N, e), c in raw.items():
        base = AlgebraElement(shape, {N: c}) * gen
        if e == 0 or (i <= m and j <= m):
            for N2, c2 in base.terms.items():
                _raw_put(out, (N2, e), c2)
        elif i <= m or j <= m:
            # mixed entry: detA^e x_ij = q^(2e) x_ij detA^e
            for N2, c2 in base.terms.items():
                _raw_put(out, (N2, e), c2.shift(2 * e))
        else:
            # lower-block entry: correction term drops one detA power
            for N2, c2 in base.terms.items():
                _raw_put(out, (N2, e), c2)
            corr = AlgebraElement(shape, {N: c}) * t_correction(shape, i, j)
            factor = QSQ_DIFF * _det_push_series(e)
            for N2, c2 in corr.scale(factor).terms.items():
                _raw_put(out, (N2, e - 1), c2)
    return out


def raw_times_alg(shape: Shape, raw, f: AlgebraElement):
    """Right-multiply by a polynomial element (given in normal form)."""
    N = shape.size
    out: dict = {}
    for M, c in f.terms.items():
        cur = raw_scale(raw, c)
        for letter in matrix_to_word(M, N):
            cur = raw_times_gen(shape, cur, *letter)
        out = raw_add(out, cur)
    return out


def raw_times_raw(shape: Shape, r1, r2):
    N = shape.size
    out: dict = {}
    for (M, e), c in r2.items():
        cur = raw_scale(r1, c)
        for letter in matrix_to_word(M, N):
            cur = raw_times_gen(shape, cur, *letter)
        out = raw_add(out, raw_shift_det(cur, e))
    return out


@lru_cache(maxsize=None)
def y_entry_frozen(shape: Shape, mu: int, nu: int):
    """Raw form of the Schur complement entry y_uv = x_uv - q^-2 T_uv detA^-1.

    This is the unique normalization for which y_uv commutes with detA
    and is fixed by the bar involution.
    """
    if not (shape.m < mu <= shape.size and shape.m < nu <= shape.size):
        raise IndexError(f"y index ({mu},{nu}) outside the lower block")
    raw = raw_one(shape)
    raw = raw_times_gen(shape, raw, mu, nu)
    corr = t_correction(shape, mu, nu).scale(LaurentPoly.q_power(-2, -1))
    for N2, c2 in corr.terms.items():
        _raw_put(raw, (N2, -1), c2)
    return raw_freeze(raw)


def y_entry(shape: Shape, mu: int, nu: int):
    return raw_thaw(y_entry_frozen(shape, mu, nu))


def raw_times_y(shape: Shape, raw, mu: int, nu: int):
    return raw_times_raw(shape, raw, y_entry(shape, mu, nu))


@lru_cache(maxsize=None)
def detDprime_raw_frozen(shape: Shape):
    """Raw form of the q^-1-determinant of the y-matrix."""
    m, n = shape.m, shape.n
    out: dict = {}
    for tau in permutations(range(n)):
        inv = sum(
            1 for s in range(n) for t in range(s + 1, n) if tau[s] > tau[t]
        )
        cur = raw_scale(raw_one(shape), LaurentPoly.q_power(-2 * inv, (-1) ** inv))
        for t in range(n):
            cur = raw_times_y(shape, cur, m + 1 + t, m + 1 + tau[t])
        out = raw_add(out, cur)
    return raw_freeze(out)


@lru_cache(maxsize=None)
def detDprime_power_frozen(shape: Shape, p: int):
    if p < 0:
        raise ValueError("raw form only supports nonnegative detD' powers")
    if p == 0:
        return raw_freeze(raw_one(shape))
    prev = raw_thaw(detDprime_power_frozen(shape, p - 1))
    return raw_freeze(raw_times_raw(shape, prev, raw_thaw(detDprime_raw_frozen(shape))))


@lru_cache(maxsize=None)
def _detA_power_alg(shape: Shape, p: int) -> AlgebraElement:
    if p == 0:
        return AlgebraElement.one(shape)
    return _detA_power_alg(shape, p - 1) * det_q_A(shape)


def expand_raw(shape: Shape, raw, K: int) -> AlgebraElement:
    """Polynomial form of raw * detA^K; every detA power must clear."""
    out = AlgebraElement.zero(shape)
    for (N, e), c in raw.items():
        if e + K < 0:
            raise ValueError("detA power still negative; increase K")
        out = out + (AlgebraElement(shape, {N: c}) * _detA_power_alg(shape, e + K))
    return out


# -- mixed monomials --------------------------------------------------------


def mixed_degree(shape: Shape, M) -> int:
    """Total exponent over the two odd blocks (the det powers q-commute
    with exactly these letters)."""
    N = shape.size
    return sum(
        mat_entry(M, N, i, j)
        for i in range(1, N + 1)
        for j in range(1, N + 1)
        if (i <= shape.m) != (j <= shape.m)
    )


def is_constrained(shape: Shape, M) -> bool:
    """At least one zero diagonal entry in each even diagonal block."""
    N = shape.size
    m = shape.m
    if all(mat_entry(M, N, i, i) > 0 for i in range(1, m + 1)):
        return False
    if all(mat_entry(M, N, u, u) > 0 for u in range(m + 1, N + 1)):
        return False
    return True


@lru_cache(maxsize=None)
def rho_frozen(shape: Shape, M):
    """Raw form of the mixed word of M: x-letters for the first three
    blocks, y-letters for the lower-right block, in lexicographic order."""
    N = shape.size
    raw = raw_one(shape)
    for (i, j) in matrix_to_word(M, N):
        if i > shape.m and j > shape.m:
            raw = raw_times_y(shape, raw, i, j)
        else:
            raw = raw_times_gen(shape, raw, i, j)
    return raw_freeze(raw)


def rho(shape: Shape, M):
    return raw_thaw(rho_frozen(shape, M))


def _diag_ok(shape, Mt):
    return is_constrained(shape, Mt)


def _candidates(shape: Shape, rows, cols, widen: int):
    """Constrained triples (M, alpha, delta) with matching biweight.

    rows/cols is the target biweight.  Negative detA powers only come
    from lower-block letters (one per letter), and a polynomial target
    never needs a negative detD' power, so the first window is
    alpha >= -(lower-block content) and delta >= 0; each widening round
    relaxes both bounds.
    """
    m, n = shape.m, shape.n
    a_hi = min(min(rows[:m]), min(cols[:m]))
    d_hi = min(min(rows[m:]), min(cols[m:]))
    s_lower = min(sum(rows[m:]), sum(cols[m:]))
    a_lo = min(a_hi, -s_lower) - 2 * widen
    d_lo = min(0, d_hi) - widen
    out = []
    for alpha in range(a_hi, a_lo - 1, -1):
        for delta in range(d_hi, d_lo - 1, -1):
            ro = tuple(r - alpha for r in rows[:m]) + tuple(r - delta for r in rows[m:])
            co = tuple(c - alpha for c in cols[:m]) + tuple(c - delta for c in cols[m:])
            if any(v < 0 for v in ro + co):
                continue
            for Mt in enumerate_block(shape, ro, co):
                if _diag_ok(shape, Mt):
                    out.append((Mt, alpha, delta))
    return out


def express_in_basis(shape: Shape, raw, rows, cols):
    """Write a raw element over the constrained mixed family.

    Returns dict (M, a, d) -> LaurentPoly.  The target biweight
    (rows, cols) selects the finite candidate window; the window is
    widened if the first solve fails.
    """
    if not raw:
        return {}
    for widen in (0, 1, 2):
        cands = _candidates(shape, tuple(rows), tuple(cols), widen)
        if not cands:
            continue
        L = max(0, -min(delta for _, _, delta in cands))
        cand_raws = []
        for Mt, alpha, delta in cands:
            cr = rho(shape, Mt)
            if delta + L:
                cr = raw_times_raw(
                    shape, cr, raw_thaw(detDprime_power_frozen(shape, delta + L))
                )
            cand_raws.append(raw_shift_det(cr, alpha))
        target_raw = raw
        if L:
            target_raw = raw_times_raw(
                shape, raw, raw_thaw(detDprime_power_frozen(shape, L))
            )
        emin = min(e for (_, e) in target_raw)
        for cr in cand_raws:
            emin = min(emin, min(e for (_, e) in cr))
        K = max(0, -emin)
        target = expand_raw(shape, target_raw, K)
        columns = [expand_raw(shape, cr, K).terms for cr in cand_raws]
        sol = solve_in_span(columns, target.terms)
        if sol is None:
            continue
        out = {}
        for (Mt, alpha, delta), coeff in zip(cands, sol):
            if not coeff.is_zero():
                out[(Mt, alpha, delta)] = coeff.to_laurent()
        return out
    raise LinearSolveFailure(
        f"no expansion over the constrained family (biweight {rows}|{cols})"
    )


@lru_cache(maxsize=None)
def _reduce_pair(shape: Shape, M1, M2):
    """Constrained expansion of the word product W(M1) * W(M2)."""
    N = shape.size
    raw = raw_times_raw(shape, rho(shape, M1), rho(shape, M2))
    rows = tuple(a + b for a, b in zip(row_sums(M1, N), row_sums(M2, N)))
    cols = tuple(a + b for a, b in zip(col_sums(M1, N), col_sums(M2, N)))
    return tuple(express_in_basis(shape, raw, rows, cols).items())


# -- public elements ---------------------------------------------------------


class LocalElement:
    """Finite sum of constrained mixed monomials W(M) detA^a detD'^d."""

    __slots__ = ("shape", "terms")

    def __init__(self, shape: Shape, terms=None):
        self.shape = shape
        self.terms = {}
        if terms:
            for key, c in terms.items():
                if not c.is_zero():
                    self.terms[key] = c

    @classmethod
    def zero(cls, shape: Shape) -> "LocalElement":
        return cls(shape)

    @classmethod
    def one(cls, shape: Shape) -> "LocalElement":
        return cls(shape, {(zero_matrix(shape.size), 0, 0): ONE})

    @classmethod
    def monomial(cls, shape: Shape, M, a: int = 0, d: int = 0,
                 coeff: LaurentPoly = ONE) -> "LocalElement":
        """Reduced form of W(M) detA^a detD'^d (M need not be constrained)."""
        M = tuple(M)
        if is_constrained(shape, M):
            return cls(shape, {(M, a, d): coeff})
        zero = zero_matrix(shape.size)
        out = {}
        for (Mt, alpha, delta), c in _reduce_pair(shape, zero, M):
            out[(Mt, alpha + a, delta + d)] = c * coeff
        return cls(shape, out)

    @classmethod
    def x_gen(cls, shape: Shape, i: int, j: int) -> "LocalElement":
        if i > shape.m and j > shape.m:
            raise ValueError("lower-block x is not a mixed coordinate; "
                             "use to_mixed on the polynomial element")
        M = [0] * shape.size**2
        M[(i - 1) * shape.size + (j - 1)] = 1
        return cls.monomial(shape, tuple(M))

    @classmethod
    def y_gen(cls, shape: Shape, mu: int, nu: int) -> "LocalElement":
        if not (mu > shape.m and nu > shape.m):
            raise IndexError("y indices must lie in the lower block")
        M = [0] * shape.size**2
        M[(mu - 1) * shape.size + (nu - 1)] = 1
        return cls.monomial(shape, tuple(M))

    # -- linear structure --------------------------------------------------

    def _check(self, other):
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} vs {other.shape}")

    def __add__(self, other: "LocalElement") -> "LocalElement":
        self._check(other)
        terms = dict(self.terms)
        for key, c in other.terms.items():
            s = terms.get(key, LaurentPoly.zero()) + c
            if s.is_zero():
                terms.pop(key, None)
            else:
                terms[key] = s
        return LocalElement(self.shape, terms)

    def __neg__(self):
        return LocalElement(self.shape, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "LocalElement":
        if isinstance(c, int):
            c = LaurentPoly.from_int(c)
        if c.is_zero():
            return LocalElement(self.shape)
        return LocalElement(self.shape, {k: v * c for k, v in self.terms.items()})

    def __mul__(self, other: "LocalElement") -> "LocalElement":
        self._check(other)
        shape = self.shape
        out: dict = {}
        for (M1, a, d), c1 in self.terms.items():
            for (M2, a2, d2), c2 in other.terms.items():
                qfac = LaurentPoly.q_power(2 * (a + d) * mixed_degree(shape, M2))
                c = c1 * c2 * qfac
                for (Mt, alpha, delta), r in _reduce_pair(shape, M1, M2):
                    key = (Mt, alpha + a + a2, delta + d + d2)
                    s = out.get(key, LaurentPoly.zero()) + r * c
                    if s.is_zero():
                        out.pop(key, None)
                    else:
                        out[key] = s
        return LocalElement(self.shape, out)

    def __pow__(self, k: int) -> "LocalElement":
        out = LocalElement.one(self.shape)
        if k < 0:
            raise ValueError("general inverses are not available")
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        return (
            isinstance(other, LocalElement)
            and self.shape == other.shape
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash((self.shape, tuple(sorted(self.terms.items()))))

    def __repr__(self):
        return f"LocalElement({format_local(self)})"

    def is_zero(self) -> bool:
        return not self.terms

    def biweight(self):
        N = self.shape.size
        m, n = self.shape.m, self.shape.n
        bw = None
        for (M, a, d) in self.terms:
            ro = tuple(
                r + (a if i < m else d) for i, r in enumerate(row_sums(M, N))
            )
            co = tuple(
                c + (a if j < m else d) for j, c in enumerate(col_sums(M, N))
            )
            if bw is None:
                bw = (ro, co)
            elif bw != (ro, co):
                raise ValueError(f"mixed biweights {bw} vs {(ro, co)}")
        return bw if bw is not None else ((0,) * N, (0,) * N)

    def to_json(self) -> dict:
        N = self.shape.size
        return {
            "m": self.shape.m,
            "n": self.shape.n,
            "coords": "mixed",
            "terms": [
                {
                    "matrix": [list(M[r * N:(r + 1) * N]) for r in range(N)],
                    "a": a,
                    "d": d,
                    "coeff": self.terms[(M, a, d)].to_json(),
                }
                for (M, a, d) in sorted(self.terms)
            ],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "LocalElement":
        shape = Shape(obj["m"], obj["n"])
        out = cls.zero(shape)
        for t in obj["terms"]:
            M = tuple(v for row in t["matrix"] for v in row)
            out = out + cls.monomial(
                shape, M, t["a"], t["d"], LaurentPoly.from_json(t["coeff"])
            )
        return out


def to_mixed(f: AlgebraElement) -> LocalElement:
    """Rewrite a polynomial element over the mixed constrained family."""
    shape = f.shape
    out = LocalElement.zero(shape)
    zero = zero_matrix(shape.size)
    for M, c in f.terms.items():
        # every x-word is already a raw element; reduce it blockwise
        raw = {(M, 0): c}
        rows, cols = row_sums(M, shape.size), col_sums(M, shape.size)
        red = express_in_basis(shape, raw, rows, cols)
        out = out + LocalElement(shape, red)
    return out


def _local_raw(f: LocalElement):
    """Total raw form of f * detD'^L with L clearing negative d powers.

    Returns (raw, L).
    """
    shape = f.shape
    L = max(0, -min((d for (_, _, d) in f.terms), default=0))
    out: dict = {}
    for (M, a, d), c in f.terms.items():
        raw = rho(shape, M)
        if d + L:
            raw = raw_times_raw(
                shape, raw, raw_thaw(detDprime_power_frozen(shape, d + L))
            )
        out = raw_add(out, raw_scale(raw_shift_det(raw, a), c))
    return out, L


def _divide_detA(shape: Shape, g: AlgebraElement, K: int) -> AlgebraElement:
    """The unique f with f * detA^K = g, solved blockwise; exact."""
    if K == 0:
        return g
    blocks: dict = {}
    N = shape.size
    for M, c in g.terms.items():
        key = (row_sums(M, N), col_sums(M, N))
        blocks.setdefault(key, AlgebraElement.zero(shape))
        blocks[key] = blocks[key] + AlgebraElement(shape, {M: c})
    out = AlgebraElement.zero(shape)
    dK = _detA_power_alg(shape, K)
    for (rows, cols), part in blocks.items():
        ro = tuple(r - K if i < shape.m else r for i, r in enumerate(rows))
        co = tuple(c - K if j < shape.m else c for j, c in enumerate(cols))
        if any(v < 0 for v in ro + co):
            raise LinearSolveFailure("element is not divisible by detA")
        cands = enumerate_block(shape, ro, co)
        columns = [(AlgebraElement.monomial(shape, M) * dK).terms for M in cands]
        sol = solve_in_span(columns, part.terms)
        if sol is None:
            raise LinearSolveFailure("element is not divisible by detA")
        for M, coeff in zip(cands, sol):
            if not coeff.is_zero():
                out = out + AlgebraElement.monomial(shape, M, coeff.to_laurent())
    return out


def from_mixed(f: LocalElement) -> AlgebraElement:
    """Inverse of to_mixed; fails if the element is not polynomial."""
    shape = f.shape
    if f.is_zero():
        return AlgebraElement.zero(shape)
    if any(d < 0 for (_, _, d) in f.terms):
        raise ValueError("negative detD' power has no polynomial form")
    raw, L = _local_raw(f)
    assert L == 0
    K = max(0, -min((e for (_, e) in raw), default=0))
    return _divide_detA(shape, expand_raw(shape, raw, K), K)


def bar_local(f: LocalElement) -> LocalElement:
    """Bar involution: clear det powers, bar the polynomial, restore.

    Both determinants are bar-invariant and even, so for g = f detA^K
    detD'^L we have bar(f) = detA^-K detD'^-L bar(g).
    """
    shape = f.shape
    if f.is_zero():
        return f
    raw, L = _local_raw(f)
    K = max(0, -min((e for (_, e) in raw), default=0))
    g = expand_raw(shape, raw, K).bar()
    return LocalElement.monomial(shape, zero_matrix(shape.size), -K, -L) * to_mixed(g)


def berezinian(shape: Shape) -> LocalElement:
    return LocalElement(shape, {(zero_matrix(shape.size), 1, -1): ONE})


def det_a_local(shape: Shape) -> LocalElement:
    return LocalElement(shape, {(zero_matrix(shape.size), 1, 0): ONE})


def det_dprime_local(shape: Shape) -> LocalElement:
    return LocalElement(shape, {(zero_matrix(shape.size), 0, 1): ONE})


def mixed_generators(shape: Shape):
    """All x-generators of the first three blocks plus all y-generators."""
    gens = []
    N = shape.size
    for i in range(1, N + 1):
        for j in range(1, N + 1):
            if i <= shape.m or j <= shape.m:
                gens.append(LocalElement.x_gen(shape, i, j))
            else:
                gens.append(LocalElement.y_gen(shape, i, j))
    return gens


def is_central(f: LocalElement) -> bool:
    return all(f * g == g * f for g in mixed_generators(f.shape))


def sl_project(f: LocalElement) -> LocalElement:
    """Normal form modulo Ber = 1: fold the detD' power into detA."""
    out: dict = {}
    for (M, a, d), c in f.terms.items():
        key = (M, a + d, 0)
        s = out.get(key, LaurentPoly.zero()) + c
        if s.is_zero():
            out.pop(key, None)
        else:
            out[key] = s
    return LocalElement(f.shape, out)


def format_local(f: LocalElement) -> str:
    if f.is_zero():
        return "0"
    N = f.shape.size
    parts = []
    for key in sorted(f.terms):
        M, a, d = key
        c = f.terms[key]
        factors = []
        for (i, j) in matrix_to_word(M, N):
            sym = "y" if (i > f.shape.m and j > f.shape.m) else "x"
            factors.append(f"{sym}[{i},{j}]")
        if a:
            factors.append("detA" if a == 1 else f"detA^{a}")
        if d:
            factors.append("detD'" if d == 1 else f"detD'^{d}")
        mono = "*".join(factors) if factors else "1"
        cs = str(c)
        if cs == "1":
            parts.append(mono)
        elif cs == "-1":
            parts.append(f"-{mono}")
        elif len(c.terms) == 1:
            parts.append(f"{cs}*{mono}" if mono != "1" else cs)
        else:
            parts.append(f"({cs})*{mono}" if mono != "1" else f"({cs})")
    return " + ".join(parts).replace("+ -", "- ")
