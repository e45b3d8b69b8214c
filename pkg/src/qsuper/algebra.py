"""Normal-form arithmetic in the coordinate superalgebra of a quantum supermatrix.

Elements live over the basis of lexicographically ordered monomials in the
generators x_ij.  Multiplication straightens words with the four quadratic
relation families plus the square-zero rule for odd generators; the bar
anti-automorphism reverses words with the super sign and re-straightens.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .laurent import LaurentPoly, ONE

QSQ_DIFF = LaurentPoly({2: 1, -2: -1})  # q^2 - q^-2


class ShapeMismatch(Exception):
    pass


class NonHomogeneous(Exception):
    pass


@dataclass(frozen=True)
class Shape:
    """Block sizes of the supermatrix: m even rows/columns, n odd ones."""

    m: int
    n: int

    def __post_init__(self):
        if self.m < 1 or self.n < 1:
            raise ValueError("need m >= 1 and n >= 1")

    @property
    def size(self) -> int:
        return self.m + self.n

    def parity(self, i: int) -> int:
        """0 for indices <= m, 1 above."""
        if not 1 <= i <= self.size:
            raise IndexError(f"index {i} out of range for shape {self}")
        return 0 if i <= self.m else 1

    def gen_parity(self, i: int, j: int) -> int:
        return (self.parity(i) + self.parity(j)) % 2

    def generators(self):
        N = self.size
        return [(i, j) for i in range(1, N + 1) for j in range(1, N + 1)]


# -- exponent matrices (flat row-major tuples) --------------------------


def mat_entry(M, N, i, j):
    return M[(i - 1) * N + (j - 1)]


def mat_from_rows(rows):
    return tuple(v for row in rows for v in row)


def mat_rows(M, N):
    return [list(M[r * N : (r + 1) * N]) for r in range(N)]


def zero_matrix(N):
    return (0,) * (N * N)


def validate_matrix(shape: Shape, M) -> None:
    N = shape.size
    if len(M) != N * N:
        raise ValueError("matrix size does not match shape")
    for i in range(1, N + 1):
        for j in range(1, N + 1):
            v = mat_entry(M, N, i, j)
            if v < 0:
                raise ValueError("negative exponent")
            if shape.gen_parity(i, j) == 1 and v > 1:
                raise ValueError(f"odd generator x[{i},{j}] with exponent {v}")


def row_sums(M, N):
    return tuple(sum(M[r * N : (r + 1) * N]) for r in range(N))


def col_sums(M, N):
    return tuple(sum(M[r * N + c] for r in range(N)) for c in range(N))


def total_degree(M) -> int:
    return sum(M)


def matrix_to_word(M, N):
    """Letters (i, j) of the ordered monomial, in lexicographic order."""
    word = []
    for i in range(1, N + 1):
        for j in range(1, N + 1):
            word.extend([(i, j)] * mat_entry(M, N, i, j))
    return tuple(word)


def word_to_matrix(word, N):
    M = [0] * (N * N)
    for (i, j) in word:
        M[(i - 1) * N + (j - 1)] += 1
    return tuple(M)


def matrix_parity(shape: Shape, M) -> int:
    N = shape.size
    p = 0
    for i in range(1, N + 1):
        for j in range(1, N + 1):
            if shape.gen_parity(i, j):
                p += mat_entry(M, N, i, j)
    return p % 2


# -- the straightening kernel -------------------------------------------


@lru_cache(maxsize=None)
def _pair_rule(shape: Shape, g1, g2):
    """Expansion of x_g1 * x_g2 over ordered two-letter words, for g1 >= g2.

    Returns a tuple of (two-letter word, LaurentPoly) pairs; the empty
    tuple encodes zero (odd square).
    """
    i, j = g1
    k, l = g2
    par = shape.parity
    if g1 == g2:
        if shape.gen_parity(i, j) == 1:
            return ()
        return (((g1, g2), ONE),)
    if i == k:  # same row, j > l
        s = (-1) ** ((par(i) + par(l)) % 2 * ((par(i) + par(j)) % 2))
        c = LaurentPoly.q_power(-2 * (-1) ** par(i), s)
        return (((g2, g1), c),)
    if j == l:  # same column, i > k
        s = (-1) ** ((par(k) + par(j)) % 2 * ((par(i) + par(j)) % 2))
        c = LaurentPoly.q_power(-2 * (-1) ** par(j), s)
        return (((g2, g1), c),)
    s1 = (-1) ** (((par(i) + par(j)) % 2) * ((par(k) + par(l)) % 2))
    if j < l:  # i > k, j < l: sign-commute, no correction
        return (((g2, g1), LaurentPoly.from_int(s1)),)
    # i > k, j > l: commute plus a lower correction x_kj x_il
    s2 = (-1) ** ((par(i) * par(l) + par(i) * par(j) + par(l) * par(j)) % 2)
    corr = QSQ_DIFF.scale(-s1 * s2)
    return (((g2, g1), LaurentPoly.from_int(s1)), (((k, j), (i, l)), corr))


def straighten_word(shape: Shape, word, coeff: LaurentPoly | None = None):
    """Normal form of a generator word: dict matrix -> LaurentPoly."""
    out: dict = {}
    stack = [(tuple(word), coeff if coeff is not None else ONE)]
    N = shape.size
    while stack:
        w, c = stack.pop()
        if c.is_zero():
            continue
        pos = -1
        for t in range(len(w) - 1):
            if w[t] > w[t + 1] or (w[t] == w[t + 1] and shape.gen_parity(*w[t])):
                pos = t
                break
        if pos < 0:
            key = word_to_matrix(w, N)
            s = out.get(key, LaurentPoly.zero()) + c
            if s.is_zero():
                out.pop(key, None)
            else:
                out[key] = s
            continue
        head, tail = w[:pos], w[pos + 2 :]
        for pair, pc in _pair_rule(shape, w[pos], w[pos + 1]):
            stack.append((head + pair + tail, c * pc))
    return out


@lru_cache(maxsize=200000)
def _straighten_cached(shape: Shape, word):
    return tuple(sorted(straighten_word(shape, word).items()))


class AlgebraElement:
    """A normal-form element: finite map exponent matrix -> LaurentPoly."""

    __slots__ = ("shape", "terms")

    def __init__(self, shape: Shape, terms=None, validate: bool = False):
        self.shape = shape
        self.terms = {}
        if terms:
            for M, c in terms.items():
                if not c.is_zero():
                    if validate:
                        validate_matrix(shape, M)
                    self.terms[M] = c

    # -- constructors --------------------------------------------------

    @classmethod
    def zero(cls, shape: Shape) -> "AlgebraElement":
        return cls(shape)

    @classmethod
    def one(cls, shape: Shape) -> "AlgebraElement":
        return cls(shape, {zero_matrix(shape.size): ONE})

    @classmethod
    def generator(cls, shape: Shape, i: int, j: int) -> "AlgebraElement":
        M = [0] * shape.size**2
        M[(i - 1) * shape.size + (j - 1)] = 1
        return cls(shape, {tuple(M): ONE}, validate=True)

    @classmethod
    def monomial(cls, shape: Shape, M, coeff: LaurentPoly = ONE) -> "AlgebraElement":
        validate_matrix(shape, M)
        return cls(shape, {tuple(M): coeff})

    @classmethod
    def from_word(cls, shape: Shape, word, coeff: LaurentPoly = ONE) -> "AlgebraElement":
        return cls(shape, straighten_word(shape, word, coeff))

    # -- linear structure ------------------------------------------------

    def _check(self, other: "AlgebraElement"):
        if self.shape != other.shape:
            raise ShapeMismatch(f"{self.shape} vs {other.shape}")

    def __add__(self, other: "AlgebraElement") -> "AlgebraElement":
        self._check(other)
        terms = dict(self.terms)
        for M, c in other.terms.items():
            s = terms.get(M, LaurentPoly.zero()) + c
            if s.is_zero():
                terms.pop(M, None)
            else:
                terms[M] = s
        return AlgebraElement(self.shape, terms)

    def __neg__(self) -> "AlgebraElement":
        return AlgebraElement(self.shape, {M: -c for M, c in self.terms.items()})

    def __sub__(self, other: "AlgebraElement") -> "AlgebraElement":
        return self + (-other)

    def scale(self, c) -> "AlgebraElement":
        if isinstance(c, int):
            c = LaurentPoly.from_int(c)
        if c.is_zero():
            return AlgebraElement(self.shape)
        return AlgebraElement(self.shape, {M: t * c for M, t in self.terms.items()})

    def __mul__(self, other: "AlgebraElement") -> "AlgebraElement":
        self._check(other)
        N = self.shape.size
        terms: dict = {}
        for M1, c1 in self.terms.items():
            w1 = matrix_to_word(M1, N)
            for M2, c2 in other.terms.items():
                c = c1 * c2
                for key, sc in _straighten_cached(self.shape, w1 + matrix_to_word(M2, N)):
                    s = terms.get(key, LaurentPoly.zero()) + sc * c
                    if s.is_zero():
                        terms.pop(key, None)
                    else:
                        terms[key] = s
        return AlgebraElement(self.shape, terms)

    def __pow__(self, k: int) -> "AlgebraElement":
        if k < 0:
            raise ValueError("negative power in the polynomial algebra")
        out = AlgebraElement.one(self.shape)
        for _ in range(k):
            out = out * self
        return out

    def bar(self) -> "AlgebraElement":
        """Coefficient-wise q -> q^-1, words reversed with the super sign."""
        N = self.shape.size
        terms: dict = {}
        for M, c in self.terms.items():
            word = matrix_to_word(M, N)
            odd = sum(self.shape.gen_parity(i, j) for (i, j) in word)
            sign = (-1) ** (odd * (odd - 1) // 2)
            cb = c.bar().scale(sign)
            for key, sc in _straighten_cached(self.shape, word[::-1]):
                s = terms.get(key, LaurentPoly.zero()) + sc * cb
                if s.is_zero():
                    terms.pop(key, None)
                else:
                    terms[key] = s
        return AlgebraElement(self.shape, terms)

    # -- views ------------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def coeff(self, M) -> LaurentPoly:
        return self.terms.get(tuple(M), LaurentPoly.zero())

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, AlgebraElement)
            and self.shape == other.shape
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash((self.shape, tuple(sorted((M, c) for M, c in self.terms.items()))))

    def __repr__(self):
        return f"AlgebraElement({format_element(self)})"

    def biweight(self):
        """(row sums, column sums), shared by every term."""
        N = self.shape.size
        if not self.terms:
            return ((0,) * N, (0,) * N)
        bw = None
        for M in self.terms:
            cur = (row_sums(M, N), col_sums(M, N))
            if bw is None:
                bw = cur
            elif bw != cur:
                raise NonHomogeneous(f"mixed biweights {bw} and {cur}")
        return bw

    def degree(self) -> int:
        if not self.terms:
            return 0
        degs = {total_degree(M) for M in self.terms}
        if len(degs) > 1:
            raise NonHomogeneous(f"mixed degrees {degs}")
        return degs.pop()

    def parity(self) -> int:
        pars = {matrix_parity(self.shape, M) for M in self.terms}
        if len(pars) > 1:
            raise NonHomogeneous("mixed parities")
        return pars.pop() if pars else 0

    # -- serialization ------------------------------------------------------

    def to_json(self) -> dict:
        N = self.shape.size
        return {
            "m": self.shape.m,
            "n": self.shape.n,
            "terms": [
                {"matrix": mat_rows(M, N), "coeff": self.terms[M].to_json()}
                for M in sorted(self.terms)
            ],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "AlgebraElement":
        shape = Shape(obj["m"], obj["n"])
        terms = {
            mat_from_rows(t["matrix"]): LaurentPoly.from_json(t["coeff"])
            for t in obj["terms"]
        }
        return cls(shape, terms, validate=True)


def straighten_pair(shape: Shape, g1, g2) -> AlgebraElement:
    """Normal form of the two-letter product x_g1 * x_g2."""
    return AlgebraElement.from_word(shape, (tuple(g1), tuple(g2)))


# -- normalized monomials and block enumeration ---------------------------


def norm_exponent(shape: Shape, M) -> int:
    """q-exponent of the normalized monomial x(M)."""
    N = shape.size
    expo = 0
    for i in range(1, N + 1):
        si = (-1) ** shape.parity(i)
        for j in range(1, N + 1):
            for k in range(j + 1, N + 1):
                expo += si * mat_entry(M, N, i, j) * mat_entry(M, N, i, k)
    for l in range(1, N + 1):
        sl = (-1) ** shape.parity(l)
        for s in range(1, N + 1):
            for t in range(s + 1, N + 1):
                expo += sl * mat_entry(M, N, s, l) * mat_entry(M, N, t, l)
    return -expo


def x_norm(shape: Shape, M) -> AlgebraElement:
    """The normalized monomial x(M) = q^(norm exponent) x^M."""
    validate_matrix(shape, M)
    return AlgebraElement(shape, {tuple(M): LaurentPoly.q_power(norm_exponent(shape, M))})


def enumerate_block(shape: Shape, ro, co):
    """All exponent matrices with the given row/column sums.

    Odd-block entries are capped at 1.  Output is sorted lexicographically
    by flattened entries, so the order is deterministic.
    """
    N = shape.size
    ro = tuple(ro)
    co = tuple(co)
    if len(ro) != N or len(co) != N:
        raise ValueError("row/column sum length mismatch")
    if sum(ro) != sum(co):
        return []
    if any(v < 0 for v in ro + co):
        return []
    out = []

    def fill_row(i, cols_left, acc):
        if i > N:
            if all(v == 0 for v in cols_left):
                out.append(tuple(acc))
            return
        target = ro[i - 1]

        def fill_cell(j, left, row_acc):
            if j > N:
                if left == 0:
                    fill_row(i + 1, cols_left, acc + row_acc)
                return
            cap = min(left, cols_left[j - 1])
            if shape.gen_parity(i, j):
                cap = min(cap, 1)
            # remaining cells must be able to absorb what is left
            for v in range(cap + 1):
                cols_left[j - 1] -= v
                fill_cell(j + 1, left - v, row_acc + [v])
                cols_left[j - 1] += v

        fill_cell(1, target, [])

    fill_row(1, list(co), [])
    return sorted(out)


def count_monomials(shape: Shape, k: int) -> int:
    """Number of ordered monomials of total degree k, by direct counting.

    Computed as the degree-k coefficient of the product of cell series
    (geometric for even cells, 1 + t for odd cells).
    """
    dp = [0] * (k + 1)
    dp[0] = 1
    for (i, j) in shape.generators():
        if shape.gen_parity(i, j):
            for d in range(k, 0, -1):
                dp[d] += dp[d - 1]
        else:
            for d in range(1, k + 1):
                dp[d] += dp[d - 1]
    return dp[k]


def format_element(f: AlgebraElement) -> str:
    """Grep-friendly text form: sums of q-power coefficients times x[i,j] factors."""
    if f.is_zero():
        return "0"
    N = f.shape.size
    parts = []
    for M in sorted(f.terms):
        c = f.terms[M]
        factors = []
        for (i, j) in matrix_to_word(M, N):
            factors.append(f"x[{i},{j}]")
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
