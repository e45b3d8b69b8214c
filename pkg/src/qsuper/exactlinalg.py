"""Exact linear algebra over the fraction field of Z[q, q^-1].

Used to express products over constrained spanning families and to cut
out invariant subspaces; all pivoting is exact, no floating point.
"""

from __future__ import annotations

from math import gcd

from qsuper.laurent import LaurentPoly, ONE


class LinearSolveFailure(Exception):
    """A vector expected to lie in a span (or in the base ring) does not."""


def _int_content(p: LaurentPoly) -> int:
    g = 0
    for c in p.terms.values():
        g = gcd(g, abs(c))
    return g or 1


class Frac:
    """num/den with Laurent polynomial parts; den never zero.

    Normalization strips the common monomial and integer content and
    cancels den into num when the division happens to be exact.
    """

    __slots__ = ("num", "den")

    def __init__(self, num: LaurentPoly, den: LaurentPoly = ONE):
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        if num.is_zero():
            num, den = LaurentPoly.zero(), ONE
        elif not den.is_one():
            try:
                num = num.divexact(den)
                den = ONE
            except ValueError:
                shift = den.min_exp()
                den = den.shift(-shift)
                num = num.shift(-shift)
                g = gcd(_int_content(num), _int_content(den))
                lead = den.terms[den.max_exp()]
                if lead < 0:
                    g = -g
                if g != 1:
                    num = LaurentPoly({e: c // g for e, c in num.terms.items()})
                    den = LaurentPoly({e: c // g for e, c in den.terms.items()})
        self.num = num
        self.den = den

    @classmethod
    def from_int(cls, n: int) -> "Frac":
        return cls(LaurentPoly.from_int(n))

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def __add__(self, other: "Frac") -> "Frac":
        if self.den == other.den:
            return Frac(self.num + other.num, self.den)
        return Frac(self.num * other.den + other.num * self.den, self.den * other.den)

    def __neg__(self) -> "Frac":
        out = Frac.__new__(Frac)
        out.num = -self.num
        out.den = self.den
        return out

    def __sub__(self, other: "Frac") -> "Frac":
        return self + (-other)

    def __mul__(self, other: "Frac") -> "Frac":
        return Frac(self.num * other.num, self.den * other.den)

    def __truediv__(self, other: "Frac") -> "Frac":
        if other.num.is_zero():
            raise ZeroDivisionError("division by zero fraction")
        return Frac(self.num * other.den, self.den * other.num)

    def __eq__(self, other) -> bool:
        return isinstance(other, Frac) and self.num * other.den == other.num * self.den

    def __hash__(self):
        return hash((self.num, self.den))

    def __repr__(self):
        return f"Frac({self.num}, {self.den})"

    def to_laurent(self) -> LaurentPoly:
        if self.den.is_one():
            return self.num
        try:
            return self.num.divexact(self.den)
        except ValueError:
            raise LinearSolveFailure(f"coefficient {self!r} is not a Laurent polynomial")


FRAC_ZERO = Frac(LaurentPoly.zero())
FRAC_ONE = Frac(ONE)


def _assemble(columns, target=None):
    """Row-index the sparse columns; rows sorted for determinism."""
    keys = set()
    for col in columns:
        keys.update(col)
    if target is not None:
        keys.update(target)
    keys = sorted(keys)
    pos = {k: r for r, k in enumerate(keys)}
    rows = [[FRAC_ZERO] * len(columns) for _ in keys]
    for c, col in enumerate(columns):
        for k, v in col.items():
            if not v.is_zero():
                rows[pos[k]][c] = Frac(v)
    rhs = None
    if target is not None:
        rhs = [FRAC_ZERO] * len(keys)
        for k, v in target.items():
            if not v.is_zero():
                rhs[pos[k]] = Frac(v)
    return rows, rhs


def _eliminate(rows, rhs=None):
    """In-place Gaussian elimination; returns list of (row, pivot col)."""
    ncols = len(rows[0]) if rows else 0
    pivots = []
    r = 0
    for c in range(ncols):
        sel = None
        for rr in range(r, len(rows)):
            if not rows[rr][c].is_zero():
                sel = rr
                break
        if sel is None:
            continue
        rows[r], rows[sel] = rows[sel], rows[r]
        if rhs is not None:
            rhs[r], rhs[sel] = rhs[sel], rhs[r]
        piv = rows[r][c]
        for rr in range(len(rows)):
            if rr == r or rows[rr][c].is_zero():
                continue
            f = rows[rr][c] / piv
            for cc in range(c, ncols):
                if not rows[r][cc].is_zero():
                    rows[rr][cc] = rows[rr][cc] - f * rows[r][cc]
            if rhs is not None:
                rhs[rr] = rhs[rr] - f * rhs[r]
        pivots.append((r, c))
        r += 1
        if r == len(rows):
            break
    return pivots


def solve_in_span(columns, target):
    """Coefficients c with sum(c_i * columns_i) = target, or None.

    ``columns`` is a list of sparse vectors (dict key -> LaurentPoly),
    ``target`` one such vector.  Free coordinates are set to zero.  The
    coefficients are returned as Frac.
    """
    if not columns:
        return [] if all(v.is_zero() for v in target.values()) else None
    rows, rhs = _assemble(columns, target)
    pivots = _eliminate(rows, rhs)
    pivot_rows = {r for r, _ in pivots}
    for r in range(len(rows)):
        if r not in pivot_rows and not rhs[r].is_zero():
            return None
    out = [FRAC_ZERO] * len(columns)
    for r, c in pivots:
        out[c] = rhs[r] / rows[r][c]
    return out


def solve_in_span_laurent(columns, target):
    """As solve_in_span but coefficients must be Laurent polynomials."""
    sol = solve_in_span(columns, target)
    if sol is None:
        raise LinearSolveFailure("target vector is outside the span")
    return [f.to_laurent() for f in sol]


def nullspace(columns):
    """Basis of {c : sum(c_i * columns_i) = 0}, one vector per free column.

    Vectors are lists of Frac, normalized so the free coordinate is 1.
    """
    if not columns:
        return []
    rows, _ = _assemble(columns)
    pivots = _eliminate(rows)
    pivot_cols = {c: r for r, c in pivots}
    basis = []
    for c in range(len(columns)):
        if c in pivot_cols:
            continue
        vec = [FRAC_ZERO] * len(columns)
        vec[c] = FRAC_ONE
        for pc, pr in pivot_cols.items():
            if not rows[pr][c].is_zero():
                vec[pc] = -(rows[pr][c] / rows[pr][pc])
        basis.append(vec)
    return basis


def rank(columns) -> int:
    if not columns:
        return 0
    rows, _ = _assemble(columns)
    return len(_eliminate(rows))


def in_span(columns, target) -> bool:
    return solve_in_span(columns, target) is not None
