"""Lattices Z^n, integer matrices, Smith normal form and split exact sequences.

Matrices are tuples of row tuples.  A morphism Z^r -> Z^n is stored as an
n x r matrix acting on column vectors.  Rational linear algebra helpers
(row reduction, kernels) also live here since the convex module needs them.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Sequence

Vector = tuple
Matrix = tuple


class RankMismatch(ValueError):
    pass


class NotInjective(ValueError):
    pass


class TorsionCokernel(ValueError):
    """The image of F is not saturated, so the subtorus is not saturated."""


class InvalidSplit(ValueError):
    pass


def as_matrix(rows: Sequence[Sequence]) -> Matrix:
    return tuple(tuple(r) for r in rows)


def identity(n: int) -> Matrix:
    return tuple(tuple(int(i == j) for j in range(n)) for i in range(n))


def zeros(n: int, m: int) -> Matrix:
    return tuple((0,) * m for _ in range(n))


def transpose(a: Matrix, ncols: int | None = None) -> Matrix:
    if not a:
        return tuple(() for _ in range(ncols or 0))
    return tuple(zip(*a))


def matmul(a: Matrix, b: Matrix, inner: int | None = None) -> Matrix:
    """Product of an n x k and a k x m matrix (``inner`` = k when k = 0 is ambiguous)."""
    m = len(b[0]) if b else 0
    if b and a and len(a[0]) != len(b):
        raise RankMismatch(f"cannot multiply {len(a)}x{len(a[0])} by {len(b)}x{m}")
    return tuple(tuple(sum(a[i][k] * b[k][j] for k in range(len(b))) for j in range(m)) for i in range(len(a)))


def matvec(a: Matrix, v: Sequence) -> tuple:
    if a and len(a[0]) != len(v):
        raise RankMismatch(f"matrix with {len(a[0])} columns applied to a vector of rank {len(v)}")
    return tuple(sum(x * y for x, y in zip(row, v)) for row in a)


def dot(u: Sequence, v: Sequence):
    if len(u) != len(v):
        raise RankMismatch(f"pairing vectors of rank {len(u)} and {len(v)}")
    return sum(x * y for x, y in zip(u, v))


def dual_pairing(m: Sequence[int], n: Sequence[int]) -> int:
    """<m, n> = sum m_i n_i for m in M and n in N."""
    return dot(m, n)


def primitive(v: Sequence) -> tuple[int, ...]:
    """The primitive integer vector on the ray through a nonzero rational vector."""
    fr = [Fraction(x) for x in v]
    den = 1
    for x in fr:
        den = den * x.denominator // gcd(den, x.denominator)
    ints = [int(x * den) for x in fr]
    g = 0
    for x in ints:
        g = gcd(g, x)
    if g == 0:
        raise ValueError("zero vector has no primitive generator")
    return tuple(x // g for x in ints)


# --- rational linear algebra -------------------------------------------------

def rref(rows: Sequence[Sequence], ncols: int | None = None) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form over Q; returns (nonzero rows, pivot columns)."""
    a = [[Fraction(x) for x in r] for r in rows]
    if ncols is None:
        ncols = len(a[0]) if a else 0
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, len(a)) if a[i][c] != 0), None)
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        inv = 1 / a[r][c]
        a[r] = [x * inv for x in a[r]]
        for i in range(len(a)):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == len(a):
            break
    return a[:r], pivots


def rank(rows: Sequence[Sequence], ncols: int | None = None) -> int:
    return len(rref(rows, ncols)[1])


def nullspace(rows: Sequence[Sequence], ncols: int) -> list[tuple[Fraction, ...]]:
    """A basis of {x in Q^ncols : row . x = 0 for every row}."""
    red, piv = rref(rows, ncols)
    free = [c for c in range(ncols) if c not in piv]
    basis = []
    for f in free:
        x = [Fraction(0)] * ncols
        x[f] = Fraction(1)
        for i, p in enumerate(piv):
            x[p] = -red[i][f]
        basis.append(tuple(x))
    return basis


def integer_nullspace(rows: Sequence[Sequence], ncols: int) -> list[tuple[int, ...]]:
    return [primitive(v) for v in nullspace(rows, ncols)]


def solve(a: Sequence[Sequence], b: Sequence) -> tuple[Fraction, ...] | None:
    """One rational solution x of a x = b, or None."""
    n = len(a[0]) if a else 0
    aug = [list(r) + [bi] for r, bi in zip(a, b)]
    red, piv = rref(aug, n + 1)
    if n in piv:
        return None
    x = [Fraction(0)] * n
    for i, p in enumerate(piv):
        x[p] = red[i][n]
    return tuple(x)


def inverse(a: Matrix) -> tuple[tuple[Fraction, ...], ...]:
    n = len(a)
    aug = [list(r) + list(e) for r, e in zip(a, identity(n))]
    red, piv = rref(aug, 2 * n)
    if piv[:n] != list(range(n)) or len(piv) < n:
        raise ValueError("matrix is singular")
    return tuple(tuple(r[n:]) for r in red[:n])


def determinant(a: Matrix) -> Fraction:
    m = [[Fraction(x) for x in r] for r in a]
    n = len(m)
    det = Fraction(1)
    for c in range(n):
        p = next((i for i in range(c, n) if m[i][c] != 0), None)
        if p is None:
            return Fraction(0)
        if p != c:
            m[c], m[p] = m[p], m[c]
            det = -det
        det *= m[c][c]
        for i in range(c + 1, n):
            f = m[i][c] / m[c][c]
            m[i] = [x - f * y for x, y in zip(m[i], m[c])]
    return det


# --- Smith normal form -------------------------------------------------------

def smith_normal_form(a: Sequence[Sequence[int]], ncols: int | None = None) -> tuple[Matrix, Matrix, Matrix]:
    """Return (U, D, V) with U a V = D diagonal, U and V unimodular.

    The diagonal entries d_1 | d_2 | ... are nonnegative.
    """
    n = len(a)
    m = ncols if ncols is not None else (len(a[0]) if a else 0)
    d = [list(map(int, r)) for r in a]
    u = [list(r) for r in identity(n)]
    v = [list(r) for r in identity(m)]

    def swap_rows(i, j):
        d[i], d[j] = d[j], d[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for r in d:
            r[i], r[j] = r[j], r[i]
        for r in v:
            r[i], r[j] = r[j], r[i]

    def add_row(src, dst, k):
        d[dst] = [x + k * y for x, y in zip(d[dst], d[src])]
        u[dst] = [x + k * y for x, y in zip(u[dst], u[src])]

    def add_col(src, dst, k):
        for r in d:
            r[dst] += k * r[src]
        for r in v:
            r[dst] += k * r[src]

    t = 0
    while t < min(n, m):
        nz = [(abs(d[i][j]), i, j) for i in range(t, n) for j in range(t, m) if d[i][j]]
        if not nz:
            break
        _, i, j = min(nz)
        swap_rows(t, i)
        swap_cols(t, j)
        while True:
            done = True
            for i in range(t + 1, n):
                if d[i][t]:
                    q = d[i][t] // d[t][t]
                    add_row(t, i, -q)
                    if d[i][t]:
                        swap_rows(t, i)
                        done = False
            for j in range(t + 1, m):
                if d[t][j]:
                    q = d[t][j] // d[t][t]
                    add_col(t, j, -q)
                    if d[t][j]:
                        swap_cols(t, j)
                        done = False
            if not done:
                continue
            # enforce divisibility of the remaining block
            bad = next(((i, j) for i in range(t + 1, n) for j in range(t + 1, m) if d[i][j] % d[t][t]), None)
            if bad is None:
                break
            add_row(bad[0], t, 1)
        if d[t][t] < 0:
            d[t] = [-x for x in d[t]]
            u[t] = [-x for x in u[t]]
        t += 1
    return as_matrix(u), as_matrix(d), as_matrix(v)


def elementary_divisors(a: Sequence[Sequence[int]], ncols: int | None = None) -> list[int]:
    _, d, _ = smith_normal_form(a, ncols)
    return [d[i][i] for i in range(min(len(d), len(d[0]) if d else 0)) if d[i][i]]


# --- morphisms -----------------------------------------------------------------

@dataclass(frozen=True)
class LatticeMorphism:
    """An integer matrix Z^source -> Z^target (rows = target rank)."""

    matrix: Matrix
    source: int
    target: int

    def __post_init__(self):
        mat = as_matrix(self.matrix)
        object.__setattr__(self, "matrix", mat)
        if len(mat) != self.target or any(len(r) != self.source for r in mat):
            raise RankMismatch(f"matrix shape does not match {self.source} -> {self.target}")
        if any(not isinstance(x, int) for r in mat for x in r):
            raise ValueError("lattice morphisms need integer entries")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], source: int | None = None) -> "LatticeMorphism":
        rows = as_matrix(rows)
        if source is None:
            if not rows:
                raise ValueError("source rank is ambiguous for an empty matrix")
            source = len(rows[0])
        return cls(rows, source, len(rows))

    @classmethod
    def identity(cls, n: int) -> "LatticeMorphism":
        return cls(identity(n), n, n)

    @classmethod
    def zero(cls, source: int, target: int) -> "LatticeMorphism":
        return cls(zeros(target, source), source, target)

    def __call__(self, v: Sequence):
        if len(v) != self.source:
            raise RankMismatch(f"vector of rank {len(v)} fed to a map from rank {self.source}")
        return tuple(sum(x * y for x, y in zip(row, v)) for row in self.matrix)

    def compose(self, first: "LatticeMorphism") -> "LatticeMorphism":
        """self o first."""
        if first.target != self.source:
            raise RankMismatch("composing incompatible lattice maps")
        mat = tuple(
            tuple(sum(self.matrix[i][k] * first.matrix[k][j] for k in range(self.source)) for j in range(first.source))
            for i in range(self.target)
        )
        return LatticeMorphism(mat, first.source, self.target)

    def transpose(self) -> "LatticeMorphism":
        """The dual map M' -> M, i.e. F*."""
        mat = tuple(tuple(self.matrix[i][j] for i in range(self.target)) for j in range(self.source))
        return LatticeMorphism(mat, self.target, self.source)

    def rank(self) -> int:
        return rank(self.matrix, self.source)

    def is_injective(self) -> bool:
        return self.rank() == self.source

    def is_automorphism(self) -> bool:
        if self.source != self.target:
            return False
        return self.source == 0 or abs(determinant(self.matrix)) == 1

    def inverse(self) -> "LatticeMorphism":
        inv = inverse(self.matrix)
        if any(x.denominator != 1 for r in inv for x in r):
            raise ValueError("lattice map is not unimodular")
        return LatticeMorphism(tuple(tuple(int(x) for x in r) for r in inv), self.target, self.source)

    def power(self, k: int) -> "LatticeMorphism":
        out = LatticeMorphism.identity(self.source)
        for _ in range(k):
            out = self.compose(out)
        return out

    def is_surjective(self) -> bool:
        if self.target == 0:
            return True
        divs = elementary_divisors(self.matrix, self.source)
        return len(divs) == self.target and all(x == 1 for x in divs)

    def rows(self) -> list[list[int]]:
        return [list(r) for r in self.matrix]


@dataclass(frozen=True)
class SplitSequence:
    """0 -> N' --F--> N --P--> N'' -> 0 together with a section s of F."""

    F: LatticeMorphism
    P: LatticeMorphism
    s: LatticeMorphism

    def __post_init__(self):
        self.validate()

    def validate(self) -> None:
        F, P, s = self.F, self.P, self.s
        if P.source != F.target or s.source != F.target or s.target != F.source:
            raise InvalidSplit("ranks of F, P, s are inconsistent")
        if P.target + F.source != F.target:
            raise InvalidSplit("rank N must equal rank N' + rank N''")
        if not F.is_injective():
            raise InvalidSplit("F is not injective")
        if any(x for r in P.compose(F).matrix for x in r):
            raise InvalidSplit("P o F is not zero")
        if s.compose(F) != LatticeMorphism.identity(F.source):
            raise InvalidSplit("s o F is not the identity")
        if not P.is_surjective():
            raise InvalidSplit("P is not surjective")


def smith_split(F: LatticeMorphism) -> SplitSequence:
    """Split the inclusion F: Z^r -> Z^n using its Smith normal form.

    With U F V = [I; 0], the last n - r rows of U give P and V U[:r] gives s.
    The section is not canonical; any s + A o P is another one.
    """
    if not F.is_injective():
        raise NotInjective("F is not injective")
    n, r = F.target, F.source
    u, d, v = smith_normal_form(F.matrix, r)
    divs = [d[i][i] for i in range(r)]
    if any(x != 1 for x in divs):
        raise TorsionCokernel(f"elementary divisors {divs}: the subtorus is not saturated")
    p_rows = u[r:]
    s_rows = matmul(v, u[:r]) if r else ()
    P = LatticeMorphism(p_rows, n, n - r)
    s = LatticeMorphism(s_rows if r else (), n, r)
    return SplitSequence(F, P, s)
