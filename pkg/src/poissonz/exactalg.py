"""Exact rational linear algebra: ranks, kernels, determinants, Pfaffians.

Everything here works over the rationals with ``fractions.Fraction``; no
floating point appears anywhere.  Matrices stay small (the dimension of a
classical Lie algebra at desk scale), so dense storage and classical
elimination are the right tools.
"""
from __future__ import annotations

import itertools
from fractions import Fraction

Rat = Fraction


def rat(x) -> Fraction:
    """Coerce an int/str/Fraction to an exact rational."""
    return x if isinstance(x, Fraction) else Fraction(x)


class Mat:
    """Dense matrix with Fraction entries."""

    __slots__ = ("rows", "cols", "data")

    def __init__(self, data):
        self.data = [[rat(x) for x in row] for row in data]
        self.rows = len(self.data)
        self.cols = len(self.data[0]) if self.data else 0
        for row in self.data:
            if len(row) != self.cols:
                raise ValueError("ragged matrix")

    @classmethod
    def zeros(cls, rows, cols):
        return cls([[0] * cols for _ in range(rows)])

    @classmethod
    def identity(cls, n):
        return cls([[1 if i == j else 0 for j in range(n)] for i in range(n)])

    @classmethod
    def from_cols(cls, cols):
        return cls([[c[i] for c in cols] for i in range(len(cols[0]))])

    def copy(self):
        return Mat(self.data)

    def __getitem__(self, ij):
        i, j = ij
        return self.data[i][j]

    def __eq__(self, other):
        return (
            isinstance(other, Mat)
            and self.rows == other.rows
            and self.cols == other.cols
            and self.data == other.data
        )

    def __repr__(self):
        body = "; ".join(" ".join(str(x) for x in row) for row in self.data)
        return f"Mat[{self.rows}x{self.cols}: {body}]"

    def __add__(self, other):
        return Mat(
            [
                [a + b for a, b in zip(r1, r2)]
                for r1, r2 in zip(self.data, other.data)
            ]
        )

    def __sub__(self, other):
        return Mat(
            [
                [a - b for a, b in zip(r1, r2)]
                for r1, r2 in zip(self.data, other.data)
            ]
        )

    def __neg__(self):
        return Mat([[-a for a in row] for row in self.data])

    def scale(self, c):
        c = rat(c)
        return Mat([[c * a for a in row] for row in self.data])

    def __matmul__(self, other):
        if self.cols != other.rows:
            raise ValueError("shape mismatch")
        out = [[Fraction(0)] * other.cols for _ in range(self.rows)]
        for i in range(self.rows):
            row = self.data[i]
            for k in range(self.cols):
                a = row[k]
                if a:
                    orow = other.data[k]
                    orow_out = out[i]
                    for j in range(other.cols):
                        if orow[j]:
                            orow_out[j] += a * orow[j]
        return Mat(out)

    def mul_vec(self, v):
        return tuple(
            sum((a * x for a, x in zip(row, v)), Fraction(0)) for row in self.data
        )

    def transpose(self):
        return Mat([[self.data[i][j] for i in range(self.rows)] for j in range(self.cols)])

    def trace(self):
        return sum((self.data[i][i] for i in range(self.rows)), Fraction(0))

    def is_zero(self):
        return all(x == 0 for row in self.data for x in row)

    def is_skew(self):
        if self.rows != self.cols:
            return False
        return all(
            self.data[i][j] == -self.data[j][i]
            for i in range(self.rows)
            for j in range(i, self.cols)
        )

    def is_symmetric(self):
        if self.rows != self.cols:
            return False
        return all(
            self.data[i][j] == self.data[j][i]
            for i in range(self.rows)
            for j in range(i + 1, self.cols)
        )

    def submatrix(self, rows, cols):
        return Mat([[self.data[i][j] for j in cols] for i in rows])

    def _int_rows(self):
        """Integer copies of the rows when every entry is integral, else None."""
        out = []
        for row in self.data:
            r = []
            for x in row:
                if x.denominator != 1:
                    return None
                r.append(x.numerator)
            out.append(r)
        return out

    def rank(self):
        ints = self._int_rows()
        if ints is not None:
            return _rank_bareiss_int(ints)
        return len(rref([row[:] for row in self.data])[0])

    def det(self):
        if self.rows != self.cols:
            raise ValueError("determinant of a non-square matrix")
        n = self.rows
        ints = self._int_rows()
        if ints is not None:
            return Fraction(_det_bareiss_int(ints, n))
        a = [row[:] for row in self.data]
        sign = 1
        acc = Fraction(1)
        for col in range(n):
            piv = next((r for r in range(col, n) if a[r][col]), None)
            if piv is None:
                return Fraction(0)
            if piv != col:
                a[col], a[piv] = a[piv], a[col]
                sign = -sign
            acc *= a[col][col]
            inv = 1 / a[col][col]
            for r in range(col + 1, n):
                f = a[r][col] * inv
                if f:
                    arow, prow = a[r], a[col]
                    for c in range(col, n):
                        arow[c] -= f * prow[c]
        return acc if sign == 1 else -acc

    def inverse(self):
        if self.rows != self.cols:
            raise ValueError("inverse of a non-square matrix")
        n = self.rows
        aug = [self.data[i][:] + [rat(1 if i == j else 0) for j in range(n)] for i in range(n)]
        red, piv = rref(aug)
        if piv != list(range(n)):
            raise ValueError("matrix is singular")
        return Mat([row[n:] for row in red])


def _rank_bareiss_int(a):
    """Rank of an integer matrix by fraction-free elimination."""
    rows = len(a)
    if rows == 0:
        return 0
    cols = len(a[0])
    prev = 1
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, rows) if a[i][c]), None)
        if piv is None:
            continue
        if piv != r:
            a[r], a[piv] = a[piv], a[r]
        p = a[r][c]
        for i in range(r + 1, rows):
            ai = a[i]
            f = ai[c]
            for j in range(c, cols):
                ai[j] = (p * ai[j] - f * a[r][j]) // prev
        prev = p
        r += 1
        if r == rows:
            break
    return r


def _det_bareiss_int(a, n):
    """Determinant of an integer matrix by one-step Bareiss elimination."""
    sign = 1
    prev = 1
    for k in range(n - 1):
        piv = next((i for i in range(k, n) if a[i][k]), None)
        if piv is None:
            return 0
        if piv != k:
            a[k], a[piv] = a[piv], a[k]
            sign = -sign
        p = a[k][k]
        for i in range(k + 1, n):
            ai = a[i]
            f = ai[k]
            for j in range(k + 1, n):
                ai[j] = (p * ai[j] - f * a[k][j]) // prev
            ai[k] = 0
        prev = p
    return sign * a[n - 1][n - 1]


def rref(rows):
    """Reduced row echelon form in place; returns (nonzero rows, pivot columns)."""
    rows = [list(r) for r in rows]
    if not rows:
        return [], []
    ncols = len(rows[0])
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(rows)) if rows[i][c]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = 1 / rows[r][c]
        rows[r] = [x * inv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return rows[:r], pivots


def rank_kernel(m: Mat):
    """Rank and an exact basis of the (right) kernel of ``m``.

    rank + len(kernel) == m.cols, and m @ v == 0 for every kernel vector.
    """
    red, pivots = rref(m.data)
    rank = len(pivots)
    free = [c for c in range(m.cols) if c not in pivots]
    kernel = []
    for f in free:
        v = [Fraction(0)] * m.cols
        v[f] = Fraction(1)
        for i, p in enumerate(pivots):
            v[p] = -red[i][f]
        kernel.append(tuple(v))
    return rank, kernel


def vectors_rank(vectors):
    """Rank of the span of a list of coordinate vectors."""
    if not vectors:
        return 0
    ints = []
    for v in vectors:
        r = []
        for x in v:
            x = rat(x)
            if x.denominator != 1:
                ints = None
                break
            r.append(x.numerator)
        if ints is None:
            break
        ints.append(r)
    if ints is not None:
        return _rank_bareiss_int(ints)
    return len(rref(vectors)[0])


def vectors_rref_basis(vectors):
    """Canonical (RREF) basis of the span of the given vectors."""
    if not vectors:
        return []
    red, _ = rref(vectors)
    return [tuple(row) for row in red]


def intersect_dim(u_vectors, v_vectors):
    """Dimension of span(u) ∩ span(v)."""
    du = vectors_rank(u_vectors)
    dv = vectors_rank(v_vectors)
    dsum = vectors_rank(list(u_vectors) + list(v_vectors))
    return du + dv - dsum


def solve(m: Mat, b):
    """One exact solution of m x = b, or None if inconsistent."""
    aug = [m.data[i][:] + [rat(b[i])] for i in range(m.rows)]
    red, pivots = rref(aug)
    if m.cols in pivots:
        return None
    x = [Fraction(0)] * m.cols
    for i, p in enumerate(pivots):
        x[p] = red[i][m.cols]
    return tuple(x)


class SpanSolver:
    """Expresses vectors in a fixed independent spanning set, exactly."""

    def __init__(self, basis_vectors):
        self.basis = [tuple(rat(x) for x in v) for v in basis_vectors]
        self.dim = len(self.basis)
        self.amb = len(self.basis[0]) if self.basis else 0
        a = Mat.from_cols(self.basis)
        red, pivots = rref(a.transpose().data)
        if len(pivots) != self.dim:
            raise ValueError("spanning set is dependent")
        self.pivot_rows = pivots
        self.left_inv = a.submatrix(pivots, range(self.dim)).inverse()

    def coords(self, vector):
        """Coordinates of ``vector`` in the basis; raises if outside the span."""
        v = [rat(x) for x in vector]
        c = self.left_inv.mul_vec([v[r] for r in self.pivot_rows])
        # exactness check against the full ambient vector
        for i in range(self.amb):
            if sum((c[k] * self.basis[k][i] for k in range(self.dim)), Fraction(0)) != v[i]:
                raise ValueError("vector outside the span")
        return tuple(c)

    def contains(self, vector):
        try:
            self.coords(vector)
            return True
        except ValueError:
            return False


def _pfaffian_memo(m: Mat):
    data = m.data

    memo = {}

    def pf(idx):
        if not idx:
            return Fraction(1)
        if idx in memo:
            return memo[idx]
        i0 = idx[0]
        rest = idx[1:]
        total = Fraction(0)
        for pos, j in enumerate(rest):
            a = data[i0][j]
            if a:
                sub = rest[:pos] + rest[pos + 1:]
                term = a * pf(sub)
                total += term if pos % 2 == 0 else -term
        memo[idx] = total
        return total

    return pf(tuple(range(m.rows)))


def _pfaffian_elim(m: Mat):
    # congruence reduction to 2x2 blocks; each symmetric swap flips the sign
    a = [row[:] for row in m.data]
    n = m.rows
    sign = 1
    acc = Fraction(1)
    for k in range(0, n, 2):
        piv = next((r for r in range(k + 1, n) if a[k][r]), None)
        if piv is None:
            return Fraction(0)
        if piv != k + 1:
            a[k + 1], a[piv] = a[piv], a[k + 1]
            for row in a:
                row[k + 1], row[piv] = row[piv], row[k + 1]
            sign = -sign
        p = a[k][k + 1]
        acc *= p
        for i in range(k + 2, n):
            # zero out a[k][i] using row/col k+1, then a[k+1][i] using row/col k
            for (src, val) in ((k + 1, a[k][i] / p), (k, -a[k + 1][i] / p)):
                if val:
                    for c in range(n):
                        a[i][c] -= val * a[src][c]
                    for r in range(n):
                        a[r][i] -= val * a[r][src]
    return acc if sign == 1 else -acc


def _pfaffian_ff_int(rows, n):
    """Fraction-free Pfaffian of an integer skew matrix (Bareiss-style
    elimination of 2x2 pivot blocks; intermediate divisions are exact)."""
    a = [row[:] for row in rows]
    sign = 1
    f = Fraction(1)
    prev = 1
    base = 0
    while n - base > 2:
        piv = next((j for j in range(base + 1, n) if a[base][j]), None)
        if piv is None:
            return Fraction(0)
        if piv != base + 1:
            a[base + 1], a[piv] = a[piv], a[base + 1]
            for row in a:
                row[base + 1], row[piv] = row[piv], row[base + 1]
            sign = -sign
        p = a[base][base + 1]
        r = (n - base) // 2
        f *= Fraction(p) * Fraction(prev, p) ** (r - 1)
        rb, rb1 = a[base], a[base + 1]
        for i in range(base + 2, n):
            ai = a[i]
            bi, ci = rb[i], rb1[i]
            for j in range(i + 1, n):
                num = p * ai[j] - bi * rb1[j] + rb[j] * ci
                q, rem = divmod(num, prev)
                if rem:
                    raise ArithmeticError("inexact division in pfaffian")
                ai[j] = q
        for i in range(base + 2, n):
            for j in range(i + 1, n):
                a[j][i] = -a[i][j]
        prev = p
        base += 2
    return f * a[base][base + 1] * sign


def pfaffian(m: Mat):
    """Pfaffian of a skew-symmetric matrix of even size.

    Sign convention: the block-diagonal form diag([[0,1],[-1,0]], ...) has
    Pfaffian +1.  Pf(M)^2 == det(M).
    """
    if m.rows != m.cols or m.rows % 2 == 1:
        raise ValueError("pfaffian undefined")
    if not m.is_skew():
        raise ValueError("pfaffian of a non-skew matrix")
    if m.rows == 0:
        return Fraction(1)
    ints = m._int_rows()
    if ints is not None:
        return _pfaffian_ff_int(ints, m.rows)
    if m.rows <= 8:
        return _pfaffian_memo(m)
    return _pfaffian_elim(m)


def sub_pfaffian_vector(m: Mat, k: int):
    """All k-th order sub-Pfaffians of a skew matrix, indexed by k-subsets.

    The wedge power of the 2-form with matrix M satisfies
    (sum_{i<j} M_ij e_i* ^ e_j*)^(k/2) = (k/2)! * sum_S Pf(M_S) e_S*,
    so the returned values are the wedge coordinates up to the single global
    constant (k/2)!.
    """
    if k % 2 == 1:
        raise ValueError("sub-pfaffian order must be even")
    if m.rows != m.cols or not m.is_skew():
        raise ValueError("sub-pfaffians require a square skew matrix")
    if k > m.rows:
        raise ValueError("order exceeds matrix size")
    out = {}
    for subset in itertools.combinations(range(m.rows), k):
        out[subset] = pfaffian(m.submatrix(subset, subset))
    return out


def merge_sign(left, right):
    """Sign of sorting the concatenation left+right (both sorted, disjoint)."""
    inv = 0
    for a in left:
        inv += sum(1 for b in right if b < a)
    return -1 if inv % 2 else 1
