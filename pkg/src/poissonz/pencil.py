"""Pencils of skew-symmetric bilinear forms over the rationals.

Given two skew forms A, B on the same space: the generic rank of the plane
they span, the subspace L spanned by the kernels of the regular members, the
singular parameters, the rank bound for restrictions to a singular kernel,
the dimension identities when the singular set is a single line, and the
block-count invariants of the normal form (number of staircase blocks and
the total of their sizes, via dim L).
"""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction

from .exactalg import Mat, intersect_dim, rank_kernel, rat, vectors_rank, vectors_rref_basis
from . import unipoly


@dataclass
class Pencil:
    a: Mat
    b: Mat

    def __post_init__(self):
        if self.a.rows != self.a.cols or self.b.rows != self.b.cols:
            raise ValueError("pencil matrices must be square")
        if self.a.rows != self.b.rows:
            raise ValueError("pencil matrices must have equal size")
        if not self.a.is_skew() or not self.b.is_skew():
            raise ValueError("pencil matrices must be skew-symmetric")

    @property
    def n(self):
        return self.a.rows

    def member(self, t):
        """A + t*B for finite t; B itself for t = None ('infinity')."""
        if t is None:
            return self.b
        return self.a + self.b.scale(rat(t))


def generic_rank_and_L(p: Pencil, sample_count=None, scan_limit=None):
    """Maximal member rank m and the span L of the kernels of regular members.

    Scans integer parameters; needs sample_count (default n+1) distinct
    regular finite members and asserts that one extra member does not enlarge
    L.
    """
    n = p.n
    want = max(sample_count or 0, n + 1)
    limit = scan_limit or (4 * n + 20)
    ranks = {}
    m = p.b.rank()
    for t in range(limit):
        r = p.member(t).rank()
        ranks[t] = r
        m = max(m, r)
    regular = [t for t, r in ranks.items() if r == m]
    if len(regular) < want + 1:
        raise ValueError(
            f"found only {len(regular)} regular parameters in the scan range"
        )
    kernels = []
    for t in regular[:want]:
        _, ker = rank_kernel(p.member(t))
        kernels.extend(ker)
    l_basis = vectors_rref_basis(kernels)
    _, extra = rank_kernel(p.member(regular[want]))
    if vectors_rank(list(l_basis) + list(extra)) != len(l_basis):
        raise RuntimeError("kernel span did not stabilise")
    return m, l_basis


def _minor_poly(p: Pencil, rows, cols):
    """det of (A + tB)[rows, cols] as a polynomial in t, by interpolation."""
    k = len(rows)
    pts = []
    for t in range(k + 1):
        pts.append((Fraction(t), p.member(t).submatrix(rows, cols).det()))
    return unipoly.interpolate(pts)


def _bareiss_minor(p: Pencil, m):
    """One nonzero m x m minor of A + tB as an exact polynomial in t,
    via fraction-free elimination over the polynomial ring."""
    n = p.n
    a = [
        [
            unipoly.make([p.a[i, j], p.b[i, j]])
            for j in range(n)
        ]
        for i in range(n)
    ]
    rows = list(range(n))
    cols = list(range(n))
    prev = unipoly.make([1])
    for k in range(m):
        piv = None
        best = None
        for i in range(k, n):
            for j in range(k, n):
                d = unipoly.degree(a[rows[i]][cols[j]])
                if d >= 0 and (best is None or d < best):
                    piv, best = (i, j), d
        if piv is None:
            raise ValueError("rank over the function field is below m")
        pi, pj = piv
        rows[k], rows[pi] = rows[pi], rows[k]
        cols[k], cols[pj] = cols[pj], cols[k]
        rk, ck = rows[k], cols[k]
        for i in range(k + 1, n):
            ri = rows[i]
            for j in range(k + 1, n):
                cj = cols[j]
                num = unipoly.sub(
                    unipoly.mul(a[rk][ck], a[ri][cj]),
                    unipoly.mul(a[ri][ck], a[rk][cj]),
                )
                quo, rem = unipoly.divmod_exact(num, prev)
                if rem:
                    raise RuntimeError("fraction-free elimination failed")
                a[ri][cj] = quo
        prev = a[rk][ck]
    return a[rows[m - 1]][cols[m - 1]]


@dataclass
class SingularData:
    params: list
    b_member_singular: bool
    nonrational_possible: bool
    gcd_degree: int


def singular_members(p: Pencil, m=None, extra_minors=8, exact_limit=400):
    """Rational parameters where the member rank drops below the generic rank.

    Candidates come from the gcd of m x m minors (all of them when few, one
    exact elimination minor plus sampled ones otherwise); every candidate is
    verified by an exact rank computation.  A non-linear factor left in the
    gcd is reported as a possible non-rational singular parameter.
    """
    n = p.n
    if m is None:
        m, _ = generic_rank_and_L(p)
    if m == 0:
        return SingularData([], False, False, -1)
    subsets = list(itertools.combinations(range(n), m))
    exact = len(subsets) ** 2 <= exact_limit
    if exact:
        g = []
        for rows in subsets:
            for cols in subsets:
                g = unipoly.gcd(g, _minor_poly(p, rows, cols))
                if unipoly.degree(g) == 0:
                    break
            if unipoly.degree(g) == 0:
                break
    else:
        g = _bareiss_minor(p, m)
        rng = random.Random(0)
        stable = 0
        while stable < extra_minors and unipoly.degree(g) > 0:
            rows = tuple(sorted(rng.sample(range(n), m)))
            cols = tuple(sorted(rng.sample(range(n), m)))
            mp = _minor_poly(p, rows, cols)
            newg = unipoly.gcd(g, mp) if not unipoly.is_zero(mp) else g
            if newg == g:
                stable += 1
            else:
                g = newg
                stable = 0
    if unipoly.is_zero(g):
        raise RuntimeError("all sampled minors vanished identically")
    roots = unipoly.rational_roots(g)
    singular = sorted(
        r for r in roots if p.member(r).rank() < m
    )
    reduced = list(g)
    for r, mult in unipoly.rational_roots(g).items():
        for _ in range(mult):
            reduced, rem = unipoly.divmod_exact(reduced, [-r, Fraction(1)])
            assert not rem
    nonrational = unipoly.degree(reduced) >= 2 if exact else unipoly.degree(reduced) >= 1
    return SingularData(
        singular, p.b.rank() < m, nonrational, unipoly.degree(g)
    )


def restricted_rank(p: Pencil, c_param):
    """Rank of any non-proportional member restricted to ker(C); this does
    not depend on the chosen member."""
    c = p.member(c_param)
    _, u = rank_kernel(c)
    if not u:
        raise ValueError("the chosen member is nondegenerate")
    other = p.a if c_param is None else p.b
    if _proportional(other, c):
        other = p.member(0 if c_param is None else rat(c_param) + 1)
    restr = Mat(
        [
            [
                sum(
                    (x * y for x, y in zip(other.mul_vec(v), u_row)),
                    Fraction(0),
                )
                for v in u
            ]
            for u_row in u
        ]
    )
    return restr.rank(), u


def _proportional(x: Mat, y: Mat):
    flat_x = [v for row in x.data for v in row]
    flat_y = [v for row in y.data for v in row]
    return vectors_rank([flat_x, flat_y]) < 2


def bound_and_sumdim_check(p: Pencil, c_param):
    """The restriction rank bound at a singular member, plus both dimension
    identities when the singular set is exactly one line through it.

    c_param: a rational parameter, or None for the B member itself.
    Returns a dict with the computed quantities and pass flags."""
    m, l_basis = generic_rank_and_L(p)
    n = p.n
    rk_rest, u = restricted_rank(p, c_param)
    bound = len(u) - (n - m)
    out = {
        "m": m,
        "dim_L": len(l_basis),
        "dim_U": len(u),
        "restricted_rank": rk_rest,
        "bound_holds": rk_rest <= bound,
        "a4_applicable": False,
        "a4_holds": None,
    }
    if p.member(c_param).rank() >= m:
        raise ValueError("the chosen member is regular")
    sing = singular_members(p, m=m)
    single_line = (
        (c_param is None and not sing.params and sing.b_member_singular
         and not sing.nonrational_possible)
        or (
            c_param is not None
            and sing.params == [rat(c_param)]
            and not sing.b_member_singular
            and not sing.nonrational_possible
        )
    )
    if single_line and rk_rest == bound:
        out["a4_applicable"] = True
        dim_lu = intersect_dim(l_basis, u)
        ok = dim_lu == n - m and len(l_basis) == (n - m) + (n - len(u)) // 2
        out["a4_holds"] = ok
        out["dim_L_cap_U"] = dim_lu
    return out


def jk_summary(p: Pencil):
    """Block-count invariants of the normal form: number of staircase blocks
    d' = n - m, the total of their size parameters via dim L, and the
    singular parameters with kernel dimensions."""
    m, l_basis = generic_rank_and_L(p)
    sing = singular_members(p, m=m)
    d_prime = p.n - m
    kernel_dims = {}
    for t in sing.params:
        kernel_dims[t] = p.n - p.member(t).rank()
    if sing.b_member_singular:
        kernel_dims["inf"] = p.n - p.b.rank()
    return {
        "d_prime": d_prime,
        "dim_L": len(l_basis),
        "sum_block_sizes": len(l_basis) - d_prime,
        "singular_params": sing.params,
        "b_member_singular": sing.b_member_singular,
        "nonrational_possible": sing.nonrational_possible,
        "kernel_dims": kernel_dims,
    }


def orthogonality_check(p: Pencil, params=(0, 1, 2, 3, None)):
    """ker(B') is L-orthogonal for every member A' and members B': the value
    A'(ker B', L) is exactly zero."""
    m, l_basis = generic_rank_and_L(p)
    for t_b in params:
        _, ker_b = rank_kernel(p.member(t_b))
        for t_a in params:
            if t_a == t_b:
                continue
            a = p.member(t_a)
            for u in ker_b:
                au = a.mul_vec(u)
                for v in l_basis:
                    if sum((x * y for x, y in zip(au, v)), Fraction(0)):
                        return False, (t_a, t_b)
    return True, None


# ---------------------------------------------------------------------------
# block constructions (ground truth for randomized tests)


def kronecker_block(k):
    """Staircase block of size 2k+1: every member has rank 2k."""
    n = 2 * k + 1
    a = Mat.zeros(n, n)
    b = Mat.zeros(n, n)
    for i in range(k):
        a.data[i][k + 1 + i] = Fraction(1)
        a.data[k + 1 + i][i] = Fraction(-1)
        b.data[i + 1][k + 1 + i] = Fraction(1)
        b.data[k + 1 + i][i + 1] = Fraction(-1)
    return a, b


def jordan_block(lam, half):
    """Regular block of size 2*half whose unique singular parameter is lam."""
    m = half
    jm = Mat(
        [
            [
                rat(lam) if i == j else (Fraction(1) if j == i + 1 else Fraction(0))
                for j in range(m)
            ]
            for i in range(m)
        ]
    )
    a = Mat.zeros(2 * m, 2 * m)
    b = Mat.zeros(2 * m, 2 * m)
    for i in range(m):
        for j in range(m):
            a.data[i][m + j] = -jm[i, j]
            a.data[m + j][i] = jm[i, j]
        b.data[i][m + i] = Fraction(1)
        b.data[m + i][i] = Fraction(-1)
    return a, b


def direct_sum(blocks):
    total = sum(a.rows for a, _ in blocks)
    a_out = Mat.zeros(total, total)
    b_out = Mat.zeros(total, total)
    off = 0
    for a, b in blocks:
        for i in range(a.rows):
            for j in range(a.cols):
                a_out.data[off + i][off + j] = a[i, j]
                b_out.data[off + i][off + j] = b[i, j]
        off += a.rows
    return Pencil(a_out, b_out)


def random_congruence(p: Pencil, seed=0, height=3):
    """Congruence transform by a random invertible integer matrix; preserves
    all pencil invariants."""
    rng = random.Random(seed)
    n = p.n
    while True:
        q = Mat(
            [[rng.randint(-height, height) for _ in range(n)] for _ in range(n)]
        )
        if q.det():
            break
    qt = q.transpose()
    return Pencil(qt @ p.a @ q, qt @ p.b @ q)


def read_pencil_file(path):
    """Plain-text pencil format: first the size n, then the entries of A and
    of B, row-major, as rationals; whitespace-separated, '#' comments."""
    tokens = []
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            line = line.split("#", 1)[0]
            tokens.extend(line.split())
    if not tokens:
        raise ValueError("empty pencil file")
    n = int(tokens[0])
    need = 1 + 2 * n * n
    if len(tokens) != need:
        raise ValueError(f"expected {need} tokens, found {len(tokens)}")
    vals = [Fraction(t) for t in tokens[1:]]
    a = Mat([vals[i * n:(i + 1) * n] for i in range(n)])
    b = Mat([vals[n * n + i * n: n * n + (i + 1) * n] for i in range(n)])
    return Pencil(a, b)
