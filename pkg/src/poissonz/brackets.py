"""The one-parameter family of Poisson brackets attached to a symmetric pair.

For a finite parameter t the bracket keeps the mixed and fixed-part
multiplications of the algebra and scales the (odd x odd -> even) part by t;
the value t = infinity keeps only that part.  t = 0 is the Lie-Poisson
bracket of the semidirect contraction.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from .exactalg import Mat, rank_kernel, rat
from .liealg import SymmetricPair, random_vector, table_jacobi_defect, table_tensor
from .polyring import Poly


class _Infinity:
    """Tagged bracket parameter for the degenerate member of the family."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INFINITY"


INFINITY = _Infinity()


def is_infinite(t):
    return t is INFINITY


@dataclass
class TensorAt:
    point: tuple
    t: object
    matrix: Mat


def structure_constants_t(pair: SymmetricPair, t):
    """Bracket table of the family member at parameter t."""
    n0 = pair.n0
    out = {}
    for (i, j), ent in pair.g.table.items():
        odd_pair = i >= n0 and j >= n0
        if is_infinite(t):
            if odd_pair:
                out[(i, j)] = dict(ent)
        elif odd_pair:
            tv = rat(t)
            if tv:
                out[(i, j)] = {k: tv * c for k, c in ent.items()}
        else:
            out[(i, j)] = dict(ent)
    return out


def tensor_at(pair: SymmetricPair, xi, t) -> TensorAt:
    table = structure_constants_t(pair, t)
    return TensorAt(tuple(xi), t, table_tensor(table, pair.dim, xi))


def table_poisson_bracket(table, f: Poly, g: Poly) -> Poly:
    """{f, g} for the linear Poisson structure given by a bracket table."""
    if f.n != g.n:
        raise ValueError("ambient dimension mismatch")
    n = f.n
    out = Poly.zero(n)
    pf, pg = {}, {}

    def dF(i):
        if i not in pf:
            pf[i] = f.partial(i)
        return pf[i]

    def dG(i):
        if i not in pg:
            pg[i] = g.partial(i)
        return pg[i]

    for (i, j), ent in table.items():
        fi, gj = dF(i), dG(j)
        fj, gi = dF(j), dG(i)
        p = fi * gj - fj * gi
        if p.is_zero():
            continue
        lam = Poly(n, {tuple(1 if a == k else 0 for a in range(n)): c for k, c in ent.items()})
        out = out + p * lam
    return out


def poisson_bracket_poly(pair: SymmetricPair, f: Poly, g: Poly, t=1) -> Poly:
    return table_poisson_bracket(structure_constants_t(pair, t), f, g)


def bracket_value_at(tensor: Mat, grad_f, grad_g):
    """{f, g}(xi) = grad_f(xi)^T pi(xi) grad_g(xi)."""
    total = Fraction(0)
    for i, gi in enumerate(grad_f):
        if gi:
            row = tensor.data[i]
            for j, gj in enumerate(grad_g):
                if gj and row[j]:
                    total += gi * row[j] * gj
    return total


def phi_s_map(f: Poly, s, pair: SymmetricPair) -> Poly:
    """Scale each monomial by s^(odd-part degree); the family automorphism."""
    return f.phi_s(pair.n0, s)


def restricted_rank_condition(pair: SymmetricPair, xi):
    """Rank of the t=0 form restricted to the kernel of the t=infinity form.

    Returns (rank_inf, rank0_on_ker, passes) where passes means the restricted
    rank equals dim ker - rk(g), the generic value.
    """
    m_inf = tensor_at(pair, xi, INFINITY).matrix
    rk_inf, kernel = rank_kernel(m_inf)
    m0 = tensor_at(pair, xi, 0).matrix
    if not kernel:
        return rk_inf, 0, False
    restr = Mat(
        [
            [bracket_value_at(m0, u, v) for v in kernel]
            for u in kernel
        ]
    )
    r = restr.rank()
    return rk_inf, r, r == len(kernel) - pair.rank


def _combine_tables(t0, tinf, a, b, dim):
    out = {}
    keys = set(t0) | set(tinf)
    for key in keys:
        ent = {}
        for k, c in t0.get(key, {}).items():
            ent[k] = ent.get(k, Fraction(0)) + rat(a) * c
        for k, c in tinf.get(key, {}).items():
            ent[k] = ent.get(k, Fraction(0)) + rat(b) * c
        ent = {k: c for k, c in ent.items() if c}
        if ent:
            out[key] = ent
    return out


def jacobi_compatibility_check(pair: SymmetricPair, t_values=(0, 1, INFINITY), ab_pairs=((1, 1), (2, 5))):
    """Verify the Jacobi identity on basis triples for family members and for
    linear combinations a*{,}_0 + b*{,}_inf.  For linear brackets this is the
    full Jacobi identity, so passing certifies compatibility."""
    dim = pair.dim
    report = []
    for t in t_values:
        defect = table_jacobi_defect(structure_constants_t(pair, t), dim)
        report.append((f"t={t}", defect is None, defect))
    t0 = structure_constants_t(pair, 0)
    tinf = structure_constants_t(pair, INFINITY)
    for a, b in ab_pairs:
        combined = _combine_tables(t0, tinf, a, b, dim)
        defect = table_jacobi_defect(combined, dim)
        report.append((f"a={a},b={b}", defect is None, defect))
    return report


def generic_point(pair: SymmetricPair, seed=0, height=97, predicate=None, retries=20):
    """Random rational point, resampled until the predicate holds."""
    rng = seed if isinstance(seed, random.Random) else random.Random(seed)
    for _ in range(retries):
        xi = random_vector(rng, pair.dim, height)
        if predicate is None or predicate(xi):
            return xi
    raise RuntimeError("no generic point found within the retry limit")
