"""Poisson-central basic invariants and their adaptation to an involution.

Generators are characteristic-polynomial coefficients of the generic matrix
of each simple factor (plus a Pfaffian for even orthogonal blocks and linear
coordinates of the centre).  For a symmetric pair the set is normalised to
consist of eigenvectors of the involution, and top components of maximal
odd-part degree are reduced against products of the other generators; this
is what makes the generating system "good" (top components algebraically
independent) for the supported classical pairs.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from .exactalg import Mat, rank_kernel, solve, vectors_rank
from .liealg import Algebra, Factor, SymmetricPair, centralizer, random_vector
from .polyring import Poly, jacobian_at


@dataclass
class InvariantSet:
    """Basic invariants with degrees; eigen-data is filled by normalisation."""

    polys: list
    degrees: list
    tags: list
    sigma_eigs: list | None = None
    g1_degrees: list | None = None

    @property
    def size(self):
        return len(self.polys)


# ---------------------------------------------------------------------------
# polynomial matrices


def _poly_mat_mul(a, b):
    rows, mid, cols = len(a), len(b), len(b[0])
    out = []
    for i in range(rows):
        row = []
        for j in range(cols):
            acc = Poly.zero(a[0][0].n)
            for k in range(mid):
                if not a[i][k].is_zero() and not b[k][j].is_zero():
                    acc = acc + a[i][k] * b[k][j]
            row.append(acc)
        out.append(row)
    return out


def _poly_mat_trace(a):
    acc = Poly.zero(a[0][0].n)
    for i in range(len(a)):
        acc = acc + a[i][i]
    return acc


def _poly_mat_pfaffian(a):
    n = len(a)
    amb = a[0][0].n
    memo = {}

    def pf(idx):
        if not idx:
            return Poly.const(amb, 1)
        if idx in memo:
            return memo[idx]
        i0 = idx[0]
        rest = idx[1:]
        total = Poly.zero(amb)
        for pos, j in enumerate(rest):
            if a[i0][j].is_zero():
                continue
            sub = rest[:pos] + rest[pos + 1:]
            term = a[i0][j] * pf(sub)
            total = total + (term if pos % 2 == 0 else -term)
        memo[idx] = total
        return total

    return pf(tuple(range(n)))


def generic_dual_matrix(alg: Algebra):
    """Matrix of the element of the algebra dual to a point, with linear
    polynomial entries in the point's coordinates."""
    n = alg.dim
    ginv = alg.gram.inverse()
    duals = []
    for i in range(n):
        m = Mat.zeros(alg.rep_dim, alg.rep_dim)
        for j in range(n):
            if ginv[i, j]:
                m = m + alg.basis_mats[j].scale(ginv[i, j])
        duals.append(m)
    out = []
    for r in range(alg.rep_dim):
        row = []
        for c in range(alg.rep_dim):
            terms = {}
            for i in range(n):
                v = duals[i][r, c]
                if v:
                    e = [0] * n
                    e[i] = 1
                    terms[tuple(e)] = v
            row.append(Poly(n, terms))
        out.append(row)
    return out


def _factor_projection(factor: Factor):
    u = Mat.from_cols(factor.space)
    if factor.form is not None:
        g_v = u.transpose() @ factor.form @ u
        return u, g_v.inverse() @ u.transpose() @ factor.form, g_v
    return u, (u.transpose() @ u).inverse() @ u.transpose(), None


def _restrict_generic(mgen, factor: Factor):
    u, p, _ = _factor_projection(factor)
    pm = [[Poly.const(mgen[0][0].n, p[i, j]) for j in range(p.cols)] for i in range(p.rows)]
    um = [[Poly.const(mgen[0][0].n, u[i, j]) for j in range(u.cols)] for i in range(u.rows)]
    return _poly_mat_mul(_poly_mat_mul(pm, mgen), um)


def _newton_elementary(power_sums, upto):
    e = [Poly.const(power_sums[1].n, 1)]
    for k in range(1, upto + 1):
        acc = Poly.zero(power_sums[1].n)
        for i in range(1, k + 1):
            term = e[k - i] * power_sums[i]
            acc = acc + (term if i % 2 == 1 else -term)
        e.append(acc.scale(Fraction(1, k)))
    return e


def center_basis(alg: Algebra):
    """Canonical basis of the centre from the structure constants."""
    n = alg.dim
    rows = []
    for j in range(n):
        for k in range(n):
            row = [Fraction(0)] * n
            for (a, b), ent in alg.table.items():
                c = ent.get(k)
                if not c:
                    continue
                if b == j:
                    row[a] += c
                elif a == j:
                    row[b] -= c
            rows.append(row)
    _, kernel = rank_kernel(Mat(rows))
    return kernel


def poisson_central_defects(alg: Algebra, h: Poly):
    """Brackets {x_i, h} for all coordinates; all must vanish for a central h."""
    n = alg.dim
    partials = [h.partial(j) for j in range(n)]
    acc = [Poly.zero(n) for _ in range(n)]
    for (a, b), ent in alg.table.items():
        lam = Poly(
            n,
            {tuple(1 if t == k else 0 for t in range(n)): c for k, c in ent.items()},
        )
        if not partials[b].is_zero():
            acc[a] = acc[a] + lam * partials[b]
        if not partials[a].is_zero():
            acc[b] = acc[b] - lam * partials[a]
    return acc


def is_poisson_central(alg: Algebra, h: Poly):
    return all(p.is_zero() for p in poisson_central_defects(alg, h))


def _independent_at_random(polys, dim, seed=0, tries=5, height=97):
    rng = random.Random(seed)
    want = len(polys)
    best = 0
    for _ in range(tries):
        point = random_vector(rng, dim, height)
        r = vectors_rank(jacobian_at(polys, point))
        best = max(best, r)
        if r == want:
            return True, want
    return False, best


def basic_invariants(alg: Algebra) -> InvariantSet:
    """Basic generators of the Poisson centre for a classical algebra."""
    items = []  # (degree, order, poly, tag)
    order = 0
    if alg.factors:
        mgen = generic_dual_matrix(alg)
    for factor in alg.factors:
        mv = _restrict_generic(mgen, factor)
        m = len(factor.space)
        if factor.kind == "sl":
            degs = list(range(2, m + 1))
        elif factor.kind == "so":
            degs = list(range(2, m, 2)) if m % 2 else list(range(2, m - 1, 2))
        elif factor.kind == "sp":
            degs = list(range(2, m + 1, 2))
        else:
            raise ValueError(f"unknown factor kind {factor.kind}")
        top = max(degs) if degs else 0
        powers = [None, _poly_mat_trace(mv)]
        acc = mv
        for k in range(2, top + 1):
            acc = _poly_mat_mul(acc, mv)
            powers.append(_poly_mat_trace(acc))
        if top:
            elem = _newton_elementary(powers, top)
            for d in degs:
                items.append((d, order, elem[d], f"e{d}"))
                order += 1
        if factor.kind == "so" and m % 2 == 0:
            u, _, g_v = _factor_projection(factor)
            gm = [
                [Poly.const(alg.dim, g_v[i, j]) for j in range(m)]
                for i in range(m)
            ]
            pf = _poly_mat_pfaffian(_poly_mat_mul(gm, mv))
            items.append((m // 2, order, pf, "pf"))
            order += 1
    for z in center_basis(alg):
        items.append((1, order, Poly.from_vector(z), "z"))
        order += 1
    items.sort(key=lambda t: (t[0], t[1]))

    polys = [it[2] for it in items]
    degrees = [it[0] for it in items]
    tags = [it[3] for it in items]

    if len(polys) != alg.rank:
        raise ValueError(
            f"got {len(polys)} basic invariants for rank {alg.rank} algebra"
        )
    magic = (alg.dim + alg.rank) // 2
    if sum(degrees) != magic:
        raise ValueError("degrees do not sum to the magic number")
    for p, d in zip(polys, degrees):
        if p.is_zero() or not p.is_homogeneous() or p.degree() != d:
            raise ValueError("invariant is not homogeneous of the right degree")
        if not is_poisson_central(alg, p):
            raise ValueError("constructed generator is not Poisson-central")
    ok, best = _independent_at_random(polys, alg.dim)
    if not ok:
        raise ValueError(f"generators look dependent (max Jacobian rank {best})")
    return InvariantSet(polys, degrees, tags)


# ---------------------------------------------------------------------------
# normalisation for a pair


def _products_of_degree(polys, degrees, exclude, total):
    """Products of generators (excluding one index) of exact total degree."""
    idx = [i for i in range(len(polys)) if i != exclude and degrees[i] <= total]
    out = []

    def rec(pos, remaining, current):
        if remaining == 0:
            out.append(list(current))
            return
        for k in range(pos, len(idx)):
            i = idx[k]
            if degrees[i] <= remaining:
                current.append(i)
                rec(k, remaining - degrees[i], current)
                current.pop()

    rec(0, total, [])
    prods = []
    for combo in out:
        p = Poly.const(polys[0].n, 1)
        for i in combo:
            p = p * polys[i]
        prods.append((tuple(combo), p))
    return prods


def _reduce_top_layers(polys, degrees, n0):
    """Repeatedly cancel the maximal odd-part layer of a generator against
    products of the others.  Each success strictly lowers one g1-degree, so
    this terminates; on a set that is already good it does nothing."""
    changed = True
    while changed:
        changed = False
        for j in sorted(range(len(polys)), key=lambda i: degrees[i]):
            h = polys[j]
            d1 = h.g1_degree(n0)
            if d1 == 0:
                continue
            target = h.g1_layer(n0, d1)
            cands = []
            for combo, p in _products_of_degree(polys, degrees, j, degrees[j]):
                layer = p.g1_layer(n0, d1)
                if not layer.is_zero():
                    cands.append((p, layer))
            if not cands:
                continue
            monomials = sorted(
                set(target.terms) | {e for _, l in cands for e in l.terms}
            )
            a = Mat(
                [[l.terms.get(e, Fraction(0)) for _, l in cands] for e in monomials]
            )
            b = [target.terms.get(e, Fraction(0)) for e in monomials]
            sol = solve(a, b)
            if sol is None:
                continue
            newh = h
            for c, (p, _) in zip(sol, cands):
                if c:
                    newh = newh - p.scale(c)
            if newh.is_zero():
                raise ValueError("generator reduced to zero; set was dependent")
            if newh.g1_degree(n0) >= d1:
                raise RuntimeError("layer reduction failed to lower the degree")
            polys[j] = newh
            changed = True


def sigma_normalize(invset: InvariantSet, pair: SymmetricPair, seed=0) -> InvariantSet:
    """Replace generators by involution eigenvectors of minimal odd-part degree.

    A non-eigenvector H is replaced by (H + sH)/2 or (H - sH)/2; the parity of
    the maximal odd-part degree selects the candidate that keeps the set
    generating, with the other one as a fallback when the first choice breaks
    independence (this happens for the swap involution of a doubled algebra).
    """
    n0 = pair.n0
    polys = list(invset.polys)
    degrees = list(invset.degrees)
    for j in range(len(polys)):
        h = polys[j]
        sh = h.sigma_image(n0)
        if sh == h or sh == -h:
            continue
        d1 = h.g1_degree(n0)
        prefer = 1 if d1 % 2 == 0 else -1
        replaced = False
        for sign in (prefer, -prefer):
            cand = (h + sh.scale(sign)).scale(Fraction(1, 2))
            if cand.is_zero():
                continue
            trial = polys[:j] + [cand] + polys[j + 1:]
            ok, _ = _independent_at_random(trial, pair.dim, seed=seed)
            if ok:
                polys[j] = cand
                replaced = True
                break
        if not replaced:
            raise ValueError("eigenvector normalisation failed")

    _reduce_top_layers(polys, degrees, n0)

    eigs, g1deg = [], []
    for h in polys:
        sh = h.sigma_image(n0)
        if sh == h:
            eigs.append(1)
        elif sh == -h:
            eigs.append(-1)
        else:
            raise RuntimeError("normalised generator is not an eigenvector")
        g1deg.append(h.g1_degree(n0))
    for h in polys:
        if not is_poisson_central(pair.g, h):
            raise RuntimeError("normalisation broke centrality")
    ok, best = _independent_at_random(polys, pair.dim, seed=seed + 1)
    if not ok:
        raise ValueError(f"eigenvector normalisation failed (rank {best})")
    out = InvariantSet(polys, degrees, list(invset.tags), eigs, g1deg)
    _check_eig_laws(out, pair)
    return out


def _check_eig_laws(invset: InvariantSet, pair: SymmetricPair):
    # eigenvalue is +1 exactly for even odd-part degree
    for eps, d1 in zip(invset.sigma_eigs, invset.g1_degrees):
        if eps != (1 if d1 % 2 == 0 else -1):
            raise RuntimeError("eigenvalue/parity law violated")
    plus = sum(1 for e in invset.sigma_eigs if e == 1)
    if plus != pair.rank0:
        raise RuntimeError(
            f"number of +1 eigenvectors {plus} differs from rank {pair.rank0}"
        )


@dataclass
class GgsReport:
    sum_g1_degrees: int
    dim_g1: int
    is_ggs: bool
    top_independent: bool


def ggs_check(invset: InvariantSet, pair: SymmetricPair, seed=0) -> GgsReport:
    """Good-generating-system test: odd-part degree sum against dim g1, and
    independence of the top components.  The two criteria must agree."""
    if invset.g1_degrees is None:
        raise ValueError("normalise the set first")
    total = sum(invset.g1_degrees)
    if total < pair.n1:
        raise RuntimeError("odd-degree sum below dim g1; lower bound violated")
    is_ggs = total == pair.n1
    tops = [
        h.g1_layer(pair.n0, d1)
        for h, d1 in zip(invset.polys, invset.g1_degrees)
    ]
    top_independent, _ = _independent_at_random(tops, pair.dim, seed=seed)
    if is_ggs != top_independent:
        raise RuntimeError(
            "degree-sum criterion and top-independence disagree; "
            "this indicates a bug, not a mathematical failure"
        )
    return GgsReport(total, pair.n1, is_ggs, top_independent)


# ---------------------------------------------------------------------------
# regular nilpotents and the restriction-onto test


def _strict_upper_basis(factor: Factor):
    """Ambient matrices acting as strictly upper triangular operators on the
    factor block (in its split basis), spanning the nilradical of a Borel."""
    u, p, g_v = _factor_projection(factor)
    m = len(factor.space)
    if factor.kind == "sl":
        local = []
        for a in range(m):
            for b in range(a + 1, m):
                x = Mat.zeros(m, m)
                x.data[a][b] = Fraction(1)
                local.append(x)
    else:
        # solve the form condition together with lower-triangular vanishing
        rows = []
        for a in range(m):
            for b in range(a, m):
                row = [Fraction(0)] * (m * m)
                for c in range(m):
                    row[c * m + a] += g_v[c, b]
                    row[c * m + b] += g_v[a, c]
                rows.append(row)
        for a in range(m):
            for b in range(a + 1):
                row = [Fraction(0)] * (m * m)
                row[a * m + b] = Fraction(1)
                rows.append(row)
        _, kernel = rank_kernel(Mat(rows))
        local = [
            Mat([[v[i * m + j] for j in range(m)] for i in range(m)])
            for v in kernel
        ]
    return [u @ x @ p for x in local]


def regular_nilpotent_g0(pair: SymmetricPair, seed=0, retries=20):
    """A principal nilpotent element of the fixed subalgebra, as coordinates
    in the adapted basis (odd part zero)."""
    uppers = []
    for factor in pair.g0.factors:
        uppers.extend(_strict_upper_basis(factor))
    zero = tuple(Fraction(0) for _ in range(pair.dim))
    if not uppers:
        return zero  # abelian fixed subalgebra: only the zero nilpotent
    solver = pair.g.solver()
    rng = random.Random(seed)
    from .liealg import _flatten  # shared matrix flattener

    for _ in range(retries):
        mat = Mat.zeros(pair.g.rep_dim, pair.g.rep_dim)
        for upper in uppers:
            mat = mat + upper.scale(rng.randint(1, 9))
        coords = solver.coords(_flatten(mat))
        e0 = tuple(coords[i] if i < pair.n0 else Fraction(0) for i in range(pair.dim))
        e0mat = pair.g.element_matrix(e0)
        power = e0mat
        for _ in range(pair.g.rep_dim):
            power = power @ e0mat
        if not power.is_zero():
            continue
        d, _, _ = centralizer(pair.g0, e0[: pair.n0])
        if d == pair.rank0:
            return e0
    raise RuntimeError("no regular nilpotent found in the retry limit")


def _r0_onto_expected(pair: SymmetricPair):
    fam, params = pair.family, pair.params
    if fam == "DBL":
        return True
    if fam == "AI":
        return params[0] % 2 == 1
    if fam == "AII":
        return True
    if fam == "BDI":
        p, q = params
        return q == 1 and p % 2 == 1
    if fam in ("AIII", "CII"):
        return False
    raise KeyError(f"no onto classification for family {fam}")


def r0_onto_check(pair: SymmetricPair, seed=0):
    """Whether restriction of invariants onto the fixed part is surjective,
    tested through the regular-nilpotent criterion and cross-checked against
    the classification list."""
    e0 = regular_nilpotent_g0(pair, seed=seed)
    d, _, _ = centralizer(pair.g, e0)
    onto = d == pair.rank and any(e0)
    expected = _r0_onto_expected(pair)
    if onto != expected:
        raise RuntimeError(
            f"computed onto={onto} disagrees with the classification for {pair.key}"
        )
    return onto, {"nilpotent": e0, "centralizer_dim": d}
