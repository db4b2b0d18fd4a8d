"""Classical Lie algebras, involutions, symmetric pairs, and sampled data.

Algebras are realized as spaces of matrices over the rationals.  Orthogonal
and symplectic algebras use antidiagonal (split) Gram matrices, so diagonal
matrices form Cartan subalgebras and "upper triangular" cuts out Borel
subalgebras.  A symmetric pair is stored in an adapted basis: the first n0
basis vectors span the fixed subalgebra, the rest its (-1)-eigenspace.
"""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction

from .exactalg import (
    Mat,
    SpanSolver,
    intersect_dim,
    rank_kernel,
    rat,
    rref,
    vectors_rref_basis,
)

# ---------------------------------------------------------------------------
# bracket tables


def table_entry(table, i, j):
    """Signed lookup of [e_i, e_j] as a sparse dict."""
    if i == j:
        return {}
    if i < j:
        return table.get((i, j), {})
    ent = table.get((j, i), {})
    return {k: -c for k, c in ent.items()}


def table_bracket(table, dim, x, y):
    """[x, y] for coordinate vectors, as a dense tuple."""
    out = [Fraction(0)] * dim
    for (i, j), ent in table.items():
        c = x[i] * y[j] - x[j] * y[i]
        if c:
            for k, v in ent.items():
                out[k] += c * v
    return tuple(out)


def table_ad(table, dim, x):
    """Matrix of ad(x): column j holds [x, e_j]."""
    cols = [[Fraction(0)] * dim for _ in range(dim)]
    for (i, j), ent in table.items():
        if x[i]:
            for k, v in ent.items():
                cols[j][k] += x[i] * v
        if x[j]:
            for k, v in ent.items():
                cols[i][k] -= x[j] * v
    return Mat([[cols[j][k] for j in range(dim)] for k in range(dim)])


def table_tensor(table, dim, xi):
    """Skew matrix of the Poisson tensor at xi: M[i][j] = xi([e_i, e_j])."""
    m = [[Fraction(0)] * dim for _ in range(dim)]
    for (i, j), ent in table.items():
        v = sum((c * xi[k] for k, c in ent.items()), Fraction(0))
        if v:
            m[i][j] = v
            m[j][i] = -v
    return Mat(m)


def table_jacobi_defect(table, dim):
    """First basis triple violating the Jacobi identity, or None."""
    for i, j, k in itertools.combinations(range(dim), 3):
        acc = [Fraction(0)] * dim
        for a, b, c in ((i, j, k), (j, k, i), (k, i, j)):
            inner = table_entry(table, b, c)
            for m, v in inner.items():
                outer = table_entry(table, a, m)
                for r, w in outer.items():
                    acc[r] += v * w
        if any(acc):
            return (i, j, k, tuple(acc))
    return None


def scale_table(table, factor):
    return {
        ij: {k: factor * c for k, c in ent.items()} for ij, ent in table.items()
    }


# ---------------------------------------------------------------------------
# algebras


@dataclass
class Factor:
    """A simple matrix block of an algebra: its kind, invariant subspace
    (ordered so a restricted so/sp Gram matrix is antidiagonal), and the
    ambient bilinear form for so/sp kinds."""

    kind: str  # 'sl' | 'so' | 'sp'
    space: list  # list of ambient vectors (tuples of Fractions)
    form: Mat | None = None


@dataclass
class Algebra:
    """Structure constants plus a faithful matrix realization."""

    name: str
    labels: list
    table: dict
    gram: Mat
    rank: int
    rep_dim: int
    basis_mats: list
    factors: list = field(default_factory=list)

    @property
    def dim(self):
        return len(self.labels)

    def bracket(self, x, y):
        return table_bracket(self.table, self.dim, x, y)

    def ad(self, x):
        return table_ad(self.table, self.dim, x)

    def tensor_at(self, xi):
        return table_tensor(self.table, self.dim, xi)

    def solver(self):
        return SpanSolver([_flatten(m) for m in self.basis_mats])

    def element_matrix(self, x):
        out = Mat.zeros(self.rep_dim, self.rep_dim)
        for c, m in zip(x, self.basis_mats):
            if c:
                out = out + m.scale(c)
        return out

    def verify(self):
        defect = table_jacobi_defect(self.table, self.dim)
        if defect is not None:
            raise ValueError(f"Jacobi identity fails on triple {defect[:3]}")
        # invariance of the trace form on basis triples
        for (i, j), ent in self.table.items():
            for k in range(self.dim):
                lhs = sum(
                    (c * self.gram[m, k] for m, c in ent.items()), Fraction(0)
                )
                rhs = sum(
                    (
                        c * self.gram[j, m]
                        for m, c in table_entry(self.table, i, k).items()
                    ),
                    Fraction(0),
                )
                if lhs + rhs != 0:
                    raise ValueError("trace form is not invariant")
        return True


def _flatten(m: Mat):
    return tuple(x for row in m.data for x in row)


def algebra_from_matrices(name, mats, labels, factors, rank, verify=True):
    """Compute structure constants and the trace form from basis matrices."""
    dim = len(mats)
    solver = SpanSolver([_flatten(m) for m in mats])
    table = {}
    for i in range(dim):
        for j in range(i + 1, dim):
            comm = mats[i] @ mats[j] - mats[j] @ mats[i]
            if comm.is_zero():
                continue
            coords = solver.coords(_flatten(comm))
            ent = {k: c for k, c in enumerate(coords) if c}
            if ent:
                table[(i, j)] = ent
    gram = Mat(
        [[(mats[i] @ mats[j]).trace() for j in range(dim)] for i in range(dim)]
    )
    alg = Algebra(name, list(labels), table, gram, rank, mats[0].rows, list(mats), factors)
    if verify:
        alg.verify()
    return alg


# ---------------------------------------------------------------------------
# matrix families


def antidiag_sym_form(n):
    return Mat([[1 if i + j == n - 1 else 0 for j in range(n)] for i in range(n)])


def antidiag_skew_form(n):
    if n % 2:
        raise ValueError("symplectic form needs even size")
    half = n // 2
    return Mat(
        [
            [
                (1 if i < half else -1) if i + j == n - 1 else 0
                for j in range(n)
            ]
            for i in range(n)
        ]
    )


def _unit(n, i, j):
    m = Mat.zeros(n, n)
    m.data[i][j] = Fraction(1)
    return m


def sl_basis(n):
    mats, labels = [], []
    for i in range(n):
        for j in range(i + 1, n):
            mats.append(_unit(n, i, j))
            labels.append(f"E{i+1}{j+1}")
    for i in range(n - 1):
        mats.append(_unit(n, i, i) - _unit(n, i + 1, i + 1))
        labels.append(f"H{i+1}")
    for i in range(n):
        for j in range(i + 1, n):
            mats.append(_unit(n, j, i))
            labels.append(f"E{j+1}{i+1}")
    return mats, labels


def form_algebra_basis(form: Mat, n):
    """Deterministic basis of {X : X^T F + F X = 0}."""
    # (X^T F)_{ab} = sum_c X_{ca} F_{cb};  (F X)_{ab} = sum_c F_{ac} X_{cb}
    eqs = []
    for a in range(n):
        for b in range(a, n):
            row = [Fraction(0)] * (n * n)
            for c in range(n):
                row[c * n + a] += form[c, b]
                row[c * n + b] += form[a, c]
            eqs.append(row)
    _, kernel = rank_kernel(Mat(eqs))
    mats = []
    for v in kernel:
        mats.append(Mat([[v[i * n + j] for j in range(n)] for i in range(n)]))
    return mats


def _std_basis_vectors(n, indices=None):
    indices = range(n) if indices is None else indices
    out = []
    for i in indices:
        v = [Fraction(0)] * n
        v[i] = Fraction(1)
        out.append(tuple(v))
    return out


def _parse_simple(desc):
    for fam in ("sl", "so", "sp"):
        if desc.startswith(fam):
            try:
                n = int(desc[len(fam):])
            except ValueError:
                raise ValueError(f"bad algebra descriptor {desc!r}")
            return fam, n
    raise ValueError(f"bad algebra descriptor {desc!r}")


def _simple_algebra_parts(desc):
    """(mats, labels, factor, rank) for one simple summand descriptor."""
    fam, n = _parse_simple(desc)
    if fam == "sl":
        if n < 2:
            raise ValueError("sl needs n >= 2")
        mats, labels = sl_basis(n)
        factor = Factor("sl", _std_basis_vectors(n))
        return mats, labels, factor, n - 1, n
    if fam == "so":
        if n < 2:
            raise ValueError("so needs n >= 2")
        form = antidiag_sym_form(n)
        mats = form_algebra_basis(form, n)
        labels = [f"M{i+1}" for i in range(len(mats))]
        factor = Factor("so", _std_basis_vectors(n), form) if n >= 3 else None
        return mats, labels, factor, n // 2, n
    if fam == "sp":
        if n < 2 or n % 2:
            raise ValueError("sp needs even n >= 2")
        form = antidiag_skew_form(n)
        mats = form_algebra_basis(form, n)
        labels = [f"M{i+1}" for i in range(len(mats))]
        factor = Factor("sp", _std_basis_vectors(n), form)
        return mats, labels, factor, n // 2, n
    raise ValueError(desc)


def _embed_mat(m, offset, total):
    out = Mat.zeros(total, total)
    for i in range(m.rows):
        for j in range(m.cols):
            out.data[offset + i][offset + j] = m[i, j]
    return out


def _embed_vec(v, offset, total):
    out = [Fraction(0)] * total
    for i, x in enumerate(v):
        out[offset + i] = rat(x)
    return out


def _embed_form(f, offset, total):
    out = Mat.zeros(total, total)
    for i in range(f.rows):
        for j in range(f.cols):
            out.data[offset + i][offset + j] = f[i, j]
    return out


def build_algebra(key):
    """Build a classical algebra from a descriptor like 'sl3' or 'so2+so2'."""
    parts = [p.strip() for p in key.split("+")]
    built = [_simple_algebra_parts(p) for p in parts]
    if len(built) == 1:
        mats, labels, factor, rank, _ = built[0]
        factors = [factor] if factor else []
        return algebra_from_matrices(key, mats, labels, factors, rank)
    total = sum(rep for *_, rep in built)
    offset = 0
    mats, labels, factors = [], [], []
    rank = 0
    for idx, (pm, pl, factor, prank, rep) in enumerate(built):
        for m, lab in zip(pm, pl):
            mats.append(_embed_mat(m, offset, total))
            labels.append(f"{idx+1}.{lab}" if len(built) > 1 else lab)
        if factor:
            factors.append(
                Factor(
                    factor.kind,
                    [tuple(_embed_vec(v, offset, total)) for v in factor.space],
                    _embed_form(factor.form, offset, total) if factor.form else None,
                )
            )
        rank += prank
        offset += rep
    return algebra_from_matrices(key, mats, labels, factors, rank)


# ---------------------------------------------------------------------------
# involutions on factors


def _pair_flip_sym(u, v, form):
    """Isometry sending u -> -u, v -> -v on a hyperbolic pair, identity on
    the orthogonal complement (symmetric form)."""
    n = len(u)
    w = _bilinear(form, u, v)
    fu, fv = form.mul_vec(u), form.mul_vec(v)
    d = Mat.identity(n)
    for i in range(n):
        for j in range(n):
            d.data[i][j] -= 2 * (u[i] * fv[j] + v[i] * fu[j]) / w
    return d


def _pair_flip_skew(u, v, form):
    n = len(u)
    w = _bilinear(form, u, v)
    fu, fv = form.mul_vec(u), form.mul_vec(v)
    d = Mat.identity(n)
    for i in range(n):
        for j in range(n):
            d.data[i][j] -= 2 * (u[i] * fv[j] - v[i] * fu[j]) / w
    return d


def _reflection(u, form):
    """Reflection through a non-isotropic vector (symmetric form)."""
    n = len(u)
    w = _bilinear(form, u, u)
    fu = form.mul_vec(u)
    d = Mat.identity(n)
    for i in range(n):
        for j in range(n):
            d.data[i][j] -= 2 * u[i] * fu[j] / w
    return d


def _bilinear(form, u, v):
    return sum(
        (x * y for x, y in zip(form.mul_vec(v), u)), Fraction(0)
    )


def _vec_add(u, v):
    return tuple(a + b for a, b in zip(u, v))


def _vec_sub(u, v):
    return tuple(a - b for a, b in zip(u, v))


def _check_split_basis(space, form, skew):
    m = len(space)
    for a in range(m):
        for b in range(m):
            val = _bilinear(form, space[a], space[b])
            if a + b == m - 1:
                if val == 0:
                    raise ValueError("split basis has zero antidiagonal pairing")
            elif skew and a == b:
                pass
            elif val != 0:
                raise ValueError("split basis Gram is not antidiagonal")


def so_split_involution(space, form, q):
    """Involutive isometry with q-dimensional (-1)-eigenspace inside span(space).

    Returns (D, plus_space, minus_space); both returned bases keep the Gram
    matrix antidiagonal.
    """
    m = len(space)
    if not 0 < q < m:
        raise ValueError("need 0 < q < dim")
    _check_split_basis(space, form, skew=False)
    npairs = m // 2
    has_middle = m % 2 == 1
    middle = space[npairs] if has_middle else None
    pairs = [(space[i], space[m - 1 - i]) for i in range(npairs)]

    full = q // 2
    odd = q % 2
    if full > npairs or (odd and not has_middle and full >= npairs):
        raise ValueError("flip does not fit")

    d = Mat.identity(len(space[0]))
    minus_pairs = pairs[:full]
    rest = pairs[full:]
    plus_mid, minus_mid = [], []
    for u, v in minus_pairs:
        d = d @ _pair_flip_sym(u, v, form)
    if odd:
        if has_middle:
            d = d @ _reflection(middle, form)
            minus_mid = [middle]
        else:
            u, v = rest[0]
            rest = rest[1:]
            d = d @ _reflection(_vec_sub(u, v), form)
            plus_mid = [_vec_add(u, v)]
            minus_mid = [_vec_sub(u, v)]
    elif has_middle:
        plus_mid = [middle]

    plus_space = (
        [u for u, _ in rest] + plus_mid + [v for _, v in reversed(rest)]
    )
    minus_space = (
        [u for u, _ in minus_pairs]
        + minus_mid
        + [v for _, v in reversed(minus_pairs)]
    )
    _check_split_basis(plus_space, form, skew=False) if plus_space else None
    _check_split_basis(minus_space, form, skew=False) if minus_space else None
    if d @ d != Mat.identity(d.rows):
        raise ValueError("involution construction failed")
    return d, plus_space, minus_space


def sp_split_involution(space, form, q):
    """Same as so_split_involution but for a symplectic block; q must be even."""
    m = len(space)
    if q % 2 or not 0 < q < m:
        raise ValueError("symplectic flip needs even 0 < q < dim")
    _check_split_basis(space, form, skew=True)
    npairs = m // 2
    pairs = [(space[i], space[m - 1 - i]) for i in range(npairs)]
    full = q // 2
    d = Mat.identity(len(space[0]))
    for u, v in pairs[:full]:
        d = d @ _pair_flip_skew(u, v, form)
    rest = pairs[full:]
    plus_space = [u for u, _ in rest] + [v for _, v in reversed(rest)]
    minus_space = [u for u, _ in pairs[:full]] + [
        v for _, v in reversed(pairs[:full])
    ]
    if d @ d != Mat.identity(d.rows):
        raise ValueError("involution construction failed")
    return d, plus_space, minus_space


# ---------------------------------------------------------------------------
# chain steps: an involution of the current (simple) algebra plus the data of
# its fixed subalgebra


def _conjugation(d):
    dinv = d.inverse()
    return lambda x: d @ x @ dinv


def _neg_transpose(form):
    finv = form.inverse()
    return lambda x: (finv @ x.transpose() @ form).scale(-1)


def _chain_step(factors, desc):
    """Involution of the algebra described by ``factors`` whose fixed part is
    ``desc``.  Returns (sigma_fn, g0_factors, g0_rank)."""
    if len(factors) != 1:
        raise ValueError("chain steps need a single simple factor")
    factor = factors[0]
    parts = [p.strip() for p in desc.split("+")]

    if factor.kind == "sl":
        n = len(factor.space)
        if factor.space != _std_basis_vectors(len(factor.space[0])):
            raise ValueError("sl steps are only supported on the defining block")
        if len(parts) == 1 and parts[0] == f"so{n}":
            form = antidiag_sym_form(n)
            g0f = [Factor("so", _std_basis_vectors(n), form)] if n >= 3 else []
            return _neg_transpose(form), g0f, n // 2
        if len(parts) == 1 and parts[0] == f"sp{n}":
            form = antidiag_skew_form(n)
            return _neg_transpose(form), [Factor("sp", _std_basis_vectors(n), form)], n // 2
        if len(parts) == 2 and all(p.startswith("gl") for p in parts):
            p, q = (int(s[2:]) for s in parts)
            if p + q != n:
                raise ValueError("gl block sizes must sum to n")
            d = Mat(
                [
                    [
                        (1 if i < p else -1) if i == j else 0
                        for j in range(n)
                    ]
                    for i in range(n)
                ]
            )
            g0f = []
            if p >= 2:
                g0f.append(Factor("sl", _std_basis_vectors(n, range(p))))
            if q >= 2:
                g0f.append(Factor("sl", _std_basis_vectors(n, range(p, n))))
            return _conjugation(d), g0f, p + q - 1
        raise ValueError(f"unsupported subalgebra {desc!r} of sl{n}")

    if factor.kind == "so":
        m = len(factor.space)
        sizes = []
        for s in parts:
            fam, k = _parse_simple(s)
            if fam != "so":
                raise ValueError("so factors only split into so blocks")
            sizes.append(k)
        if len(sizes) == 1:
            sizes.append(m - sizes[0])
        if len(sizes) != 2 or sum(sizes) != m:
            raise ValueError("so split sizes must sum to the block size")
        p, q = max(sizes), min(sizes)
        d, plus, minus = so_split_involution(factor.space, factor.form, q)
        g0f = []
        if len(plus) >= 3:
            g0f.append(Factor("so", plus, factor.form))
        if len(minus) >= 3:
            g0f.append(Factor("so", minus, factor.form))
        return _conjugation(d), g0f, p // 2 + q // 2

    if factor.kind == "sp":
        m = len(factor.space)
        sizes = []
        for s in parts:
            fam, k = _parse_simple(s)
            if fam != "sp":
                raise ValueError("sp factors only split into sp blocks")
            sizes.append(k)
        if len(sizes) == 1:
            sizes.append(m - sizes[0])
        if sum(sizes) != m:
            raise ValueError("sp split sizes must sum to the block size")
        p, q = max(sizes), min(sizes)
        d, plus, minus = sp_split_involution(factor.space, factor.form, q)
        g0f = [Factor("sp", plus, factor.form), Factor("sp", minus, factor.form)]
        return _conjugation(d), g0f, (p + q) // 2

    raise ValueError(f"no chain step for factor kind {factor.kind}")


# ---------------------------------------------------------------------------
# symmetric pairs


@dataclass
class SymmetricPair:
    """A Z2-graded algebra in an adapted basis; first n0 coordinates are the
    fixed subalgebra."""

    key: str
    family: str
    params: tuple
    g: Algebra
    n0: int
    g0: Algebra
    inner: bool

    @property
    def dim(self):
        return self.g.dim

    @property
    def n1(self):
        return self.g.dim - self.n0

    @property
    def rank(self):
        return self.g.rank

    @property
    def rank0(self):
        return self.g0.rank

    @property
    def labels(self):
        return self.g.labels

    @property
    def sigma_signs(self):
        return [1] * self.n0 + [-1] * self.n1

    @property
    def trdeg_z(self):
        total = self.n1 + self.rank + self.rank0
        if total % 2:
            raise ValueError("transcendence degree formula is not an integer")
        return total // 2

    @property
    def is_sl2_special(self):
        return self.dim == 3 and self.n0 == 1

    @property
    def g0_indices(self):
        return list(range(self.n0))

    @property
    def g1_indices(self):
        return list(range(self.n0, self.dim))

    def random_point(self, rng, height=97):
        return tuple(Fraction(rng.randint(-height, height)) for _ in range(self.dim))

    def random_g0_point(self, rng, height=97):
        return tuple(
            Fraction(rng.randint(-height, height)) if i < self.n0 else Fraction(0)
            for i in range(self.dim)
        )

    def verify(self):
        self.g.verify()
        # grading from structure constants
        signs = self.sigma_signs
        for (i, j), ent in self.g.table.items():
            expect = signs[i] * signs[j]
            for k in ent:
                if signs[k] != expect:
                    raise ValueError(f"grading violated at [{i},{j}] -> {k}")
        # trace form pairs the two eigenspaces to zero
        for i in range(self.n0):
            for j in range(self.n0, self.dim):
                if self.g.gram[i, j] != 0:
                    raise ValueError("eigenspaces are not orthogonal")
        if self.n0 + self.n1 != self.dim:
            raise ValueError("dimension mismatch")
        return True


def _subalgebra_prefix(alg, k, name, factors, rank):
    table = {}
    for (i, j), ent in alg.table.items():
        if i < k and j < k:
            if any(m >= k for m in ent):
                raise ValueError("prefix is not a subalgebra")
            table[(i, j)] = dict(ent)
    return Algebra(
        name,
        alg.labels[:k],
        table,
        alg.gram.submatrix(range(k), range(k)),
        rank,
        alg.rep_dim,
        alg.basis_mats[:k],
        factors,
    )


def _eigensplit(mat):
    """Bases of the +1 and -1 eigenspaces of an involutive matrix."""
    n = mat.rows
    ident = Mat.identity(n)
    if mat @ mat != ident:
        raise ValueError("not an involution")
    _, plus = rank_kernel(mat - ident)
    _, minus = rank_kernel(mat + ident)
    if len(plus) + len(minus) != n:
        raise ValueError("eigensplit failed")
    return plus, minus


def build_chain_pairs(descriptors, family="CHAIN", params=()):
    """Build the nested symmetric pairs of a chain of subalgebras.

    descriptors: like ["so5", "so4", "so2+so2"].  The result is a list of
    SymmetricPair objects, one per consecutive inclusion, all expressed in a
    single adapted coordinate system of the top algebra: the level-k fixed
    subalgebra is spanned by a prefix of the basis.
    """
    if len(descriptors) < 2:
        raise ValueError("a chain needs at least two levels")
    top = build_algebra(descriptors[0])
    sigma_fns = []
    factor_lists = [top.factors]
    ranks = [top.rank]
    cur_factors = top.factors
    for desc in descriptors[1:]:
        fn, g0f, g0rank = _chain_step(cur_factors, desc)
        sigma_fns.append(fn)
        factor_lists.append(g0f)
        ranks.append(g0rank)
        cur_factors = g0f

    solver = top.solver()
    dim = top.dim
    sig_mats = []
    for fn in sigma_fns:
        cols = [solver.coords(_flatten(fn(m))) for m in top.basis_mats]
        sig_mats.append(Mat.from_cols(cols))

    current = [tuple(v) for v in Mat.identity(dim).data]
    minus_blocks = []
    prefix_sizes = [dim]
    for sg in sig_mats:
        sub = SpanSolver(current)
        img_cols = [sub.coords(sg.mul_vec(v)) for v in current]
        plus_c, minus_c = _eigensplit(Mat.from_cols(img_cols))

        def to_ambient(coords):
            out = [Fraction(0)] * dim
            for c, vec in zip(coords, current):
                if c:
                    for a in range(dim):
                        out[a] += c * vec[a]
            return tuple(out)

        minus_blocks.append(vectors_rref_basis([to_ambient(c) for c in minus_c]))
        current = vectors_rref_basis([to_ambient(c) for c in plus_c])
        prefix_sizes.append(len(current))

    ordered = list(current)
    for block in reversed(minus_blocks):
        ordered.extend(block)
    if len(ordered) != dim:
        raise ValueError("adapted basis construction failed")

    new_mats = []
    for v in ordered:
        m = Mat.zeros(top.rep_dim, top.rep_dim)
        for c, bm in zip(v, top.basis_mats):
            if c:
                m = m + bm.scale(c)
        new_mats.append(m)

    labels = [f"x{idx + 1}" for idx in range(dim)]
    top_adapted = algebra_from_matrices(
        descriptors[0], new_mats, labels, factor_lists[0], ranks[0]
    )

    algs = [top_adapted]
    for lvl in range(1, len(descriptors)):
        algs.append(
            _subalgebra_prefix(
                top_adapted,
                prefix_sizes[lvl],
                descriptors[lvl],
                factor_lists[lvl],
                ranks[lvl],
            )
        )

    pairs = []
    for lvl in range(len(descriptors) - 1):
        g = algs[lvl]
        g0 = algs[lvl + 1]
        # relabel: a* for the fixed block, b* for the rest, per level
        n0 = g0.dim
        glabels = [
            (f"a{i+1}" if i < n0 else f"b{i-n0+1}") for i in range(g.dim)
        ]
        g = Algebra(
            g.name, glabels, g.table, g.gram, g.rank, g.rep_dim, g.basis_mats, g.factors
        )
        pair = SymmetricPair(
            key=f"{family}:{descriptors[lvl]}>{descriptors[lvl+1]}",
            family=family,
            params=params,
            g=g,
            n0=n0,
            g0=algs[lvl + 1],
            inner=(algs[lvl + 1].rank == g.rank),
        )
        pair.verify()
        pairs.append(pair)

    bottom = algs[-1]
    if bottom.table:
        raise ValueError("chain must end in an abelian algebra")
    return pairs


# ---------------------------------------------------------------------------
# the pair registry


@dataclass(frozen=True)
class PairSpec:
    family: str
    params: tuple

    @property
    def key(self):
        if self.family == "DBL":
            return f"DBL:{self.params[0]}{self.params[1]}"
        return f"{self.family}:{','.join(str(p) for p in self.params)}"


def parse_pair_key(key):
    try:
        fam, _, rest = key.partition(":")
        fam = fam.strip()
        if fam == "AI":
            n = int(rest)
            if n < 2:
                raise ValueError
            return PairSpec("AI", (n,))
        if fam == "AII":
            n = int(rest)
            if n < 2:
                raise ValueError
            return PairSpec("AII", (n,))
        if fam in ("AIII", "BDI", "CII"):
            p, q = (int(s) for s in rest.split(","))
            if p < q:
                p, q = q, p
            if q < 1 or p < 1:
                raise ValueError
            if fam == "BDI" and p + q < 3:
                raise ValueError
            return PairSpec(fam, (p, q))
        if fam == "DBL":
            hfam, n = _parse_simple(rest)
            return PairSpec("DBL", (hfam, n))
    except (ValueError, TypeError):
        pass
    raise KeyError(f"unknown pair key {key!r}")


DEFAULT_PAIRS = [
    "AI:2",
    "AI:3",
    "AI:4",
    "AII:2",
    "AIII:1,1",
    "AIII:1,2",
    "AIII:1,3",
    "AIII:2,2",
    "BDI:2,1",
    "BDI:2,2",
    "BDI:3,1",
    "BDI:3,2",
    "BDI:4,1",
    "BDI:3,3",
    "BDI:4,2",
    "BDI:5,1",
    "CII:1,1",
    "DBL:sl2",
    "DBL:so3",
]


def build_symmetric_pair(spec):
    """Construct and verify a symmetric pair from a PairSpec or key string."""
    if isinstance(spec, str):
        spec = parse_pair_key(spec)
    fam, params = spec.family, spec.params

    if fam == "DBL":
        return _build_double_pair(spec)

    if fam == "AI":
        (n,) = params
        descs = [f"sl{n}", f"so{n}"]
    elif fam == "AII":
        (n,) = params
        descs = [f"sl{2*n}", f"sp{2*n}"]
    elif fam == "AIII":
        p, q = params
        descs = [f"sl{p+q}", f"gl{p}+gl{q}"]
    elif fam == "BDI":
        p, q = params
        descs = [f"so{p+q}", f"so{p}+so{q}"]
    elif fam == "CII":
        p, q = params
        descs = [f"sp{2*(p+q)}", f"sp{2*p}+sp{2*q}"]
    else:
        raise KeyError(f"unsupported family {fam}")

    top = build_algebra(descs[0])
    fn, g0_factors, g0_rank = _chain_step(top.factors, descs[1])
    return _adapt_pair(spec, top, fn, g0_factors, g0_rank, descs[1])


def _adapt_pair(spec, top, sigma_fn, g0_factors, g0_rank, g0_name):
    solver = top.solver()
    cols = [solver.coords(_flatten(sigma_fn(m))) for m in top.basis_mats]
    sg = Mat.from_cols(cols)
    plus, minus = _eigensplit(sg)
    plus = vectors_rref_basis(plus)
    minus = vectors_rref_basis(minus)
    ordered = plus + minus
    n0 = len(plus)
    new_mats = []
    for v in ordered:
        m = Mat.zeros(top.rep_dim, top.rep_dim)
        for c, bm in zip(v, top.basis_mats):
            if c:
                m = m + bm.scale(c)
        new_mats.append(m)
    labels = [f"a{i+1}" for i in range(n0)] + [
        f"b{i+1}" for i in range(top.dim - n0)
    ]
    g = algebra_from_matrices(top.name, new_mats, labels, top.factors, top.rank)
    g0 = _subalgebra_prefix(g, n0, g0_name, g0_factors, g0_rank)
    pair = SymmetricPair(
        key=spec.key,
        family=spec.family,
        params=spec.params,
        g=g,
        n0=n0,
        g0=g0,
        inner=(g0_rank == top.rank),
    )
    pair.verify()
    return pair


def _build_double_pair(spec):
    hfam, n = spec.params
    hkey = f"{hfam}{n}"
    single = build_algebra(hkey)
    rep = single.rep_dim
    top = build_algebra(f"{hkey}+{hkey}")
    total = 2 * rep
    swap = Mat.zeros(total, total)
    for i in range(rep):
        swap.data[i][rep + i] = Fraction(1)
        swap.data[rep + i][i] = Fraction(1)
    sigma_fn = _conjugation(swap)
    # the fixed (diagonal) copy restricts faithfully to the first block
    if hfam == "sl":
        g0_factors = [Factor("sl", _std_basis_vectors(total, range(rep)))]
    else:
        form = (
            antidiag_sym_form(rep) if hfam == "so" else antidiag_skew_form(rep)
        )
        g0_factors = (
            [Factor(hfam, _std_basis_vectors(total, range(rep)), _embed_form(form, 0, total))]
            if (hfam != "so" or rep >= 3)
            else []
        )
    return _adapt_pair(spec, top, sigma_fn, g0_factors, single.rank, hkey)


# ---------------------------------------------------------------------------
# sampled quantities


def random_vector(rng, n, height=97):
    return tuple(Fraction(rng.randint(-height, height)) for _ in range(n))


def centralizer(alg: Algebra, x):
    """Exact centralizer of x with a regular/subregular classification tag."""
    ad = alg.ad(x)
    _, kernel = rank_kernel(ad)
    d = len(kernel)
    if d == alg.rank:
        tag = "regular"
    elif d == alg.rank + 2:
        tag = "subregular"
    else:
        tag = "other"
    return d, kernel, tag


def sampled_index(table, dim, trials=5, seed=0, height=97):
    """Minimum kernel dimension of the Poisson tensor over sampled points."""
    rng = random.Random(seed)
    best = dim
    for _ in range(max(1, trials)):
        xi = random_vector(rng, dim, height)
        m = table_tensor(table, dim, xi)
        r, _ = rank_kernel(m)
        best = min(best, dim - r)
    return best


def sampled_algebra_index(alg: Algebra, trials=5, seed=0, height=97):
    return sampled_index(alg.table, alg.dim, trials, seed, height)
