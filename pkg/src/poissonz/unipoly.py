"""Univariate polynomials over the rationals as coefficient lists (low to high).

Small helper used for pencil parameters (symbolic minors in the pencil
variable) and for exact semisimplicity checks via square-free parts.
"""
from __future__ import annotations

from fractions import Fraction
from math import gcd as int_gcd

from .exactalg import rat


def trim(p):
    while p and p[-1] == 0:
        p.pop()
    return p


def make(coeffs):
    return trim([rat(c) for c in coeffs])


def degree(p):
    return len(p) - 1 if p else -1


def is_zero(p):
    return not p


def add(p, q):
    out = [Fraction(0)] * max(len(p), len(q))
    for i, c in enumerate(p):
        out[i] += c
    for i, c in enumerate(q):
        out[i] += c
    return trim(out)


def neg(p):
    return [-c for c in p]


def sub(p, q):
    return add(p, neg(q))


def scale(p, c):
    c = rat(c)
    return trim([c * x for x in p]) if c else []


def mul(p, q):
    if not p or not q:
        return []
    out = [Fraction(0)] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a:
            for j, b in enumerate(q):
                if b:
                    out[i + j] += a * b
    return trim(out)


def divmod_exact(p, q):
    """Quotient and remainder of p by q (q nonzero)."""
    if not q:
        raise ZeroDivisionError("polynomial division by zero")
    rem = list(p)
    quo = [Fraction(0)] * max(0, len(p) - len(q) + 1)
    while rem and len(rem) >= len(q):
        c = rem[-1] / q[-1]
        d = len(rem) - len(q)
        quo[d] = c
        for i, b in enumerate(q):
            rem[d + i] -= c * b
        trim(rem)
    return trim(quo), rem


def gcd(p, q):
    """Monic gcd."""
    a, b = list(p), list(q)
    while b:
        _, r = divmod_exact(a, b)
        a, b = b, r
    if not a:
        return []
    return scale(a, 1 / a[-1])


def derivative(p):
    return trim([p[i] * i for i in range(1, len(p))])


def evaluate(p, x):
    x = rat(x)
    acc = Fraction(0)
    for c in reversed(p):
        acc = acc * x + c
    return acc


def interpolate(points):
    """Lagrange interpolation through (x, y) pairs with distinct x."""
    result = []
    for i, (xi, yi) in enumerate(points):
        term = [rat(yi)]
        for j, (xj, _) in enumerate(points):
            if i == j:
                continue
            term = mul(term, [Fraction(-rat(xj)), Fraction(1)])
            term = scale(term, Fraction(1, 1) / (rat(xi) - rat(xj)))
        result = add(result, term)
    return result


def squarefree_part(p):
    if degree(p) <= 0:
        return list(p)
    g = gcd(p, derivative(p))
    q, r = divmod_exact(p, g)
    assert not r
    return q


def rational_roots(p):
    """All rational roots with multiplicities, as a dict root -> multiplicity."""
    if is_zero(p):
        raise ValueError("zero polynomial")
    # clear denominators to an integer polynomial
    den = 1
    for c in p:
        den = den * c.denominator // int_gcd(den, c.denominator)
    ints = [int(c * den) for c in p]
    while ints and ints[0] == 0:
        # factor x^k: root 0
        ints = ints[1:]
    roots = {}
    shift = len(p) - len(ints)
    if shift:
        roots[Fraction(0)] = shift
    if not ints or len(ints) == 1:
        return roots
    a0, an = abs(ints[0]), abs(ints[-1])
    cands = set()
    for num in _divisors(a0):
        for dov in _divisors(an):
            cands.add(Fraction(num, dov))
            cands.add(Fraction(-num, dov))
    cur = make(ints)
    for r in sorted(cands):
        mult = 0
        while evaluate(cur, r) == 0:
            cur, rem = divmod_exact(cur, [-r, Fraction(1)])
            assert not rem
            mult += 1
        if mult:
            roots[r] = mult
    return roots


def _divisors(n):
    n = abs(n)
    if n == 0:
        return [1]
    out = []
    d = 1
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            out.append(n // d)
        d += 1
    return sorted(set(out))


def charpoly(m):
    """Characteristic polynomial det(x*I - M) by exact interpolation."""
    n = m.rows
    pts = []
    for x in range(n + 1):
        shifted = [
            [
                (rat(x) if i == j else Fraction(0)) - m[i, j]
                for j in range(n)
            ]
            for i in range(n)
        ]
        from .exactalg import Mat

        pts.append((Fraction(x), Mat(shifted).det()))
    return interpolate(pts)


def is_semisimple_matrix(m):
    """True iff the matrix is diagonalizable over the algebraic closure,
    i.e. its minimal polynomial is square-free."""
    chi = charpoly(m)
    mu = squarefree_part(chi)
    # evaluate mu at the matrix
    from .exactalg import Mat

    n = m.rows
    acc = Mat.zeros(n, n)
    power = Mat.identity(n)
    for c in mu:
        if c:
            acc = acc + power.scale(c)
        power = power @ m
    return acc.is_zero()
