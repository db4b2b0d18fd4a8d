"""Sparse multivariate polynomials over exact rationals.

A polynomial lives in the coordinate ring of the dual space of a Lie algebra:
variable i is the i-th basis vector of the algebra, viewed as a linear
function on the dual.  The bi-degree structure refers to a split of the
variables into a leading block (the fixed-point subalgebra) and a trailing
block.
"""
from __future__ import annotations

from fractions import Fraction

from .exactalg import rat


class Poly:
    """Sparse polynomial: dict from exponent tuples to nonzero Fractions."""

    __slots__ = ("n", "terms")

    def __init__(self, n, terms=None):
        self.n = n
        self.terms = {}
        if terms:
            for exps, c in terms.items():
                c = rat(c)
                if c:
                    if len(exps) != n:
                        raise ValueError("exponent tuple has wrong length")
                    self.terms[tuple(exps)] = c

    @classmethod
    def zero(cls, n):
        return cls(n)

    @classmethod
    def const(cls, n, c):
        return cls(n, {tuple([0] * n): rat(c)})

    @classmethod
    def variable(cls, n, i, c=1):
        e = [0] * n
        e[i] = 1
        return cls(n, {tuple(e): rat(c)})

    @classmethod
    def from_vector(cls, coeffs):
        """Linear polynomial sum_i coeffs[i] * x_i."""
        n = len(coeffs)
        p = cls(n)
        for i, c in enumerate(coeffs):
            c = rat(c)
            if c:
                e = [0] * n
                e[i] = 1
                p.terms[tuple(e)] = c
        return p

    def is_zero(self):
        return not self.terms

    def __eq__(self, other):
        return isinstance(other, Poly) and self.n == other.n and self.terms == other.terms

    def __hash__(self):
        return hash((self.n, frozenset(self.terms.items())))

    def _check(self, other):
        if self.n != other.n:
            raise ValueError("ambient dimension mismatch")

    def __add__(self, other):
        if not isinstance(other, Poly):
            other = Poly.const(self.n, other)
        self._check(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            s = out.get(e, Fraction(0)) + c
            if s:
                out[e] = s
            else:
                out.pop(e, None)
        p = Poly(self.n)
        p.terms = out
        return p

    def __neg__(self):
        p = Poly(self.n)
        p.terms = {e: -c for e, c in self.terms.items()}
        return p

    def __sub__(self, other):
        if not isinstance(other, Poly):
            other = Poly.const(self.n, other)
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, Poly):
            return self.scale(other)
        self._check(other)
        out = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                s = out.get(e, Fraction(0)) + c1 * c2
                if s:
                    out[e] = s
                else:
                    out.pop(e, None)
        p = Poly(self.n)
        p.terms = out
        return p

    __rmul__ = __mul__

    def scale(self, c):
        c = rat(c)
        p = Poly(self.n)
        if c:
            p.terms = {e: c * v for e, v in self.terms.items()}
        return p

    def __pow__(self, k):
        out = Poly.const(self.n, 1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base if k > 1 else base
            k >>= 1
        return out

    def partial(self, i):
        """Partial derivative with respect to variable i."""
        out = {}
        for e, c in self.terms.items():
            if e[i]:
                e2 = list(e)
                e2[i] -= 1
                out[tuple(e2)] = c * e[i]
        p = Poly(self.n)
        p.terms = out
        return p

    def directional(self, gamma):
        """Directional derivative sum_i gamma_i dF/dx_i."""
        out = Poly.zero(self.n)
        for i, gi in enumerate(gamma):
            gi = rat(gi)
            if gi:
                out = out + self.partial(i).scale(gi)
        return out

    def degree(self):
        return max((sum(e) for e in self.terms), default=0)

    def is_homogeneous(self):
        degs = {sum(e) for e in self.terms}
        return len(degs) <= 1

    def evaluate(self, point):
        total = Fraction(0)
        for e, c in self.terms.items():
            v = c
            for i, k in enumerate(e):
                if k:
                    v *= rat(point[i]) ** k
            total += v
        return total

    def gradient(self, point):
        return tuple(self.partial(i).evaluate(point) for i in range(self.n))

    def g0_degree(self, n0):
        """Maximal degree in the first n0 variables over all monomials."""
        return max((sum(e[:n0]) for e in self.terms), default=0)

    def g1_degree(self, n0):
        """Maximal degree in the trailing variables over all monomials."""
        return max((sum(e[n0:]) for e in self.terms), default=0)

    def g1_layer(self, n0, d1):
        """Sum of the monomials whose trailing-block degree equals d1."""
        p = Poly(self.n)
        p.terms = {e: c for e, c in self.terms.items() if sum(e[n0:]) == d1}
        return p

    def sigma_image(self, n0):
        """Apply the involution: multiply each monomial by (-1)^(g1-degree)."""
        p = Poly(self.n)
        p.terms = {e: (c if sum(e[n0:]) % 2 == 0 else -c) for e, c in self.terms.items()}
        return p

    def phi_s(self, n0, s):
        """Scale each monomial by s^(g1-degree); s must be nonzero."""
        s = rat(s)
        if not s:
            raise ValueError("phi_s needs s != 0")
        p = Poly(self.n)
        p.terms = {e: c * s ** sum(e[n0:]) for e, c in self.terms.items()}
        return p

    def embed(self, n):
        """View a polynomial in the first variables of a larger ring."""
        if n < self.n:
            raise ValueError("cannot embed into a smaller ring")
        pad = (0,) * (n - self.n)
        p = Poly(n)
        p.terms = {e + pad: c for e, c in self.terms.items()}
        return p

    def text(self, labels=None):
        """Canonical text form: monomials sorted by (degree, exponents)."""
        if self.is_zero():
            return "0"
        labels = labels or [f"x{i+1}" for i in range(self.n)]
        parts = []
        for e in sorted(self.terms, key=lambda e: (sum(e), tuple(-x for x in e))):
            c = self.terms[e]
            mono = "*".join(
                labels[i] + (f"^{k}" if k > 1 else "")
                for i, k in enumerate(e)
                if k
            )
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append(f"-{mono}")
            else:
                parts.append(f"{c}*{mono}")
        out = " + ".join(parts)
        return out.replace("+ -", "- ")

    def __repr__(self):
        return f"Poly({self.text()})"


def bihom_decompose(f: Poly, n0: int):
    """Split into bi-homogeneous components keyed by (g0-degree, g1-degree)."""
    comps = {}
    for e, c in f.terms.items():
        key = (sum(e[:n0]), sum(e[n0:]))
        comps.setdefault(key, {})[e] = c
    out = {}
    for key, terms in comps.items():
        p = Poly(f.n)
        p.terms = terms
        out[key] = p
    return out


def bihom_component(f: Poly, n0: int, d0: int, d1: int):
    p = Poly(f.n)
    p.terms = {
        e: c for e, c in f.terms.items() if sum(e[:n0]) == d0 and sum(e[n0:]) == d1
    }
    return p


def evaluate_and_differential(f: Poly, point):
    """Value and exact gradient vector of f at the point."""
    return f.evaluate(point), f.gradient(point)


def restrict(f: Poly, n0: int, mode: str, eta=None):
    """Restriction maps induced by the split of variables.

    mode 'r0': set the trailing variables to 0, land in the ring on the first
    n0 variables.  mode 'r1': set the leading variables to 0, land in the
    ring on the trailing ones.  mode 'affine': substitute the trailing
    variables by the constants eta, land in the ring on the first n0.
    """
    n1 = f.n - n0
    if mode == "r0":
        out = Poly(n0)
        for e, c in f.terms.items():
            if sum(e[n0:]) == 0:
                key = e[:n0]
                out.terms[key] = out.terms.get(key, Fraction(0)) + c
        out.terms = {e: c for e, c in out.terms.items() if c}
        return out
    if mode == "r1":
        out = Poly(n1)
        for e, c in f.terms.items():
            if sum(e[:n0]) == 0:
                key = e[n0:]
                out.terms[key] = out.terms.get(key, Fraction(0)) + c
        out.terms = {e: c for e, c in out.terms.items() if c}
        return out
    if mode == "affine":
        if eta is None or len(eta) != n1:
            raise ValueError("affine restriction needs eta of length n - n0")
        out = Poly(n0)
        for e, c in f.terms.items():
            v = c
            for i, k in enumerate(e[n0:]):
                if k:
                    v *= rat(eta[i]) ** k
            if v:
                key = e[:n0]
                s = out.terms.get(key, Fraction(0)) + v
                if s:
                    out.terms[key] = s
                else:
                    out.terms.pop(key, None)
        return out
    raise ValueError(f"unknown restriction mode {mode!r}")


def jacobian_at(polys, point):
    """Rows = gradients of the polynomials at the point."""
    return [p.gradient(point) for p in polys]
