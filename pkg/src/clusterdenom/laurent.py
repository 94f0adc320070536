"""Exact integer-coefficient Laurent polynomials in n variables.

Ground truth for cluster variables: terms are kept in a dict from exponent
tuples (entries may be negative) to nonzero int coefficients, so equality of
values is equality of dicts.  The zero polynomial is the empty dict.

The one operation with real content is div_exact: during finite-type
exploration every exchange-relation division is exact, so an inexact
division here is an engine bug, not a mathematical event.
"""

from __future__ import annotations

__all__ = [
    "DimensionMismatchError",
    "InexactDivisionError",
    "LaurentPolynomial",
    "exchange_step",
]


class DimensionMismatchError(ValueError):
    pass


class InexactDivisionError(ArithmeticError):
    pass


class LaurentPolynomial:
    """Immutable sparse Laurent polynomial over the integers."""

    __slots__ = ("n", "terms", "_key")

    def __init__(self, n, terms):
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "terms", {e: c for e, c in terms.items() if c})
        object.__setattr__(self, "_key", None)

    def __setattr__(self, name, value):
        raise AttributeError("LaurentPolynomial is immutable")

    # constructors -------------------------------------------------------

    @classmethod
    def zero(cls, n):
        return cls(n, {})

    @classmethod
    def one(cls, n):
        return cls(n, {(0,) * n: 1})

    @classmethod
    def variable(cls, i, n):
        if not 0 <= i < n:
            raise IndexError(f"variable index {i} out of range for {n} variables")
        e = tuple(1 if j == i else 0 for j in range(n))
        return cls(n, {e: 1})

    @classmethod
    def monomial(cls, exponents, coefficient=1, n=None):
        e = tuple(int(x) for x in exponents)
        return cls(len(e) if n is None else n, {e: int(coefficient)})

    # basics --------------------------------------------------------------

    def is_zero(self):
        return not self.terms

    def is_one(self):
        return self.terms == {(0,) * self.n: 1}

    def __eq__(self, other):
        return (
            isinstance(other, LaurentPolynomial)
            and self.n == other.n
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash((self.n, self.canonical_items()))

    def canonical_items(self):
        key = object.__getattribute__(self, "_key")
        if key is None:
            key = tuple(sorted(self.terms.items()))
            object.__setattr__(self, "_key", key)
        return key

    def serialize(self):
        """Canonical text: lex-sorted terms 'coef:e1,e2,...,en' joined by ';'."""
        parts = [
            f"{c}:{','.join(map(str, e))}" for e, c in self.canonical_items()
        ]
        return ";".join(parts)

    def __repr__(self):
        s = self.serialize()
        return f"LaurentPolynomial({self.n}, {s!r})"

    def _check_same_space(self, other):
        if not isinstance(other, LaurentPolynomial):
            raise TypeError(f"expected LaurentPolynomial, got {type(other).__name__}")
        if self.n != other.n:
            raise DimensionMismatchError(f"{self.n} != {other.n} variables")

    # ring operations ------------------------------------------------------

    def __add__(self, other):
        self._check_same_space(other)
        acc = dict(self.terms)
        for e, c in other.terms.items():
            s = acc.get(e, 0) + c
            if s:
                acc[e] = s
            else:
                acc.pop(e, None)
        return LaurentPolynomial(self.n, acc)

    def __neg__(self):
        return LaurentPolynomial(self.n, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        self._check_same_space(other)
        a, b = self.terms, other.terms
        if len(a) > len(b):
            a, b = b, a
        acc = {}
        for ea, ca in a.items():
            for eb, cb in b.items():
                e = tuple(map(sum, zip(ea, eb)))
                s = acc.get(e, 0) + ca * cb
                if s:
                    acc[e] = s
                else:
                    del acc[e]
        return LaurentPolynomial(self.n, acc)

    add = __add__
    mul = __mul__

    def pow(self, k):
        if k < 0:
            raise ValueError("negative powers are not defined for polynomials")
        out = LaurentPolynomial.one(self.n)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base if k > 1 else base
            k >>= 1
        return out

    __pow__ = pow

    # division and denominators ---------------------------------------------

    def min_exponents(self):
        """Componentwise minimum exponent over all terms; zero polynomial -> None."""
        if not self.terms:
            return None
        it = iter(self.terms)
        mins = list(next(it))
        for e in it:
            for i, x in enumerate(e):
                if x < mins[i]:
                    mins[i] = x
        return tuple(mins)

    def _shifted(self, offset):
        return LaurentPolynomial(
            self.n,
            {tuple(x - o for x, o in zip(e, offset)): c for e, c in self.terms.items()},
        )

    def div_exact(self, other):
        """Exact quotient self / other; raises InexactDivisionError otherwise.

        Monomials are units of the Laurent ring, so both operands are first
        reduced to honest polynomials by factoring out their monomial
        content; the quotient of the reduced parts is then an ordinary
        polynomial whenever the Laurent quotient exists (per-variable
        grading makes minimal exponents additive).
        """
        self._check_same_space(other)
        if other.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        if self.is_zero():
            return self
        off_p = self.min_exponents()
        off_q = other.min_exponents()
        p = self._shifted(off_p).terms
        q = other._shifted(off_q).terms
        q_items = sorted(q.items(), reverse=True)
        lt_e, lt_c = q_items[0]
        rem = dict(p)
        quo = {}
        n = self.n
        while rem:
            re = max(rem)
            rc = rem[re]
            t = tuple(a - b for a, b in zip(re, lt_e))
            if any(x < 0 for x in t) or rc % lt_c != 0:
                raise InexactDivisionError("inexact Laurent division")
            tc = rc // lt_c
            quo[t] = tc
            for qe, qc in q_items:
                e = tuple(map(sum, zip(t, qe)))
                s = rem.get(e, 0) - tc * qc
                if s:
                    rem[e] = s
                else:
                    rem.pop(e, None)
        shift = tuple(a - b for a, b in zip(off_p, off_q))
        return LaurentPolynomial(n, quo)._shifted(tuple(-x for x in shift))

    def denom_vector(self):
        """d_i = -(minimum exponent of x_i over the terms); error on zero."""
        mins = self.min_exponents()
        if mins is None:
            raise ValueError("the zero polynomial has no denominator vector")
        return tuple(-m for m in mins)

    def has_positive_coefficients(self):
        return all(c > 0 for c in self.terms.values())


def exchange_step(cluster, matrix, k):
    """One exchange relation: x_k * x_k' = prod x_j^[b_jk]+ + prod x_j^[-b_jk]+.

    `cluster` is the list of current cluster variables as Laurent polynomials
    in the initial variables; the division by x_k is exact by the Laurent
    phenomenon, and a failure signals an engine bug upstream.
    """
    n = matrix.n
    if len(cluster) != n:
        raise DimensionMismatchError("cluster size does not match matrix rank")
    if not 0 <= k < n:
        raise IndexError(f"mutation index {k} out of range")
    nvars = cluster[0].n
    pos = LaurentPolynomial.one(nvars)
    neg = LaurentPolynomial.one(nvars)
    for j in range(n):
        bjk = matrix.b[j][k]
        if bjk > 0:
            pos = pos * cluster[j].pow(bjk)
        elif bjk < 0:
            neg = neg * cluster[j].pow(-bjk)
    return (pos + neg).div_exact(cluster[k])
