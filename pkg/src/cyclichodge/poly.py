"""Sparse multivariate polynomials over Q in the doubled variable family T[n,i].

A variable is a pair (n, i): n >= 0 is the arrow level, i >= 1 the slot.
Level-0 variables T[0,i] are the plain couplings; levels n >= 1 appear at
most to low total degree in everything this package produces, so a
monomial is simply the sorted tuple of its variable pairs (with
repetition) and a polynomial is a dict monomial -> Fraction.
"""

from __future__ import annotations

import json
import re
from fractions import Fraction

_RATIONAL_RE = re.compile(r"^[+-]?\d+(/[1-9]\d*)?$")


def parse_rational(s):
    """Parse 'p' or 'p/q' (q > 0) into a Fraction; reject anything else."""
    if isinstance(s, int):
        return Fraction(s)
    if not isinstance(s, str) or not _RATIONAL_RE.match(s.strip()):
        raise ValueError(f"not a rational literal: {s!r}")
    return Fraction(s.strip())


def format_rational(x):
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _check_var(var):
    n, i = var
    if not (isinstance(n, int) and isinstance(i, int) and n >= 0 and i >= 1):
        raise ValueError(f"bad variable {var!r}: need level >= 0, slot >= 1")
    return (n, i)


def _normalize_mono(mono):
    return tuple(sorted(_check_var(v) for v in mono))


class Poly:
    """Immutable-by-convention sparse polynomial with exact coefficients."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        clean = {}
        if terms:
            for mono, coeff in terms.items():
                c = Fraction(coeff)
                if c != 0:
                    clean[_normalize_mono(mono)] = c
        self.terms = clean

    # -- constructors -------------------------------------------------

    @classmethod
    def zero(cls):
        return cls()

    @classmethod
    def const(cls, c):
        return cls({(): Fraction(c)})

    @classmethod
    def var(cls, n, i):
        return cls({((n, i),): Fraction(1)})

    @classmethod
    def monomial(cls, vars_, coeff=1):
        return cls({tuple(vars_): Fraction(coeff)})

    # -- ring structure -----------------------------------------------

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self):
        return not self.terms

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self == Poly.const(other)
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Poly.const(other)
        if not isinstance(other, Poly):
            return NotImplemented
        out = dict(self.terms)
        for mono, c in other.terms.items():
            out[mono] = out.get(mono, Fraction(0)) + c
        return Poly(out)

    __radd__ = __add__

    def __neg__(self):
        return Poly({m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Poly.const(other)
        if not isinstance(other, Poly):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            c = Fraction(other)
            if c == 0:
                return Poly()
            return Poly({m: c * v for m, v in self.terms.items()})
        if not isinstance(other, Poly):
            return NotImplemented
        out = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = tuple(sorted(m1 + m2))
                out[m] = out.get(m, Fraction(0)) + c1 * c2
        return Poly(out)

    __rmul__ = __mul__

    # -- calculus and slicing -------------------------------------------

    def partial(self, var):
        """Exact partial derivative with respect to T[var]."""
        var = _check_var(tuple(var))
        out = {}
        for mono, c in self.terms.items():
            k = mono.count(var)
            if k == 0:
                continue
            rest = list(mono)
            rest.remove(var)
            m = tuple(rest)
            out[m] = out.get(m, Fraction(0)) + k * c
        return Poly(out)

    def coefficient(self, mono):
        return self.terms.get(_normalize_mono(mono), Fraction(0))

    def constant_term(self):
        return self.terms.get((), Fraction(0))

    def degree(self):
        return max((len(m) for m in self.terms), default=0)

    def arrow_degree(self):
        """Largest number of level >= 1 factors in any monomial."""
        return max((sum(1 for n, _ in m if n >= 1) for m in self.terms), default=0)

    def max_level(self):
        return max((n for m in self.terms for n, _ in m), default=0)

    def truncate(self, total_degree=None, arrow_degree=None, max_level=None):
        """Drop monomials exceeding the given bounds (None = no bound)."""
        out = {}
        for mono, c in self.terms.items():
            if total_degree is not None and len(mono) > total_degree:
                continue
            if arrow_degree is not None and sum(1 for n, _ in mono if n >= 1) > arrow_degree:
                continue
            if max_level is not None and any(n > max_level for n, _ in mono):
                continue
            out[mono] = c
        return Poly(out)

    def arrow_part(self, k):
        """Sub-sum of monomials with exactly k factors of level >= 1."""
        return Poly({m: c for m, c in self.terms.items()
                     if sum(1 for n, _ in m if n >= 1) == k})

    def level_zero_degree_part(self, k):
        """Sub-sum of monomials with exactly k level-0 factors."""
        return Poly({m: c for m, c in self.terms.items()
                     if sum(1 for n, _ in m if n == 0) == k})

    def substitute_zero(self, pred):
        """Kill every monomial containing a variable for which pred(n, i)."""
        return Poly({m: c for m, c in self.terms.items()
                     if not any(pred(n, i) for n, i in m)})

    def items(self):
        return self.terms.items()

    def leading_witness(self):
        """(monomial, coefficient) of the lexicographically first term, or None."""
        if not self.terms:
            return None
        mono = min(self.terms)
        return mono, self.terms[mono]

    # -- serialization --------------------------------------------------

    def to_text(self):
        if not self.terms:
            return "0"
        parts = []
        for mono in sorted(self.terms):
            c = self.terms[mono]
            factors = []
            seen = {}
            for v in mono:
                seen[v] = seen.get(v, 0) + 1
            for (n, i), k in sorted(seen.items()):
                tok = f"T_{{{n},{i}}}"
                factors.append(tok if k == 1 else f"{tok}^{k}")
            body = "*".join(factors)
            ac = format_rational(abs(c))
            if not body:
                piece = ac
            elif ac == "1":
                piece = body
            else:
                piece = f"{ac}*{body}"
            if not parts:
                parts.append(piece if c > 0 else f"-{piece}")
            else:
                parts.append(f"+ {piece}" if c > 0 else f"- {piece}")
        return " ".join(parts)

    def to_json_obj(self):
        terms = []
        for mono in sorted(self.terms):
            terms.append({"vars": [[n, i] for n, i in mono],
                          "coeff": format_rational(self.terms[mono])})
        return {"terms": terms}

    def to_json(self):
        return json.dumps(self.to_json_obj())

    @classmethod
    def from_json_obj(cls, obj):
        if not isinstance(obj, dict) or "terms" not in obj:
            raise ValueError("polynomial JSON must be an object with a 'terms' list")
        out = {}
        for t in obj["terms"]:
            mono = _normalize_mono(tuple((int(n), int(i)) for n, i in t["vars"]))
            out[mono] = out.get(mono, Fraction(0)) + parse_rational(t["coeff"])
        return cls(out)

    @classmethod
    def from_json(cls, s):
        return cls.from_json_obj(json.loads(s))

    def __repr__(self):
        return f"Poly({self.to_text()})"
