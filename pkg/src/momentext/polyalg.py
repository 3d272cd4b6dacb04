"""Exact sparse multivariate polynomials over the rationals.

A polynomial in d variables is a map from exponent vectors (length-d tuples
of nonnegative ints) to nonzero ``Fraction`` coefficients; the zero
polynomial is the empty map.  All arithmetic is exact and nothing in this
module touches floats.

Where a canonical order matters (printing, serialization, leading-term
division) terms are compared graded-lexicographically: total degree first,
ties broken lexicographically with x1 highest.  Degrees ascend in listings
and within a degree the grlex-largest monomial comes first, so a basis in
two variables reads 1, x1, x2, x1^2, x1*x2, x2^2, ...
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

from .scalars import as_fraction, format_fraction

Exponent = tuple[int, ...]


class DimensionMismatchError(ValueError):
    """Raised when operands live over different numbers of variables."""


def _check_same_nvars(p: "Poly", q: "Poly") -> None:
    if p.nvars != q.nvars:
        raise DimensionMismatchError(
            f"polynomials over {p.nvars} and {q.nvars} variables cannot be combined")


def grlex_key(exp: Exponent) -> tuple:
    """Sort key for the canonical listing: degree ascending, then grlex descending."""
    return (sum(exp), tuple(-e for e in exp))


def exponents_of_degree(nvars: int, degree: int) -> list[Exponent]:
    """All exponent vectors of the given total degree, canonically ordered."""
    if nvars <= 0:
        raise ValueError("need at least one variable")
    if degree < 0:
        return []
    if nvars == 1:
        return [(degree,)]
    out = []
    for first in range(degree, -1, -1):
        for rest in exponents_of_degree(nvars - 1, degree - first):
            out.append((first,) + rest)
    return out


def exponents_up_to_degree(nvars: int, degree: int) -> list[Exponent]:
    """All exponent vectors with total degree <= degree, canonically ordered."""
    return [e for t in range(degree + 1) for e in exponents_of_degree(nvars, t)]


@dataclass(frozen=True)
class Poly:
    """Sparse polynomial with exact rational coefficients.

    ``terms`` is canonicalized on construction: coefficients are coerced to
    Fraction, zero coefficients dropped, exponent vectors checked.  Treat
    the stored dict as immutable.
    """

    nvars: int
    terms: dict[Exponent, Fraction] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.nvars < 1:
            raise ValueError("a polynomial needs at least one variable")
        clean: dict[Exponent, Fraction] = {}
        for exp, coeff in self.terms.items():
            exp = tuple(exp)
            if len(exp) != self.nvars:
                raise DimensionMismatchError(
                    f"exponent {exp} has length {len(exp)}, expected {self.nvars}")
            if any(not isinstance(e, int) or e < 0 for e in exp):
                raise ValueError(f"exponent {exp} must consist of nonnegative ints")
            coeff = as_fraction(coeff)
            if coeff != 0:
                clean[exp] = coeff
        object.__setattr__(self, "terms", clean)

    # -- constructors ------------------------------------------------------

    @staticmethod
    def zero(nvars: int) -> "Poly":
        return Poly(nvars, {})

    @staticmethod
    def constant(nvars: int, value) -> "Poly":
        return Poly(nvars, {(0,) * nvars: as_fraction(value)})

    @staticmethod
    def variable(nvars: int, index: int) -> "Poly":
        """x_(index+1); index is 0-based."""
        if not 0 <= index < nvars:
            raise IndexError(f"variable index {index} out of range for {nvars} variables")
        exp = tuple(1 if i == index else 0 for i in range(nvars))
        return Poly(nvars, {exp: Fraction(1)})

    @staticmethod
    def monomial(nvars: int, exp: Exponent, coeff=1) -> "Poly":
        return Poly(nvars, {tuple(exp): as_fraction(coeff)})

    # -- queries -----------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def degree_range(self) -> tuple[int, int] | None:
        """(min, max) total degree over the support; None for the zero polynomial."""
        if not self.terms:
            return None
        degrees = [sum(e) for e in self.terms]
        return (min(degrees), max(degrees))

    def max_degree(self) -> int:
        rng = self.degree_range()
        return -1 if rng is None else rng[1]

    def min_degree(self) -> int:
        rng = self.degree_range()
        return -1 if rng is None else rng[0]

    def homogeneous_component(self, degree: int) -> "Poly":
        return Poly(self.nvars,
                    {e: c for e, c in self.terms.items() if sum(e) == degree})

    def coefficient(self, exp: Exponent) -> Fraction:
        return self.terms.get(tuple(exp), Fraction(0))

    def sorted_terms(self) -> list[tuple[Exponent, Fraction]]:
        return sorted(self.terms.items(), key=lambda item: grlex_key(item[0]))

    # -- evaluation --------------------------------------------------------

    def eval(self, point) -> Fraction:
        """Exact evaluation at a rational point of matching dimension."""
        pt = [as_fraction(c) for c in point]
        if len(pt) != self.nvars:
            raise DimensionMismatchError(
                f"point of dimension {len(pt)} fed to polynomial in {self.nvars} variables")
        total = Fraction(0)
        for exp, coeff in self.terms.items():
            value = coeff
            for base, power in zip(pt, exp):
                if power:
                    value *= base ** power
            total += value
        return total

    __call__ = eval

    # -- arithmetic --------------------------------------------------------

    def __add__(self, other) -> "Poly":
        other = _coerce_poly(other, self.nvars)
        if other is None:
            return NotImplemented
        _check_same_nvars(self, other)
        terms = dict(self.terms)
        for exp, coeff in other.terms.items():
            terms[exp] = terms.get(exp, Fraction(0)) + coeff
        return Poly(self.nvars, terms)

    __radd__ = __add__

    def __sub__(self, other) -> "Poly":
        other = _coerce_poly(other, self.nvars)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "Poly":
        other = _coerce_poly(other, self.nvars)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __neg__(self) -> "Poly":
        return Poly(self.nvars, {e: -c for e, c in self.terms.items()})

    def __mul__(self, other) -> "Poly":
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            scalar = Fraction(other)
            return Poly(self.nvars, {e: c * scalar for e, c in self.terms.items()})
        if not isinstance(other, Poly):
            return NotImplemented
        _check_same_nvars(self, other)
        terms: dict[Exponent, Fraction] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                exp = tuple(a + b for a, b in zip(e1, e2))
                terms[exp] = terms.get(exp, Fraction(0)) + c1 * c2
        return Poly(self.nvars, terms)

    __rmul__ = __mul__

    def __pow__(self, exponent: int) -> "Poly":
        if not isinstance(exponent, int) or exponent < 0:
            raise ValueError("polynomial powers must be nonnegative ints")
        result = Poly.constant(self.nvars, 1)
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    # -- rendering ---------------------------------------------------------

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        chunks = []
        for exp, coeff in self.sorted_terms():
            factors = [f"x{i + 1}" + (f"^{e}" if e > 1 else "")
                       for i, e in enumerate(exp) if e]
            body = "*".join(factors)
            if not body:
                chunks.append(format_fraction(coeff))
            elif coeff == 1:
                chunks.append(body)
            elif coeff == -1:
                chunks.append(f"-{body}")
            else:
                chunks.append(f"{format_fraction(coeff)}*{body}")
        text = " + ".join(chunks)
        return text.replace("+ -", "- ")


def _coerce_poly(value, nvars: int) -> Poly | None:
    if isinstance(value, Poly):
        return value
    if isinstance(value, (int, Fraction)) and not isinstance(value, bool):
        return Poly.constant(nvars, value)
    return None


def norm_squared(nvars: int) -> Poly:
    """x1^2 + ... + xd^2."""
    terms = {}
    for i in range(nvars):
        exp = tuple(2 if j == i else 0 for j in range(nvars))
        terms[exp] = Fraction(1)
    return Poly(nvars, terms)


def divide_by_norm_squared(p: Poly) -> Poly | None:
    """The exact quotient p / (x1^2+...+xd^2), or None when it does not divide.

    Leading-term division under grlex: if p = q * s exactly then the leading
    term of p is the product of the leading terms of q and s, so repeatedly
    cancelling leading terms either exhausts the remainder or hits a leading
    term not divisible by x1^2, which certifies non-divisibility.
    """
    q = norm_squared(p.nvars)
    remainder = dict(p.terms)
    quotient: dict[Exponent, Fraction] = {}
    q_items = list(q.terms.items())
    while remainder:
        lead = max(remainder, key=lambda e: (sum(e), e))
        if lead[0] < 2:
            return None
        shift = (lead[0] - 2,) + lead[1:]
        coeff = remainder[lead]
        quotient[shift] = coeff
        for qe, qc in q_items:
            exp = tuple(a + b for a, b in zip(shift, qe))
            new = remainder.get(exp, Fraction(0)) - coeff * qc
            if new == 0:
                remainder.pop(exp, None)
            else:
                remainder[exp] = new
    return Poly(p.nvars, quotient)
