"""Integer-coefficient univariate polynomials with exact rational arithmetic.

Coefficients are stored in ascending degree order.  Canonical ("primitive")
values have coefficient gcd 1 and a positive leading coefficient, which makes
them usable as dictionary keys and report strings.
"""
from __future__ import annotations

import functools
import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

__all__ = [
    "Polynomial",
    "PolynomialError",
    "poly",
    "X",
    "divides",
    "poly_gcd",
    "poly_lcm",
    "cyclotomic_polynomial",
    "cubic_discriminant",
    "factor_over_rationals",
    "parse_polynomial",
    "FACTOR_DEGREE_CAP",
]

FACTOR_DEGREE_CAP = 64


class PolynomialError(ValueError):
    pass


def _strip(coeffs: Sequence[int]) -> tuple[int, ...]:
    last = len(coeffs)
    while last > 0 and coeffs[last - 1] == 0:
        last -= 1
    return tuple(coeffs[:last])


@dataclass(frozen=True)
class Polynomial:
    coeffs: tuple[int, ...]  # ascending degree, no trailing zeros

    def __post_init__(self) -> None:
        object.__setattr__(self, "coeffs", _strip(self.coeffs))
        if any(not isinstance(c, int) for c in self.coeffs):
            raise PolynomialError("coefficients must be integers")

    @property
    def degree(self) -> int:
        """Degree, with -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def leading(self) -> int:
        if self.is_zero:
            raise PolynomialError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def normalized(self) -> "Polynomial":
        """Primitive part with positive leading coefficient."""
        if self.is_zero:
            return self
        g = 0
        for c in self.coeffs:
            g = math.gcd(g, c)
        if self.coeffs[-1] < 0:
            g = -g
        return Polynomial(tuple(c // g for c in self.coeffs))

    def __add__(self, other: "Polynomial") -> "Polynomial":
        a, b = self.coeffs, other.coeffs
        n = max(len(a), len(b))
        return Polynomial(tuple((a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)))

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        return self + (-other)

    def __neg__(self) -> "Polynomial":
        return Polynomial(tuple(-c for c in self.coeffs))

    def __mul__(self, other: "Polynomial") -> "Polynomial":
        if self.is_zero or other.is_zero:
            return Polynomial(())
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return Polynomial(tuple(out))

    def derivative(self) -> "Polynomial":
        return Polynomial(tuple(i * c for i, c in enumerate(self.coeffs) if i > 0))

    def __call__(self, x):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __str__(self) -> str:
        return format_polynomial(self)


def poly(coeffs: Iterable[int]) -> Polynomial:
    return Polynomial(tuple(int(c) for c in coeffs))


X = poly([0, 1])


def _as_fractions(p: Polynomial) -> list[Fraction]:
    return [Fraction(c) for c in p.coeffs]


def _divmod_exact(f: Sequence[Fraction], g: Sequence[Fraction]) -> tuple[list[Fraction], list[Fraction]]:
    """Quotient and remainder over the rationals, coefficient lists ascending."""
    rem = list(f)
    q: list[Fraction] = [Fraction(0)] * max(len(f) - len(g) + 1, 1)
    glead = g[-1]
    while len(rem) >= len(g) and any(rem):
        while rem and rem[-1] == 0:
            rem.pop()
        if len(rem) < len(g):
            break
        shift = len(rem) - len(g)
        factor = rem[-1] / glead
        q[shift] = factor
        for i, gc in enumerate(g):
            rem[shift + i] -= factor * gc
        rem.pop()
    while rem and rem[-1] == 0:
        rem.pop()
    return q, rem


def divides(g: Polynomial, f: Polynomial) -> bool:
    """Exact divisibility over the rationals."""
    if g.is_zero:
        raise PolynomialError("division by the zero polynomial")
    if f.is_zero:
        return True
    if f.degree < g.degree:
        return False
    _, rem = _divmod_exact(_as_fractions(f), _as_fractions(g))
    return not rem


def exact_quotient(f: Polynomial, g: Polynomial) -> Polynomial:
    q, rem = _divmod_exact(_as_fractions(f), _as_fractions(g))
    if rem:
        raise PolynomialError(f"{g} does not divide {f}")
    if any(c.denominator != 1 for c in q):
        raise PolynomialError("quotient is not integral")
    return Polynomial(tuple(int(c) for c in q))


def poly_gcd(f: Polynomial, g: Polynomial) -> Polynomial:
    """Primitive gcd via rational Euclid."""
    a, b = _as_fractions(f), _as_fractions(g)
    while b:
        _, r = _divmod_exact(a, b)
        a, b = b, r
    if not a:
        return Polynomial(())
    # clear denominators, then take primitive part
    denom = 1
    for c in a:
        denom = denom * c.denominator // math.gcd(denom, c.denominator)
    return Polynomial(tuple(int(c * denom) for c in a)).normalized()


def poly_lcm(f: Polynomial, g: Polynomial) -> Polynomial:
    if f.is_zero or g.is_zero:
        return Polynomial(())
    fn, gn = f.normalized(), g.normalized()
    return exact_quotient(fn * gn, poly_gcd(fn, gn)).normalized()


@functools.lru_cache(maxsize=None)
def cyclotomic_polynomial(n: int) -> Polynomial:
    """The n-th cyclotomic polynomial, by dividing x^n - 1 by proper divisors."""
    if n < 1:
        raise PolynomialError("cyclotomic index must be >= 1")
    num = poly([-1] + [0] * (n - 1) + [1])
    for d in range(1, n):
        if n % d == 0:
            num = exact_quotient(num, cyclotomic_polynomial(d))
    return num


def euler_phi(n: int) -> int:
    out = n
    m = n
    p = 2
    while p * p <= m:
        if m % p == 0:
            out -= out // p
            while m % p == 0:
                m //= p
        p += 1
    if m > 1:
        out -= out // m
    return out


def cubic_discriminant(f: Polynomial) -> int:
    if f.degree != 3:
        raise PolynomialError("discriminant rule implemented for cubics only")
    d, c, b, a = f.coeffs  # ascending
    return 18 * a * b * c * d - 4 * b**3 * d + b**2 * c**2 - 4 * a * c**3 - 27 * a**2 * d**2


def factor_over_rationals(
    f: Polynomial, degree_cap: int = FACTOR_DEGREE_CAP
) -> list[tuple[Polynomial, int]]:
    """Complete factorization into primitive irreducibles over Q.

    Backed by sympy's integer-polynomial factorization (squarefree
    decomposition, modular factorization with Hensel lifting and factor
    recombination).  The product of the returned factors reproduces the
    input up to a rational constant; this identity is asserted.
    """
    if f.is_zero:
        raise PolynomialError("cannot factor the zero polynomial")
    if f.degree > degree_cap:
        raise PolynomialError(f"degree {f.degree} exceeds factorization cap {degree_cap}")
    if f.degree == 0:
        return []
    from sympy import Poly, Symbol

    x = Symbol("x")
    spoly = Poly(list(reversed(f.coeffs)), x)
    _, factors = spoly.factor_list()
    out: list[tuple[Polynomial, int]] = []
    for fac, mult in factors:
        coeffs = [int(c) for c in reversed(fac.all_coeffs())]
        out.append((Polynomial(tuple(coeffs)).normalized(), int(mult)))
    out.sort(key=lambda t: (t[0].degree, t[0].coeffs))
    product = poly([1])
    for fac, mult in out:
        for _ in range(mult):
            product = product * fac
    if product.normalized() != f.normalized():
        raise PolynomialError("factorization product check failed")
    return out


# ---------------------------------------------------------------------------
# Text form: "x^3 - 3" style
# ---------------------------------------------------------------------------

_TERM_RE = re.compile(
    r"\s*(?P<sign>[+-])?\s*(?:"
    r"(?P<coeff>\d+)\s*\*?\s*x\s*(?:\^\s*(?P<exp1>\d+))?"
    r"|x\s*(?:\^\s*(?P<exp2>\d+))?"
    r"|(?P<const>\d+)"
    r")\s*"
)


def parse_polynomial(text: str) -> Polynomial:
    """Parse integer polynomials like ``x^3 - 3`` or ``2x^2 + x - 1``."""
    s = text.strip()
    if not s:
        raise PolynomialError("empty polynomial")
    pos = 0
    terms: dict[int, int] = {}
    first = True
    while pos < len(s):
        m = _TERM_RE.match(s, pos)
        if not m or m.end() == pos:
            raise PolynomialError(f"bad polynomial syntax near {s[pos:]!r}")
        sign = m.group("sign")
        if sign is None and not first:
            raise PolynomialError(f"missing +/- before {s[m.start():]!r}")
        mult = -1 if sign == "-" else 1
        if m.group("const") is not None:
            exp, coeff = 0, int(m.group("const"))
        elif m.group("coeff") is not None:
            coeff = int(m.group("coeff"))
            exp = int(m.group("exp1")) if m.group("exp1") else 1
        else:
            coeff = 1
            exp = int(m.group("exp2")) if m.group("exp2") else 1
        terms[exp] = terms.get(exp, 0) + mult * coeff
        pos = m.end()
        first = False
    top = max(terms)
    return Polynomial(tuple(terms.get(i, 0) for i in range(top + 1)))


def format_polynomial(p: Polynomial) -> str:
    if p.is_zero:
        return "0"
    parts: list[str] = []
    for exp in range(p.degree, -1, -1):
        c = p.coeffs[exp]
        if not c:
            continue
        mag = abs(c)
        if exp == 0:
            body = str(mag)
        elif exp == 1:
            body = "x" if mag == 1 else f"{mag}x"
        else:
            body = f"x^{exp}" if mag == 1 else f"{mag}x^{exp}"
        if not parts:
            parts.append(body if c > 0 else f"-{body}")
        else:
            parts.append(f"+ {body}" if c > 0 else f"- {body}")
    return " ".join(parts)
