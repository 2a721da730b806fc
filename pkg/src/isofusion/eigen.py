"""Exact minimal polynomials of algebra elements and cyclotomicity verdicts.

All computation happens in the left regular representation, which is faithful
for a based algebra with identity, so the minimal polynomial of the r x r
regular matrix equals the minimal polynomial of the element itself.  Krylov
chains over exact rationals avoid the coefficient blowup of characteristic
polynomials: for each standard basis vector not yet covered, the minimal
linear dependency among its iterates is extracted and the results are
combined by lcm.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .algebra import QQ, BasedAlgebra, left_regular_matrix
from .polynomials import (
    Polynomial,
    PolynomialError,
    cubic_discriminant,
    cyclotomic_polynomial,
    euler_phi,
    factor_over_rationals,
    poly,
    poly_gcd,
    poly_lcm,
)

__all__ = [
    "minimal_polynomial",
    "matrix_minimal_polynomial",
    "is_diagonalizable",
    "CyclotomicVerdict",
    "cyclotomic_verdict",
]


@dataclass(frozen=True)
class CyclotomicVerdict:
    value: str  # "cyclotomic" | "noncyclotomic" | "unknown"
    reason: str


def _reduce(vec: list[Fraction], echelon: dict[int, list[Fraction]]) -> list[Fraction]:
    """Reduce against rows keyed by pivot column (each row has pivot value 1)."""
    v = list(vec)
    for pivot in sorted(echelon):
        c = v[pivot]
        if c:
            row = echelon[pivot]
            for i in range(len(v)):
                if row[i]:
                    v[i] -= c * row[i]
    return v


def _insert(vec: list[Fraction], echelon: dict[int, list[Fraction]]) -> bool:
    v = _reduce(vec, echelon)
    pivot = next((i for i, c in enumerate(v) if c), None)
    if pivot is None:
        return False
    lead = v[pivot]
    echelon[pivot] = [c / lead for c in v]
    return True


def _matvec(mat: Sequence[Sequence[QQ]], v: list[Fraction]) -> list[Fraction]:
    return [
        sum((row[j] * v[j] for j in range(len(v)) if v[j]), Fraction(0))
        for row in mat
    ]


def _krylov_local_minpoly(mat: Sequence[Sequence[QQ]], start: list[Fraction]) -> tuple[Polynomial, list[list[Fraction]]]:
    """Monic dependency polynomial of the iterates of one start vector."""
    r = len(start)
    rows: list[tuple[list[Fraction], list[Fraction], int]] = []  # (reduced vec, combo, pivot)
    iterates: list[list[Fraction]] = []
    w = list(start)
    t = 0
    while True:
        combo = [Fraction(0)] * (t + 1)
        combo[t] = Fraction(1)
        v = list(w)
        for rvec, rcombo, pivot in rows:
            c = v[pivot]
            if c:
                for i in range(r):
                    if rvec[i]:
                        v[i] -= c * rvec[i]
                for i in range(len(rcombo)):
                    if rcombo[i]:
                        combo[i] -= c * rcombo[i]
        pivot = next((i for i, c in enumerate(v) if c), None)
        if pivot is None:
            # combo expresses the vanishing combination of iterates: monic of degree t
            denom = 1
            for c in combo:
                denom = denom * c.denominator // math.gcd(denom, c.denominator)
            ints = [int(c * denom) for c in combo]
            return poly(ints).normalized(), iterates
        lead = v[pivot]
        rows.append(([c / lead for c in v], [c / lead for c in combo], pivot))
        iterates.append(list(w))
        if t + 1 > r:
            raise RuntimeError("Krylov chain exceeded the space dimension")
        w = _matvec(mat, w)
        t += 1


def matrix_minimal_polynomial(mat: Sequence[Sequence[QQ]]) -> Polynomial:
    """Exact minimal polynomial of a square rational matrix."""
    r = len(mat)
    if any(len(row) != r for row in mat):
        raise ValueError("matrix is not square")
    if r == 0:
        return poly([1])
    covered: dict[int, list[Fraction]] = {}
    result = poly([1])
    for s in range(r):
        e = [Fraction(0)] * r
        e[s] = Fraction(1)
        if not _insert(list(e), covered):
            continue
        local, iterates = _krylov_local_minpoly(mat, e)
        result = poly_lcm(result, local)
        for w in iterates:
            _insert(w, covered)
        if result.degree >= r:
            break
    _assert_annihilates(mat, result)
    return result


def _assert_annihilates(mat: Sequence[Sequence[QQ]], p: Polynomial) -> None:
    """g(M) must be exactly zero; checked column by column with Horner."""
    r = len(mat)
    coeffs = p.coeffs
    for s in range(r):
        v = [Fraction(0)] * r
        v[s] = Fraction(1)
        acc = [coeffs[-1] * x for x in v]
        for c in reversed(coeffs[:-1]):
            acc = _matvec(mat, acc)
            acc[s] += c  # add c * e_s
        if any(acc):
            raise RuntimeError("computed polynomial does not annihilate the matrix")


def minimal_polynomial(alg: BasedAlgebra, v: Sequence[QQ]) -> Polynomial:
    """Content-normalized minimal polynomial of the element sum_i v_i b_i."""
    return matrix_minimal_polynomial(left_regular_matrix(alg, v))


def is_diagonalizable(alg: BasedAlgebra, v: Sequence[QQ]) -> bool:
    """True iff the minimal polynomial is squarefree."""
    p = minimal_polynomial(alg, v)
    return poly_gcd(p, p.derivative()).degree == 0


def _is_square(n: int) -> bool:
    if n < 0:
        return False
    root = math.isqrt(n)
    return root * root == n


def cyclotomic_verdict(f: Polynomial) -> CyclotomicVerdict:
    """Decide whether the roots of an irreducible polynomial are cyclotomic.

    Rules, in order: degree <= 2 is always cyclotomic; an exact match with
    some cyclotomic polynomial is cyclotomic; an irreducible cubic is
    cyclotomic iff its discriminant is a perfect square (cyclic Galois
    group), otherwise the group is S3 and the roots cannot lie in any
    abelian extension; degree >= 4 is left unknown.
    """
    f = f.normalized()
    if f.degree < 1:
        raise PolynomialError("verdict requires a nonconstant polynomial")
    factors = factor_over_rationals(f)
    if len(factors) != 1 or factors[0][1] != 1:
        found = factors[0][0]
        raise PolynomialError(f"input is reducible; factor found: {found}")
    if f.degree <= 2:
        return CyclotomicVerdict("cyclotomic", "degree <= 2: quadratic fields embed in cyclotomic fields")
    d = f.degree
    for n in range(1, 2 * d * d + 2):
        if euler_phi(n) == d and cyclotomic_polynomial(n) == f:
            return CyclotomicVerdict("cyclotomic", f"equals the cyclotomic polynomial of order {n}")
    if d == 3:
        disc = cubic_discriminant(f)
        if _is_square(disc):
            return CyclotomicVerdict("cyclotomic", f"cubic with square discriminant {disc} (cyclic Galois group)")
        return CyclotomicVerdict(
            "noncyclotomic", f"cubic with non-square discriminant {disc} (Galois group S3, non-abelian)"
        )
    return CyclotomicVerdict("unknown", "abelian-Galois test not implemented above degree 3")
