"""Two-orbit configurations and coset schemes from permutation groups.

Abstract finite groups are given either by semidirect data Z_m^2 x| Z_k with
a 2x2 action matrix, or by an explicit multiplication table.  That covers
the cyclic fixtures and the order-96 coset constructions without needing
presentations or coset enumeration.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .schemes import RelationMatrix

__all__ = [
    "GroupError",
    "PermGroup",
    "FiniteGroup",
    "semidirect_group",
    "group_from_table",
    "regular_action",
    "coset_permutation_action",
    "orbital_configuration",
    "relation_of_element",
    "parse_perm_group",
    "format_perm_group",
]

Elem = tuple  # canonical element encodings are nested tuples


class GroupError(ValueError):
    pass


@dataclass(frozen=True)
class PermGroup:
    """Generators of a permutation group on {0..degree-1}."""

    degree: int
    generators: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        for g in self.generators:
            if sorted(g) != list(range(self.degree)):
                raise GroupError(f"generator {g} is not a bijection on 0..{self.degree - 1}")


class FiniteGroup:
    """A finite group as canonical element encodings plus a total product map."""

    def __init__(self, elements: Sequence[Elem], multiply, generators: Sequence[Elem] | None = None):
        self.elements: tuple[Elem, ...] = tuple(elements)
        self._mul = multiply
        self.index: dict[Elem, int] = {g: i for i, g in enumerate(self.elements)}
        if len(self.index) != len(self.elements):
            raise GroupError("duplicate elements")
        self._validate()
        self.generators: tuple[Elem, ...] = tuple(generators) if generators else self._greedy_generators()

    def _validate(self) -> None:
        elems = self.elements
        eset = set(elems)
        identity = None
        for e in elems:
            if all(self._mul(e, g) == g and self._mul(g, e) == g for g in elems):
                identity = e
                break
        if identity is None:
            raise GroupError("no identity element")
        self.identity: Elem = identity
        for g in elems:
            inv = None
            for h in elems:
                prod = self._mul(g, h)
                if prod not in eset:
                    raise GroupError(f"not closed: {g} * {h} = {prod}")
                if prod == identity and self._mul(h, g) == identity:
                    inv = h
            if inv is None:
                raise GroupError(f"element {g} has no inverse")

    def _greedy_generators(self) -> tuple[Elem, ...]:
        gens: list[Elem] = []
        closure = {self.identity}
        for g in self.elements:
            if g in closure:
                continue
            gens.append(g)
            closure = self.generated_set(gens)
            if len(closure) == len(self.elements):
                break
        return tuple(gens)

    def __len__(self) -> int:
        return len(self.elements)

    def multiply(self, g: Elem, h: Elem) -> Elem:
        return self._mul(g, h)

    def inverse(self, g: Elem) -> Elem:
        for h in self.elements:
            if self._mul(g, h) == self.identity:
                return h
        raise GroupError(f"no inverse for {g}")

    def product(self, *factors: Elem) -> Elem:
        """Left-to-right product of a word in the elements."""
        acc = self.identity
        for f in factors:
            acc = self._mul(acc, f)
        return acc

    def power(self, g: Elem, n: int) -> Elem:
        if n < 0:
            return self.power(self.inverse(g), -n)
        acc = self.identity
        for _ in range(n):
            acc = self._mul(acc, g)
        return acc

    def generated_set(self, gens: Iterable[Elem]) -> set[Elem]:
        """Closure of a subset under multiplication (subgroup generated)."""
        closure = {self.identity}
        frontier = [self.identity]
        gens = list(gens)
        while frontier:
            nxt = []
            for a in frontier:
                for g in gens:
                    b = self._mul(a, g)
                    if b not in closure:
                        closure.add(b)
                        nxt.append(b)
            frontier = nxt
        return closure

    def is_subgroup(self, subset: Iterable[Elem]) -> bool:
        sub = set(subset)
        if self.identity not in sub:
            return False
        return all(self._mul(a, b) in sub for a in sub for b in sub)


def semidirect_group(m: int, k: int, matrix: Sequence[Sequence[int]]) -> FiniteGroup:
    """Group Z_m^2 x| Z_k of order m^2 k with twist matrix acting per cyclic step.

    Multiplication: ((a,b),c) * ((a',b'),c') = ((a,b) + M^c (a',b'), c+c' mod k).
    Requires M invertible mod m with M^k = identity mod m.  The named
    generators are x=((1,0),0), y=((0,1),0), z=((0,0),1).
    """
    if m < 1 or k < 1:
        raise GroupError("m and k must be positive")
    M = [[matrix[0][0] % m, matrix[0][1] % m], [matrix[1][0] % m, matrix[1][1] % m]]
    det = (M[0][0] * M[1][1] - M[0][1] * M[1][0]) % m
    if m > 1 and _gcd(det, m) != 1:
        raise GroupError(f"matrix determinant {det} is not invertible mod {m}")
    powers = [[[1 % m, 0], [0, 1 % m]]]
    for _ in range(k):
        powers.append(_matmul2(powers[-1], M, m))
    if powers[k] != powers[0]:
        raise GroupError(f"matrix order does not divide {k} mod {m}")
    powers = powers[:k]

    def mul(g: Elem, h: Elem) -> Elem:
        (a, b), c = g
        (a2, b2), c2 = h
        P = powers[c]
        return (
            ((a + P[0][0] * a2 + P[0][1] * b2) % m, (b + P[1][0] * a2 + P[1][1] * b2) % m),
            (c + c2) % k,
        )

    # the identity ((0,0),0) comes first, which pins coset point 0
    elements = [((a, b), c) for c in range(k) for a in range(m) for b in range(m)]
    gens = [g for g in (((1 % m, 0), 0), ((0, 1 % m), 0), ((0, 0), 1 % k)) if g != ((0, 0), 0)]
    return FiniteGroup(elements, mul, generators=gens)


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return abs(a)


def _matmul2(A, B, m):
    return [
        [(A[0][0] * B[0][0] + A[0][1] * B[1][0]) % m, (A[0][0] * B[0][1] + A[0][1] * B[1][1]) % m],
        [(A[1][0] * B[0][0] + A[1][1] * B[1][0]) % m, (A[1][0] * B[0][1] + A[1][1] * B[1][1]) % m],
    ]


def group_from_table(elements: Sequence[Elem], table: Sequence[Sequence[int]]) -> FiniteGroup:
    """Group from an explicit index-based multiplication table."""
    elements = tuple(elements)
    n = len(elements)
    if len(table) != n or any(len(row) != n for row in table):
        raise GroupError("multiplication table shape mismatch")
    index = {g: i for i, g in enumerate(elements)}

    def mul(g: Elem, h: Elem) -> Elem:
        return elements[table[index[g]][index[h]]]

    return FiniteGroup(elements, mul)


# ---------------------------------------------------------------------------
# Actions
# ---------------------------------------------------------------------------


def _coset_table(group: FiniteGroup, subgroup: Sequence[Elem]) -> tuple[list[Elem], dict[Elem, int]]:
    """Left cosets gH in deterministic order; the identity coset is number 0."""
    H = list(subgroup)
    if not group.is_subgroup(H):
        raise GroupError("given element list is not a subgroup")
    if len(group) % len(H) != 0:
        raise GroupError("subgroup order does not divide group order")
    coset_of: dict[Elem, int] = {}
    reps: list[Elem] = []
    for g in group.elements:
        if g in coset_of:
            continue
        cid = len(reps)
        reps.append(g)
        for h in H:
            coset_of[group.multiply(g, h)] = cid
    return reps, coset_of


def coset_permutation_action(group: FiniteGroup, subgroup: Sequence[Elem]) -> PermGroup:
    """Action of the group generators on left cosets of a subgroup."""
    reps, coset_of = _coset_table(group, subgroup)
    perms = []
    for g in group.generators:
        perms.append(tuple(coset_of[group.multiply(g, rep)] for rep in reps))
    return PermGroup(len(reps), tuple(perms))


def regular_action(group: FiniteGroup) -> PermGroup:
    """Left multiplication action on the group itself (degree |G|)."""
    return coset_permutation_action(group, [group.identity])


def orbital_configuration(g: PermGroup) -> RelationMatrix:
    """Colors of the orbits of the group on ordered pairs.

    Diagonal orbits are numbered first (by least point), then off-diagonal
    orbits by their lexicographically least pair.
    """
    n = g.degree
    if n < 1:
        raise GroupError("degree must be at least 1")
    color = [[-1] * n for _ in range(n)]
    gens = g.generators
    next_color = 0

    def sweep(x0: int, y0: int, c: int) -> None:
        color[x0][y0] = c
        frontier = [(x0, y0)]
        while frontier:
            nxt = []
            for (x, y) in frontier:
                for p in gens:
                    xx, yy = p[x], p[y]
                    if color[xx][yy] == -1:
                        color[xx][yy] = c
                        nxt.append((xx, yy))
            frontier = nxt

    for x in range(n):
        if color[x][x] == -1:
            sweep(x, x, next_color)
            next_color += 1
    for x in range(n):
        for y in range(n):
            if x != y and color[x][y] == -1:
                sweep(x, y, next_color)
                next_color += 1
    return RelationMatrix(tuple(tuple(row) for row in color))


def relation_of_element(
    group: FiniteGroup,
    subgroup: Sequence[Elem],
    matrix: RelationMatrix,
    g: Elem,
) -> int:
    """Relation index of the double coset HgH in the coset scheme.

    The matrix must come from orbital_configuration(coset_permutation_action);
    constancy over the double coset of g is verified before returning.
    """
    if g not in group.index:
        raise GroupError(f"{g} is not a group element")
    _, coset_of = _coset_table(group, subgroup)
    if matrix.order != len(group) // len(list(subgroup)):
        raise GroupError("matrix order does not match the coset space")
    c = matrix.entries[0][coset_of[g]]
    H = list(subgroup)
    for h1 in H:
        for h2 in H:
            other = group.product(h1, g, h2)
            if matrix.entries[0][coset_of[other]] != c:
                raise GroupError(f"double coset of {g} is not color-constant")
    return c


# ---------------------------------------------------------------------------
# Group file format: `degree <n>` then `gen <img0> ... <img(n-1)>` lines
# ---------------------------------------------------------------------------


def parse_perm_group(text: str) -> PermGroup:
    degree: int | None = None
    gens: list[tuple[int, ...]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        try:
            if parts[0].lower() == "degree":
                degree = int(parts[1])
            elif parts[0].lower() == "gen":
                gens.append(tuple(int(p) for p in parts[1:]))
            else:
                raise GroupError(f"unknown directive {parts[0]!r}")
        except (IndexError, ValueError) as exc:
            raise GroupError(f"bad group line {lineno}: {raw!r}") from exc
    if degree is None:
        raise GroupError("missing 'degree <n>' header")
    for g in gens:
        if len(g) != degree:
            raise GroupError(f"generator of length {len(g)}, expected {degree}")
    if not gens:
        gens = [tuple(range(degree))]
    return PermGroup(degree, tuple(gens))


def format_perm_group(g: PermGroup) -> str:
    lines = [f"degree {g.degree}"]
    for p in g.generators:
        lines.append("gen " + " ".join(str(i) for i in p))
    return "\n".join(lines) + "\n"
