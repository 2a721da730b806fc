"""Based algebras represented by exact-rational structure-constant tensors.

The coefficient ring is fixed to the rationals: scalars are Python ints or
``fractions.Fraction`` values, never floats.  A :class:`BasedAlgebra` is
immutable after construction and safe to share between workers.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Sequence

QQ = int | Fraction

__all__ = [
    "BasedAlgebra",
    "AlgebraError",
    "build_algebra",
    "left_regular_matrix",
    "valency",
    "detect_star",
    "basis_vector",
    "indicator_vector",
    "parse_tensor",
    "format_tensor",
]


class AlgebraError(ValueError):
    """Raised when a tensor fails a structural invariant."""


def _as_exact(value) -> QQ:
    if isinstance(value, int):
        return value
    if isinstance(value, Fraction):
        return int(value) if value.denominator == 1 else value
    raise AlgebraError(f"non-exact scalar {value!r} (use int or Fraction)")


class BasedAlgebra:
    """A rank-r free algebra given by structure constants b_i b_j = sum_k lam[i,j,k] b_k.

    identity_support is the set E of basis indices with sum_{e in E} b_e = 1;
    for group algebras and homogeneous schemes E = {0}, for coherent
    configurations E is the set of fiber-diagonal indices.
    """

    __slots__ = ("rank", "identity_support", "_lam", "_star", "_items", "_rows", "__weakref__")

    def __init__(
        self,
        rank: int,
        lam: Mapping[tuple[int, int, int], QQ],
        identity_support: Iterable[int],
        star: Sequence[int] | None = None,
    ):
        self.rank = rank
        self.identity_support = frozenset(identity_support)
        self._lam = {ijk: _as_exact(v) for ijk, v in lam.items() if v}
        self._star = tuple(star) if star is not None else None
        self._items: tuple[tuple[int, int, int, QQ], ...] | None = None
        self._rows: dict[tuple[int, int], dict[int, QQ]] | None = None

    @property
    def star(self) -> tuple[int, ...] | None:
        return self._star

    def coefficient(self, i: int, j: int, k: int) -> QQ:
        return self._lam.get((i, j, k), 0)

    def items(self) -> tuple[tuple[int, int, int, QQ], ...]:
        """All nonzero tensor entries as (i, j, k, value), cached."""
        if self._items is None:
            self._items = tuple((i, j, k, v) for (i, j, k), v in sorted(self._lam.items()))
        return self._items

    def product_row(self, i: int, j: int) -> dict[int, QQ]:
        """Support of b_i b_j as a sparse map k -> coefficient."""
        if self._rows is None:
            rows: dict[tuple[int, int], dict[int, QQ]] = {}
            for (a, b, k), v in self._lam.items():
                rows.setdefault((a, b), {})[k] = v
            self._rows = rows
        return dict(self._rows.get((i, j), {}))

    def multiply(self, u: Sequence[QQ], v: Sequence[QQ]) -> list[QQ]:
        """Product of two elements in basis coordinates."""
        if len(u) != self.rank or len(v) != self.rank:
            raise AlgebraError("element length does not match rank")
        out: list[QQ] = [0] * self.rank
        for (i, j, k), lam in self._lam.items():
            ui = u[i]
            vj = v[j]
            if ui and vj:
                out[k] += ui * vj * lam
        return out

    def num_nonzero(self) -> int:
        return len(self._lam)

    def with_star(self, star: Sequence[int]) -> "BasedAlgebra":
        return BasedAlgebra(self.rank, self._lam, self.identity_support, star)

    def __repr__(self) -> str:
        return (
            f"BasedAlgebra(rank={self.rank}, nnz={len(self._lam)}, "
            f"identity={sorted(self.identity_support)}, star={'yes' if self._star else 'no'})"
        )


def basis_vector(rank: int, i: int) -> list[QQ]:
    v: list[QQ] = [0] * rank
    v[i] = 1
    return v


def indicator_vector(rank: int, indices: Iterable[int]) -> list[QQ]:
    v: list[QQ] = [0] * rank
    for i in indices:
        v[i] = 1
    return v


def build_algebra(
    lam: Mapping[tuple[int, int, int], QQ],
    identity_support: Iterable[int],
    star: Sequence[int] | None = None,
    validate: bool = False,
    rank: int | None = None,
) -> BasedAlgebra:
    """Construct a BasedAlgebra, optionally checking identity/associativity laws.

    Rank is deduced as 1 + the largest index in the tensor or the identity
    support unless given explicitly.
    """
    support = set(identity_support)
    if not support:
        raise AlgebraError("identity_support must be nonempty")
    if rank is None:
        top = max(support)
        for (i, j, k) in lam:
            top = max(top, i, j, k)
        if star is not None:
            top = max(top, len(star) - 1)
        rank = top + 1
    for (i, j, k) in lam:
        if not (0 <= i < rank and 0 <= j < rank and 0 <= k < rank):
            raise AlgebraError(f"tensor index ({i},{j},{k}) out of range for rank {rank}")
    if any(not 0 <= e < rank for e in support):
        raise AlgebraError("identity_support index out of range")
    if star is not None:
        _check_involution(star, rank, support)
    alg = BasedAlgebra(rank, lam, support, star)
    if validate:
        _check_identity_law(alg)
        _check_associativity(alg)
    return alg


def _check_involution(star: Sequence[int], rank: int, support: set[int]) -> None:
    if sorted(star) != list(range(rank)):
        raise AlgebraError("star is not a permutation of the index set")
    for i in range(rank):
        if star[star[i]] != i:
            raise AlgebraError(f"star is not an involution (breaks at index {i})")
    if {star[e] for e in support} != support:
        raise AlgebraError("star does not preserve identity_support")


def _check_identity_law(alg: BasedAlgebra) -> None:
    """sum_{e in E} lam[e,j,k] = delta_jk and symmetrically on the right."""
    r = alg.rank
    support = alg.identity_support
    left: dict[tuple[int, int], QQ] = {}
    right: dict[tuple[int, int], QQ] = {}
    for i, j, k, v in alg.items():
        if i in support:
            left[(j, k)] = left.get((j, k), 0) + v
        if j in support:
            right[(i, k)] = right.get((i, k), 0) + v
    for name, table in (("left", left), ("right", right)):
        for j in range(r):
            for k in range(r):
                want = 1 if j == k else 0
                got = table.get((j, k), 0)
                if got != want:
                    raise AlgebraError(
                        f"identity-law violation ({name}): sum over E of lam at (j={j},k={k}) is {got}, expected {want}"
                    )


def _check_associativity(alg: BasedAlgebra) -> None:
    """(b_i b_j) b_k == b_i (b_j b_k) for all basis triples, via sparse rows."""
    r = alg.rank
    rows = [[alg.product_row(i, j) for j in range(r)] for i in range(r)]
    for i in range(r):
        for j in range(r):
            rij = rows[i][j]
            for k in range(r):
                lhs: dict[int, QQ] = {}
                for t, c in rij.items():
                    for m, d in rows[t][k].items():
                        lhs[m] = lhs.get(m, 0) + c * d
                rhs: dict[int, QQ] = {}
                for t, c in rows[j][k].items():
                    for m, d in rows[i][t].items():
                        rhs[m] = rhs.get(m, 0) + c * d
                for m in lhs.keys() | rhs.keys():
                    if lhs.get(m, 0) != rhs.get(m, 0):
                        raise AlgebraError(
                            f"associativity violation at (i={i},j={j},k={k}), coordinate {m}"
                        )


def left_regular_matrix(alg: BasedAlgebra, v: Sequence[QQ]) -> list[list[QQ]]:
    """Matrix of left multiplication by sum_i v_i b_i in the basis.

    Row k, column j holds sum_i v_i lam[i,j,k].
    """
    if len(v) != alg.rank:
        raise AlgebraError(f"element length {len(v)} does not match rank {alg.rank}")
    r = alg.rank
    mat: list[list[QQ]] = [[0] * r for _ in range(r)]
    for i, j, k, lam in alg.items():
        vi = v[i]
        if vi:
            mat[k][j] += vi * lam
    return mat


def valency(alg: BasedAlgebra, i: int) -> QQ:
    """n_i = sum_{e in E} lam[i, i*, e] for scheme-like algebras."""
    if alg.star is None:
        raise AlgebraError("valency requires a star involution")
    istar = alg.star[i]
    return sum(alg.coefficient(i, istar, e) for e in alg.identity_support)


def detect_star(alg: BasedAlgebra) -> tuple[int, ...]:
    """Recover the involution pairing i -> j with b_i b_j meeting the identity.

    Requires each i to have exactly one partner j with
    sum_{e in E} lam[i,j,e] != 0, and the pairing to be involutive.  The
    result is also attached to the algebra if it has no star yet.
    """
    r = alg.rank
    support = alg.identity_support
    pairing = [-1] * r
    for i in range(r):
        found = [j for j in range(r) if any(alg.coefficient(i, j, e) for e in support)]
        if len(found) != 1:
            raise AlgebraError(
                f"index {i} has {len(found)} identity-hitting partners; algebra is not of scheme type"
            )
        pairing[i] = found[0]
    for i in range(r):
        if pairing[pairing[i]] != i:
            raise AlgebraError(f"pairing is not involutive at index {i}")
    star = tuple(pairing)
    _check_involution(star, r, set(support))
    if alg.star is None:
        alg._star = star
    return star


# ---------------------------------------------------------------------------
# Tensor text format
#
#   basedalgebra <rank>
#   identity <e1> <e2> ...          (optional, default 0)
#   star <img0> <img1> ...          (optional)
#   L <i> <j> <k> <num>[/<den>]     (one line per nonzero entry)
# ---------------------------------------------------------------------------


def parse_tensor(text: str) -> BasedAlgebra:
    rank: int | None = None
    identity: list[int] = [0]
    star: list[int] | None = None
    lam: dict[tuple[int, int, int], QQ] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        tag = parts[0].lower()
        try:
            if tag == "basedalgebra":
                rank = int(parts[1])
            elif tag == "identity":
                identity = [int(p) for p in parts[1:]]
            elif tag == "star":
                star = [int(p) for p in parts[1:]]
            elif tag == "l":
                i, j, k = int(parts[1]), int(parts[2]), int(parts[3])
                lam[(i, j, k)] = Fraction(parts[4])
            else:
                raise AlgebraError(f"unknown directive {parts[0]!r}")
        except (IndexError, ValueError) as exc:
            raise AlgebraError(f"bad tensor line {lineno}: {raw!r}") from exc
    if rank is None:
        raise AlgebraError("missing 'basedalgebra <rank>' header")
    return build_algebra(lam, identity, star=star, rank=rank)


def format_tensor(alg: BasedAlgebra) -> str:
    lines = [f"basedalgebra {alg.rank}"]
    lines.append("identity " + " ".join(str(e) for e in sorted(alg.identity_support)))
    if alg.star is not None:
        lines.append("star " + " ".join(str(s) for s in alg.star))
    for i, j, k, v in alg.items():
        frac = Fraction(v)
        val = str(frac.numerator) if frac.denominator == 1 else f"{frac.numerator}/{frac.denominator}"
        lines.append(f"L {i} {j} {k} {val}")
    return "\n".join(lines) + "\n"
