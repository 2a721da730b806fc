"""Relation matrices of coherent configurations and their exact adjacency algebras.

A :class:`RelationMatrix` colors the ordered pairs of an n-point set with
values 0..r-1.  Conversion to a :class:`BasedAlgebra` counts 2-paths

    lam[i,j,k] = #{z : M[x][z] = i and M[z][y] = j}   for M[x][y] = k

and verifies the count is the same for every pair of color k (coherence),
over all n^2 pairs.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Sequence

from .algebra import BasedAlgebra, build_algebra, detect_star
from .partitions import Partition, PartitionError

__all__ = [
    "RelationMatrix",
    "SchemeError",
    "parse_relation_matrix",
    "format_relation_matrix",
    "algebra_from_relations",
    "fuse_relations",
]


class SchemeError(ValueError):
    """Raised for malformed relation matrices or coherence violations."""


@dataclass(frozen=True)
class RelationMatrix:
    """n x n matrix of relation colors 0..rank-1, each color occurring."""

    entries: tuple[tuple[int, ...], ...]

    @property
    def order(self) -> int:
        return len(self.entries)

    @property
    def rank(self) -> int:
        return 1 + max(max(row) for row in self.entries)

    def color_classes(self) -> list[list[tuple[int, int]]]:
        classes: list[list[tuple[int, int]]] = [[] for _ in range(self.rank)]
        for x, row in enumerate(self.entries):
            for y, c in enumerate(row):
                classes[c].append((x, y))
        return classes

    def diagonal_colors(self) -> frozenset[int]:
        return frozenset(row[x] for x, row in enumerate(self.entries))


def _validate_matrix(rows: list[list[int]]) -> RelationMatrix:
    n = len(rows)
    if n == 0:
        raise SchemeError("empty matrix")
    for row in rows:
        if len(row) != n:
            raise SchemeError(f"ragged matrix: row of length {len(row)}, expected {n}")
    values = sorted({c for row in rows for c in row})
    if values == list(range(len(values))):
        pass
    elif values == list(range(1, len(values) + 1)):
        rows = [[c - 1 for c in row] for row in rows]
    else:
        raise SchemeError(f"colors must be consecutive from 0 or 1, got {values}")
    return RelationMatrix(tuple(tuple(row) for row in rows))


def parse_relation_matrix(text: str) -> RelationMatrix:
    """Parse a relation matrix in plain or bracketed syntax.

    Plain: first token is the order n, followed by n*n integers.
    Bracketed: a matrix literal ``[[...],[...]]``; anything before the first
    ``[`` (an assignment prefix, say) is ignored.
    """
    stripped = text.strip()
    if not stripped:
        raise SchemeError("empty input")
    bracket = stripped.find("[")
    if bracket >= 0:
        body = stripped[bracket:]
        if body.count("[") != body.count("]"):
            raise SchemeError("unbalanced brackets")
        inner = body.strip()
        if not (inner.startswith("[") and inner.rstrip(";,").endswith("]")):
            raise SchemeError("malformed bracketed matrix")
        rows = []
        for row_text in re.findall(r"\[([^\[\]]*)\]", inner):
            toks = [t for t in re.split(r"[,\s]+", row_text.strip()) if t]
            try:
                rows.append([int(t) for t in toks])
            except ValueError as exc:
                raise SchemeError(f"non-integer token in row {row_text!r}") from exc
        if not rows:
            raise SchemeError("no rows found in bracketed matrix")
        return _validate_matrix(rows)
    toks = stripped.split()
    try:
        n = int(toks[0])
        flat = [int(t) for t in toks[1:]]
    except ValueError as exc:
        raise SchemeError("non-integer token in plain matrix") from exc
    if len(flat) != n * n:
        raise SchemeError(f"expected {n * n} entries after order {n}, got {len(flat)}")
    return _validate_matrix([flat[x * n : (x + 1) * n] for x in range(n)])


def format_relation_matrix(m: RelationMatrix) -> str:
    lines = [str(m.order)]
    width = len(str(m.rank - 1))
    for row in m.entries:
        lines.append(" ".join(str(c).rjust(width) for c in row))
    return "\n".join(lines) + "\n"


def algebra_from_relations(m: RelationMatrix) -> BasedAlgebra:
    """Exact adjacency algebra of a coherent relation matrix.

    Raises SchemeError when the coloring is not coherent (two pairs of one
    color with different 2-path counts) or the transpose of a color class is
    not a color class.
    """
    n = m.order
    r = m.rank
    ent = m.entries
    diag = m.diagonal_colors()
    for x in range(n):
        for y in range(n):
            if (ent[x][y] in diag) != (x == y):
                raise SchemeError(
                    f"fiber condition violated: color {ent[x][y]} appears both on and off the diagonal"
                )

    classes = m.color_classes()
    for c, pairs in enumerate(classes):
        if not pairs:
            raise SchemeError(f"color {c} never occurs")

    # 2-path counts per ordered color pair, from one representative, then
    # verified against every pair of the target color.
    lam: dict[tuple[int, int, int], int] = {}
    cols = tuple(tuple(ent[z][y] for z in range(n)) for y in range(n))
    for k in range(r):
        pairs = classes[k]
        reference: dict[tuple[int, int], int] | None = None
        for (x, y) in pairs:
            tally: dict[tuple[int, int], int] = {}
            for key in zip(ent[x], cols[y]):
                tally[key] = tally.get(key, 0) + 1
            if reference is None:
                reference = tally
            elif tally != reference:
                ref_pair = pairs[0]
                raise SchemeError(
                    f"coherence violation on color {k}: pairs {ref_pair} and {(x, y)} "
                    f"have different 2-path counts"
                )
        assert reference is not None
        for (i, j), v in reference.items():
            lam[(i, j, k)] = v

    # transpose pairing must send color classes to color classes
    transpose_color: list[int] = [-1] * r
    for c, pairs in enumerate(classes):
        imgs = {ent[y][x] for (x, y) in pairs}
        if len(imgs) != 1:
            raise SchemeError(f"transpose of color class {c} is not a color class")
        transpose_color[c] = imgs.pop()

    alg = build_algebra(lam, diag, rank=r)
    star = detect_star(alg)
    if list(star) != transpose_color:
        raise SchemeError("algebraic star does not match the transpose pairing")
    return alg


def fuse_relations(m: RelationMatrix, p: Partition) -> RelationMatrix:
    """Recolor the matrix by the block index of each color."""
    if p.rank != m.rank:
        raise PartitionError(
            f"partition rank {p.rank} does not match color count {m.rank}"
        )
    blk = p.block_index
    return RelationMatrix(tuple(tuple(blk[c] for c in row) for row in m.entries))
