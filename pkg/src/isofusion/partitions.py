"""Partitions of a basis index set and the refinement-order operations on them.

A :class:`Partition` is stored in canonical form: every block internally
sorted, blocks ordered by their smallest element.  This makes equality,
hashing and deduplication order-independent.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator, Sequence


class PartitionError(ValueError):
    """Raised for malformed block families (overlap, bad cover, bad index)."""


@dataclass(frozen=True)
class Partition:
    """A partition of {0..rank-1} in canonical form."""

    rank: int
    blocks: tuple[tuple[int, ...], ...]

    @cached_property
    def block_index(self) -> tuple[int, ...]:
        """Map index -> position of its block in ``blocks``."""
        idx = [-1] * self.rank
        for b, block in enumerate(self.blocks):
            for i in block:
                idx[i] = b
        return tuple(idx)

    @cached_property
    def block_sets(self) -> frozenset[frozenset[int]]:
        return frozenset(frozenset(b) for b in self.blocks)

    def __len__(self) -> int:
        return len(self.blocks)

    def __iter__(self) -> Iterator[tuple[int, ...]]:
        return iter(self.blocks)

    def block_of(self, i: int) -> tuple[int, ...]:
        return self.blocks[self.block_index[i]]

    def has_block(self, indices: Iterable[int]) -> bool:
        return frozenset(indices) in self.block_sets

    def __str__(self) -> str:
        return format_partition(self)


@dataclass(frozen=True)
class SeedFamily:
    """Pairwise-disjoint nonempty index sets to be isolated."""

    sets: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        seen: set[int] = set()
        for s in self.sets:
            if not s:
                raise PartitionError("empty seed set")
            ss = set(s)
            if ss & seen:
                raise PartitionError(f"seed sets overlap on {sorted(ss & seen)}")
            seen |= ss
        object.__setattr__(self, "sets", tuple(tuple(sorted(set(s))) for s in self.sets))

    def __len__(self) -> int:
        return len(self.sets)

    def __iter__(self) -> Iterator[tuple[int, ...]]:
        return iter(self.sets)

    def indices(self) -> frozenset[int]:
        return frozenset(i for s in self.sets for i in s)

    def __str__(self) -> str:
        return ";".join(",".join(str(i) for i in s) for s in self.sets)


def seed_family(sets: Iterable[Iterable[int]]) -> SeedFamily:
    return SeedFamily(tuple(tuple(s) for s in sets))


def normalize(blocks: Iterable[Iterable[int]], rank: int) -> Partition:
    """Canonicalize a full cover of {0..rank-1} into a Partition.

    The blocks must be disjoint and cover all indices; anything else is an
    error rather than silently repaired.
    """
    mat = [tuple(sorted(set(b))) for b in blocks if b]
    seen: set[int] = set()
    for b in mat:
        for i in b:
            if not 0 <= i < rank:
                raise PartitionError(f"index {i} out of range for rank {rank}")
            if i in seen:
                raise PartitionError(f"blocks overlap on index {i}")
            seen.add(i)
    if len(seen) != rank:
        missing = sorted(set(range(rank)) - seen)
        raise PartitionError(f"incomplete cover, missing {missing}")
    mat.sort(key=lambda b: b[0])
    return Partition(rank, tuple(mat))


def from_labels(labels: Sequence[int]) -> Partition:
    """Partition whose blocks are the level sets of a label array."""
    groups: dict[int, list[int]] = {}
    for i, c in enumerate(labels):
        groups.setdefault(c, []).append(i)
    return normalize(groups.values(), len(labels))


def discrete_partition(rank: int) -> Partition:
    return Partition(rank, tuple((i,) for i in range(rank)))


def meet(p: Partition, q: Partition) -> Partition:
    """Common refinement: blocks are the nonempty pairwise intersections."""
    if p.rank != q.rank:
        raise PartitionError(f"rank mismatch: {p.rank} vs {q.rank}")
    qi = q.block_index
    out: dict[tuple[int, int], list[int]] = {}
    for b, block in enumerate(p.blocks):
        for i in block:
            out.setdefault((b, qi[i]), []).append(i)
    return normalize(out.values(), p.rank)


def star_image(p: Partition, star: Sequence[int]) -> Partition:
    """Apply an involution of the index set blockwise."""
    if len(star) != p.rank:
        raise PartitionError("star length does not match partition rank")
    for i, s in enumerate(star):
        if star[s] != i:
            raise PartitionError("star is not an involution")
    return normalize(([star[i] for i in b] for b in p.blocks), p.rank)


def is_refinement(p: Partition, q: Partition) -> bool:
    """True iff every block of p is contained in a block of q."""
    if p.rank != q.rank:
        raise PartitionError(f"rank mismatch: {p.rank} vs {q.rank}")
    qi = q.block_index
    return all(len({qi[i] for i in b}) == 1 for b in p.blocks)


def parse_partition(text: str, rank: int) -> Partition:
    """Parse ``0;1,2,3;4,5`` into a full-cover partition."""
    return normalize(_parse_blocks(text), rank)


def parse_seed_family(text: str) -> SeedFamily:
    """Parse ``1,2,3;7`` into a SeedFamily (no cover requirement)."""
    return seed_family(_parse_blocks(text))


def _parse_blocks(text: str) -> list[list[int]]:
    blocks: list[list[int]] = []
    for chunk in text.strip().split(";"):
        chunk = chunk.strip()
        if not chunk:
            continue
        try:
            blocks.append([int(tok) for tok in chunk.split(",") if tok.strip()])
        except ValueError as exc:
            raise PartitionError(f"bad block syntax: {chunk!r}") from exc
    if not blocks:
        raise PartitionError("no blocks given")
    return blocks


def format_partition(p: Partition) -> str:
    return ";".join(",".join(str(i) for i in b) for b in p.blocks)
