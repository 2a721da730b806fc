"""Isolating semifusion/fusion computation by synchronized signature refinement.

A partition of the basis spans a subalgebra exactly when, for every ordered
pair of blocks (I, J), the summed coefficient

    lam[I,J,k] = sum_{i in I} sum_{j in J} lam[i,j,k]

is constant as k runs over each block.  One refinement round therefore
attaches to every index k the vector of these sums over all block pairs (its
signature) and splits every block by distinct signatures, simultaneously.
Iterating to a fixed point from a start partition that carries the seed sets
as blocks yields the coarsest seed-isolating semifusion, or proves there is
none when a seed set is torn apart.

Index signatures within one round are computed against the frozen previous
partition, so rounds are deterministic and could be sharded over k; all
functions here are pure and operate on immutable inputs.
"""
from __future__ import annotations

import itertools
import weakref
from dataclasses import dataclass
from typing import Iterable, Sequence

from .algebra import QQ, AlgebraError, BasedAlgebra, build_algebra
from .partitions import (
    Partition,
    PartitionError,
    SeedFamily,
    discrete_partition,
    is_refinement,
    meet,
    normalize,
    seed_family,
    star_image,
)

__all__ = [
    "FusionOutcome",
    "RefineFailure",
    "OracleAmbiguityError",
    "fused_coefficient",
    "is_semifusion",
    "is_fusion",
    "refine_step",
    "minimal_isolating_semifusion",
    "minimal_isolating_fusion",
    "fused_algebra",
    "trivial_partition",
    "brute_force_minimal",
]


@dataclass(frozen=True)
class RefineFailure:
    """A protected seed set was split; records the witnesses."""

    seed: tuple[int, ...]
    indices: tuple[int, int]
    block_pair: tuple[tuple[int, ...], tuple[int, ...]] | None

    def __str__(self) -> str:
        where = f" at block pair {self.block_pair}" if self.block_pair else ""
        return f"seed {self.seed} split between indices {self.indices}{where}"


@dataclass(frozen=True)
class FusionOutcome:
    """Result of an isolating fusion/semifusion run."""

    status: str  # "fusion" | "semifusion" | "relaxed" | "failed"
    partition: Partition
    fused: BasedAlgebra | None
    seed_preserved: bool
    failure: RefineFailure | None = None

    @property
    def ok(self) -> bool:
        return self.status != "failed"


class OracleAmbiguityError(RuntimeError):
    """The brute-force search found more than one coarsest isolating partition."""


# ---------------------------------------------------------------------------
# Semifusion predicate and fused coefficients
# ---------------------------------------------------------------------------


def fused_coefficient(alg: BasedAlgebra, iset: Iterable[int], jset: Iterable[int], k: int) -> QQ:
    """sum_{i in I} sum_{j in J} lam[i,j,k]."""
    if not 0 <= k < alg.rank:
        raise AlgebraError(f"index {k} out of range")
    total: QQ = 0
    for i in iset:
        if not 0 <= i < alg.rank:
            raise AlgebraError(f"index {i} out of range")
        for j in jset:
            if not 0 <= j < alg.rank:
                raise AlgebraError(f"index {j} out of range")
            total += alg.coefficient(i, j, k)
    return total


def _pair_tables(alg: BasedAlgebra, blk: Sequence[int]) -> dict[tuple[int, int], dict[int, QQ]]:
    """Accumulate lam over block pairs: (a, b) -> {k: sum}."""
    acc: dict[tuple[int, int], dict[int, QQ]] = {}
    for i, j, k, v in alg.items():
        key = (blk[i], blk[j])
        d = acc.get(key)
        if d is None:
            d = acc[key] = {}
        d[k] = d.get(k, 0) + v
    return acc


def is_semifusion(alg: BasedAlgebra, p: Partition) -> bool:
    """True iff the characteristic functions of p span a subalgebra."""
    if p.rank != alg.rank:
        raise PartitionError(f"partition rank {p.rank} does not match algebra rank {alg.rank}")
    blk = p.block_index
    sizes = [len(b) for b in p.blocks]
    for d in _pair_tables(alg, blk).values():
        per_block: dict[int, tuple[int, QQ]] = {}
        for k, v in d.items():
            if not v:
                continue
            c = blk[k]
            seen = per_block.get(c)
            if seen is None:
                per_block[c] = (1, v)
            else:
                count, val = seen
                if val != v:
                    return False
                per_block[c] = (count + 1, val)
        for c, (count, _val) in per_block.items():
            if count != sizes[c]:
                return False
    return True


def is_fusion(alg: BasedAlgebra, p: Partition) -> bool:
    """Semifusion that is star-invariant and keeps identity indices in identity-only blocks."""
    if alg.star is None:
        raise AlgebraError("is_fusion requires a star involution")
    support = alg.identity_support
    for block in p.blocks:
        bs = set(block)
        if bs & support and not bs <= support:
            return False
    if star_image(p, alg.star) != p:
        return False
    return is_semifusion(alg, p)


def trivial_partition(alg: BasedAlgebra) -> Partition:
    """{identity support, everything else} (the 2-block pattern when homogeneous)."""
    support = sorted(alg.identity_support)
    rest = [i for i in range(alg.rank) if i not in alg.identity_support]
    blocks = [support] + ([rest] if rest else [])
    return normalize(blocks, alg.rank)


# ---------------------------------------------------------------------------
# Refinement rounds
# ---------------------------------------------------------------------------


def _one_round(
    alg: BasedAlgebra,
    blocks: list[tuple[int, ...]],
    protected: Sequence[tuple[int, ...]],
    strict: bool,
) -> tuple[list[tuple[int, ...]], bool, RefineFailure | None]:
    """Split every block by full coefficient signatures; returns (blocks, changed, failure)."""
    r = alg.rank
    blk = [0] * r
    for b, block in enumerate(blocks):
        for i in block:
            blk[i] = b
    staged: list[dict] = [dict() for _ in range(r)]
    for i, j, k, v in alg.items():
        d = staged[k]
        key = (blk[i], blk[j])
        d[key] = d.get(key, 0) + v
    sig_of: list[frozenset] = [
        frozenset((key, v) for key, v in staged[k].items() if v) for k in range(r)
    ]

    if strict:
        for seed in protected:
            first = seed[0]
            tag = (blk[first], sig_of[first])
            for k in seed[1:]:
                if (blk[k], sig_of[k]) != tag:
                    pair = _witness_pair(staged[first], staged[k], blocks)
                    return blocks, False, RefineFailure(seed, (first, k), pair)

    new_blocks: list[tuple[int, ...]] = []
    changed = False
    for block in blocks:
        if len(block) == 1:
            new_blocks.append(block)
            continue
        groups: dict[frozenset, list[int]] = {}
        for k in block:
            groups.setdefault(sig_of[k], []).append(k)
        if len(groups) == 1:
            new_blocks.append(block)
        else:
            changed = True
            for g in sorted(groups.values(), key=lambda g: g[0]):
                new_blocks.append(tuple(g))
    return new_blocks, changed, None


def _witness_pair(d1: dict, d2: dict, blocks) -> tuple[tuple[int, ...], tuple[int, ...]] | None:
    for key in sorted(set(d1) | set(d2)):
        if d1.get(key, 0) != d2.get(key, 0):
            a, b = key
            return blocks[a], blocks[b]
    return None


def refine_step(
    alg: BasedAlgebra,
    p: Partition,
    protected: SeedFamily | Iterable[Iterable[int]],
    strict: bool = True,
) -> Partition | RefineFailure:
    """One signature-splitting round over the given partition.

    Returns the refined partition (possibly p itself when already stable) or
    a RefineFailure in strict mode when a protected set is split.
    """
    fam = protected if isinstance(protected, SeedFamily) else seed_family(protected)
    if p.rank != alg.rank:
        raise PartitionError("partition rank does not match algebra rank")
    blocks, changed, failure = _one_round(alg, list(p.blocks), fam.sets, strict)
    if failure is not None:
        return failure
    if not changed:
        return p
    return normalize(blocks, alg.rank)


def _initial_blocks(alg: BasedAlgebra, seeds: SeedFamily) -> list[tuple[int, ...]]:
    """Seed sets as blocks, remaining identity indices as one block, rest as one block."""
    support = alg.identity_support
    seeded = seeds.indices()
    for s in seeds:
        ss = set(s)
        if ss & support and not ss <= support:
            raise PartitionError(
                f"seed {tuple(s)} mixes identity and non-identity indices"
            )
        if any(not 0 <= i < alg.rank for i in s):
            raise PartitionError(f"seed {tuple(s)} out of range for rank {alg.rank}")
    blocks = [tuple(s) for s in seeds]
    ident_rest = tuple(sorted(support - seeded))
    if ident_rest:
        blocks.append(ident_rest)
    rest = tuple(sorted(set(range(alg.rank)) - seeded - support))
    if rest:
        blocks.append(rest)
    return blocks


def _fixed_point(
    alg: BasedAlgebra,
    blocks: list[tuple[int, ...]],
    protected: Sequence[tuple[int, ...]],
    strict: bool,
) -> tuple[list[tuple[int, ...]], RefineFailure | None, int]:
    rounds = 0
    while True:
        blocks, changed, failure = _one_round(alg, blocks, protected, strict)
        rounds += 1
        if failure is not None:
            return blocks, failure, rounds
        if not changed:
            return blocks, None, rounds
        if rounds > alg.rank + 1:
            raise RuntimeError("refinement failed to stabilize within rank rounds")


def _seeds_preserved(p: Partition, seeds: SeedFamily) -> bool:
    return all(p.has_block(s) for s in seeds)


def minimal_isolating_semifusion(
    alg: BasedAlgebra,
    seeds: SeedFamily | Iterable[Iterable[int]],
    strict: bool = True,
) -> FusionOutcome:
    """Coarsest semifusion carrying every seed set as a block, by iterated refinement.

    In strict mode a split seed aborts with status ``failed``; otherwise the
    run continues and reports the refined result with status ``relaxed``.
    """
    fam = seeds if isinstance(seeds, SeedFamily) else seed_family(seeds)
    blocks = _initial_blocks(alg, fam)
    blocks, failure, _ = _fixed_point(alg, blocks, fam.sets, strict)
    partition = normalize(blocks, alg.rank)
    if failure is not None:
        return FusionOutcome("failed", partition, None, False, failure)
    preserved = _seeds_preserved(partition, fam)
    status = "semifusion" if preserved else "relaxed"
    if not is_semifusion(alg, partition):
        raise RuntimeError("refinement fixed point is not a semifusion; internal invariant broken")
    return FusionOutcome(status, partition, fused_algebra(alg, partition, check=False), preserved)


def minimal_isolating_fusion(
    alg: BasedAlgebra,
    seeds: SeedFamily | Iterable[Iterable[int]],
    strict: bool = True,
) -> FusionOutcome:
    """Coarsest star-invariant isolating fusion, by refinement with star closure.

    Seeds are augmented with their star images; a seed that only partially
    overlaps its own star image (or another augmented set) admits no fusion
    and yields status ``failed`` immediately.  Whenever the semifusion fixed
    point is not star-invariant it is met with its star image and refinement
    restarts, until a fusion emerges or a seed is violated.
    """
    if alg.star is None:
        raise AlgebraError("minimal_isolating_fusion requires a star involution")
    fam = seeds if isinstance(seeds, SeedFamily) else seed_family(seeds)
    star = alg.star

    augmented: list[tuple[int, ...]] = []
    for s in itertools.chain(fam.sets, (tuple(sorted(star[i] for i in s)) for s in fam.sets)):
        for t in augmented:
            inter = set(s) & set(t)
            if inter and set(s) != set(t):
                return FusionOutcome(
                    "failed",
                    discrete_partition(alg.rank),
                    None,
                    False,
                    RefineFailure(tuple(s), (min(inter), min(inter)), None),
                )
        if tuple(s) not in augmented:
            augmented.append(tuple(s))
    aug_fam = SeedFamily(tuple(augmented))

    blocks = _initial_blocks(alg, aug_fam)
    rounds_total = 0
    while True:
        blocks, failure, rounds = _fixed_point(alg, blocks, aug_fam.sets, strict)
        rounds_total += rounds
        partition = normalize(blocks, alg.rank)
        if failure is not None:
            return FusionOutcome("failed", partition, None, False, failure)
        mirrored = star_image(partition, star)
        if mirrored == partition:
            break
        refined = meet(partition, mirrored)
        if refined == partition:
            raise RuntimeError("star closure produced no refinement; internal invariant broken")
        blocks = list(refined.blocks)
        if rounds_total > 2 * alg.rank + 4:
            raise RuntimeError("fusion loop failed to stabilize")
    preserved = _seeds_preserved(partition, fam)
    status = "fusion" if preserved else "relaxed"
    if not is_fusion(alg, partition):
        raise RuntimeError("fusion fixed point fails the fusion predicate; internal invariant broken")
    return FusionOutcome(status, partition, fused_algebra(alg, partition, check=False), preserved)


# ---------------------------------------------------------------------------
# Fused algebra construction
# ---------------------------------------------------------------------------


def fused_algebra(alg: BasedAlgebra, p: Partition, check: bool = True) -> BasedAlgebra:
    """Algebra of rank |p| on the characteristic functions of a semifusion."""
    if check and not is_semifusion(alg, p):
        raise AlgebraError("partition is not a semifusion of the algebra")
    support = alg.identity_support
    fused_support = []
    for c, block in enumerate(p.blocks):
        bs = set(block)
        if bs & support:
            if not bs <= support:
                raise AlgebraError("semifusion block mixes identity and non-identity indices")
            fused_support.append(c)
    blk = p.block_index
    rep = {c: block[0] for c, block in enumerate(p.blocks)}
    lam: dict[tuple[int, int, int], QQ] = {}
    for i, j, k, v in alg.items():
        c = blk[k]
        if k == rep[c]:
            key = (blk[i], blk[j], c)
            lam[key] = lam.get(key, 0) + v

    star = None
    if alg.star is not None:
        images = []
        ok = True
        for block in p.blocks:
            img = frozenset(alg.star[i] for i in block)
            if img in p.block_sets:
                images.append(p.block_index[min(img)])
            else:
                ok = False
                break
        if ok:
            star = tuple(images)
    return build_algebra(lam, fused_support, star=star, rank=len(p))


# ---------------------------------------------------------------------------
# Brute-force oracle
# ---------------------------------------------------------------------------

BRUTE_FORCE_RANK_CAP = 12

_oracle_cache: "weakref.WeakKeyDictionary[BasedAlgebra, dict]" = weakref.WeakKeyDictionary()


def _set_partitions(items: list[int]):
    """All set partitions of a list, as lists of lists."""
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in _set_partitions(rest):
        for i in range(len(part)):
            yield part[:i] + [[first] + part[i]] + part[i + 1:]
        yield [[first]] + part


def _oracle_tables(alg: BasedAlgebra) -> dict:
    """Every identity-separated semifusion of alg, with fusion flags and a block index."""
    cached = _oracle_cache.get(alg)
    if cached is not None:
        return cached
    support = sorted(alg.identity_support)
    rest = [i for i in range(alg.rank) if i not in alg.identity_support]
    semis: list[Partition] = []
    fusion_flags: list[bool] = []
    for ident_part in _set_partitions(support):
        for rest_part in _set_partitions(rest):
            p = normalize(ident_part + rest_part, alg.rank)
            if is_semifusion(alg, p):
                semis.append(p)
                if alg.star is not None:
                    fusion_flags.append(star_image(p, alg.star) == p)
                else:
                    fusion_flags.append(False)
    index: dict[frozenset[int], set[int]] = {}
    for pos, p in enumerate(semis):
        for block in p.blocks:
            index.setdefault(frozenset(block), set()).add(pos)
    tables = {"semifusions": semis, "fusion_flags": fusion_flags, "index": index}
    _oracle_cache[alg] = tables
    return tables


def brute_force_minimal(
    alg: BasedAlgebra,
    seeds: SeedFamily | Iterable[Iterable[int]],
    want_fusion: bool = False,
    rank_cap: int = BRUTE_FORCE_RANK_CAP,
) -> Partition | None:
    """Exhaustive search for the coarsest isolating semifusion (or fusion).

    Enumerates every partition that never mixes identity and non-identity
    indices, keeps those passing the semifusion (resp. fusion) predicate with
    all seed sets as blocks, and returns the unique coarsest one, or None.
    A non-unique coarsest element raises OracleAmbiguityError.
    """
    if alg.rank > rank_cap:
        raise AlgebraError(f"rank {alg.rank} exceeds brute-force cap {rank_cap}")
    fam = seeds if isinstance(seeds, SeedFamily) else seed_family(seeds)
    for s in fam:
        ss = set(s)
        if ss & alg.identity_support and not ss <= alg.identity_support:
            raise PartitionError(f"seed {tuple(s)} mixes identity and non-identity indices")
    if want_fusion and alg.star is None:
        raise AlgebraError("fusion oracle requires a star involution")

    tables = _oracle_tables(alg)
    candidate_ids: set[int] | None = None
    for s in fam:
        ids = tables["index"].get(frozenset(s), set())
        candidate_ids = ids.copy() if candidate_ids is None else candidate_ids & ids
    if candidate_ids is None:
        candidate_ids = set(range(len(tables["semifusions"])))
    hits = [
        tables["semifusions"][pos]
        for pos in sorted(candidate_ids)
        if not want_fusion or tables["fusion_flags"][pos]
    ]
    if not hits:
        return None
    coarsest = [
        p
        for p in hits
        if not any(q is not p and is_refinement(p, q) for q in hits)
    ]
    if len(coarsest) != 1:
        raise OracleAmbiguityError(
            f"{len(coarsest)} incomparable coarsest isolating partitions found: "
            + "; ".join(str(p) for p in coarsest)
        )
    return coarsest[0]
