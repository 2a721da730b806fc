"""Fusion enumeration, relabeling-invariant fingerprints, algebraic
automorphisms, and assembly of the fusion lattice.

Seed evaluations are independent; ``enumerate_seed_fusions`` and
``random_seed_search`` accept a ``jobs`` argument and shard the seed list over
a process pool, merging results in canonical partition order so the output is
identical at any worker count.
"""
from __future__ import annotations

import hashlib
import itertools
import random
from dataclasses import dataclass
from typing import Iterable, Sequence

from .algebra import BasedAlgebra, basis_vector, valency
from .eigen import minimal_polynomial
from .engine import (
    FusionOutcome,
    fused_algebra,
    is_fusion,
    minimal_isolating_fusion,
    trivial_partition,
)
from .partitions import (
    Partition,
    SeedFamily,
    discrete_partition,
    is_refinement,
    seed_family,
)

__all__ = [
    "Fingerprint",
    "FusionRecord",
    "LatticeGraph",
    "fingerprint",
    "enumerate_seed_fusions",
    "random_seed_search",
    "build_fusion_lattice",
    "algebraic_automorphism_group",
    "apply_to_partition",
    "AUTOMORPHISM_RANK_CAP",
]

AUTOMORPHISM_RANK_CAP = 40


@dataclass(frozen=True)
class Fingerprint:
    """Relabeling-invariant summary of a fused algebra."""

    rank: int
    pairs: tuple[tuple[object, tuple[int, ...]], ...]  # sorted (valency, minpoly coeffs)
    constants: tuple[object, ...]  # sorted multiset of nonzero structure constants

    def short_hash(self) -> str:
        return hashlib.sha256(repr(self).encode()).hexdigest()[:12]


@dataclass(frozen=True)
class FusionRecord:
    """A distinct fusion partition with every seed family that produced it."""

    partition: Partition
    outcome: FusionOutcome
    seeds: tuple[SeedFamily, ...]


@dataclass(frozen=True)
class LatticeGraph:
    """Fusion partitions ordered by refinement; edges are covering pairs (finer -> coarser)."""

    nodes: tuple[tuple[Partition, Fingerprint], ...]
    edges: tuple[tuple[int, int], ...]


def fingerprint(alg: BasedAlgebra, p: Partition) -> Fingerprint:
    fused = fused_algebra(alg, p)
    r = fused.rank
    pairs = []
    for i in range(r):
        mp = minimal_polynomial(fused, basis_vector(r, i))
        val = valency(fused, i) if fused.star is not None else None
        pairs.append((val, mp.coeffs))
    pairs.sort(key=lambda t: (t[0] is None, t[0] if t[0] is not None else 0, t[1]))
    constants = tuple(sorted((v for *_ijk, v in fused.items())))
    return Fingerprint(r, tuple(pairs), constants)


def apply_to_partition(sigma: Sequence[int], p: Partition) -> Partition:
    """Blockwise image of a partition under an index permutation."""
    from .partitions import normalize

    return normalize(([sigma[i] for i in b] for b in p.blocks), p.rank)


# ---------------------------------------------------------------------------
# Seed enumeration
# ---------------------------------------------------------------------------


def _colex(subsets: Iterable[tuple[int, ...]]) -> list[tuple[int, ...]]:
    return sorted(subsets, key=lambda s: tuple(reversed(s)))


_worker_algebra: BasedAlgebra | None = None


def _init_worker(alg: BasedAlgebra) -> None:
    global _worker_algebra
    _worker_algebra = alg


def _run_family_worker(family) -> tuple[tuple[tuple[int, ...], ...], FusionOutcome]:
    return family, minimal_isolating_fusion(_worker_algebra, seed_family(family), strict=True)


def _evaluate_families(alg: BasedAlgebra, families: list, jobs: int):
    if jobs and jobs > 1 and len(families) > 1:
        import multiprocessing

        with multiprocessing.Pool(jobs, initializer=_init_worker, initargs=(alg,)) as pool:
            results = pool.map(_run_family_worker, families, chunksize=64)
    else:
        results = [
            (fam, minimal_isolating_fusion(alg, seed_family(fam), strict=True))
            for fam in families
        ]
    return results


def _collect(results) -> list[FusionRecord]:
    by_partition: dict[Partition, tuple[FusionOutcome, list[SeedFamily]]] = {}
    for family, outcome in results:
        if not outcome.ok:
            continue
        entry = by_partition.get(outcome.partition)
        if entry is None:
            by_partition[outcome.partition] = (outcome, [seed_family(family)])
        else:
            entry[1].append(seed_family(family))
    records = [
        FusionRecord(part, outcome, tuple(seeds))
        for part, (outcome, seeds) in by_partition.items()
    ]
    records.sort(key=lambda rec: (-len(rec.partition), rec.partition.blocks))
    return records


def enumerate_seed_fusions(
    alg: BasedAlgebra,
    max_seed_size: int,
    multi: int | None = None,
    combine_all: bool = False,
    jobs: int = 1,
) -> list[FusionRecord]:
    """Strict isolating fusions from every single seed set of bounded size.

    With ``multi`` set, families of up to that many disjoint sets are also
    tried; by default only sets that succeeded alone are combined, while
    ``combine_all`` forces combinations of arbitrary candidate sets (useful
    for probing completeness of the successful-singles heuristic).
    """
    if alg.star is None:
        raise ValueError("fusion enumeration requires a star involution")
    non_identity = [i for i in range(alg.rank) if i not in alg.identity_support]
    singles = _colex(
        s
        for size in range(1, max_seed_size + 1)
        for s in itertools.combinations(non_identity, size)
    )
    results = _evaluate_families(alg, [(s,) for s in singles], jobs)
    successful = [fam[0] for fam, outcome in results if outcome.ok]
    if multi and multi >= 2:
        pool_sets = singles if combine_all else successful
        multi_families = []
        for t in range(2, multi + 1):
            for combo in itertools.combinations(pool_sets, t):
                flat = [i for s in combo for i in s]
                if len(set(flat)) == len(flat):
                    multi_families.append(tuple(combo))
        results += _evaluate_families(alg, multi_families, jobs)
    return _collect(results)


def random_seed_search(
    alg: BasedAlgebra,
    samples: int,
    size_range: tuple[int, int],
    family_size: int = 1,
    rng_seed: int | None = None,
    jobs: int = 1,
    planted: Sequence[Sequence[int]] | None = None,
) -> list[FusionRecord]:
    """Reproducible random sampling of disjoint seed families.

    ``rng_seed`` is mandatory so that identical invocations give identical
    results.  ``planted`` families, when given, are evaluated alongside the
    random ones (handy for regression fixtures).
    """
    if alg.star is None:
        raise ValueError("fusion search requires a star involution")
    if rng_seed is None:
        raise ValueError("rng_seed is required for reproducibility")
    lo, hi = size_range
    non_identity = [i for i in range(alg.rank) if i not in alg.identity_support]
    if not (1 <= lo <= hi <= len(non_identity)):
        raise ValueError(f"invalid size range {size_range}")
    rng = random.Random(rng_seed)
    families: list[tuple[tuple[int, ...], ...]] = []
    if planted:
        families.append(tuple(tuple(sorted(s)) for s in planted))
    for _ in range(samples):
        sizes = [rng.randint(lo, hi) for _ in range(family_size)]
        if sum(sizes) > len(non_identity):
            continue
        chosen = rng.sample(non_identity, sum(sizes))
        family = []
        at = 0
        for sz in sizes:
            family.append(tuple(sorted(chosen[at : at + sz])))
            at += sz
        families.append(tuple(family))
    results = _evaluate_families(alg, families, jobs)
    return _collect(results)


# ---------------------------------------------------------------------------
# Lattice assembly
# ---------------------------------------------------------------------------


def build_fusion_lattice(alg: BasedAlgebra, partitions: Iterable[Partition]) -> LatticeGraph:
    """Hasse diagram of the given fusion partitions under refinement.

    The discrete partition and the trivial fusion are added when they pass
    the fusion predicate; every input partition must already be a fusion.
    """
    pool: list[Partition] = []
    for p in partitions:
        if not is_fusion(alg, p):
            raise ValueError(f"partition {p} is not a fusion")
        if p not in pool:
            pool.append(p)
    for extra in (discrete_partition(alg.rank), trivial_partition(alg)):
        if extra not in pool and is_fusion(alg, extra):
            pool.append(extra)
    pool.sort(key=lambda p: (-len(p), p.blocks))
    nodes = tuple((p, fingerprint(alg, p)) for p in pool)
    edges = []
    for a, p in enumerate(pool):
        for b, q in enumerate(pool):
            if a == b or not is_refinement(p, q) or p == q:
                continue
            covered = any(
                c not in (a, b)
                and is_refinement(p, pool[c])
                and is_refinement(pool[c], q)
                for c in range(len(pool))
            )
            if not covered:
                edges.append((a, b))
    return LatticeGraph(nodes, tuple(sorted(edges)))


# ---------------------------------------------------------------------------
# Algebraic automorphisms
# ---------------------------------------------------------------------------


def algebraic_automorphism_group(
    alg: BasedAlgebra, rank_cap: int = AUTOMORPHISM_RANK_CAP
) -> list[tuple[int, ...]]:
    """All index permutations preserving the structure tensor.

    A valid permutation maps the identity support onto itself, commutes with
    the star involution when present, and satisfies
    lam[s(i), s(j), s(k)] = lam[i, j, k] for all triples.  Backtracking is
    pruned by per-index invariants (valency when available, minimal
    polynomial of the basis element, and row-profile multisets).
    """
    r = alg.rank
    if r > rank_cap:
        raise ValueError(f"rank {r} exceeds automorphism cap {rank_cap}")
    support = alg.identity_support
    star = alg.star

    profiles: list[tuple] = []
    for i in range(r):
        mp = minimal_polynomial(alg, basis_vector(r, i))
        val = valency(alg, i) if star is not None else None
        row_counts: dict = {}
        for a, b, k, v in alg.items():
            if a == i:
                row_counts[("r", v)] = row_counts.get(("r", v), 0) + 1
            if b == i:
                row_counts[("c", v)] = row_counts.get(("c", v), 0) + 1
            if k == i:
                row_counts[("t", v)] = row_counts.get(("t", v), 0) + 1
        profiles.append(
            (
                i in support,
                star is not None and star[i] == i,
                repr(val),
                mp.coeffs,
                tuple(sorted(row_counts.items())),
            )
        )

    candidates: list[list[int]] = [
        [j for j in range(r) if profiles[j] == profiles[i]] for i in range(r)
    ]
    lam = {(i, j, k): v for i, j, k, v in alg.items()}
    triples_by_index: list[list[tuple[int, int, int]]] = [[] for _ in range(r)]
    for (i, j, k) in lam:
        for t in {i, j, k}:
            triples_by_index[t].append((i, j, k))

    order = sorted(range(r), key=lambda i: len(candidates[i]))
    sigma = [-1] * r
    used = [False] * r
    found: list[tuple[int, ...]] = []

    def consistent(t: int) -> bool:
        if star is not None:
            s = star[t]
            if sigma[s] != -1 and sigma[star[t]] != star[sigma[t]]:
                return False
        for (i, j, k) in triples_by_index[t]:
            si, sj, sk = sigma[i], sigma[j], sigma[k]
            if si == -1 or sj == -1 or sk == -1:
                continue
            if lam.get((si, sj, sk)) != lam[(i, j, k)]:
                return False
        return True

    def backtrack(pos: int) -> None:
        if pos == len(order):
            found.append(tuple(sigma))
            return
        t = order[pos]
        for img in candidates[t]:
            if used[img]:
                continue
            sigma[t] = img
            used[img] = True
            if consistent(t):
                backtrack(pos + 1)
            sigma[t] = -1
            used[img] = False

    backtrack(0)
    # the tensor has equal nonzero counts on both sides for a bijection, and
    # profiles force identity/star compatibility, but verify exactly anyway
    verified = []
    for s in found:
        if all(lam.get((s[i], s[j], s[k])) == v for (i, j, k), v in lam.items()):
            if {s[e] for e in support} == support:
                if star is None or all(s[star[i]] == star[s[i]] for i in range(r)):
                    verified.append(s)
    return sorted(verified)
