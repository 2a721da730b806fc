import random

import pytest

from isofusion.engine import fused_algebra, minimal_isolating_fusion
from isofusion.partitions import normalize
from isofusion.schemes import (
    RelationMatrix,
    SchemeError,
    algebra_from_relations,
    format_relation_matrix,
    fuse_relations,
    parse_relation_matrix,
)

from oracles import is_coherent_by_recount, random_scheme_corpus


class TestParse:
    def test_bracketed(self):
        m = parse_relation_matrix("[[0,1],[1,0]]")
        assert m.order == 2 and m.rank == 2

    def test_plain(self):
        m = parse_relation_matrix("2\n0 1\n1 0")
        assert m.entries == ((0, 1), (1, 0))

    def test_both_syntaxes_agree(self):
        a = parse_relation_matrix("[[0,1,2],[2,0,1],[1,2,0]]")
        b = parse_relation_matrix("3\n0 1 2\n2 0 1\n1 2 0")
        assert a == b

    def test_assignment_prefix_ignored(self):
        m = parse_relation_matrix("M176 := [[0,1],[1,0]];")
        assert m.entries == ((0, 1), (1, 0))

    def test_ragged_rejected(self):
        with pytest.raises(SchemeError):
            parse_relation_matrix("2\n0 1\n1")

    def test_non_integer_rejected(self):
        with pytest.raises(SchemeError):
            parse_relation_matrix("[[0,x],[1,0]]")

    def test_unbalanced_brackets(self):
        with pytest.raises(SchemeError):
            parse_relation_matrix("[[0,1],[1,0]")

    def test_one_based_reindexed(self):
        m = parse_relation_matrix("[[1,2],[2,1]]")
        assert m.entries == ((0, 1), (1, 0))

    def test_round_trip(self, c5_rel):
        assert parse_relation_matrix(format_relation_matrix(c5_rel)) == c5_rel


class TestAlgebraFromRelations:
    def test_c2(self):
        alg = algebra_from_relations(parse_relation_matrix("[[0,1],[1,0]]"))
        assert alg.rank == 2
        assert alg.coefficient(1, 1, 0) == 1

    def test_c5_circulant(self, c5):
        assert c5.rank == 5
        assert c5.coefficient(1, 4, 0) == 1
        assert c5.coefficient(1, 1, 2) == 1

    def test_non_coherent_verdict_matches_recount(self):
        m = parse_relation_matrix("[[0,1,2],[1,0,1],[2,1,0]]")
        coherent = is_coherent_by_recount(m)
        if coherent:
            algebra_from_relations(m)
        else:
            with pytest.raises(SchemeError):
                algebra_from_relations(m)

    def test_fiber_condition(self):
        with pytest.raises(SchemeError, match="fiber"):
            algebra_from_relations(RelationMatrix(((0, 0), (0, 1))))


class TestFuseRelations:
    def test_pentagon_recolor(self, c5_rel):
        fused = fuse_relations(c5_rel, normalize([[0], [1, 4], [2, 3]], 5))
        assert fused.rank == 3
        assert fused.entries[0] == (0, 1, 2, 2, 1)

    def test_trivial(self, c5_rel):
        fused = fuse_relations(c5_rel, normalize([[0], [1, 2, 3, 4]], 5))
        assert fused.rank == 2

    def test_identity_partition(self, c5_rel):
        from isofusion.partitions import discrete_partition

        assert fuse_relations(c5_rel, discrete_partition(5)) == c5_rel


CORPUS_SEED = 413


def test_round_trip_fused_matrix_vs_fused_algebra():
    """algebra(fuse_relations(M,P)) == fused_algebra(algebra(M),P) up to the
    canonical renumbering induced by the partition order."""
    for m in random_scheme_corpus(CORPUS_SEED, 8, max_rank=8):
        alg = algebra_from_relations(m)
        non_identity = [i for i in range(alg.rank) if i not in alg.identity_support]
        rng = random.Random(CORPUS_SEED + m.order + m.rank)
        seed = [rng.sample(non_identity, min(2, len(non_identity)))]
        outcome = minimal_isolating_fusion(alg, seed, strict=False)
        if not outcome.ok:
            continue
        p = outcome.partition
        via_matrix = algebra_from_relations(fuse_relations(m, p))
        via_algebra = fused_algebra(alg, p)
        assert via_matrix.rank == via_algebra.rank
        assert via_matrix.items() == via_algebra.items()
        assert via_matrix.identity_support == via_algebra.identity_support
        assert via_matrix.star == via_algebra.star


def test_single_recolor_mutation_rejected():
    """Randomly recoloring one off-diagonal cell breaks coherence; the
    validator's verdict must match a full independent recount."""
    rng = random.Random(CORPUS_SEED + 1)
    corpus = random_scheme_corpus(CORPUS_SEED + 2, 5, max_rank=7)
    checked = 0
    for m in corpus:
        n = m.order
        for _ in range(3):
            x, y = rng.randrange(n), rng.randrange(n)
            if x == y:
                continue
            old = m.entries[x][y]
            offdiag = sorted(set(c for r_ in range(n) for c in m.entries[r_]) - m.diagonal_colors())
            new = rng.choice([c for c in offdiag if c != old])
            rows = [list(r_) for r_ in m.entries]
            rows[x][y] = new
            mutated = RelationMatrix(tuple(tuple(r_) for r_ in rows))
            ok_recount = is_coherent_by_recount(mutated)
            try:
                algebra_from_relations(mutated)
                ok_validator = True
            except SchemeError:
                ok_validator = False
            assert ok_validator == ok_recount
            checked += 1
    assert checked > 0
