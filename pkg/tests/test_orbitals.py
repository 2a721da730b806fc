import pytest

from isofusion.algebra import valency
from isofusion.orbitals import (
    GroupError,
    PermGroup,
    coset_permutation_action,
    format_perm_group,
    group_from_table,
    orbital_configuration,
    parse_perm_group,
    regular_action,
    relation_of_element,
    semidirect_group,
)
from isofusion.schemes import algebra_from_relations

from conftest import G96_MATRIX


class TestSemidirectGroup:
    def test_order_96(self, g96):
        assert len(g96) == 96

    def test_degenerate_c5(self):
        g = semidirect_group(1, 5, [[1, 0], [0, 1]])
        assert len(g) == 5

    def test_swap_action_order_8(self):
        g = semidirect_group(2, 2, [[0, 1], [1, 0]])
        assert len(g) == 8
        # explicit closure sanity: x and y are swapped by conjugation with z
        x, y, z = ((1, 0), 0), ((0, 1), 0), ((0, 0), 1)
        assert g.product(z, x, g.inverse(z)) == y

    def test_non_invertible_rejected(self):
        with pytest.raises(GroupError):
            semidirect_group(4, 6, [[2, 0], [0, 1]])

    def test_wrong_order_rejected(self):
        # order-4 matrix mod 5 does not satisfy M^6 = I
        with pytest.raises(GroupError):
            semidirect_group(5, 6, [[0, 4], [1, 0]])

    def test_z_cubed_not_central(self, g96_named):
        g, x, y, z = g96_named
        z3 = g.power(z, 3)
        assert g.product(z3, x) != g.product(x, z3)


class TestActions:
    def test_regular_action_c2(self):
        g = semidirect_group(1, 2, [[1, 0], [0, 1]])
        act = regular_action(g)
        assert act.degree == 2
        assert act.generators == ((1, 0),)

    def test_regular_action_c5(self):
        act = regular_action(semidirect_group(1, 5, [[1, 0], [0, 1]]))
        assert act.degree == 5
        p = act.generators[0]
        seen, at = set(), 0
        for _ in range(5):
            at = p[at]
            seen.add(at)
        assert len(seen) == 5

    def test_g96_regular_degree(self, g96):
        assert regular_action(g96).degree == 96

    def test_coset_action_degree_48(self, g96_coset):
        group, subgroup, rel, _ = g96_coset
        assert rel.order == 48

    def test_whole_group_degree_1(self, g96):
        act = coset_permutation_action(g96, list(g96.elements))
        assert act.degree == 1

    def test_identity_subgroup_is_regular(self, g96):
        act = coset_permutation_action(g96, [g96.identity])
        assert act.degree == 96

    def test_non_subgroup_rejected(self, g96_named):
        g, x, y, z = g96_named
        with pytest.raises(GroupError):
            coset_permutation_action(g, [g.identity, x])


class TestOrbitalConfiguration:
    def test_trivial_group_full_matrix(self, m3_rel):
        assert m3_rel.order == 3 and m3_rel.rank == 9

    def test_c5_rank_5(self):
        act = regular_action(semidirect_group(1, 5, [[1, 0], [0, 1]]))
        assert orbital_configuration(act).rank == 5

    def test_g96_coset_rank_30(self, g96_coset):
        *_, rel, alg = g96_coset
        assert rel.rank == 30
        assert len(alg.identity_support) == 1  # transitive: one diagonal color


class TestRelationOfElement:
    def test_identity_is_diagonal(self, g96_coset):
        group, subgroup, rel, _ = g96_coset
        assert relation_of_element(group, subgroup, rel, group.identity) == 0

    def test_g96_seed_valencies(self, g96_coset):
        group, subgroup, rel, alg = g96_coset
        x, z = ((1, 0), 0), ((0, 0), 1)
        e1 = group.product(z, z, x, x)
        e2 = group.product(z, z, x)
        e3 = group.product(z, z, x, x, x, ((0, 1), 0))
        colors = {relation_of_element(group, subgroup, rel, e) for e in (e1, e2, e3)}
        assert len(colors) == 3
        assert sorted(int(valency(alg, c)) for c in colors) == [1, 2, 2]

    def test_double_coset_invariance(self, g96_coset):
        group, subgroup, rel, _ = g96_coset
        x, z = ((1, 0), 0), ((0, 0), 1)
        g = group.product(z, x)
        c = relation_of_element(group, subgroup, rel, g)
        for h1 in subgroup:
            for h2 in subgroup:
                assert relation_of_element(group, subgroup, rel, group.product(h1, g, h2)) == c

    def test_non_element_rejected(self, g96_coset):
        group, subgroup, rel, _ = g96_coset
        with pytest.raises(GroupError):
            relation_of_element(group, subgroup, rel, ((5, 0), 0))


class TestGroupFile:
    def test_round_trip(self):
        g = PermGroup(4, ((1, 0, 3, 2), (0, 2, 1, 3)))
        assert parse_perm_group(format_perm_group(g)) == g

    def test_bad_generator(self):
        with pytest.raises(GroupError):
            parse_perm_group("degree 3\ngen 0 0 1\n")

    def test_missing_degree(self):
        with pytest.raises(GroupError):
            parse_perm_group("gen 0 1\n")


class TestGroupFromTable:
    def test_klein_four(self):
        els = ["e", "a", "b", "c"]
        table = [[0, 1, 2, 3], [1, 0, 3, 2], [2, 3, 0, 1], [3, 2, 1, 0]]
        g = group_from_table(els, table)
        assert len(g) == 4 and g.identity == "e"

    def test_broken_table_rejected(self):
        els = ["e", "a"]
        with pytest.raises(GroupError):
            group_from_table(els, [[0, 1], [1, 1]])


# ---------------------------------------------------------------------------
# Invariants
# ---------------------------------------------------------------------------


def test_orbital_outputs_are_coherent():
    import random

    from oracles import random_permutation

    rng = random.Random(96219)
    for _ in range(8):
        n = rng.randint(3, 9)
        gens = tuple(random_permutation(rng, n) for _ in range(rng.randint(0, 2)))
        rel = orbital_configuration(PermGroup(n, gens))
        alg = algebra_from_relations(rel)  # raises if not coherent
        # color class sizes sum to n^2; diagonal colors partition the diagonal
        classes = rel.color_classes()
        assert sum(len(c) for c in classes) == n * n
        diag_pairs = [p for c in rel.diagonal_colors() for p in classes[c]]
        assert sorted(diag_pairs) == [(x, x) for x in range(n)]


def test_transitive_rank_equals_stabilizer_orbits(g96_coset):
    group, subgroup, rel, _ = g96_coset
    # for the transitive coset action, rank = number of H-orbits on points,
    # H the stabilizer of point 0, i.e. the number of double cosets
    from isofusion.orbitals import _coset_table

    reps, coset_of = _coset_table(group, subgroup)
    h_orbits = set()
    for g in group.elements:
        h_orbits.add(frozenset(coset_of[group.product(h, g)] for h in subgroup))
    assert rel.rank == len({frozenset(o) for o in h_orbits})


def test_relation_constant_on_double_cosets_exhaustive(g96_coset):
    group, subgroup, rel, _ = g96_coset
    from isofusion.orbitals import _coset_table

    _, coset_of = _coset_table(group, subgroup)
    by_color = {}
    for g in group.elements:
        c = rel.entries[0][coset_of[g]]
        dc = frozenset(group.product(h1, g, h2) for h1 in subgroup for h2 in subgroup)
        by_color.setdefault(dc, set()).add(c)
    assert all(len(cs) == 1 for cs in by_color.values())
    assert len(by_color) == 30
