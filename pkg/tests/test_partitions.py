import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from isofusion.partitions import (
    Partition,
    PartitionError,
    SeedFamily,
    discrete_partition,
    format_partition,
    is_refinement,
    meet,
    normalize,
    parse_partition,
    parse_seed_family,
    seed_family,
    star_image,
)


class TestNormalize:
    def test_sorts_blocks_canonically(self):
        p = normalize([[2, 1], [0]], 3)
        assert p.blocks == ((0,), (1, 2))

    def test_overlap_rejected(self):
        with pytest.raises(PartitionError, match="overlap"):
            normalize([[0, 1], [1, 2]], 3)

    def test_incomplete_cover_rejected(self):
        with pytest.raises(PartitionError, match="incomplete"):
            normalize([[0]], 2)

    def test_out_of_range_rejected(self):
        with pytest.raises(PartitionError):
            normalize([[0, 5]], 3)


class TestMeet:
    def test_basic(self):
        p = normalize([[0], [1, 2, 3]], 4)
        q = normalize([[0, 1], [2, 3]], 4)
        assert meet(p, q).blocks == ((0,), (1,), (2, 3))

    def test_idempotent(self):
        p = normalize([[0], [1, 2, 3]], 4)
        assert meet(p, p) == p

    def test_star_closed_fixed_point(self):
        p = normalize([[0], [1, 2], [3, 4]], 5)
        star = [0, 3, 4, 1, 2]
        assert meet(p, star_image(p, star)) == p

    def test_rank_mismatch(self):
        with pytest.raises(PartitionError):
            meet(discrete_partition(2), discrete_partition(3))


class TestStarImage:
    def test_setwise_image(self):
        p = normalize([[0], [1], [2, 3]], 4)
        assert star_image(p, [0, 2, 1, 3]).blocks == ((0,), (1, 3), (2,))

    def test_identity_star(self):
        p = normalize([[0, 2], [1]], 3)
        assert star_image(p, [0, 1, 2]) == p

    def test_inverse_closed_blocks(self):
        p = normalize([[0], [1, 4], [2, 3]], 5)
        assert star_image(p, [0, 4, 3, 2, 1]) == p

    def test_non_involution_rejected(self):
        with pytest.raises(PartitionError):
            star_image(discrete_partition(3), [1, 2, 0])


class TestRefinement:
    def test_finer(self):
        assert is_refinement(normalize([[0], [1], [2]], 3), normalize([[0], [1, 2]], 3))

    def test_not_finer(self):
        assert not is_refinement(normalize([[0, 1], [2]], 3), normalize([[0], [1, 2]], 3))

    def test_reflexive(self):
        p = normalize([[0, 1], [2]], 3)
        assert is_refinement(p, p)


class TestSeedFamily:
    def test_disjointness_enforced(self):
        with pytest.raises(PartitionError, match="overlap"):
            seed_family([[0, 1], [1, 2]])

    def test_empty_seed_rejected(self):
        with pytest.raises(PartitionError, match="empty"):
            seed_family([[0], []])

    def test_parse_round_trip(self):
        fam = parse_seed_family("1,2,3;7")
        assert fam.sets == ((1, 2, 3), (7,))
        assert str(fam) == "1,2,3;7"


class TestTextFormat:
    def test_parse(self):
        p = parse_partition("0;1,2,3;4,5", 6)
        assert p.blocks == ((0,), (1, 2, 3), (4, 5))

    def test_full_cover_required(self):
        with pytest.raises(PartitionError):
            parse_partition("0;1,2", 4)

    def test_round_trip(self):
        text = "0;1,2,3;4,5"
        assert format_partition(parse_partition(text, 6)) == text


# ---------------------------------------------------------------------------
# Property tests
# ---------------------------------------------------------------------------

@st.composite
def partitions(draw, rank=None):
    r = rank if rank is not None else draw(st.integers(min_value=1, max_value=9))
    labels = draw(st.lists(st.integers(min_value=0, max_value=r - 1), min_size=r, max_size=r))
    groups = {}
    for i, lab in enumerate(labels):
        groups.setdefault(lab, []).append(i)
    return normalize(groups.values(), r)


@st.composite
def involutions(draw, rank):
    star = list(range(rank))
    pool = list(range(rank))
    while len(pool) >= 2 and draw(st.booleans()):
        a = pool.pop(draw(st.integers(0, len(pool) - 1)))
        b = pool.pop(draw(st.integers(0, len(pool) - 1)))
        star[a], star[b] = b, a
    return star


@given(st.data())
@settings(max_examples=150, deadline=None)
def test_meet_properties(data):
    r = data.draw(st.integers(min_value=1, max_value=8))
    p = data.draw(partitions(rank=r))
    q = data.draw(partitions(rank=r))
    s = data.draw(partitions(rank=r))
    assert meet(p, q) == meet(q, p)
    assert meet(p, p) == p
    assert meet(meet(p, q), s) == meet(p, meet(q, s))
    assert is_refinement(meet(p, q), p)
    assert is_refinement(meet(p, q), q)


@given(st.data())
@settings(max_examples=150, deadline=None)
def test_star_image_involutive(data):
    r = data.draw(st.integers(min_value=1, max_value=9))
    p = data.draw(partitions(rank=r))
    star = data.draw(involutions(rank=r))
    assert star_image(star_image(p, star), star) == p


@given(st.data())
@settings(max_examples=100, deadline=None)
def test_normalize_order_insensitive_and_idempotent(data):
    r = data.draw(st.integers(min_value=1, max_value=9))
    p = data.draw(partitions(rank=r))
    blocks = list(p.blocks)
    perm = data.draw(st.permutations(blocks))
    again = normalize(perm, r)
    assert again == p
    assert normalize(again.blocks, r) == again
