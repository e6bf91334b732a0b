import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from branchcover.braids import (
    BraidWord,
    FreeWord,
    braids_equal,
    canonical,
    canonical_key,
    exponent_sum,
    free_reduce,
    parse_braid,
    project,
    word_string,
)
from branchcover.permutations import ParseError, Permutation, compose


def bw(d, *letters):
    return BraidWord(d, letters)


class TestFreeWord:
    def test_reduction(self):
        assert free_reduce((1, -1)) == ()
        assert free_reduce((1, 2, -2, -1)) == ()
        assert free_reduce((1, 2, -1)) == (1, 2, -1)

    def test_rejects_unreduced(self):
        with pytest.raises(ValueError, match="freely reduced"):
            FreeWord(2, (1, -1))

    def test_inverse(self):
        w = FreeWord(3, (1, 2, -3))
        assert (w * w.inverse()).letters == ()


class TestCanonical:
    def test_identity(self):
        assert canonical(bw(3)) == (
            FreeWord(3, (1,)),
            FreeWord(3, (2,)),
            FreeWord(3, (3,)),
        )

    def test_single_generator(self):
        # One application of the defining rule at d=2.
        assert canonical(bw(2, 1)) == (FreeWord(2, (1, 2, -1)), FreeWord(2, (1,)))

    def test_braid_relation(self):
        assert canonical_key(bw(3, 1, 2, 1)) == canonical_key(bw(3, 2, 1, 2))

    def test_all_relations_up_to_d6(self):
        for d in range(3, 7):
            for i, j in itertools.permutations(range(1, d), 2):
                if abs(i - j) == 1:
                    assert braids_equal(bw(d, i, j, i), bw(d, j, i, j))
                elif abs(i - j) > 1:
                    assert braids_equal(bw(d, i, j), bw(d, j, i))


class TestEqual:
    def test_cancellation(self):
        assert braids_equal(bw(2, 1, -1), bw(2))

    def test_far_commutation(self):
        assert braids_equal(bw(4, 1, 3), bw(4, 3, 1))

    def test_example_word_collapses(self):
        # s2^-1 s1^-1 s2^-1 s1 s2 equals s1^-1 in B_4.
        assert braids_equal(bw(4, -2, -1, -2, 1, 2), bw(4, -1))

    def test_degree_mismatch(self):
        with pytest.raises(ValueError, match="degree mismatch"):
            braids_equal(bw(3, 1), bw(4, 1))

    def test_distinguishes(self):
        assert not braids_equal(bw(3, 1), bw(3, 2))
        assert not braids_equal(bw(3, 1), bw(3, -1))


class TestProject:
    def test_generator(self):
        assert project(bw(3, 1)) == Permutation.adjacent(3, 1)

    def test_sign_forgotten(self):
        assert project(bw(3, -1)) == Permutation.adjacent(3, 1)

    def test_word(self):
        assert project(bw(3, 1, 2, 1)) == Permutation.transposition(3, 1, 3)

    @given(st.data())
    @settings(max_examples=60, deadline=None)
    def test_homomorphism(self, data):
        d = data.draw(st.integers(2, 5))
        gens = [i for i in range(1, d)] + [-i for i in range(1, d)]
        u = bw(d, *data.draw(st.lists(st.sampled_from(gens), max_size=8)))
        v = bw(d, *data.draw(st.lists(st.sampled_from(gens), max_size=8)))
        assert project(u * v) == compose(project(u), project(v))


class TestExponentSum:
    def test_empty(self):
        assert exponent_sum(bw(3)) == 0

    def test_positive_word(self):
        assert exponent_sum(bw(3, 1, 2, 1)) == 3

    def test_conjugate_of_generator(self):
        rng = random.Random(7)
        for _ in range(30):
            d = rng.choice([3, 4, 5])
            w = bw(d, *[rng.choice([1, -1]) * rng.randrange(1, d) for _ in range(6)])
            i = rng.randrange(1, d)
            conj = BraidWord.generator(d, i) ** w
            assert exponent_sum(conj) == 1

    @given(st.data())
    @settings(max_examples=60, deadline=None)
    def test_additive(self, data):
        gens = [1, -1, 2, -2, 3, -3]
        u = bw(4, *data.draw(st.lists(st.sampled_from(gens), max_size=10)))
        v = bw(4, *data.draw(st.lists(st.sampled_from(gens), max_size=10)))
        assert exponent_sum(u * v) == exponent_sum(u) + exponent_sum(v)


@given(st.data())
@settings(max_examples=40, deadline=None)
def test_relator_multiplication_preserves_equality(data):
    # w and w * relator are equal as elements, for every defining relator.
    d = data.draw(st.integers(3, 5))
    gens = [i for i in range(1, d)] + [-i for i in range(1, d)]
    w = bw(d, *data.draw(st.lists(st.sampled_from(gens), max_size=12)))
    relators = []
    for i, j in itertools.combinations(range(1, d), 2):
        if j - i == 1:
            relators.append((i, j, i, -j, -i, -j))
        else:
            relators.append((i, j, -i, -j))
    r = data.draw(st.sampled_from(relators))
    assert braids_equal(w, w * bw(d, *r))


class TestText:
    def test_parse(self):
        assert parse_braid("s1 s2^-1 s3", 4).letters == (1, -2, 3)

    def test_empty(self):
        assert parse_braid("", 3).letters == ()

    def test_roundtrip(self):
        w = bw(4, 1, -2, 3, -1)
        assert parse_braid(word_string(w), 4) == w

    def test_out_of_range_positioned(self):
        with pytest.raises(ParseError, match="position 3.*out of range"):
            parse_braid("s1 s7", 4)

    def test_bad_token(self):
        with pytest.raises(ParseError, match="bad braid token"):
            parse_braid("s1 q2", 4)
