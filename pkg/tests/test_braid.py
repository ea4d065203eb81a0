import pytest
from hypothesis import given, strategies as st

from knit.braid import BraidWord, Permutation, parse_braid, random_braid
from knit.errors import DomainError, ParseError


def test_parse_expands_powers():
    w = parse_braid("s3^-1 s2 s3^-1 s2 s1^3 s2^-1 s1 s2^-2", 4)
    assert len(w) == 11
    assert w.letters[:2] == ((3, -1), (2, 1))
    assert w.letters[4:7] == ((1, 1), (1, 1), (1, 1))
    assert w.letters[-2:] == ((2, -1), (2, -1))


def test_parse_empty_is_identity():
    w = parse_braid("", 3)
    assert len(w) == 0
    assert w.permutation().is_identity()
    assert str(w) == ""


def test_parse_simple():
    w = parse_braid("s3^-1 s2 s1^3", 4)
    assert w.letters == ((3, -1), (2, 1), (1, 1), (1, 1), (1, 1))


def test_parse_rejects_bad_token():
    with pytest.raises(ParseError) as err:
        parse_braid("s1 t2", 3)
    assert err.value.position == 3


def test_parse_rejects_zero_power():
    with pytest.raises(ParseError):
        parse_braid("s1^0", 3)


def test_parse_rejects_out_of_range_generator():
    with pytest.raises(ParseError):
        parse_braid("s3", 3)
    with pytest.raises(ParseError):
        parse_braid("s0", 3)


def test_exponent_sum():
    w = parse_braid("s3^-1 s2 s3^-1 s2 s1^3 s2^-1 s1 s2^-2", 4)
    assert w.exponent_sum() == 1
    assert parse_braid("s1^3", 2).exponent_sum() == 3


def test_concat_and_length():
    a = parse_braid("s1 s2", 3)
    b = parse_braid("s2^-1", 3)
    assert len(a * b) == 3
    with pytest.raises(DomainError):
        a * parse_braid("s1", 4)


def test_inverse_cancels():
    w = parse_braid("s1 s2^-1 s1^2", 3)
    assert (w * w.inverse()).free_reduce() == BraidWord.identity(3)
    assert w.inverse().letters == ((1, -1), (1, -1), (2, 1), (1, -1))


def test_free_reduce_cascades():
    w = parse_braid("s1 s2 s2^-1 s1^-1 s3", 4)
    assert w.free_reduce().letters == ((3, 1),)


def test_permutation_underlying():
    # s1 s2 in B_3 sends strand 1 -> 3: position 1 swaps first, then position 2
    w = parse_braid("s1 s2", 3)
    p = w.permutation()
    assert p.targets == (3, 1, 2)
    assert w.inverse().permutation() == p.inverse()


def test_permutation_is_homomorphism():
    a = parse_braid("s1^2 s3 s2^-1", 4)
    b = parse_braid("s2 s1^-1", 4)
    assert (a * b).permutation() == a.permutation().then(b.permutation())


def test_markov_conjugate():
    w = parse_braid("s1^3", 2)
    a = parse_braid("s1", 2)
    c = w.conjugate_by(a)
    assert c.letters == ((1, 1),) * 5 or c.free_reduce() == w
    assert c.free_reduce().letters == ((1, 1), (1, 1), (1, 1))


def test_markov_stabilize():
    w = parse_braid("s1^3", 2)
    up = w.stabilize(1)
    assert up.index == 3
    assert up.letters == ((1, 1), (1, 1), (1, 1), (2, 1))
    down = w.stabilize(-1)
    assert down.letters[-1] == (2, -1)


def test_random_braid_deterministic():
    a = random_braid(4, 20, seed=7)
    b = random_braid(4, 20, seed=7)
    assert a == b
    assert len(a) == 20
    assert a != random_braid(4, 20, seed=8)


def test_random_braid_letters_in_range():
    w = random_braid(5, 200, seed=0)
    assert all(1 <= g <= 4 and s in (-1, 1) for g, s in w.letters)


def test_str_round_trip():
    w = parse_braid("s2^-2 s1 s3", 4)
    assert parse_braid(str(w), 4) == w


words = st.builds(
    lambda letters: BraidWord(4, tuple(letters)),
    st.lists(st.tuples(st.integers(1, 3), st.sampled_from((-1, 1))), max_size=30),
)


@given(words)
def test_round_trip_any_word(w):
    assert parse_braid(str(w), 4) == w


@given(words)
def test_inverse_involution(w):
    assert w.inverse().inverse() == w
    assert (w * w.inverse()).free_reduce().letters == ()


@given(words)
def test_exponent_sum_negates_under_inverse(w):
    assert w.inverse().exponent_sum() == -w.exponent_sum()


@given(words, words)
def test_permutation_homomorphism_property(a, b):
    assert (a * b).permutation() == a.permutation().then(b.permutation())


def test_permutation_basics():
    p = Permutation.transposition(4, 2)
    assert p.targets == (1, 3, 2, 4)
    assert p.then(p).is_identity()
    q = Permutation((2, 3, 1))
    assert q.inverse().targets == (3, 1, 2)
    assert q(1) == 2
    assert sorted(len(c) for c in q.cycles()) == [3]
