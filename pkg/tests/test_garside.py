import random

import pytest
from hypothesis import given, settings, strategies as st

from knit.braid import BraidWord, parse_braid, random_braid
from knit.errors import DomainError
from knit.garside import NormalForm, is_trivial, normal_form, words_equal


def descents(targets):
    return {i + 1 for i in range(len(targets) - 1) if targets[i] > targets[i + 1]}


def inverse_targets(targets):
    inv = [0] * len(targets)
    for i, t in enumerate(targets):
        inv[t - 1] = i + 1
    return tuple(inv)


def check_left_canonical(nf: NormalForm):
    """Independent check of the structural invariants of the form."""
    n = nf.index
    half_twist = tuple(range(n, 0, -1))
    for f in nf.factors:
        assert not f.is_identity(), "factors must be nontrivial"
        assert f.targets != half_twist, "factors must be proper simples"
    for a, b in zip(nf.factors, nf.factors[1:]):
        starting = descents(b.targets)
        finishing = descents(inverse_targets(a.targets))
        assert starting <= finishing, f"pair not left-weighted: {a} | {b}"


def insert_relator(w: BraidWord, rng: random.Random) -> BraidWord:
    """Insert a defining relator or a cancelling pair at a random spot."""
    n = w.index
    choices = []
    for i in range(1, n - 1):
        # braid relation as a trivial word
        choices.append(
            [(i, 1), (i + 1, 1), (i, 1), (i + 1, -1), (i, -1), (i + 1, -1)]
        )
    for i in range(1, n - 1):
        for j in range(i + 2, n):
            choices.append([(i, 1), (j, 1), (i, -1), (j, -1)])
    for i in range(1, n):
        for s in (1, -1):
            choices.append([(i, s), (i, -s)])
    piece = rng.choice(choices)
    pos = rng.randrange(len(w.letters) + 1)
    letters = w.letters[:pos] + tuple(piece) + w.letters[pos:]
    return BraidWord(n, letters)


def test_braid_relation():
    assert normal_form(parse_braid("s1 s2 s1", 3)) == normal_form(
        parse_braid("s2 s1 s2", 3)
    )


def test_far_commutation():
    assert words_equal(parse_braid("s1 s3", 4), parse_braid("s3 s1", 4))


def test_identity_forms():
    nf = normal_form(parse_braid("s1 s1^-1", 2))
    assert nf.infimum == 0 and nf.factors == ()
    assert is_trivial(parse_braid("", 5))
    assert is_trivial(parse_braid("s1 s3 s1^-1 s3^-1", 4))


def test_single_negative_letter_b2():
    # in B_2 the half twist is s1 itself, so s1^-1 is a bare Delta inverse
    nf = normal_form(parse_braid("s1^-1", 2))
    assert nf.infimum == -1
    assert nf.factors == ()
    assert nf.canonical_length() == 0


def test_b2_is_infinite_cyclic():
    for k in range(-4, 5):
        w = BraidWord(2, ((1, 1 if k >= 0 else -1),) * abs(k))
        nf = normal_form(w)
        assert nf.infimum == k
        assert nf.factors == ()


def test_nontrivial_words():
    assert not is_trivial(parse_braid("s1^2", 2))
    assert not words_equal(parse_braid("s1", 3), parse_braid("s2", 3))
    assert not words_equal(parse_braid("s1", 3), parse_braid("s1^-1", 3))


def test_words_equal_requires_same_index():
    with pytest.raises(DomainError):
        words_equal(parse_braid("s1", 2), parse_braid("s1", 3))


def test_half_twist_powers():
    d = parse_braid("s1 s2 s1", 3)
    w = d * d * d
    nf = normal_form(w)
    assert nf.infimum == 3 and nf.factors == ()
    nf = normal_form(w.inverse())
    assert nf.infimum == -3 and nf.factors == ()


def test_relator_insertions_preserve_form():
    rng = random.Random(20240)
    for trial in range(40):
        n = rng.randint(2, 5)
        w = random_braid(n, rng.randint(0, 20), seed=rng.randrange(10**6))
        reference = normal_form(w)
        mutated = w
        for _ in range(rng.randint(1, 4)):
            mutated = insert_relator(mutated, rng)
        assert normal_form(mutated) == reference
        assert words_equal(mutated, w)


def test_output_is_left_canonical():
    rng = random.Random(5)
    for _ in range(60):
        n = rng.randint(2, 6)
        w = random_braid(n, rng.randint(0, 25), seed=rng.randrange(10**6))
        check_left_canonical(normal_form(w))


def test_to_word_round_trip():
    rng = random.Random(77)
    for _ in range(40):
        n = rng.randint(2, 5)
        w = random_braid(n, rng.randint(0, 18), seed=rng.randrange(10**6))
        nf = normal_form(w)
        back = nf.to_word()
        assert back.index == n
        assert normal_form(back) == nf
        assert back.exponent_sum() == w.exponent_sum()


words3 = st.builds(
    lambda letters: BraidWord(3, tuple(letters)),
    st.lists(st.tuples(st.integers(1, 2), st.sampled_from((-1, 1))), max_size=14),
)


@settings(max_examples=60, deadline=None)
@given(words3, words3)
def test_equality_respects_concatenation(a, b):
    # words_equal is a congruence: a = a' implies ab = a'b
    shuffled = insert_relator(a, random.Random(1))
    assert words_equal(a, shuffled)
    assert words_equal(a * b, shuffled * b)


@settings(max_examples=60, deadline=None)
@given(words3)
def test_inverse_gives_trivial_product(w):
    assert is_trivial(w * w.inverse())
    assert is_trivial(w.inverse() * w)


@settings(max_examples=40, deadline=None)
@given(words3)
def test_exponent_sum_is_form_invariant(w):
    nf = normal_form(w)
    # half twist in B_3 has three letters
    assert 3 * nf.infimum + sum(
        len(descents_word(f.targets)) for f in nf.factors
    ) == w.exponent_sum()


def descents_word(targets):
    # letter count of the positive lift = inversion number
    n = len(targets)
    return [
        (i, j)
        for i in range(n)
        for j in range(i + 1, n)
        if targets[i] > targets[j]
    ]
