"""Data model: conversions, convergence, duality maps, round trips."""

import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from polyzeta import (
    DivergenceError,
    GoncharovArgs,
    LambdaSpec,
    UnsupportedSpec,
    check_convergence,
    delta_spec,
    dual_word,
    format_spec,
    from_goncharov,
    lambda_from_z_string,
    lambda_to_word,
    make_word,
    mu_spec,
    mzv_dual_string,
    parse_spec,
    to_goncharov,
    word_to_lambda,
    z_string_from_lambda,
    zeta_spec,
)
from conftest import random_z_entries


def F(p, q=1):
    return Fraction(p, q)


# -- z-string conversions ---------------------------------------------------

def test_z_string_basic():
    assert lambda_from_z_string((2, 1)) == zeta_spec(2, 1)
    assert lambda_from_z_string((2, -1)) == LambdaSpec.of((2, 1), (1, -1))


def test_z_string_running_sign_product():
    # the sign marker applies to the index, so bases are running products
    assert lambda_from_z_string((-2, 1)) == LambdaSpec.of((2, 1), (-1, -1))
    assert lambda_from_z_string((-2, -1)) == LambdaSpec.of((2, 1), (-1, 1))
    assert lambda_from_z_string((3, -1, 2)) == LambdaSpec.of((3, 1, 2), (1, -1, -1))


def test_z_string_divergent_and_invalid():
    with pytest.raises(DivergenceError):
        lambda_from_z_string((1, 2))
    with pytest.raises(ValueError):
        lambda_from_z_string((2, 0))


@given(st.lists(st.integers(min_value=1, max_value=5), min_size=1, max_size=5),
       st.lists(st.booleans(), min_size=5, max_size=5))
def test_z_string_roundtrip(exps, flips):
    entries = tuple(e * (-1 if f else 1) for e, f in zip(exps, flips))
    if entries[0] == 1:
        entries = (2,) + entries[1:]
    spec = lambda_from_z_string(entries)
    assert z_string_from_lambda(spec) == entries


def test_z_string_from_lambda_wants_unit_bases():
    with pytest.raises(ValueError):
        z_string_from_lambda(delta_spec(2))


# -- words ------------------------------------------------------------------

def test_lambda_to_word_examples():
    assert lambda_to_word(zeta_spec(3)) == make_word((0, 0, 1))
    assert lambda_to_word(LambdaSpec.of((2, 1), (1, -1))) == make_word((0, 1, -1))
    assert lambda_to_word(delta_spec(2, 1, 1)) == make_word((0, 2, 2, 2))


def test_lambda_to_word_rejects_nonpositive_exponents():
    with pytest.raises(UnsupportedSpec):
        lambda_to_word(LambdaSpec.of((-1,), (2,)))


def test_lambda_to_word_rejects_divergent():
    with pytest.raises(DivergenceError):
        lambda_to_word(zeta_spec(1, 2))


def test_word_to_lambda_examples():
    assert word_to_lambda(make_word((0, 0, 1))) == zeta_spec(3)
    assert word_to_lambda(make_word((0, 1, -1))) == LambdaSpec.of((2, 1), (1, -1))
    assert word_to_lambda(make_word((2, 0, 1))) == LambdaSpec.of((1, 2), (2, 1))


def test_word_to_lambda_trailing_zero():
    with pytest.raises(DivergenceError):
        word_to_lambda(make_word((1, 0)))


def test_word_roundtrip_randomized():
    rng = random.Random(1)
    for _ in range(200):
        spec = lambda_from_z_string(random_z_entries(rng, max_weight=12, max_depth=6))
        assert word_to_lambda(lambda_to_word(spec)) == spec


# -- duality ----------------------------------------------------------------

def test_dual_word_examples():
    dual, sign = dual_word(make_word((0, 0, 1)))
    assert dual == make_word((0, 1, 1)) and sign == 1
    dual, sign = dual_word(make_word((0, 1, -1)))
    assert dual == make_word((2, 0, 1)) and sign == -1
    dual, sign = dual_word(make_word((0, 1, 0, 1)))
    assert dual == make_word((0, 1, 0, 1)) and sign == 1  # self-dual


def test_dual_word_rejects_leading_one():
    with pytest.raises(DivergenceError):
        dual_word(make_word((1, 0, 1)))


def test_dual_word_involution():
    rng = random.Random(2)
    for _ in range(200):
        word = lambda_to_word(lambda_from_z_string(random_z_entries(rng)))
        dual, sign = dual_word(word)
        back, sign2 = dual_word(dual)
        assert back == word
        assert sign * sign2 == 1


def test_mzv_dual_examples():
    assert mzv_dual_string((2, 1)) == (3,)
    assert mzv_dual_string((4,)) == (2, 1, 1)
    assert mzv_dual_string((3, 1)) == (3, 1)
    assert mzv_dual_string(()) == ()


def test_mzv_dual_rejects_divergent():
    with pytest.raises(DivergenceError):
        mzv_dual_string((1, 2))


@st.composite
def convergent_mzv_strings(draw):
    depth = draw(st.integers(1, 5))
    first = draw(st.integers(2, 5))
    rest = draw(st.lists(st.integers(1, 4), min_size=depth - 1, max_size=depth - 1))
    return (first, *rest)


@given(convergent_mzv_strings())
def test_mzv_dual_involution(entries):
    assert mzv_dual_string(mzv_dual_string(entries)) == entries


@given(convergent_mzv_strings())
def test_mzv_dual_matches_word_route(entries):
    spec = zeta_spec(*entries)
    dual, _ = dual_word(lambda_to_word(spec))
    assert word_to_lambda(dual) == zeta_spec(*mzv_dual_string(entries))


# -- nested-sum argument form ------------------------------------------------

def test_goncharov_conversion():
    spec = LambdaSpec.of((2, 1), (F(3, 2), F(9, 4)))
    args = to_goncharov(spec)
    assert args == GoncharovArgs(((2, F(2, 3)), (1, F(2, 3))))
    assert from_goncharov(args) == spec


def test_goncharov_roundtrip_randomized():
    rng = random.Random(3)
    for _ in range(200):
        depth = rng.randint(1, 5)
        bases = [
            F(rng.randint(1, 9), rng.randint(1, 9)) * rng.choice((1, -1))
            for _ in range(depth)
        ]
        spec = LambdaSpec.of(tuple(rng.randint(-2, 4) for _ in range(depth)), bases)
        assert from_goncharov(to_goncharov(spec)) == spec


# -- convergence -------------------------------------------------------------

@pytest.mark.parametrize(
    "spec,expected",
    [
        (LambdaSpec.of((1,), (1,)), False),   # harmonic series
        (LambdaSpec.of((1,), (2,)), True),
        (LambdaSpec.of((-1,), (2,)), True),   # geometric beats polynomial
        (LambdaSpec.of((2,), (F(1, 2),)), False),
        (LambdaSpec.of((2, -1), (1, 2)), False),  # modulus-1 base with nonpositive exponent
        (LambdaSpec.of((2, 1), (1, 1)), True),
        (LambdaSpec.of((1, 1), (1, -1)), False),
        (LambdaSpec.of((1, 1), (-1, 1)), True),
        (LambdaSpec(()), True),
    ],
)
def test_check_convergence(spec, expected):
    ok, reason = check_convergence(spec)
    assert ok is expected
    if not ok:
        assert reason


# -- text form ---------------------------------------------------------------

def test_spec_text_roundtrip():
    spec = LambdaSpec.of((2, 1), (F(1), F(-3, 2)))
    text = format_spec(spec)
    assert text == "L[2,1 | 1,-3/2]"
    assert parse_spec(text) == spec
    assert parse_spec("L[]") == LambdaSpec(())
    assert format_spec(LambdaSpec(())) == "L[]"


def test_spec_helpers():
    assert mu_spec(-1, 1).exponents == (1, 1)
    assert delta_spec(3).bases == (F(2),)
    assert zeta_spec(2, 1).weight == 3
    assert zeta_spec(2, 1).depth == 2
    with pytest.raises(ValueError):
        LambdaSpec.of((1,), (0,))
