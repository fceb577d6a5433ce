"""Numeric evaluation: direct sums against exact/independent oracles, split
structure, dispatcher routes, and truncation soundness."""

import random
from fractions import Fraction

import mpmath as mp
import pytest

from polyzeta import (
    DivergenceError,
    DomainError,
    LambdaSpec,
    NestedSumState,
    Precision,
    UnsupportedSpec,
    delta_spec,
    direct_nested_sum,
    dual_word,
    evaluate_J,
    evaluate_lambda,
    evaluate_word,
    evaluate_z,
    evaluate_zp,
    holder_split,
    hyp2f1_series,
    lambda_to_word,
    ln,
    make_word,
    pi,
    plan_nested_sum,
    pow_int,
    to_decimal_string,
    word_to_lambda,
    zeta_spec,
)
from conftest import word_pool

F = Fraction


def tol(exp10):
    return F(1, 10 ** exp10)


def assert_close(a, b, exp10):
    assert abs(a - b).to_fraction() < tol(exp10)


# -- direct summation ---------------------------------------------------------

def test_direct_base_two_unit_is_log_two(prec40):
    got = direct_nested_sum(delta_spec(1), prec40)
    assert_close(got, ln(2, prec40), 40)


def test_zero_exponents_collapse_to_rational(prec40):
    got = direct_nested_sum(LambdaSpec.of((0, 0), (3, 2)), prec40)
    assert_close(got, F(1, 2), 40)


def test_negative_exponent_values(prec40):
    for n, want in [(1, 2), (2, 6), (3, 26)]:
        got = direct_nested_sum(LambdaSpec.of((-n,), (2,)), prec40)
        assert_close(got, want, 38)


def test_direct_threshold_guard(prec40):
    with pytest.raises(UnsupportedSpec):
        direct_nested_sum(zeta_spec(2), prec40)


def test_direct_rejects_divergent(prec40):
    with pytest.raises(DivergenceError):
        direct_nested_sum(LambdaSpec.of((1,), (1,)), prec40)


def test_nested_sum_state_matches_exact_partial_sums():
    # P_1 after n steps must equal the exact truncated nested sum
    spec = delta_spec(2, 1)
    state = NestedSumState(spec, dps=50)
    for _ in range(12):
        state.step()
    exact = F(0)
    for n1 in range(1, 13):
        for n2 in range(1, n1):
            exact += F(1, 2 ** (n1 - n2) * 2 ** n2) / (n1 ** 2 * n2)
    with mp.workdps(50):
        ref = mp.mpf(exact.numerator) / exact.denominator
        assert abs(state.value() - ref) < mp.mpf(10) ** -45


def test_truncation_soundness():
    prec = Precision(35)
    rng = random.Random(11)
    specs = [
        delta_spec(2, 1),
        delta_spec(1, 1, 1),
        LambdaSpec.of((1, -2), (2, 2)),
        LambdaSpec.of((2,), (F(3, 2),)),
        LambdaSpec.of((1, 3), (-2, 4)),
    ]
    for spec in specs:
        plan = plan_nested_sum(spec, -(prec.digits + prec.guard / 2))
        base = direct_nested_sum(spec, prec)
        more = direct_nested_sum(spec, prec, extra_terms=25)
        assert abs(more - base).to_fraction() < F(10) ** int(plan.tail_log10 + 1)


# -- split structure ----------------------------------------------------------

def test_split_of_weight_three_word():
    word = make_word((0, 0, 1))  # encodes the weight-3 depth-1 MZV
    terms = holder_split(word, F(2))
    assert [t.split_index for t in terms] == [0, 1, 2, 3]
    assert [t.sign for t in terms] == [1, 1, 1, 1]
    assert terms[0].left.depth == 0 and terms[0].right == delta_spec(3)
    assert terms[1].left == delta_spec(1) and terms[1].right == delta_spec(2)
    assert terms[2].left == delta_spec(1, 1) and terms[2].right == delta_spec(1)
    assert terms[3].left == delta_spec(2, 1) and terms[3].right.depth == 0


def test_split_term_count_and_empty_halves():
    for word in word_pool(10, seed=5):
        terms = holder_split(word, F(2))
        assert len(terms) == len(word) + 1
        assert terms[0].left.depth == 0
        assert terms[-1].right.depth == 0


def test_split_last_term_is_scaled_dual():
    # the r = weight term carries the full dual string scaled by q
    word = lambda_to_word(zeta_spec(2, 1, 2, 1, 1, 1))
    terms = holder_split(word, F(2))
    assert terms[-1].sign == 1
    assert terms[-1].left == delta_spec(5, 3)

    word = lambda_to_word(LambdaSpec.of((2, 1), (1, -1)))
    terms = holder_split(word, F(3))
    assert len(terms) == 4
    assert terms[-1].sign == -1
    assert terms[-1].left == LambdaSpec.of((1, 2), (3, F(3, 2)))


def test_split_rejects_bad_parameter():
    with pytest.raises(DomainError):
        holder_split(make_word((0, 1)), F(1))


# -- dispatcher ---------------------------------------------------------------

def test_euler_identity(prec50):
    assert_close(evaluate_z((2, 1), prec50), evaluate_z((3,), prec50), 45)


def test_alternating_duality_pair(prec50):
    a = evaluate_lambda(LambdaSpec.of((2, 1), (1, -1)), prec50)
    b = evaluate_lambda(LambdaSpec.of((1, 2), (2, 1)), prec50)
    assert_close(a, -b, 45)


def test_unit_base_two_powers(prec40):
    got = evaluate_lambda(delta_spec(1, 1, 1, 1), prec40)
    want = pow_int(ln(2, prec40), 4, prec40) * F(1, 24)
    assert_close(got, want, 40)


def test_evaluate_rejects_divergent(prec40):
    with pytest.raises(DivergenceError):
        evaluate_lambda(zeta_spec(1, 2), prec40)


def test_nonpositive_exponent_unit_base_diverges(prec40):
    with pytest.raises(DivergenceError):
        evaluate_lambda(LambdaSpec.of((-1,), (1,)), prec40)


def test_nonpositive_exponent_below_threshold_sums_directly(prec40):
    # convergent, no word encoding, base below 3/2: slow-ratio direct pass
    spec = LambdaSpec.of((2, -1), (F(5, 4), F(5, 4)))
    got = evaluate_lambda(spec, prec40)
    with mp.workdps(90):
        want = mp.mpf(0)
        for n1 in range(2, 700):
            inner = sum(mp.mpf(n2) for n2 in range(1, n1))
            want += (mp.mpf(4) / 5) ** n1 / n1 ** 2 * inner
        assert abs(got.mpf - want) < mp.mpf(10) ** -38


def test_zp_values(prec50):
    assert_close(evaluate_zp(2, (1,), prec50), ln(2, prec50), 45)
    want = pow_int(pi(prec50), 2, prec50) * F(1, 6)
    assert_close(evaluate_zp(1, (2,), prec50), want, 45)
    # 12 z(3) - pi^2 ln 2 - 12 zp(2,2,1) - 12 zp(2,3) = 0
    combo = (
        evaluate_z((3,), prec50) * 12
        - pow_int(pi(prec50), 2, prec50) * ln(2, prec50)
        - evaluate_zp(2, (2, 1), prec50) * 12
        - evaluate_zp(2, (3,), prec50) * 12
    )
    assert abs(combo).to_fraction() < tol(45)


def test_zp_validation(prec40):
    with pytest.raises(DivergenceError):
        evaluate_zp(1, (1, 2), prec40)
    with pytest.raises(DomainError):
        evaluate_zp(F(1, 2), (2,), prec40)
    with pytest.raises(DomainError):
        evaluate_zp(2, (0,), prec40)


def test_zp_below_geometric_threshold(prec40):
    # base 5/4 forces the adaptive conjugate pair; check against the
    # library polylog since zp(p, s) at depth 1 is Li_s(1/p)
    got = evaluate_zp(F(5, 4), (2,), prec40)
    with mp.workdps(80):
        want = mp.polylog(2, mp.mpf(4) / 5)
        assert abs(got.mpf - want) < mp.mpf(10) ** -40


def brute_J(x: Fraction, terms: int, dps: int) -> mp.mpf:
    # J(x) = sum_n x^n / n^2 * H_{n-1}, straight summation oracle
    with mp.workdps(dps):
        xv = mp.mpf(x.numerator) / x.denominator
        total = mp.mpf(0)
        harmonic = mp.mpf(0)
        power = mp.mpf(1)
        for n in range(1, terms + 1):
            power *= xv
            total += power / n ** 2 * harmonic
            harmonic += mp.mpf(1) / n
        return total


def test_J_values(prec40):
    assert evaluate_J(0, prec40) == 0
    assert_close(evaluate_J(1, prec40), evaluate_z((2, 1), prec40), 38)
    for x in (F(3, 10), F(-3, 10), F(120, 169)):
        got = evaluate_J(x, prec40)
        want = brute_J(x, 700, 80)
        assert abs(got.mpf - want) < mp.mpf(10) ** -38
    with pytest.raises(DomainError):
        evaluate_J(F(11, 10), prec40)


def test_J_functional_equation(prec40):
    x = F(3, 10)
    residual = (
        evaluate_J(-x, prec40)
        + evaluate_J(x, prec40)
        - evaluate_J(x * x, prec40) * F(1, 4)
        - evaluate_J(2 * x / (x + 1), prec40)
        + evaluate_J(4 * x / (x + 1) ** 2, prec40) * F(1, 8)
    )
    assert abs(residual).to_fraction() < tol(35)


# -- hypergeometric series ----------------------------------------------------

def test_hyp2f1_trivial_and_log(prec40):
    assert hyp2f1_series(0, F(1, 3), F(7, 5), F(1, 2), prec40) == 1
    got = hyp2f1_series(1, 1, 2, F(1, 2), prec40)
    assert_close(got, ln(2, prec40) * 2, 40)


def test_hyp2f1_validation(prec40):
    with pytest.raises(DomainError):
        hyp2f1_series(1, 1, 2, F(3, 4), prec40)
    with pytest.raises(DomainError):
        hyp2f1_series(1, 1, -2, F(1, 2), prec40)


def test_hyp2f1_double_generating_function():
    # 1 - sum x^(m+1) y^(n+1) * lambda_2(m+2, {1}^n) against the Gauss series.
    # Terms are skipped once the provable bound
    #   lambda_2(m+2, {1}^n) <= (n+1)^(-m) (ln 2)^(n+1)/(n+1)!
    # pushes them below 10^-35; the kept ranges give a residual well under
    # the 10^-30 target.
    import math

    from polyzeta import BigReal

    prec = Precision(40)
    x, y = F(1, 3), F(1, 4)
    log_x, log_y = math.log10(1 / 3), math.log10(1 / 4)
    acc = BigReal.from_rational(0, prec)
    kept = 0
    for m in range(0, 69):
        for n in range(0, 33):
            bound = (
                (m + 1) * log_x
                + (n + 1) * log_y
                - m * math.log10(n + 1)
                + (n + 1) * math.log10(0.694)
                - math.log10(math.factorial(n + 1))
            )
            if bound < -35:
                continue
            kept += 1
            lam = evaluate_zp(2, (m + 2,) + (1,) * n, prec)
            acc = acc + lam * (x ** (m + 1) * y ** (n + 1))
    assert kept > 200
    lhs = -acc + 1
    rhs = hyp2f1_series(y, -x, 1 - x, F(1, 2), prec)
    assert abs(lhs - rhs).to_fraction() < tol(30)


# -- route invariances ----------------------------------------------------------

def test_split_parameter_invariance_small(prec40):
    from polyzeta import BigReal

    words = word_pool(4, seed=9, max_weight=6)
    for word in words:
        values = []
        for p in (F(2), F(3), F(3, 2)):
            total = BigReal.from_rational(0, prec40)
            for term in holder_split(word, p):
                total = total + (
                    evaluate_lambda(term.left, prec40)
                    * evaluate_lambda(term.right, prec40)
                    * term.sign
                )
            values.append(total)
        for v in values[1:]:
            assert_close(values[0], v, 38)


def test_duality_invariance_numeric(prec40):
    for word in word_pool(6, seed=10, max_weight=7):
        dual, sign = dual_word(word)
        assert_close(evaluate_word(word, prec40), evaluate_word(dual, prec40) * sign, 38)


def test_mixed_base_words_route_invariance():
    # words with bases off the unit circle exercise the scaled complements
    # and the adaptive conjugate parameter; all routes must agree
    prec = Precision(35)
    rng = random.Random(2024)
    base_pool = [F(1), F(-1), F(2), F(-2), F(3, 2), F(3)]
    checked = 0
    while checked < 25:
        length = rng.randint(2, 6)
        word = tuple(
            rng.choice([F(0)] + base_pool) for _ in range(length)
        )
        if word[-1] == 0 or word[0] == 1 or all(a == 0 for a in word):
            continue
        values = []
        from polyzeta import BigReal

        # q = 3 at p = 3/2 clears every complement modulus in the pool
        for p in (F(2), F(3), F(3, 2)):
            total = BigReal.from_rational(0, prec)
            usable = True
            for term in holder_split(word, p):
                for half in (term.left, term.right):
                    if half.depth and min(abs(b) for b in half.bases) <= 1:
                        usable = False
                if not usable:
                    break
                total = total + (
                    evaluate_lambda(term.left, prec)
                    * evaluate_lambda(term.right, prec)
                    * term.sign
                )
            if usable:
                values.append(total)
        values.append(evaluate_word(word, prec))  # dispatcher route
        try:
            dual, sign = dual_word(word)
            values.append(evaluate_word(dual, prec) * sign)
        except DivergenceError:
            pass
        assert len(values) >= 2
        for v in values[1:]:
            assert abs(values[0] - v).to_fraction() < tol(30)
        checked += 1


def test_two_hundred_digit_values():
    prec = Precision(200)
    z3 = evaluate_z((3,), prec)
    with mp.workdps(260):
        assert abs(z3.mpf - mp.zeta(3)) < mp.mpf(10) ** -200
    alt = evaluate_z((-1,), prec)  # -log 2 via the alternating unit sum
    assert abs(alt + ln(2, prec)).to_fraction() < F(1, 10 ** 200)


def test_printed_precision_semantics():
    # printed value at N digits matches the (N+10)-digit run truncated
    for make in (
        lambda p: evaluate_z((3,), p),
        lambda p: evaluate_zp(2, (2, 1), p),
        lambda p: evaluate_J(F(7, 10), p),
    ):
        low = str(make(Precision(30)))
        from polyzeta import BigReal

        high = str(BigReal(make(Precision(40)).mpf, Precision(30)))
        assert low == high
