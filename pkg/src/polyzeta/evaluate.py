"""Numeric evaluation of convergent multiple polylogarithms.

Two routes:

* ``direct_nested_sum`` -- a single forward pass over the outer summation
  index, geometrically convergent whenever every base has modulus > 1.  The
  per-index work is one update per depth level, and the truncation point is
  chosen from a closed-form tail bound.

* the conjugate-parameter split (``holder_split``) -- for words whose bases
  sit on or near the unit circle (MZVs, alternating sums), the [0,1]
  iterated integral splits at 1/p into weight+1 products of integrals over
  [0, 1/q] and [0, 1/p] with 1/p + 1/q = 1.  After a linear change of
  variable each factor is again a lambda value whose bases have modulus
  >= min(p, q) * (original gap), so both halves fall to the direct sum.

``evaluate_lambda`` dispatches between them, preferring the direct sum, then
a duality rewrite when that alone produces fast geometric convergence, then
the split with p = q = 2 (or an adaptive conjugate pair when unit-gap bases
make 2 infeasible).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import mpmath as mp

from .errors import DivergenceError, DomainError, PrecisionMismatch, UnsupportedSpec
from .model import (
    LambdaSpec,
    Word,
    dual_word,
    format_spec,
    lambda_from_z_string,
    lambda_to_word,
    require_convergent,
    to_goncharov,
    word_convergent,
    word_depth,
    word_to_lambda,
)
from .precision import BigReal, Precision

GEOMETRIC_THRESHOLD = Fraction(3, 2)

# extra decimal digits per unit of weight, on top of the base guard
_GUARD_PER_WEIGHT = 10


def working_precision(prec: Precision, spec: LambdaSpec) -> Precision:
    """Widen the guard for deep evaluations: 20 + 10 * (effective weight)."""
    eff = sum(max(s, 1) for s in spec.exponents)
    return prec.with_guard(20 + _GUARD_PER_WEIGHT * eff)


# ---------------------------------------------------------------------------
# Direct geometric nested summation
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SumPlan:
    """Truncation point N plus the data behind its tail bound.

    The tail of the nested sum past outer index N is at most
    sum_{n>N} n^poly_degree * ratio^n, which the plan bounds in closed form
    by g(N+1)/(1-rho) with g(n) = n^m r^n and rho = (1+r)/2, valid because N
    is chosen large enough that g is decaying at least as fast as rho.
    """

    terms: int
    ratio: Fraction
    poly_degree: int
    tail_log10: float


def plan_nested_sum(spec: LambdaSpec, eps_log10: float) -> SumPlan:
    k = spec.depth
    rmin = min(abs(b) for b in spec.bases)
    if rmin <= 1:
        raise UnsupportedSpec(
            f"{format_spec(spec)}: direct summation needs all |b_j| > 1"
        )
    r = 1 / rmin
    m = (k - 1) + sum(-s for s in spec.exponents if s < 0)
    rf = float(r)
    rho = (1 + rf) / 2
    log_r = math.log10(rf)
    log_gap = -math.log10(1 - rho)
    n = max(k, 1)
    while True:
        tail = m * math.log10(n + 1) + (n + 1) * log_r + log_gap
        if tail < eps_log10 and rf * (1 + 1 / n) ** m <= rho:
            return SumPlan(n, r, m, tail)
        n += max(1, n // 8)


class NestedSumState:
    """Forward state of the nested sum over the outer index n.

    accumulators[j] holds P_{j+1}(n) = sum over n >= n_{j+1} > ... > n_k of
    the inner product; after each step() the first accumulator equals the
    truncated full sum with outer index <= n.
    """

    def __init__(self, spec: LambdaSpec, dps: int):
        self.spec = spec
        self.dps = dps
        self.n = 0
        gon = to_goncharov(spec)
        with mp.workdps(dps):
            self.ratios = [
                mp.mpf(x.numerator) / x.denominator for _, x in gon.pairs
            ]
            self.powers = [mp.mpf(1)] * spec.depth
            self.accumulators = [mp.mpf(0)] * spec.depth

    def step(self) -> None:
        self.n += 1
        k = self.spec.depth
        exps = self.spec.exponents
        with mp.workdps(self.dps):
            nn = mp.mpf(self.n)
            powers = self.powers
            acc = self.accumulators
            for j in range(k):
                powers[j] *= self.ratios[j]
            # ascending j: acc[j+1] still holds its value at n-1
            for j in range(k):
                t = powers[j] * nn ** (-exps[j])
                if j + 1 < k:
                    acc[j] += t * acc[j + 1]
                else:
                    acc[j] += t

    def value(self) -> mp.mpf:
        return self.accumulators[0] if self.spec.depth else mp.mpf(1)


def _direct_mpf(spec: LambdaSpec, dps: int, eps_log10: float, extra_terms: int = 0) -> mp.mpf:
    if spec.depth == 0:
        return mp.mpf(1)
    plan = plan_nested_sum(spec, eps_log10)
    state = NestedSumState(spec, dps)
    for _ in range(plan.terms + extra_terms):
        state.step()
    return state.value()


def direct_nested_sum(
    spec: LambdaSpec,
    prec: Precision,
    *,
    threshold: Fraction = GEOMETRIC_THRESHOLD,
    extra_terms: int = 0,
) -> BigReal:
    """Sum lambda(spec) directly; requires min |b_j| >= threshold (> 1).

    The default threshold 3/2 keeps the term ratio at most 2/3 so the pass
    length is O(digits); callers may lower it deliberately down to (but not
    including) 1 at the price of a longer pass.
    """
    require_convergent(spec)
    if spec.depth and min(abs(b) for b in spec.bases) < min(threshold, GEOMETRIC_THRESHOLD):
        raise UnsupportedSpec(
            f"{format_spec(spec)}: base modulus below {threshold}; "
            "evaluate through the conjugate split instead"
        )
    eps = -(prec.digits + prec.guard / 2)
    return BigReal(_direct_mpf(spec, prec.working_dps, eps, extra_terms), prec)


# ---------------------------------------------------------------------------
# Conjugate-parameter split of the iterated integral
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SplitTerm:
    """One product term of the split: sign * lambda(left) * lambda(right)."""

    split_index: int
    sign: int
    left: LambdaSpec
    right: LambdaSpec


def _scaled_spec(word: Word, scale: Fraction) -> LambdaSpec:
    spec = word_to_lambda(word)
    return LambdaSpec(tuple((s, scale * b) for s, b in spec.terms))


def holder_split(word: Word, p: Fraction) -> tuple[SplitTerm, ...]:
    """Split a convergent word at every prefix length r = 0..weight.

    For each r the prefix is reversed and complemented (a -> 1-a), and both
    halves are rescaled onto [0,1] (bases multiplied by q on the left, p on
    the right).  The resulting identity is

        lambda(word) = sum_r sign_r * lambda(left_r) * lambda(right_r),

    with sign_r = (-1)^(r + depth(word) + depth(left_r) + depth(right_r))
    and empty halves contributing the factor 1.
    """
    ok, reason = word_convergent(word)
    if not ok:
        raise DivergenceError(f"word {word} diverges: {reason}")
    p = Fraction(p)
    if p <= 1:
        raise DomainError("split parameter p must exceed 1")
    q = p / (p - 1)
    k = word_depth(word)
    terms = []
    for r in range(len(word) + 1):
        left_word = tuple(1 - a for a in reversed(word[:r]))
        right_word = word[r:]
        left = _scaled_spec(left_word, q)
        right = _scaled_spec(right_word, p)
        sign = -1 if (r + k + left.depth + right.depth) % 2 else 1
        terms.append(SplitTerm(r, sign, left, right))
    return tuple(terms)


def _split_parameter(word: Word) -> Fraction:
    """Choose p so every half of the split is directly summable.

    m1 bounds base moduli on the right halves, m2 the complemented moduli on
    the left; feasibility needs p*m1 and q*m2 above 1, always satisfiable
    because m1 >= 1 and m2 > 0.
    """
    m1 = min(abs(a) for a in word if a != 0)
    m2 = min(
        [Fraction(1)] + [abs(1 - a) for a in word if a != 1 and a != 0]
    )
    if 2 * m1 >= GEOMETRIC_THRESHOLD and 2 * m2 >= GEOMETRIC_THRESHOLD:
        return Fraction(2)
    target = min(GEOMETRIC_THRESHOLD, (1 + m1 + m2) / 2)
    q = target / m2
    return q / (q - 1)


def _word_value_mpf(word: Word, prec: Precision) -> mp.mpf:
    """lambda value of a convergent word at working precision."""
    dps = prec.working_dps
    spec = word_to_lambda(word)
    rmin = min(abs(b) for b in spec.bases)
    weight = len(word)
    # budget: each of the <= weight+1 product terms gets half an equal share
    eps = -(prec.digits + prec.guard / 2)
    if rmin >= GEOMETRIC_THRESHOLD:
        return _direct_mpf(spec, dps, eps)

    dual, sign = None, 1
    try:
        dual, sign = dual_word(word)
    except DivergenceError:
        dual = None
    if dual is not None:
        dspec = word_to_lambda(dual)
        if dspec.depth and min(abs(b) for b in dspec.bases) >= GEOMETRIC_THRESHOLD:
            with mp.workdps(dps):
                return sign * _direct_mpf(dspec, dps, eps)

    p = _split_parameter(word)
    terms = holder_split(word, p)
    eps_half = eps - math.log10(2 * (weight + 1)) - weight - 1
    with mp.workdps(dps):
        total = mp.mpf(0)
        for term in terms:
            left = (
                _direct_mpf(term.left, dps, eps_half, 0)
                if term.left.depth
                else mp.mpf(1)
            )
            right = (
                _direct_mpf(term.right, dps, eps_half, 0)
                if term.right.depth
                else mp.mpf(1)
            )
            total += term.sign * left * right
        return total


# ---------------------------------------------------------------------------
# Dispatchers
# ---------------------------------------------------------------------------

@lru_cache(maxsize=4096)
def evaluate_lambda(spec: LambdaSpec, prec: Precision) -> BigReal:
    """Evaluate any convergent spec to |error| < 10^-digits.

    Pure in (spec, prec), so results are memoized; identity checks that sum
    many formal terms revisit the same values constantly.
    """
    require_convergent(spec)
    wp = working_precision(prec, spec)
    if spec.depth == 0:
        return BigReal(1, prec)
    rmin = min(abs(b) for b in spec.bases)
    if rmin >= GEOMETRIC_THRESHOLD:
        return BigReal(direct_nested_sum(spec, wp).mpf, prec)
    if any(s < 1 for s in spec.exponents):
        # no word encoding for nonpositive exponents, but convergence
        # guarantees all |b_j| > 1 here, so the direct pass still applies
        # at its slower ratio
        return BigReal(direct_nested_sum(spec, wp, threshold=rmin).mpf, prec)
    word = lambda_to_word(spec)
    return BigReal(_word_value_mpf(word, wp), prec)


def evaluate_word(word: Word, prec: Precision) -> BigReal:
    """lambda value of the spec encoded by a convergent word."""
    return evaluate_lambda(word_to_lambda(word), prec)


def evaluate_z(entries, prec: Precision) -> BigReal:
    """Signed Euler-sum string in z notation."""
    return evaluate_lambda(lambda_from_z_string(entries), prec)


def evaluate_zp(p, exponents, prec: Precision) -> BigReal:
    """zp(p, s) = sum over n_1 > ... > n_k of p^-n_1 prod n_j^-s_j.

    Equals the constant-base value lambda_p(s); p = 1 reduces to the MZV and
    then needs s_1 >= 2.
    """
    p = Fraction(p)
    exponents = tuple(int(s) for s in exponents)
    if p < 1:
        raise DomainError(f"zp requires p >= 1, got {p}")
    if not exponents:
        raise ValueError("zp requires at least one exponent")
    if any(s < 1 for s in exponents):
        raise DomainError("zp exponents must be positive integers")
    if p == 1 and exponents[0] == 1:
        raise DivergenceError(
            f"zp(1, {', '.join(map(str, exponents))}) diverges: "
            "leading exponent 1 needs p > 1"
        )
    spec = LambdaSpec.of(exponents, (p,) * len(exponents))
    return evaluate_lambda(spec, prec)


def evaluate_J(x, prec: Precision) -> BigReal:
    """J(x) = sum_{n1 > n2} x^n1 / (n1^2 n2), for -1 <= x <= 1.

    Equals lambda(2, 1; 1/x, 1/x); J(0) = 0 (empty sum).
    """
    x = Fraction(x)
    if not -1 <= x <= 1:
        raise DomainError(f"J is defined on [-1, 1], got {x}")
    if x == 0:
        return BigReal(0, prec)
    spec = LambdaSpec.of((2, 1), (1 / x, 1 / x))
    return evaluate_lambda(spec, prec)


def hyp2f1_series(a, b, c, z, prec: Precision) -> BigReal:
    """Gauss series sum (a)_n (b)_n / ((c)_n n!) z^n for |z| <= 1/2.

    Arguments a, b, c may be BigReal at the same precision, int or Fraction;
    c must not be a nonpositive integer.
    """
    z = Fraction(z)
    if abs(z) > Fraction(1, 2):
        raise DomainError(f"series evaluation needs |z| <= 1/2, got {z}")
    dps = prec.working_dps

    def coerce(v) -> mp.mpf:
        if isinstance(v, BigReal):
            if v.prec != prec:
                raise PrecisionMismatch(
                    "series parameters bound to a different precision"
                )
            return v.mpf
        with mp.workdps(dps):
            fv = Fraction(v)
            return mp.mpf(fv.numerator) / fv.denominator

    av, bv, cv = coerce(a), coerce(b), coerce(c)
    if cv == mp.floor(cv) and cv <= 0:
        raise DomainError("parameter c must not be a nonpositive integer")
    with mp.workdps(dps):
        zv = mp.mpf(z.numerator) / z.denominator
        eps = mp.mpf(10) ** (-(prec.digits + prec.guard // 2))
        rho = (1 + abs(zv)) / 2
        term = mp.mpf(1)
        total = mp.mpf(1)
        n = 0
        while True:
            term *= (av + n) * (bv + n) / ((cv + n) * (n + 1)) * zv
            total += term
            n += 1
            if n < 8:
                continue
            ratio = abs((av + n) * (bv + n) / ((cv + n) * (n + 1)) * zv)
            if ratio <= rho and abs(term) * rho / (1 - rho) < eps:
                break
            if n > 100000:
                raise RuntimeError("series failed to reach tolerance")
        return BigReal(total, prec)
