"""Symbolic identity engine: stuffle/shuffle products, duality rewrites,
sign and composition expansions, reversal reductions, and a catalog of exact
closed forms used as numeric oracles.

All symbolic output is a `FormalSum`: an exact-rational linear combination of
term bodies in a fixed canonical order, so rendered identities are
byte-stable.  Bodies are `LambdaSpec`s, integral words (tuples of rational
form parameters), `SpecProduct`s (products of specs, from reversal
reductions) or `RootDressing`s (symbolic root-of-unity dressings, never
numerically evaluated).
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from itertools import product as iproduct
from math import comb, factorial

import mpmath as mp

from .errors import DivergenceError, DomainError
from .evaluate import evaluate_lambda, evaluate_word
from .model import (
    EMPTY_SPEC,
    LambdaSpec,
    format_spec,
    lambda_to_word,
    make_word,
    mu_spec,
    mzv_dual_string,
    zeta_spec,
)
from .precision import BigReal, Precision, ln, pi, pow_int

# ---------------------------------------------------------------------------
# Formal sums
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SpecProduct:
    """A product of lambda values, kept in canonical factor order."""

    factors: tuple[LambdaSpec, ...]

    def __post_init__(self):
        object.__setattr__(
            self,
            "factors",
            tuple(sorted(self.factors, key=_spec_key)),
        )


@dataclass(frozen=True)
class RootDressing:
    """lambda(s; zeta^r_j * b_j^(1/order)) with zeta a primitive order-th
    root of unity; symbolic only."""

    order: int
    powers: tuple[int, ...]
    radicand: LambdaSpec


def _spec_key(spec: LambdaSpec):
    return (
        spec.depth,
        spec.exponents,
        tuple((b.numerator, b.denominator) for b in spec.bases),
    )


def _body_key(body):
    if isinstance(body, LambdaSpec):
        return (0,) + _spec_key(body)
    if isinstance(body, tuple):  # a word
        return (1, len(body), tuple((a.numerator, a.denominator) for a in body))
    if isinstance(body, SpecProduct):
        return (2, len(body.factors), tuple(_spec_key(f) for f in body.factors))
    if isinstance(body, RootDressing):
        return (3, body.order, body.powers) + _spec_key(body.radicand)
    raise TypeError(f"unsupported formal-sum body: {type(body)!r}")


class FormalSum:
    """Exact-rational linear combination of term bodies, canonicalized."""

    __slots__ = ("terms",)

    def __init__(self, terms=()):
        merged: dict = {}
        for coeff, body in terms:
            coeff = Fraction(coeff)
            if coeff == 0:
                continue
            key = _body_key(body)
            if key in merged:
                old_c, _ = merged[key]
                coeff = old_c + coeff
            merged[key] = (coeff, body)
        object.__setattr__(
            self,
            "terms",
            tuple(
                (c, b)
                for _, (c, b) in sorted(merged.items())
                if c != 0
            ),
        )

    @classmethod
    def single(cls, body, coeff=1) -> "FormalSum":
        return cls(((Fraction(coeff), body),))

    @classmethod
    def zero(cls) -> "FormalSum":
        return cls(())

    def __iter__(self):
        return iter(self.terms)

    def __len__(self):
        return len(self.terms)

    def __bool__(self):
        return bool(self.terms)

    def __add__(self, other: "FormalSum") -> "FormalSum":
        return FormalSum(self.terms + other.terms)

    def __sub__(self, other: "FormalSum") -> "FormalSum":
        return self + (-other)

    def __neg__(self) -> "FormalSum":
        return FormalSum((-c, b) for c, b in self.terms)

    def scaled(self, factor) -> "FormalSum":
        factor = Fraction(factor)
        return FormalSum((factor * c, b) for c, b in self.terms)

    def __eq__(self, other):
        return isinstance(other, FormalSum) and self.terms == other.terms

    def __hash__(self):
        return hash(self.terms)

    def __repr__(self):
        return f"FormalSum({render_formal_sum(self)})"


def _render_body(body) -> str:
    if isinstance(body, LambdaSpec):
        return format_spec(body)
    if isinstance(body, tuple):
        return "W[" + ",".join(str(a) for a in body) + "]"
    if isinstance(body, SpecProduct):
        if not body.factors:
            return "1"
        return "*".join(format_spec(f) for f in body.factors)
    if isinstance(body, RootDressing):
        ss = ",".join(str(s) for s in body.radicand.exponents)
        bs = ",".join(
            f"r{body.order}^{p}*{b}^(1/{body.order})"
            for p, b in zip(body.powers, body.radicand.bases)
        )
        return f"L[{ss} | {bs}]"
    raise TypeError(type(body))


def render_formal_sum(fs: FormalSum) -> str:
    if not fs.terms:
        return "0"
    parts = []
    for i, (c, body) in enumerate(fs.terms):
        mag = abs(c)
        text = _render_body(body) if mag == 1 else f"{mag}*{_render_body(body)}"
        if i == 0:
            parts.append(text if c > 0 else f"-{text}")
        else:
            parts.append(f"+ {text}" if c > 0 else f"- {text}")
    return " ".join(parts)


def evaluate_formal_sum(fs: FormalSum, prec: Precision) -> BigReal:
    """Numeric value sum(coeff * value(body)); rejects symbolic dressings."""
    total = BigReal(0, prec)
    for coeff, body in fs.terms:
        if isinstance(body, LambdaSpec):
            v = evaluate_lambda(body, prec)
        elif isinstance(body, tuple):
            v = evaluate_word(body, prec)
        elif isinstance(body, SpecProduct):
            v = BigReal(1, prec)
            for f in body.factors:
                v = v * evaluate_lambda(f, prec)
        else:
            raise DomainError("root-of-unity dressings are symbolic only")
        total = total + v * coeff
    return total


# ---------------------------------------------------------------------------
# Stuffle algebra
# ---------------------------------------------------------------------------


def stuffle_set(s, t, a, b):
    """All interleave/merge combinations of two exponent strings with their
    running-product base strings.

    Returns a tuple of (u, c) pairs, one per combination path; when the
    letters carry equal values, distinct paths may repeat a numeric string,
    which is how multiplicities arise.  Base rule: after consuming i letters
    of s and j of t, the emitted base is a_i * b_j (empty products are 1).
    """
    s = tuple(int(x) for x in s)
    t = tuple(int(x) for x in t)
    a = tuple(Fraction(x) for x in a)
    b = tuple(Fraction(x) for x in b)
    if len(s) != len(a) or len(t) != len(b):
        raise ValueError("exponent and base strings must have equal lengths")
    out = []

    def rec(i, j, u, c):
        if i == len(s) and j == len(t):
            out.append((tuple(u), tuple(c)))
            return
        ai = a[i] if i < len(s) else None
        bj = b[j] if j < len(t) else None
        a_prev = a[i - 1] if i > 0 else Fraction(1)
        b_prev = b[j - 1] if j > 0 else Fraction(1)
        if i < len(s):
            rec(i + 1, j, u + [s[i]], c + [ai * b_prev])
        if i < len(s) and j < len(t):
            rec(i + 1, j + 1, u + [s[i] + t[j]], c + [ai * bj])
        if j < len(t):
            rec(i, j + 1, u + [t[j]], c + [a_prev * bj])

    rec(0, 0, [], [])
    return tuple(out)


def stuffle_count(k: int, r: int) -> int:
    """Number of interleave/merge paths for depths k and r."""
    table = [[0] * (r + 1) for _ in range(k + 1)]
    table[0][0] = 1
    for i in range(k + 1):
        for j in range(r + 1):
            if i == j == 0:
                continue
            v = 0
            if i:
                v += table[i - 1][j]
            if j:
                v += table[i][j - 1]
            if i and j:
                v += table[i - 1][j - 1]
            table[i][j] = v
    return table[k][r]


def stuffle_identity(u: LambdaSpec, v: LambdaSpec) -> FormalSum:
    """lambda(u) * lambda(v) as a sum over the interleave/merge set."""
    pairs = stuffle_set(u.exponents, v.exponents, u.bases, v.bases)
    return FormalSum(
        (Fraction(1), LambdaSpec.of(ue, ce)) for ue, ce in pairs
    )


def rational_stuffle_check(a, b) -> bool:
    """Exact rational check of the product rule for f(g) = prod 1/(g_j - 1).

    With zero exponent strings the nested sums collapse to these rational
    products, so f(a) f(b) must equal the sum of f over the combination set.
    Serves as an independent oracle for stuffle_set.
    """
    a = tuple(Fraction(x) for x in a)
    b = tuple(Fraction(x) for x in b)
    if any(x == 1 for x in a + b):
        raise DomainError("entries equal to 1 pole the rational check")

    def f(vals):
        out = Fraction(1)
        for g in vals:
            if g == 1:
                raise DomainError(f"merged base {g} poles the rational check")
            out /= g - 1
        return out

    pairs = stuffle_set((0,) * len(a), (0,) * len(b), a, b)
    return f(a) * f(b) == sum((f(c) for _, c in pairs), Fraction(0))


# ---------------------------------------------------------------------------
# Shuffle algebra
# ---------------------------------------------------------------------------


def shuffle_words(w1, w2) -> FormalSum:
    """All order-preserving interleavings of two words, with multiplicity."""
    w1 = make_word(w1)
    w2 = make_word(w2)
    terms = []

    def rec(i, j, acc):
        if i == len(w1) and j == len(w2):
            terms.append((Fraction(1), tuple(acc)))
            return
        if i < len(w1):
            acc.append(w1[i])
            rec(i + 1, j, acc)
            acc.pop()
        if j < len(w2):
            acc.append(w2[j])
            rec(i, j + 1, acc)
            acc.pop()

    rec(0, 0, [])
    return FormalSum(terms)


# ---------------------------------------------------------------------------
# Integral-transformation expansions
# ---------------------------------------------------------------------------


def _rational_root(x: Fraction, n: int) -> Fraction | None:
    """Positive rational n-th root of x, or None."""
    if x <= 0:
        return None

    def iroot(m: int) -> int | None:
        r = round(m ** (1 / n))
        for cand in (r - 1, r, r + 1):
            if cand >= 0 and cand ** n == m:
                return cand
        return None

    p = iroot(x.numerator)
    q = iroot(x.denominator)
    if p is None or q is None:
        return None
    return Fraction(p, q)


def cyclotomic_expand(spec: LambdaSpec, n: int) -> FormalSum:
    """Rewrite lambda(s; b^n-style bases) as n^(weight-depth) times the sum
    over all n^depth root-of-unity dressings of the n-th roots.

    n = 1 is the identity; n = 2 needs every base to be the square of a
    rational and yields a fully rational sum over sign dressings; n > 2
    emits symbolic RootDressing bodies.
    """
    if n < 1:
        raise DomainError("cyclotomic order must be a positive integer")
    if any(s < 1 for s in spec.exponents):
        raise DomainError("cyclotomic expansion needs positive exponents")
    if n == 1:
        return FormalSum.single(spec)
    k = spec.depth
    coeff = Fraction(n) ** (spec.weight - k)
    if n == 2:
        roots = []
        for b in spec.bases:
            r = _rational_root(b, 2)
            if r is None:
                raise DomainError(
                    f"{format_spec(spec)}: base {b} is not the square of a rational"
                )
            roots.append(r)
        terms = []
        for signs in iproduct((1, -1), repeat=k):
            dressed = LambdaSpec.of(
                spec.exponents, tuple(e * r for e, r in zip(signs, roots))
            )
            terms.append((coeff, dressed))
        return FormalSum(terms)
    terms = [
        (coeff, RootDressing(n, powers, spec))
        for powers in iproduct(range(n), repeat=k)
    ]
    return FormalSum(terms)


def alternating_source_spec(s) -> LambdaSpec:
    """lambda(1+s_k, ..., 1+s_1; -1, ..., -1) for nonnegative integers s."""
    s = tuple(int(x) for x in s)
    exps = tuple(1 + x for x in reversed(s))
    return LambdaSpec.of(exps, (Fraction(-1),) * len(exps))


def alternating_to_mu(s) -> FormalSum:
    """Expand the all-alternating value of alternating_source_spec(s) into
    2^sum(s) signed unit Euler sums.

    Each term's bases are, for j = 1..k, a -1 followed by the chosen signs
    (eps_i,j); its coefficient is the product of those signs.
    """
    s = tuple(int(x) for x in s)
    if any(x < 0 for x in s):
        raise DomainError("entries must be nonnegative")
    total = sum(s)
    terms = []
    for eps in iproduct((1, -1), repeat=total):
        it = iter(eps)
        bases: list[int] = []
        coeff = 1
        for sj in s:
            bases.append(-1)
            for _ in range(sj):
                e = next(it)
                coeff *= e
                bases.append(e)
        terms.append((Fraction(coeff), mu_spec(*bases)))
    return FormalSum(terms)


def _compositions(total: int):
    """All positive-integer compositions of total (2^(total-1) of them)."""
    if total == 0:
        yield ()
        return
    for mask in range(1 << (total - 1)):
        comp = []
        run = 1
        for bit in range(total - 1):
            if mask >> bit & 1:
                comp.append(run)
                run = 1
            else:
                run += 1
        comp.append(run)
        yield tuple(comp)


def mu_source_spec(s) -> LambdaSpec:
    """mu of the concatenation over j = 0..k-1 of {-1} {1}^s_(k-j)."""
    s = tuple(int(x) for x in s)
    bases: list[int] = []
    for sj in reversed(s):
        bases.append(-1)
        bases.extend([1] * sj)
    return mu_spec(*bases)


def mu_to_compositions(s) -> FormalSum:
    """Expand mu_source_spec(s) into all-alternating lambda strings.

    One +1 term per independent choice of a composition of each s_j + 1;
    the term's exponents are the concatenated composition parts, all bases
    -1.  2^sum(s) terms in total.
    """
    s = tuple(int(x) for x in s)
    if any(x < 0 for x in s):
        raise DomainError("entries must be nonnegative")
    terms = []
    for combo in iproduct(*(tuple(_compositions(sj + 1)) for sj in s)):
        exps: list[int] = []
        for part in combo:
            exps.extend(part)
        body = LambdaSpec.of(tuple(exps), (Fraction(-1),) * len(exps))
        terms.append((Fraction(1), body))
    return FormalSum(terms)


def delta_mu_dual(s) -> tuple[int, LambdaSpec]:
    """Base-2 value delta(s_1..s_k) as a signed unit +-1 Euler sum.

    Returns (sign, mu-spec) with delta(s) = sign * mu(...), where the mu
    bases are, for j = k down to 1, a -1 followed by s_j - 1 ones and
    sign = (-1)^k.
    """
    s = tuple(int(x) for x in s)
    if not s or any(x < 1 for x in s):
        raise DomainError("entries must be positive integers")
    bases: list[int] = []
    for sj in reversed(s):
        bases.append(-1)
        bases.extend([1] * (sj - 1))
    return (-1) ** len(s), mu_spec(*bases)


def mu_to_delta(bases) -> tuple[int, tuple[int, ...]]:
    """Inverse of delta_mu_dual: a unit +-1 string starting with -1 maps to
    (sign, delta argument string)."""
    bases = tuple(int(b) for b in bases)
    if not bases or bases[0] != -1 or any(b not in (1, -1) for b in bases):
        raise DomainError("expected a unit +-1 string starting with -1")
    ones_runs: list[int] = []
    for b in bases:
        if b == -1:
            ones_runs.append(0)
        else:
            ones_runs[-1] += 1
    exps = tuple(r + 1 for r in reversed(ones_runs))
    return (-1) ** len(ones_runs), exps


# ---------------------------------------------------------------------------
# Weak chains and reversal reduction
# ---------------------------------------------------------------------------


def weak_chain_expand(s) -> FormalSum:
    """Expand the weakly increasing chain sum over n_1 <= ... <= n_k of
    prod n_j^-s_j into strict-chain MZV strings.

    Each choice of which adjacent indices coincide merges those exponents;
    the surviving strict chain is read off innermost-first, so every term is
    a reversed, partially merged zeta string with coefficient +1.
    """
    s = tuple(int(x) for x in s)
    k = len(s)
    if k == 0:
        return FormalSum.single(EMPTY_SPEC)
    terms = []
    for mask in range(1 << (k - 1)):
        merged = [s[0]]
        for j in range(1, k):
            if mask >> (j - 1) & 1:  # n_j == n_{j+1}: merge exponents
                merged[-1] += s[j]
            else:
                merged.append(s[j])
        terms.append((Fraction(1), zeta_spec(*reversed(merged))))
    return FormalSum(terms)


def _poly_add(p, q):
    out = dict(p)
    for deg, fs in q.items():
        out[deg] = out.get(deg, FormalSum.zero()) + fs
    return {d: fs for d, fs in out.items() if fs}


def _poly_scale(p, factor):
    return {d: fs.scaled(factor) for d, fs in p.items()}


def _product_body(x: SpecProduct, y: SpecProduct) -> SpecProduct:
    return SpecProduct(x.factors + y.factors)


def _poly_mul(p, q):
    out: dict[int, FormalSum] = {}
    for d1, f1 in p.items():
        for d2, f2 in q.items():
            terms = []
            for c1, b1 in f1:
                for c2, b2 in f2:
                    terms.append((c1 * c2, _product_body(b1, b2)))
            fs = FormalSum(terms)
            key = d1 + d2
            out[key] = out.get(key, FormalSum.zero()) + fs
    return {d: fs for d, fs in out.items() if fs}


def _regularize_string(s: tuple[int, ...]):
    """Zeta string (possibly with leading 1s) as a polynomial in the formal
    divergent symbol T = "zeta(1)", with convergent coefficients.

    Uses the exact product expansion of T with the tail string w = s[1:]:
    inserting the 1 at any slot or merging it into an entry.  Insertions
    into the leading run of 1s reproduce s itself, giving it multiplicity
    (leading-ones(w) + 1) on the left; everything else has strictly fewer
    leading 1s or is shorter, so the recursion terminates.  The expansion
    holds for every common truncation of the underlying sums, so
    substituting the results back preserves exact identities.
    """
    if not s or s[0] != 1:
        body = SpecProduct((zeta_spec(*s),)) if s else SpecProduct(())
        return {0: FormalSum.single(body)}
    w = s[1:]
    lead = 0
    while lead < len(w) and w[lead] == 1:
        lead += 1
    out = _poly_mul({1: FormalSum.single(SpecProduct(()))}, _regularize_string(w))
    for i in range(lead + 1, len(w) + 1):
        inserted = w[:i] + (1,) + w[i:]
        out = _poly_add(out, _poly_scale(_regularize_string(inserted), -1))
    for i in range(len(w)):
        merged = w[:i] + (w[i] + 1,) + w[i + 1:]
        out = _poly_add(out, _poly_scale(_regularize_string(merged), -1))
    return _poly_scale(out, Fraction(1, lead + 1))


def _regularize_sum(fs: FormalSum):
    """Lift a FormalSum of zeta SpecProducts into the T-polynomial algebra."""
    out: dict[int, FormalSum] = {}
    for coeff, body in fs:
        poly = {0: FormalSum.single(SpecProduct(()), coeff)}
        for factor in body.factors:
            poly = _poly_mul(poly, _regularize_string(factor.exponents))
        out = _poly_add(out, poly)
    return out


def reversal_reduction(s) -> FormalSum:
    """zeta(s) + (-1)^depth zeta(reversed s) as products of lower-depth MZVs.

    Built from inclusion-exclusion over the adjacent order constraints:
    each constraint subset contributes a signed product of weakly increasing
    chain sums over its maximal runs, and the full-constraint term is the
    reversed string plus merged lower-depth chains.  Interior exponent-1
    entries make individual pieces divergent; those are eliminated exactly
    through the T-polynomial rewriting, and the divergent degrees provably
    cancel (asserted).
    """
    s = tuple(int(x) for x in s)
    k = len(s)
    if k == 0 or s[0] < 2 or s[-1] < 2:
        raise DivergenceError(
            "reversal reduction needs first and last exponents >= 2"
        )
    unit = FormalSum.single(SpecProduct(()))
    total: dict[int, FormalSum] = {}
    for mask in range(1 << (k - 1)):
        # runs of consecutive constrained indices partition the variables
        blocks: list[tuple[int, ...]] = []
        current = [s[0]]
        for j in range(1, k):
            if mask >> (j - 1) & 1:
                current.append(s[j])
            else:
                blocks.append(tuple(current))
                current = [s[j]]
        blocks.append(tuple(current))
        nbits = bin(mask).count("1")
        piece = {0: unit.scaled(Fraction((-1) ** nbits))}
        full_chain = mask == (1 << (k - 1)) - 1
        for block in blocks:
            expansion = weak_chain_expand(block)
            if full_chain:
                # move the all-strict reversed term to the left-hand side
                expansion = expansion - FormalSum.single(
                    zeta_spec(*reversed(block))
                )
            piece = _poly_mul(
                piece,
                _regularize_sum(
                    FormalSum(
                        (c, SpecProduct((b,))) for c, b in expansion
                    )
                ),
            )
        total = _poly_add(total, piece)
    bad = {d: fs for d, fs in total.items() if d != 0 and fs}
    assert not bad, f"divergent degrees failed to cancel: {bad}"
    return total.get(0, FormalSum.zero())


# ---------------------------------------------------------------------------
# Bernoulli numbers and closed forms
# ---------------------------------------------------------------------------

_BERNOULLI_CACHE: dict[int, Fraction] = {0: Fraction(1)}


def bernoulli(n: int) -> Fraction:
    """Exact Bernoulli number (B_1 = -1/2 convention)."""
    if n < 0:
        raise DomainError("Bernoulli index must be nonnegative")
    if n not in _BERNOULLI_CACHE:
        for m in range(1, n + 1):
            if m in _BERNOULLI_CACHE:
                continue
            acc = Fraction(0)
            for j in range(m):
                acc += comb(m + 1, j) * _BERNOULLI_CACHE[j]
            _BERNOULLI_CACHE[m] = -acc / (m + 1)
    return _BERNOULLI_CACHE[n]


def delta_negative_exact(n: int) -> int:
    """delta(-n) = sum k^n / 2^k: integers satisfying the button-combination
    recurrence d(n) = 1 + sum_j C(n, j) d(j)."""
    if n < 0:
        raise DomainError("index must be nonnegative")
    vals = [1]
    for m in range(1, n + 1):
        vals.append(1 + sum(comb(m, j) * vals[j] for j in range(m)))
    return vals[n]


def delta_one_negative_exact(n: int) -> Fraction:
    """delta(1, -n) for n >= 1, via Bernoulli numbers (exact rational)."""
    if n < 1:
        raise DomainError("index must be a positive integer")
    return sum(
        (
            Fraction(comb(n, nu)) * bernoulli(n - nu) * delta_negative_exact(nu)
            / (nu + 1)
            for nu in range(n + 1)
        ),
        Fraction(0),
    )


class ClosedFormConstants:
    """Base constants for the closed-form catalog at a fixed precision.

    A(r) is the polylogarithm of 1/2, P(r) = (ln 2)^r / r!, Z(r) the signed
    zeta value (-1)^r zeta(r).  These are materialized from the library's
    own zeta/polylog routines so they stay independent of the nested-sum
    evaluator they are used to check.
    """

    def __init__(self, prec: Precision):
        self.prec = prec
        self._cache: dict = {}

    def _mk(self, key, fn) -> BigReal:
        if key not in self._cache:
            with mp.workdps(self.prec.working_dps):
                self._cache[key] = BigReal(fn(), self.prec)
        return self._cache[key]

    def A(self, r: int) -> BigReal:
        if r < 1:
            raise DomainError("A(r) needs r >= 1")
        return self._mk(("A", r), lambda: mp.polylog(r, mp.mpf(1) / 2))

    def P(self, r: int) -> BigReal:
        if r < 0:
            raise DomainError("P(r) needs r >= 0")
        return self._mk(("P", r), lambda: mp.log(2) ** r / mp.factorial(r))

    def Z(self, r: int) -> BigReal:
        if r < 2:
            raise DomainError("Z(r) needs r >= 2")
        return self._mk(("Z", r), lambda: (-1) ** r * mp.zeta(r))

    def zeta(self, r: int) -> BigReal:
        if r < 2:
            raise DomainError("zeta(r) needs r >= 2")
        return self._mk(("zeta", r), lambda: +mp.zeta(r))


def _cf_zagier(prec: Precision, n: int) -> BigReal:
    if n < 0:
        raise DomainError("n must be nonnegative")
    num = 2 * pow_int(pi(prec), 4 * n, prec)
    return num * Fraction(1, factorial(4 * n + 2))


def _cf_zeta4_run(prec: Precision, m: int) -> BigReal:
    # zeta({4}^m) = 4^m * zagier(m)
    return _cf_zagier(prec, m) * Fraction(4 ** m)


def _cf_z213(prec: Precision, n: int) -> BigReal:
    """zeta(2, {1,3}^n) in terms of pi powers and depth-1 zetas."""
    if n < 0:
        raise DomainError("n must be nonnegative")
    c = ClosedFormConstants(prec)
    total = BigReal(0, prec)
    for k in range(n + 1):
        acc = c.zeta(4 * k + 2) * (4 * k + 1)
        for j in range(1, k + 1):
            acc = acc - c.zeta(4 * j - 1) * c.zeta(4 * k - 4 * j + 3) * 4
        total = total + _cf_zeta4_run(prec, n - k) * acc * Fraction((-1) ** k)
    return total * Fraction(1, 4 ** n)


def _cf_mu_power(prec: Precision, p, n: int) -> BigReal:
    """mu({p}^n) = (log q)^n / n! with 1/p + 1/q = 1."""
    p = Fraction(p)
    if n < 0:
        raise DomainError("n must be nonnegative")
    if not (p > 1 or p <= -1):
        raise DomainError("requires p > 1 or p <= -1")
    q = p / (p - 1)
    return pow_int(ln(q, prec), n, prec) * Fraction(1, factorial(n))


def _cf_t4(prec: Precision, m: int) -> BigReal:
    if m < 1:
        raise DomainError("m must be a positive integer")
    c = ClosedFormConstants(prec)
    acc = BigReal(0, prec)
    for k in range(m + 1):
        acc = acc + c.A(k + 1) * c.P(m - k)
    return acc * Fraction((-1) ** (m + 1)) - c.Z(m + 1)


def _cf_t5(prec: Precision, m: int, n: int) -> BigReal:
    if m < 1 or n < 0:
        raise DomainError("needs m >= 1 and n >= 0")
    c = ClosedFormConstants(prec)
    first = BigReal(0, prec)
    for k in range(m + 1):
        first = first + c.A(k + n + 1) * c.P(m - k) * comb(n + k, n)
    second = BigReal(0, prec)
    for k in range(n + 1):
        second = second + c.Z(k + m + 1) * c.P(n - k) * comb(m + k, m)
    return first * Fraction((-1) ** (m + 1)) + second * Fraction((-1) ** (n + 1))


def _cf_delta_neg(prec: Precision, n: int) -> BigReal:
    return BigReal(delta_negative_exact(n), prec)


def _cf_delta_one_neg(prec: Precision, n: int) -> BigReal:
    return BigReal(delta_one_negative_exact(n), prec)


def _cf_zero_string(prec: Precision, bases) -> BigReal:
    out = Fraction(1)
    for b in bases:
        b = Fraction(b)
        if b == 1:
            raise DomainError("base 1 poles the zero-exponent product")
        out /= b - 1
    return BigReal(out, prec)


def _cf_li2_half(prec: Precision) -> BigReal:
    p = pi(prec)
    l2 = ln(2, prec)
    return p * p * Fraction(1, 12) - l2 * l2 * Fraction(1, 2)


def _cf_zeta_li_log(prec: Precision, n: int) -> BigReal:
    """delta(2, {1}^n) = zeta(n+2) - sum_{r=1}^{n+2} A_r P_{n+2-r}."""
    if n < 0:
        raise DomainError("n must be nonnegative")
    c = ClosedFormConstants(prec)
    acc = c.zeta(n + 2)
    for r in range(1, n + 3):
        acc = acc - c.A(r) * c.P(n + 2 - r)
    return acc


def _cf_delta_odd(prec: Precision, n: int) -> BigReal:
    """delta(1, 2n-1) = 1/2 sum_{j=1}^{2n-1} (-1)^(j+1) A_j A_{2n-j}."""
    if n < 1:
        raise DomainError("n must be a positive integer")
    c = ClosedFormConstants(prec)
    acc = BigReal(0, prec)
    for j in range(1, 2 * n):
        acc = acc + c.A(j) * c.A(2 * n - j) * Fraction((-1) ** (j + 1))
    return acc * Fraction(1, 2)


def _cf_delta_12(prec: Precision) -> BigReal:
    c = ClosedFormConstants(prec)
    return (
        c.A(2) * c.A(1) * Fraction(5, 7)
        - c.A(3) * Fraction(2, 7)
        + pow_int(c.A(1), 3, prec) * Fraction(5, 21)
    )


CLOSED_FORMS = {
    "zagier": _cf_zagier,
    "z213": _cf_z213,
    "mu_power": _cf_mu_power,
    "t4": _cf_t4,
    "t5": _cf_t5,
    "delta_neg": _cf_delta_neg,
    "delta_one_neg": _cf_delta_one_neg,
    "zero_string": _cf_zero_string,
    "li2_half": _cf_li2_half,
    "zeta_li_log": _cf_zeta_li_log,
    "delta_odd": _cf_delta_odd,
    "delta_12": _cf_delta_12,
}


def closed_form(name: str, params, prec: Precision) -> BigReal:
    """Catalog of exact evaluations; an oracle layer independent of the
    nested-sum evaluator."""
    try:
        fn = CLOSED_FORMS[name]
    except KeyError:
        raise KeyError(f"unknown closed form {name!r}; have {sorted(CLOSED_FORMS)}")
    return fn(prec, *params)


# ---------------------------------------------------------------------------
# Identity catalog / export
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Identity:
    tag: str
    lhs: FormalSum
    rhs: FormalSum

    def to_json(self) -> str:
        return json.dumps(
            {
                "lhs": render_formal_sum(self.lhs),
                "rhs": render_formal_sum(self.rhs),
                "tag": self.tag,
            },
            sort_keys=True,
        )


def _convergent_strings(max_weight: int):
    """All convergent unsigned MZV strings of weight <= max_weight."""
    out = []

    def rec(prefix, remaining):
        if prefix:
            out.append(tuple(prefix))
        lo = 2 if not prefix else 1
        for s in range(lo, remaining + 1):
            prefix.append(s)
            rec(prefix, remaining - s)
            prefix.pop()

    rec([], max_weight)
    return out


def identity_catalog(max_weight: int) -> list[Identity]:
    """Deterministic identity corpus up to a weight bound."""
    if max_weight < 3:
        raise ValueError("max_weight must be at least 3")
    identities: list[Identity] = []
    strings = _convergent_strings(max_weight)

    for s in strings:
        dual = mzv_dual_string(s)
        if dual <= s:  # emit each dual pair once
            continue
        identities.append(
            Identity(
                "duality",
                FormalSum.single(zeta_spec(*s)),
                FormalSum.single(zeta_spec(*dual)),
            )
        )

    for u in strings:
        for v in strings:
            if sum(u) + sum(v) > max_weight or u > v:
                continue
            lhs = FormalSum.single(SpecProduct((zeta_spec(*u), zeta_spec(*v))))
            identities.append(
                Identity("stuffle", lhs, stuffle_identity(zeta_spec(*u), zeta_spec(*v)))
            )
            identities.append(
                Identity(
                    "shuffle",
                    lhs,
                    shuffle_words(
                        lambda_to_word(zeta_spec(*u)),
                        lambda_to_word(zeta_spec(*v)),
                    ),
                )
            )

    for s in strings:
        if s[0] >= 2 and s[-1] >= 2:
            k = len(s)
            lhs = FormalSum.single(zeta_spec(*s)) + FormalSum.single(
                zeta_spec(*reversed(s)), Fraction((-1) ** k)
            )
            identities.append(Identity("reversal", lhs, reversal_reduction(s)))

    return identities


def export_identities(identities, path) -> int:
    with open(path, "w", encoding="utf-8") as fh:
        for ident in identities:
            fh.write(ident.to_json() + "\n")
    return len(identities)
