"""Weighted average multiplicity of a factorization at a complex exponent.

For n = prod p_k^{e_k} define

    wam(n, s) = sum_k e_k (ln p_k)^s  /  sum_k (ln p_k)^s

where each term (ln p_k)^s is exp(s * ln(ln p_k)), an entire function of s
with no branch cut (ln p_k > 0 always; note ln(ln 2) < 0, so the p = 2 term
decays as Re(s) grows while every other term expands).  At s = 1 this is
ln(n)/ln(rad n), at s = 0 it is Omega/omega, and as Re(s) -> +inf it tends
to e_m, the multiplicity of the largest prime factor.

The same shape with polynomial degrees as heights serves the function-field
case, so the evaluation core below takes an explicit height list.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .arith import Factorization, factor

LN2 = math.log(2.0)
LN3 = math.log(3.0)

# A point s is reported as a pole when |denominator| drops below this fraction
# of sum_k |(ln p_k)^s|, the scale of the terms being cancelled.
POLE_RTOL = 1e-12


class EmptyFactorization(ValueError):
    """wam is undefined for n = 1 (no prime factors, 0/0 at every s)."""


def as_complex(s) -> complex:
    """Validate and coerce an evaluation point; NaN/inf are rejected."""
    z = complex(s)
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise ValueError(f"evaluation point must be finite, got {z}")
    return z


class ExpSum:
    """f(s) = sum_k w_k * exp(r_k * s), real weights w and rates r.

    Both the numerator and denominator of wam have this form (with
    r_k = ln ln p_k), as do their s-derivatives, so root finding, contour
    integration and grid sweeps all reduce to evaluating these sums.
    Accepts a scalar or any ndarray of points and evaluates vectorized.
    """

    __slots__ = ("weights", "rates")

    def __init__(self, weights: Sequence[float], rates: Sequence[float]):
        self.weights = np.asarray(weights, dtype=float)
        self.rates = np.asarray(rates, dtype=float)
        if self.weights.shape != self.rates.shape or self.weights.ndim != 1:
            raise ValueError("weights and rates must be parallel 1-d sequences")

    def __call__(self, s):
        S = np.asarray(s, dtype=complex)
        vals = np.exp(S[..., None] * self.rates) @ self.weights.astype(complex)
        if np.ndim(s) == 0:
            return complex(vals)
        return vals

    def derivative(self) -> "ExpSum":
        return ExpSum(self.weights * self.rates, self.rates)

    def abs_at(self, a):
        """sum_k |w_k| exp(r_k * a) for real a: the term-magnitude scale."""
        A = np.asarray(a, dtype=float)
        vals = np.exp(A[..., None] * self.rates) @ np.abs(self.weights)
        if np.ndim(a) == 0:
            return float(vals)
        return vals


@dataclass(frozen=True)
class WamSums:
    """Numerator and denominator of a wam function as exponential sums."""

    numerator: ExpSum
    denominator: ExpSum


def wam_sums(heights: Sequence[float], exponents: Sequence[int]) -> WamSums:
    """Build wam sums from positive heights h_k and multiplicities e_k.

    Integer case: h_k = ln p_k.  Polynomial case: h_k = deg p_k (heights may
    repeat there; every irreducible factor contributes its own term).
    """
    if len(heights) == 0:
        raise EmptyFactorization("at least one factor is required")
    if len(heights) != len(exponents):
        raise ValueError("heights and exponents must be parallel")
    if any(h <= 0 for h in heights):
        raise ValueError("heights must be positive")
    rates = [math.log(h) for h in heights]
    return WamSums(
        numerator=ExpSum([float(e) for e in exponents], rates),
        denominator=ExpSum([1.0] * len(rates), rates),
    )


def integer_wam_sums(f: Factorization) -> WamSums:
    return wam_sums([math.log(p) for p in f.primes], f.exponents)


@dataclass(frozen=True)
class WamEvaluation:
    """One evaluation of wam at s.  `value is None` marks a pole."""

    s: complex
    numerator: complex
    denominator: complex
    value: complex | None

    @property
    def is_pole(self) -> bool:
        return self.value is None


def evaluate_wam(sums: WamSums, s: complex) -> WamEvaluation:
    z = as_complex(s)
    num = sums.numerator(z)
    den = sums.denominator(z)
    scale = sums.denominator.abs_at(z.real)
    if abs(den) < POLE_RTOL * scale:
        return WamEvaluation(z, num, den, None)
    return WamEvaluation(z, num, den, num / den)


def wam_at(f: Factorization, s: complex) -> WamEvaluation:
    """wam of a factorization at complex s.

    >>> round(wam_at(factor(72), 0).value.real, 12)
    2.5
    """
    if not f.primes:
        raise EmptyFactorization("wam is undefined for n = 1")
    return evaluate_wam(integer_wam_sums(f), s)


def wam(n: int, s: complex) -> WamEvaluation:
    """Convenience wrapper on integers; negative n uses |n|."""
    n = abs(n)
    if n <= 1:
        raise EmptyFactorization(f"wam is undefined for n = {n}")
    return wam_at(factor(n), s)


def wam_original(f: Factorization) -> float:
    """The s = 1 value in closed form: ln(n) / ln(rad n)."""
    if not f.primes:
        raise EmptyFactorization("wam is undefined for n = 1")
    log_n = sum(e * math.log(p) for p, e in f.pairs())
    log_rad = sum(math.log(p) for p in f.primes)
    return log_n / log_rad


def em_limit(f: Factorization) -> int:
    """Limit of wam(n, a) as real a -> +inf: the top multiplicity e_m."""
    if not f.exponents:
        raise EmptyFactorization("wam is undefined for n = 1")
    return f.exponents[-1]


@dataclass(frozen=True)
class CrudeEmBound:
    """e_m <= wam(n, 1) * omega(n), with both sides recorded."""

    e_m: int
    wam_at_one: float
    omega: int
    bound: float
    holds: bool


def crude_em_bound_holds(f: Factorization) -> CrudeEmBound:
    """Check the multiplicity bound e_m <= wam(n, 1) * omega(n)."""
    w1 = wam_original(f)
    e_m = f.exponents[-1]
    bound = w1 * len(f.primes)
    return CrudeEmBound(e_m, w1, len(f.primes), bound, e_m <= bound + 1e-12)


def mersenne_factorization(n: int) -> Factorization:
    """Factorization of m = 2^n * (2^n - 1)."""
    if n < 2:
        raise ValueError("n must be >= 2")
    odd = factor(2**n - 1)
    return Factorization(
        2**n * odd.value, (2,) + odd.primes, (n,) + odd.exponents
    )


@dataclass(frozen=True)
class MersenneBound:
    """Divergence-direction bounds for m = 2^n (2^n - 1) at one point s.

    lemma: the odd part of m satisfies
        sum e_i (ln p_i)^Re(s)  <  n * (ln 3)^(Re(s) - 1) * ln 2,
    which feeds the modulus bound
        |wam(m, s)|  >  (1/2) * (1 - (ln2/ln3)^(1 - Re s)) * wam(m, Re s).
    Both inequalities are strict for every n >= 2 when Re(s) < 1.
    """

    n: int
    s: complex
    lemma_lhs: float
    lemma_rhs: float
    goal_lhs: float
    goal_rhs: float
    holds: bool

    @property
    def lemma_margin(self) -> float:
        return self.lemma_rhs - self.lemma_lhs

    @property
    def goal_margin(self) -> float:
        return self.goal_lhs - self.goal_rhs


def mersenne_lower_bound_check(n: int, s: complex) -> MersenneBound:
    """Check both divergence inequalities at s; requires Re(s) < 1, 2<=n<=63."""
    if not 2 <= n <= 63:
        raise ValueError(f"n must lie in [2, 63], got {n}")
    z = as_complex(s)
    a = z.real
    if a >= 1:
        raise ValueError(f"bounds hold for Re(s) < 1 only, got Re(s) = {a}")
    f = mersenne_factorization(n)
    odd = [(p, e) for p, e in f.pairs() if p != 2]
    lemma_lhs = sum(e * math.log(p) ** a for p, e in odd)
    lemma_rhs = n * LN3 ** (a - 1.0) * LN2
    ev = wam_at(f, z)
    goal_lhs = math.inf if ev.is_pole else abs(ev.value)
    wam_real = wam_at(f, a).value.real
    goal_rhs = 0.5 * (1.0 - (LN2 / LN3) ** (1.0 - a)) * wam_real
    holds = lemma_lhs < lemma_rhs and goal_lhs > goal_rhs
    return MersenneBound(n, z, lemma_lhs, lemma_rhs, goal_lhs, goal_rhs, holds)
