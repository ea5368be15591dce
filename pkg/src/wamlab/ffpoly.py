"""Polynomials over prime fields: factorization, wam, and ABC triples.

Heights in the polynomial world are degrees: for f = u * prod p_k^{e_k}
with monic irreducible p_k,

    wam(f, s) = sum_k e_k (deg p_k)^s / sum_k (deg p_k)^s,

with (deg)^s = exp(s * ln deg) (real log, deg >= 1; degree-1 factors
contribute the constant 1 at every s).  The module also builds explicit
polynomial ABC triples: two monic irreducibles of degree n sharing their
low-order coefficients differ by x^{n-k} * R with small R, giving a
triple whose middle term has a high-multiplicity factor x.  Mason's
inequality pins wam(abc, 1) <= 3 for every valid triple, a theorem here
rather than a conjecture.
"""

from __future__ import annotations

import cmath
import itertools
import math
import random
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Sequence

from .arith import factor, is_prime, mobius
from .wamcore import (
    POLE_RTOL,
    WamEvaluation,
    as_complex,
    evaluate_wam,
    wam_sums,
)

MAX_CHARACTERISTIC = 1 << 16
MAX_FACTOR_DEGREE = 64
#: Enumerating monic irreducibles stays below this many candidates (q^n).
ENUMERATION_LIMIT = 1 << 26


class ZeroPolynomial(ValueError):
    """The zero polynomial has no factorization."""


class InvalidPolyTriple(ValueError):
    """a + b != c, a common factor, or all formal derivatives vanish."""


class PreconditionFailed(ValueError):
    """The pigeonhole construction does not apply at these (q, n)."""


class EnumerationBudget(RuntimeError):
    """q^n exceeds the enumeration budget for the pigeonhole scan."""


@lru_cache(maxsize=64)
def _check_characteristic(q: int) -> None:
    if not isinstance(q, int) or q < 2 or q > MAX_CHARACTERISTIC:
        raise ValueError(f"characteristic must be a prime <= 2^16, got {q}")
    if not is_prime(q):
        raise ValueError(f"characteristic must be prime, got {q}")


# ----------------------------------------------------------------------
# low-level coefficient-list arithmetic (lowest degree first, not
# necessarily stripped); every function takes the modulus p explicitly


def _lstrip(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _ladd(a, b, p):
    n = max(len(a), len(b))
    out = [0] * n
    for i, c in enumerate(a):
        out[i] = c
    for i, c in enumerate(b):
        out[i] = (out[i] + c) % p
    return _lstrip(out)


def _lsub(a, b, p):
    n = max(len(a), len(b))
    out = [0] * n
    for i, c in enumerate(a):
        out[i] = c
    for i, c in enumerate(b):
        out[i] = (out[i] - c) % p
    return _lstrip(out)


def _lmul(a, b, p):
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] += ai * bj
    return _lstrip([c % p for c in out])


def _ldivmod(a, b, p):
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    a = list(a)
    inv = pow(b[-1], -1, p)
    db = len(b) - 1
    quot = [0] * max(0, len(a) - db)
    while len(a) - 1 >= db and a:
        coef = (a[-1] * inv) % p
        shift = len(a) - 1 - db
        quot[shift] = coef
        for i, bc in enumerate(b):
            a[shift + i] = (a[shift + i] - coef * bc) % p
        _lstrip(a)
    return _lstrip(quot), a


def _lmonic(a, p):
    if not a:
        return []
    inv = pow(a[-1], -1, p)
    return [(c * inv) % p for c in a]


def _lgcd(a, b, p):
    a, b = list(a), list(b)
    while b:
        a, b = b, _ldivmod(a, b, p)[1]
    return _lmonic(a, p)


def _lpowmod(a, e, mod, p):
    result = [1]
    a = _ldivmod(a, mod, p)[1]
    while e:
        if e & 1:
            result = _ldivmod(_lmul(result, a, p), mod, p)[1]
        a = _ldivmod(_lmul(a, a, p), mod, p)[1]
        e >>= 1
    return result


def _lderiv(a, p):
    return _lstrip([(i * c) % p for i, c in enumerate(a)][1:])


@dataclass(frozen=True)
class FpPoly:
    """A polynomial over F_p, p prime, dense lowest-degree-first coeffs."""

    characteristic: int
    coefficients: tuple[int, ...]

    def __post_init__(self):
        _check_characteristic(self.characteristic)
        coeffs = [c % self.characteristic for c in self.coefficients]
        _lstrip(coeffs)
        object.__setattr__(self, "coefficients", tuple(coeffs))

    # -- constructors --------------------------------------------------
    @classmethod
    def zero(cls, q: int) -> "FpPoly":
        return cls(q, ())

    @classmethod
    def one(cls, q: int) -> "FpPoly":
        return cls(q, (1,))

    @classmethod
    def x_power(cls, q: int, k: int = 1) -> "FpPoly":
        return cls(q, (0,) * k + (1,))

    @classmethod
    def parse(cls, text: str) -> "FpPoly":
        """Parse the "c0,c1,...,cd@q" serialization.

        >>> FpPoly.parse("1,1,0,0,1@2").degree
        4
        """
        body, _, char = text.partition("@")
        if not char:
            raise ValueError(f"missing '@q' characteristic suffix in {text!r}")
        coeffs = tuple(int(c) for c in body.split(","))
        return cls(int(char), coeffs)

    # -- basic structure -----------------------------------------------
    @property
    def degree(self) -> int:
        """Degree; -1 for the zero polynomial."""
        return len(self.coefficients) - 1

    @property
    def is_zero(self) -> bool:
        return not self.coefficients

    @property
    def lead(self) -> int:
        if self.is_zero:
            raise ValueError("the zero polynomial has no leading coefficient")
        return self.coefficients[-1]

    @property
    def is_monic(self) -> bool:
        return bool(self.coefficients) and self.coefficients[-1] == 1

    def __str__(self) -> str:
        if self.is_zero:
            return f"0@{self.characteristic}"
        body = ",".join(str(c) for c in self.coefficients)
        return f"{body}@{self.characteristic}"

    def _wrap(self, coeffs: list[int]) -> "FpPoly":
        return FpPoly(self.characteristic, tuple(coeffs))

    def _require_same_field(self, other: "FpPoly") -> None:
        if self.characteristic != other.characteristic:
            raise ValueError("mixed characteristics")

    # -- arithmetic ----------------------------------------------------
    def __add__(self, other: "FpPoly") -> "FpPoly":
        self._require_same_field(other)
        p = self.characteristic
        return self._wrap(_ladd(list(self.coefficients), list(other.coefficients), p))

    def __sub__(self, other: "FpPoly") -> "FpPoly":
        self._require_same_field(other)
        p = self.characteristic
        return self._wrap(_lsub(list(self.coefficients), list(other.coefficients), p))

    def __mul__(self, other: "FpPoly") -> "FpPoly":
        self._require_same_field(other)
        p = self.characteristic
        return self._wrap(_lmul(list(self.coefficients), list(other.coefficients), p))

    def __divmod__(self, other: "FpPoly"):
        self._require_same_field(other)
        q, r = _ldivmod(
            list(self.coefficients), list(other.coefficients), self.characteristic
        )
        return self._wrap(q), self._wrap(r)

    def __floordiv__(self, other: "FpPoly") -> "FpPoly":
        return divmod(self, other)[0]

    def __mod__(self, other: "FpPoly") -> "FpPoly":
        return divmod(self, other)[1]

    def monic(self) -> "FpPoly":
        return self._wrap(_lmonic(list(self.coefficients), self.characteristic))

    def gcd(self, other: "FpPoly") -> "FpPoly":
        self._require_same_field(other)
        return self._wrap(
            _lgcd(list(self.coefficients), list(other.coefficients), self.characteristic)
        )

    def derivative(self) -> "FpPoly":
        return self._wrap(_lderiv(list(self.coefficients), self.characteristic))

    def evaluate(self, x: int) -> int:
        acc = 0
        for c in reversed(self.coefficients):
            acc = (acc * x + c) % self.characteristic
        return acc

    def sort_key(self):
        return (self.degree, self.coefficients)


@dataclass(frozen=True)
class PolyFactorization:
    """unit * product of (monic irreducible)^exponent, canonically sorted."""

    unit: int
    factors: tuple[tuple[FpPoly, int], ...]
    characteristic: int

    @property
    def value(self) -> FpPoly:
        acc = FpPoly(self.characteristic, (self.unit,))
        for poly, e in self.factors:
            for _ in range(e):
                acc = acc * poly
        return acc


def _pth_root(coeffs: list[int], p: int) -> list[int]:
    """p-th root of g(x^p) over F_p; Frobenius fixes the coefficients."""
    return _lstrip(list(coeffs[::p]))


def _squarefree_parts(coeffs: list[int], p: int):
    """Yield (squarefree monic coeff list, multiplicity) covering the input."""
    out: list[tuple[list[int], int]] = []

    def rec(f: list[int], scale: int) -> None:
        if len(f) <= 1:
            return
        df = _lderiv(f, p)
        if not df:
            rec(_pth_root(f, p), scale * p)
            return
        c = _lgcd(f, df, p)
        w = _ldivmod(f, c, p)[0]
        i = 1
        while len(w) > 1:
            y = _lgcd(w, c, p)
            z = _ldivmod(w, y, p)[0]
            if len(z) > 1:
                out.append((z, scale * i))
            w = y
            c = _ldivmod(c, y, p)[0]
            i += 1
        if len(c) > 1:
            rec(_pth_root(c, p), scale * p)

    rec(_lmonic(coeffs, p), 1)
    return out


def _distinct_degree(coeffs: list[int], q: int):
    """Split a monic squarefree poly into (product, degree-class) parts."""
    out = []
    f = list(coeffs)
    h = _ldivmod([0, 1], f, q)[1]  # x mod f
    d = 0
    while len(f) - 1 > 0:
        d += 1
        if 2 * d > len(f) - 1:
            out.append((f, len(f) - 1))
            break
        h = _lpowmod(h, q, f, q)
        g = _lgcd(_lsub(h, [0, 1], q), f, q)
        if len(g) > 1:
            out.append((g, d))
            f = _ldivmod(f, g, q)[0]
            h = _ldivmod(h, f, q)[1]
    return out


def _seed_from(coeffs: Sequence[int], q: int) -> int:
    acc = q
    for c in coeffs:
        acc = (acc * 1000003 + c + 1) & 0xFFFFFFFFFFFFFFFF
    return acc


def _equal_degree(coeffs: list[int], d: int, q: int, rng: random.Random):
    """Cantor-Zassenhaus split of a product of degree-d irreducibles."""
    n = len(coeffs) - 1
    if n == d:
        return [coeffs]
    while True:
        r = [rng.randrange(q) for _ in range(n)]
        _lstrip(r)
        if len(r) <= 1:
            continue
        t = _lgcd(r, coeffs, q)
        if 1 < len(t) <= n:  # lucky: r shares a factor
            pass
        elif q == 2:
            trace = list(r)
            sq = list(r)
            for _ in range(d - 1):
                sq = _ldivmod(_lmul(sq, sq, 2), coeffs, 2)[1]
                trace = _ladd(trace, sq, 2)
            t = _lgcd(trace, coeffs, 2)
        else:
            u = _lpowmod(r, (q**d - 1) // 2, coeffs, q)
            t = _lgcd(_lsub(u, [1], q), coeffs, q)
        if not 0 < len(t) - 1 < n:
            continue
        rest = _ldivmod(coeffs, t, q)[0]
        return _equal_degree(t, d, q, rng) + _equal_degree(rest, d, q, rng)


def poly_factor(poly: FpPoly) -> PolyFactorization:
    """Canonical factorization into monic irreducibles.

    Square-free decomposition (with p-th-root descent for vanishing
    derivatives), then distinct-degree splitting, then randomized
    equal-degree splitting seeded deterministically from the input.

    >>> [str(f) for f, e in poly_factor(FpPoly.parse("1,0,1@2")).factors]
    ['1,1@2']
    """
    if poly.is_zero:
        raise ZeroPolynomial("cannot factor the zero polynomial")
    if poly.degree > MAX_FACTOR_DEGREE:
        raise ValueError(f"degree {poly.degree} exceeds {MAX_FACTOR_DEGREE}")
    q = poly.characteristic
    unit = poly.lead
    exponents: dict[FpPoly, int] = {}
    if poly.degree >= 1:
        rng = random.Random(_seed_from(poly.coefficients, q))
        for part, mult in _squarefree_parts(list(poly.coefficients), q):
            for prod, d in _distinct_degree(part, q):
                for irr in _equal_degree(prod, d, q, rng):
                    f = FpPoly(q, tuple(irr))
                    exponents[f] = exponents.get(f, 0) + mult
    factors = tuple(sorted(exponents.items(), key=lambda fe: fe[0].sort_key()))
    return PolyFactorization(unit, factors, q)


def is_irreducible(poly: FpPoly) -> bool:
    """Deterministic irreducibility test (Frobenius order conditions)."""
    n = poly.degree
    if n < 1:
        return False
    q = poly.characteristic
    coeffs = list(poly.coefficients)
    if not poly.is_monic:
        coeffs = _lmonic(coeffs, q)
    if n == 1:
        return True
    powers = {}
    need = {n // r for r in {p for p, _ in factor(n).pairs()}}
    h = _ldivmod([0, 1], coeffs, q)[1]
    for i in range(1, n + 1):
        h = _lpowmod(h, q, coeffs, q)
        if i in need:
            powers[i] = h
    if _lstrip(_lsub(h, [0, 1], q)):
        return False
    for d, hd in powers.items():
        g = _lgcd(_lsub(hd, [0, 1], q), coeffs, q)
        if len(g) != 1:
            return False
    return True


def count_irreducibles(q: int, n: int) -> int:
    """Number of monic irreducible degree-n polynomials over F_q.

    Exact Moebius sum (1/n) sum_{d|n} mu(d) q^{n/d}; the q^n < 2^63 guard
    keeps the arithmetic in machine-checkable range.

    >>> count_irreducibles(2, 4)
    3
    """
    _check_characteristic(q)
    if n < 1:
        raise ValueError(f"degree must be positive, got {n}")
    if q**n >= 1 << 63:
        raise OverflowError(f"q^n = {q}^{n} exceeds 2^63")
    total = sum(mobius(d) * q ** (n // d) for d in range(1, n + 1) if n % d == 0)
    assert total % n == 0
    return total // n


@dataclass(frozen=True)
class PolyAbcTriple:
    """Coprime a + b = c over one F_p, not all derivatives zero."""

    a: FpPoly
    b: FpPoly
    c: FpPoly

    @property
    def characteristic(self) -> int:
        return self.a.characteristic


def validate_poly_triple(a: FpPoly, b: FpPoly, c: FpPoly) -> PolyAbcTriple:
    """Check the polynomial ABC-triple invariants and build the triple."""
    if a.characteristic != b.characteristic or b.characteristic != c.characteristic:
        raise InvalidPolyTriple("mixed characteristics")
    if a.is_zero or b.is_zero or c.is_zero:
        raise InvalidPolyTriple("zero entries are not allowed")
    if (a + b) != c:
        raise InvalidPolyTriple("a + b != c")
    for u, v in ((a, b), (b, c), (a, c)):
        if u.gcd(v).degree != 0:
            raise InvalidPolyTriple(f"common factor {u.gcd(v)}")
    if a.derivative().is_zero and b.derivative().is_zero and c.derivative().is_zero:
        raise InvalidPolyTriple("all formal derivatives vanish")
    return PolyAbcTriple(a, b, c)


def poly_wam(t: PolyAbcTriple, s: complex) -> WamEvaluation:
    """wam of abc at s, with degrees as heights.

    >>> one, x = FpPoly.one(2), FpPoly.x_power(2)
    >>> t = validate_poly_triple(one, x, one + x)
    >>> poly_wam(t, 1).value
    (1+0j)
    """
    f = poly_factor(t.a * t.b * t.c)
    heights = [float(p.degree) for p, _ in f.factors]
    exps = [e for _, e in f.factors]
    return evaluate_wam(wam_sums(heights, exps), s)


@dataclass(frozen=True)
class MasonStothersReport:
    """wam(abc, 1) against the polynomial ABC bound of 3."""

    wam_at_one: float
    bound: float
    holds: bool


def mason_stothers_check(t: PolyAbcTriple) -> MasonStothersReport:
    """wam(abc, 1) <= 3: a theorem for valid triples, verified numerically."""
    value = poly_wam(t, 1.0).value.real
    return MasonStothersReport(value, 3.0, value <= 3.0 + 1e-9)


def cyclotomic_wam_formula(p: int, s: complex) -> WamEvaluation:
    """Closed-form wam of the rational triple (1, x^p - 1, x^p), p prime.

    The middle entry splits as (x - 1) times an irreducible of degree
    p - 1, so wam(abc, s) = (p + p^s + 1) / (p^s + 2); no polynomial
    factorization is performed.

    >>> cyclotomic_wam_formula(5, 0).value
    (2.3333333333333335+0j)
    """
    if p < 2 or not is_prime(p):
        raise ValueError(f"p must be prime, got {p}")
    z = as_complex(s)
    ps = cmath.exp(z * math.log(p))
    num = p + ps + 1
    den = ps + 2
    scale = math.exp(z.real * math.log(p)) + 2.0
    if abs(den) < POLE_RTOL * scale:
        return WamEvaluation(z, num, den, None)
    return WamEvaluation(z, num, den, num / den)


# ----------------------------------------------------------------------
# pigeonhole construction over F_2 fast path: polynomials as bit masks


def _gf2_mod(a: int, f: int, df: int) -> int:
    while a and a.bit_length() - 1 >= df:
        a ^= f << (a.bit_length() - 1 - df)
    return a


def _gf2_mulmod(a: int, b: int, f: int, df: int) -> int:
    r = 0
    while b:
        if b & 1:
            r ^= a
        b >>= 1
        a <<= 1
    return _gf2_mod(r, f, df)


def _gf2_gcd(a: int, b: int) -> int:
    while b:
        a, b = b, _gf2_mod(a, b, b.bit_length() - 1)
    return a


def _gf2_irreducible(f: int, n: int, need: frozenset[int]) -> bool:
    h = 2  # the polynomial x
    powers = {}
    for i in range(1, n + 1):
        h = _gf2_mulmod(h, h, f, n)
        if i in need:
            powers[i] = h
    if h != 2:
        return False
    for d in need - {n}:
        if _gf2_gcd(powers[d] ^ 2, f) != 1:
            return False
    return True


@dataclass(frozen=True)
class PigeonholeConstruction:
    """A pigeonhole triple (Q, x^(n-k) R, P) plus how it was found.

    P and Q are monic irreducibles of degree n sharing their lower n-k
    coefficients; the counting bound irreducible_count > q^(n-k)
    guarantees such a pair exists.  Statistics describe the (early
    stopping) bucket scan that located the first collision.
    """

    triple: PolyAbcTriple
    q: int
    n: int
    k: int
    r_poly: FpPoly
    irreducible_count: int
    pigeonhole_bound: int
    buckets_scanned: int
    candidates_tested: int
    irreducibles_seen: int
    collision_lower: tuple[int, ...]


def _lex_uppers(q: int, k: int) -> Iterator[tuple[int, ...]]:
    return itertools.product(range(q), repeat=k)


def _scan_buckets(q: int, n: int, k: int):
    """Yield (lower-coefficient tuple) buckets in lexicographic order.

    Lower tuples are (c_0, ..., c_{n-k-1}) compared from c_0 on; buckets
    with c_0 = 0 are skipped outright, since x | f makes f reducible for
    every degree n >= 2.
    """
    for c0 in range(1, q):
        for rest in itertools.product(range(q), repeat=n - k - 1):
            yield (c0,) + rest


def pigeonhole_triple(q: int, n: int) -> PigeonholeConstruction:
    """Construct a polynomial ABC triple from an irreducible collision.

    With k = ceil(log_q n), the count of monic irreducibles of degree n
    must exceed q^(n-k) (checked, not assumed); two of them then share
    their lower n-k coefficients.  Scanning lower-coefficient buckets in
    lexicographic order and stopping at the first bucket holding two
    irreducibles returns the lexicographically smallest such pair.  The
    characteristic must not divide n (this keeps the derivative of
    x^(n-k) R nonzero: deg R < k and the x^n derivative term survives).
    """
    _check_characteristic(q)
    if n < 1:
        raise ValueError(f"n must be positive, got {n}")
    if n % q == 0:
        raise PreconditionFailed(
            f"characteristic {q} divides n = {n}; derivatives degenerate"
        )
    if q**n > ENUMERATION_LIMIT:
        raise EnumerationBudget(f"q^n = {q}^{n} exceeds {ENUMERATION_LIMIT}")
    k = 0
    while q**k < n:
        k += 1
    count = count_irreducibles(q, n)
    bound = q ** (n - k)
    if count <= bound:
        raise PreconditionFailed(
            f"N_{q}({n}) = {count} <= {q}^{n - k} = {bound}: "
            "no collision is guaranteed at this size"
        )

    prime_divs = {p for p, _ in factor(n).pairs()}
    need = frozenset({n} | {n // r for r in prime_divs})

    buckets_scanned = 0
    tested = 0
    seen = 0
    for lower in _scan_buckets(q, n, k):
        buckets_scanned += 1
        hits: list[FpPoly] = []
        for upper in _lex_uppers(q, k):
            coeffs = lower + upper + (1,)
            if sum(coeffs) % q == 0:  # f(1) = 0 makes x-1 a factor
                continue
            tested += 1
            if q == 2:
                f_int = sum(c << i for i, c in enumerate(coeffs))
                ok = _gf2_irreducible(f_int, n, need)
            else:
                ok = is_irreducible(FpPoly(q, coeffs))
            if ok:
                seen += 1
                hits.append(FpPoly(q, coeffs))
                if len(hits) == 2:
                    break
        if len(hits) == 2:
            qq, pp = hits
            b = pp - qq
            r_poly = FpPoly(q, b.coefficients[n - k :])
            triple = validate_poly_triple(qq, b, pp)
            return PigeonholeConstruction(
                triple=triple,
                q=q,
                n=n,
                k=k,
                r_poly=r_poly,
                irreducible_count=count,
                pigeonhole_bound=bound,
                buckets_scanned=buckets_scanned,
                candidates_tested=tested,
                irreducibles_seen=seen,
                collision_lower=lower,
            )
    raise RuntimeError("pigeonhole scan found no collision despite the bound")
