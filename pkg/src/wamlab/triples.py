"""ABC triples over the integers and their wam statistics.

An ABC triple is a coprime pair a + b = c (canonicalized to a <= b); its
quality is ln c / ln rad(abc), so quality > 1 means c beats the radical.
The module validates and streams triples from "a b c" text files,
enumerates all triples up to a ceiling, histograms e_m of a*b*c, and
rasterizes max |wam(abc, s)| grids over rectangles of the s-plane.
"""

from __future__ import annotations

import math
import os
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

import numpy as np

from .arith import (
    DEFAULT_RHO_BUDGET,
    Factorization,
    FactorizationBudgetExceeded,
    factor,
)
from .wamcore import integer_wam_sums
from .zeros import SearchRegion

DEFAULT_HEATMAP_CAP = 1e6
GENERATE_C_MAX_LIMIT = 10**7
#: Relative slack for the vectorized quality prefilter; survivors are
#: re-tested exactly before being kept.
_PREFILTER_SLACK = 1e-9


class NotATriple(ValueError):
    """a + b != c (or a nonpositive entry)."""


class NotCoprime(ValueError):
    """The triple shares a common factor."""


@dataclass(frozen=True)
class AbcTriple:
    """A validated ABC triple with its abc factorization cached."""

    a: int
    b: int
    c: int
    abc_factorization: Factorization
    quality: float
    e_m: int

    def __str__(self) -> str:
        return f"{self.a} {self.b} {self.c}"


def _merge_coprime(parts: Iterable[Factorization]) -> Factorization:
    pairs = sorted(pair for f in parts for pair in f.pairs())
    return Factorization.from_pairs(pairs)


def validate_triple(
    a: int, b: int, c: int, *, budget: int = DEFAULT_RHO_BUDGET
) -> AbcTriple:
    """Validate and canonicalize (a, b, c); factor a*b*c along the way.

    >>> t = validate_triple(8, 1, 9)
    >>> (t.a, t.b, t.e_m, round(t.quality, 5))
    (1, 8, 2, 1.22629)
    """
    if min(a, b, c) < 1:
        raise NotATriple(f"entries must be positive, got {(a, b, c)}")
    if a > b:
        a, b = b, a
    if a + b != c:
        raise NotATriple(f"{a} + {b} != {c}")
    if math.gcd(a, b) != 1:  # with a + b = c this covers all three pairs
        raise NotCoprime(f"gcd({a}, {b}) = {math.gcd(a, b)} > 1")
    f = _merge_coprime(
        factor(x, budget=budget) for x in (a, b, c) if x > 1
    )
    quality = math.log(c) / sum(math.log(p) for p in f.primes)
    return AbcTriple(a, b, c, f, quality, f.exponents[-1])


@dataclass(frozen=True)
class ParseIssue:
    """A rejected dataset line: its number, raw text, and the reason."""

    line_number: int
    text: str
    message: str


class DatasetParse:
    """Single-pass iterator over the triples of an "a b c" text file.

    Lines hold three whitespace-separated integers; '#' starts a comment
    and blank lines are skipped.  Malformed or invalid lines never stop
    the stream: they are collected (with line numbers) in `issues`, which
    is complete once iteration finishes.  I/O errors do abort.
    """

    def __init__(self, path: str | os.PathLike):
        self.path = path
        self.issues: list[ParseIssue] = []

    def __iter__(self) -> Iterator[AbcTriple]:
        with open(self.path, "r", encoding="ascii") as fh:
            for lineno, raw in enumerate(fh, start=1):
                line = raw.split("#", 1)[0].strip()
                if not line:
                    continue
                fields = line.split()
                if len(fields) != 3:
                    self.issues.append(
                        ParseIssue(lineno, raw.rstrip("\n"), "expected 3 fields")
                    )
                    continue
                try:
                    a, b, c = (int(x) for x in fields)
                except ValueError:
                    self.issues.append(
                        ParseIssue(lineno, raw.rstrip("\n"), "non-integer field")
                    )
                    continue
                try:
                    yield validate_triple(a, b, c)
                except ValueError as exc:
                    self.issues.append(
                        ParseIssue(lineno, raw.rstrip("\n"), str(exc))
                    )


def parse_dataset(path: str | os.PathLike) -> DatasetParse:
    """Open an "a b c" dataset for streaming; see DatasetParse."""
    return DatasetParse(path)


def write_dataset(path: str | os.PathLike, triples: Iterable[AbcTriple]) -> None:
    """Write triples in the dataset format (ASCII, LF, one per line)."""
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        for t in triples:
            fh.write(f"{t.a} {t.b} {t.c}\n")


def _radical_sieve(limit: int) -> np.ndarray:
    """rad(x) for x in [0, limit] (rad(0) := 1), as int64."""
    rad = np.ones(limit + 1, dtype=np.int64)
    is_prime = np.ones(limit + 1, dtype=bool)
    is_prime[:2] = False
    for p in range(2, limit + 1):
        if is_prime[p]:
            is_prime[2 * p :: p] = False
            rad[p::p] *= p
    return rad


def generate_triples(c_max: int, min_quality: float = 1.0) -> list[AbcTriple]:
    """All ABC triples with c <= c_max and quality >= min_quality.

    Sorted by descending quality (ties by ascending c then a).  A sieve
    supplies radicals; a vectorized pass per c prefilters by approximate
    quality, and survivors are validated exactly.
    """
    if not 2 <= c_max <= GENERATE_C_MAX_LIMIT:
        raise ValueError(f"c_max must lie in [2, {GENERATE_C_MAX_LIMIT}]")
    rad = _radical_sieve(c_max)
    rad_f = rad.astype(float)
    found: list[AbcTriple] = []
    for c in range(2, c_max + 1):
        a = np.arange(1, c // 2 + 1)
        coprime = np.gcd(a, c) == 1
        a = a[coprime]
        if a.size == 0:
            continue
        b = c - a
        # quality ~= ln c / ln(rad(a) rad(b) rad(c)); exact for (1,1,2).
        log_radprod = np.log(rad_f[a]) + np.log(rad_f[b]) + np.log(rad_f[c])
        passing = np.log(c) >= (min_quality - _PREFILTER_SLACK) * log_radprod
        for ai in a[passing]:
            t = validate_triple(int(ai), c - int(ai), c)
            if t.quality >= min_quality:
                found.append(t)
    found.sort(key=lambda t: (-t.quality, t.c, t.a))
    return found


def em_histogram(triples: Iterable[AbcTriple]) -> dict[int, int]:
    """Counts of the top multiplicity e_m of abc across the triples."""
    return dict(sorted(Counter(t.e_m for t in triples).items()))


def _symmetric_axis(lo: float, hi: float, step: float) -> np.ndarray:
    """Uniform grid on [lo, hi] built symmetrically about the midpoint.

    Using integer indices around the exact center makes the axis (and any
    grid built on it) bit-exactly symmetric under reflection, so conjugate
    symmetry of |wam| survives in floating point.
    """
    n = int(math.floor((hi - lo) / step + 1e-9)) + 1
    center = 0.5 * (lo + hi)
    idx = np.arange(n) - 0.5 * (n - 1)
    return center + step * idx


@dataclass(frozen=True)
class HeatmapGrid:
    """log10 of capped max |wam(abc, s)| over a triple set, on a grid.

    cells[i, j] corresponds to s = re_axis[j] + 1j * im_axis[i].
    """

    re_axis: np.ndarray
    im_axis: np.ndarray
    cells: np.ndarray
    cap: float


def _worker_count() -> int:
    env = os.environ.get("WAMLAB_THREADS", "")
    if env.strip():
        return max(1, int(env))
    return min(8, os.cpu_count() or 1)


def _abs_wam_grid(f: Factorization, grid: np.ndarray, cap: float) -> np.ndarray:
    sums = integer_wam_sums(f)
    num = sums.numerator(grid)
    den = sums.denominator(grid)
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.abs(num) / np.abs(den)
    return np.where(np.isfinite(ratio), np.minimum(ratio, cap), cap)


def max_wam_heatmap(
    triples: Sequence[AbcTriple],
    region: SearchRegion,
    cap: float = DEFAULT_HEATMAP_CAP,
) -> HeatmapGrid:
    """Rasterize log10(max over triples of |wam(abc, s)|), capped.

    Cells at poles (or anywhere the ratio exceeds the cap) saturate at
    log10(cap); the cap is recorded on the grid.  Triples are processed
    by a small thread pool (size capped by WAMLAB_THREADS) and reduced
    with an order-independent exact maximum.
    """
    if not triples:
        raise ValueError("heatmap needs at least one triple")
    if cap <= 0:
        raise ValueError("cap must be positive")
    re_axis = _symmetric_axis(region.re_min, region.re_max, region.grid_step)
    im_axis = _symmetric_axis(region.im_min, region.im_max, region.grid_step)
    grid = re_axis[None, :] + 1j * im_axis[:, None]

    best = np.zeros(grid.shape)
    with ThreadPoolExecutor(max_workers=_worker_count()) as pool:
        for partial in pool.map(
            lambda t: _abs_wam_grid(t.abc_factorization, grid, cap), triples
        ):
            np.maximum(best, partial, out=best)
    cells = np.log10(np.maximum(best, 1e-300))
    return HeatmapGrid(re_axis, im_axis, cells, cap)


@dataclass(frozen=True)
class MersenneFamily(Sequence):
    """Triples (1, 2^n - 1, 2^n); entries whose odd part resisted the
    factoring budget are skipped and listed in `skipped`, never fatal."""

    triples: tuple[AbcTriple, ...]
    skipped: tuple[tuple[int, str], ...]

    def __len__(self) -> int:
        return len(self.triples)

    def __getitem__(self, i):
        return self.triples[i]

    def __iter__(self) -> Iterator[AbcTriple]:
        return iter(self.triples)


def mersenne_family(
    n_max: int, *, budget: int = DEFAULT_RHO_BUDGET
) -> MersenneFamily:
    """The family (1, 2^n - 1, 2^n) for n in [2, n_max], each validated."""
    if not 2 <= n_max <= 63:
        raise ValueError(f"n_max must lie in [2, 63], got {n_max}")
    triples = []
    skipped = []
    for n in range(2, n_max + 1):
        try:
            triples.append(validate_triple(1, 2**n - 1, 2**n, budget=budget))
        except FactorizationBudgetExceeded as exc:
            skipped.append((n, str(exc)))
    return MersenneFamily(tuple(triples), tuple(skipped))
