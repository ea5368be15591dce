"""Zero location for wam denominators f(s) = sum_k (ln p_k)^s.

Zeros of f are the candidate poles of wam.  A zero is an actual pole
unless the numerator vanishes there too, which happens identically (for
every zero at once) exactly when all exponents are equal.  The search is
grid-seeded Newton iteration; an argument-principle contour count over
the same rectangle serves as an independent cross-check, and a direct
scan along the vertical line Re(s) = a_crit probes how close f comes to
vanishing near its critical abscissa.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Iterator, Sequence

import numpy as np

from .arith import Factorization
from .critical import critical_abscissa
from .wamcore import ExpSum, WamSums, integer_wam_sums

#: |N(s)| below this multiple of sum e_k |(ln p_k)^s| marks a removable zero.
REMOVABLE_RTOL = 1e-8
#: |f| below this multiple of its term scale is unsafe for contour quadrature.
BOUNDARY_RTOL = 1e-12
_GL_NODES_PER_PANEL = 64
_MAX_PANELS_PER_EDGE = 64


class BoundaryZero(RuntimeError):
    """A contour node sits too close to a zero of f for safe quadrature."""


class QuadratureNoConvergence(RuntimeError):
    """The contour integral did not settle on an integer within budget."""


class Classification(str, Enum):
    POLE = "pole"
    REMOVABLE = "removable"


@dataclass(frozen=True)
class SearchRegion:
    """A rectangle in the s-plane plus the numerical knobs of the search."""

    re_min: float
    re_max: float
    im_min: float
    im_max: float
    grid_step: float = 0.05
    newton_tol: float = 1e-10
    max_newton_iters: int = 40

    def __post_init__(self):
        if not (self.re_min < self.re_max and self.im_min < self.im_max):
            raise ValueError("region must have positive extent on both axes")
        if self.grid_step <= 0 or self.newton_tol <= 0:
            raise ValueError("grid_step and newton_tol must be positive")
        if self.max_newton_iters < 1:
            raise ValueError("max_newton_iters must be positive")

    def contains(self, z: complex, slack: float = 0.0) -> bool:
        return (
            self.re_min - slack <= z.real <= self.re_max + slack
            and self.im_min - slack <= z.imag <= self.im_max + slack
        )


@dataclass(frozen=True)
class ZeroRecord:
    """One polished zero of f with its pole-vs-removable classification."""

    location: complex
    residual: float
    numerator_magnitude: float
    classification: Classification


@dataclass(frozen=True)
class ZeroSearch(Sequence):
    """find_zeros result: the records plus search diagnostics.

    Behaves as a sequence of ZeroRecord; the counters say how many Newton
    seeds were launched, how many converged, and how many were dropped
    (and why), so nothing is silently lost.
    """

    records: tuple[ZeroRecord, ...]
    seeds: int
    converged: int
    no_convergence: int
    out_of_region: int
    deduplicated: int = 0

    def __len__(self) -> int:
        return len(self.records)

    def __getitem__(self, i):
        return self.records[i]

    def __iter__(self) -> Iterator[ZeroRecord]:
        return iter(self.records)


def _axis(lo: float, hi: float, step: float) -> np.ndarray:
    n = int(math.floor((hi - lo) / step + 1e-9)) + 1
    return lo + step * np.arange(n)


def _seed_points(den: ExpSum, region: SearchRegion) -> np.ndarray:
    """Centers of grid cells where Re f and Im f both change sign."""
    re = _axis(region.re_min, region.re_max, region.grid_step)
    im = _axis(region.im_min, region.im_max, region.grid_step)
    if re.size < 2 or im.size < 2:
        raise ValueError("region is smaller than one grid cell")
    grid = re[None, :] + 1j * im[:, None]
    vals = den(grid)

    def _mixed(sign):
        corners = sign[:-1, :-1] + sign[:-1, 1:] + sign[1:, :-1] + sign[1:, 1:]
        return np.abs(corners) < 4

    cells = _mixed(np.where(vals.real >= 0, 1, -1)) & _mixed(
        np.where(vals.imag >= 0, 1, -1)
    )
    ii, jj = np.nonzero(cells)
    return (re[jj] + 0.5 * region.grid_step) + 1j * (im[ii] + 0.5 * region.grid_step)


def _newton_polish(den: ExpSum, seeds: np.ndarray, region: SearchRegion):
    """Run Newton iteration on every seed at once; split by outcome."""
    dden = den.derivative()
    z = seeds.astype(complex)
    active = np.ones(z.shape, dtype=bool)
    for _ in range(region.max_newton_iters):
        if not active.any():
            break
        fz = den(z[active])
        dfz = dden(z[active])
        ok = np.abs(dfz) > 1e-300
        step = np.zeros_like(fz)
        step[ok] = fz[ok] / dfz[ok]
        z[active] = z[active] - step
        small = np.abs(den(z[active])) < region.newton_tol
        idx = np.nonzero(active)[0]
        active[idx[small]] = False
    converged = ~active
    return z[converged], int(converged.sum()), int(active.sum())


def _dedup(points: np.ndarray, residuals: np.ndarray, radius: float):
    """Greedy clustering: within radius, keep the smaller residual."""
    order = np.lexsort((points.imag, points.real))
    kept: list[int] = []
    for i in order:
        merged = False
        for j, k in enumerate(kept):
            if abs(points[i] - points[k]) < radius:
                if residuals[i] < residuals[k]:
                    kept[j] = i
                merged = True
                break
        if not merged:
            kept.append(i)
    return kept


def find_zeros_of_sums(sums: WamSums, region: SearchRegion) -> ZeroSearch:
    """Zero search on explicit numerator/denominator sums."""
    if len(sums.denominator.weights) < 2:
        raise ValueError("zero search requires at least two factors (m >= 2)")
    den = sums.denominator
    seeds = _seed_points(den, region)
    polished, converged, dropped = _newton_polish(den, seeds, region)

    inside = np.array(
        [region.contains(z, region.newton_tol) for z in polished], dtype=bool
    )
    out_of_region = int(inside.size - inside.sum())
    pts = polished[inside]
    residuals = np.abs(den(pts)) if pts.size else np.empty(0)

    kept = _dedup(pts, residuals, 10.0 * region.newton_tol)
    dedup_dropped = int(pts.size - len(kept))

    records = []
    for i in kept:
        z = complex(pts[i])
        num_mag = abs(sums.numerator(z))
        threshold = REMOVABLE_RTOL * sums.numerator.abs_at(z.real)
        cls = Classification.REMOVABLE if num_mag < threshold else Classification.POLE
        records.append(ZeroRecord(z, float(residuals[i]), num_mag, cls))
    # Sort on (re, im) with re rounded to 1e-6 so that vertically stacked
    # zeros (equal re up to solver noise) come out in increasing im order.
    records.sort(key=lambda r: (round(r.location.real, 6), r.location.imag))
    return ZeroSearch(
        records=tuple(records),
        seeds=int(seeds.size),
        converged=converged,
        no_convergence=dropped,
        out_of_region=out_of_region,
        deduplicated=dedup_dropped,
    )


def find_zeros(f: Factorization, region: SearchRegion) -> ZeroSearch:
    """Zeros of the denominator of wam(n, s) inside the region.

    Every grid cell (default step 0.05) where both Re f and Im f change
    sign seeds a Newton run; converged points are filtered to the region,
    deduplicated within 10x newton_tol (smaller residual wins), and
    classified pole/removable by the relative size of the numerator.

    >>> from wamlab.arith import factor
    >>> search = find_zeros(factor(6), SearchRegion(-1.0, 1.0, 0.0, 10.0))
    >>> [round(r.location.imag, 6) for r in search.records]
    [6.821234]
    >>> search.records[0].classification.value
    'removable'
    """
    return find_zeros_of_sums(integer_wam_sums(f), region)


def _edge_nodes(z0: complex, z1: complex, panels: int):
    """Gauss-Legendre nodes and weights on [z0, z1], composite in panels."""
    x, w = np.polynomial.legendre.leggauss(_GL_NODES_PER_PANEL)
    starts = np.arange(panels) / panels
    t = (starts[:, None] + (x[None, :] + 1.0) / (2.0 * panels)).ravel()
    dz = z1 - z0
    nodes = z0 + t * dz
    weights = np.tile(w, panels) * (dz / (2.0 * panels))
    return nodes, weights


def _contour_integral(den: ExpSum, region: SearchRegion, panels: int) -> complex:
    corners = [
        complex(region.re_min, region.im_min),
        complex(region.re_max, region.im_min),
        complex(region.re_max, region.im_max),
        complex(region.re_min, region.im_max),
    ]
    dden = den.derivative()
    total = 0.0 + 0.0j
    for a, b in zip(corners, corners[1:] + corners[:1]):
        nodes, weights = _edge_nodes(a, b, panels)
        fz = den(nodes)
        floor = BOUNDARY_RTOL * den.abs_at(nodes.real)
        if np.any(np.abs(fz) < floor):
            raise BoundaryZero(
                "denominator vanishes on the contour; jitter the rectangle"
            )
        total += np.sum(weights * dden(nodes) / fz)
    return total / (2j * math.pi)


def argument_principle_count(f: Factorization, region: SearchRegion) -> int:
    """Number of zeros of f inside the rectangle, by contour integration.

    (1/2 pi i) times the integral of f'/f over the boundary, evaluated by
    composite Gauss-Legendre quadrature (64 nodes per panel) with the
    panel count doubled until the rounded value is stable.
    """
    den = integer_wam_sums(f).denominator
    if len(den.weights) < 2:
        raise ValueError("argument principle requires at least two factors")
    previous = None
    panels = 1
    while panels <= _MAX_PANELS_PER_EDGE:
        value = _contour_integral(den, region, panels)
        snapped = int(round(value.real))
        if (
            previous == snapped
            and abs(value.real - snapped) < 0.25
            and abs(value.imag) < 0.25
        ):
            if snapped < 0:
                raise QuadratureNoConvergence(
                    f"contour count converged to {snapped} < 0"
                )
            return snapped
        previous = snapped
        panels *= 2
    raise QuadratureNoConvergence(
        f"contour integral unstable after {_MAX_PANELS_PER_EDGE} panels/edge"
    )


@dataclass(frozen=True)
class CriticalLineProbe:
    """min |f| along a segment of the critical line Re(s) = a_crit."""

    a_crit: float
    b_max: float
    samples: int
    min_abs: float
    argmin_b: float


def critical_line_probe(
    f: Factorization, b_max: float, samples: int
) -> CriticalLineProbe:
    """Scan |f(a_crit + ib)| for b on a uniform grid over [0, b_max].

    `samples` counts grid intervals, so the b spacing is b_max/samples and
    samples+1 points are evaluated; doubling `samples` (or extending b_max
    at fixed spacing) refines to a superset grid, which is what makes the
    reported minimum monotone under refinement.  Requires m >= 3, where
    denominator zeros genuinely are poles of a nonconstant wam.
    """
    if len(f.primes) < 3:
        raise ValueError("the critical-line probe requires m >= 3")
    if b_max <= 0 or samples < 1:
        raise ValueError("b_max and samples must be positive")
    a = critical_abscissa(f).a_crit
    den = integer_wam_sums(f).denominator
    step = b_max / samples
    best = math.inf
    best_b = 0.0
    chunk = 1 << 20
    for start in range(0, samples + 1, chunk):
        idx = np.arange(start, min(start + chunk, samples + 1))
        vals = np.abs(den(a + 1j * step * idx))
        k = int(np.argmin(vals))
        if vals[k] < best:
            best = float(vals[k])
            best_b = float(step * idx[k])
    return CriticalLineProbe(a, b_max, samples, best, best_b)
