"""Shared strategies and suite-wide settings.

Exhaustive sweeps run at desk scale by default; set WAMLAB_FULL=1 to run
the wider (slower) ranges.
"""

import os

import hypothesis.strategies as st
from hypothesis import HealthCheck, settings

from wamlab.arith import Factorization

FULL = os.environ.get("WAMLAB_FULL") == "1"

settings.register_profile(
    "wamlab",
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
    max_examples=200 if FULL else 60,
)
settings.load_profile("wamlab")

SMALL_PRIMES = (
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47,
    53, 59, 61, 67, 71, 73, 79, 83, 89, 97,
)


@st.composite
def factorizations(draw, min_m=1, max_m=4, max_exp=5):
    """Factorizations assembled from a pool of small primes."""
    primes = draw(
        st.sets(st.sampled_from(SMALL_PRIMES), min_size=min_m, max_size=max_m)
    )
    pairs = [(p, draw(st.integers(1, max_exp))) for p in sorted(primes)]
    return Factorization.from_pairs(pairs)


def random_poly(rng, q, max_deg, *, monic=False):
    """A uniformly random nonzero polynomial over F_q of degree <= max_deg."""
    from wamlab.ffpoly import FpPoly

    while True:
        deg = rng.randint(0, max_deg)
        coeffs = [rng.randrange(q) for _ in range(deg)]
        coeffs.append(1 if monic else rng.randrange(1, q))
        poly = FpPoly(q, tuple(coeffs))
        if not poly.is_zero:
            return poly


def random_poly_triple(rng, q, max_deg):
    """A random valid coprime triple a + b = c over F_q."""
    from wamlab.ffpoly import InvalidPolyTriple, validate_poly_triple

    while True:
        a = random_poly(rng, q, max_deg)
        b = random_poly(rng, q, max_deg)
        c = a + b
        if c.is_zero:
            continue
        try:
            return validate_poly_triple(a, b, c)
        except InvalidPolyTriple:
            continue
