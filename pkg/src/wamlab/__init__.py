"""Weighted average multiplicity of factorizations, as a function of s.

For n = prod p_k^{e_k}, wam(n, s) interpolates between the average
multiplicity Omega/omega (s = 0), ln n / ln rad n (s = 1), and the top
multiplicity e_m (Re s -> +inf).  The package evaluates wam for complex
s over the integers and over F_q[x], locates the poles (zeros of the
denominator), computes the critical abscissa bounding their real parts,
and reproduces ABC-triple statistics at desk scale.
"""

__version__ = "0.1.0"

from .arith import (
    Factorization,
    FactorizationBudgetExceeded,
    factor,
    is_prime,
    mobius,
    radical,
)
from .critical import BelowCritical, CriticalProfile, critical_abscissa, wam_upper
from .ffpoly import (
    FpPoly,
    PolyAbcTriple,
    PolyFactorization,
    count_irreducibles,
    cyclotomic_wam_formula,
    mason_stothers_check,
    pigeonhole_triple,
    poly_factor,
    poly_wam,
    validate_poly_triple,
)
from .triples import (
    AbcTriple,
    HeatmapGrid,
    em_histogram,
    generate_triples,
    max_wam_heatmap,
    mersenne_family,
    parse_dataset,
    validate_triple,
    write_dataset,
)
from .wamcore import (
    EmptyFactorization,
    WamEvaluation,
    crude_em_bound_holds,
    em_limit,
    mersenne_lower_bound_check,
    wam,
    wam_at,
    wam_original,
)
from .zeros import (
    SearchRegion,
    ZeroRecord,
    argument_principle_count,
    critical_line_probe,
    find_zeros,
)

__all__ = [
    "__version__",
    "Factorization",
    "FactorizationBudgetExceeded",
    "factor",
    "is_prime",
    "mobius",
    "radical",
    "BelowCritical",
    "CriticalProfile",
    "critical_abscissa",
    "wam_upper",
    "FpPoly",
    "PolyAbcTriple",
    "PolyFactorization",
    "count_irreducibles",
    "cyclotomic_wam_formula",
    "mason_stothers_check",
    "pigeonhole_triple",
    "poly_factor",
    "poly_wam",
    "validate_poly_triple",
    "AbcTriple",
    "HeatmapGrid",
    "em_histogram",
    "generate_triples",
    "max_wam_heatmap",
    "mersenne_family",
    "parse_dataset",
    "validate_triple",
    "write_dataset",
    "EmptyFactorization",
    "WamEvaluation",
    "crude_em_bound_holds",
    "em_limit",
    "mersenne_lower_bound_check",
    "wam",
    "wam_at",
    "wam_original",
    "SearchRegion",
    "ZeroRecord",
    "argument_principle_count",
    "critical_line_probe",
    "find_zeros",
]
