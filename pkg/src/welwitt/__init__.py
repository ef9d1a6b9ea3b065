"""Exact computation of Welschinger-Witt invariants and quadratic curve counts.

Four layers:

* :mod:`welwitt.wittring` -- exact Witt-ring arithmetic over Q, R and F_p,
* :mod:`welwitt.tring` -- the idempotent-ish quotient ring Z[t]/(t^2 = 2t)
  hosting floor-diagram multiplicities,
* :mod:`welwitt.invariants` -- multivariable Witt invariants of etale
  algebras: beta/lambda/alpha/chi bases, multireal triangles, cutting and
  splitting, ramification and torsion tests,
* :mod:`welwitt.welschinger` and :mod:`welwitt.floor` -- the two independent
  routes to the same numbers: invariants built from Welschinger tables, and
  quadratic counts assembled from floor diagrams.
"""

from .invariants import (
    AlgebraFactor,
    BetaInvariant,
    EtaleAlgebraSpec,
    MultiDegree,
    MultirealTriangle,
    NotBetaIntegralError,
    beta_from_multireal,
    convert_basis,
    cut,
    eval_invariant,
    kron_multireal,
    multireal_from_beta,
    multireal_matrix,
    ramified_primes,
    split,
    torsion_check,
    triangle_from_multireal,
)
from .tring import TPoly
from .welschinger import (
    FixtureStore,
    SurfaceClass,
    WelschingerTable,
    alias_resolve,
    build_vw,
    hypothesis_guard,
    p3_aggregate,
    triangle_semantics,
    wg_lift,
)
from .wittring import (
    DiagonalForm,
    GWLift,
    SquareClass,
    WFpClass,
    WittClassQ,
    diag_to_wittq,
    trace_form,
)

__version__ = "0.1.0"

__all__ = [
    "AlgebraFactor",
    "BetaInvariant",
    "DiagonalForm",
    "EtaleAlgebraSpec",
    "FixtureStore",
    "GWLift",
    "MultiDegree",
    "MultirealTriangle",
    "NotBetaIntegralError",
    "SquareClass",
    "SurfaceClass",
    "TPoly",
    "WFpClass",
    "WelschingerTable",
    "WittClassQ",
    "alias_resolve",
    "beta_from_multireal",
    "build_vw",
    "convert_basis",
    "cut",
    "diag_to_wittq",
    "eval_invariant",
    "hypothesis_guard",
    "kron_multireal",
    "multireal_from_beta",
    "multireal_matrix",
    "p3_aggregate",
    "ramified_primes",
    "split",
    "torsion_check",
    "trace_form",
    "triangle_from_multireal",
    "triangle_semantics",
    "wg_lift",
]
