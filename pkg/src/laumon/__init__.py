"""Exact computation of the affine Laumon partition function Z(m) along three routes.

The routes are equivariant localization over torus fixed points, the
eigenfunction of a non-stationary Calogero-Moser operator, and graded traces
of intertwiners on the Verma module of affine gl_n.
"""

from laumon.series import (
    ExactScalar,
    OffsetSeries,
    TruncatedSeries,
    parse_scalar,
    weyl_delta,
    window_monomial,
)
from laumon.geometry import Conventions, EquivParams, FixedPoint

__all__ = [
    "Conventions",
    "EquivParams",
    "ExactScalar",
    "FixedPoint",
    "OffsetSeries",
    "TruncatedSeries",
    "parse_scalar",
    "weyl_delta",
    "window_monomial",
]
