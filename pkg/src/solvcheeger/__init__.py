"""Cheeger isoperimetric constants of simply connected solvable Lie groups."""

from .algebra import (AdOperator, LieAlgebra, ad, bracket, derived_series,
                      is_nilpotent, is_solvable, is_unimodular, lower_central_series,
                      trace_form)
from .catalog import catalog_names, load_catalog
from .cheeger import CheegerResult, cheeger_constant, scaling_law
from .errors import (DimensionError, JacobiError, NotPositiveDefinite, NotSolvable,
                     ParseError, QuadratureDomainError, SolvCheegerError,
                     SweepDidNotConverge, UnsupportedG0)
from .files import AlgebraSpec, dump_algebra, load_algebra_file, parse_algebra
from .group_model import (HaarDensity, ModelKind, SemidirectModel, build_model,
                          haar_density, jacobian_oracle, metric_tensor, model_from_matrix)
from .isoperimetry import (Ball, Box, BoxSet, GraphSet, IsoperimetricReport, box_cap_area,
                           box_report, box_volume, box_wall_area, equality_sweep,
                           graph_set_report, wall_bound_M)
from .metric import InnerProduct, MetricSplitting, dual_norm, split

__version__ = "0.1.0"
