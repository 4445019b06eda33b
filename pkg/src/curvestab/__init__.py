"""Curvature and torsion stability analysis for 2-D and 3-D linear systems."""

from .asymptotics import AsymptoticReport, numeric_limit_probe, table_classify
from .equivalence import sandwich_bounds, transform_system, verify_sandwich
from .errors import *  # noqa: F401,F403
from .exppoly import ExpPolyExpr, ExpPolyTerm, LimitClass, LimitTag, classify_limit
from .flow import derivative_stack, expm, sample_trajectory
from .geometry import curvature2_signed, curvature3, log_geometry, torsion3
from .jordan import CaseTag, RealJordanForm, classify
from .stability import OracleVerdict, StabilityVerdict, Verdict, analyze, oracle

__version__ = "0.1.0"
