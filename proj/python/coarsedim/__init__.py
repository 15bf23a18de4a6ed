"""Scale-indexed covers, components and dimension estimates for finite metric spaces."""

import json

from ._core import (
    CapExceeded,
    FormatError,
    InvalidSpace,
    PreconditionFailure,
    Space,
    interval,
    r_components,
    run_cli,
    segments,
    torsion_sum,
    tower_params,
    zd_ball,
)
from . import _core

__all__ = [
    "CapExceeded",
    "FormatError",
    "InvalidSpace",
    "PreconditionFailure",
    "Space",
    "cover",
    "fit",
    "interval",
    "proptest",
    "r_components",
    "run_cli",
    "segments",
    "torsion_sum",
    "tower_params",
    "verify_cover",
    "zd_ball",
]


def cover(space, base, k, r):
    """k-family cover of the whole space built from a named base ("brick:<d>" or "interval")."""
    return json.loads(_core.cover(space, base, k, r))


def verify_cover(space, doc):
    """Check a cover document (dict or JSON text) against the space."""
    text = doc if isinstance(doc, str) else json.dumps(doc)
    return json.loads(_core.verify_cover(space, text))


def fit(samples, tolerance="1/10"):
    """Fit a control model to (r, bound) pairs."""
    return json.loads(_core.fit(list(samples), tolerance))


def proptest(suite="all", cases=100, seed=1):
    """Violation counts per randomized property suite."""
    return dict(_core.proptest(suite, cases, seed))
