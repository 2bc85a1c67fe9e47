"""Seeded random X-state generators, one recipe per rank class.

Each recipe draws batches of parameter arrays that land strictly inside
their class: angles keep a margin from the degenerate edges of the
parameter box and coherence fractions keep a margin from the caps, so
classification distances stay orders of magnitude above the rank
tolerance and tests built on these samples are stable across platforms.
"""

from __future__ import annotations

import numpy as np

from .errors import ValidationError
from . import xstate

RANK_CLASS_NAMES = (
    "rank1",
    "rank2_first",
    "rank2_second",
    "rank2_third",
    "rank3_first",
    "rank3_second",
    "rank4",
)

ANGLE_MARGIN = 0.15
FRACTION_LO = 0.05
FRACTION_HI = 0.95
HALF_PI = np.pi / 2


def _rng(seed):
    return seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)


def _angles(rng, n, margin=ANGLE_MARGIN):
    lo, hi = margin, HALF_PI - margin
    return (rng.uniform(lo, hi, n) for _ in range(3))


def _phases(rng, n):
    return rng.uniform(0.0, 2 * np.pi, n), rng.uniform(0.0, 2 * np.pi, n)


def _fractions(rng, n):
    return rng.uniform(FRACTION_LO, FRACTION_HI, n)


def sample_class_arrays(name: str, n: int, seed=0) -> dict:
    """Batch of n parameter arrays inside the named rank class.

    Returns a dict with keys theta, phi, psi, x, y, mu, nu.  rank1 mixes
    the two pure fibers (outer-block and inner-block Bell-like states).
    """
    rng = _rng(seed)
    mu, nu = _phases(rng, n)
    if name == "rank1":
        half = n // 2
        th = rng.uniform(ANGLE_MARGIN, HALF_PI - ANGLE_MARGIN, n)
        theta = np.where(np.arange(n) < half, th, HALF_PI)
        phi = np.where(np.arange(n) < half, HALF_PI, th)
        psi = np.where(np.arange(n) < half, HALF_PI, 0.0)
        x = np.where(np.arange(n) < half, xstate.x_bound(theta, phi, psi), 0.0)
        y = np.where(np.arange(n) < half, 0.0, xstate.y_bound(theta, phi, psi))
        return dict(theta=theta, phi=phi, psi=psi, x=x, y=y, mu=mu, nu=nu)
    if name == "rank2_first":
        theta = rng.uniform(ANGLE_MARGIN, HALF_PI - ANGLE_MARGIN, n)
        phi = np.full(n, HALF_PI)
        psi = np.full(n, HALF_PI)
        x = _fractions(rng, n) * np.asarray(xstate.x_bound(theta, phi, psi))
        return dict(theta=theta, phi=phi, psi=psi, x=x, y=np.zeros(n), mu=mu, nu=nu)
    if name == "rank2_second":
        phi = rng.uniform(ANGLE_MARGIN, HALF_PI - ANGLE_MARGIN, n)
        theta = np.full(n, HALF_PI)
        psi = np.zeros(n)
        y = _fractions(rng, n) * np.asarray(xstate.y_bound(theta, phi, psi))
        return dict(theta=theta, phi=phi, psi=psi, x=np.zeros(n), y=y, mu=mu, nu=nu)
    theta, phi, psi = _angles(rng, n)
    cap_x = np.asarray(xstate.x_bound(theta, phi, psi))
    cap_y = np.asarray(xstate.y_bound(theta, phi, psi))
    if name == "rank2_third":
        x, y = cap_x, cap_y
    elif name == "rank3_first":
        x, y = _fractions(rng, n) * cap_x, cap_y
    elif name == "rank3_second":
        x, y = cap_x, _fractions(rng, n) * cap_y
    elif name == "rank4":
        x, y = _fractions(rng, n) * cap_x, _fractions(rng, n) * cap_y
    else:
        raise ValidationError(f"unknown rank class {name!r}, expected one of {RANK_CLASS_NAMES}")
    return dict(theta=theta, phi=phi, psi=psi, x=x, y=y, mu=mu, nu=nu)


def as_density(arrays: dict) -> np.ndarray:
    """(n, 4, 4) density stack for a sampled batch."""
    return xstate.density_from_arrays(
        arrays["theta"], arrays["phi"], arrays["psi"],
        arrays["x"], arrays["y"], arrays["mu"], arrays["nu"],
    )


def row_params(arrays: dict, i: int) -> xstate.XParams:
    """Validated XParams for one row of a sampled batch."""
    return xstate.validate(
        float(arrays["theta"][i]), float(arrays["phi"][i]), float(arrays["psi"][i]),
        float(arrays["x"][i]), float(arrays["y"][i]),
        float(arrays["mu"][i]), float(arrays["nu"][i]),
    )
