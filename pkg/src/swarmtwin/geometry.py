"""Planar vector helpers.

Vectors are numpy arrays whose last axis has length 2, so every function
here works on a single point ``(2,)`` as well as on a whole swarm ``(I, 2)``.
"""

from __future__ import annotations

import numpy as np

# relative slack for magnitude comparisons
EPS = 1e-9


def as_vec(p) -> np.ndarray:
    return np.asarray(p, dtype=np.float64)


def norm(v) -> np.ndarray | float:
    v = as_vec(v)
    return np.hypot(v[..., 0], v[..., 1])


def distance(a, b) -> np.ndarray | float:
    """Euclidean distance between points, broadcasting over leading axes."""
    a, b = as_vec(a), as_vec(b)
    return np.hypot(a[..., 0] - b[..., 0], a[..., 1] - b[..., 1])


def clamp_speed(v, v_max: float) -> np.ndarray:
    """Rescale velocities faster than ``v_max`` onto the speed limit.

    Direction is preserved and slower vectors are returned untouched. The
    comparison carries a relative slack of ``EPS`` so that a vector which
    was already rescaled (and may sit an ulp above ``v_max``) is left alone,
    which makes the operation idempotent.
    """
    if not v_max > 0:
        raise ValueError(f"v_max must be > 0, got {v_max!r}")
    v = as_vec(v)
    speed = norm(v)
    too_fast = speed > v_max * (1.0 + EPS)
    if not np.any(too_fast):
        return v.copy()
    scale = np.where(too_fast, v_max / np.where(too_fast, speed, 1.0), 1.0)
    return v * scale[..., None] if v.ndim > 1 else v * float(scale)
