"""Planar convex-hull distances for complex point sets."""
from __future__ import annotations

import numpy as np
from scipy.spatial import ConvexHull, QhullError


def _segment_distance(z, a, b):
    ab = b - a
    denom = abs(ab) ** 2
    if denom == 0:
        return np.abs(z - a)
    t = np.clip(((z - a) * np.conj(ab)).real / denom, 0.0, 1.0)
    return np.abs(z - (a + t * ab))


def hull_distance(points, hull_points) -> np.ndarray:
    """Euclidean distance from each of ``points`` to ``co(hull_points)`` (0 inside)."""
    z = np.atleast_1d(np.asarray(points, dtype=complex))
    h = np.unique(np.atleast_1d(np.asarray(hull_points, dtype=complex)))
    if z.size == 0:
        return np.zeros(0)
    if h.size == 1:
        return np.abs(z - h[0])
    xy = np.column_stack([h.real, h.imag])
    try:
        hull = ConvexHull(xy)
    except QhullError:
        hull = None
    if hull is None:
        # collinear: project on the principal direction
        c = h.mean()
        u = h - c
        direction = u[np.argmax(np.abs(u))]
        direction /= abs(direction)
        t = (u * np.conj(direction)).real
        a = c + t.min() * direction
        b = c + t.max() * direction
        return _segment_distance(z, a, b)
    eq = hull.equations  # rows (nx, ny, offset); inside iff n.x + off <= 0
    pts = np.column_stack([z.real, z.imag])
    signed = pts @ eq[:, :2].T + eq[:, 2]
    inside = np.all(signed <= 0, axis=1)
    verts = h[hull.vertices]
    dist = np.full(z.size, np.inf)
    for a, b in zip(verts, np.roll(verts, -1)):
        dist = np.minimum(dist, _segment_distance(z, a, b))
    dist[inside] = 0.0
    return dist
