"""Spatial distribution function, spatial median, and region geometry.

The spatial distribution function of a point cloud is the average unit
vector pointing from the argument towards the sample points; its zero is
the spatial median. Everything here is plain plug-in estimation with a
fixed evaluation order, so identical inputs give bit-identical outputs.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch

# Cap on elements per broadcast block in batch SDF evaluation.
_BLOCK_ELEMS = 1 << 22


@dataclass(frozen=True)
class SpatialMedianResult:
    """Location estimate plus convergence diagnostics."""

    location: np.ndarray
    gradient_norm: float
    iterations: int
    converged: bool

    def __post_init__(self):
        loc = np.array(np.asarray(self.location, dtype=float))
        loc.setflags(write=False)
        object.__setattr__(self, "location", loc)


@dataclass(frozen=True)
class RegionSpec:
    """Ball-shaped integration region: radius = multiplier x base_radius."""

    center: np.ndarray
    base_radius: float
    multiplier: float
    median: SpatialMedianResult | None = None

    def __post_init__(self):
        center = np.array(np.asarray(self.center, dtype=float).ravel())
        if center.size < 1:
            raise ValueError("center must be nonempty")
        if self.base_radius < 0:
            raise ValueError("base_radius must be nonnegative")
        if self.multiplier <= 0:
            raise ValueError("multiplier must be positive")
        center.setflags(write=False)
        object.__setattr__(self, "center", center)
        object.__setattr__(self, "base_radius", float(self.base_radius))
        object.__setattr__(self, "multiplier", float(self.multiplier))

    @property
    def dim(self) -> int:
        return self.center.size

    @property
    def effective_radius(self) -> float:
        return self.multiplier * self.base_radius


def _points(obj) -> np.ndarray:
    """Accept a ProjectedSample or a plain (n, d) array."""
    pts = getattr(obj, "points", obj)
    pts = np.asarray(pts, dtype=float)
    if pts.ndim == 1:
        pts = pts.reshape(-1, 1)
    if pts.ndim != 2:
        raise ValueError("expected an (n, d) array of points")
    return pts


def estimate_sdf_batch(sample, targets) -> np.ndarray:
    """Plug-in spatial distribution function at many target points.

    Returns the (n_targets, d) array of mean unit vectors from each target
    to the sample points; sample points exactly coincident with a target
    contribute the zero vector. Evaluation is blocked to bound memory, which
    does not change the per-target result.
    """
    pts = _points(sample)
    tgt = _points(targets)
    m, d = pts.shape
    if tgt.shape[1] != d:
        raise DimensionMismatch(f"sample has d={d} but targets have d={tgt.shape[1]}")
    out = np.empty_like(tgt)
    block = max(1, _BLOCK_ELEMS // max(1, m * d))
    for start in range(0, tgt.shape[0], block):
        chunk = tgt[start : start + block]
        diff = pts[None, :, :] - chunk[:, None, :]
        dist = np.linalg.norm(diff, axis=2)
        with np.errstate(divide="ignore", invalid="ignore"):
            unit = diff / dist[:, :, None]
        unit[dist == 0.0] = 0.0
        out[start : start + block] = unit.sum(axis=1) / m
    return out


def estimate_sdf(sample, t) -> np.ndarray:
    """Spatial distribution function of ``sample`` at a single point ``t``."""
    t = np.asarray(t, dtype=float).ravel()
    return estimate_sdf_batch(sample, t[None, :])[0]


def spatial_median(sample, tol: float = 1e-8, max_iter: int = 1000) -> SpatialMedianResult:
    """Euclidean 1-median by a modified Weiszfeld iteration.

    Starts from the coordinate-wise median. When the iterate coincides with
    data points the step is corrected: the point is declared optimal once the
    pull of the remaining points does not exceed the coincident multiplicity
    (the generalized optimality condition), and otherwise the Weiszfeld step
    is shortened accordingly. Convergence is declared on the norm of the
    objective subgradient — the summed unit vectors net of that multiplicity.

    Coincidence is judged with a small tolerance relative to the coordinate
    scale: when the minimizer is a data point the iterates approach it but
    (in floating point) essentially never land on it exactly, and without
    the snap the iteration stalls a few ulps away where the raw gradient is
    far from zero.

    A failure to converge within ``max_iter`` steps is reported through the
    ``converged`` flag, not an exception.
    """
    pts = _points(sample)
    m, _ = pts.shape
    if tol <= 0:
        raise ValueError("tol must be positive")
    if max_iter < 0:
        raise ValueError("max_iter must be nonnegative")
    if m == 1:
        return SpatialMedianResult(pts[0], 0.0, 0, True)

    scale = float(np.abs(pts).max())
    snap = 1e-13 * scale
    # Generous: the optimality test below is exact, so firing it early never
    # returns a wrong point; near-optimal data points just get found sooner.
    trigger = 0.1 * scale
    t = np.median(pts, axis=0)
    gnorm = float("inf")
    for it in range(max_iter + 1):
        diff = pts - t
        dist = np.linalg.norm(diff, axis=1)
        coincident = dist <= snap
        eta = int(coincident.sum())
        if eta == m:
            return SpatialMedianResult(pts.mean(axis=0), 0.0, it, True)
        if dist.min() <= trigger:
            # Near a data point: test the generalized optimality condition
            # exactly at it. If the pull of the points outside its coincidence
            # cluster does not exceed the cluster size, it is the minimizer.
            anchor = pts[int(np.argmin(dist))]
            cluster = np.linalg.norm(pts - anchor, axis=1) <= snap
            away = pts[~cluster] - anchor
            units = away / np.linalg.norm(away, axis=1)[:, None]
            r_c = float(np.linalg.norm(units.sum(axis=0)))
            if r_c - cluster.sum() <= tol:
                loc = pts[cluster].mean(axis=0)
                return SpatialMedianResult(loc, max(r_c - cluster.sum(), 0.0), it, True)
        inv = np.zeros(m)
        inv[~coincident] = 1.0 / dist[~coincident]
        pull = (diff * inv[:, None]).sum(axis=0)
        r = float(np.linalg.norm(pull))
        gnorm = max(r - eta, 0.0) if eta else r
        if gnorm <= tol:
            loc = pts[coincident].mean(axis=0) if eta else t
            return SpatialMedianResult(loc, gnorm, it, True)
        if it == max_iter:
            break
        target = (pts * inv[:, None]).sum(axis=0) / inv.sum()
        if eta:
            # Shortened step away from a non-optimal data point.
            beta = min(1.0, eta / r)
            t = (1.0 - beta) * target + beta * t
        else:
            t = target
    return SpatialMedianResult(t, gnorm, max_iter, False)


def data_radius(sample, center) -> float:
    """Distance from ``center`` to the farthest sample point."""
    pts = _points(sample)
    center = np.asarray(center, dtype=float).ravel()
    if center.size != pts.shape[1]:
        raise DimensionMismatch(f"center has d={center.size} but sample has d={pts.shape[1]}")
    return float(np.max(np.linalg.norm(pts - center, axis=1)))


def combined_region(proj_x, proj_y, k: float, tol: float = 1e-8) -> RegionSpec:
    """Integration region covering both projected samples.

    The center is the spatial median of the pooled points (union with
    multiplicity) and the base radius the distance to the farthest pooled
    point. Pooled points are sorted lexicographically before estimation so
    the result is exactly symmetric in the two arguments.
    """
    px = _points(proj_x)
    py = _points(proj_y)
    if px.shape[1] != py.shape[1]:
        raise DimensionMismatch(
            f"projected samples have d={px.shape[1]} and d={py.shape[1]}"
        )
    pooled = np.vstack([px, py])
    d = pooled.shape[1]
    order = np.lexsort(tuple(pooled[:, j] for j in range(d - 1, -1, -1)))
    pooled = pooled[order]
    med = spatial_median(pooled, tol=tol)
    radius = data_radius(pooled, med.location)
    return RegionSpec(center=med.location, base_radius=radius, multiplier=k, median=med)
