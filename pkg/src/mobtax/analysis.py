"""Corpus-level summaries: Gini concentration, 6-D PCA, group ellipses.

The Gini coefficient condenses a window's degree vector into one inequality
number.  PCA over taxonomy records places networks in the plane spanned by
the two highest-variance combinations of the six statistics; per-group
Gaussian ellipses then sketch where each collection of networks lives in
that plane.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


def gini(values) -> float:
    """Gini coefficient of a non-negative vector, in ``[0, (n-1)/n]``.

    Equals the mean absolute difference between all pairs divided by twice
    the mean, computed via the sort-based identity
    ``G = sum_k (2k - n - 1) x_(k) / (n * sum(x))``.
    """
    x = np.asarray(values, dtype=np.float64)
    if x.ndim != 1 or x.size == 0:
        raise ValueError("gini needs a non-empty 1-d vector")
    if not np.isfinite(x).all() or (x < 0).any():
        raise ValueError("gini needs finite non-negative values")
    total = float(x.sum())
    if total <= 0.0:
        raise ValueError("gini undefined when the mean is zero")
    xs = np.sort(x)
    if xs[0] == xs[-1]:
        return 0.0  # perfect equality, kept exact
    n = len(xs)
    k = np.arange(1, n + 1, dtype=np.float64)
    g = float(np.dot(2.0 * k - n - 1.0, xs) / (n * total))
    return max(0.0, g)


def jacobi_eigh(matrix, tol: float = 1e-13, max_sweeps: int = 100) -> tuple[np.ndarray, np.ndarray]:
    """Eigendecomposition of a small symmetric matrix by cyclic Jacobi rotations.

    Returns ``(eigenvalues, eigenvectors)`` with eigenvalues in descending
    order and eigenvectors as columns.  Intended for the tiny (2x2, 6x6)
    matrices this package produces; rotations sweep until the off-diagonal
    Frobenius mass falls below ``tol`` relative to the matrix scale.
    """
    a = np.array(matrix, dtype=np.float64)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError("matrix must be square")
    n = a.shape[0]
    if not np.allclose(a, a.T, atol=1e-10, rtol=1e-8):
        raise ValueError("matrix must be symmetric")
    a = (a + a.T) / 2.0
    v = np.eye(n)
    scale = max(1.0, float(np.abs(a).max()))
    off_mask = ~np.eye(n, dtype=bool)
    for _ in range(max_sweeps):
        off = math.sqrt(float((a[off_mask] ** 2).sum()))
        if off <= tol * scale:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if abs(apq) <= 1e-300:
                    continue
                theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                # hypot keeps huge theta from overflowing theta**2
                t = math.copysign(1.0, theta) / (abs(theta) + math.hypot(theta, 1.0))
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                col_p = a[:, p].copy()
                col_q = a[:, q].copy()
                a[:, p] = c * col_p - s * col_q
                a[:, q] = s * col_p + c * col_q
                row_p = a[p, :].copy()
                row_q = a[q, :].copy()
                a[p, :] = c * row_p - s * row_q
                a[q, :] = s * row_p + c * row_q
                col_p = v[:, p].copy()
                col_q = v[:, q].copy()
                v[:, p] = c * col_p - s * col_q
                v[:, q] = s * col_p + c * col_q
    diag = np.diag(a).copy()
    order = np.argsort(-diag, kind="stable")
    return diag[order], v[:, order]


N_STATISTICS = 6


@dataclass(frozen=True)
class PcaModel:
    """Mean and orthonormal components of a taxonomy-record sample.

    ``components[i]`` is the i-th principal axis (rows orthonormal, ordered
    by descending eigenvalue, largest-magnitude entry non-negative).
    ``n_excluded`` counts input rows dropped for degenerate entries.
    """

    mean: np.ndarray
    components: np.ndarray
    eigenvalues: np.ndarray
    n_used: int
    n_excluded: int


def pca_fit(rows) -> PcaModel:
    """Fit a PCA model to rows of 6 statistic values.

    Rows containing non-finite entries (degenerate statistics) are excluded
    and counted; at least 2 usable rows are required.  The covariance is the
    sample covariance (``n-1`` denominator) of the mean-centred data.
    """
    m = np.asarray(rows, dtype=np.float64)
    if m.ndim != 2 or m.shape[1] != N_STATISTICS:
        raise ValueError(f"expected rows of {N_STATISTICS} values")
    usable = np.isfinite(m).all(axis=1)
    used = m[usable]
    if len(used) < 2:
        raise ValueError(f"need at least 2 usable rows, have {len(used)}")
    mean = used.mean(axis=0)
    centred = used - mean
    cov = centred.T @ centred / (len(used) - 1)
    vals, vecs = jacobi_eigh(cov)
    if vals.min() < -1e-10:
        raise ValueError("covariance produced a significantly negative eigenvalue")
    vals = np.maximum(vals, 0.0)
    for j in range(N_STATISTICS):
        i = int(np.argmax(np.abs(vecs[:, j])))
        if vecs[i, j] < 0:
            vecs[:, j] = -vecs[:, j]
    return PcaModel(
        mean=mean,
        components=vecs.T.copy(),
        eigenvalues=vals,
        n_used=len(used),
        n_excluded=int(len(m) - len(used)),
    )


def pca_project(model: PcaModel, record) -> np.ndarray | None:
    """Project one 6-entry record onto the first two components.

    Returns ``None`` when the record carries degenerate (non-finite) entries,
    so callers can flag and skip it.
    """
    row = np.asarray(record, dtype=np.float64)
    if row.shape != (N_STATISTICS,):
        raise ValueError(f"record must have {N_STATISTICS} entries")
    if not np.isfinite(row).all():
        return None
    d = row - model.mean
    return np.array([float(d @ model.components[0]), float(d @ model.components[1])])


def pca_project_rows(model: PcaModel, rows) -> tuple[np.ndarray, np.ndarray]:
    """Batch projection: (n,2) array (NaN rows for skipped records) plus a usable-mask."""
    m = np.asarray(rows, dtype=np.float64)
    if m.ndim != 2 or m.shape[1] != N_STATISTICS:
        raise ValueError(f"expected rows of {N_STATISTICS} values")
    mask = np.isfinite(m).all(axis=1)
    out = np.full((len(m), 2), np.nan)
    d = m[mask] - model.mean
    out[mask] = d @ model.components[:2].T
    return out, mask


@dataclass(frozen=True)
class GroupEllipse:
    """An n-sigma Gaussian contour summarising one group's projected points.

    ``semi_axes`` holds the major and minor semi-axis lengths; ``angle`` is
    the major axis direction in radians, normalised to (-pi/2, pi/2].  The
    ellipse is flagged ``degenerate`` when the minor axis collapses
    (collinear or identical points).
    """

    label: str
    mean: np.ndarray
    covariance: np.ndarray
    semi_axes: np.ndarray
    angle: float
    n_sigma: float
    n_points: int
    degenerate: bool


def fit_group_ellipse(points, n_sigma: float = 2.0, label: str = "") -> GroupEllipse:
    """Single-component Gaussian fit of 2-D points with an n-sigma contour."""
    pts = np.asarray(points, dtype=np.float64)
    if pts.ndim != 2 or pts.shape[1] != 2:
        raise ValueError("points must be an (n, 2) array")
    if len(pts) < 3:
        raise ValueError("ellipse fit needs at least 3 points")
    if not np.isfinite(pts).all():
        raise ValueError("points must be finite")
    if n_sigma <= 0:
        raise ValueError("n_sigma must be positive")
    mean = pts.mean(axis=0)
    centred = pts - mean
    cov = centred.T @ centred / (len(pts) - 1)
    vals, vecs = jacobi_eigh(cov)
    vals = np.maximum(vals, 0.0)
    semi = n_sigma * np.sqrt(vals)
    major = vecs[:, 0]
    angle = math.atan2(float(major[1]), float(major[0]))
    if angle <= -math.pi / 2:
        angle += math.pi
    elif angle > math.pi / 2:
        angle -= math.pi
    degenerate = bool(semi[1] <= 1e-12 * max(1.0, float(semi[0])))
    return GroupEllipse(
        label=label,
        mean=mean,
        covariance=cov,
        semi_axes=semi,
        angle=angle,
        n_sigma=n_sigma,
        n_points=len(pts),
        degenerate=degenerate,
    )
