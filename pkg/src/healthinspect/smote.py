"""SMOTE oversampling: interpolate new points between same-class neighbours."""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np


@dataclass(frozen=True)
class SmoteConfig:
    k_neighbors: int = 5
    target_per_class: int = 900
    seed: int = 0

    def __post_init__(self):
        if self.k_neighbors < 1:
            raise ValueError("k_neighbors must be >= 1")
        if self.target_per_class < 1:
            raise ValueError("target_per_class must be >= 1")


class Resampled(NamedTuple):
    """Oversampled data; the originals come first, in input order.

    ``pairs[j]`` holds the input indices ``(p, q)`` that generated synthetic
    row ``n_original + j`` as ``x[p] + gaps[j] * (x[q] - x[p])``.
    """

    features: np.ndarray
    labels: list
    pairs: np.ndarray
    gaps: np.ndarray


def _neighbours(points: np.ndarray, k: int) -> np.ndarray:
    """Indices of each point's k nearest other points (Euclidean, stable ties)."""
    sq = np.einsum("ij,ij->i", points, points)
    d2 = sq[:, None] + sq[None, :] - 2.0 * points @ points.T
    np.fill_diagonal(d2, np.inf)
    k = min(k, len(points) - 1)
    return np.argsort(d2, axis=1, kind="stable")[:, :k]


def smote_oversample(features, labels: Sequence, cfg: SmoteConfig = SmoteConfig()) -> Resampled:
    """Bring every class below ``cfg.target_per_class`` up to exactly that size.

    Classes already at or above the target are left as they are.
    """
    x = np.asarray(features, dtype=np.float64)
    if x.ndim != 2 or len(x) != len(labels):
        raise ValueError("features must be a 2-D array with one row per label")
    classes = sorted(set(labels), key=str)
    if len(classes) < 2:
        raise ValueError("both classes must be present")

    rng = np.random.default_rng(cfg.seed)
    labels = list(labels)
    new_rows, new_labels, pairs, gaps = [], [], [], []
    for cls in classes:
        members = np.array([i for i, lab in enumerate(labels) if lab == cls])
        need = cfg.target_per_class - len(members)
        if need <= 0:
            continue
        if len(members) < 2:
            raise ValueError(f"class {cls} has a single sample; SMOTE needs a neighbour")
        nbrs = _neighbours(x[members], cfg.k_neighbors)
        base = rng.integers(0, len(members), size=need)
        pick = rng.integers(0, nbrs.shape[1], size=need)
        u = rng.random(need)
        p = members[base]
        q = members[nbrs[base, pick]]
        new_rows.append(x[p] + u[:, None] * (x[q] - x[p]))
        new_labels.extend([cls] * need)
        pairs.append(np.stack([p, q], axis=1))
        gaps.append(u)

    if not new_rows:
        return Resampled(x.copy(), labels, np.zeros((0, 2), dtype=np.int64), np.zeros(0))
    return Resampled(
        np.vstack([x, *new_rows]),
        labels + new_labels,
        np.vstack(pairs).astype(np.int64),
        np.concatenate(gaps),
    )
