"""Stratified folds, confusion-matrix metrics and mean/SD summaries."""

from __future__ import annotations

import math
from dataclasses import dataclass
from decimal import ROUND_HALF_UP, Decimal
from typing import Sequence

import numpy as np

METRIC_NAMES = ("accuracy", "kappa", "sensitivity", "specificity")


@dataclass(frozen=True)
class ConfusionMatrix:
    tp: int
    fn: int
    fp: int
    tn: int

    def __post_init__(self):
        if min(self.tp, self.fn, self.fp, self.tn) < 0:
            raise ValueError("confusion counts must be nonnegative")

    @property
    def total(self) -> int:
        return self.tp + self.fn + self.fp + self.tn

    @classmethod
    def from_predictions(cls, truth: Sequence, predicted: Sequence, positive) -> "ConfusionMatrix":
        if len(truth) != len(predicted):
            raise ValueError("truth and predictions differ in length")
        tp = fn = fp = tn = 0
        for t, p in zip(truth, predicted):
            if t == positive:
                if p == positive:
                    tp += 1
                else:
                    fn += 1
            elif p == positive:
                fp += 1
            else:
                tn += 1
        return cls(tp, fn, fp, tn)


@dataclass(frozen=True)
class Metrics:
    """Rates from one confusion matrix; None marks an undefined rate."""

    accuracy: float
    kappa: float
    sensitivity: float | None
    specificity: float | None

    def as_dict(self) -> dict[str, float | None]:
        return {name: getattr(self, name) for name in METRIC_NAMES}


def metrics(cm: ConfusionMatrix) -> Metrics:
    n = cm.total
    if n < 1:
        raise ValueError("confusion matrix is empty")
    p0 = (cm.tp + cm.tn) / n
    pe = ((cm.tp + cm.fn) * (cm.tp + cm.fp) + (cm.fp + cm.tn) * (cm.fn + cm.tn)) / (n * n)
    if pe == 1.0:
        kappa = 1.0 if p0 == 1.0 else 0.0
    else:
        kappa = (p0 - pe) / (1.0 - pe)
    pos = cm.tp + cm.fn
    neg = cm.tn + cm.fp
    return Metrics(
        accuracy=p0,
        kappa=kappa,
        sensitivity=cm.tp / pos if pos else None,
        specificity=cm.tn / neg if neg else None,
    )


def stratified_kfold(labels: Sequence, k: int, seed: int = 0) -> list[np.ndarray]:
    """Split indices into ``k`` folds with per-class counts within one of each other.

    Each class is shuffled and dealt round-robin; the dealing position
    carries over between classes so fold sizes also stay balanced.
    """
    if k < 2:
        raise ValueError("k must be >= 2")
    rng = np.random.default_rng(seed)
    folds: list[list[int]] = [[] for _ in range(k)]
    start = 0
    for cls in sorted(set(labels), key=str):
        members = np.array([i for i, lab in enumerate(labels) if lab == cls])
        if len(members) < k:
            raise ValueError(f"class {cls} has {len(members)} members, fewer than k={k}")
        for j, idx in enumerate(rng.permutation(members)):
            folds[(start + j) % k].append(int(idx))
        start = (start + len(members)) % k
    return [np.array(sorted(f), dtype=np.int64) for f in folds]


@dataclass(frozen=True)
class MetricsSummary:
    """Per-metric mean and sample SD across folds."""

    folds: tuple[Metrics, ...]
    mean: dict[str, float | None]
    sd: dict[str, float | None]

    @property
    def n_folds(self) -> int:
        return len(self.folds)


def summarize(per_fold: Sequence[Metrics]) -> MetricsSummary:
    mean, sd = {}, {}
    for name in METRIC_NAMES:
        values = [getattr(m, name) for m in per_fold if getattr(m, name) is not None]
        mean[name] = math.fsum(values) / len(values) if values else None
        if len(values) >= 2:
            mu = mean[name]
            var = math.fsum((v - mu) ** 2 for v in values) / (len(values) - 1)
            sd[name] = math.sqrt(var)
        else:
            sd[name] = None
    return MetricsSummary(tuple(per_fold), mean, sd)


def format_percent(value: float | None) -> str:
    """Render a rate as a percentage with two decimals, rounding half up.

    The integer part is padded to two digits, as in ``05.30%``.
    """
    if value is None:
        return "undefined"
    pct = (Decimal(repr(float(value))) * 100).quantize(Decimal("0.01"), rounding=ROUND_HALF_UP)
    text = f"{pct:.2f}"
    sign = "-" if text.startswith("-") else ""
    return f"{sign}{text.lstrip('-').zfill(5)}%"


def format_cell(mean: float | None, sd: float | None) -> str:
    return f"{format_percent(mean)} ({format_percent(sd)})"
