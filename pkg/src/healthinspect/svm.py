"""Linear soft-margin SVM trained by dual coordinate descent.

Solves ``min 1/2 |w|^2 + c * sum(hinge(y_i (w.x_i + b)))`` with the bias
folded into ``w`` through a constant-1 feature, so the bias is regularised
together with the weights.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import kernels

log = logging.getLogger(__name__)

FORMAT_VERSION = 1


@dataclass(frozen=True)
class SvmConfig:
    c: float = 1.0
    tol: float = 1e-4
    max_epochs: int = 1000
    seed: int = 0

    def __post_init__(self):
        if self.c <= 0 or self.tol <= 0:
            raise ValueError("c and tol must be > 0")
        if self.max_epochs < 1:
            raise ValueError("max_epochs must be >= 1")


@dataclass(frozen=True)
class FitInfo:
    alpha: np.ndarray
    dual_objective: list[float]  # after each epoch
    violations: list[float]  # max |projected gradient| seen in each epoch
    epochs: int
    converged: bool


@dataclass(frozen=True)
class SvmModel:
    w: np.ndarray
    b: float
    info: FitInfo | None = field(default=None, compare=False, repr=False)

    def decision_function(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=np.float64)
        if x.shape[-1] != len(self.w):
            raise ValueError(f"expected {len(self.w)} features, got {x.shape[-1]}")
        return x @ self.w + self.b


@dataclass(frozen=True)
class FeatureSpec:
    use_keywords: bool = True
    keyword_n: int | None = 200  # None: the whole vocabulary
    use_topics: bool = True

    def __post_init__(self):
        if not (self.use_keywords or self.use_topics):
            raise ValueError("a feature spec needs keywords, topics, or both")


def assemble_features(rows, thetas, spec: FeatureSpec) -> np.ndarray:
    """Concatenate the keyword block and the topic block per ``spec``.

    ``rows`` is a (sparse or dense) tf matrix already projected onto the
    selected vocabulary, or a single row; ``thetas`` the matching topic
    proportions, or None when topics are not used.
    """
    if spec.use_topics and thetas is None:
        raise ValueError("feature spec uses topics but no theta was given")
    if not spec.use_topics and thetas is not None:
        raise ValueError("theta given for a keywords-only feature spec")
    blocks = []
    n = None
    if spec.use_keywords:
        kw = rows.toarray() if hasattr(rows, "toarray") else np.asarray(rows, dtype=np.float64)
        single = kw.ndim == 1
        kw = np.atleast_2d(kw)
        blocks.append(kw)
        n = kw.shape[0]
    if spec.use_topics:
        th = np.asarray(thetas, dtype=np.float64)
        single = th.ndim == 1
        th = np.atleast_2d(th)
        if n is not None and th.shape[0] != n:
            raise ValueError("keyword rows and thetas differ in count")
        blocks.append(th)
    out = np.hstack(blocks)
    return out[0] if single else out


def _augment(x: np.ndarray) -> np.ndarray:
    return np.ascontiguousarray(np.hstack([x, np.ones((x.shape[0], 1))]))


def dual_objective(alpha: np.ndarray, w_aug: np.ndarray) -> float:
    return float(alpha.sum() - 0.5 * (w_aug @ w_aug))


def train_svm(xs, ys: Sequence[int], cfg: SvmConfig = SvmConfig(), *,
              backend: str | None = None) -> SvmModel:
    """Fit on labels in {+1, -1}; stops when max |projected gradient| < tol."""
    x = np.asarray(xs, dtype=np.float64)
    y = np.asarray(ys, dtype=np.float64)
    if x.ndim != 2 or len(x) != len(y):
        raise ValueError("xs must be 2-D with one row per label")
    if not np.all(np.isin(y, (-1.0, 1.0))):
        raise ValueError("labels must be +1 or -1")
    if len(np.unique(y)) < 2:
        raise ValueError("both labels must be present")

    kern = kernels.get_backend(backend)
    xa = _augment(x)
    qii = np.einsum("ij,ij->i", xa, xa)
    alpha = np.zeros(len(y))
    w = np.zeros(xa.shape[1])
    rng = np.random.default_rng(cfg.seed)
    objective, violations = [], []
    converged = False
    epoch = 0
    while epoch < cfg.max_epochs:
        order = rng.permutation(len(y)).astype(np.int64)
        worst = kern.svm_dual_epoch(xa, y, alpha, w, qii, order, cfg.c)
        epoch += 1
        objective.append(dual_objective(alpha, w))
        violations.append(float(worst))
        if worst < cfg.tol:
            converged = True
            break
    if not converged:
        log.info("SVM stopped after %d epochs (violation %.3g)", epoch, violations[-1])
    info = FitInfo(alpha, objective, violations, epoch, converged)
    return SvmModel(w[:-1].copy(), float(w[-1]), info)


def predict_svm(model: SvmModel, x) -> tuple[int, float]:
    """Return (label, decision value); a zero decision value maps to +1."""
    value = float(model.decision_function(np.asarray(x, dtype=np.float64).reshape(-1)))
    return (1 if value >= 0 else -1), value


def predict_svm_batch(model: SvmModel, xs) -> np.ndarray:
    values = model.decision_function(np.atleast_2d(xs))
    return np.where(values >= 0, 1, -1)


def dump_model(model: SvmModel) -> str:
    lines = [f"format=svm/{FORMAT_VERSION}", f"dim={len(model.w)}", f"b={model.b!r}"]
    lines += [f"w.{j}={float(v)!r}" for j, v in enumerate(model.w) if v != 0.0]
    return "\n".join(lines) + "\n"


def load_model(text: str) -> SvmModel:
    fields = dict(
        line.split("=", 1) for line in text.splitlines() if line.strip()
    )
    if fields.get("format") != f"svm/{FORMAT_VERSION}":
        raise ValueError(f"unsupported model format {fields.get('format')!r}")
    w = np.zeros(int(fields["dim"]))
    for key, value in fields.items():
        if key.startswith("w."):
            w[int(key[2:])] = float(value)
    return SvmModel(w, float(fields["b"]))
