"""Pipeline configuration files.

Grammar: one ``key = value`` per line; keys are dotted names from
:data:`KNOWN_KEYS`; ``#`` starts a comment; blank lines are ignored.
Values are parsed by the type of the key. ``methods`` takes a
comma-separated list of method keys, or ``all``. Relative paths are
resolved against the config file's directory. Unknown or repeated keys
are errors.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field
from pathlib import Path

from .ingest import Label
from .lda import LdaConfig
from .pipeline import METHODS, PipelineSettings
from .smote import SmoteConfig
from .svm import SvmConfig
from .synthdata import SynthConfig


class ConfigError(ValueError):
    pass


def _positive_label(text: str) -> Label:
    for label in Label:
        if text.strip().lower() == label.value.lower():
            return label
    raise ValueError(f"expected Action or NoAction, got {text!r}")


def _methods(text: str) -> tuple[str, ...]:
    items = tuple(part.strip() for part in text.split(",") if part.strip())
    if items == ("all",):
        return tuple(METHODS)
    unknown = [m for m in items if m not in METHODS]
    if unknown:
        raise ValueError(f"unknown method(s) {', '.join(unknown)}; choose from {', '.join(METHODS)}")
    if len(set(items)) != len(items):
        raise ValueError("methods are repeated")
    return items


# key -> (parser, default)
KNOWN_KEYS = {
    "paths.reviews": (str, None),
    "paths.inspections": (str, None),
    "paths.links": (str, None),
    "paths.stopwords": (str, None),
    "paths.output": (str, "out"),
    "window_days": (int, 365),
    "methods": (_methods, tuple(METHODS)),
    "seed": (int, 0),
    "dtm.n_top_nb": (int, 300),
    "dtm.n_top_svm": (int, 200),
    "nb.smoothing": (float, 1.0),
    "lda.k": (int, 20),
    "lda.alpha": (float, 3.5),
    "lda.beta": (float, 0.1),
    "lda.sweeps": (int, 1000),
    "lda.infer_sweeps": (int, 100),
    "smote.k_neighbors": (int, 5),
    "smote.target": (int, 900),
    "svm.c": (float, 1.0),
    "svm.tol": (float, 1e-4),
    "svm.max_epochs": (int, 1000),
    "cv.k": (int, 10),
    "cv.positive": (_positive_label, Label.ACTION),
    "report.top_words": (int, 5),
    "synth.n_docs": (int, 1200),
    "synth.action_fraction": (float, 0.5),
    "synth.cue_strength": (float, 0.15),
    "synth.filler_rate": (float, 0.35),
    "synth.doc_min": (int, 30),
    "synth.doc_max": (int, 70),
    "synth.n_businesses": (int, 60),
    "synth.seed": (int, 7),
}
PATH_KEYS = {k for k in KNOWN_KEYS if k.startswith("paths.")}


@dataclass(frozen=True)
class PipelineConfig:
    values: dict = field(default_factory=dict)
    source: Path | None = None

    def __getitem__(self, key):
        return self.values[key]

    def path(self, key: str) -> Path | None:
        value = self.values[key]
        if value is None:
            return None
        p = Path(value)
        if not p.is_absolute() and self.source is not None:
            p = self.source.parent / p
        return p

    def require_path(self, key: str) -> Path:
        p = self.path(key)
        if p is None:
            raise ConfigError(f"missing required key {key}")
        return p

    def with_seed(self, seed: int) -> "PipelineConfig":
        return dataclasses.replace(self, values={**self.values, "seed": seed})

    def settings(self) -> PipelineSettings:
        v = self.values
        try:
            return PipelineSettings(
                n_top_nb=v["dtm.n_top_nb"],
                n_top_svm=v["dtm.n_top_svm"],
                nb_smoothing=v["nb.smoothing"],
                lda=LdaConfig(v["lda.k"], v["lda.alpha"], v["lda.beta"],
                              v["lda.sweeps"], v["lda.infer_sweeps"]),
                smote=SmoteConfig(v["smote.k_neighbors"], v["smote.target"]),
                svm=SvmConfig(v["svm.c"], v["svm.tol"], v["svm.max_epochs"]),
                folds=v["cv.k"],
                seed=v["seed"],
                positive=v["cv.positive"],
            )
        except ValueError as exc:
            raise ConfigError(str(exc)) from None

    def synth_config(self) -> SynthConfig:
        v = self.values
        try:
            return SynthConfig(
                n_docs=v["synth.n_docs"],
                action_fraction=v["synth.action_fraction"],
                cue_strength=v["synth.cue_strength"],
                filler_rate=v["synth.filler_rate"],
                doc_length=(v["synth.doc_min"], v["synth.doc_max"]),
                n_businesses=v["synth.n_businesses"],
                seed=v["synth.seed"],
            )
        except ValueError as exc:
            raise ConfigError(str(exc)) from None


def parse_config(text: str, source: Path | None = None) -> PipelineConfig:
    values = {key: default for key, (_, default) in KNOWN_KEYS.items()}
    seen = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if not sep or not key:
            raise ConfigError(f"line {lineno}: expected 'key = value'")
        if key not in KNOWN_KEYS:
            raise ConfigError(f"line {lineno}: unknown key {key}")
        if key in seen:
            raise ConfigError(f"line {lineno}: duplicate key {key}")
        seen.add(key)
        parser = KNOWN_KEYS[key][0]
        try:
            values[key] = parser(value)
        except ValueError as exc:
            raise ConfigError(f"line {lineno}: bad value for {key}: {exc}") from None
    if values["window_days"] < 0:
        raise ConfigError("window_days must be >= 0")
    if not values["methods"]:
        raise ConfigError("methods is empty")
    return PipelineConfig(values, source)


def load_config(path) -> PipelineConfig:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc.strerror or exc}") from None
    return parse_config(text, path)
