"""Seeded synthetic review corpora with planted topics and hygiene cue words.

This is test scaffolding for running the pipeline without private data;
it makes no claim about how real reviews look.
"""

from __future__ import annotations

import csv
import datetime as dt
import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .ingest import Label, LabeledDocument

DEFAULT_TOPICS: tuple[tuple[str, ...], ...] = (
    ("dumpling", "noodle", "wonton", "szechuan", "chow", "mein", "tofu", "dimsum",
     "bao", "hotpot", "congee", "lomein", "eggroll", "peking", "bokchoy"),
    ("wing", "hotsauce", "pitcher", "beer", "pub", "nacho", "buffalo", "ranch",
     "patio", "bartender", "draft", "lager", "trivia", "hockey", "celery"),
    ("burger", "fries", "patty", "cheddar", "bacon", "milkshake", "onion", "pickle",
     "bun", "ketchup", "mustard", "brioche", "slider", "poutine", "gravy"),
    ("coffee", "espresso", "latte", "cappuccino", "barista", "tea", "matcha", "chai",
     "mocha", "scone", "muffin", "americano", "croissant", "brew", "pastry"),
    ("breakfast", "pancake", "waffle", "omelette", "syrup", "hashbrown", "sausage",
     "brunch", "benedict", "toast", "yogurt", "granola", "crepe", "bagel", "maple"),
    ("sushi", "sashimi", "maki", "wasabi", "tempura", "teriyaki", "miso", "udon",
     "ramen", "salmon", "tuna", "edamame", "nigiri", "bento", "izakaya"),
    ("curry", "pad", "thai", "satay", "coconut", "lemongrass", "basil", "tamarind",
     "naan", "masala", "tikka", "biryani", "samosa", "paneer", "chutney"),
    ("pizza", "pasta", "lasagna", "risotto", "marinara", "pepperoni", "mozzarella",
     "calzone", "gnocchi", "tiramisu", "parmesan", "focaccia", "ravioli",
     "bruschetta", "prosciutto"),
)
DEFAULT_CUES: tuple[str, ...] = ("gross", "mess", "sticky", "smell", "dirty")
DEFAULT_FILLER: tuple[str, ...] = (
    "food", "place", "good", "great", "time", "order", "service", "friend",
    "menu", "night", "really", "pretty", "nice", "staff", "price", "visit",
    "table", "lunch", "dinner", "meal",
)


@dataclass(frozen=True)
class SynthConfig:
    n_docs: int = 1200
    action_fraction: float = 0.5
    cue_strength: float = 0.15
    topic_vocabs: tuple[tuple[str, ...], ...] = DEFAULT_TOPICS
    cue_words: tuple[str, ...] = DEFAULT_CUES
    filler_words: tuple[str, ...] = DEFAULT_FILLER
    filler_rate: float = 0.35
    doc_length: tuple[int, int] = (30, 70)
    n_businesses: int = 60
    seed: int = 7

    def __post_init__(self):
        if self.n_docs < 10:
            raise ValueError("n_docs must be >= 10")
        if not 0 < self.action_fraction < 1:
            raise ValueError("action_fraction must be in (0, 1)")
        if not 0 <= self.cue_strength <= 1 or not 0 <= self.filler_rate <= 1:
            raise ValueError("cue_strength and filler_rate must be in [0, 1]")
        lo, hi = self.doc_length
        if not 1 <= lo <= hi:
            raise ValueError("doc_length must be a range 1 <= lo <= hi")
        if self.n_businesses < 2:
            raise ValueError("n_businesses must be >= 2")
        lexicons = [*self.topic_vocabs, self.cue_words, self.filler_words]
        seen: set[str] = set()
        for words in lexicons:
            if seen & set(words):
                raise ValueError(f"lexicons overlap on {sorted(seen & set(words))}")
            seen |= set(words)

    @property
    def n_action(self) -> int:
        return int(math.floor(self.n_docs * self.action_fraction + 0.5))


def _split_businesses(cfg: SynthConfig) -> tuple[list[str], list[str]]:
    n_act = min(max(1, int(math.floor(cfg.n_businesses * cfg.action_fraction + 0.5))),
                cfg.n_businesses - 1)
    ids = [f"b{i:04d}" for i in range(cfg.n_businesses)]
    return ids[:n_act], ids[n_act:]


def generate_corpus(cfg: SynthConfig = SynthConfig()) -> list[LabeledDocument]:
    """Sample labelled documents.

    Each document draws a base topic uniformly. Per token, an Action
    document emits a cue word with probability ``cue_strength``; otherwise
    a filler word with probability ``filler_rate``; otherwise a word of its
    topic.
    """
    rng = np.random.default_rng(cfg.seed)
    labels = [Label.ACTION] * cfg.n_action + [Label.NO_ACTION] * (cfg.n_docs - cfg.n_action)
    labels = [labels[i] for i in rng.permutation(cfg.n_docs)]
    action_biz, clean_biz = _split_businesses(cfg)

    docs = []
    lo, hi = cfg.doc_length
    for i, label in enumerate(labels):
        topic = cfg.topic_vocabs[rng.integers(len(cfg.topic_vocabs))]
        length = int(rng.integers(lo, hi + 1))
        cue_rate = cfg.cue_strength if label is Label.ACTION else 0.0
        draws = rng.random((length, 2))
        picks = rng.random(length)
        words = []
        for (a, b), u in zip(draws, picks):
            if a < cue_rate:
                lexicon = cfg.cue_words
            elif b < cfg.filler_rate:
                lexicon = cfg.filler_words
            else:
                lexicon = topic
            words.append(lexicon[int(u * len(lexicon))])
        text = " ".join(words).capitalize() + "."
        pool = action_biz if label is Label.ACTION else clean_biz
        business = pool[int(rng.integers(len(pool)))]
        docs.append(LabeledDocument(f"r{i:05d}", text, label, business))
    return docs


def write_dataset(docs: list[LabeledDocument], out_dir, seed: int = 7) -> dict[str, Path]:
    """Write reviews/inspections/links files that relabel to ``docs`` exactly.

    Reviews are dated within 300 days from 2015-01-01; every business gets
    one inspection a little after the last possible review date, so any
    window of at least 330 days recovers the labels.
    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    rng = np.random.default_rng(seed)
    start = dt.date(2015, 1, 1)
    inspect_base = dt.date(2015, 11, 15)

    paths = {
        "reviews": out / "reviews.jsonl",
        "inspections": out / "inspections.csv",
        "links": out / "links.csv",
    }
    with paths["reviews"].open("w", encoding="utf-8", newline="\n") as fh:
        for doc in docs:
            record = {
                "review_id": doc.doc_id,
                "business_id": doc.business_id,
                "date": (start + dt.timedelta(days=int(rng.integers(0, 300)))).isoformat(),
                "text": doc.text,
                "stars": int(rng.integers(1, 6)),
            }
            fh.write(json.dumps(record) + "\n")

    action_of: dict[str, bool] = {}
    for doc in docs:
        action_of[doc.business_id] = doc.label is Label.ACTION
    businesses = sorted(action_of)
    with paths["links"].open("w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["business_id", "facility_id"])
        for biz in businesses:
            writer.writerow([biz, "f" + biz[1:]])
    with paths["inspections"].open("w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["facility_id", "date", "action"])
        for biz in businesses:
            date = inspect_base + dt.timedelta(days=int(rng.integers(0, 15)))
            writer.writerow(["f" + biz[1:], date.isoformat(), "Y" if action_of[biz] else "N"])
    return paths
