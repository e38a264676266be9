"""Review text normalisation: tokenising, stopword removal and stemming.

The stemmer follows the rules of Porter's original 1980 algorithm, without
the later departures found in some reference implementations.
"""

from __future__ import annotations

import re
from functools import lru_cache
from importlib import resources
from pathlib import Path

_SPLIT = re.compile(r"[^a-z0-9]+")
_VALID = re.compile(r"[a-z0-9]*[a-z][a-z0-9]*")


def tokenize(text: str) -> list[str]:
    """Lowercase, drop non-ASCII characters and split on anything else.

    Tokens shorter than two characters and all-digit tokens are removed.
    """
    folded = text.lower().encode("ascii", "ignore").decode("ascii")
    return [
        tok for tok in _SPLIT.split(folded)
        if len(tok) >= 2 and not tok.isdigit()
    ]


def load_stopwords(path=None) -> frozenset[str]:
    """Read a stopword file (one word per line, ``#`` comments allowed).

    With no path, the bundled English list is returned.
    """
    if path is None:
        text = resources.files("healthinspect").joinpath("data/stopwords_en.txt").read_text("utf-8")
    else:
        text = Path(path).read_text(encoding="utf-8")
    words = set()
    for line in text.splitlines():
        line = line.split("#", 1)[0].strip().lower()
        if line:
            words.add(line)
    return frozenset(words)


# -- Porter stemmer ----------------------------------------------------------

_VOWELS = frozenset("aeiou")


def _is_consonant(word: str, i: int) -> bool:
    ch = word[i]
    if ch in _VOWELS:
        return False
    if ch == "y":
        return i == 0 or not _is_consonant(word, i - 1)
    return True


def _measure(stem: str) -> int:
    """Number of vowel-consonant sequences, the m in [C](VC)^m[V]."""
    m = 0
    prev_vowel = False
    for i in range(len(stem)):
        vowel = not _is_consonant(stem, i)
        if prev_vowel and not vowel:
            m += 1
        prev_vowel = vowel
    return m


def _has_vowel(stem: str) -> bool:
    return any(not _is_consonant(stem, i) for i in range(len(stem)))


def _ends_double_consonant(word: str) -> bool:
    return (
        len(word) >= 2
        and word[-1] == word[-2]
        and _is_consonant(word, len(word) - 1)
    )


def _ends_cvc(word: str) -> bool:
    n = len(word)
    return (
        n >= 3
        and _is_consonant(word, n - 3)
        and not _is_consonant(word, n - 2)
        and _is_consonant(word, n - 1)
        and word[-1] not in "wxy"
    )


def _m_gt(n):
    return lambda stem: _measure(stem) > n


_STEP2 = [
    ("ational", "ate"), ("tional", "tion"), ("enci", "ence"), ("anci", "ance"),
    ("izer", "ize"), ("abli", "able"), ("alli", "al"), ("entli", "ent"),
    ("eli", "e"), ("ousli", "ous"), ("ization", "ize"), ("ation", "ate"),
    ("ator", "ate"), ("alism", "al"), ("iveness", "ive"), ("fulness", "ful"),
    ("ousness", "ous"), ("aliti", "al"), ("iviti", "ive"), ("biliti", "ble"),
]
_STEP3 = [
    ("icate", "ic"), ("ative", ""), ("alize", "al"), ("iciti", "ic"),
    ("ical", "ic"), ("ful", ""), ("ness", ""),
]
_STEP4 = [
    "al", "ance", "ence", "er", "ic", "able", "ible", "ant", "ement", "ment",
    "ent", "ion", "ou", "ism", "ate", "iti", "ous", "ive", "ize",
]


def _longest_rule(word: str, rules):
    """Return the rule with the longest suffix matching ``word`` (or None)."""
    best = None
    for rule in rules:
        suffix = rule[0] if isinstance(rule, tuple) else rule
        if word.endswith(suffix) and (best is None or len(suffix) > len(best[0])):
            best = (suffix, rule[1] if isinstance(rule, tuple) else "")
    return best


def _step1a(word: str) -> str:
    if word.endswith("sses"):
        return word[:-2]
    if word.endswith("ies"):
        return word[:-2]
    if word.endswith("ss"):
        return word
    if word.endswith("s"):
        return word[:-1]
    return word


def _step1b(word: str) -> str:
    if word.endswith("eed"):
        return word[:-1] if _measure(word[:-3]) > 0 else word
    for suffix in ("ed", "ing"):
        if word.endswith(suffix):
            stem = word[: -len(suffix)]
            if not _has_vowel(stem):
                return word
            if stem.endswith(("at", "bl", "iz")):
                return stem + "e"
            if _ends_double_consonant(stem) and stem[-1] not in "lsz":
                return stem[:-1]
            if _measure(stem) == 1 and _ends_cvc(stem):
                return stem + "e"
            return stem
    return word


def _step1c(word: str) -> str:
    if word.endswith("y") and _has_vowel(word[:-1]):
        return word[:-1] + "i"
    return word


def _apply_suffix_rules(word: str, rules) -> str:
    found = _longest_rule(word, rules)
    if found is None:
        return word
    suffix, replacement = found
    stem = word[: -len(suffix)]
    if _measure(stem) > 0:
        return stem + replacement
    return word


def _step4(word: str) -> str:
    found = _longest_rule(word, _STEP4)
    if found is None:
        return word
    suffix = found[0]
    stem = word[: -len(suffix)]
    if _measure(stem) <= 1:
        return word
    if suffix == "ion" and not stem.endswith(("s", "t")):
        return word
    return stem


def _step5(word: str) -> str:
    if word.endswith("e"):
        stem = word[:-1]
        m = _measure(stem)
        if m > 1 or (m == 1 and not _ends_cvc(stem)):
            word = stem
    if _measure(word) > 1 and _ends_double_consonant(word) and word.endswith("l"):
        word = word[:-1]
    return word


@lru_cache(maxsize=65536)
def stem(token: str) -> str:
    """Porter-stem a lowercase alphanumeric token."""
    word = _step1a(token)
    word = _step1b(word)
    word = _step1c(word)
    word = _apply_suffix_rules(word, _STEP2)
    word = _apply_suffix_rules(word, _STEP3)
    word = _step4(word)
    return _step5(word)


def preprocess(text: str, stopwords) -> list[str]:
    """Tokenize, drop stopwords, then stem the survivors (order kept).

    A stem that collapses to fewer than two characters, to digits only, or
    onto a stopword (e.g. ``hers`` -> ``her``) is dropped as well.
    """
    out = []
    for tok in tokenize(text):
        if tok in stopwords:
            continue
        s = stem(tok)
        if len(s) >= 2 and s not in stopwords and _VALID.fullmatch(s):
            out.append(s)
    return out
