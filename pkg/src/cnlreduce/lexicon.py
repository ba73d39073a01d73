"""Closed lexicon for the controlled English fragment.

File format: TSV with columns ``surface, lemma, category, sense``; lines
starting with ``#`` are comments.  Category expressions::

    propername(per|org|loc|tim|obj)
    noun(person|thing)            agreement: can the noun denote a person?
    verb(intrans|mono|di,<3sg>)   e.g. verb(mono,teaches)
    adjective | preposition | modal | weekday
    determiner(indef|univ|neg)
    pronoun(person|thing)
    wh(person|thing|time)         question words
    aux                           "does", "not"

A verb entry also makes its third-person-singular form a known surface.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from functools import cached_property
from importlib import resources
from pathlib import Path

from .drs import ENTITY_CLASSES
from .errors import LexiconError

VALENCIES = {"intrans": 0, "mono": 1, "di": 2}
AGREEMENTS = ("person", "thing")
DETERMINER_KINDS = ("indef", "univ", "neg")
WH_KINDS = ("person", "thing", "time")
PLACEHOLDER_SENSE = 9999

_CAT_RE = re.compile(r"([a-z]+)(?:\(([^)]*)\))?\Z")


@dataclass(frozen=True)
class Category:
    kind: str
    args: tuple = ()

    def __str__(self):
        return f"{self.kind}({','.join(self.args)})" if self.args else self.kind

    @property
    def valency(self):
        return self.args[0] if self.kind == "verb" else None

    @property
    def third_sg(self):
        return self.args[1] if self.kind == "verb" else None


def parse_category(text: str) -> Category:
    m = _CAT_RE.match(text.strip())
    if not m:
        raise LexiconError(f"bad category expression {text!r}")
    kind = m.group(1)
    args = tuple(a.strip() for a in m.group(2).split(",")) if m.group(2) else ()
    allowed = {
        "propername": lambda a: len(a) == 1 and a[0] in ENTITY_CLASSES,
        "noun": lambda a: len(a) == 1 and a[0] in AGREEMENTS,
        "pronoun": lambda a: len(a) == 1 and a[0] in AGREEMENTS,
        "verb": lambda a: len(a) == 2 and a[0] in VALENCIES and bool(a[1]),
        "determiner": lambda a: len(a) == 1 and a[0] in DETERMINER_KINDS,
        "wh": lambda a: len(a) == 1 and a[0] in WH_KINDS,
        "adjective": lambda a: not a,
        "preposition": lambda a: not a,
        "modal": lambda a: not a,
        "weekday": lambda a: not a,
        "aux": lambda a: not a,
    }
    check = allowed.get(kind)
    if check is None or not check(args):
        raise LexiconError(f"bad category expression {text!r}")
    return Category(kind, args)


@dataclass(frozen=True)
class Entry:
    surface: str
    lemma: str
    category: Category
    sense: int = 0

    @property
    def kind(self):
        return self.category.kind


class Lexicon:
    """Immutable lookup structure over lexicon entries."""

    def __init__(self, entries):
        self.entries = tuple(entries)
        seen = set()
        for e in self.entries:
            key = (e.surface, e.category.kind)
            if key in seen:
                raise LexiconError(f"duplicate entry {e.surface!r} / {e.category.kind}")
            seen.add(key)
        self._by_surface = {}
        for e in self.entries:
            self._by_surface.setdefault(e.surface, []).append(e)
            if e.kind == "verb" and e.category.third_sg != e.surface:
                self._by_surface.setdefault(e.category.third_sg, []).append(e)

    @classmethod
    def from_text(cls, text: str) -> "Lexicon":
        entries = []
        for n, line in enumerate(text.splitlines(), 1):
            if not line.strip() or line.lstrip().startswith("#"):
                continue
            cols = line.split("\t")
            if len(cols) != 4:
                raise LexiconError(f"line {n}: expected 4 tab-separated columns")
            surface, lemma, cat, sense = (c.strip() for c in cols)
            try:
                sense = int(sense)
            except ValueError:
                raise LexiconError(f"line {n}: sense must be a non-negative integer") from None
            if sense < 0:
                raise LexiconError(f"line {n}: sense must be a non-negative integer")
            entries.append(Entry(surface, lemma, parse_category(cat), sense))
        return cls(entries)

    @classmethod
    def load(cls, path) -> "Lexicon":
        return cls.from_text(Path(path).read_text(encoding="utf-8"))

    @classmethod
    def default(cls) -> "Lexicon":
        text = resources.files("cnlreduce").joinpath("data/lexicon.tsv").read_text(encoding="utf-8")
        return cls.from_text(text)

    def lookup(self, surface: str) -> list:
        return self._by_surface.get(surface, [])

    def find(self, surface: str, kind: str):
        for e in self.lookup(surface):
            if e.kind == kind:
                return e
        return None

    def __contains__(self, surface):
        return surface in self._by_surface

    @cached_property
    def surfaces(self) -> tuple:
        return tuple(sorted(self._by_surface))

    @cached_property
    def propernames(self) -> frozenset:
        return frozenset(e.surface for e in self.entries if e.kind == "propername")

    @cached_property
    def weekdays(self) -> frozenset:
        return frozenset(e.surface for e in self.entries if e.kind == "weekday")

    def by_lemma(self, lemma: str, kind: str):
        """First entry (in file order) with this lemma and category kind."""
        for e in self.entries:
            if e.lemma == lemma and e.kind == kind:
                return e
        return None

    def agreement_of_noun(self, lemma: str):
        e = self.by_lemma(lemma, "noun")
        return e.category.args[0] if e else None
