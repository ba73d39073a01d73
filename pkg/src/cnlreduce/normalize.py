"""Source text normalization: tokenization, contraction expansion, casing,
plural weekdays and edit-distance-1 spelling repair against the lexicon."""
from __future__ import annotations

import re
from dataclasses import dataclass, field

from .errors import EmptyInput
from .lexicon import Lexicon

CONTRACTIONS = {
    "can't": ("can", "not"),
    "cannot": ("can", "not"),
    "doesn't": ("does", "not"),
}

_TOKEN_RE = re.compile(r"[A-Za-z0-9]+(?:'[A-Za-z]+)?|[^\sA-Za-z0-9]")
_FINAL_PUNCT = {".", "?", "!"}


@dataclass(frozen=True)
class Step:
    original: str
    replacement: str
    reason: str  # spelling | contraction | case | plural_weekday


@dataclass(frozen=True)
class NormalizationTrace:
    steps: tuple = ()

    def reasons(self):
        return [s.reason for s in self.steps]

    @property
    def spelling_repairs(self):
        return sum(1 for s in self.steps if s.reason == "spelling")


def tokenize(text: str) -> list:
    return _TOKEN_RE.findall(text)


def osa_distance(a: str, b: str) -> int:
    """Optimal-string-alignment distance (Levenshtein plus adjacent transposition)."""
    rows = [[0] * (len(b) + 1) for _ in range(len(a) + 1)]
    for i in range(len(a) + 1):
        rows[i][0] = i
    for j in range(len(b) + 1):
        rows[0][j] = j
    for i in range(1, len(a) + 1):
        for j in range(1, len(b) + 1):
            cost = 0 if a[i - 1] == b[j - 1] else 1
            best = min(rows[i - 1][j] + 1, rows[i][j - 1] + 1, rows[i - 1][j - 1] + cost)
            if i > 1 and j > 1 and a[i - 1] == b[j - 2] and a[i - 2] == b[j - 1]:
                best = min(best, rows[i - 2][j - 2] + 1)
            rows[i][j] = best
    return rows[-1][-1]


def spelling_candidates(token: str, lex: Lexicon) -> list:
    if len(token) < 2:
        return []
    return sorted(s for s in lex.surfaces
                  if abs(len(s) - len(token)) <= 1 and osa_distance(token, s) == 1)


def normalize(raw: str, lex: Lexicon):
    """Return ``(tokens, trace)`` for one input line.

    Internal sentence periods survive as ``"."`` tokens; a single trailing
    ``.``, ``?`` or ``!`` is dropped.
    """
    raw_tokens = tokenize(raw)
    if raw_tokens and raw_tokens[-1] in _FINAL_PUNCT:
        raw_tokens = raw_tokens[:-1]
    if not raw_tokens:
        raise EmptyInput()

    tokens, steps = [], []
    for tok in raw_tokens:
        low = tok.lower()
        if low in CONTRACTIONS:
            parts = CONTRACTIONS[low]
            steps.append(Step(tok, " ".join(parts), "contraction"))
            tokens.extend(parts)
            continue
        if low in lex:
            if low != tok and low not in lex.propernames:
                steps.append(Step(tok, low, "case"))
            tokens.append(low)
            continue
        if low.endswith("s") and low[:-1] in lex.weekdays:
            steps.append(Step(tok, low[:-1], "plural_weekday"))
            tokens.append(low[:-1])
            continue
        cands = spelling_candidates(low, lex)
        if cands:
            steps.append(Step(tok, cands[0], "spelling"))
            tokens.append(cands[0])
            continue
        tokens.append(low)
    return tokens, NormalizationTrace(tuple(steps))
