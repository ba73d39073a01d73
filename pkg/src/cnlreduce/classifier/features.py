"""Sentence-level sparse features for the reduction classifier."""
from __future__ import annotations

from collections import Counter

from ..grammar import AnalysisFlags
from ..lexicon import Lexicon

FLAG_FEATURES = ("flag:ambiguous_anaphora", "flag:oov", "flag:multiple_attachments")


def extract_features(tokens, flags: AnalysisFlags, lex: Lexicon) -> dict:
    """Map a token sequence to ``{feature: value}``.

    Unigrams, bigrams and lexicon-category unigrams are counts; the three
    flag features are always present with value 0 or 1.
    """
    tokens = list(tokens)
    if not tokens:
        raise ValueError("cannot extract features from an empty token list")
    counts = Counter()
    for tok in tokens:
        counts[f"unigram:{tok}"] += 1
    for a, b in zip(tokens, tokens[1:]):
        counts[f"bigram:{a}_{b}"] += 1
    for tok in tokens:
        kinds = sorted({e.kind for e in lex.lookup(tok)})
        for kind in kinds:
            counts[f"cat:{kind}"] += 1
    fv = {k: float(v) for k, v in sorted(counts.items())}
    fv["flag:ambiguous_anaphora"] = 1.0 if flags.ambiguous_anaphora else 0.0
    fv["flag:oov"] = 1.0 if flags.oov_count > 0 else 0.0
    fv["flag:multiple_attachments"] = 1.0 if flags.multiple_attachments else 0.0
    return fv
