"""Pronoun resolution by DRT accessibility plus two-valued agreement."""
from __future__ import annotations

from dataclasses import replace

from .drs import (Drs, Eq, Named, Pred, accessible_at, declared_in_order, iter_boxes,
                  replace_box)
from .errors import NoAntecedent
from .grammar import AnalysisFlags
from .lexicon import PLACEHOLDER_SENSE, Lexicon


def is_placeholder(cond) -> bool:
    return isinstance(cond, Pred) and cond.sense == PLACEHOLDER_SENSE


def _agreement(d: Drs, ref, lex: Lexicon):
    """'person', 'thing' or None (unknown) for an entity referent."""
    for _, box in iter_boxes(d):
        for c in box.conditions:
            if isinstance(c, Named) and c.ref == ref:
                return "person" if c.cls == "per" else "thing"
            if isinstance(c, Pred) and c.ref == ref and c.pos == "n" and not is_placeholder(c):
                agr = lex.agreement_of_noun(c.lemma)
                if agr is not None:
                    return agr
    return None


def _is_event(d: Drs, ref):
    return any(isinstance(c, Pred) and c.ref == ref and c.pos == "v"
               for _, box in iter_boxes(d) for c in box.conditions)


def candidates(d: Drs, path, pronoun_ref, pronoun_agr, lex: Lexicon) -> list:
    """Accessible, earlier, agreement-compatible referents, most recent first."""
    order = {r: k for k, r in enumerate(declared_in_order(d))}
    limit = order.get(pronoun_ref, len(order))
    found = []
    for r in accessible_at(d, path):
        if r == pronoun_ref or order.get(r, limit) >= limit or _is_event(d, r):
            continue
        # unresolved pronouns, and resolved ones (which co-refer with their antecedent)
        if any((is_placeholder(c) and c.ref == r) or (isinstance(c, Eq) and c.ref1 == r)
               for _, b in iter_boxes(d) for c in b.conditions):
            continue
        agr = _agreement(d, r, lex)
        if agr is None or agr == pronoun_agr:
            found.append(r)
    found.sort(key=lambda r: order[r], reverse=True)
    return found


def resolve_anaphora(d: Drs, flags: AnalysisFlags, lex: Lexicon = None):
    """Replace each pronoun placeholder ``Pred(x, he, n, 9999)`` by ``Eq(x, antecedent)``.

    The antecedent is the most recent accessible referent with compatible
    agreement.  When two or more candidates remain the choice is still made
    deterministically, but the full list is recorded and
    ``ambiguous_anaphora`` is raised.
    """
    lex = lex or Lexicon.default()
    cand_lists = list(flags.candidate_antecedents)
    ambiguous = flags.ambiguous_anaphora
    while True:
        site = None
        for path, box in iter_boxes(d):
            for i, c in enumerate(box.conditions):
                if is_placeholder(c):
                    site = path, box, i, c
                    break
            if site:
                break
        if site is None:
            break
        path, box, i, c = site
        pro = lex.find(c.lemma, "pronoun")
        agr = pro.category.args[0] if pro else None
        cands = candidates(d, path, c.ref, agr, lex)
        if not cands:
            raise NoAntecedent(c.lemma)
        cand_lists.append(tuple(cands))
        if len(cands) >= 2:
            ambiguous = True
        conds = list(box.conditions)
        conds[i] = Eq(c.ref, cands[0])
        d = replace_box(d, path, Drs(box.referents, conds))
    return d, replace(flags, ambiguous_anaphora=ambiguous,
                      candidate_antecedents=tuple(cand_lists))
