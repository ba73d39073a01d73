"""Verbalization of DRSs into the ACE subset, and conformance checking.

The ACE subset is the controlled fragment of :mod:`cnlreduce.grammar`
without pronouns, bare noun phrases, questions or multi-sentence input.
Realization table:

    ============================  =====================================
    DRS shape                     surface
    ============================  =====================================
    Named(x, n, c)                "N" (capitalized)
    Pred(x, noun) + Pred(x, adj)  "a adj ... noun" ("an" before a vowel)
    Pred(x, weekday)              "Weekday" (capitalized, no article)
    event in subject's box        3rd-person-singular verb
    Pos(K)                        "can" + base verb
    Not(Pos(K))                   "can not" + base verb
    Not(K)                        "does not" + base verb
    Imp(K1, K2)                   "Every N VP"
    Not(K) declaring the subject  "No N VP"
    Rel(e, x, patient)            object NP
    Rel(e, x, recipient)          "to" NP, after the patient
    Rel(e, x, prep)               "prep NP", in condition order
    ============================  =====================================
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from importlib import resources

from .drs import (Drs, Eq, Imp, Named, Not, Or, Pos, Pred, Rel, Whq, alpha_equivalent,
                  collapse_equalities, free_referents, iter_boxes)
from .errors import (EmptyInput, ImproperDrs, NotVerbalizable, ParseFailure, UnknownToken,
                     ValencyMismatch)
from .grammar import FragmentParser, analyze
from .lexicon import VALENCIES, Lexicon
from .normalize import normalize, tokenize

VOWELS = "aeiou"


@lru_cache(maxsize=None)
def constraint_table() -> dict:
    """``{constraint: (hard, description)}`` from the shipped table."""
    text = resources.files("cnlreduce").joinpath("data/ace_constraints.tsv").read_text(
        encoding="utf-8")
    table = {}
    for line in text.splitlines():
        if not line.strip() or line.startswith("#"):
            continue
        name, hard, desc = line.split("\t")
        table[name] = (hard == "yes", desc)
    return table


@dataclass(frozen=True)
class AceSentence:
    text: str
    conformant: bool
    violations: tuple = ()   # (position, constraint)


# -- verbalization ----------------------------------------------------------

class _Realizer:
    def __init__(self, lex: Lexicon):
        self.lex = lex

    def surface(self, lemma, kind):
        e = self.lex.by_lemma(lemma, kind)
        if e is None:
            raise NotVerbalizable(f"no lexicon entry for {kind} {lemma!r}")
        return e.surface

    def describe(self, box: Drs, x, consumed, article=True):
        """Surface NP for entity ``x`` from its conditions in ``box``."""
        named = [i for i, c in enumerate(box.conditions) if isinstance(c, Named) and c.ref == x]
        preds = [i for i, c in enumerate(box.conditions) if isinstance(c, Pred) and c.ref == x]
        if named:
            if len(named) > 1 or preds:
                raise NotVerbalizable(f"referent {x} has mixed descriptions")
            consumed.add(named[0])
            c = box.conditions[named[0]]
            e = self.lex.by_lemma(c.name, "propername")
            return (e.surface if e else c.name).capitalize()
        nouns = [i for i in preds if box.conditions[i].pos == "n"]
        adjs = [i for i in preds if box.conditions[i].pos == "a"]
        if len(nouns) != 1 or len(nouns) + len(adjs) != len(preds):
            raise NotVerbalizable(f"referent {x} needs exactly one noun and only adjectives")
        consumed.update(preds)
        noun = box.conditions[nouns[0]].lemma
        if self.lex.by_lemma(noun, "weekday") is not None and not adjs:
            return self.surface(noun, "weekday").capitalize()
        words = [self.surface(box.conditions[i].lemma, "adjective") for i in adjs]
        words.append(self.surface(noun, "noun"))
        phrase = " ".join(words)
        if not article:
            return phrase
        return ("an " if phrase[0] in VOWELS else "a ") + phrase

    def event(self, box: Drs, subj, form):
        """Verb phrase for the single event in ``box`` (all of ``box`` must be consumed)."""
        events = [i for i, c in enumerate(box.conditions) if isinstance(c, Pred) and c.pos == "v"]
        if len(events) != 1:
            raise NotVerbalizable(f"expected exactly one event, found {len(events)}")
        consumed = {events[0]}
        verb = box.conditions[events[0]]
        e = verb.ref
        entry = self.lex.by_lemma(verb.lemma, "verb")
        if entry is None:
            raise NotVerbalizable(f"no lexicon entry for verb {verb.lemma!r}")
        agents, patients, recipients, pps = [], [], [], []
        for i, c in enumerate(box.conditions):
            if isinstance(c, Rel) and c.ref1 == e:
                consumed.add(i)
                if c.label == "agent":
                    agents.append(c.ref2)
                elif c.label == "patient":
                    patients.append(c.ref2)
                elif c.label == "recipient":
                    recipients.append(c.ref2)
                else:
                    pps.append((c.label, c.ref2))
        if agents != [subj]:
            raise NotVerbalizable("event must have exactly one agent, the subject")
        if len(patients) > 1 or len(recipients) > 1:
            raise NotVerbalizable("repeated object role")
        n_obj = len(patients) + len(recipients)
        if n_obj != VALENCIES[entry.category.valency] or (recipients and not patients):
            raise NotVerbalizable(f"valency of {verb.lemma!r} does not match its roles")
        words = [entry.surface if form == "base" else entry.category.third_sg]
        if patients:
            words.append(self.describe(box, patients[0], consumed))
        if recipients:
            words.append("to " + self.describe(box, recipients[0], consumed))
        for prep, x in pps:
            if self.lex.find(prep, "preposition") is None:
                raise NotVerbalizable(f"unknown preposition {prep!r}")
            words.append(f"{prep} {self.describe(box, x, consumed)}")
        expected_refs = {e} | set(patients) | set(recipients) | {x for _, x in pps}
        if set(box.referents) != expected_refs - {subj}:
            raise NotVerbalizable("event box declares unexpected referents")
        if len(consumed) != len(box.conditions):
            left = [c for i, c in enumerate(box.conditions) if i not in consumed]
            raise NotVerbalizable(f"unverbalizable condition {left[0]!r}")
        return " ".join(words)

    def vp(self, box: Drs, subj, skip):
        """VP from ``box`` ignoring the subject-description indices in ``skip``."""
        rest = [c for i, c in enumerate(box.conditions) if i not in skip]
        refs = [r for r in box.referents if r != subj]
        if any(isinstance(c, Pred) and c.pos == "v" for c in rest):
            return self.event(Drs(refs, rest), subj, "finite")
        if len(rest) != 1 or refs:
            raise NotVerbalizable("expected one modal or negated verb phrase")
        c = rest[0]
        if isinstance(c, Pos):
            return "can " + self.event(c.inner, subj, "base")
        if isinstance(c, Not):
            inner = c.inner
            if (not inner.referents and len(inner.conditions) == 1
                    and isinstance(inner.conditions[0], Pos)):
                return "can not " + self.event(inner.conditions[0].inner, subj, "base")
            return "does not " + self.event(inner, subj, "base")
        raise NotVerbalizable(f"unsupported verb phrase operator {type(c).__name__}")

    def quantified(self, box: Drs, det):
        """'Every N VP' / 'No N VP' over a box whose first referent is the subject."""
        if not box.referents:
            raise NotVerbalizable("quantified noun phrase without a referent")
        x = box.referents[0]
        skip = set()
        noun = self.describe(box, x, skip, article=False)
        return f"{det} {noun} {self.vp(box, x, skip)}"

    def sentence(self, d: Drs):
        for _, box in iter_boxes(d):
            for c in box.conditions:
                if isinstance(c, Or):
                    raise NotVerbalizable("or-unsupported")
                if isinstance(c, Whq):
                    raise NotVerbalizable("question-unsupported")
                if isinstance(c, Eq):
                    raise NotVerbalizable("equality-unsupported")
        if not d.referents and len(d.conditions) == 1:
            c = d.conditions[0]
            if isinstance(c, Imp):
                ant, cons = c.antecedent, c.consequent
                if len(ant.referents) != 1:
                    raise NotVerbalizable("universal restrictor must declare one referent")
                x = ant.referents[0]
                skip = set()
                noun = self.describe(ant, x, skip, article=False)
                if len(skip) != len(ant.conditions):
                    raise NotVerbalizable("universal restrictor has extra conditions")
                return f"Every {noun} {self.vp(cons, x, set())}"
            if isinstance(c, Not) and c.inner.referents and any(
                    isinstance(k, Rel) and k.label == "agent" and k.ref2 == c.inner.referents[0]
                    for _, b in iter_boxes(c.inner) for k in b.conditions):
                return self.quantified(c.inner, "No")
        subjects = [r for r in d.referents
                    if any(isinstance(k, Rel) and k.label == "agent" and k.ref2 == r
                           for _, b in iter_boxes(d) for k in b.conditions)]
        if len(subjects) != 1:
            raise NotVerbalizable("expected exactly one agent referent at top level")
        x = subjects[0]
        skip = set()
        subject = self.describe(d, x, skip)
        return f"{subject} {self.vp(d, x, skip)}"


def verbalize(d: Drs, lex: Lexicon) -> str:
    free = free_referents(d)
    if free:
        raise ImproperDrs(free)
    text = _Realizer(lex).sentence(d)
    return text[0].upper() + text[1:] + "."


# -- conformance ------------------------------------------------------------

def check_ace(text: str, lex: Lexicon) -> AceSentence:
    tokens = tokenize(text)
    if not tokens:
        return AceSentence(text, False, ((0, "empty-input"),))
    violations = []
    if tokens[-1] == ".":
        tokens = tokens[:-1]
    else:
        violations.append((len(tokens), "missing-terminal-period"))
    if not tokens:
        violations.append((0, "empty-input"))
        return AceSentence(text, False, tuple(violations))
    if not tokens[0][:1].isupper():
        violations.append((0, "initial-capital"))
    lowered = [t.lower() for t in tokens]
    for i, (tok, low) in enumerate(zip(tokens, lowered)):
        if (low in lex.propernames or low in lex.weekdays) and not tok[:1].isupper():
            violations.append((i, "proper-name-case"))
    parser = FragmentParser(lowered, lex, ace=True)
    try:
        parser.parse()
    except UnknownToken as exc:
        violations.append((exc.position, "unknown-token"))
    except ValencyMismatch as exc:
        violations.append((exc.position, "valency-mismatch"))
    except ParseFailure as exc:
        violations.append((exc.position, "parse-failure"))
    violations.extend((v.position, v.constraint) for v in parser.violations)
    violations.sort()
    return AceSentence(text, not violations, tuple(violations))


def roundtrip_check(d: Drs, lex: Lexicon) -> bool:
    """True iff re-analysing ``verbalize(d)`` gives back ``d`` up to renaming."""
    text = verbalize(d, lex)
    try:
        tokens, _ = normalize(text, lex)
        again, _ = analyze(tokens, lex)
    except (EmptyInput, ParseFailure, UnknownToken, ValencyMismatch):
        return False
    return alpha_equivalent(collapse_equalities(d), collapse_equalities(again))
