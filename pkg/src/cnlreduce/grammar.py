"""Recursive-descent parser for the controlled English fragment, building
DRSs compositionally in neo-Davidsonian style.

Fragment (one or more sentences separated by ``.`` tokens)::

    S    := NP VP | "every" N VP | "no" N VP | WHQ
    NP   := ProperName | ("a"|"an") N | Pronoun | N          (bare N: not ACE)
    N    := Adjective* Noun
    VP   := ["can" ["not"] | "does" ["not"]] Verb Objects PP*
    Objects: intrans none; mono NP; di NP NP (recipient, patient)
             or NP "to" NP (patient, recipient)
    PP   := Preposition (NP | Weekday)
    WHQ  := ("who"|"what") VP | "when" ["can"|"does"] NP VP

Referents are numbered left to right: ``x1, x2, ...`` for entities and
``e1, e2, ...`` for events.  Pronouns become placeholder predicates with
sense 9999, resolved later by :mod:`cnlreduce.anaphora`.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .drs import Drs, Imp, Named, Not, Pos, Pred, Rel, Whq
from .errors import ParseFailure, UnknownToken, ValencyMismatch
from .lexicon import PLACEHOLDER_SENSE, VALENCIES, Lexicon

WH_TYPES = {"person": "person", "thing": "thing", "time": "day"}


@dataclass(frozen=True)
class AnalysisFlags:
    ambiguous_anaphora: bool = False
    oov_count: int = 0
    multiple_attachments: bool = False
    candidate_antecedents: tuple = ()


@dataclass(frozen=True)
class Violation:
    position: int
    constraint: str


class _Box:
    def __init__(self):
        self.refs = []
        self.conds = []

    def freeze(self):
        return Drs(self.refs, self.conds)


@dataclass
class _NP:
    ref: str
    conds: list = field(default_factory=list)


class FragmentParser:
    """One-shot parser over a token list.

    With ``ace=True`` constructs outside the controlled subset (bare noun
    phrases, pronouns, questions, several sentences) are recorded as
    violations instead of being silently accepted.
    """

    def __init__(self, tokens, lex: Lexicon, ace=False):
        self.tokens = list(tokens)
        self.lex = lex
        self.ace = ace
        self.i = 0
        self.nx = 0
        self.ne = 0
        self.violations = []
        self.multiple_attachments = False

    # -- token access -------------------------------------------------------

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else None

    def entry(self, kind, tok=None):
        tok = self.peek() if tok is None else tok
        if tok is None or tok == ".":
            return None
        if tok not in self.lex:
            raise UnknownToken(tok, self.i)
        return self.lex.find(tok, kind)

    def at(self, *kinds):
        return any(self.entry(k) is not None for k in kinds)

    def expect(self, kind, what):
        e = self.entry(kind)
        if e is None:
            raise ParseFailure(self.i, what, self.peek())
        self.i += 1
        return e

    def soft(self, constraint, position=None):
        if self.ace:
            self.violations.append(Violation(self.i if position is None else position, constraint))

    def new_x(self):
        self.nx += 1
        return f"x{self.nx}"

    def new_e(self):
        self.ne += 1
        return f"e{self.ne}"

    # -- grammar ------------------------------------------------------------

    def parse(self) -> Drs:
        if not self.tokens:
            raise ParseFailure(0, "sentence")
        top = _Box()
        self.sentence(top)
        while self.peek() == ".":
            self.i += 1
            if self.peek() is None:
                break
            self.soft("multiple-sentences")
            self.sentence(top)
        if self.peek() is not None:
            raise ParseFailure(self.i, "end of sentence", self.peek())
        return top.freeze()

    def sentence(self, top: _Box):
        det = self.entry("determiner")
        if det is not None and det.category.args[0] == "univ":
            self.i += 1
            restr = _Box()
            x = self.new_x()
            restr.refs.append(x)
            restr.conds.extend(self.noun(x).conds)
            scope = _Box()
            self.vp(scope, x)
            top.conds.append(Imp(restr.freeze(), scope.freeze()))
            return
        if det is not None and det.category.args[0] == "neg":
            self.i += 1
            box = _Box()
            x = self.new_x()
            np = self.noun(x)
            box.refs.append(x)
            box.conds.extend(np.conds)
            self.vp(box, x)
            top.conds.append(Not(box.freeze()))
            return
        wh = self.entry("wh")
        if wh is not None:
            self.question(top, wh)
            return
        subj = self.np()
        top.refs.append(subj.ref)
        top.conds.extend(subj.conds)
        self.vp(top, subj.ref)

    def question(self, top: _Box, wh):
        self.soft("question-form")
        self.i += 1
        x = self.new_x()
        body = _Box()
        body.conds.append(Pred(x, WH_TYPES[wh.category.args[0]], "n", 0))
        if wh.category.args[0] != "time":
            self.vp(body, x)
        else:
            mode = None
            if self.at("modal"):
                self.i += 1
                mode = "can"
            elif self.entry("aux") is not None and self.peek() == "does":
                self.i += 1
                mode = "does"
            subj = self.np()
            body.refs.append(subj.ref)
            body.conds.extend(subj.conds)
            self.vp(body, subj.ref, mode=mode, extra=[("on", x)])
        top.conds.append(Whq(x, body.freeze()))

    def np(self) -> _NP:
        start = self.i
        det = self.entry("determiner")
        if det is not None:
            if det.category.args[0] != "indef":
                raise ParseFailure(self.i, "noun phrase", self.peek())
            self.i += 1
            return self.noun(self.new_x())
        name = self.entry("propername")
        if name is not None:
            self.i += 1
            x = self.new_x()
            return _NP(x, [Named(x, name.lemma, name.category.args[0])])
        pro = self.entry("pronoun")
        if pro is not None:
            self.soft("unresolved-pronoun")
            self.i += 1
            x = self.new_x()
            return _NP(x, [Pred(x, pro.lemma, "n", PLACEHOLDER_SENSE)])
        if self.at("noun", "adjective"):
            self.soft("bare-noun-phrase", start)
            return self.noun(self.new_x())
        raise ParseFailure(self.i, "noun phrase", self.peek())

    def starts_np(self):
        if self.at("propername", "pronoun", "noun", "adjective"):
            return True
        det = self.entry("determiner")
        return det is not None and det.category.args[0] == "indef"

    def noun(self, x) -> _NP:
        adjs = []
        while self.entry("noun") is None and self.at("adjective"):
            adjs.append(self.expect("adjective", "adjective"))
        n = self.expect("noun", "noun")
        conds = [Pred(x, n.lemma, "n", n.sense)]
        conds.extend(Pred(x, a.lemma, "a", a.sense) for a in adjs)
        return _NP(x, conds)

    def vp(self, box: _Box, subj, mode=None, extra=()):
        if mode is None:
            if self.at("modal"):
                self.i += 1
                mode = "can"
            elif self.peek() == "does" and self.entry("aux") is not None:
                self.i += 1
                mode = "does"
        negated = False
        if mode is not None and self.peek() == "not" and self.entry("aux") is not None:
            self.i += 1
            negated = True

        if mode == "can":
            inner = _Box()
            self.event(inner, subj, base=True, extra=extra)
            cond = Pos(inner.freeze())
            if negated:
                cond = Not(Drs((), (cond,)))
            box.conds.append(cond)
        elif negated:
            inner = _Box()
            self.event(inner, subj, base=True, extra=extra)
            box.conds.append(Not(inner.freeze()))
        else:
            self.event(box, subj, base=mode == "does", extra=extra)

    def event(self, box: _Box, subj, base, extra=()):
        pos = self.i
        verb = self.entry("verb")
        if verb is None:
            raise ParseFailure(self.i, "verb", self.peek())
        form = verb.surface if base else verb.category.third_sg
        if self.peek() != form:
            raise ParseFailure(self.i, f"verb form {form!r}", self.peek())
        self.i += 1
        e = self.new_e()
        box.refs.append(e)
        box.conds.append(Pred(e, verb.lemma, "v", verb.sense))
        box.conds.append(Rel(e, subj, "agent"))

        valency = verb.category.valency
        objects = []
        while self.starts_np() and len(objects) < 2:
            objects.append(self.np())
            if (valency == "di" and len(objects) == 1 and self.peek() == "to"
                    and self.entry("preposition") is not None):
                self.i += 1
                objects.append(self.np())
                roles = ["patient", "recipient"]
                break
        else:
            roles = ["patient"] if len(objects) == 1 else ["recipient", "patient"]
        if len(objects) != VALENCIES[valency]:
            raise ValencyMismatch(verb.lemma, VALENCIES[valency], len(objects), pos)
        for np, role in zip(objects, roles):
            box.refs.append(np.ref)
            box.conds.append(Rel(e, np.ref, role))
            box.conds.extend(np.conds)

        pps = 0
        while self.at("preposition"):
            prep = self.expect("preposition", "preposition")
            pps += 1
            day = self.entry("weekday")
            if day is not None:
                self.i += 1
                x = self.new_x()
                box.refs.append(x)
                box.conds.append(Rel(e, x, prep.lemma))
                box.conds.append(Pred(x, day.lemma, "n", day.sense))
                continue
            np = self.np()
            box.refs.append(np.ref)
            box.conds.append(Rel(e, np.ref, prep.lemma))
            box.conds.extend(np.conds)
        if valency == "di" and pps > 1:
            self.multiple_attachments = True
        for label, ref in extra:
            box.conds.append(Rel(e, ref, label))


def analyze(tokens, lex: Lexicon):
    """Parse a token list into ``(drs, flags)``."""
    p = FragmentParser(tokens, lex)
    d = p.parse()
    return d, AnalysisFlags(multiple_attachments=p.multiple_attachments)
