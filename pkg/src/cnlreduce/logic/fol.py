"""First-order formulas and the standard DRS-to-FOL translation."""
from __future__ import annotations

from dataclasses import dataclass

from ..drs import Drs, Eq, Imp, Named, Not, Or, Pos, Pred, Rel, Whq, free_referents
from ..errors import ImproperDrs, QuestionNotTranslatable

MODALITY_ERASED = "modality-erased"


@dataclass(frozen=True)
class Atom:
    pred: str
    args: tuple

    def __str__(self):
        if self.pred == "=" and len(self.args) == 2:
            return f"{self.args[0]} = {self.args[1]}"
        return f"{self.pred}({','.join(self.args)})"


@dataclass(frozen=True)
class And:
    items: tuple = ()

    def __str__(self):
        if not self.items:
            return "true"
        return "(" + " & ".join(map(str, self.items)) + ")"


@dataclass(frozen=True)
class Disj:
    items: tuple = ()

    def __str__(self):
        if not self.items:
            return "false"
        return "(" + " | ".join(map(str, self.items)) + ")"


@dataclass(frozen=True)
class Neg:
    body: object

    def __str__(self):
        return f"~{self.body}"


@dataclass(frozen=True)
class Implies:
    left: object
    right: object

    def __str__(self):
        return f"({self.left} -> {self.right})"


@dataclass(frozen=True)
class Exists:
    var: str
    body: object

    def __str__(self):
        return f"exists {self.var}.{self.body}"


@dataclass(frozen=True)
class Forall:
    var: str
    body: object

    def __str__(self):
        return f"forall {self.var}.{self.body}"


def conj(items):
    items = tuple(items)
    return items[0] if len(items) == 1 else And(items)


def exists_all(variables, body):
    for v in reversed(variables):
        body = Exists(v, body)
    return body


def forall_all(variables, body):
    for v in reversed(variables):
        body = Forall(v, body)
    return body


def pred_name(lemma, pos):
    return f"{lemma}_{pos}"


def named_name(cls, name):
    return f"named_{cls}_{name}"


class _Translator:
    def __init__(self):
        self.warnings = []

    def warn(self, w):
        if w not in self.warnings:
            self.warnings.append(w)

    def box(self, d: Drs):
        return exists_all(d.referents, self.conds(d))

    def conds(self, d: Drs):
        return conj(self.cond(c) for c in d.conditions)

    def cond(self, c):
        if isinstance(c, Pred):
            return Atom(pred_name(c.lemma, c.pos), (c.ref,))
        if isinstance(c, Named):
            return Atom(named_name(c.cls, c.name), (c.ref,))
        if isinstance(c, Rel):
            return Atom(c.label, (c.ref1, c.ref2))
        if isinstance(c, Eq):
            return Atom("=", (c.ref1, c.ref2))
        if isinstance(c, Not):
            return Neg(self.box(c.inner))
        if isinstance(c, Pos):
            self.warn(MODALITY_ERASED)
            return self.box(c.inner)
        if isinstance(c, Imp):
            return forall_all(c.antecedent.referents,
                              Implies(self.conds(c.antecedent), self.box(c.consequent)))
        if isinstance(c, Or):
            return Disj((self.box(c.left), self.box(c.right)))
        if isinstance(c, Whq):
            raise QuestionNotTranslatable()
        raise TypeError(f"not a condition: {c!r}")


def to_fol(d: Drs):
    """Translate a proper DRS; returns ``(formula, warnings)``."""
    free = free_referents(d)
    if free:
        raise ImproperDrs(free)
    t = _Translator()
    return t.box(d), t.warnings


def translate_open(d: Drs):
    """Translate without the properness check (free referents stay free variables)."""
    t = _Translator()
    return t.box(d), t.warnings


def predicates(f, acc=None) -> dict:
    """``{name: arity}`` of every predicate in ``f`` (equality excluded)."""
    acc = {} if acc is None else acc
    if isinstance(f, Atom):
        if f.pred != "=":
            acc.setdefault(f.pred, set()).add(len(f.args))
    elif isinstance(f, (And, Disj)):
        for g in f.items:
            predicates(g, acc)
    elif isinstance(f, Neg):
        predicates(f.body, acc)
    elif isinstance(f, Implies):
        predicates(f.left, acc)
        predicates(f.right, acc)
    elif isinstance(f, (Exists, Forall)):
        predicates(f.body, acc)
    return acc


def free_terms(f, bound=frozenset()) -> set:
    """Terms not bound by a quantifier: these denote constants."""
    if isinstance(f, Atom):
        return {a for a in f.args if a not in bound}
    if isinstance(f, (And, Disj)):
        return set().union(*(free_terms(g, bound) for g in f.items)) if f.items else set()
    if isinstance(f, Neg):
        return free_terms(f.body, bound)
    if isinstance(f, Implies):
        return free_terms(f.left, bound) | free_terms(f.right, bound)
    if isinstance(f, (Exists, Forall)):
        return free_terms(f.body, bound | {f.var})
    raise TypeError(f"not a formula: {f!r}")
