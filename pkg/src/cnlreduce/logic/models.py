"""Finite models: Tarskian evaluation, bounded model search, facts files."""
from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from pathlib import Path

from ..drs import Drs, Whq, free_referents
from ..errors import (ArityMismatch, FactsFormatError, ImproperDrs, LogicError, NotAQuestion,
                      SearchSpaceTooLarge)
from .fol import (And, Atom, Disj, Exists, Forall, Implies, Neg, free_terms, predicates,
                  translate_open)

DEFAULT_SEARCH_BOUND = 2 ** 24


@dataclass(frozen=True)
class FiniteModel:
    domain: tuple
    interpretation: dict = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "domain", tuple(self.domain))
        interp = {k: frozenset(tuple(t) for t in v) for k, v in self.interpretation.items()}
        object.__setattr__(self, "interpretation", interp)
        dom = set(self.domain)
        for name, tuples in interp.items():
            arities = {len(t) for t in tuples}
            if len(arities) > 1:
                raise ArityMismatch(name, min(arities), max(arities))
            for t in tuples:
                if not set(t) <= dom:
                    raise LogicError(f"{name}{t} mentions constants outside the domain")

    def extension(self, name) -> frozenset:
        return self.interpretation.get(name, frozenset())

    def arity(self, name):
        ext = self.interpretation.get(name)
        if not ext:
            return None
        return len(next(iter(ext)))

    def __hash__(self):
        return hash((self.domain, tuple(sorted((k, tuple(sorted(v)))
                                               for k, v in self.interpretation.items()))))


def _check_arities(f, m: FiniteModel):
    for name, arities in predicates(f).items():
        if len(arities) > 1:
            raise ArityMismatch(name, min(arities), max(arities))
        (k,) = arities
        have = m.arity(name)
        if have is not None and have != k:
            raise ArityMismatch(name, have, k)


def _eval(f, m: FiniteModel, env):
    if isinstance(f, Atom):
        vals = tuple(env.get(a, a) for a in f.args)
        if f.pred == "=":
            return vals[0] == vals[1]
        return vals in m.interpretation.get(f.pred, ())
    if isinstance(f, And):
        return all(_eval(g, m, env) for g in f.items)
    if isinstance(f, Disj):
        return any(_eval(g, m, env) for g in f.items)
    if isinstance(f, Neg):
        return not _eval(f.body, m, env)
    if isinstance(f, Implies):
        return not _eval(f.left, m, env) or _eval(f.right, m, env)
    if isinstance(f, Exists):
        saved = env.get(f.var, _MISSING)
        try:
            for d in m.domain:
                env[f.var] = d
                if _eval(f.body, m, env):
                    return True
            return False
        finally:
            _restore(env, f.var, saved)
    if isinstance(f, Forall):
        saved = env.get(f.var, _MISSING)
        try:
            for d in m.domain:
                env[f.var] = d
                if not _eval(f.body, m, env):
                    return False
            return True
        finally:
            _restore(env, f.var, saved)
    raise TypeError(f"not a formula: {f!r}")


_MISSING = object()


def _restore(env, var, saved):
    if saved is _MISSING:
        env.pop(var, None)
    else:
        env[var] = saved


def eval_model(f, m: FiniteModel, env=None) -> bool:
    """Evaluate ``f`` in ``m``; unbound terms denote themselves (constants)."""
    _check_arities(f, m)
    return _eval(f, m, dict(env or {}))


def satisfiable(f, max_domain: int, bound: int = DEFAULT_SEARCH_BOUND):
    """Smallest model of ``f`` with at most ``max_domain`` elements, or None.

    Domain sizes are tried in ascending order.  For each size the domain is
    the constants of ``f`` (sorted) padded with fresh ``d1, d2, ...``;
    interpretations are enumerated as inclusion vectors over the ground atoms
    (predicates by name, argument tuples lexicographic), in lexicographic
    order, so the empty interpretation comes first.
    """
    if max_domain < 1:
        raise ValueError("max_domain must be >= 1")
    sig = {}
    for name, arities in predicates(f).items():
        if len(arities) > 1:
            raise ArityMismatch(name, min(arities), max(arities))
        sig[name] = next(iter(arities))
    consts = sorted(free_terms(f))
    spent = 0
    for n in range(max(1, len(consts)), max_domain + 1):
        domain = list(consts)
        k = 0
        while len(domain) < n:
            k += 1
            if f"d{k}" not in consts:
                domain.append(f"d{k}")
        atoms = [(name, t) for name in sorted(sig)
                 for t in itertools.product(domain, repeat=sig[name])]
        spent += 2 ** len(atoms)
        if spent > bound:
            raise SearchSpaceTooLarge(spent, bound)
        for bits in itertools.product((False, True), repeat=len(atoms)):
            interp = {name: set() for name in sig}
            for (name, t), on in zip(atoms, bits):
                if on:
                    interp[name].add(t)
            m = FiniteModel(domain, interp)
            if _eval(f, m, {}):
                assert eval_model(f, m)
                return m
    return None


# -- facts files ------------------------------------------------------------

_FACT_RE = re.compile(r"([a-z][a-z_0-9]*)\(\s*([a-z0-9_]+(?:\s*,\s*[a-z0-9_]+)*)\s*\)\s*\.\Z")


def parse_facts(text: str) -> FiniteModel:
    """Ground atoms ``pred(c1[,c2]).``, one per line; ``#`` starts a comment line."""
    interp, domain = {}, []
    seen = set()
    for n, line in enumerate(text.splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        m = _FACT_RE.match(line)
        if not m:
            raise FactsFormatError(n, f"expected a ground atom like 'day(tuesday).', got {line!r}")
        args = tuple(a.strip() for a in m.group(2).split(","))
        name = m.group(1)
        ext = interp.setdefault(name, set())
        if ext and len(next(iter(ext))) != len(args):
            raise FactsFormatError(n, f"{name} used with arity {len(args)}")
        ext.add(args)
        for a in args:
            if a not in seen:
                seen.add(a)
                domain.append(a)
    return FiniteModel(tuple(sorted(domain)), interp)


def load_facts(path) -> FiniteModel:
    return parse_facts(Path(path).read_text(encoding="utf-8"))


# -- questions and entailment ---------------------------------------------

def split_question(q: Drs):
    """``(outer, whq)`` where ``outer`` is ``q`` without its single top-level Whq."""
    whqs = [c for c in q.conditions if isinstance(c, Whq)]
    if len(whqs) != 1:
        raise NotAQuestion()
    rest = [c for c in q.conditions if not isinstance(c, Whq)]
    return Drs(q.referents, rest), whqs[0]


def answer_query(q: Drs, m: FiniteModel) -> set:
    """Domain elements that make the question body true when bound to its referent."""
    free = free_referents(q)
    if free:
        raise ImproperDrs(free)
    outer, whq = split_question(q)
    body = Drs(outer.referents + whq.body.referents, outer.conditions + whq.body.conditions)
    f, _ = translate_open(body)
    _check_arities(f, m)
    return {d for d in m.domain if _eval(f, m, {whq.ref: d})}


@dataclass(frozen=True)
class Entailment:
    holds: bool
    bounded: bool          # always True: the check only covers small models
    max_domain: int
    countermodel: FiniteModel | None = None


def entails(premise, conclusion, max_domain: int = 3, bound: int = DEFAULT_SEARCH_BOUND):
    """Bounded entailment: no countermodel of size <= ``max_domain`` exists."""
    counter = satisfiable(And((premise, Neg(conclusion))), max_domain, bound)
    return Entailment(counter is None, True, max_domain, counter)
