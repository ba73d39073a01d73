"""Finite-domain CSPs compiled from wh-questions, solved by backtracking with forward checking."""
from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

from ..drs import Drs, Named, Pos, Pred, Rel, Whq, free_referents
from ..errors import (EmptyDomain, FactsFormatError, ImproperDrs, LogicError, UnsupportedConstruct,
                      UntypedVariable)
from .fol import pred_name
from .models import FiniteModel, split_question


@dataclass(frozen=True)
class CspInstance:
    variables: tuple                 # (name, domain tuple)
    unary: tuple = ()                # (var, frozenset of allowed values)
    binary: tuple = ()               # (var1, var2, relation, frozenset of allowed pairs)
    consistent: bool = True          # False if a ground check failed while compiling
    answer: str | None = None        # the wh-variable, if compiled from a question

    def __post_init__(self):
        object.__setattr__(self, "variables", tuple((v, tuple(d)) for v, d in self.variables))
        object.__setattr__(self, "unary", tuple((v, frozenset(a)) for v, a in self.unary))
        object.__setattr__(self, "binary",
                           tuple((a, b, r, frozenset(p)) for a, b, r, p in self.binary))
        names = [v for v, _ in self.variables]
        if len(set(names)) != len(names):
            raise LogicError("duplicate CSP variable")
        for v, dom in self.variables:
            if not dom:
                raise EmptyDomain(v, "<declared>")
        declared = set(names)
        for v, _ in self.unary:
            if v not in declared:
                raise UntypedVariable(v)
        for a, b, _, _ in self.binary:
            for v in (a, b):
                if v not in declared:
                    raise UntypedVariable(v)

    def domain(self, var):
        return dict(self.variables)[var]


def solve_csp(c: CspInstance) -> list:
    """All solutions as dicts, in lexicographic order of (declaration order, domain order)."""
    if not c.consistent:
        return []
    order = [v for v, _ in c.variables]
    domains = {v: [x for x in dom if all(x in allowed for u, allowed in c.unary if u == v)]
               for v, dom in c.variables}
    constraints = {v: [] for v in order}
    for a, b, _, pairs in c.binary:
        constraints[a].append((a, b, pairs))
        if b != a:
            constraints[b].append((a, b, pairs))
    solutions = []
    assignment = {}

    def consistent_self(v, x):
        return all((x, x) in pairs for a, b, pairs in constraints[v] if a == b)

    def search(i, doms):
        if i == len(order):
            solutions.append(dict(assignment))
            return
        v = order[i]
        for x in doms[v]:
            if not consistent_self(v, x):
                continue
            assignment[v] = x
            pruned = dict(doms)
            wiped = False
            for a, b, pairs in constraints[v]:
                other = b if a == v else a
                if other == v or other in assignment:
                    # both ends assigned: check directly
                    if other != v and ((assignment[a], assignment[b]) not in pairs):
                        wiped = True
                        break
                    continue
                if a == v:
                    keep = [y for y in pruned[other] if (x, y) in pairs]
                else:
                    keep = [y for y in pruned[other] if (y, x) in pairs]
                if not keep:
                    wiped = True
                    break
                pruned[other] = keep
            if not wiped:
                search(i + 1, pruned)
            del assignment[v]

    search(0, domains)
    return solutions


# -- compilation ------------------------------------------------------------

def parse_roles(text: str) -> dict:
    """``verb<TAB>role<TAB>relation`` lines into ``{(verb, role): relation}``."""
    table = {}
    for n, line in enumerate(text.splitlines(), 1):
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 3:
            raise FactsFormatError(n, "expected 'verb role relation'")
        table[(parts[0], parts[1])] = parts[2]
    return table


def load_roles(path) -> dict:
    return parse_roles(Path(path).read_text(encoding="utf-8"))


def _flatten(box: Drs, refs, conds):
    """Collect referents and conditions through Pos boxes (modality is not modelled)."""
    refs.extend(box.referents)
    for c in box.conditions:
        if isinstance(c, Pos):
            _flatten(c.inner, refs, conds)
        elif isinstance(c, (Pred, Named, Rel)):
            conds.append(c)
        else:
            raise UnsupportedConstruct(f"{type(c).__name__} cannot be compiled to a CSP")


def compile_csp(q: Drs, facts: FiniteModel, role_relations=None) -> CspInstance:
    """Compile a wh-question against ``facts``.

    Named referents become constants.  An event whose verb has entries in
    ``role_relations`` is projected away: each non-agent role edge
    ``Rel(e, y, role)`` becomes the relation ``R(agent, y)``.  Any other event
    is an ordinary variable typed by its verb predicate.  A variable's type is
    its first noun predicate (or its first predicate if it has no noun); the
    remaining unary predicates restrict it further.
    """
    free = free_referents(q)
    if free:
        raise ImproperDrs(free)
    outer, whq = split_question(q)
    refs, conds = [], []
    _flatten(outer, refs, conds)
    refs.append(whq.ref)
    _flatten(whq.body, refs, conds)
    role_relations = role_relations or {}

    constants = {}
    for c in conds:
        if isinstance(c, Named):
            if constants.get(c.ref, c.name) != c.name:
                return _inconsistent(whq.ref)
            constants[c.ref] = c.name
    verbs = {c.ref: c.lemma for c in conds if isinstance(c, Pred) and c.pos == "v"}
    projected = {e for e, lemma in verbs.items() if any(k[0] == lemma for k in role_relations)}

    unary_preds = {}
    for c in conds:
        if isinstance(c, Pred) and c.ref not in projected:
            unary_preds.setdefault(c.ref, []).append(c)

    def term(r):
        return ("const", constants[r]) if r in constants else ("var", r)

    edges = []        # (term1, term2, relation)
    for c in conds:
        if not isinstance(c, Rel):
            continue
        if c.ref1 in projected:
            if c.label == "agent":
                continue
            rel = role_relations.get((verbs[c.ref1], c.label))
            if rel is None:
                raise UnsupportedConstruct(
                    f"no relation for role {c.label!r} of verb {verbs[c.ref1]!r}")
            agents = [k.ref2 for k in conds
                      if isinstance(k, Rel) and k.ref1 == c.ref1 and k.label == "agent"]
            if len(agents) != 1:
                raise UnsupportedConstruct("projected event needs exactly one agent")
            edges.append((term(agents[0]), term(c.ref2), rel))
        else:
            if c.ref2 in projected:
                raise UnsupportedConstruct("relation into a projected event")
            edges.append((term(c.ref1), term(c.ref2), c.label))

    variables, unary, binary = [], [], []
    consistent = True
    for r in refs:
        if r in constants or r in projected:
            continue
        preds = unary_preds.get(r, [])
        if not preds:
            raise UntypedVariable(r)
        nouns = [p for p in preds if p.pos == "n"]
        typing = nouns[0] if nouns else preds[0]
        name = pred_name(typing.lemma, typing.pos)
        dom = sorted(t[0] for t in facts.extension(name) if len(t) == 1)
        if not dom:
            raise EmptyDomain(r, name)
        variables.append((r, dom))
        for p in preds:
            if p is not typing:
                unary.append((r, {t[0] for t in facts.extension(pred_name(p.lemma, p.pos))}))
    for r, name in constants.items():
        # predicates on named individuals are ground checks
        for p in unary_preds.get(r, []):
            if (name,) not in facts.extension(pred_name(p.lemma, p.pos)):
                consistent = False
    for (k1, a), (k2, b), rel in edges:
        ext = facts.extension(rel)
        if k1 == "var" and k2 == "var":
            binary.append((a, b, rel, ext))
        elif k1 == "var":
            unary.append((a, {x for x, y in ext if y == b}))
        elif k2 == "var":
            unary.append((b, {y for x, y in ext if x == a}))
        elif (a, b) not in ext:
            consistent = False
    return CspInstance(variables, unary, binary, consistent, whq.ref)


def _inconsistent(answer):
    return CspInstance((), (), (), False, answer)
