"""Label-gated rewriting of DRS condition multisets.

Rule files look like::

    # jargon: bare field name -> "a <adjective> class"
    rule r1:
    when jargon
    match pred(?x,linguistics,n,?s)
    replace pred(?x,class,n,0), pred(?x,linguistic,a,0)

``when`` and ``fresh`` lines are optional; ``replace nothing`` deletes the
matched conditions (recorded as lossy in the trace).  Strategy: scan rules in
file order, rewrite the first match of the first applicable rule, restart;
stop at a fixpoint or when the iteration budget runs out.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import NamedTuple

from .drs import (ATOMIC, Drs, Eq, Named, Pred, Rel, Whq, all_names, atom_refs, box_at,
                  free_referents, iter_boxes, replace_box, sub_boxes, with_sub_boxes)
from .drstext import parse_condlist, serialize_condition
from .errors import (DrsSyntaxError, FreshClash, ImproperResult, IterationBudgetExceeded,
                     MetavariableRoleClash, RuleSyntaxError, UnboundReplacementVar)

LABELS = ("ambiguous", "colloquialism", "jargon", "workaround")
_RULE_HEAD = re.compile(r"rule\s+([A-Za-z_][A-Za-z_0-9]*)\s*:\s*\Z")
_MVAR = re.compile(r"\?[a-z][a-z_0-9]*\Z")


def is_meta(v) -> bool:
    return isinstance(v, str) and v.startswith("?")


@dataclass(frozen=True)
class RewriteRule:
    name: str
    match: tuple
    replace: tuple = ()
    gate: frozenset = frozenset()
    fresh: tuple = ()

    @property
    def lossy(self):
        return not self.replace

    def applicable(self, labels) -> bool:
        """``labels=None`` means no classifier ran: every rule applies."""
        return labels is None or not self.gate or self.gate <= set(labels)


# -- metavariable bookkeeping ------------------------------------------------

def _slots(cond):
    """Yield ``(role, value)`` for every slot of a (pattern) condition, recursively."""
    if isinstance(cond, Pred):
        yield "ref", cond.ref
        yield "lemma", cond.lemma
        yield "nat", cond.sense
    elif isinstance(cond, Named):
        yield "ref", cond.ref
        yield "lemma", cond.name
    elif isinstance(cond, Rel):
        yield "ref", cond.ref1
        yield "ref", cond.ref2
        yield "lemma", cond.label
    elif isinstance(cond, Eq):
        yield "ref", cond.ref1
        yield "ref", cond.ref2
    else:
        if isinstance(cond, Whq):
            yield "ref", cond.ref
        for box in sub_boxes(cond):
            for r in box.referents:
                yield "ref", r
            for c in box.conditions:
                yield from _slots(c)


def metavariables(patterns) -> dict:
    out = {}
    for p in patterns:
        for role, v in _slots(p):
            if is_meta(v):
                out.setdefault(v, set()).add(role)
    return out


def validate_rule(rule: RewriteRule):
    bound = metavariables(rule.match)
    used = metavariables(rule.replace)
    roles = {}
    for table in (bound, used):
        for v, rs in table.items():
            roles.setdefault(v, set()).update(rs)
    for v in rule.fresh:
        roles.setdefault(v, set()).add("ref")
    for v, rs in sorted(roles.items()):
        if len(rs) > 1:
            raise MetavariableRoleClash(rule.name, v)
    for v in rule.fresh:
        if v in bound:
            raise FreshClash(rule.name, v)
    for v in sorted(used):
        if v not in bound and v not in rule.fresh:
            raise UnboundReplacementVar(rule.name, v)
    return rule


# -- rule files -------------------------------------------------------------

def _parse_patterns(text, lineno):
    try:
        return tuple(parse_condlist(text, meta=True, line_offset=lineno - 1))
    except DrsSyntaxError as exc:
        raise RuleSyntaxError(lineno, str(exc)) from None


def parse_rules(text: str) -> list:
    lines = [(n, line.strip()) for n, line in enumerate(text.splitlines(), 1)]
    lines = [(n, l) for n, l in lines if l and not l.startswith("#")]
    rules, names = [], set()
    k = 0
    while k < len(lines):
        n, line = lines[k]
        m = _RULE_HEAD.match(line)
        if not m:
            raise RuleSyntaxError(n, "expected 'rule NAME:'")
        name = m.group(1)
        if name in names:
            raise RuleSyntaxError(n, f"duplicate rule name {name!r}")
        names.add(name)
        k += 1
        gate, fresh, match, replace = frozenset(), (), None, None
        if k < len(lines) and lines[k][1].startswith("when "):
            n, line = lines[k]
            labs = [s.strip() for s in line[5:].split(",")]
            for lab in labs:
                if lab not in LABELS:
                    raise RuleSyntaxError(n, f"unknown reduction label {lab!r}")
            gate = frozenset(labs)
            k += 1
        if k < len(lines) and lines[k][1].startswith("fresh "):
            n, line = lines[k]
            fresh = tuple(s.strip() for s in line[6:].split(","))
            for v in fresh:
                if not _MVAR.match(v):
                    raise RuleSyntaxError(n, f"bad metavariable {v!r}")
            k += 1
        if k < len(lines) and lines[k][1].startswith("match "):
            n, line = lines[k]
            match = _parse_patterns(line[6:], n)
            k += 1
        else:
            raise RuleSyntaxError(lines[k][0] if k < len(lines) else n, "expected 'match' line")
        if k < len(lines) and (lines[k][1].startswith("replace ") or lines[k][1] == "replace"):
            n, line = lines[k]
            body = line[7:].strip()
            if body == "nothing":
                replace = ()
            else:
                replace = _parse_patterns(body, n)
            k += 1
        else:
            raise RuleSyntaxError(lines[k][0] if k < len(lines) else n, "expected 'replace' line")
        rules.append(validate_rule(RewriteRule(name, match, replace, gate, fresh)))
    return rules


def load_rules(path) -> list:
    with open(path, encoding="utf-8") as fh:
        return parse_rules(fh.read())


def serialize_rule(rule: RewriteRule) -> str:
    lines = [f"rule {rule.name}:"]
    if rule.gate:
        lines.append("when " + ", ".join(sorted(rule.gate)))
    if rule.fresh:
        lines.append("fresh " + ", ".join(rule.fresh))
    lines.append("match " + ", ".join(serialize_condition(p) for p in rule.match))
    lines.append("replace " + (", ".join(serialize_condition(p) for p in rule.replace)
                               if rule.replace else "nothing"))
    return "\n".join(lines)


# -- matching ---------------------------------------------------------------

def _unify(pv, tv, b):
    """Unify one slot; return the list of newly bound variables or None."""
    if is_meta(pv):
        if pv in b:
            return [] if b[pv] == tv else None
        b[pv] = tv
        return [pv]
    return [] if pv == tv else None


def _undo(b, added):
    for v in added:
        del b[v]


def _slot_values(c):
    if isinstance(c, Pred):
        return (c.ref, c.lemma, c.pos, c.sense)
    if isinstance(c, Named):
        return (c.ref, c.name, c.cls)
    if isinstance(c, Rel):
        return (c.ref1, c.ref2, c.label)
    return atom_refs(c)


def _match_cond(p, c, b):
    if type(p) is not type(c):
        return
    if isinstance(p, ATOMIC):
        added = []
        for pv, tv in zip(_slot_values(p), _slot_values(c)):
            new = _unify(pv, tv, b)
            if new is None:
                _undo(b, added)
                return
            added.extend(new)
        yield
        _undo(b, added)
        return
    added = []
    if isinstance(p, Whq):
        added = _unify(p.ref, c.ref, b)
        if added is None:
            return
    pboxes, cboxes = sub_boxes(p), sub_boxes(c)

    def chain(k):
        if k == len(pboxes):
            yield
            return
        for _ in _match_subbox(pboxes[k], cboxes[k], b):
            yield from chain(k + 1)

    yield from chain(0)
    _undo(b, added)


def _match_subbox(pbox: Drs, tbox: Drs, b):
    """Pattern box matches when its referents and conditions embed injectively."""
    def refs(k, used):
        if k == len(pbox.referents):
            yield from _embed(pbox.conditions, tbox.conditions, b)
            return
        for j, r in enumerate(tbox.referents):
            if j in used:
                continue
            added = _unify(pbox.referents[k], r, b)
            if added is None:
                continue
            yield from refs(k + 1, used | {j})
            _undo(b, added)

    for _ in refs(0, frozenset()):
        yield


def _embed(patterns, conds, b, used=()):
    """Yield the tuple of matched condition indices for each injective embedding."""
    if len(patterns) == len(used):
        yield tuple(used)
        return
    p = patterns[len(used)]
    for j, c in enumerate(conds):
        if j in used:
            continue
        for _ in _match_cond(p, c, b):
            yield from _embed(patterns, conds, b, used + (j,))


_NAT_RE = re.compile(r"(\d+)")


def _natural(v):
    if isinstance(v, int):
        return (("", v),)
    parts = _NAT_RE.split(v)
    return tuple((parts[i], int(parts[i + 1]) if i + 1 < len(parts) else -1)
                 for i in range(0, len(parts), 2))


class Match(NamedTuple):
    path: tuple
    bindings: dict
    indices: tuple      # matched condition indices, in pattern order


def match_rule(rule: RewriteRule, d: Drs) -> list:
    """All matches of ``rule`` in ``d``: depth-first box order, then binding order."""
    out = []
    for path, box in iter_boxes(d):
        found = {}
        b = {}
        for idx in _embed(rule.match, box.conditions, b):
            key = (tuple(sorted(b.items(), key=lambda kv: kv[0])), frozenset(idx))
            if key not in found:
                found[key] = Match(path, dict(b), idx)
        ordered = sorted(found.values(), key=lambda m: (
            tuple((k, _natural(v)) for k, v in sorted(m.bindings.items())), sorted(m.indices)))
        out.extend(ordered)
    return out


# -- application ------------------------------------------------------------

def _inst(v, b):
    return b[v] if is_meta(v) else v


def instantiate(p, b):
    if isinstance(p, Pred):
        return Pred(_inst(p.ref, b), _inst(p.lemma, b), p.pos, _inst(p.sense, b))
    if isinstance(p, Named):
        return Named(_inst(p.ref, b), _inst(p.name, b), p.cls)
    if isinstance(p, Rel):
        return Rel(_inst(p.ref1, b), _inst(p.ref2, b), _inst(p.label, b))
    if isinstance(p, Eq):
        return Eq(_inst(p.ref1, b), _inst(p.ref2, b))
    boxes = [Drs([_inst(r, b) for r in box.referents], [instantiate(c, b) for c in box.conditions])
             for box in sub_boxes(p)]
    if isinstance(p, Whq):
        return Whq(_inst(p.ref, b), boxes[0])
    return with_sub_boxes(p, boxes)


@dataclass(frozen=True)
class RewriteStep:
    rule: str
    path: tuple
    bindings: dict
    before: tuple           # removed conditions, in pattern order
    after: tuple            # inserted conditions
    removed: tuple          # indices removed from the box (ascending)
    position: int           # insertion index in the box after removal
    fresh: tuple = ()       # referents appended to the box
    lossy: bool = False


@dataclass
class RewriteTrace:
    steps: list = field(default_factory=list)
    iterations: int = 0


def apply_step(d: Drs, step: RewriteStep) -> Drs:
    """Mechanically apply one recorded step; used for rewriting and for trace replay."""
    box = box_at(d, step.path)
    removed = set(step.removed)
    kept = [c for i, c in enumerate(box.conditions) if i not in removed]
    conds = kept[:step.position] + list(step.after) + kept[step.position:]
    return replace_box(d, step.path, Drs(box.referents + tuple(step.fresh), conds))


def replay(d: Drs, trace: RewriteTrace) -> Drs:
    for step in trace.steps:
        d = apply_step(d, step)
    return d


def _fresh_names(d: Drs, count):
    taken = all_names(d)
    out, n = [], 0
    while len(out) < count:
        n += 1
        name = f"f{n}"
        if name not in taken:
            out.append(name)
    return out


def rewrite_once(rule: RewriteRule, d: Drs, match: Match) -> RewriteStep:
    box = box_at(d, match.path)
    b = dict(match.bindings)
    fresh = _fresh_names(d, len(rule.fresh))
    b.update(zip(rule.fresh, fresh))
    after = tuple(instantiate(p, b) for p in rule.replace)
    return RewriteStep(
        rule=rule.name,
        path=match.path,
        bindings=b,
        before=tuple(box.conditions[i] for i in match.indices),
        after=after,
        removed=tuple(sorted(match.indices)),
        position=min(match.indices),
        fresh=tuple(fresh),
        lossy=rule.lossy,
    )


def apply_rules(rules, d: Drs, labels=None, max_iterations: int = 1000):
    """Rewrite ``d`` to a fixpoint; returns ``(drs, trace)``.

    ``labels`` is the set of predicted reduction labels; ``None`` disables
    gating entirely.
    """
    if max_iterations < 1:
        raise ValueError("max_iterations must be >= 1")
    trace = RewriteTrace()
    active = [r for r in rules if r.applicable(labels)]
    while True:
        for rule in active:
            matches = match_rule(rule, d)
            if matches:
                break
        else:
            return d, trace
        if trace.iterations >= max_iterations:
            raise IterationBudgetExceeded(max_iterations)
        step = rewrite_once(rule, d, matches[0])
        d = apply_step(d, step)
        free = free_referents(d)
        if free:
            raise ImproperResult(rule.name, free)
        trace.steps.append(step)
        trace.iterations += 1
