"""Discourse Representation Structures.

A DRS is a box of discourse referents plus a list of conditions.  Conditions
are either atomic (``Pred``, ``Named``, ``Rel``, ``Eq``) or complex operators
holding sub-boxes (``Not``, ``Pos``, ``Imp``, ``Or``, ``Whq``).  Every value
here is immutable; operations return new values.

Accessibility: a condition inside box K may use referents declared in K, in
any ancestor of K, and, when K is the consequent of an ``Imp``, in the
matching antecedent.  ``Whq(x, K)`` binds ``x`` for ``K``.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterator, Union

from .errors import DuplicateReferent, ImproperDrs, ReferentClash

REFERENT_RE = re.compile(r"[a-z][a-z0-9]*\Z")
LEMMA_RE = re.compile(r"[a-z][a-z_0-9]*\Z")
POS_TAGS = ("n", "v", "a", "r")
ENTITY_CLASSES = ("per", "org", "loc", "tim", "obj")
ROLE_LABELS = ("agent", "patient", "recipient")


@dataclass(frozen=True)
class Pred:
    ref: str
    lemma: str
    pos: str
    sense: int = 0


@dataclass(frozen=True)
class Named:
    ref: str
    name: str
    cls: str


@dataclass(frozen=True)
class Rel:
    ref1: str
    ref2: str
    label: str


@dataclass(frozen=True)
class Eq:
    ref1: str
    ref2: str


@dataclass(frozen=True)
class Not:
    inner: "Drs"


@dataclass(frozen=True)
class Pos:
    inner: "Drs"


@dataclass(frozen=True)
class Imp:
    antecedent: "Drs"
    consequent: "Drs"


@dataclass(frozen=True)
class Or:
    left: "Drs"
    right: "Drs"


@dataclass(frozen=True)
class Whq:
    ref: str
    body: "Drs"


Condition = Union[Pred, Named, Rel, Eq, Not, Pos, Imp, Or, Whq]
ATOMIC = (Pred, Named, Rel, Eq)
COMPLEX = (Not, Pos, Imp, Or, Whq)


@dataclass(frozen=True)
class Drs:
    referents: tuple = ()
    conditions: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "referents", tuple(self.referents))
        object.__setattr__(self, "conditions", tuple(self.conditions))
        seen = set()
        for r in self.referents:
            if r in seen:
                raise DuplicateReferent(r)
            seen.add(r)

    def __str__(self):
        from .drstext import serialize_drs
        return serialize_drs(self)


EMPTY = Drs()


def make_drs(referents=(), conditions=()) -> Drs:
    """Build a box, rejecting duplicate or malformed referent names."""
    for r in referents:
        if not isinstance(r, str) or not REFERENT_RE.match(r):
            raise ValueError(f"invalid referent name {r!r}")
    return Drs(tuple(referents), tuple(conditions))


# -- structural helpers -----------------------------------------------------

def atom_refs(cond) -> tuple:
    """Referents used directly by an atomic condition (empty for complex ones)."""
    if isinstance(cond, (Pred, Named)):
        return (cond.ref,)
    if isinstance(cond, (Rel, Eq)):
        return (cond.ref1, cond.ref2)
    return ()


def sub_boxes(cond) -> tuple:
    if isinstance(cond, (Not, Pos)):
        return (cond.inner,)
    if isinstance(cond, Imp):
        return (cond.antecedent, cond.consequent)
    if isinstance(cond, Or):
        return (cond.left, cond.right)
    if isinstance(cond, Whq):
        return (cond.body,)
    return ()


def with_sub_boxes(cond, boxes):
    """Return ``cond`` with its sub-boxes replaced, in ``sub_boxes`` order."""
    if isinstance(cond, Not):
        return Not(boxes[0])
    if isinstance(cond, Pos):
        return Pos(boxes[0])
    if isinstance(cond, Imp):
        return Imp(boxes[0], boxes[1])
    if isinstance(cond, Or):
        return Or(boxes[0], boxes[1])
    if isinstance(cond, Whq):
        return Whq(cond.ref, boxes[0])
    raise TypeError(f"{type(cond).__name__} has no sub-boxes")


def iter_boxes(d: Drs, path=()) -> Iterator[tuple]:
    """Yield ``(path, box)`` for every box, depth first, root first.

    A path is a tuple of ``(condition_index, slot)`` steps from the root.
    """
    yield path, d
    for i, cond in enumerate(d.conditions):
        for slot, box in enumerate(sub_boxes(cond)):
            yield from iter_boxes(box, path + ((i, slot),))


def box_at(d: Drs, path) -> Drs:
    for i, slot in path:
        d = sub_boxes(d.conditions[i])[slot]
    return d


def replace_box(d: Drs, path, new: Drs) -> Drs:
    if not path:
        return new
    (i, slot), rest = path[0], path[1:]
    cond = d.conditions[i]
    boxes = list(sub_boxes(cond))
    boxes[slot] = replace_box(boxes[slot], rest, new)
    conds = list(d.conditions)
    conds[i] = with_sub_boxes(cond, boxes)
    return Drs(d.referents, conds)


def all_names(d: Drs) -> set:
    """Every referent name declared or used anywhere in ``d``."""
    names = set()
    for _, box in iter_boxes(d):
        names.update(box.referents)
        for cond in box.conditions:
            names.update(atom_refs(cond))
            if isinstance(cond, Whq):
                names.add(cond.ref)
    return names


def declared_in_order(d: Drs) -> list:
    """Declared referents (and wh-binders) in depth-first introduction order."""
    out = []
    for _, box in iter_boxes(d):
        out.extend(box.referents)
        out.extend(c.ref for c in box.conditions if isinstance(c, Whq))
    return out


def rename(d: Drs, mapping: dict) -> Drs:
    """Rename referents everywhere (declarations included); unmapped names stay."""
    def r(x):
        return mapping.get(x, x)

    conds = []
    for c in d.conditions:
        if isinstance(c, Pred):
            c = Pred(r(c.ref), c.lemma, c.pos, c.sense)
        elif isinstance(c, Named):
            c = Named(r(c.ref), c.name, c.cls)
        elif isinstance(c, Rel):
            c = Rel(r(c.ref1), r(c.ref2), c.label)
        elif isinstance(c, Eq):
            c = Eq(r(c.ref1), r(c.ref2))
        elif isinstance(c, Whq):
            c = Whq(r(c.ref), rename(c.body, mapping))
        else:
            c = with_sub_boxes(c, [rename(b, mapping) for b in sub_boxes(c)])
        conds.append(c)
    return Drs([r(x) for x in d.referents], conds)


def count_conditions(d: Drs) -> int:
    return sum(len(box.conditions) for _, box in iter_boxes(d))


# -- properness -------------------------------------------------------------

def _free(d: Drs, outer: frozenset, acc: set):
    here = outer | frozenset(d.referents)
    for c in d.conditions:
        for r in atom_refs(c):
            if r not in here:
                acc.add(r)
        if isinstance(c, Imp):
            _free(c.antecedent, here, acc)
            _free(c.consequent, here | frozenset(c.antecedent.referents), acc)
        elif isinstance(c, Whq):
            _free(c.body, here | {c.ref}, acc)
        else:
            for box in sub_boxes(c):
                _free(box, here, acc)


def free_referents(d: Drs) -> set:
    acc = set()
    _free(d, frozenset(), acc)
    return acc


def is_proper(d: Drs) -> bool:
    return not free_referents(d)


def accessible_at(d: Drs, path) -> list:
    """Referents accessible from inside the box at ``path``, outermost first."""
    out = []
    box = d
    out.extend(box.referents)
    for i, slot in path:
        cond = box.conditions[i]
        if isinstance(cond, Imp) and slot == 1:
            out.extend(cond.antecedent.referents)
        if isinstance(cond, Whq):
            out.append(cond.ref)
        box = sub_boxes(cond)[slot]
        out.extend(box.referents)
    return out


# -- merge ------------------------------------------------------------------

def merge(a: Drs, b: Drs) -> Drs:
    clash = set(a.referents) & set(b.referents)
    if clash:
        raise ReferentClash(min(clash))
    return Drs(a.referents + b.referents, a.conditions + b.conditions)


def fresh_renaming(d: Drs, taken: set) -> dict:
    """Map every name in ``d`` colliding with ``taken`` to an unused name with the same prefix."""
    used = set(taken) | all_names(d)
    mapping = {}
    for name in sorted(all_names(d)):
        if name not in taken:
            continue
        prefix = name.rstrip("0123456789") or "x"
        n = 1
        while f"{prefix}{n}" in used:
            n += 1
        new = f"{prefix}{n}"
        used.add(new)
        mapping[name] = new
    return mapping


# -- alpha-equivalence ------------------------------------------------------

def _atom_key(c):
    if isinstance(c, Pred):
        return ("pred", c.lemma, c.pos, c.sense)
    if isinstance(c, Named):
        return ("named", c.name, c.cls)
    if isinstance(c, Rel):
        return ("rel", c.label)
    if isinstance(c, Eq):
        return ("eq",)
    return (type(c).__name__.lower(),)


def _bind(mapping, inverse, x, y):
    """Extend the bijection with x -> y; return the list of new pairs or None."""
    if x in mapping:
        return [] if mapping[x] == y else None
    if y in inverse:
        return None
    mapping[x] = y
    inverse[y] = x
    return [x]


def _unbind(mapping, inverse, added):
    for x in added:
        del inverse[mapping.pop(x)]


def _match_cond(a, b, mapping, inverse):
    """Generator: yields once per way ``a`` can be mapped onto ``b``."""
    if type(a) is not type(b) or _atom_key(a) != _atom_key(b):
        return
    if isinstance(a, ATOMIC):
        added = []
        ok = True
        for x, y in zip(atom_refs(a), atom_refs(b)):
            new = _bind(mapping, inverse, x, y)
            if new is None:
                ok = False
                break
            added.extend(new)
        if ok:
            yield
        _unbind(mapping, inverse, added)
        return
    if isinstance(a, Whq):
        added = _bind(mapping, inverse, a.ref, b.ref)
        if added is None:
            return
        yield from _match_box(a.body, b.body, mapping, inverse)
        _unbind(mapping, inverse, added)
        return
    boxes_a, boxes_b = sub_boxes(a), sub_boxes(b)

    def chain(k):
        if k == len(boxes_a):
            yield
            return
        for _ in _match_box(boxes_a[k], boxes_b[k], mapping, inverse):
            yield from chain(k + 1)

    yield from chain(0)


def _match_box(a: Drs, b: Drs, mapping, inverse):
    if len(a.referents) != len(b.referents) or len(a.conditions) != len(b.conditions):
        return
    # atomic conditions first: they bind referents cheaply and prune early
    order = sorted(range(len(a.conditions)), key=lambda i: isinstance(a.conditions[i], COMPLEX))
    used = [False] * len(b.conditions)
    refs_b = set(b.referents)

    def assign(pending):
        # declared referents not yet bound by a use; try every free target
        if not pending:
            yield
            return
        x, rest = pending[0], pending[1:]
        if x in mapping:
            if mapping[x] in refs_b:
                yield from assign(rest)
            return
        for y in b.referents:
            if y in inverse:
                continue
            _bind(mapping, inverse, x, y)
            yield from assign(rest)
            _unbind(mapping, inverse, [x])

    def step(k):
        if k == len(order):
            yield from assign(a.referents)
            return
        ca = a.conditions[order[k]]
        for j, cb in enumerate(b.conditions):
            if used[j]:
                continue
            used[j] = True
            for _ in _match_cond(ca, cb, mapping, inverse):
                yield from step(k + 1)
            used[j] = False

    yield from step(0)


def alpha_mapping(a: Drs, b: Drs):
    """Return a referent bijection mapping ``a`` onto ``b``, or None."""
    for d in (a, b):
        free = free_referents(d)
        if free:
            raise ImproperDrs(free)
    mapping, inverse = {}, {}
    for _ in _match_box(a, b, mapping, inverse):
        return dict(mapping)
    return None


def alpha_equivalent(a: Drs, b: Drs) -> bool:
    return alpha_mapping(a, b) is not None


def collapse_equalities(d: Drs) -> Drs:
    """Remove ``Eq(x, y)`` conditions by renaming ``x`` to ``y`` and dropping x's declaration."""
    while True:
        eq = next(((path, i, c) for path, box in iter_boxes(d)
                   for i, c in enumerate(box.conditions) if isinstance(c, Eq)), None)
        if eq is None:
            return d
        path, i, c = eq
        box = box_at(d, path)
        d = replace_box(d, path, Drs(box.referents, box.conditions[:i] + box.conditions[i + 1:]))
        if c.ref1 == c.ref2:
            continue
        d = _drop_declaration(rename_uses(d, {c.ref1: c.ref2}), c.ref1)


def rename_uses(d: Drs, mapping: dict) -> Drs:
    """Rename referent uses in conditions, leaving declarations untouched."""
    conds = []
    for c in d.conditions:
        if isinstance(c, ATOMIC):
            c = rename(Drs((), (c,)), mapping).conditions[0]
        elif isinstance(c, Whq):
            c = Whq(c.ref, rename_uses(c.body, mapping))
        else:
            c = with_sub_boxes(c, [rename_uses(b, mapping) for b in sub_boxes(c)])
        conds.append(c)
    return Drs(d.referents, conds)


def _drop_declaration(d: Drs, name) -> Drs:
    conds = []
    for c in d.conditions:
        if isinstance(c, COMPLEX):
            c = with_sub_boxes(c, [_drop_declaration(b, name) for b in sub_boxes(c)])
        conds.append(c)
    return Drs([r for r in d.referents if r != name], conds)
