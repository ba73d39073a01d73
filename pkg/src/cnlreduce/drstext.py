"""Textual notation for DRSs and ``.drs`` documents.

Canonical form has no whitespace::

    drs([x1],[named(x1,harris,per),pos(drs([e1],[pred(e1,teach,v,0)]))])

The same parser reads rewrite-rule patterns when ``meta=True``: referent,
lemma and sense slots may then hold ``?name`` metavariables.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field

from .drs import (ENTITY_CLASSES, POS_TAGS, Drs, Eq, Imp, Named, Not, Or, Pos, Pred, Rel,
                  Whq, sub_boxes)
from .errors import DrsSyntaxError, DuplicateId, UnknownEntityClass, UnknownPos

_TOKEN_RE = re.compile(r"\s*(?:(?P<ident>[a-z][a-z_0-9]*)|(?P<nat>[0-9]+)|(?P<meta>\?[a-z][a-z_0-9]*)"
                       r"|(?P<punct>[()\[\],]))")
_REF_RE = re.compile(r"[a-z][a-z0-9]*\Z")


class _Parser:
    def __init__(self, text, meta=False, line_offset=0):
        self.text = text
        self.meta = meta
        self.line_offset = line_offset
        self.pos = 0

    # -- low level ----------------------------------------------------------

    def _where(self, pos):
        line = self.text.count("\n", 0, pos) + 1
        col = pos - (self.text.rfind("\n", 0, pos) + 1) + 1
        return line + self.line_offset, col

    def _skip_ws(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def fail(self, expected, cls=DrsSyntaxError, at=None):
        self._skip_ws()
        at = self.pos if at is None else at
        line, col = self._where(at)
        found = self.text[at:at + 1] or "end of input"
        raise cls(line, col, expected, found)

    def _peek(self):
        m = _TOKEN_RE.match(self.text, self.pos)
        if not m or m.end() == m.start():
            return None, None, self.pos
        kind = m.lastgroup
        return kind, m.group(kind), m.end()

    def punct(self, ch):
        kind, val, end = self._peek()
        if kind != "punct" or val != ch:
            self.fail(repr(ch))
        self.pos = end

    def try_punct(self, ch):
        kind, val, end = self._peek()
        if kind == "punct" and val == ch:
            self.pos = end
            return True
        return False

    def ident(self, expected="identifier"):
        kind, val, end = self._peek()
        if kind != "ident":
            self.fail(expected)
        start = self.pos
        self.pos = end
        return val, start

    def keyword(self, word):
        kind, val, end = self._peek()
        if kind != "ident" or val != word:
            self.fail(repr(word))
        self.pos = end

    def _metavar(self):
        kind, val, end = self._peek()
        if self.meta and kind == "meta":
            self.pos = end
            return val
        return None

    # -- slots --------------------------------------------------------------

    def ref(self):
        mv = self._metavar()
        if mv:
            return mv
        val, start = self.ident("referent")
        if not _REF_RE.match(val):
            self.pos = start
            self.fail("referent")
        return val

    def lemma(self):
        mv = self._metavar()
        if mv:
            return mv
        return self.ident("lemma")[0]

    def nat(self):
        mv = self._metavar()
        if mv:
            return mv
        kind, val, end = self._peek()
        if kind != "nat":
            self.fail("natural number")
        self.pos = end
        return int(val)

    def pos_tag(self):
        val, start = self.ident("part of speech")
        if val not in POS_TAGS:
            self.fail("one of n, v, a, r", UnknownPos, at=start)
        return val

    def entity_class(self):
        val, start = self.ident("entity class")
        if val not in ENTITY_CLASSES:
            self.fail("one of " + ", ".join(ENTITY_CLASSES), UnknownEntityClass, at=start)
        return val

    # -- grammar ------------------------------------------------------------

    def drs(self):
        self.keyword("drs")
        self.punct("(")
        self.punct("[")
        refs = []
        if not self.try_punct("]"):
            refs.append(self.ref())
            while self.try_punct(","):
                refs.append(self.ref())
            self.punct("]")
        self.punct(",")
        conds = self.condlist()
        self.punct(")")
        return Drs(refs, conds)

    def condlist(self):
        self.punct("[")
        conds = []
        if not self.try_punct("]"):
            conds.append(self.cond())
            while self.try_punct(","):
                conds.append(self.cond())
            self.punct("]")
        return conds

    def cond(self):
        self._skip_ws()
        start = self.pos
        head, _ = self.ident("condition")
        self.punct("(")
        if head == "pred":
            r = self.ref(); self.punct(",")
            lemma = self.lemma(); self.punct(",")
            pos = self.pos_tag(); self.punct(",")
            c = Pred(r, lemma, pos, self.nat())
        elif head == "named":
            r = self.ref(); self.punct(",")
            name = self.lemma(); self.punct(",")
            c = Named(r, name, self.entity_class())
        elif head == "rel":
            r1 = self.ref(); self.punct(",")
            r2 = self.ref(); self.punct(",")
            c = Rel(r1, r2, self.lemma())
        elif head == "eq":
            r1 = self.ref(); self.punct(",")
            c = Eq(r1, self.ref())
        elif head == "not":
            c = Not(self.drs())
        elif head == "pos":
            c = Pos(self.drs())
        elif head == "imp":
            a = self.drs(); self.punct(",")
            c = Imp(a, self.drs())
        elif head == "or":
            a = self.drs(); self.punct(",")
            c = Or(a, self.drs())
        elif head == "whq":
            r = self.ref(); self.punct(",")
            c = Whq(r, self.drs())
        else:
            self.pos = start
            self.fail("pred, named, rel, eq, not, pos, imp, or or whq")
        self.punct(")")
        return c

    def end(self):
        self._skip_ws()
        if self.pos != len(self.text):
            self.fail("end of input")


def parse_drs(text: str) -> Drs:
    p = _Parser(text)
    d = p.drs()
    p.end()
    return d


def parse_condition(text: str, meta=False, line_offset=0):
    """Parse a single condition; used by the rule-file reader."""
    p = _Parser(text, meta=meta, line_offset=line_offset)
    c = p.cond()
    p.end()
    return c


def parse_condlist(text: str, meta=False, line_offset=0):
    """Parse a bare comma-separated condition sequence (no brackets)."""
    p = _Parser(text, meta=meta, line_offset=line_offset)
    conds = [p.cond()]
    while p.try_punct(","):
        conds.append(p.cond())
    p.end()
    return conds


# -- serialization ----------------------------------------------------------

def serialize_condition(c) -> str:
    if isinstance(c, Pred):
        return f"pred({c.ref},{c.lemma},{c.pos},{c.sense})"
    if isinstance(c, Named):
        return f"named({c.ref},{c.name},{c.cls})"
    if isinstance(c, Rel):
        return f"rel({c.ref1},{c.ref2},{c.label})"
    if isinstance(c, Eq):
        return f"eq({c.ref1},{c.ref2})"
    if isinstance(c, Whq):
        return f"whq({c.ref},{serialize_drs(c.body)})"
    name = type(c).__name__.lower()
    return f"{name}({','.join(serialize_drs(b) for b in sub_boxes(c))})"


def serialize_drs(d: Drs) -> str:
    return f"drs([{','.join(d.referents)}],[{','.join(serialize_condition(c) for c in d.conditions)}])"


def pretty_drs(d: Drs, indent=0) -> str:
    """Indented multi-line rendering for humans; never used in golden files."""
    pad = "  " * indent
    lines = [f"{pad}drs([{', '.join(d.referents)}], ["]
    for i, c in enumerate(d.conditions):
        tail = "," if i < len(d.conditions) - 1 else ""
        boxes = sub_boxes(c)
        if not boxes:
            lines.append(f"{pad}  {serialize_condition(c)}{tail}")
            continue
        head = f"whq({c.ref}," if isinstance(c, Whq) else f"{type(c).__name__.lower()}("
        lines.append(f"{pad}  {head}")
        for j, b in enumerate(boxes):
            sep = "," if j < len(boxes) - 1 else ""
            lines.append(pretty_drs(b, indent + 2) + sep)
        lines.append(f"{pad}  ){tail}")
    lines.append(f"{pad}])")
    return "\n".join(lines)


# -- documents --------------------------------------------------------------

@dataclass
class DrsDocument:
    items: list = field(default_factory=list)

    def __post_init__(self):
        seen = set()
        for ident, _ in self.items:
            if ident in seen:
                raise DuplicateId(ident)
            seen.add(ident)

    def __getitem__(self, ident):
        for i, d in self.items:
            if i == ident:
                return d
        raise KeyError(ident)

    def ids(self):
        return [i for i, _ in self.items]


def parse_document(text: str) -> DrsDocument:
    items = []
    seen = set()
    lines = text.split("\n")
    i = 0
    while i < len(lines):
        line = lines[i]
        if not line.strip():
            i += 1
            continue
        if not line.startswith("# "):
            raise DrsSyntaxError(i + 1, 1, "'# id' header", line[:1])
        ident = line[2:].strip()
        if not ident or any(ch.isspace() for ch in ident):
            raise DrsSyntaxError(i + 1, 3, "document id")
        if ident in seen:
            raise DuplicateId(ident)
        seen.add(ident)
        start = i + 1
        body = []
        i += 1
        while i < len(lines) and lines[i].strip():
            body.append(lines[i])
            i += 1
        if not body:
            raise DrsSyntaxError(start + 1, 1, "serialized DRS")
        p = _Parser("\n".join(body), line_offset=start)
        d = p.drs()
        p.end()
        items.append((ident, d))
    return DrsDocument(items)


def serialize_document(doc: DrsDocument) -> str:
    return "\n".join(f"# {ident}\n{serialize_drs(d)}\n" for ident, d in doc.items)
