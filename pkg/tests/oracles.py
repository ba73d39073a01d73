"""Independent brute-force reference implementations used as test oracles."""
import itertools
from collections import Counter

from cnlreduce.drs import Drs, Eq, Imp, Named, Not, Or, Pos, Pred, Rel, Whq


# -- scope ---------------------------------------------------------------------

def free_by_walk(d: Drs):
    """Free referents by explicit environment passing; written without the library's helpers."""
    out = set()

    def uses(c):
        if isinstance(c, Pred) or isinstance(c, Named):
            return [c.ref]
        if isinstance(c, (Rel, Eq)):
            return [c.ref1, c.ref2]
        return []

    def walk(box, env):
        env = env | set(box.referents)
        for c in box.conditions:
            out.update(r for r in uses(c) if r not in env)
            if isinstance(c, (Not, Pos)):
                walk(c.inner, env)
            elif isinstance(c, Or):
                walk(c.left, env)
                walk(c.right, env)
            elif isinstance(c, Imp):
                walk(c.antecedent, env)
                walk(c.consequent, env | set(c.antecedent.referents))
            elif isinstance(c, Whq):
                walk(c.body, env | {c.ref})

    walk(d, set())
    return out


# -- alpha-equivalence by trying every bijection -----------------------------

def _names(d: Drs, acc):
    acc.extend(d.referents)
    for c in d.conditions:
        if isinstance(c, Whq):
            acc.append(c.ref)
            _names(c.body, acc)
        for attr in ("inner", "antecedent", "consequent", "left", "right"):
            if hasattr(c, attr):
                _names(getattr(c, attr), acc)
    return acc


def _canon(d: Drs, m):
    def cond(c):
        if isinstance(c, Pred):
            return ("pred", m(c.ref), c.lemma, c.pos, c.sense)
        if isinstance(c, Named):
            return ("named", m(c.ref), c.name, c.cls)
        if isinstance(c, Rel):
            return ("rel", m(c.ref1), m(c.ref2), c.label)
        if isinstance(c, Eq):
            return ("eq", m(c.ref1), m(c.ref2))
        if isinstance(c, Not):
            return ("not", _canon(c.inner, m))
        if isinstance(c, Pos):
            return ("pos", _canon(c.inner, m))
        if isinstance(c, Imp):
            return ("imp", _canon(c.antecedent, m), _canon(c.consequent, m))
        if isinstance(c, Or):
            return ("or", _canon(c.left, m), _canon(c.right, m))
        return ("whq", m(c.ref), _canon(c.body, m))
    return (frozenset(m(r) for r in d.referents),
            frozenset(Counter(cond(c) for c in d.conditions).items()))


def alpha_by_permutation(a: Drs, b: Drs) -> bool:
    na = sorted(set(_names(a, [])) | set(free_by_walk(a)))
    nb = sorted(set(_names(b, [])) | set(free_by_walk(b)))
    if len(na) != len(nb):
        return False
    target = _canon(b, lambda r: r)
    for perm in itertools.permutations(nb):
        mapping = dict(zip(na, perm))
        if _canon(a, lambda r: mapping.get(r, r)) == target:
            return True
    return False


# -- embedding semantics -------------------------------------------------------

def _holds(c, f, domain, interp):
    if isinstance(c, Pred):
        return (f[c.ref],) in interp.get(f"{c.lemma}_{c.pos}", ())
    if isinstance(c, Named):
        return (f[c.ref],) in interp.get(f"named_{c.cls}_{c.name}", ())
    if isinstance(c, Rel):
        return (f[c.ref1], f[c.ref2]) in interp.get(c.label, ())
    if isinstance(c, Eq):
        return f[c.ref1] == f[c.ref2]
    if isinstance(c, Not):
        return not any(True for _ in _verifying(c.inner, f, domain, interp))
    if isinstance(c, Or):
        return (any(True for _ in _verifying(c.left, f, domain, interp))
                or any(True for _ in _verifying(c.right, f, domain, interp)))
    if isinstance(c, Imp):
        return all(any(True for _ in _verifying(c.consequent, h, domain, interp))
                   for h in _verifying(c.antecedent, f, domain, interp))
    raise ValueError(f"oracle does not cover {c!r}")


def _verifying(box, f, domain, interp):
    """Every extension of ``f`` to ``box``'s referents that verifies all its conditions."""
    for values in itertools.product(domain, repeat=len(box.referents)):
        g = dict(f)
        g.update(zip(box.referents, values))
        if all(_holds(c, g, domain, interp) for c in box.conditions):
            yield g


def drs_true(d: Drs, domain, interp) -> bool:
    """A DRS is true in a model iff some embedding of its referents verifies it."""
    return any(True for _ in _verifying(d, {}, domain, interp))


# -- edit distance 1 by explicit enumeration -----------------------------------

def edit1(word, alphabet="abcdefghijklmnopqrstuvwxyz"):
    out = set()
    for i in range(len(word) + 1):
        for ch in alphabet:
            out.add(word[:i] + ch + word[i:])
    for i in range(len(word)):
        out.add(word[:i] + word[i + 1:])
        for ch in alphabet:
            out.add(word[:i] + ch + word[i + 1:])
    for i in range(len(word) - 1):
        out.add(word[:i] + word[i + 1] + word[i] + word[i + 2:])
    out.discard(word)
    return out


# -- CSP by cartesian product --------------------------------------------------

def csp_brute(c):
    names = [v for v, _ in c.variables]
    out = []
    for values in itertools.product(*[dom for _, dom in c.variables]):
        a = dict(zip(names, values))
        if all(a[v] in allowed for v, allowed in c.unary) and \
                all((a[x], a[y]) in pairs for x, y, _, pairs in c.binary):
            out.append(a)
    return out
