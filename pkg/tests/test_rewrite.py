import itertools
import random

import pytest
from hypothesis import given, settings

from cnlreduce.drs import Drs, Pred, alpha_equivalent, box_at, is_proper, iter_boxes
from cnlreduce.drstext import parse_drs, serialize_drs
from cnlreduce.errors import (FreshClash, ImproperResult, IterationBudgetExceeded,
                              MetavariableRoleClash, RuleSyntaxError, UnboundReplacementVar)
from cnlreduce.grammar import analyze
from cnlreduce.anaphora import resolve_anaphora
from cnlreduce.normalize import normalize
from cnlreduce.pipeline import load_gold, shipped
from cnlreduce.rewrite import (RewriteRule, apply_rules, load_rules, match_rule, parse_rules,
                               replay, serialize_rule)

from conftest import HARRIS_REDUCED, HARRIS_SOURCE, R1
from gen import drs_strategy, random_drs, seeds

CYCLE = """\
rule ab:
match pred(?x,a,n,?s)
replace pred(?x,b,n,0)

rule ba:
match pred(?x,b,n,?s)
replace pred(?x,a,n,0)
"""


@pytest.fixture(scope="module")
def default_rules():
    return load_rules(shipped("default.rules"))


@pytest.fixture(scope="module")
def gold_sources(lex):
    out = []
    for item in load_gold(shipped("gold.tsv")):
        tokens, _ = normalize(item.sentence, lex)
        d, flags = analyze(tokens, lex)
        d, _ = resolve_anaphora(d, flags, lex)
        out.append((item, d))
    return out


# -- parsing ----------------------------------------------------------------------

def test_parse_r1():
    rules = parse_rules(R1)
    assert len(rules) == 1
    r = rules[0]
    assert r.name == "r1" and r.gate == frozenset() and r.fresh == ()
    assert r.match == (Pred("?x", "linguistics", "n", "?s"),)
    assert r.replace == (Pred("?x", "class", "n", 0), Pred("?x", "linguistic", "a", 0))


def test_parse_empty_file():
    assert parse_rules("") == []
    assert parse_rules("# only a comment\n\n") == []


def test_unbound_replacement_variable():
    with pytest.raises(UnboundReplacementVar) as exc:
        parse_rules("rule bad:\nmatch pred(?x,cat,n,0)\nreplace pred(?y,dog,n,0)")
    assert exc.value.rule == "bad" and exc.value.var == "?y"


def test_fresh_makes_variable_bound():
    r = parse_rules("rule ok:\nfresh ?y\nmatch pred(?x,cat,n,0)\n"
                    "replace pred(?x,cat,n,0), pred(?y,dog,n,0), rel(?x,?y,with)")[0]
    assert r.fresh == ("?y",)


def test_fresh_clash():
    with pytest.raises(FreshClash):
        parse_rules("rule bad:\nfresh ?x\nmatch pred(?x,cat,n,0)\nreplace nothing")


def test_metavariable_in_two_slot_kinds():
    with pytest.raises(MetavariableRoleClash):
        parse_rules("rule bad:\nmatch pred(?x,?x,n,0)\nreplace nothing")


@pytest.mark.parametrize("text", [
    "rule r1\nmatch pred(?x,a,n,0)\nreplace nothing",
    "rule r1:\nreplace nothing",
    "rule r1:\nmatch pred(?x,a,n,0)",
    "rule r1:\nwhen slang\nmatch pred(?x,a,n,0)\nreplace nothing",
    "rule r1:\nmatch pred(?x,a,n\nreplace nothing",
    "rule r1:\nmatch pred(?x,a,n,0)\nreplace nothing\nrule r1:\nmatch pred(?x,a,n,0)\nreplace nothing",
])
def test_rule_syntax_errors(text):
    with pytest.raises(RuleSyntaxError):
        parse_rules(text)


def test_serialize_rule_round_trip(default_rules):
    for r in default_rules:
        assert parse_rules(serialize_rule(r)) == [r]


def test_default_rules_lossy_flag(default_rules):
    assert [r.name for r in default_rules if r.lossy] == ["awesome"]


# -- matching ---------------------------------------------------------------------

def test_r1_matches_harris_once():
    d = parse_drs(HARRIS_SOURCE)
    matches = match_rule(parse_rules(R1)[0], d)
    assert len(matches) == 1
    m = matches[0]
    assert m.bindings == {"?x": "x2", "?s": 0}
    assert box_at(d, m.path) == d.conditions[1].inner


def test_no_match_in_empty_drs():
    assert match_rule(parse_rules(R1)[0], Drs((), ())) == []


def test_two_dogs_ordered():
    rule = parse_rules("rule d:\nmatch pred(?x,dog,n,0)\nreplace nothing")[0]
    d = parse_drs("drs([x2,x1],[pred(x2,dog,n,0),pred(x1,dog,n,0)])")
    assert [m.bindings["?x"] for m in match_rule(rule, d)] == ["x1", "x2"]


def test_natural_binding_order():
    rule = parse_rules("rule d:\nmatch pred(?x,dog,n,0)\nreplace nothing")[0]
    d = parse_drs("drs([x10,x9],[pred(x10,dog,n,0),pred(x9,dog,n,0)])")
    assert [m.bindings["?x"] for m in match_rule(rule, d)] == ["x9", "x10"]


def test_match_is_injective():
    rule = parse_rules("rule two:\nmatch pred(?x,dog,n,0), pred(?y,dog,n,0)\nreplace nothing")[0]
    one = parse_drs("drs([x1],[pred(x1,dog,n,0)])")
    assert match_rule(rule, one) == []
    two = parse_drs("drs([x1,x2],[pred(x1,dog,n,0),pred(x2,dog,n,0)])")
    assert len(match_rule(rule, two)) == 2


def _match_oracle(rule, d):
    """Single-pattern matches by trying every condition of every box."""
    (p,) = rule.match
    out = []
    for path, box in iter_boxes(d):
        for c in box.conditions:
            if isinstance(c, Pred) and c.lemma == p.lemma and c.pos == p.pos:
                out.append((path, c.ref))
    return sorted(out, key=lambda t: t[1])


@settings(max_examples=150, deadline=None)
@given(drs_strategy())
def test_single_pattern_matches_agree_with_enumeration(d):
    rule = parse_rules("rule d:\nmatch pred(?x,dog,n,?s)\nreplace nothing")[0]
    found = sorted(((m.path, m.bindings["?x"]) for m in match_rule(rule, d)), key=lambda t: t[1])
    expected = _match_oracle(rule, d)
    assert sorted(set(found)) == sorted(set(expected))


# -- application ------------------------------------------------------------------

def test_no_rules_is_identity():
    d = parse_drs(HARRIS_SOURCE)
    out, trace = apply_rules([], d, {"jargon"})
    assert out == d and trace.steps == [] and trace.iterations == 0


def test_harris_rewrite():
    rule = parse_rules("rule r1:\nwhen jargon\n" + R1.split("\n", 1)[1])
    out, trace = apply_rules(rule, parse_drs(HARRIS_SOURCE), {"jargon"})
    assert serialize_drs(out) == HARRIS_REDUCED
    assert len(trace.steps) == 1
    assert not trace.steps[0].lossy


def test_cycle_exhausts_budget():
    d = parse_drs("drs([x1],[pred(x1,a,n,0)])")
    with pytest.raises(IterationBudgetExceeded) as exc:
        apply_rules(parse_rules(CYCLE), d, max_iterations=50)
    assert exc.value.max_iterations == 50


def test_max_iterations_must_be_positive():
    with pytest.raises(ValueError):
        apply_rules([], Drs((), ()), max_iterations=0)


def test_fresh_referents_are_f_numbered():
    rules = parse_rules("rule own:\nfresh ?y\nmatch pred(?x,man,n,0)\n"
                        "replace pred(?x,person,n,0), pred(?y,dog,n,0), rel(?x,?y,with)")
    d = parse_drs("drs([x1,x2],[pred(x1,man,n,0),pred(x2,man,n,0)])")
    out, trace = apply_rules(rules, d)
    assert out.referents == ("x1", "x2", "f1", "f2")
    assert [s.fresh for s in trace.steps] == [("f1",), ("f2",)]
    assert is_proper(out)


def test_rewrite_inside_nested_box():
    rules = parse_rules("rule kid:\nmatch pred(?x,kid,n,?s)\nreplace pred(?x,child,n,0)")
    d = parse_drs("drs([],[imp(drs([x1],[pred(x1,kid,n,0)]),drs([e1],[pred(e1,walk,v,0),"
                  "rel(e1,x1,agent)]))])")
    out, _ = apply_rules(rules, d)
    assert "pred(x1,child,n,0)" in serialize_drs(out)


def test_improper_result():
    # ?y is declared inside the negated box, so using it outside breaks scope
    rules = parse_rules("rule leak:\nmatch not(drs([?y],[pred(?y,dog,n,0)]))\n"
                        "replace pred(?y,dog,n,0)")
    d = parse_drs("drs([],[not(drs([x1],[pred(x1,dog,n,0)]))])")
    with pytest.raises(ImproperResult) as exc:
        apply_rules(rules, d)
    assert exc.value.rule == "leak" and exc.value.free == ["x1"]


def test_lossy_step_is_flagged():
    rules = parse_rules("rule awesome:\nmatch pred(?x,awesome,a,?s)\nreplace nothing")
    d = parse_drs("drs([x1],[pred(x1,dog,n,0),pred(x1,awesome,a,0)])")
    out, trace = apply_rules(rules, d)
    assert out == parse_drs("drs([x1],[pred(x1,dog,n,0)])")
    assert trace.steps[0].lossy and trace.steps[0].before == (Pred("x1", "awesome", "a", 0),)


# -- gating -----------------------------------------------------------------------

def test_gate_subset_semantics():
    r = RewriteRule("g", (Pred("?x", "a", "n", 0),), (), frozenset({"jargon", "workaround"}))
    assert r.applicable(None)
    assert r.applicable({"jargon", "workaround", "ambiguous"})
    assert not r.applicable({"jargon"})
    assert not r.applicable(set())
    assert RewriteRule("u", r.match).applicable(set())


def test_empty_labels_leave_gated_input_unchanged(default_rules, gold_sources):
    assert all(r.gate for r in default_rules)
    for _, d in gold_sources:
        out, trace = apply_rules(default_rules, d, frozenset())
        assert trace.steps == [] and alpha_equivalent(out, d)


# -- properties over the golden corpus and generated DRSs ------------------------

def test_gold_outputs_are_proper_fixpoints(default_rules, gold_sources):
    for item, d in gold_sources:
        out, trace = apply_rules(default_rules, d, item.labels)
        assert is_proper(out)
        assert replay(d, trace) == out
        again, trace2 = apply_rules(default_rules, out, item.labels)
        assert trace2.steps == [] and again == out


@settings(max_examples=200, deadline=None)
@given(seeds())
def test_replay_and_fixpoint_on_generated(default_rules, seed):
    rng = random.Random(seed)
    d = random_drs(rng, depth=2)
    # plant lemmas the default rules look for
    planted = [Pred(r, rng.choice(("kid", "linguistics", "guy", "maths")), "n", 0)
               for r in d.referents]
    d = Drs(d.referents, list(d.conditions) + planted)
    labels = frozenset(rng.sample(["jargon", "colloquialism", "workaround"], rng.randint(0, 3)))
    out, trace = apply_rules(default_rules, d, labels)
    assert is_proper(out)
    assert replay(d, trace) == out
    assert apply_rules(default_rules, out, labels)[1].steps == []


def _relevant(rules, d):
    """Rules that can fire on ``d`` under some order.

    A rule can only fire if its matched lemma occurs in the input or is
    produced by some replacement.
    """
    lemmas = {c.lemma for _, box in iter_boxes(d) for c in box.conditions if isinstance(c, Pred)}
    lemmas |= {p.lemma for r in rules for p in r.replace if isinstance(p, Pred)}
    return [r for r in rules if all(p.lemma in lemmas for p in r.match)]


def test_default_rules_confluent_on_gold(default_rules, gold_sources):
    for item, d in gold_sources:
        relevant = _relevant(default_rules, d)
        rest = [r for r in default_rules if r not in relevant]
        reference, _ = apply_rules(default_rules, d, item.labels)
        for perm in itertools.permutations(relevant):
            out, _ = apply_rules(list(perm) + rest, d, item.labels)
            assert alpha_equivalent(out, reference), (item.sentence, [r.name for r in perm])
