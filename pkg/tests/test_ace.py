import random

import pytest
from hypothesis import given, settings

from cnlreduce.ace import check_ace, constraint_table, roundtrip_check, verbalize
from cnlreduce.drs import alpha_equivalent
from cnlreduce.drstext import parse_drs
from cnlreduce.errors import ImproperDrs, NotVerbalizable
from cnlreduce.grammar import analyze
from cnlreduce.normalize import normalize

from conftest import HARRIS_REDUCED, HARRIS_SOURCE_TEXT, HARRIS_TARGET_TEXT
from gen import random_sentence, seeds

DOG_BARKS = "drs([x1,e1],[pred(x1,dog,n,0),pred(e1,bark,v,0),rel(e1,x1,agent)])"
EVERY_MAN = ("drs([],[imp(drs([x1],[pred(x1,man,n,0)]),"
             "drs([e1],[pred(e1,walk,v,0),rel(e1,x1,agent)]))])")


def analyzed(text, lex):
    return analyze(normalize(text, lex)[0], lex)[0]


def constraints(result):
    return [c for _, c in result.violations]


# -- verbalize --------------------------------------------------------------------

def test_harris_target(lex):
    assert verbalize(parse_drs(HARRIS_REDUCED), lex) == HARRIS_TARGET_TEXT


def test_dog_barks(lex):
    assert verbalize(parse_drs(DOG_BARKS), lex) == "A dog barks."


def test_every_man_walks(lex):
    assert verbalize(parse_drs(EVERY_MAN), lex) == "Every man walks."


@pytest.mark.parametrize("text", [
    "No woman sleeps.",
    "Sue does not read a book.",
    "Sue can not read a book.",
    "Mary gives a book to John.",
    "An old man sees a big red car.",
    "Harris teaches a student on Monday in a room.",
])
def test_surface_forms_are_reproduced(lex, text):
    assert verbalize(analyzed(text, lex), lex) == text


def test_or_is_not_verbalizable(lex):
    d = parse_drs(f"drs([],[or({DOG_BARKS},{DOG_BARKS})])")
    with pytest.raises(NotVerbalizable) as exc:
        verbalize(d, lex)
    assert exc.value.reason == "or-unsupported"
    with pytest.raises(NotVerbalizable):
        roundtrip_check(d, lex)


def test_question_is_not_verbalizable(lex):
    d = parse_drs("drs([],[whq(x1,drs([],[pred(x1,person,n,0)]))])")
    with pytest.raises(NotVerbalizable):
        verbalize(d, lex)


def test_two_agents_are_not_verbalizable(lex):
    d = parse_drs("drs([x1,x2,e1,e2],[pred(x1,dog,n,0),pred(x2,cat,n,0),pred(e1,bark,v,0),"
                  "rel(e1,x1,agent),pred(e2,sleep,v,0),rel(e2,x2,agent)])")
    with pytest.raises(NotVerbalizable):
        verbalize(d, lex)


def test_improper_input(lex):
    with pytest.raises(ImproperDrs):
        verbalize(parse_drs("drs([],[pred(x1,dog,n,0)])"), lex)


# -- check_ace --------------------------------------------------------------------

def test_constraint_table_is_shipped():
    table = constraint_table()
    assert {"empty-input", "bare-noun-phrase", "unresolved-pronoun"} <= set(table)


def test_harris_target_conformant(lex):
    r = check_ace(HARRIS_TARGET_TEXT, lex)
    assert r.conformant and r.violations == ()


def test_harris_source_has_bare_noun_phrase(lex):
    r = check_ace(HARRIS_SOURCE_TEXT, lex)
    assert not r.conformant
    assert (3, "bare-noun-phrase") in r.violations


def test_empty_text(lex):
    r = check_ace("", lex)
    assert not r.conformant and constraints(r) == ["empty-input"]


@pytest.mark.parametrize("text,constraint", [
    ("A dog barks", "missing-terminal-period"),
    ("a dog barks.", "initial-capital"),
    ("A dog sees harris.", "proper-name-case"),
    ("A blorf barks.", "unknown-token"),
    ("A dog sees.", "valency-mismatch"),
    ("A dog a barks.", "parse-failure"),
    ("A man sees a dog. He walks.", "multiple-sentences"),
    ("He walks.", "unresolved-pronoun"),
    ("Who walks?", "question-form"),
])
def test_single_violation(lex, text, constraint):
    r = check_ace(text, lex)
    assert not r.conformant
    assert constraint in constraints(r)


# -- roundtrip --------------------------------------------------------------------

def test_roundtrip_examples(lex):
    assert roundtrip_check(parse_drs(DOG_BARKS), lex)
    assert roundtrip_check(parse_drs(HARRIS_REDUCED), lex)
    assert roundtrip_check(parse_drs(EVERY_MAN), lex)


def test_two_nouns_on_one_referent(lex):
    d = parse_drs("drs([x1,e1],[pred(x1,dog,n,0),pred(x1,cat,n,0),pred(e1,bark,v,0),"
                  "rel(e1,x1,agent)])")
    with pytest.raises(NotVerbalizable):
        verbalize(d, lex)


def test_roundtrip_detects_lost_sense(lex):
    # the surface string cannot carry a non-default word sense
    d = parse_drs(DOG_BARKS.replace("dog,n,0", "dog,n,3"))
    assert verbalize(d, lex) == "A dog barks."
    assert not roundtrip_check(d, lex)


@settings(max_examples=250, deadline=None)
@given(seeds())
def test_generated_drs_verbalize_conformant_and_round_trip(lex, seed):
    d = analyzed(random_sentence(random.Random(seed)), lex)
    text = verbalize(d, lex)
    assert check_ace(text, lex).conformant, text
    assert roundtrip_check(d, lex), text


def test_verbalize_is_injective_on_generated_suite(lex):
    seen = {}
    rng = random.Random(2024)
    for _ in range(300):
        d = analyzed(random_sentence(rng), lex)
        text = verbalize(d, lex)
        assert verbalize(d, lex) == text
        if text in seen:
            assert alpha_equivalent(seen[text], d), text
        else:
            for other_text, other in seen.items():
                if alpha_equivalent(other, d):
                    pytest.fail(f"{text!r} and {other_text!r} come from equivalent DRSs")
            seen[text] = d
    assert len(seen) > 200
