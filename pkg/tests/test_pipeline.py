import io
import json
import random
from dataclasses import replace

import pytest
from hypothesis import given, settings

from cnlreduce.ace import verbalize
from cnlreduce.cli import main
from cnlreduce.drs import Drs, alpha_equivalent, is_proper
from cnlreduce.drstext import parse_drs, serialize_drs
from cnlreduce.errors import ConfigError, EmptyDomain, GoldFormatError, ImproperDrs
from cnlreduce.grammar import analyze
from cnlreduce.logic import FiniteModel, parse_facts
from cnlreduce.normalize import normalize
from cnlreduce.pipeline import (REPORT_FORMAT, REPORT_VERSION, GoldItem, argument_preservation,
                                eval_corpus, load_gold, parse_config, parse_gold, reason,
                                report_lines, run_pipeline, shipped)
from cnlreduce.rewrite import apply_rules, parse_rules

from conftest import HARRIS_REDUCED, HARRIS_SOURCE, HARRIS_SOURCE_TEXT, HARRIS_TARGET_TEXT, R1
from gen import random_sentence, seeds

LOSSY = "rule drop:\nmatch rel(?e,?x,patient)\nreplace nothing"


def cli(args, text=""):
    out, err = io.StringIO(), io.StringIO()
    code = main(args, io.StringIO(text), out, err)
    return code, out.getvalue(), err.getvalue()


def write(tmp_path, name, text):
    p = tmp_path / name
    p.write_text(text, encoding="utf-8")
    return p


# -- config -----------------------------------------------------------------------

def test_shipped_config(cfg):
    assert cfg.model is not None and cfg.rules and cfg.roles
    assert cfg.output == "ace" and not cfg.strict and cfg.max_iterations == 1000


def test_empty_config_is_gate_free(tmp_path):
    cfg = parse_config("", tmp_path)
    assert cfg.model is None and cfg.rules == []


@pytest.mark.parametrize("text", [
    "colour = blue",
    "rules",
    "rules = missing.rules",
    "max_iterations = many",
    "max_iterations = 0",
    "output = xml",
    "strict = maybe",
])
def test_config_errors(tmp_path, text):
    with pytest.raises(ConfigError):
        parse_config(text, tmp_path)


def test_config_with_broken_rule_file(tmp_path):
    write(tmp_path, "bad.rules", "rule x:\nmatch nonsense\nreplace nothing\n")
    with pytest.raises(ConfigError):
        parse_config("rules = bad.rules", tmp_path)


# -- run --------------------------------------------------------------------------

def test_harris_end_to_end(cfg):
    (rep,) = run_pipeline(cfg, [HARRIS_SOURCE_TEXT])
    assert rep.ok
    assert rep.labels == ["jargon"]
    assert serialize_drs(rep.source) == HARRIS_SOURCE
    assert serialize_drs(rep.reduced) == HARRIS_REDUCED
    assert rep.ace == HARRIS_TARGET_TEXT
    assert rep.conformance == ()


def test_empty_stream(cfg):
    assert run_pipeline(cfg, []) == []
    assert run_pipeline(cfg, ["", "   "]) == []


def test_unknown_token_does_not_stop_the_stream(cfg):
    reports = run_pipeline(cfg, ["A zzqqxx barks.", "A dog barks."])
    assert reports[0].error[0] == "UnknownToken"
    assert reports[1].ok and reports[1].ace == "A dog barks."
    assert [r.id for r in reports] == [1, 2]


def test_fol_output(cfg):
    (rep,) = run_pipeline(replace(cfg, output="fol"), [HARRIS_SOURCE_TEXT])
    assert rep.ace is None and rep.fol.startswith("exists x1.")
    assert "modality-erased" in rep.warnings


def test_timings_are_nonnegative(cfg):
    (rep,) = run_pipeline(replace(cfg, output="all"), [HARRIS_SOURCE_TEXT])
    assert set(rep.timings) == {"normalize", "analyze", "anaphora", "classify", "rewrite",
                                "verbalize", "fol"}
    assert all(v >= 0 for v in rep.timings.values())


def test_report_header_and_determinism(cfg):
    lines = ["Harris can teach linguistics on Tuesdays.", "A kid grabs a book.", "A dog a."]
    a = report_lines(run_pipeline(cfg, lines), "ace", timings=False)
    b = report_lines(run_pipeline(cfg, lines), "ace", timings=False)
    assert a == b
    header = json.loads(a[0])
    assert header == {"format": REPORT_FORMAT, "version": REPORT_VERSION, "output": "ace",
                      "timings": False}
    rec = json.loads(a[1])
    assert rec["ace"] == HARRIS_TARGET_TEXT and "timings_us" not in rec
    assert json.loads(a[3])["error"]["type"] == "ParseFailure"


def test_discourse_mode(cfg):
    reports = run_pipeline(cfg, ["A man sees a dog.", "He walks."], discourse=True)
    assert all(r.ok for r in reports)
    assert reports[1].ace == "A man walks."
    assert is_proper(reports[1].source)
    independent = run_pipeline(cfg, ["A man sees a dog.", "He walks."])
    assert independent[1].error[0] == "NoAntecedent"


# -- argument preservation ---------------------------------------------------------

def test_identity_preserves_everything():
    d = parse_drs(HARRIS_SOURCE)
    assert argument_preservation(d, d) == 1.0


def test_no_role_edges_scores_one():
    d = parse_drs("drs([x1],[pred(x1,dog,n,0)])")
    assert argument_preservation(d, Drs((), ())) == 1.0


def test_harris_preservation():
    source = parse_drs(HARRIS_SOURCE)
    reduced, trace = apply_rules(parse_rules(R1), source)
    assert argument_preservation(source, reduced, trace) == 1.0


def test_lossy_patient_deletion():
    source = parse_drs(HARRIS_SOURCE)
    reduced, trace = apply_rules(parse_rules(LOSSY), source)
    assert trace.steps[0].lossy
    assert argument_preservation(source, reduced, trace) == pytest.approx(2 / 3)


def test_verb_substitution_counts_through_trace(lex):
    source = analyze(normalize("A kid grabs a book.", lex)[0], lex)[0]
    rules = parse_rules("rule grab:\nmatch pred(?e,grab,v,?s)\nreplace pred(?e,take,v,0)")
    reduced, trace = apply_rules(rules, source)
    assert argument_preservation(source, reduced, trace) == 1.0
    renamed = parse_drs(serialize_drs(reduced).replace("take", "hold"))
    assert argument_preservation(source, renamed) == 0.0


def test_preservation_requires_proper():
    with pytest.raises(ImproperDrs):
        argument_preservation(parse_drs("drs([],[pred(x1,dog,n,0)])"), Drs((), ()))


@settings(max_examples=150, deadline=None)
@given(seeds())
def test_preservation_identity_on_generated(lex, seed):
    d = analyze(normalize(random_sentence(random.Random(seed)), lex)[0], lex)[0]
    assert argument_preservation(d, d) == 1.0


# -- corpus evaluation ------------------------------------------------------------

def test_harris_gold_pair(cfg):
    r = eval_corpus(cfg, [GoldItem(HARRIS_SOURCE_TEXT, frozenset({"jargon"}), HARRIS_TARGET_TEXT)])
    assert r.exact_match == 1.0 and r.preservation == 1.0 and r.failures == 0


def test_empty_gold(cfg):
    r = eval_corpus(cfg, [])
    assert (r.size, r.exact_match, r.preservation, r.failures) == (0, 0.0, 0.0, 0)
    assert r.classification is None
    json.dumps(r.to_json())
    r.table()


def test_shipped_gold_corpus(cfg):
    gold = load_gold(shipped("gold.tsv"))
    assert len(gold) == 20
    r = eval_corpus(cfg, gold)
    assert r.exact_match == 1.0, r.mismatches
    assert r.preservation == 1.0
    assert r.classification.micro.f1 == 1.0
    assert set(r.timings_total) >= {"normalize", "rewrite", "verbalize"}


@pytest.mark.parametrize("text", ["only one column", "a\tslang\tb"])
def test_gold_format_errors(text):
    with pytest.raises(GoldFormatError):
        parse_gold(text)


# -- reasoning --------------------------------------------------------------------

def test_timetable_question(cfg):
    solutions = reason(cfg, "When can Harris teach a linguistic class?",
                       shipped("timetable.facts"), "csp")
    assert [s["x1"] for s in solutions] == ["tuesday"]


def test_empty_facts(cfg):
    with pytest.raises(EmptyDomain):
        reason(cfg, "When can Harris teach a linguistic class?", FiniteModel(()), "csp")


def test_who_walks(cfg):
    facts = parse_facts("person_n(a).\nperson_n(b).\nwalk_v(w1).\nagent(w1,a).\n")
    assert reason(cfg, "Who walks?", facts, "model") == ["a"]


# -- command line -----------------------------------------------------------------

def test_cli_run_harris():
    code, out, _ = cli(["run"], HARRIS_SOURCE_TEXT + "\n")
    assert code == 0 and out == HARRIS_TARGET_TEXT + "\n"


def test_cli_partial_failure_exit_code():
    code, out, err = cli(["run"], "A zzqqxx barks.\nA dog barks.\n")
    assert code == 2
    assert out.splitlines()[1] == "A dog barks."
    assert "UnknownToken" in err


def test_cli_strict_exit_code():
    code, _, _ = cli(["run", "--strict"], "Every man walks or sleeps.\n")
    assert code == 3


def test_cli_config_error(tmp_path):
    cfgfile = write(tmp_path, "bad.cfg", "colour = blue\n")
    code, _, err = cli(["run", "--config", str(cfgfile)], "A dog barks.\n")
    assert code == 1 and "config error" in err
    assert cli(["run", "--config", str(tmp_path / "absent.cfg")])[0] == 1


def test_cli_reports_identical_without_timings(tmp_path):
    text = "Harris can teach linguistics on Tuesdays.\nA kid grabs a book.\n"
    a, b = tmp_path / "a.jsonl", tmp_path / "b.jsonl"
    cli(["run", "--out", "all", "--report", str(a), "--no-timings"], text)
    cli(["run", "--out", "all", "--report", str(b), "--no-timings"], text)
    assert a.read_bytes() == b.read_bytes()
    assert json.loads(a.read_text().splitlines()[0])["format"] == REPORT_FORMAT


def test_cli_drs_output():
    code, out, _ = cli(["run", "--out", "drs"], HARRIS_SOURCE_TEXT + "\n")
    assert code == 0 and out.strip() == HARRIS_REDUCED


def test_cli_train_and_use_model(tmp_path):
    model = tmp_path / "m.model"
    code, out, _ = cli(["train", "--data", str(shipped("train.tsv")), "--out", str(model),
                        "--epochs", "50"])
    assert code == 0 and model.is_file()
    cfgfile = write(tmp_path, "c.cfg", f"rules = {shipped('default.rules')}\nmodel = {model}\n")
    code, out, _ = cli(["run", "--config", str(cfgfile)], HARRIS_SOURCE_TEXT + "\n")
    assert out.strip() == HARRIS_TARGET_TEXT


def test_cli_eval(tmp_path):
    code, out, _ = cli(["eval", "--gold", str(shipped("gold.tsv")), "--json"])
    assert code == 0
    assert json.loads(out)["exact_match"] == 1.0


def test_cli_reason():
    code, out, _ = cli(["reason", "--facts", str(shipped("timetable.facts")),
                        "--question", "When can Harris teach a linguistic class?"])
    assert code == 0 and out.strip() == "x1=tuesday x3=linguistics_class"


def test_cli_check_ace():
    assert cli(["check-ace", HARRIS_TARGET_TEXT]) == (0, "conformant\n", "")
    code, out, _ = cli(["check-ace", HARRIS_SOURCE_TEXT])
    assert code == 2 and "bare-noun-phrase" in out


# -- stage isolation --------------------------------------------------------------

@settings(max_examples=100, deadline=None)
@given(seed=seeds())
def test_stage_isolation(lex, tmp_path_factory, seed):
    cfg = parse_config("", tmp_path_factory.getbasetemp())
    sentence = random_sentence(random.Random(seed))
    (rep,) = run_pipeline(cfg, [sentence])
    assert rep.ok and rep.trace.steps == []
    again = analyze(normalize(rep.ace, lex)[0], lex)[0]
    assert alpha_equivalent(again, rep.source)
    assert verbalize(again, lex) == rep.ace
