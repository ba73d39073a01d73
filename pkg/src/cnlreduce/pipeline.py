"""End-to-end processing: normalize, analyze, classify, rewrite, verbalize, reason.

Config files are plain ``key = value`` lines (``#`` comments allowed)::

    lexicon = lexicon.tsv        # optional, defaults to the shipped lexicon
    rules = default.rules        # optional, no rules if absent
    model = reduction.model         # optional, absent means gate-free rewriting
    roles = roles.tsv            # optional, used by the CSP reasoner
    max_iterations = 1000
    output = ace                 # ace | drs | fol | all
    strict = no                  # yes: NotVerbalizable is a sentence failure

Relative paths are resolved against the config file's directory.
"""
from __future__ import annotations

import json
import time
from contextlib import contextmanager
from dataclasses import dataclass, field, replace
from importlib import resources
from pathlib import Path

from .ace import check_ace, verbalize
from .anaphora import resolve_anaphora
from .classifier import LABELS, evaluate_predictions, extract_features, load_model, predict
from .drs import (Drs, Eq, Named, Pred, Rel, collapse_equalities, declared_in_order,
                  fresh_renaming, free_referents, iter_boxes, merge, rename)
from .drstext import pretty_drs, serialize_drs
from .errors import (CnlError, ConfigError, GoldFormatError, ImproperDrs, NotVerbalizable,
                     QuestionNotTranslatable)
from .grammar import AnalysisFlags, analyze
from .lexicon import Lexicon
from .logic import (answer_query, compile_csp, load_facts, load_roles, solve_csp, to_fol)
from .normalize import normalize
from .rewrite import apply_rules, load_rules

REPORT_FORMAT = "cnlreduce-report"
REPORT_VERSION = 1
OUTPUT_MODES = ("ace", "drs", "fol", "all")
STAGES = ("normalize", "analyze", "anaphora", "classify", "rewrite", "verbalize", "fol")


def shipped(name) -> Path:
    """Path of a file shipped in the package data directory."""
    return Path(str(resources.files("cnlreduce").joinpath(f"data/{name}")))


@dataclass
class PipelineConfig:
    lexicon: Lexicon
    rules: list = field(default_factory=list)
    model: object = None
    roles: dict = field(default_factory=dict)
    max_iterations: int = 1000
    output: str = "ace"
    strict: bool = False
    source: str | None = None


_BOOL = {"yes": True, "true": True, "1": True, "no": False, "false": False, "0": False}


def parse_config(text: str, base: Path = Path(".")) -> PipelineConfig:
    values = {}
    for n, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {n}: expected 'key = value'")
        key, value = (s.strip() for s in line.split("=", 1))
        if key not in ("lexicon", "rules", "model", "roles", "max_iterations", "output",
                       "strict"):
            raise ConfigError(f"line {n}: unknown key {key!r}")
        values[key] = value

    def path(key):
        p = Path(values[key])
        p = p if p.is_absolute() else base / p
        if not p.is_file():
            raise ConfigError(f"{key} file not found: {p}")
        return p

    try:
        lex = Lexicon.load(path("lexicon")) if "lexicon" in values else Lexicon.default()
        rules = load_rules(path("rules")) if "rules" in values else []
        model = load_model(path("model")) if "model" in values else None
        roles = load_roles(path("roles")) if "roles" in values else {}
    except ConfigError:
        raise
    except (CnlError, OSError, ValueError) as exc:
        raise ConfigError(f"{type(exc).__name__}: {exc}") from exc
    try:
        max_iterations = int(values.get("max_iterations", "1000"))
    except ValueError:
        raise ConfigError("max_iterations must be an integer") from None
    if max_iterations < 1:
        raise ConfigError("max_iterations must be >= 1")
    output = values.get("output", "ace")
    if output not in OUTPUT_MODES:
        raise ConfigError(f"output must be one of {', '.join(OUTPUT_MODES)}")
    strict = values.get("strict", "no").lower()
    if strict not in _BOOL:
        raise ConfigError("strict must be yes or no")
    return PipelineConfig(lex, rules, model, roles, max_iterations, output, _BOOL[strict])


def load_config(path) -> PipelineConfig:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    cfg = parse_config(text, path.parent)
    cfg.source = str(path)
    return cfg


def default_config() -> PipelineConfig:
    return load_config(shipped("default.cfg"))


# -- per-sentence processing ------------------------------------------------

@dataclass
class SentenceReport:
    id: int
    raw: str
    normalization: list = field(default_factory=list)   # (original, replacement, reason)
    tokens: list = field(default_factory=list)
    source: Drs | None = None
    flags: AnalysisFlags | None = None
    scores: list | None = None                         # (label, score) or None without a model
    labels: list | None = None
    trace: object = None
    reduced: Drs | None = None
    ace: str | None = None
    conformance: tuple | None = None                   # violations of the ACE text
    fol: str | None = None
    warnings: list = field(default_factory=list)
    error: tuple | None = None                         # (error type, message)
    timings: dict = field(default_factory=dict)        # stage -> microseconds

    @property
    def ok(self):
        return self.error is None

    def to_json(self, timings=True) -> dict:
        rec = {"id": self.id, "raw": self.raw}
        rec["normalization"] = [list(s) for s in self.normalization]
        rec["tokens"] = list(self.tokens)
        if self.source is not None:
            rec["source"] = serialize_drs(self.source)
        if self.flags is not None:
            rec["flags"] = {
                "ambiguous_anaphora": self.flags.ambiguous_anaphora,
                "oov_count": self.flags.oov_count,
                "multiple_attachments": self.flags.multiple_attachments,
                "candidate_antecedents": [list(c) for c in self.flags.candidate_antecedents],
            }
        if self.scores is not None:
            rec["scores"] = {label: score for label, score in self.scores}
            rec["labels"] = list(self.labels)
        if self.trace is not None:
            rec["trace"] = [{"rule": s.rule, "path": [list(p) for p in s.path],
                             "lossy": s.lossy} for s in self.trace.steps]
        if self.reduced is not None:
            rec["reduced"] = serialize_drs(self.reduced)
        if self.ace is not None:
            rec["ace"] = self.ace
            rec["conformant"] = not self.conformance
            rec["violations"] = [list(v) for v in self.conformance or ()]
        if self.fol is not None:
            rec["fol"] = self.fol
        rec["warnings"] = list(self.warnings)
        rec["error"] = None if self.error is None else {"type": self.error[0],
                                                        "message": self.error[1]}
        if timings:
            rec["timings_us"] = dict(self.timings)
        return rec


def _clock(timings):
    @contextmanager
    def stage(name):
        t0 = time.perf_counter_ns()
        try:
            yield
        finally:
            timings[name] = (time.perf_counter_ns() - t0) // 1000
    return stage


def _front(cfg, rep, clock):
    with clock("normalize"):
        tokens, trace = normalize(rep.raw, cfg.lexicon)
    rep.tokens = list(tokens)
    rep.normalization = [(s.original, s.replacement, s.reason) for s in trace.steps]
    with clock("analyze"):
        d, flags = analyze(tokens, cfg.lexicon)
    return d, replace(flags, oov_count=trace.spelling_repairs)


def _back(cfg, rep, d, flags, clock):
    """Classification onward, for a resolved DRS."""
    rep.source, rep.flags = d, flags
    labels = None
    if cfg.model is not None:
        with clock("classify"):
            scores = predict(cfg.model, extract_features(rep.tokens, flags, cfg.lexicon))
        rep.scores = scores
        labels = frozenset(label for label, s in scores if s > 0)
        rep.labels = sorted(labels)
    with clock("rewrite"):
        reduced, rep.trace = apply_rules(cfg.rules, d, labels, cfg.max_iterations)
    rep.reduced = reduced
    if cfg.output in ("ace", "all"):
        with clock("verbalize"):
            try:
                rep.ace = verbalize(collapse_equalities(reduced), cfg.lexicon)
                rep.conformance = check_ace(rep.ace, cfg.lexicon).violations
            except (NotVerbalizable, ImproperDrs) as exc:
                if cfg.strict:
                    raise
                rep.warnings.append(f"not-verbalizable: {exc}")
    if cfg.output in ("fol", "all"):
        with clock("fol"):
            try:
                f, warns = to_fol(reduced)
                rep.fol = str(f)
                rep.warnings.extend(warns)
            except QuestionNotTranslatable:
                rep.warnings.append("question-not-translatable")


def process_sentence(cfg: PipelineConfig, ident: int, raw: str) -> SentenceReport:
    rep = SentenceReport(ident, raw)
    clock = _clock(rep.timings)
    try:
        d, flags = _front(cfg, rep, clock)
        with clock("anaphora"):
            d, flags = resolve_anaphora(d, flags, cfg.lexicon)
        _back(cfg, rep, d, flags, clock)
    except CnlError as exc:
        rep.error = (type(exc).__name__, str(exc))
    return rep


def _sentence_view(context: Drs, part: Drs) -> Drs:
    """A stand-alone DRS for one discourse sentence.

    Pronouns are merged into their antecedents; an antecedent from an earlier
    sentence is re-declared here together with its description.
    """
    view = collapse_equalities(part)
    missing = sorted(free_referents(view))
    refs, conds = list(view.referents), list(view.conditions)
    for x in missing:
        refs.insert(0, x)
        conds[:0] = [c for c in context.conditions
                     if isinstance(c, (Pred, Named)) and c.ref == x]
    return Drs(refs, conds)


def run_pipeline(cfg: PipelineConfig, lines, discourse=False) -> list:
    """One report per non-blank input line; ids are 1-based line numbers."""
    reports = []
    context = Drs((), ())
    for n, raw in enumerate(lines, 1):
        raw = raw.rstrip("\r\n")
        if not raw.strip():
            continue
        if not discourse:
            reports.append(process_sentence(cfg, n, raw))
            continue
        rep = SentenceReport(n, raw)
        clock = _clock(rep.timings)
        try:
            d, flags = _front(cfg, rep, clock)
            d = rename(d, fresh_renaming(d, set(declared_in_order(context))))
            merged = merge(context, d)
            with clock("anaphora"):
                merged, flags = resolve_anaphora(merged, flags, cfg.lexicon)
            k = len(context.conditions)
            part = Drs(d.referents, merged.conditions[k:])
            _back(cfg, rep, _sentence_view(context, part), flags, clock)
            context = merged
        except CnlError as exc:
            rep.error = (type(exc).__name__, str(exc))
        reports.append(rep)
    return reports


def format_output(rep: SentenceReport, mode: str, pretty=False) -> str:
    """Human-readable output lines for one report."""
    if rep.error is not None:
        return f"# {rep.id} error {rep.error[0]}: {rep.error[1]}"

    def drs_text(d):
        return pretty_drs(d) if pretty else serialize_drs(d)

    if mode == "ace":
        return rep.ace if rep.ace is not None else f"# {rep.id} {rep.warnings[-1]}"
    if mode == "drs":
        return drs_text(rep.reduced)
    if mode == "fol":
        return rep.fol if rep.fol is not None else f"# {rep.id} no formula"
    out = [f"# {rep.id}", f"source: {drs_text(rep.source)}",
           f"labels: {','.join(rep.labels) if rep.labels is not None else '-'}",
           f"reduced: {drs_text(rep.reduced)}",
           f"ace: {rep.ace if rep.ace is not None else '-'}",
           f"fol: {rep.fol if rep.fol is not None else '-'}"]
    out.extend(f"warning: {w}" for w in rep.warnings)
    return "\n".join(out)


def report_lines(reports, output: str, timings=True) -> list:
    header = {"format": REPORT_FORMAT, "version": REPORT_VERSION, "output": output,
              "timings": timings}
    out = [json.dumps(header, sort_keys=True)]
    out.extend(json.dumps(r.to_json(timings), sort_keys=True) for r in reports)
    return out


# -- argument preservation -------------------------------------------------

def _events(d: Drs):
    lemmas = {}
    for c in _all_conditions(d):
        if isinstance(c, Pred) and c.pos == "v":
            lemmas.setdefault(c.ref, c.lemma)
    order = [r for r in declared_in_order(d) if r in lemmas]
    return [(r, lemmas[r]) for r in order]


def _all_conditions(d: Drs):
    for _, box in iter_boxes(d):
        yield from box.conditions


def _role_edges(d: Drs, e):
    return [(c.label, c.ref2) for c in _all_conditions(d) if isinstance(c, Rel) and c.ref1 == e]


class _Classes:
    """Union-find over referents linked by equality or a shared proper name."""

    def __init__(self):
        self.parent = {}

    def find(self, x):
        self.parent.setdefault(x, x)
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a, b):
        self.parent[self.find(a)] = self.find(b)


def argument_preservation(source: Drs, reduced: Drs, trace=None) -> float:
    """Fraction of the source's event role edges that survive in ``reduced``.

    Events are aligned greedily in introduction order, by verb lemma (a verb
    substitution recorded in ``trace`` counts as the same lemma), preferring
    the candidate with the most matching edges and then the most similar role
    set.  An edge matches if its label agrees and its filler is the same
    referent, is linked to it by equality, or names the same individual.
    """
    for d in (source, reduced):
        free = free_referents(d)
        if free:
            raise ImproperDrs(free)
    src_events = _events(source)
    total = sum(len(_role_edges(source, e)) for e, _ in src_events)
    if total == 0:
        return 1.0
    same = _Classes()
    for lemma_a, lemma_b in _verb_substitutions(trace):
        same.union(("verb", lemma_a), ("verb", lemma_b))
    refs = _Classes()
    names = {}
    for d in (source, reduced):
        for c in _all_conditions(d):
            if isinstance(c, Eq):
                refs.union(c.ref1, c.ref2)
            elif isinstance(c, Named):
                if c.name in names:
                    refs.union(c.ref, names[c.name])
                names.setdefault(c.name, c.ref)
    red_events = _events(reduced)
    used = set()
    matched = 0
    for e, lemma in src_events:
        edges = _role_edges(source, e)
        best = None
        for i, (e2, lemma2) in enumerate(red_events):
            if i in used or same.find(("verb", lemma)) != same.find(("verb", lemma2)):
                continue
            edges2 = list(_role_edges(reduced, e2))
            hits = 0
            for label, x in edges:
                for j, (label2, y) in enumerate(edges2):
                    if label == label2 and refs.find(x) == refs.find(y):
                        hits += 1
                        del edges2[j]
                        break
            a = {lab for lab, _ in edges}
            b = {lab for lab, _ in _role_edges(reduced, e2)}
            sim = len(a & b) / len(a | b) if a | b else 1.0
            key = (hits, sim)
            if best is None or key > best[0]:
                best = (key, i)
        if best is not None:
            used.add(best[1])
            matched += best[0][0]
    return matched / total


def _verb_substitutions(trace):
    if trace is None:
        return
    for step in trace.steps:
        before = {c.ref: c.lemma for c in step.before if isinstance(c, Pred) and c.pos == "v"}
        for c in step.after:
            if isinstance(c, Pred) and c.pos == "v" and c.ref in before:
                yield before[c.ref], c.lemma


# -- corpus evaluation ------------------------------------------------------

@dataclass(frozen=True)
class GoldItem:
    sentence: str
    labels: frozenset
    expected: str


def parse_gold(text: str) -> list:
    items = []
    for n, line in enumerate(text.splitlines(), 1):
        if not line.strip() or line.startswith("#"):
            continue
        parts = line.split("\t")
        if len(parts) != 3:
            raise GoldFormatError(n, "expected sentence<TAB>labels<TAB>expected output")
        labels = frozenset(s.strip() for s in parts[1].split(",") if s.strip())
        unknown = labels - set(LABELS)
        if unknown:
            raise GoldFormatError(n, f"unknown label {sorted(unknown)[0]!r}")
        items.append(GoldItem(parts[0], labels, parts[2]))
    return items


def load_gold(path) -> list:
    return parse_gold(Path(path).read_text(encoding="utf-8"))


@dataclass
class CorpusReport:
    size: int
    classification: object                  # Evaluation, or None without a model
    preservation: float
    exact_match: float
    ambiguous_anaphora: int
    failures: int
    timings_total: dict
    timings_mean: dict
    mismatches: list = field(default_factory=list)   # (sentence, expected, got)

    def to_json(self) -> dict:
        out = {"size": self.size, "argument_preservation": self.preservation,
               "exact_match": self.exact_match, "ambiguous_anaphora": self.ambiguous_anaphora,
               "failures": self.failures, "timings_total_us": self.timings_total,
               "timings_mean_us": self.timings_mean,
               "mismatches": [list(m) for m in self.mismatches]}
        if self.classification is not None:
            ev = self.classification
            out["classification"] = {
                label: {"tp": m.tp, "fp": m.fp, "fn": m.fn, "tn": m.tn,
                        "precision": m.precision, "recall": m.recall, "f1": m.f1,
                        "degenerate": m.degenerate}
                for label, m in list(ev.per_label.items()) + [("micro", ev.micro)]}
        return out

    def table(self) -> str:
        rows = [f"sentences            {self.size}",
                f"failures             {self.failures}",
                f"ACE exact match      {self.exact_match:.3f}",
                f"arg. preservation    {self.preservation:.3f}",
                f"ambiguous anaphora   {self.ambiguous_anaphora}"]
        if self.classification is not None:
            rows.append("")
            rows.append(f"{'label':<15}{'P':>7}{'R':>7}{'F1':>7}{'tp':>5}{'fp':>5}{'fn':>5}")
            ev = self.classification
            for label, m in list(ev.per_label.items()) + [("micro", ev.micro)]:
                rows.append(f"{label:<15}{m.precision:7.3f}{m.recall:7.3f}{m.f1:7.3f}"
                            f"{m.tp:5d}{m.fp:5d}{m.fn:5d}")
        rows.append("")
        rows.append(f"{'stage':<15}{'total us':>12}{'mean us':>12}")
        for stage in STAGES:
            if stage in self.timings_total:
                rows.append(f"{stage:<15}{self.timings_total[stage]:12d}"
                            f"{self.timings_mean[stage]:12.1f}")
        return "\n".join(rows)


def eval_corpus(cfg: PipelineConfig, gold) -> CorpusReport:
    """Run the pipeline over gold items and aggregate the metrics."""
    cfg = replace(cfg, output="ace")
    gold = list(gold)
    reports = [process_sentence(cfg, i, g.sentence) for i, g in enumerate(gold, 1)]
    pres, exact, ambiguous, failures = [], 0, 0, 0
    totals = {}
    mismatches = []
    for g, rep in zip(gold, reports):
        for stage, us in rep.timings.items():
            totals[stage] = totals.get(stage, 0) + us
        if rep.error is not None:
            failures += 1
            pres.append(0.0)
            mismatches.append((g.sentence, g.expected, f"error {rep.error[0]}"))
            continue
        if rep.flags.ambiguous_anaphora:
            ambiguous += 1
        pres.append(argument_preservation(rep.source, rep.reduced, rep.trace))
        if rep.ace == g.expected:
            exact += 1
        else:
            mismatches.append((g.sentence, g.expected, rep.ace))
    n = len(gold)
    classification = None
    if cfg.model is not None and n:
        pairs = [(frozenset(rep.labels or ()), g.labels) for g, rep in zip(gold, reports)]
        classification = evaluate_predictions(pairs)
    means = {k: v / n for k, v in totals.items()} if n else {}
    return CorpusReport(n, classification, sum(pres) / n if n else 0.0,
                        exact / n if n else 0.0, ambiguous, failures, totals, means, mismatches)


# -- reasoning ---------------------------------------------------------------

def question_drs(cfg: PipelineConfig, question: str) -> Drs:
    tokens, _ = normalize(question, cfg.lexicon)
    d, flags = analyze(tokens, cfg.lexicon)
    d, _ = resolve_anaphora(d, flags, cfg.lexicon)
    return collapse_equalities(d)


def reason(cfg: PipelineConfig, question: str, facts, mode: str):
    """Answers to ``question`` over ``facts`` (a FiniteModel or a facts file path).

    ``model`` mode returns the sorted answer list; ``csp`` mode returns every
    solution of the compiled CSP, in solver order.
    """
    if mode not in ("model", "csp"):
        raise ValueError("mode must be 'model' or 'csp'")
    if not hasattr(facts, "domain"):
        facts = load_facts(facts)
    q = question_drs(cfg, question)
    if mode == "model":
        return sorted(answer_query(q, facts))
    return solve_csp(compile_csp(q, facts, cfg.roles))


# -- training data ----------------------------------------------------------

def featurize(raw: str, lex: Lexicon) -> dict:
    """Features of a raw sentence, as the pipeline computes them.

    Sentences outside the grammar still get lexical features; their analysis
    flags stay at their defaults apart from the spelling-repair count.
    """
    tokens, trace = normalize(raw, lex)
    flags = AnalysisFlags(oov_count=trace.spelling_repairs)
    try:
        d, f = analyze(tokens, lex)
        _, flags = resolve_anaphora(d, replace(f, oov_count=trace.spelling_repairs), lex)
    except CnlError:
        pass
    return extract_features(tokens, flags, lex)


def parse_training(text: str, lex: Lexicon) -> list:
    """TSV lines ``sentence<TAB>label,label`` into ``(features, label_set)`` pairs."""
    data = []
    for n, line in enumerate(text.splitlines(), 1):
        if not line.strip() or line.startswith("#"):
            continue
        sentence, _, labels = line.partition("\t")
        labels = frozenset(s.strip() for s in labels.split(",") if s.strip())
        unknown = labels - set(LABELS)
        if unknown:
            raise GoldFormatError(n, f"unknown label {sorted(unknown)[0]!r}")
        try:
            data.append((featurize(sentence, lex), labels))
        except CnlError as exc:
            raise GoldFormatError(n, f"{type(exc).__name__}: {exc}") from exc
    return data


def load_training(path, lex: Lexicon) -> list:
    return parse_training(Path(path).read_text(encoding="utf-8"), lex)
