"""Command-line interface.

Exit codes: 0 success, 1 configuration error, 2 some sentences failed,
3 failure in strict mode.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace
from pathlib import Path

from .ace import check_ace
from .classifier import Hyper, save_model, train
from .errors import CnlError, ConfigError
from .lexicon import Lexicon
from .logic import load_facts
from .pipeline import (OUTPUT_MODES, default_config, eval_corpus, format_output, load_config,
                       load_gold, load_training, reason, report_lines, run_pipeline)

EXIT_OK, EXIT_CONFIG, EXIT_FAILURES, EXIT_STRICT = 0, 1, 2, 3


def _config(path):
    return load_config(path) if path else default_config()


def cmd_run(args, stdin, stdout, stderr):
    cfg = _config(args.config)
    if args.out:
        cfg = replace(cfg, output=args.out)
    if args.strict:
        cfg = replace(cfg, strict=True)
    reports = run_pipeline(cfg, stdin, discourse=args.discourse)
    for rep in reports:
        print(format_output(rep, cfg.output, args.pretty), file=stdout)
        if rep.error is not None:
            print(f"line {rep.id}: {rep.error[0]}: {rep.error[1]}", file=stderr)
    if args.report:
        lines = report_lines(reports, cfg.output, timings=not args.no_timings)
        Path(args.report).write_text("\n".join(lines) + "\n", encoding="utf-8")
    if any(rep.error is not None for rep in reports):
        return EXIT_STRICT if cfg.strict else EXIT_FAILURES
    return EXIT_OK


def cmd_train(args, stdin, stdout, stderr):
    lex = Lexicon.load(args.lexicon) if args.lexicon else Lexicon.default()
    data = load_training(args.data, lex)
    hyper = Hyper(epochs=args.epochs, learning_rate=args.learning_rate, lam=args.lam)
    model = train(data, hyper, seed=args.seed)
    save_model(model, args.out)
    print(f"trained on {len(data)} sentences, {len(model.features)} features -> {args.out}",
          file=stdout)
    return EXIT_OK


def cmd_eval(args, stdin, stdout, stderr):
    cfg = _config(args.config)
    report = eval_corpus(cfg, load_gold(args.gold))
    if args.json:
        print(json.dumps(report.to_json(), sort_keys=True), file=stdout)
    else:
        print(report.table(), file=stdout)
    return EXIT_OK if report.failures == 0 else EXIT_FAILURES


def cmd_reason(args, stdin, stdout, stderr):
    cfg = _config(args.config)
    facts = load_facts(args.facts)
    answers = reason(cfg, args.question, facts, args.mode)
    if args.mode == "model":
        print(" ".join(answers) if answers else "(no answers)", file=stdout)
    elif not answers:
        print("(no solutions)", file=stdout)
    else:
        for sol in answers:
            print(" ".join(f"{v}={x}" for v, x in sol.items()), file=stdout)
    return EXIT_OK


def cmd_check_ace(args, stdin, stdout, stderr):
    lex = Lexicon.load(args.lexicon) if args.lexicon else Lexicon.default()
    result = check_ace(args.sentence, lex)
    if result.conformant:
        print("conformant", file=stdout)
        return EXIT_OK
    for pos, constraint in result.violations:
        print(f"{pos}\t{constraint}", file=stdout)
    return EXIT_FAILURES


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="cnlreduce", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="reduce sentences read from stdin, one per line")
    run.add_argument("--config", help="config file (default: the shipped one)")
    run.add_argument("--out", choices=OUTPUT_MODES)
    run.add_argument("--pretty", action="store_true", help="indent DRS output")
    run.add_argument("--strict", action="store_true")
    run.add_argument("--discourse", action="store_true",
                     help="treat the input as one discourse (pronouns may cross lines)")
    run.add_argument("--report", help="write a JSON-lines report to this file")
    run.add_argument("--no-timings", action="store_true", help="omit timings from the report")
    run.set_defaults(func=cmd_run)

    tr = sub.add_parser("train", help="train the reduction classifier")
    tr.add_argument("--data", required=True, help="TSV of sentence and labels")
    tr.add_argument("--out", required=True)
    tr.add_argument("--seed", type=int, default=7)
    tr.add_argument("--epochs", type=int, default=200)
    tr.add_argument("--learning-rate", type=float, default=0.1)
    tr.add_argument("--lam", type=float, default=1e-3, help="L2 regularization strength")
    tr.add_argument("--lexicon")
    tr.set_defaults(func=cmd_train)

    ev = sub.add_parser("eval", help="evaluate against a gold corpus")
    ev.add_argument("--config")
    ev.add_argument("--gold", required=True)
    ev.add_argument("--json", action="store_true", help="machine-readable output")
    ev.set_defaults(func=cmd_eval)

    rs = sub.add_parser("reason", help="answer a wh-question over a facts file")
    rs.add_argument("--config")
    rs.add_argument("--facts", required=True)
    rs.add_argument("--mode", choices=("model", "csp"), default="csp")
    rs.add_argument("--question", required=True)
    rs.set_defaults(func=cmd_reason)

    ck = sub.add_parser("check-ace", help="check one sentence for conformance")
    ck.add_argument("sentence")
    ck.add_argument("--lexicon")
    ck.set_defaults(func=cmd_check_ace)
    return p


def main(argv=None, stdin=None, stdout=None, stderr=None) -> int:
    stdin = stdin if stdin is not None else sys.stdin
    stdout = stdout if stdout is not None else sys.stdout
    stderr = stderr if stderr is not None else sys.stderr
    args = build_parser().parse_args(argv)
    try:
        return args.func(args, stdin, stdout, stderr)
    except ConfigError as exc:
        print(f"config error: {exc}", file=stderr)
        return EXIT_CONFIG
    except (CnlError, OSError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=stderr)
        return EXIT_STRICT if getattr(args, "strict", False) else EXIT_FAILURES


if __name__ == "__main__":
    sys.exit(main())
