"""Command-line interface wiring the toolkit into subcommands.

Subcommands: extract, mine, synthesize, train, detect, fix, evaluate.
Exit codes: 0 success, 1 usage error, 2 data/config error, 3 backend error.
Human-readable diagnostics go to standard error; machine output goes only to
the files named by --out (or --model).
"""

from __future__ import annotations

import argparse
import fnmatch
import json
import os
import subprocess
import sys
from dataclasses import dataclass, fields, replace

from .backends import (
    BackendError,
    HttpBackend,
    LlmBackend,
    MockBackend,
    load_transcript,
)
from .detector import TrainConfig, load_checkpoint, predict, save_checkpoint, train
from .metrics import aggregate_update_records, detection_metrics, evaluate_update
from .mining import FixtureHistoryProvider, GitHistoryProvider, extract_lccs
from .model import (
    LABEL_INDEX,
    LABELS,
    DefectLabel,
    context_from_dict,
    context_to_dict,
    method_record_from_dict,
    method_record_to_dict,
    read_changes,
    read_jsonl,
    read_samples,
    result_from_dict,
    parse_level,
    result_to_dict,
    statement_from_dict,
    statement_to_dict,
    write_changes,
    write_jsonl,
    write_samples,
)
from .parser import ParserConfig, extract_file
from .repair import RepairConfig, run_pipeline_batch
from .retrieval import DEFAULT_B, DEFAULT_K1
from .synthesis import (
    load_antonym_table,
    load_typo_lexicon,
    load_verb_lexicon,
    synthesize_corpus,
)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_BACKEND = 3


class DataError(Exception):
    """Bad input file, bad config, or a domain invariant violation."""


class _UsageError(Exception):
    """Raised by the argument parser instead of exiting the process."""


class _Parser(argparse.ArgumentParser):
    # argparse exits with status 2 on usage errors; this tool reserves 2
    # for data errors, so route usage problems through an exception.
    def error(self, message: str):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise _UsageError(message)


# ---------------------------------------------------------------------------
# Configuration file
# ---------------------------------------------------------------------------
@dataclass(frozen=True)
class RetrievalSettings:
    k: int = 3
    k1: float = DEFAULT_K1
    b: float = DEFAULT_B


@dataclass(frozen=True)
class BackendSettings:
    kind: str = "mock"
    endpoint: str = ""
    model: str = ""
    timeout_seconds: float = 60.0
    # mock only: JSON file of {"pattern": regex, "reply": text} entries
    transcript: str = ""


@dataclass(frozen=True)
class LexiconPaths:
    typos: str = ""
    verbs: str = ""
    antonyms: str = ""


@dataclass(frozen=True)
class ToolConfig:
    parser: ParserConfig
    train: TrainConfig
    retrieval: RetrievalSettings
    backend: BackendSettings
    paths: LexiconPaths


def _strict_section(raw: object, name: str, cls):
    if not isinstance(raw, dict):
        raise DataError(f"config section {name!r} must be an object")
    known = {f.name for f in fields(cls)}
    unknown = sorted(set(raw) - known)
    if unknown:
        raise DataError(f"config section {name!r}: unknown keys {unknown}")
    try:
        return cls(**raw)
    except (TypeError, ValueError) as exc:
        raise DataError(f"config section {name!r}: {exc}") from exc


def _parser_section(raw: object) -> ParserConfig:
    if not isinstance(raw, dict):
        raise DataError("config section 'parser' must be an object")
    known = {"logger_receivers", "level_methods", "max_method_lines"}
    unknown = sorted(set(raw) - known)
    if unknown:
        raise DataError(f"config section 'parser': unknown keys {unknown}")
    kwargs = {}
    if "logger_receivers" in raw:
        kwargs["logger_receivers"] = frozenset(raw["logger_receivers"])
    if "level_methods" in raw:
        kwargs["level_methods"] = {
            method: parse_level(level)
            for method, level in raw["level_methods"].items()
        }
    if "max_method_lines" in raw:
        kwargs["max_method_lines"] = int(raw["max_method_lines"])
    return ParserConfig(**kwargs)


def load_config(path: str | None) -> ToolConfig:
    """Load the shared JSON config; unknown keys at any level are errors.

    Every field has a default, so a missing or empty file yields a fully
    usable configuration.
    """
    raw: dict = {}
    if path is not None:
        try:
            with open(path, "r", encoding="utf-8") as fh:
                raw = json.load(fh)
        except OSError as exc:
            raise DataError(f"cannot read config {path!r}: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise DataError(f"config {path!r} is not valid JSON: {exc}") from exc
        if not isinstance(raw, dict):
            raise DataError(f"config {path!r} must contain a JSON object")
    known = {"parser", "train", "retrieval", "backend", "paths"}
    unknown = sorted(set(raw) - known)
    if unknown:
        raise DataError(f"config: unknown top-level keys {unknown}")
    return ToolConfig(
        parser=_parser_section(raw.get("parser", {})),
        train=_strict_section(raw.get("train", {}), "train", TrainConfig),
        retrieval=_strict_section(raw.get("retrieval", {}), "retrieval",
                                  RetrievalSettings),
        backend=_strict_section(raw.get("backend", {}), "backend",
                                BackendSettings),
        paths=_strict_section(raw.get("paths", {}), "paths", LexiconPaths),
    )


def make_backend(settings: BackendSettings,
                 kind: str | None = None) -> LlmBackend:
    kind = kind or settings.kind
    if kind == "mock":
        transcript = (load_transcript(settings.transcript)
                      if settings.transcript else None)
        return MockBackend(transcript)
    if kind == "http":
        if not settings.endpoint or not settings.model:
            raise DataError(
                "http backend needs backend.endpoint and backend.model "
                "in the config file")
        return HttpBackend(settings.endpoint, settings.model,
                           settings.timeout_seconds)
    raise DataError(f"unknown backend kind {kind!r} (expected mock or http)")


def _note(message: str) -> None:
    print(message, file=sys.stderr)


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------
def cmd_extract(args, config: ToolConfig) -> int:
    if not os.path.isdir(args.root):
        raise DataError(f"not a directory: {args.root!r}")
    paths = []
    for base, dirs, names in os.walk(args.root):
        dirs.sort()
        for name in sorted(names):
            if fnmatch.fnmatch(name, args.glob):
                paths.append(os.path.join(base, name))
    records = []
    methods = statements = 0
    for path in paths:
        with open(path, "r", encoding="utf-8", errors="replace") as fh:
            source = fh.read()
        rel = os.path.relpath(path, args.root).replace(os.sep, "/")
        result = extract_file(source, rel, config.parser, args.project)
        for err in result.errors:
            _note(f"extract: {err}")
        for ctx, parsed in result.records:
            records.append(method_record_to_dict(
                ctx, [p.statement for p in parsed]))
            methods += 1
            statements += len(parsed)
    write_jsonl(args.out, records)
    _note(f"extract: {len(paths)} files -> {methods} methods, "
          f"{statements} statements -> {args.out}")
    return EXIT_OK


def cmd_mine(args, config: ToolConfig) -> int:
    if not os.path.isdir(args.repo):
        raise DataError(f"not a directory: {args.repo!r}")
    if os.path.isdir(os.path.join(args.repo, ".git")):
        provider = GitHistoryProvider(args.repo, args.since)
    else:
        if args.since:
            _note("mine: snapshot directories carry no dates; --since ignored")
        provider = FixtureHistoryProvider(args.repo)
    try:
        pairs = provider.commit_pairs()
    except (subprocess.CalledProcessError, OSError) as exc:
        raise DataError(f"cannot read history from {args.repo!r}: {exc}") from exc
    changes = extract_lccs(pairs, config.parser, args.project)
    write_changes(args.out, changes)
    _note(f"mine: {len(pairs)} commits -> {len(changes)} log-centric "
          f"changes -> {args.out}")
    return EXIT_OK


def cmd_synthesize(args, config: ToolConfig) -> int:
    clean = read_samples(args.in_path)
    if not clean:
        raise DataError(f"no samples in {args.in_path!r}")
    backend = make_backend(config.backend, args.llm) if args.llm else None
    seed = args.seed if args.seed is not None else config.train.seed
    mutated = synthesize_corpus(
        clean, args.per_type, seed,
        backend=backend,
        typo_lexicon=load_typo_lexicon(config.paths.typos or None),
        verb_lexicon=load_verb_lexicon(config.paths.verbs or None),
        antonyms=load_antonym_table(config.paths.antonyms or None),
        parser_config=config.parser,
    )
    # the training corpus is the clean pool plus its mutants
    write_samples(args.out, clean + mutated)
    _note(f"synthesize: {len(clean)} clean + {len(mutated)} mutated "
          f"-> {args.out}")
    return EXIT_OK


def cmd_train(args, config: ToolConfig) -> int:
    corpus = read_samples(args.corpus)
    train_config = config.train
    if args.seed is not None:
        train_config = replace(train_config, seed=args.seed)
    model, head, history = train(corpus, train_config)
    save_checkpoint(args.model, model, head, train_config)
    for row in history:
        _note(f"train: epoch {row['epoch']}: loss {row['train_loss']:.4f}, "
              f"val F1-macro {row['val_f1_macro']:.4f}")
    _note(f"train: {len(corpus)} samples -> {args.model}")
    return EXIT_OK


def cmd_detect(args, config: ToolConfig) -> int:
    model, head, train_config = load_checkpoint(args.model)
    records = []
    for d in read_jsonl(args.in_path):
        ctx, statements = method_record_from_dict(d)
        for stmt in statements:
            label, probs = predict(ctx, stmt, model, head,
                                   train_config.max_tokens)
            records.append({
                "method": context_to_dict(ctx),
                "statement": statement_to_dict(stmt),
                "predicted_label": label.value,
                "confidence": float(probs[LABEL_INDEX[label]]),
            })
    write_jsonl(args.out, records)
    defects = sum(1 for r in records
                  if r["predicted_label"] != DefectLabel.NON_DEFECT.value)
    _note(f"detect: {len(records)} statements, {defects} flagged "
          f"-> {args.out}")
    return EXIT_OK


def _read_statement_items(path: str):
    """Accept detection records ({method, statement}) or extract records
    ({method, statements})."""
    items = []
    for d in read_jsonl(path):
        if "statements" in d:
            ctx, statements = method_record_from_dict(d)
            items.extend((ctx, stmt) for stmt in statements)
        else:
            items.append((context_from_dict(d["method"]),
                          statement_from_dict(d["statement"])))
    return items


def cmd_fix(args, config: ToolConfig) -> int:
    model, head, _ = load_checkpoint(args.model)
    items = _read_statement_items(args.in_path)
    lccs = read_changes(args.lcc) if args.lcc else []
    backend = make_backend(config.backend, args.backend)
    repair_config = RepairConfig(
        exemplar_count=args.exemplars if args.exemplars is not None
        else config.retrieval.k,
        workers=args.jobs if args.jobs is not None else 4,
        parser_config=config.parser,
    )
    results = run_pipeline_batch(items, (model, head), lccs, backend,
                                 repair_config)
    write_jsonl(args.out, (result_to_dict(r) for r in results))
    updated = sum(1 for r in results if r.updated_statement is not None)
    failed = sum(1 for r in results
                 if any(d.startswith("backend-error:") for d in r.diagnostics))
    _note(f"fix: {len(results)} statements, {updated} updated -> {args.out}")
    if failed:
        _note(f"fix: {failed} statements hit backend errors")
        return EXIT_BACKEND
    return EXIT_OK


def cmd_evaluate(args, config: ToolConfig) -> int:
    results = [result_from_dict(d) for d in read_jsonl(args.results)]
    if not results:
        raise DataError(f"no results in {args.results!r}")
    truth = {}
    for d in read_jsonl(args.truth):
        truth[d["statement_id"]] = (
            DefectLabel(d["label"]),
            statement_from_dict(d["statement"]),
        )
    preds, golds, per_sample = [], [], []
    for result in results:
        target = result.sample.target
        entry = truth.get(target.id)
        if entry is None:
            raise DataError(f"no ground truth for statement {target.id} "
                            f"({target.raw_text!r})")
        gold_label, gold_stmt = entry
        preds.append(result.predicted_label)
        golds.append(gold_label)
        if gold_label is not DefectLabel.NON_DEFECT:
            per_sample.append(evaluate_update(
                target, result.updated_statement, gold_stmt))
    detection = detection_metrics(preds, golds)
    report = {
        "detection": {
            "per_class": {
                label.value: {
                    "precision": detection.per_class[label].precision,
                    "recall": detection.per_class[label].recall,
                    "f1": detection.per_class[label].f1,
                }
                for label in LABELS
            },
            "f1_macro": detection.f1_macro,
            "samples": len(results),
        },
        "update": aggregate_update_records(per_sample),
    }
    with open(args.out, "w", encoding="utf-8") as fh:
        json.dump(report, fh, indent=2)
        fh.write("\n")
    _note(f"evaluate: {len(results)} results, {len(per_sample)} scored "
          f"updates -> {args.out}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# Argument parsing
# ---------------------------------------------------------------------------
def build_parser() -> _Parser:
    common = _Parser(add_help=False)
    common.add_argument("--config", metavar="FILE",
                        help="JSON configuration file (strict schema)")
    common.add_argument("--seed", type=int,
                        help="override the configured random seed")
    common.add_argument("--jobs", type=int, metavar="N",
                        help="cap worker counts for parallel stages")

    parser = _Parser(prog="logfix",
                     description="Detect and repair factual defects in "
                                 "logging statements.")
    sub = parser.add_subparsers(dest="command", required=True,
                                metavar="COMMAND")

    p = sub.add_parser("extract", parents=[common],
                       help="pull logging statements out of a source tree")
    p.add_argument("--root", required=True, help="source directory to scan")
    p.add_argument("--glob", default="*.java",
                   help="filename filter (default: *.java)")
    p.add_argument("--project", default="", help="project id to stamp")
    p.add_argument("--out", required=True, help="methods JSONL to write")
    p.set_defaults(func=cmd_extract)

    p = sub.add_parser("mine", parents=[common],
                       help="mine log-centric changes from history")
    p.add_argument("--repo", required=True,
                   help="git repository or snapshot directory")
    p.add_argument("--since", help="only consider commits after this date")
    p.add_argument("--project", default="", help="project id to stamp")
    p.add_argument("--out", required=True, help="changes JSONL to write")
    p.set_defaults(func=cmd_mine)

    p = sub.add_parser("synthesize", parents=[common],
                       help="mutate clean statements into a defect corpus")
    p.add_argument("--in", dest="in_path", required=True,
                   help="clean-sample JSONL")
    p.add_argument("--out", required=True,
                   help="training corpus JSONL (clean + mutants)")
    p.add_argument("--per-type", dest="per_type", type=int, required=True,
                   help="samples to synthesize per defect type")
    p.add_argument("--llm", metavar="BACKEND", choices=["mock", "http"],
                   help="backend for semantic mutations (default: rules only)")
    p.set_defaults(func=cmd_synthesize)

    p = sub.add_parser("train", parents=[common],
                       help="train the defect classifier")
    p.add_argument("--corpus", required=True, help="labeled-sample JSONL")
    p.add_argument("--model", required=True, help="checkpoint file to write")
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("detect", parents=[common],
                       help="classify statements with a trained model")
    p.add_argument("--in", dest="in_path", required=True,
                   help="methods JSONL from extract")
    p.add_argument("--model", required=True, help="checkpoint file to read")
    p.add_argument("--out", required=True, help="detections JSONL to write")
    p.set_defaults(func=cmd_detect)

    p = sub.add_parser("fix", parents=[common],
                       help="confirm and rewrite detected defects")
    p.add_argument("--in", dest="in_path", required=True,
                   help="detections JSONL from detect")
    p.add_argument("--lcc", help="log-centric changes JSONL for exemplars")
    p.add_argument("--model", required=True, help="checkpoint file to read")
    p.add_argument("--backend", choices=["mock", "http"],
                   help="completion backend (default: from config)")
    p.add_argument("--exemplars", type=int, metavar="K",
                   help="exemplars per prompt (default: from config)")
    p.add_argument("--out", required=True, help="results JSONL to write")
    p.set_defaults(func=cmd_fix)

    p = sub.add_parser("evaluate", parents=[common],
                       help="score pipeline results against ground truth")
    p.add_argument("--results", required=True, help="results JSONL from fix")
    p.add_argument("--truth", required=True,
                   help="ground-truth JSONL (statement_id, label, statement)")
    p.add_argument("--out", required=True, help="report JSON to write")
    p.set_defaults(func=cmd_evaluate)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError:
        return EXIT_USAGE
    except SystemExit as exc:  # --help exits through argparse
        return int(exc.code or 0)
    try:
        config = load_config(args.config)
        return args.func(args, config)
    except _UsageError:
        return EXIT_USAGE
    except BackendError as exc:
        print(f"logfix: backend error: {exc}", file=sys.stderr)
        return EXIT_BACKEND
    except DataError as exc:
        print(f"logfix: {exc}", file=sys.stderr)
        return EXIT_DATA
    except (OSError, ValueError, LookupError) as exc:
        print(f"logfix: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
