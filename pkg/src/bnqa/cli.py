"""Command line front end: index building, asking, evaluation, REPL, tagging.

Configuration resolution order: command-line flags, then the JSON file named by
the QA_CONFIG environment variable, then built-in defaults.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Optional

from .corpus import (
    CorpusFormatError,
    EmptyCorpusError,
    IndexFormatError,
    build_index,
    ingest,
    load_index,
    save_index,
)
from .engine import AnswerRanker, RankedAnswer
from .evaluation import QaFormatError, evaluate, load_qa_pairs
from .question import EmptyQuestionError
from .sense import load_rules
from .text import TableFormatError, load_lexicon, load_wh_table, tag, tokenize

CONFIG_ENV = "QA_CONFIG"
CONFIG_KEYS = (
    "min_prefix",
    "prefix_coverage",
    "top_k",
    "disabled_modules",
    "sense_mode",
    "entropy_sign",
    "lexicon",
    "wh_table",
    "rules",
    "index",
)


def _load_env_config() -> dict:
    path = os.environ.get(CONFIG_ENV)
    if not path:
        return {}
    with open(path, encoding="utf-8") as f:
        config = json.load(f)
    if not isinstance(config, dict):
        raise ValueError(f"config file {path} must contain a JSON object")
    return {k: v for k, v in config.items() if k in CONFIG_KEYS}


def _resolve(args: argparse.Namespace, config: dict, key: str, default=None):
    flag = getattr(args, key, None)
    if flag is not None:
        return flag
    return config.get(key, default)


def _add_engine_flags(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--index", help="index file produced by the index command")
    sub.add_argument("--min-prefix", dest="min_prefix", type=int,
                     help="minimum common-prefix length for inexact matches "
                     "(default 3)")
    sub.add_argument("--prefix-coverage", dest="prefix_coverage", type=float,
                     help="fraction of the shorter word the prefix must cover "
                     "(default 0.6)")
    sub.add_argument("--top-k", dest="top_k", type=int,
                     help="answers returned per question (default 15)")
    sub.add_argument("--disable-module", dest="disabled_modules", type=int,
                     action="append", metavar="N",
                     help="disable score signal N (1..6); repeatable")
    sub.add_argument("--sense-mode", dest="sense_mode",
                     choices=["gold", "rules", "nb"],
                     help="sentence sense source (default gold)")
    sub.add_argument("--entropy-sign", dest="entropy_sign",
                     choices=["add", "subtract"],
                     help="how the entropy-difference signal enters the total "
                     "(default add)")
    _add_resource_flags(sub)
    sub.add_argument("--rules", help="sense cue-rules TSV (default: bundled)")


def _add_resource_flags(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--lexicon", help="lexicon TSV (default: bundled)")
    sub.add_argument("--wh-table", dest="wh_table",
                     help="wh-phrase table TSV (default: bundled)")


def _load_resources(args, config):
    lexicon_path = _resolve(args, config, "lexicon")
    wh_path = _resolve(args, config, "wh_table")
    lexicon = load_lexicon(lexicon_path) if lexicon_path else None
    wh_table = load_wh_table(wh_path) if wh_path else None
    return lexicon, wh_table


def _build_ranker(args, config) -> AnswerRanker:
    index_path = _resolve(args, config, "index")
    if not index_path:
        raise ValueError("no index given: pass --index or set it in QA_CONFIG")
    index = load_index(index_path)
    lexicon, wh_table = _load_resources(args, config)
    rules_path = _resolve(args, config, "rules")
    ranker = AnswerRanker(
        min_prefix=_resolve(args, config, "min_prefix", 3),
        prefix_coverage=_resolve(args, config, "prefix_coverage", 0.6),
        top_k=_resolve(args, config, "top_k", 15),
        disabled_modules=_resolve(args, config, "disabled_modules", ()),
        sense_mode=_resolve(args, config, "sense_mode", "gold"),
        entropy_sign=_resolve(args, config, "entropy_sign", "add"),
        lexicon=lexicon,
        wh_table=wh_table,
        sense_rules=load_rules(rules_path) if rules_path else None,
    )
    return ranker.fit(index)


# ------------------------------------------------------------------ commands


def _cmd_index(args, config) -> int:
    lexicon, wh_table = _load_resources(args, config)
    sentences = ingest(args.input, args.format, lexicon, wh_table)
    index = build_index(sentences)
    save_index(index, args.out)
    print(f"{len(index.sentences)} sentences, {index.total_tokens} tokens")
    return 0


def _answer_to_json(answer: RankedAnswer, text: str, explain: bool) -> str:
    record = {
        "rank": answer.rank,
        "sentence_id": answer.sentence_id,
        "text": text,
        "m1": answer.scores.m1,
        "m2": answer.scores.m2,
        "m3": answer.scores.m3,
        "m4": answer.scores.m4,
        "m5": answer.scores.m5,
        "m6": answer.scores.m6,
        "total": answer.scores.total,
    }
    if explain:
        record["matches"] = [
            {
                "q_surface": m.q_surface,
                "s_surface": m.s_surface,
                "q_pos": m.q_pos,
                "s_pos": m.s_pos,
                "exact": m.exact,
            }
            for m in answer.matches
        ]
    return json.dumps(record, ensure_ascii=False, sort_keys=True)


def _print_answers(ranker: AnswerRanker, answers, fmt: str, explain: bool) -> None:
    for answer in answers:
        text = ranker.index_.sentences[answer.sentence_id].text
        if fmt == "json":
            print(_answer_to_json(answer, text, explain))
            continue
        s = answer.scores
        print(f"rank {answer.rank}  id {answer.sentence_id}  total {s.total:.4f}")
        print(f"  m1 {s.m1}  m2 {s.m2}  m3 {s.m3}  m4 {s.m4:.4f}  "
              f"m5 {s.m5}  m6 {s.m6}")
        print(f"  {text}")
        if explain:
            for m in answer.matches:
                kind = "exact" if m.exact else "prefix"
                print(f"  match: {m.q_surface} -> {m.s_surface} "
                      f"({kind}, q {m.q_pos}, s {m.s_pos})")


def _cmd_ask(args, config) -> int:
    ranker = _build_ranker(args, config)
    answers = ranker.answer(args.question)
    _print_answers(ranker, answers, args.format, args.explain)
    return 0


def _cmd_eval(args, config) -> int:
    ranker = _build_ranker(args, config)
    report = evaluate(ranker, load_qa_pairs(args.qa))
    if args.format in ("json", "both"):
        print(report.to_json())
    if args.format in ("table", "both"):
        print(report.render_table())
    if args.out:
        with open(args.out, "w", encoding="utf-8") as f:
            f.write(report.to_json())
            f.write("\n")
    return 0


def _cmd_repl(args, config) -> int:
    ranker = _build_ranker(args, config)
    for line in sys.stdin:
        question = line.strip()
        if not question:
            continue
        try:
            answers = ranker.answer(question)
        except EmptyQuestionError:
            print("(empty question)")
            print()
            continue
        if answers:
            _print_answers(ranker, answers, "text", explain=False)
        else:
            print("(no answer)")
        print()
    return 0


def _cmd_tag(args, config) -> int:
    lexicon, wh_table = _load_resources(args, config)
    if lexicon is None:
        from .text import default_lexicon

        lexicon = default_lexicon()
    if wh_table is None:
        from .text import default_wh_table

        wh_table = default_wh_table()
    for token in tag(tokenize(args.text), lexicon, wh_table):
        print(f"{token.surface}\t{token.tag.value}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bnqa",
        description="Bengali question answering over an indexed sentence corpus.",
        epilog=f"The {CONFIG_ENV} environment variable may name a JSON config "
        "file; command-line flags take precedence over it.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_index = sub.add_parser("index", help="build a binary index from a corpus")
    p_index.add_argument("--input", required=True, help="corpus file")
    p_index.add_argument("--format", choices=["plain", "tsv"], default="tsv",
                         help="corpus file format (default tsv)")
    p_index.add_argument("--out", required=True, help="index file to write")
    _add_resource_flags(p_index)
    p_index.set_defaults(func=_cmd_index)

    p_ask = sub.add_parser("ask", help="rank answers for one question")
    p_ask.add_argument("question", help="the question text")
    p_ask.add_argument("--format", choices=["text", "json"], default="text",
                       help="output format; json emits one object per answer")
    p_ask.add_argument("--explain", action="store_true",
                       help="include matched-keyword detail")
    _add_engine_flags(p_ask)
    p_ask.set_defaults(func=_cmd_ask)

    p_eval = sub.add_parser("eval", help="run a QA suite and report metrics")
    p_eval.add_argument("--qa", required=True,
                        help="TSV of question<TAB>expected_id ('-' for none)")
    p_eval.add_argument("--format", choices=["json", "table", "both"],
                        default="both", help="what to print (default both)")
    p_eval.add_argument("--out", help="also write the JSON report to this file")
    _add_engine_flags(p_eval)
    p_eval.set_defaults(func=_cmd_eval)

    p_repl = sub.add_parser("repl", help="answer questions read line-by-line "
                            "from standard input")
    _add_engine_flags(p_repl)
    p_repl.set_defaults(func=_cmd_repl)

    p_tag = sub.add_parser("tag", help="print token/TAG pairs for a sentence")
    p_tag.add_argument("text", help="the sentence to tag")
    _add_resource_flags(p_tag)
    p_tag.set_defaults(func=_cmd_tag)

    return parser


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = _load_env_config()
    except FileNotFoundError as exc:
        print(f"error: config file not found: {exc.filename}", file=sys.stderr)
        return 2
    except (json.JSONDecodeError, ValueError) as exc:
        print(f"error: bad config file: {exc}", file=sys.stderr)
        return 1
    try:
        return args.func(args, config)
    except FileNotFoundError as exc:
        name = exc.filename if exc.filename else exc
        print(f"error: file not found: {name}", file=sys.stderr)
        return 2
    except (
        CorpusFormatError,
        IndexFormatError,
        QaFormatError,
        TableFormatError,
        EmptyQuestionError,
        EmptyCorpusError,
        ValueError,
    ) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
