"""Command-line entry point for reproducible training and evaluation runs.

Subcommands: synth, split, train, perplexity, topics, export, credit,
tagrec.  Option precedence is flags > config file (--config, JSON keyed by
flag names with underscores) > built-in defaults.  Every run writes a
manifest (config echo, seed, versions) into its output directory.  Exit
codes: 0 success, 1 usage, 2 validation, 3 runtime.
"""

from __future__ import annotations

import argparse
import json
import os
import platform
import sys

import numpy as np

from . import __version__, evaluate, model_io
from .corpus import (generate_synthetic, load_corpus, load_doc_labels,
                     load_tags, save_corpus, save_tags, split_corpus)
from .exceptions import (ConfigError, CorpusFormatError, TagTopicError,
                         ValidationError)
from .lda import TrainConfig, fold_in, perplexity, train_lda
from .messages import load_checkpoint, save_checkpoint
from .model_io import CHECKPOINT_FILE, save_model_dump
from .ttm import (TtmConfig, credit_rows, train_ttm, ttm_extras,
                  ttm_from_extras)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_VALIDATION = 2
EXIT_RUNTIME = 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits 2 on bad usage; route through our own codes instead
    def error(self, message):
        raise UsageError(message)


TRAIN_DEFAULTS = {
    "model": "lda",
    "topics": 10,
    "alpha": None,
    "beta": 0.01,
    "iters": 500,
    "tol": 1e-4,
    "schedule": "sequential",
    "seed": 0,
    "omega1": 0.2,
    "omega2": 0.0,
    "order": 3,
    "tuple_cap": 10_000,
    "threads": None,
    "credit_dump": False,
    "credit_top_k": 1,
}


def _merge_options(args, defaults):
    """flags > config file > defaults; flag absence is represented by None
    (booleans by False)."""
    merged = dict(defaults)
    config_path = getattr(args, "config", None)
    if config_path:
        with open(config_path, encoding="utf-8") as f:
            file_conf = json.load(f)
        unknown = set(file_conf) - set(defaults)
        if unknown:
            raise ConfigError(
                f"unknown config file keys: {sorted(unknown)}")
        merged.update(file_conf)
    for key in defaults:
        val = getattr(args, key, None)
        if val is not None and val is not False:
            merged[key] = val
    return merged


def _write_manifest(out_dir, command, options, filename="manifest.json"):
    os.makedirs(out_dir or ".", exist_ok=True)
    manifest = {
        "command": command,
        "argv": sys.argv[1:],
        "options": {k: v for k, v in sorted(options.items())},
        "versions": {
            "tagtopic": __version__,
            "numpy": np.__version__,
            "python": platform.python_version(),
        },
    }
    with open(os.path.join(out_dir or ".", filename), "w",
              encoding="utf-8") as f:
        json.dump(manifest, f, indent=2, sort_keys=True, default=str)
        f.write("\n")


def _sidecar_manifest(out_file, command, options):
    directory, name = os.path.split(os.path.abspath(out_file))
    _write_manifest(directory, command, options,
                    filename=name + ".manifest.json")


def _set_threads(threads):
    if threads is not None:
        import numba
        numba.set_num_threads(int(threads))


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def cmd_synth(args):
    out = args.out
    corpus, tags, truth = generate_synthetic(
        args.topics, args.docs, args.vocab, args.num_tags,
        args.tags_per_doc, args.tokens_per_doc, args.concentration,
        args.seed)
    os.makedirs(out, exist_ok=True)
    save_corpus(corpus, os.path.join(out, "corpus.txt"))
    save_tags(tags, os.path.join(out, "tags.txt"))
    model_io.save_matrix(truth.true_theta,
                         os.path.join(out, "truth_theta.txt"))
    model_io.save_matrix(truth.true_phi, os.path.join(out, "truth_phi.txt"))
    _write_manifest(out, "synth", vars(args))
    print(f"wrote synthetic corpus D={corpus.num_docs} W={corpus.num_vocab} "
          f"nnz={corpus.nnz} to {out}")
    return EXIT_OK


def cmd_split(args):
    corpus = load_corpus(args.corpus)
    tags = load_tags(args.tags, corpus.num_docs) if args.tags else None
    result = split_corpus(corpus, tags, args.test_fraction, args.seed)
    out = args.out
    os.makedirs(out, exist_ok=True)
    save_corpus(result.train, os.path.join(out, "train.txt"))
    save_corpus(result.test, os.path.join(out, "test.txt"))
    save_tags(result.train_tags, os.path.join(out, "train_tags.txt"))
    save_tags(result.test_tags, os.path.join(out, "test_tags.txt"))
    with open(os.path.join(out, "split.json"), "w", encoding="utf-8") as f:
        json.dump({"train_doc_ids": result.train_doc_ids,
                   "test_doc_ids": result.test_doc_ids}, f)
        f.write("\n")
    _write_manifest(out, "split", vars(args))
    print(f"split {corpus.num_docs} docs into {result.train.num_docs} train "
          f"/ {result.test.num_docs} test")
    return EXIT_OK


def _train_configs(opts):
    common = dict(n_topics=opts["topics"], alpha=opts["alpha"],
                  beta=opts["beta"], max_iter=opts["iters"],
                  tol=opts["tol"], schedule=opts["schedule"],
                  seed=opts["seed"])
    if opts["model"] == "ttm":
        cap = opts["tuple_cap"]
        return TtmConfig(**common, omega1=opts["omega1"],
                         omega2=opts["omega2"], order=opts["order"],
                         tuple_cap=None if cap in (0, None) else cap)
    return TrainConfig(**common)


def cmd_train(args):
    opts = _merge_options(args, TRAIN_DEFAULTS)
    _set_threads(opts["threads"])
    if opts["threads"] is not None and args.schedule is None:
        # worker pools only exist under barrier commits
        opts["schedule"] = "synchronous"
    if opts["model"] not in ("lda", "ttm"):
        raise UsageError("--model must be lda or ttm")
    corpus = load_corpus(args.corpus)
    tags = load_tags(args.tags, corpus.num_docs) if args.tags else None
    config = _train_configs(opts)
    out = args.out
    os.makedirs(out, exist_ok=True)

    initial_state = initial_ttm = None
    start_iteration = 0
    if args.resume:
        initial_state, start_iteration, kind, extras = \
            load_checkpoint(args.resume, corpus)
        if kind != opts["model"]:
            raise ValidationError(
                f"checkpoint was written by a {kind} run, not "
                f"{opts['model']}")
        if opts["model"] == "ttm":
            initial_ttm = ttm_from_extras(corpus, tags, config, extras)

    if opts["model"] == "ttm":
        result = train_ttm(corpus, tags, config,
                           initial_state=initial_state,
                           initial_ttm=initial_ttm,
                           start_iteration=start_iteration)
    else:
        result = train_lda(corpus, config, initial_state=initial_state,
                           start_iteration=start_iteration)

    save_model_dump(out, result.params, config, result.trace,
                    opts["model"])
    ckpt_extras = None
    if opts["model"] == "ttm":
        ckpt_extras = ttm_extras(result.extras["ttm"])
    save_checkpoint(os.path.join(out, CHECKPOINT_FILE), result.state,
                    result.n_iter, kind=opts["model"], extras=ckpt_extras)
    if opts["model"] == "ttm" and opts["credit_dump"]:
        with open(os.path.join(out, "credit.txt"), "w",
                  encoding="utf-8") as f:
            for d, w, t, p in credit_rows(result.extras["ttm"], corpus,
                                          top_k=opts["credit_top_k"]):
                f.write(f"{d} {w} {t} {repr(p)}\n")
    _write_manifest(out, "train", opts)
    final_perp = result.trace[-1][2] if result.trace else float("nan")
    print(f"trained {opts['model']} for {result.n_iter} iterations; "
          f"final training perplexity {final_perp:.6f}")
    return EXIT_OK


def cmd_perplexity(args):
    meta, _, phi = model_io.load_model_dump(args.model_dir)
    corpus = load_corpus(args.corpus)
    config = TrainConfig(
        n_topics=meta["n_topics"], alpha=meta["alpha"], beta=meta["beta"],
        max_iter=meta["max_iter"], tol=meta["tol"],
        seed=meta["seed"] if args.seed is None else args.seed)
    if corpus.nnz and corpus.word_ids.max() >= phi.shape[1]:
        raise ValidationError(
            "test corpus vocabulary exceeds the model vocabulary")
    theta = fold_in(corpus, phi, config)
    value = perplexity(theta, phi, corpus)
    print(repr(value))
    return EXIT_OK


def cmd_topics(args):
    _, _, phi = model_io.load_model_dump(args.model_dir)
    vocab = None
    if args.vocab:
        with open(args.vocab, encoding="utf-8") as f:
            vocab = [line.strip() for line in f if line.strip()]
    tables = evaluate.top_words(phi, args.k, vocab=vocab)
    for j, row in enumerate(tables):
        words = " ".join(str(wd) for wd, _ in row)
        print(f"topic {j}: {words}")
    return EXIT_OK


def cmd_export(args):
    _, theta, _ = model_io.load_model_dump(args.model_dir)
    if args.kind == "links":
        if not args.pairs:
            raise UsageError("--pairs is required for --kind links")
        pairs = []
        with open(args.pairs, encoding="utf-8") as f:
            for lineno, line in enumerate(f, start=1):
                if not line.strip():
                    continue
                cols = line.split()
                if len(cols) != 3:
                    raise CorpusFormatError("expected 'd d2 label'",
                                            args.pairs, lineno)
                pairs.append((int(cols[0]), int(cols[1]), cols[2]))
        n = evaluate.export_link_features(theta, pairs, args.out_file)
        _sidecar_manifest(args.out_file, "export", vars(args))
        print(f"wrote {n} link feature rows to {args.out_file}")
    else:
        if not args.labels:
            raise UsageError("--labels is required for --kind docs")
        labels = load_doc_labels(args.labels, theta.shape[0])
        written, skipped = evaluate.export_doc_features(
            theta, {d: labels.get(d) for d in range(theta.shape[0])},
            args.out_file)
        _sidecar_manifest(args.out_file, "export", vars(args))
        print(f"wrote {written} document feature rows to {args.out_file} "
              f"({skipped} unlabeled skipped)")
    return EXIT_OK


def cmd_credit(args):
    corpus = load_corpus(args.corpus)
    tags = load_tags(args.tags, corpus.num_docs)
    state, _, kind, extras = load_checkpoint(args.checkpoint, corpus)
    if kind != "ttm":
        raise ValidationError("credit export needs a ttm checkpoint")
    config = TtmConfig(n_topics=state.n_topics, seed=state.rng_seed)
    ttm_state = ttm_from_extras(corpus, tags, config, extras)
    with open(args.out_file, "w", encoding="utf-8") as f:
        for d, w, t, p in credit_rows(ttm_state, corpus, top_k=args.k):
            f.write(f"{d} {w} {t} {repr(p)}\n")
    _sidecar_manifest(args.out_file, "credit", vars(args))
    print(f"wrote credit rows to {args.out_file}")
    return EXIT_OK


def cmd_tagrec(args):
    svm1 = evaluate.load_scores(args.svm1)
    svm2 = evaluate.load_scores(args.svm2)
    scores = evaluate.TagRecScores(svm1, svm2, mix_weight=args.omega)
    suggestions = evaluate.fuse_tagrec_scores(scores, top_k=args.top_k)
    num_docs = args.num_docs
    if num_docs is None:
        num_docs = 1 + max(d for d, _ in svm1)
    truth = load_tags(args.truth, num_docs)
    result = evaluate.tagrec_metrics(suggestions, truth)
    os.makedirs(args.out, exist_ok=True)
    with open(os.path.join(args.out, "suggestions.txt"), "w",
              encoding="utf-8") as f:
        for d in sorted(suggestions):
            for t, y in suggestions[d]:
                f.write(f"{d} {t} {repr(y)}\n")
    evaluate.write_tagrec_report(result,
                                 os.path.join(args.out, "tagrec_report.csv"))
    _write_manifest(args.out, "tagrec", vars(args))
    print(f"mean recall {result.mean_recall:.4f}  mean precision "
          f"{result.mean_precision:.4f}  rate+ {result.rate_positive:.2%}")
    return EXIT_OK


# ---------------------------------------------------------------------------

def build_parser():
    parser = _Parser(prog="tagtopic",
                     description="Belief-propagation topic modeling for "
                                 "tagged corpora")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("synth", parents=[], help="generate a synthetic "
                       "tag-correlated corpus")
    p.add_argument("--topics", type=int, required=True)
    p.add_argument("--docs", type=int, required=True)
    p.add_argument("--vocab", type=int, required=True)
    p.add_argument("--num-tags", type=int, required=True)
    p.add_argument("--tags-per-doc", type=int, default=1)
    p.add_argument("--tokens-per-doc", type=int, default=100)
    p.add_argument("--concentration", type=float, default=10.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("split", help="seeded train/test split")
    p.add_argument("--corpus", required=True)
    p.add_argument("--tags")
    p.add_argument("--test-fraction", type=float, default=0.2)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_split)

    p = sub.add_parser("train", help="train lda or ttm")
    p.add_argument("--corpus", required=True)
    p.add_argument("--tags")
    p.add_argument("--config", help="JSON file with option defaults")
    p.add_argument("--model", choices=["lda", "ttm"])
    p.add_argument("--topics", type=int)
    p.add_argument("--alpha", type=float)
    p.add_argument("--beta", type=float)
    p.add_argument("--iters", type=int)
    p.add_argument("--tol", type=float)
    p.add_argument("--schedule", choices=["sequential", "synchronous"])
    p.add_argument("--seed", type=int)
    p.add_argument("--omega1", type=float)
    p.add_argument("--omega2", type=float)
    p.add_argument("--order", type=int, choices=[2, 3])
    p.add_argument("--tuple-cap", type=int, dest="tuple_cap",
                   help="0 disables subsampling")
    p.add_argument("--threads", type=int)
    p.add_argument("--credit-dump", action="store_true", dest="credit_dump")
    p.add_argument("--credit-top-k", type=int, dest="credit_top_k")
    p.add_argument("--resume", help="checkpoint to continue from")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("perplexity", help="held-out perplexity via fold-in")
    p.add_argument("--model-dir", required=True)
    p.add_argument("--corpus", required=True)
    p.add_argument("--seed", type=int)
    p.set_defaults(func=cmd_perplexity)

    p = sub.add_parser("topics", help="print top-k words per topic")
    p.add_argument("--model-dir", required=True)
    p.add_argument("-k", type=int, default=10)
    p.add_argument("--vocab", help="one token per line, id order")
    p.set_defaults(func=cmd_topics)

    p = sub.add_parser("export", help="write classifier feature files")
    p.add_argument("--model-dir", required=True)
    p.add_argument("--kind", choices=["links", "docs"], required=True)
    p.add_argument("--pairs", help="lines 'd d2 label' for --kind links")
    p.add_argument("--labels", help="lines 'd label' for --kind docs")
    p.add_argument("--out-file", required=True)
    p.set_defaults(func=cmd_export)

    p = sub.add_parser("credit", help="dump per-word tag credit")
    p.add_argument("--corpus", required=True)
    p.add_argument("--tags", required=True)
    p.add_argument("--checkpoint", required=True)
    p.add_argument("-k", type=int, default=1)
    p.add_argument("--out-file", required=True)
    p.set_defaults(func=cmd_credit)

    p = sub.add_parser("tagrec", help="fuse scores and compute metrics")
    p.add_argument("--svm1", required=True)
    p.add_argument("--svm2", required=True)
    p.add_argument("--truth", required=True)
    p.add_argument("--omega", type=float, default=evaluate.DEFAULT_MIX_WEIGHT)
    p.add_argument("--top-k", type=int, default=evaluate.DEFAULT_TOP_TAGS,
                   dest="top_k")
    p.add_argument("--num-docs", type=int, dest="num_docs")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_tagrec)

    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ValidationError, CorpusFormatError, ConfigError) as exc:
        print(f"validation error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except FileNotFoundError as exc:
        print(f"validation error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except TagTopicError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    except json.JSONDecodeError as exc:
        print(f"validation error: bad JSON: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
