"""Command-line entry point: ``elfilter {build-kb,run,evaluate,tune,gen-synthetic,bench}``."""

from __future__ import annotations

import argparse
import logging
import os
import sys
from dataclasses import asdict, replace

from elfilter import corpus as corpus_io
from elfilter import report
from elfilter.config import TUNABLE, ConfigError, EngineConfig, coerce, dump_toml, load_config_file, resolve
from elfilter.corpus import CorpusError
from elfilter.filtering import FilterParams, InitializationError
from elfilter.harness import counts_from_log, grid_search, run_queries, summarize
from elfilter.kb import KBError, build_kb, iter_tsv, load_kb, save_snapshot
from elfilter.linker import METHODS, ExpansionConfig
from elfilter.metrics import MEASURES, macro_average
from elfilter.pipeline import FeaturePipeline
from elfilter.textproc import LancasterStemmer, TextProcessor, UnigramModel, load_stopwords

log = logging.getLogger("elfilter")


class CommandError(Exception):
    pass


def _read_ids(path) -> list[str]:
    with open(path, encoding="utf-8") as f:
        return [line.strip() for line in f if line.strip()]


def _add_engine_args(p: argparse.ArgumentParser, grid: bool = False) -> None:
    p.add_argument("--config", help="TOML file of engine settings (flags override it)")
    for name in ("corpus", "topics", "qrels", "kb", "stopwords", "unigrams", "rules"):
        p.add_argument(f"--{name}", metavar="PATH")
    p.add_argument("--queries", metavar="PATH", help="file of query ids to evaluate, one per line")
    many = " (comma-separated list for the grid)" if grid else ""
    p.add_argument("--alpha", type=str if grid else float, help="weight of relevant posts" + many)
    p.add_argument("--beta", type=str if grid else float, help="weight of non-relevant posts" + many)
    p.add_argument("--eta", type=str if grid else float, help="cosine distance threshold" + many)
    p.add_argument("--method", type=str, choices=None if grid else METHODS, help="expansion method" + many)
    p.add_argument("--rho", type=str if grid else float, help="expansion probability threshold" + many)
    p.add_argument("--min-lp", dest="min_lp", type=str if grid else float, help="minimum link probability" + many)
    if grid:
        p.add_argument("--url-gate", dest="url_gate", type=str, help="true/false list for the grid")
        p.add_argument("--no-url-gate", dest="url_gate", action="store_const", const="false",
                       help="same as --url-gate false")
    else:
        p.add_argument("--url-gate", dest="url_gate", action=argparse.BooleanOptionalAction, default=None,
                       help="mark posts without URLs non-relevant")
    p.add_argument("--unjudged", choices=("fp", "skip"), help="how retrieved unjudged posts count")
    p.add_argument("--exclude-no-relevant", dest="exclude_no_relevant", action=argparse.BooleanOptionalAction,
                   default=None, help="leave queries without relevant posts out of macro T11SU")
    p.add_argument("--workers", type=int, help="parallel query workers")
    p.add_argument("--seed", type=int)
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--figures", action=argparse.BooleanOptionalAction, default=True, help="render figures")
    p.add_argument("--figure-format", default="png", choices=("png", "svg", "pdf"))


def _settings_from_args(args, grid: bool = False) -> tuple[EngineConfig, dict]:
    file_settings, file_grid = ({}, {})
    if args.config:
        file_settings, file_grid = load_config_file(args.config)
    cli = {}
    cli_grid = {}
    for f in ("corpus", "topics", "qrels", "kb", "stopwords", "unigrams", "rules", "queries",
              "unjudged", "exclude_no_relevant", "workers", "seed"):
        cli[f] = getattr(args, f)
    for f in TUNABLE:
        value = getattr(args, f)
        if value is None:
            continue
        if grid:
            cli_grid[f] = [coerce(f, v) for v in value.split(",") if v.strip()]
        else:
            cli[f] = value
    cfg = resolve(file_settings, cli)
    if not grid:
        return cfg, {}
    merged = {**file_grid, **cli_grid}
    full = {f: merged.get(f, [getattr(cfg, f)]) for f in TUNABLE}
    return cfg, full


def _required(cfg: EngineConfig, methods=None) -> tuple[str, ...]:
    methods = methods or [cfg.method]
    req = ("corpus", "topics", "qrels")
    if any(m != "none" for m in methods):
        req += ("kb",)
    return req


def _textproc(cfg: EngineConfig) -> TextProcessor:
    return TextProcessor(
        load_stopwords(cfg.stopwords),
        UnigramModel.from_file(cfg.unigrams) if cfg.unigrams else None,
        LancasterStemmer.from_file(cfg.rules) if cfg.rules else None,
    )


def _load_inputs(cfg: EngineConfig):
    posts = corpus_io.read_path(cfg.corpus, corpus_io.parse_corpus)
    topics = corpus_io.read_path(cfg.topics, corpus_io.parse_topics)
    qrels = corpus_io.read_path(cfg.qrels, corpus_io.parse_qrels)
    if cfg.queries:
        wanted = _read_ids(cfg.queries)
        known = {t.query_id for t in topics}
        missing = [q for q in wanted if q not in known]
        if missing:
            raise CommandError(f"query ids not in topics file: {', '.join(missing)}")
        keep = set(wanted)
        topics = [t for t in topics if t.query_id in keep]
    if not topics:
        raise CommandError("no topics to evaluate")
    return posts, topics, qrels


def _print_table(runs) -> None:
    print("run\tquery\t" + "\t".join(MEASURES))
    for run, summary in runs:
        print(f"{run}\t{report.MACRO_ID}\t" + "\t".join(report._fmt(x) for x in summary.macro.as_tuple()))


def cmd_build_kb(args) -> int:
    if not os.path.isfile(args.tsv):
        raise CommandError(f"KB source not found: {args.tsv}")
    with open(args.tsv, encoding="utf-8") as f:
        kb = build_kb(iter_tsv(f))
    if len(kb) == 0:
        log.warning("%s holds no records; writing an empty KB snapshot", args.tsv)
    save_snapshot(kb, args.out)
    s = kb.summary()
    print(f"mentions\t{s['mentions']}\nentities\t{s['entities']}\npairs\t{s['pairs']}\nsnapshot\t{args.out}")
    return 0


def cmd_run(args) -> int:
    cfg, _ = _settings_from_args(args)
    cfg.validate(_required(cfg))
    posts, topics, qrels = _load_inputs(cfg)
    kb = load_kb(cfg.kb) if cfg.kb else None
    pipeline = FeaturePipeline(_textproc(cfg), kb, cfg.expansion())
    params = FilterParams(cfg.alpha, cfg.beta, cfg.eta, cfg.url_gate)
    results = run_queries(topics, posts, qrels, pipeline, params, cfg.unjudged, cfg.workers)
    summary = summarize(results, cfg.exclude_no_relevant)
    fp = cfg.fingerprint()
    run_name = args.run_name or cfg.method
    os.makedirs(args.out, exist_ok=True)
    runs = [(run_name, summary)]
    with open(os.path.join(args.out, "results.tsv"), "w", encoding="utf-8") as f:
        report.write_results(f, runs, fp)
    with open(os.path.join(args.out, "decisions.jsonl"), "w", encoding="utf-8") as f:
        report.write_decisions(f, results, fp, asdict(cfg))
    with open(os.path.join(args.out, "config.toml"), "w", encoding="utf-8") as f:
        f.write(dump_toml(asdict(cfg)))
    if args.figures:
        report.plot_metrics(runs, os.path.join(args.out, f"metrics.{args.figure_format}"), title=f"{run_name} ({fp})")
    print(f"# config_fingerprint={fp}")
    _print_table(runs)
    return 0


def cmd_evaluate(args) -> int:
    def load(path):
        if not os.path.isfile(path):
            raise CommandError(f"decision log not found: {path}")
        with open(path, encoding="utf-8") as f:
            header, logs = report.read_decisions(f)
        if not logs:
            raise CommandError(f"{path}: no decisions")
        cfg = header.get("config", {})
        unjudged = args.unjudged or cfg.get("unjudged", "fp")
        exclude = cfg.get("exclude_no_relevant", True)
        counts = {q: counts_from_log(ds, unjudged) for q, ds in logs.items()}
        name = args.run_name or cfg.get("method") or os.path.splitext(os.path.basename(path))[0]
        return name, macro_average(counts, exclude), header.get("config_fingerprint", "unknown")

    name, summary, fp = load(args.decisions)
    runs = [(name, summary)]
    out = sys.stdout if args.out in (None, "-") else open(args.out, "w", encoding="utf-8")
    try:
        report.write_results(out, runs, fp)
        if args.baseline:
            base_name, base, _ = load(args.baseline)
            out.write(f"# per-query deltas: {name} minus {base_name}\n")
            out.write("query\t" + "\t".join(f"delta_{m}" for m in MEASURES) + "\n")
            for qid, m in summary.per_query.items():
                b = base.per_query.get(qid)
                if b is None:
                    continue
                deltas = [x - y for x, y in zip(m.as_tuple(), b.as_tuple())]
                out.write(f"{qid}\t" + "\t".join(report._fmt(d) for d in deltas) + "\n")
    finally:
        if out is not sys.stdout:
            out.close()
    return 0


def cmd_tune(args) -> int:
    cfg, grid = _settings_from_args(args, grid=True)
    empty = [f for f, vs in grid.items() if not vs]
    if empty:
        raise CommandError(f"empty grid for {', '.join(empty)}")
    for f, values in grid.items():
        for v in values:
            replace(cfg, **{f: v}).validate()
    cfg.validate(_required(cfg, grid["method"]))
    posts, topics, qrels = _load_inputs(cfg)
    kb = load_kb(cfg.kb) if cfg.kb else None
    textproc = _textproc(cfg)

    def make_pipeline(method, rho, min_lp):
        return FeaturePipeline(textproc, kb if method != "none" else None, ExpansionConfig(method, rho, min_lp))

    best, rows = grid_search(topics, posts, qrels, grid, make_pipeline, cfg.unjudged, cfg.exclude_no_relevant)
    best_cfg = replace(cfg, **best.as_dict())
    fp = cfg.fingerprint()
    os.makedirs(args.out, exist_ok=True)
    with open(os.path.join(args.out, "grid.tsv"), "w", encoding="utf-8") as f:
        report.write_grid(f, rows, fp)
    with open(os.path.join(args.out, "best.toml"), "w", encoding="utf-8") as f:
        f.write(f"# best of {len(rows)} grid points by macro F0.5; grid fingerprint {fp}\n")
        f.write(dump_toml(asdict(best_cfg)))
    if args.figures:
        report.plot_grid(rows, os.path.join(args.out, f"grid.{args.figure_format}"))
    print(f"# config_fingerprint={fp}")
    print(f"grid_points\t{len(rows)}")
    for f in TUNABLE:
        print(f"best_{f}\t{getattr(best, f)}")
    macro = next(r for r in rows if r.best).summary.macro
    for m, v in zip(MEASURES, macro.as_tuple()):
        print(f"best_{m}\t{report._fmt(v)}")
    return 0


def cmd_gen_synthetic(args) -> int:
    from elfilter.synthetic import generate

    ds = generate(
        seed=args.seed,
        n_test=args.test,
        n_validation=args.validation,
        n_relevant=args.relevant,
        n_nonrelevant=args.nonrelevant,
        n_forms=args.forms,
        n_background=args.background,
        n_ambiguous=args.ambiguous,
        distractor_rate=args.distractor_rate,
        hard_negative_rate=args.hard_negative_rate,
    )
    paths = ds.write(args.out)
    for name, path in paths.items():
        print(f"{name}\t{path}")
    return 0


def cmd_bench(args) -> int:
    from elfilter.bench import run_benchmark

    r = run_benchmark(args.posts, args.mentions, args.method, args.eta, args.seed)
    print(f"posts\t{r.posts}\nkb_mentions\t{r.kb_mentions}\nmethod\t{r.method}")
    print(f"seconds\t{r.seconds:.3f}\nposts_per_second\t{r.posts_per_second:.0f}\nretrieved\t{r.retrieved}")
    if args.min_rate and r.posts_per_second < args.min_rate:
        print(f"below required rate of {args.min_rate} posts/s", file=sys.stderr)
        return 1
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="elfilter", description=__doc__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("build-kb", help="compile a KB TSV dump into a binary snapshot")
    p.add_argument("tsv", help="mention<TAB>entity<TAB>pair_link_count<TAB>occurrence_count")
    p.add_argument("--out", required=True, help="snapshot path")
    p.set_defaults(func=cmd_build_kb)

    p = sub.add_parser("run", help="filter the stream for each topic and score the run")
    _add_engine_args(p)
    p.add_argument("--run-name")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("evaluate", help="recompute metrics from a decision log")
    p.add_argument("decisions")
    p.add_argument("--baseline", help="second decision log; per-query deltas are appended")
    p.add_argument("--unjudged", choices=("fp", "skip"))
    p.add_argument("--run-name")
    p.add_argument("--out", help="output TSV (default stdout)")
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("tune", help="grid search maximizing macro F0.5")
    _add_engine_args(p, grid=True)
    p.set_defaults(func=cmd_tune)

    p = sub.add_parser("gen-synthetic", help="write a seeded synthetic dataset")
    p.add_argument("--out", required=True)
    p.add_argument("--seed", type=int, default=13)
    p.add_argument("--test", type=int, default=5)
    p.add_argument("--validation", type=int, default=5)
    p.add_argument("--relevant", type=int, default=40)
    p.add_argument("--nonrelevant", type=int, default=400)
    p.add_argument("--forms", type=int, default=5)
    p.add_argument("--background", type=int, default=1000)
    p.add_argument("--ambiguous", type=int, default=0, help="ambiguous surface forms per target")
    p.add_argument("--distractor-rate", type=float, default=0.4)
    p.add_argument("--hard-negative-rate", type=float, default=0.0,
                   help="share of non-relevant posts that mention the target")
    p.set_defaults(func=cmd_gen_synthetic)

    p = sub.add_parser("bench", help="single-threaded throughput on a synthetic stream")
    p.add_argument("--posts", type=int, default=100_000)
    p.add_argument("--mentions", type=int, default=10_000)
    p.add_argument("--method", choices=METHODS, default="exp2")
    p.add_argument("--eta", type=float, default=0.9)
    p.add_argument("--seed", type=int, default=7)
    p.add_argument("--min-rate", type=float, default=5000.0, help="exit 1 below this many posts/s (0 disables)")
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s: %(message)s")
    try:
        return args.func(args)
    except (CommandError, ConfigError, CorpusError, KBError, InitializationError, ValueError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
