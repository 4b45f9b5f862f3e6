"""Command-line interface.

Subcommands mirror the pipeline stages: preprocess (corpus -> vocab + VSM),
select (VSM -> mask + traces), cluster (VSM [+mask] -> assignment), evaluate
(assignment + labels -> metrics), bench (full seeded experiment), compare
(arm summaries -> significance table). Exit code 0 on success, nonzero with a
message on stderr otherwise.
"""

import argparse
import json
import logging
import sys
from pathlib import Path

import numpy as np

from . import corpus as corpus_mod
from .harness import (
    ALGORITHMS,
    ExperimentConfig,
    compare_arms,
    emit_reports,
    metrics_from_summary,
    run_experiment,
    select_features,
    write_comparison,
)
from .kmeans import run_kmeans
from .metrics import MetricsReport, pairwise_counts, reduction_ratio
from .optcore import MASK_DTYPE


def _add_fs_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--algorithm", choices=[a for a in ALGORITHMS if a != "none"],
                   default="tlbo-gwo", help="feature-selection arm")
    p.add_argument("--iters", type=int, default=500, help="optimizer iterations")
    p.add_argument("--pop", type=int, default=30, help="population size")
    p.add_argument("--pmax", type=float, default=0.08, help="maximum mutation probability")
    p.add_argument("--seed", type=int, default=0, help="base RNG seed")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="textfs",
        description="Feature selection for text clustering: TF-IDF preprocessing, "
                    "hybrid TLBO-GWO selection, cosine K-means and evaluation.",
    )
    parser.add_argument("--verbose", action="store_true", help="log per-run progress")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("preprocess", help="corpus -> vocab.txt, vsm.csv, labels.csv")
    p.add_argument("--corpus", required=True, help="corpus directory or CSV file")
    p.add_argument("--format", choices=["dirs", "csv"], default="dirs")
    p.add_argument("--stopwords", help="stop-word file overriding the bundled list")
    p.add_argument("--out", required=True, help="output directory")

    p = sub.add_parser("select", help="VSM -> selected terms, mask and traces")
    p.add_argument("--vsm", required=True, help="vsm.csv from preprocess")
    p.add_argument("--vocab", required=True, help="vocab.txt from preprocess")
    _add_fs_flags(p)
    p.add_argument("--out", required=True, help="output directory")

    p = sub.add_parser("cluster", help="VSM [+mask] -> assignment.csv")
    p.add_argument("--vsm", required=True)
    p.add_argument("--mask", help="mask.txt from select; omit to cluster the full VSM")
    p.add_argument("--k", type=int, required=True, help="number of clusters")
    p.add_argument("--kmeans-iters", type=int, default=50)
    p.add_argument("--out", required=True, help="output directory")

    p = sub.add_parser("evaluate", help="assignment + labels -> metrics JSON")
    p.add_argument("--assignment", required=True, help="assignment.csv from cluster")
    p.add_argument("--labels", required=True, help="labels.csv from preprocess")
    p.add_argument("--t-original", type=int, help="original feature count (for reduction ratio)")
    p.add_argument("--t-selected", type=int, help="selected feature count (for reduction ratio)")
    p.add_argument("--out", help="write metrics JSON here instead of stdout")

    p = sub.add_parser("bench", help="full seeded multi-run experiment")
    p.add_argument("--config", help="JSON config file; flags override its values")
    p.add_argument("--corpus", help="corpus directory or CSV file")
    p.add_argument("--format", choices=["dirs", "csv"], default=None)
    p.add_argument("--algorithm", choices=list(ALGORITHMS), default=None)
    p.add_argument("--iters", type=int, default=None)
    p.add_argument("--pop", type=int, default=None)
    p.add_argument("--pmax", type=float, default=None)
    p.add_argument("--k", type=int, default=None)
    p.add_argument("--kmeans-iters", type=int, default=None)
    p.add_argument("--runs", type=int, default=None)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--workers", type=int, default=None)
    p.add_argument("--dataset", default=None, help="dataset name used in reports")
    p.add_argument("--out", default=None, help="report directory")

    p = sub.add_parser("compare", help="arm summaries -> comparison.csv")
    p.add_argument("arms", nargs="+", metavar="NAME=SUMMARY_JSON",
                   help="arm summaries; the first is the proposed arm")
    p.add_argument("--alpha", type=float, default=0.05)
    p.add_argument("--dataset", default=None)
    p.add_argument("--out", required=True, help="comparison CSV path")
    return parser


def _cmd_preprocess(args) -> int:
    docs = corpus_mod.load_corpus(args.corpus, args.format)
    stoplist = corpus_mod.load_stopwords(args.stopwords) if args.stopwords else None
    vocab, vsm = corpus_mod.build_vsm(docs, stoplist=stoplist)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    corpus_mod.save_vocabulary(vocab, out / "vocab.txt")
    corpus_mod.save_vsm(vsm, out / "vsm.csv")
    corpus_mod.save_labels(docs, out / "labels.csv")
    print(f"preprocessed {vsm.n} documents, {vsm.t} terms -> {out}")
    return 0


def _load_mask(path: str, t: int) -> np.ndarray:
    line = Path(path).read_text(encoding="utf-8").strip()
    if len(line) != t or set(line) - {"0", "1"}:
        raise ValueError(f"{path}: expected a line of {t} mask bits")
    return np.frombuffer(line.encode("ascii"), dtype=np.uint8) - ord("0")


def _cmd_select(args) -> int:
    vsm = corpus_mod.load_vsm(args.vsm)
    terms = corpus_mod.load_vocabulary(args.vocab)
    if len(terms) != vsm.t:
        raise ValueError(f"vocabulary has {len(terms)} terms but VSM has t={vsm.t}")
    config = ExperimentConfig(
        corpus="", algorithm=args.algorithm, iter_max=args.iters,
        n_pop=args.pop, p_max=args.pmax, seed=args.seed,
    )
    selection = select_features(vsm, config, args.seed)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)

    mask = selection.global_mask.astype(MASK_DTYPE)
    (out / "mask.txt").write_text("".join(str(int(b)) for b in mask) + "\n", encoding="utf-8")
    with (out / "selected_terms.txt").open("w", encoding="utf-8") as fh:
        for j in np.flatnonzero(mask).tolist():
            fh.write(terms[j] + "\n")
    with (out / "convergence.csv").open("w", encoding="utf-8") as fh:
        fh.write("doc,iter,best,mean\n")
        for res in selection.per_document:
            for it, (best, mean) in enumerate(res.trace):
                fh.write(f"{res.doc_index},{it},{best!r},{mean!r}\n")
    payload = {
        "t": vsm.t,
        "selected": int(mask.sum()),
        "reduction_ratio": selection.reduction_ratio,
        "per_document_best_fitness": {
            str(res.doc_index): res.best_fitness for res in selection.per_document
        },
    }
    (out / "selection.json").write_text(json.dumps(payload, indent=2) + "\n", encoding="utf-8")
    print(f"selected {payload['selected']}/{vsm.t} terms "
          f"(reduction {selection.reduction_ratio:.3f}) -> {out}")
    return 0


def _cmd_cluster(args) -> int:
    vsm = corpus_mod.load_vsm(args.vsm)
    if args.mask:
        vsm = corpus_mod.reduce_vsm(vsm, _load_mask(args.mask, vsm.t))
    model = run_kmeans(vsm, args.k, args.kmeans_iters)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    with (out / "assignment.csv").open("w", encoding="utf-8") as fh:
        fh.write("doc_index,cluster\n")
        for i, c in enumerate(model.assignment.tolist()):
            fh.write(f"{i},{c}\n")
    print(f"clustered {vsm.n} documents into k={args.k} "
          f"({model.iterations_run} iterations) -> {out / 'assignment.csv'}")
    return 0


def _load_assignment(path: str) -> list[int]:
    rows = []
    with open(path, encoding="utf-8") as fh:
        header = fh.readline().strip()
        if header != "doc_index,cluster":
            raise ValueError(f"{path}: expected header 'doc_index,cluster', got {header!r}")
        for line in fh:
            line = line.strip()
            if line:
                idx, cluster = line.split(",")
                rows.append((int(idx), int(cluster)))
    rows.sort()
    return [c for _, c in rows]


def _cmd_evaluate(args) -> int:
    assignment = _load_assignment(args.assignment)
    labels = corpus_mod.load_labels(args.labels)
    if len(assignment) != len(labels):
        raise ValueError(f"{len(assignment)} assignments vs {len(labels)} labels")
    counts = pairwise_counts(assignment, labels)
    reduction = 0.0
    if args.t_original is not None and args.t_selected is not None:
        reduction = reduction_ratio(args.t_original, args.t_selected)
    report = MetricsReport.from_counts(counts, reduction)
    text = json.dumps(report.as_dict(), indent=2)
    if args.out:
        Path(args.out).write_text(text + "\n", encoding="utf-8")
    else:
        print(text)
    return 0


def _cmd_bench(args) -> int:
    overrides = {
        "corpus": args.corpus, "format": args.format, "algorithm": args.algorithm,
        "iter_max": args.iters, "n_pop": args.pop, "p_max": args.pmax, "k": args.k,
        "kmeans_max_iter": args.kmeans_iters, "runs": args.runs, "seed": args.seed,
        "workers": args.workers, "dataset": args.dataset, "out": args.out,
    }
    if args.config:
        config = ExperimentConfig.from_file(args.config, **overrides)
    else:
        missing = [name for name in ("corpus", "k") if overrides[name] is None]
        if missing:
            raise ValueError(f"--config or flags required; missing {missing}")
        config = ExperimentConfig(**{k: v for k, v in overrides.items() if v is not None})
    reports, summary = run_experiment(config)
    if config.out:
        emit_reports(reports, summary, config.out)
        print(f"wrote reports to {config.out}")
    agg = summary["aggregate"]
    print(f"{config.dataset_name} [{config.algorithm}] over {config.runs} runs: "
          f"accuracy={agg['accuracy']['mean']:.4f} "
          f"f_measure={agg['f_measure']['mean']:.4f} "
          f"reduction={agg['reduction_ratio']['mean']:.4f}")
    return 0


def _cmd_compare(args) -> int:
    arms = {}
    for spec in args.arms:
        if "=" not in spec:
            raise ValueError(f"expected NAME=SUMMARY_JSON, got {spec!r}")
        name, path = spec.split("=", 1)
        arms[name] = json.loads(Path(path).read_text(encoding="utf-8"))
    proposed = args.arms[0].split("=", 1)[0]
    dataset = args.dataset or next(iter(arms.values()))["dataset"]
    metrics_by_arm = {name: metrics_from_summary(s) for name, s in arms.items()}
    rows = compare_arms(metrics_by_arm, proposed, dataset=dataset, alpha=args.alpha)
    write_comparison(rows, args.out)
    significant = sum(row["significant@0.05"] for row in rows)
    print(f"wrote {len(rows)} comparison rows ({significant} significant) -> {args.out}")
    return 0


_COMMANDS = {
    "preprocess": _cmd_preprocess,
    "select": _cmd_select,
    "cluster": _cmd_cluster,
    "evaluate": _cmd_evaluate,
    "bench": _cmd_bench,
    "compare": _cmd_compare,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return _COMMANDS[args.command](args)
    except Exception as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
