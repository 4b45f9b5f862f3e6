"""Experiment harness: preprocess -> select -> cluster -> evaluate -> compare.

A bench experiment runs one algorithm arm for a number of seeded runs, reports
per-run clustering metrics and reduction ratios, and aggregates them by
arithmetic mean (standard deviation is reported alongside). Everything is a
pure function of (config, base seed): run r uses seed XOR r, and each document
inside a run derives a further substream by XOR with its index, so outputs are
byte-identical across repetitions and worker schedules. Wall times appear only
in runs.csv, never in summary.json.
"""

import csv
import json
import logging
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, asdict, replace
from pathlib import Path

import numpy as np

from .baselines import GwoConfig, TlboConfig, run_gwo, run_tlbo
from .corpus import WeightMatrix, build_vsm, load_corpus, reduce_vsm
from .hybrid import DocumentRunResult, GlobalSelection, HybridConfig, run_corpus_fs
from .kmeans import run_kmeans
from .metrics import MetricsReport, pairwise_counts
from .optcore import derive_seed
from .stats import mann_whitney_u, t_test

logger = logging.getLogger(__name__)

ALGORITHMS = ("tlbo-gwo", "tlbo", "gwo", "none")
MEASURES = ("accuracy", "precision", "recall", "f_measure")

COMPARISON_HEADER = ["dataset", "measure", "arm_a", "arm_b", "method", "p_value", "significant@0.05"]


@dataclass
class ExperimentConfig:
    corpus: str = ""
    format: str = "dirs"
    algorithm: str = "tlbo-gwo"
    iter_max: int = 500
    n_pop: int = 30
    p_max: float = 0.08
    k: int = 2
    kmeans_max_iter: int = 50
    runs: int = 20
    seed: int = 0
    out: str | None = None
    dataset: str | None = None
    workers: int = 1

    def __post_init__(self):
        if self.algorithm not in ALGORITHMS:
            raise ValueError(f"unknown algorithm {self.algorithm!r}, expected one of {ALGORITHMS}")
        if self.runs < 1:
            raise ValueError(f"runs must be >= 1, got {self.runs}")
        if self.workers < 1:
            raise ValueError(f"workers must be >= 1, got {self.workers}")

    @property
    def dataset_name(self) -> str:
        return self.dataset or (Path(self.corpus).name if self.corpus else "dataset")

    @classmethod
    def from_file(cls, path: str | Path, **overrides) -> "ExperimentConfig":
        """Load a JSON config; keyword overrides (CLI flags) win over file values."""
        fields = json.loads(Path(path).read_text(encoding="utf-8"))
        unknown = set(fields) - set(cls.__dataclass_fields__)
        if unknown:
            raise ValueError(f"unknown config fields in {path}: {sorted(unknown)}")
        fields.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**fields)


@dataclass
class RunReport:
    run_index: int
    seed: int
    metrics: MetricsReport
    wall_time: float
    trace_dir: str | None

    @property
    def reduction_ratio(self) -> float:
        return self.metrics.reduction_ratio


def _tlbo_doc_runner(w, config: HybridConfig, rng, doc_index: int) -> DocumentRunResult:
    mask, trace = run_tlbo(w, TlboConfig(config.iter_max, config.n_pop), rng)
    return DocumentRunResult(doc_index, mask, trace[-1][0], trace)


def _gwo_doc_runner(w, config: HybridConfig, rng, doc_index: int) -> DocumentRunResult:
    mask, trace = run_gwo(w, GwoConfig(config.iter_max, config.n_pop), rng)
    return DocumentRunResult(doc_index, mask, trace[-1][0], trace)


_DOC_RUNNERS = {"tlbo-gwo": None, "tlbo": _tlbo_doc_runner, "gwo": _gwo_doc_runner}


def select_features(vsm: WeightMatrix, config: ExperimentConfig, run_seed: int) -> GlobalSelection:
    """Per-document feature selection with the configured algorithm arm."""
    fs_config = HybridConfig(
        iter_max=config.iter_max, n_pop=config.n_pop, p_max=config.p_max, seed=run_seed
    )
    return run_corpus_fs(vsm, fs_config, doc_runner=_DOC_RUNNERS[config.algorithm])


def _single_run(vsm: WeightMatrix, labels, config: ExperimentConfig, run_index: int):
    run_seed = derive_seed(config.seed, run_index)
    start = time.perf_counter()
    if config.algorithm == "none":
        selection = None
        reduced = vsm
        reduction = 0.0
    else:
        selection = select_features(vsm, config, run_seed)
        reduced = reduce_vsm(vsm, selection.global_mask)
        reduction = selection.reduction_ratio
    model = run_kmeans(reduced, config.k, config.kmeans_max_iter)
    report = MetricsReport.from_counts(pairwise_counts(model.assignment, labels), reduction)
    wall = time.perf_counter() - start
    return run_seed, report, wall, selection


def _run_job(args):
    vsm_weights, labels, config, run_index = args
    try:
        return run_index, _single_run(WeightMatrix(vsm_weights), labels, config, run_index), None
    except Exception as exc:  # propagated with the run index by the caller
        return run_index, None, f"{type(exc).__name__}: {exc}"


def run_experiment(config: ExperimentConfig):
    """Load the corpus, build the VSM and run the full multi-run experiment."""
    docs = load_corpus(config.corpus, config.format)
    labels = [d.label for d in docs]
    vocab, vsm = build_vsm(docs)
    return run_experiment_on(vsm, labels, config, vocab_terms=vocab.terms)


def run_experiment_on(vsm: WeightMatrix, labels, config: ExperimentConfig, vocab_terms=None):
    """Run the experiment on an already-built weight matrix.

    Returns (reports, summary). Per-run artifacts (convergence traces, selected
    terms) are written incrementally when config.out is set, so the files of
    completed runs survive a failure in a later run.
    """
    labels = list(labels)
    out_dir = Path(config.out) if config.out else None
    if out_dir:
        out_dir.mkdir(parents=True, exist_ok=True)

    jobs = [(vsm.weights, labels, config, r) for r in range(config.runs)]
    if config.workers > 1:
        with ProcessPoolExecutor(max_workers=config.workers) as pool:
            results = pool.map(_run_job, jobs)
            reports = _collect(results, config, out_dir, vocab_terms)
    else:
        reports = _collect(map(_run_job, jobs), config, out_dir, vocab_terms)

    summary = _summarize(config, vsm, reports)
    return reports, summary


def _collect(results, config, out_dir, vocab_terms) -> list[RunReport]:
    reports = []
    for run_index, payload, error in results:
        if error is not None:
            raise RuntimeError(f"run {run_index} failed: {error}")
        run_seed, metrics, wall, selection = payload
        trace_dir = None
        if out_dir and selection is not None:
            _write_run_artifacts(out_dir, run_index, selection, vocab_terms)
            trace_dir = str(out_dir)
        reports.append(RunReport(run_index, run_seed, metrics, wall, trace_dir))
        logger.info("run %d done: accuracy=%.4f reduction=%.4f",
                    run_index, metrics.accuracy, metrics.reduction_ratio)
    return reports


def _write_run_artifacts(out_dir: Path, run_index: int, selection: GlobalSelection, vocab_terms) -> None:
    for result in selection.per_document:
        path = out_dir / f"convergence_{run_index}_{result.doc_index}.csv"
        with path.open("w", encoding="utf-8") as fh:
            fh.write("iter,best,mean\n")
            for it, (best, mean) in enumerate(result.trace):
                fh.write(f"{it},{best!r},{mean!r}\n")
    terms_path = out_dir / f"selected_terms_{run_index}.txt"
    selected = np.flatnonzero(selection.global_mask)
    with terms_path.open("w", encoding="utf-8") as fh:
        for j in selected.tolist():
            fh.write((vocab_terms[j] if vocab_terms else str(j)) + "\n")


def _summarize(config: ExperimentConfig, vsm: WeightMatrix, reports: list[RunReport]) -> dict:
    run_rows = [
        {"run": r.run_index, "seed": r.seed, **r.metrics.as_dict()}
        for r in reports
    ]
    aggregate = {}
    for key in MEASURES + ("reduction_ratio",):
        values = np.array([row[key] for row in run_rows], dtype=np.float64)
        aggregate[key] = {"mean": float(values.mean()), "std": float(values.std())}
    return {
        "dataset": config.dataset_name,
        "algorithm": config.algorithm,
        "config": {
            "corpus": config.corpus,
            "format": config.format,
            "algorithm": config.algorithm,
            "iter_max": config.iter_max,
            "n_pop": config.n_pop,
            "p_max": config.p_max,
            "k": config.k,
            "kmeans_max_iter": config.kmeans_max_iter,
            "runs": config.runs,
            "seed": config.seed,
        },
        "n": vsm.n,
        "t": vsm.t,
        "runs": run_rows,
        "aggregate": aggregate,
    }


def compare_arms(metrics_by_arm, proposed: str, dataset: str = "dataset", alpha: float = 0.05) -> list[dict]:
    """Table-style comparison rows: proposed arm vs every other, both tests.

    metrics_by_arm maps arm name to its per-run MetricsReport list; all arms
    must have the same number of runs.
    """
    if proposed not in metrics_by_arm:
        raise ValueError(f"proposed arm {proposed!r} not among arms {sorted(metrics_by_arm)}")
    if len(metrics_by_arm) < 2:
        raise ValueError("need at least 2 arms to compare")
    counts = {arm: len(runs) for arm, runs in metrics_by_arm.items()}
    if len(set(counts.values())) != 1:
        raise ValueError(f"mismatched run counts across arms: {counts}")

    rows = []
    for measure in MEASURES:
        a_values = [getattr(m, measure) for m in metrics_by_arm[proposed]]
        for arm, arm_metrics in metrics_by_arm.items():
            if arm == proposed:
                continue
            b_values = [getattr(m, measure) for m in arm_metrics]
            for method_fn in (t_test, mann_whitney_u):
                result = method_fn(a_values, b_values)
                rows.append({
                    "dataset": dataset,
                    "measure": measure,
                    "arm_a": proposed,
                    "arm_b": arm,
                    "method": result.method,
                    "p_value": result.p_value,
                    "significant@0.05": result.p_value < alpha,
                })
    return rows


def metrics_from_summary(summary: dict) -> list[MetricsReport]:
    """Rebuild the per-run MetricsReport list from a summary.json payload."""
    return [
        MetricsReport(
            accuracy=row["accuracy"],
            precision=row["precision"],
            recall=row["recall"],
            f_measure=row["f_measure"],
            reduction_ratio=row["reduction_ratio"],
        )
        for row in summary["runs"]
    ]


def write_comparison(rows: list[dict], path: str | Path) -> None:
    with Path(path).open("w", newline="", encoding="utf-8") as fh:
        writer = csv.DictWriter(fh, fieldnames=COMPARISON_HEADER)
        writer.writeheader()
        for row in rows:
            writer.writerow(row)


def emit_reports(reports: list[RunReport], summary: dict, out_dir: str | Path, comparison=None) -> list[Path]:
    """Write summary.json and runs.csv (plus comparison.csv when rows are given)."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    written = []

    summary_path = out_dir / "summary.json"
    summary_path.write_text(json.dumps(summary, indent=2) + "\n", encoding="utf-8")
    written.append(summary_path)

    runs_path = out_dir / "runs.csv"
    with runs_path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["run", "seed"] + list(MEASURES) + ["reduction_ratio", "wall_time_s", "trace_dir"])
        for r in reports:
            m = r.metrics
            writer.writerow([
                r.run_index, r.seed, m.accuracy, m.precision, m.recall,
                m.f_measure, m.reduction_ratio, f"{r.wall_time:.3f}", r.trace_dir or "",
            ])
    written.append(runs_path)

    if comparison is not None:
        comparison_path = out_dir / "comparison.csv"
        write_comparison(comparison, comparison_path)
        written.append(comparison_path)
    return written
