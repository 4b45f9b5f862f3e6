"""Corpus ingestion and the TF-IDF vector space model.

Pipeline: tokenize -> stop-word removal -> Porter stemming -> term weighting
w[i,j] = tf(i,j) * ln(n / df(j)). Documents that come out empty are kept as
all-zero rows (and flagged with a warning) so ground-truth labels stay aligned.
"""

import csv
import logging
import math
import re
from collections import Counter
from dataclasses import dataclass
from importlib import resources
from pathlib import Path

import numpy as np

from . import porter

logger = logging.getLogger(__name__)

_TOKEN_RE = re.compile(r"[^\W\d_]+", re.UNICODE)

stem = porter.stem


@dataclass(frozen=True)
class RawDocument:
    """One ingested document; the label is ground truth for evaluation only."""

    id: int
    text: str
    label: str


@dataclass
class Vocabulary:
    """Lexicographically ordered stemmed terms with document frequencies."""

    terms: list[str]
    index: dict[str, int]
    df: np.ndarray

    @property
    def t(self) -> int:
        return len(self.terms)


@dataclass
class WeightMatrix:
    """n x t matrix of TF-IDF weights; row i is the vector of document i."""

    weights: np.ndarray

    @property
    def n(self) -> int:
        return self.weights.shape[0]

    @property
    def t(self) -> int:
        return self.weights.shape[1]

    def zero_rows(self) -> np.ndarray:
        """Indices of documents that became empty after preprocessing."""
        return np.flatnonzero(~self.weights.any(axis=1))


def tokenize(text: str) -> list[str]:
    """Split text into lowercase alphabetic runs; digits and punctuation separate."""
    return _TOKEN_RE.findall(text.lower())


def remove_stopwords(tokens: list[str], stoplist) -> list[str]:
    return [tok for tok in tokens if tok not in stoplist]


def load_stopwords(path: str | Path | None = None) -> frozenset[str]:
    """Load a stop-word list (one word per line); defaults to the bundled SMART list."""
    if path is None:
        data = resources.files("textfs").joinpath("data/stopwords_smart.txt").read_text("utf-8")
    else:
        data = Path(path).read_text(encoding="utf-8")
    return frozenset(w.strip() for w in data.splitlines() if w.strip())


def preprocess(text: str, stoplist) -> list[str]:
    """Full preprocessing of one document: tokenize, stop, stem."""
    return [stem(tok) for tok in remove_stopwords(tokenize(text), stoplist)]


def build_vsm(
    documents: list[RawDocument],
    stoplist=None,
    log_base: float | None = None,
) -> tuple[Vocabulary, WeightMatrix]:
    """Build the vocabulary and TF-IDF weight matrix for a corpus.

    idf uses the natural log by default; `log_base` switches the base, which
    rescales every weight by a constant and leaves cosine similarities and
    selection decisions unchanged.
    """
    n = len(documents)
    if n < 2:
        raise ValueError(f"corpus must contain at least 2 documents, got {n}")
    ids = [d.id for d in documents]
    if len(set(ids)) != n:
        raise ValueError("document ids are not unique")
    if stoplist is None:
        stoplist = load_stopwords()

    token_lists = [preprocess(d.text, stoplist) for d in documents]
    empty = [documents[i].id for i, toks in enumerate(token_lists) if not toks]
    if empty:
        logger.warning(
            "%d document(s) empty after preprocessing (ids %s); kept as all-zero rows",
            len(empty), empty,
        )

    terms = sorted({tok for toks in token_lists for tok in toks})
    if not terms:
        raise ValueError("no terms survive preprocessing; the feature space is empty")
    index = {term: j for j, term in enumerate(terms)}

    df = np.zeros(len(terms), dtype=np.int64)
    counts = [Counter(toks) for toks in token_lists]
    for c in counts:
        for term in c:
            df[index[term]] += 1

    idf = np.log(n / df)
    if log_base is not None:
        idf = idf / math.log(log_base)

    weights = np.zeros((n, len(terms)), dtype=np.float64)
    for i, c in enumerate(counts):
        for term, tf in c.items():
            j = index[term]
            weights[i, j] = tf * idf[j]
    return Vocabulary(terms, index, df), WeightMatrix(weights)


def reduce_vsm(vsm: WeightMatrix, global_mask: np.ndarray) -> WeightMatrix:
    """Drop the columns where the mask is 0, preserving survivor order."""
    mask = np.asarray(global_mask)
    if mask.shape != (vsm.t,):
        raise ValueError(f"mask length {mask.shape} does not match t={vsm.t}")
    if not mask.any():
        raise ValueError("all-zero mask would leave an empty feature space")
    return WeightMatrix(vsm.weights[:, mask.astype(bool)].copy())


def load_corpus(path: str | Path, format: str = "dirs") -> list[RawDocument]:
    """Ingest documents from a labelled directory tree or a label,text CSV."""
    path = Path(path)
    if format == "dirs":
        return _load_dirs(path)
    if format == "csv":
        return _load_csv(path)
    raise ValueError(f"unknown corpus format {format!r} (expected 'dirs' or 'csv')")


def _load_dirs(root: Path) -> list[RawDocument]:
    if not root.is_dir():
        raise ValueError(f"corpus directory not found: {root}")
    docs = []
    for class_dir in sorted(p for p in root.iterdir() if p.is_dir()):
        for f in sorted(p for p in class_dir.iterdir() if p.is_file()):
            try:
                text = f.read_text(encoding="utf-8")
            except (OSError, UnicodeDecodeError) as e:
                raise ValueError(f"unreadable document {f}: {e}") from e
            if not text.strip():
                raise ValueError(f"document {f} is empty")
            docs.append(RawDocument(id=len(docs), text=text, label=class_dir.name))
    if not docs:
        raise ValueError(f"no documents found under {root}")
    return docs


def _load_csv(path: Path) -> list[RawDocument]:
    if not path.is_file():
        raise ValueError(f"corpus file not found: {path}")
    docs = []
    with path.open(newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header != ["label", "text"]:
            raise ValueError(f"{path}: expected header 'label,text', got {header!r}")
        for line_no, row in enumerate(reader, start=2):
            if len(row) != 2:
                raise ValueError(f"{path}:{line_no}: expected 2 fields, got {len(row)}")
            label, text = row
            if not text.strip():
                raise ValueError(f"{path}:{line_no}: empty text field")
            docs.append(RawDocument(id=len(docs), text=text, label=label))
    if not docs:
        raise ValueError(f"no records found in {path}")
    return docs


def save_vocabulary(vocab: Vocabulary, path: str | Path) -> None:
    Path(path).write_text("".join(t + "\n" for t in vocab.terms), encoding="utf-8")


def load_vocabulary(path: str | Path) -> list[str]:
    return [line for line in Path(path).read_text(encoding="utf-8").splitlines() if line]


def save_vsm(vsm: WeightMatrix, path: str | Path) -> None:
    """Write the sparse triplet CSV: header 'n=<n>,t=<t>' then doc,term,weight rows."""
    with Path(path).open("w", encoding="utf-8") as fh:
        fh.write(f"n={vsm.n},t={vsm.t}\n")
        rows, cols = np.nonzero(vsm.weights)
        for i, j in zip(rows.tolist(), cols.tolist()):
            fh.write(f"{i},{j},{float(vsm.weights[i, j])!r}\n")


def load_vsm(path: str | Path) -> WeightMatrix:
    with Path(path).open(encoding="utf-8") as fh:
        header = fh.readline().strip()
        m = re.fullmatch(r"n=(\d+),t=(\d+)", header)
        if not m:
            raise ValueError(f"{path}: bad VSM header {header!r}")
        n, t = int(m.group(1)), int(m.group(2))
        weights = np.zeros((n, t), dtype=np.float64)
        for line_no, line in enumerate(fh, start=2):
            line = line.strip()
            if not line:
                continue
            try:
                i_s, j_s, w_s = line.split(",")
                weights[int(i_s), int(j_s)] = float(w_s)
            except (ValueError, IndexError) as e:
                raise ValueError(f"{path}:{line_no}: bad triplet row {line!r}") from e
    return WeightMatrix(weights)


def save_labels(documents: list[RawDocument], path: str | Path) -> None:
    with Path(path).open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["doc_index", "label"])
        for d in documents:
            writer.writerow([d.id, d.label])


def load_labels(path: str | Path) -> list[str]:
    with Path(path).open(newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header != ["doc_index", "label"]:
            raise ValueError(f"{path}: expected header 'doc_index,label', got {header!r}")
        rows = [(int(idx), label) for idx, label in reader]
    rows.sort()
    return [label for _, label in rows]
