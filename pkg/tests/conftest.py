"""Shared fixtures: synthetic corpora, rng stubs and brute-force oracles."""

import numpy as np
import pytest

from textfs.corpus import RawDocument

CONSONANTS = "bcdfgjkmpqvwxz"


def letter_word(prefix: str, i: int) -> str:
    """Distinct alphabetic tokens that the stemmer and stop list leave alone."""
    return prefix + CONSONANTS[i // len(CONSONANTS)] + CONSONANTS[i % len(CONSONANTS)]


def make_desk_corpus(
    seed: int = 1,
    n_classes: int = 3,
    docs_per_class: int = 10,
    anchors: int = 5,
    anchor_tf: tuple[int, int] = (4, 5),
    fillers: int = 15,
    fillers_per_doc: int = 8,
    filler_tf: tuple[int, int] = (1, 2),
    noise_terms: int = 60,
    noise_tf: tuple[int, int] = (1, 3),
    within_prob: float = 0.8,
    cross_prob: float = 0.05,
) -> list[RawDocument]:
    """Synthetic labelled corpus with disjoint class vocabularies plus shared noise.

    Every class document carries all of its class's high-frequency anchor terms
    and a sample of low-frequency fillers. Noise terms are split into blocks
    that cut across class boundaries (documents i, i+3, i+6 ... share a block),
    so without feature selection the cosine structure is pulled toward the
    noise grouping, while each document's top TF-IDF weights stay class terms.
    """
    rng = np.random.default_rng(seed)
    prefixes = ["bql", "dwm", "ghr", "kpt", "mzv"][:n_classes]
    class_vocab = [
        [letter_word(p, i) for i in range(anchors + fillers)] for p in prefixes
    ]
    noise_vocab = [letter_word("znq", i) for i in range(noise_terms)]
    blocks = max(n_classes, 1)
    per_block = noise_terms // blocks if noise_terms else 0
    docs = []
    for c in range(n_classes):
        for d in range(docs_per_class):
            noise_group = (c * docs_per_class + d) % blocks
            tokens = []
            for j in range(anchors):
                tokens += [class_vocab[c][j]] * int(rng.integers(anchor_tf[0], anchor_tf[1] + 1))
            for j in rng.choice(fillers, size=fillers_per_doc, replace=False):
                tokens += [class_vocab[c][anchors + j]] * int(rng.integers(filler_tf[0], filler_tf[1] + 1))
            for b in range(blocks):
                for word in noise_vocab[b * per_block:(b + 1) * per_block]:
                    p = within_prob if b == noise_group else cross_prob
                    if rng.random() < p:
                        tokens += [word] * int(rng.integers(noise_tf[0], noise_tf[1] + 1))
            rng.shuffle(tokens)
            docs.append(RawDocument(id=len(docs), text=" ".join(tokens), label=f"class{c}"))
    return docs


def write_corpus_dir(docs: list[RawDocument], root) -> None:
    """Materialise documents as the directory ingestion format."""
    for doc in docs:
        class_dir = root / doc.label
        class_dir.mkdir(parents=True, exist_ok=True)
        (class_dir / f"doc{doc.id:04d}.txt").write_text(doc.text, encoding="utf-8")


@pytest.fixture(scope="session")
def desk_docs():
    return make_desk_corpus()


@pytest.fixture(scope="session")
def desk_labels(desk_docs):
    return [d.label for d in desk_docs]


class FixedRng:
    """Stand-in for a numpy Generator that replays queued draws.

    Each queued entry is either a scalar (broadcast over the requested shape)
    or an array reshaped to it; used for arithmetic anchors with pinned r's.
    """

    def __init__(self, randoms=(), integers=()):
        self._randoms = list(randoms)
        self._integers = list(integers)

    def _shape(self, value, size):
        if size is None:
            return float(value) if np.isscalar(value) else np.asarray(value, dtype=np.float64)
        if np.isscalar(value):
            return np.full(size, float(value))
        return np.asarray(value, dtype=np.float64).reshape(size)

    def random(self, size=None):
        return self._shape(self._randoms.pop(0), size)

    def integers(self, low, high, size=None, dtype=np.int64):
        value = self._integers.pop(0)
        if size is None:
            return dtype(value)
        if np.isscalar(value):
            return np.full(size, value, dtype=dtype)
        return np.asarray(value).reshape(size).astype(dtype)


def mad_reference(mask, weights) -> float:
    """Independent pure-python MAD evaluation used as the test oracle."""
    selected = [w for bit, w in zip(mask, weights) if bit]
    if len(selected) <= 1:
        return 0.0
    mean = sum(selected) / len(selected)
    return sum(abs(x - mean) for x in selected) / len(selected)


def brute_force_mad_optimum(weights) -> float:
    """Exhaustive MAD optimum over every nonempty mask (t <= ~16)."""
    t = len(weights)
    best = 0.0
    for bits in range(1, 1 << t):
        mask = [(bits >> j) & 1 for j in range(t)]
        best = max(best, mad_reference(mask, weights))
    return best
