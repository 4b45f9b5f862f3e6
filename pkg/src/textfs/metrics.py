"""Pair-counting clustering quality measures and the feature-reduction ratio.

TP/TN/FP/FN are counted over unordered document pairs: a pair agreeing in both
cluster and class label is a true positive, agreeing in cluster only a false
positive, in label only a false negative, in neither a true negative.
"""

from dataclasses import dataclass, asdict

import numpy as np


@dataclass(frozen=True)
class ConfusionCounts:
    tp: int
    tn: int
    fp: int
    fn: int

    @property
    def total(self) -> int:
        return self.tp + self.tn + self.fp + self.fn


@dataclass
class MetricsReport:
    accuracy: float
    precision: float
    recall: float
    f_measure: float
    reduction_ratio: float

    def as_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_counts(cls, counts: ConfusionCounts, reduction: float = 0.0) -> "MetricsReport":
        return cls(
            accuracy=accuracy(counts),
            precision=precision(counts),
            recall=recall(counts),
            f_measure=f_measure(counts),
            reduction_ratio=reduction,
        )


def pairwise_counts(assignment, labels) -> ConfusionCounts:
    """Count cluster/label agreement over all unordered document pairs."""
    a = np.asarray(assignment)
    l = np.asarray(labels)
    if a.shape != l.shape:
        raise ValueError(f"assignment length {a.shape} does not match labels {l.shape}")
    n = a.size
    if n < 2:
        raise ValueError(f"need at least 2 documents, got {n}")
    iu, ju = np.triu_indices(n, k=1)
    same_cluster = a[iu] == a[ju]
    same_label = l[iu] == l[ju]
    tp = int(np.count_nonzero(same_cluster & same_label))
    fp = int(np.count_nonzero(same_cluster & ~same_label))
    fn = int(np.count_nonzero(~same_cluster & same_label))
    tn = int(np.count_nonzero(~same_cluster & ~same_label))
    return ConfusionCounts(tp=tp, tn=tn, fp=fp, fn=fn)


def accuracy(counts: ConfusionCounts) -> float:
    return (counts.tp + counts.tn) / counts.total


def precision(counts: ConfusionCounts) -> float:
    denom = counts.tp + counts.fp
    return counts.tp / denom if denom else 0.0


def recall(counts: ConfusionCounts) -> float:
    denom = counts.tp + counts.fn
    return counts.tp / denom if denom else 0.0


def f_measure(counts: ConfusionCounts) -> float:
    p = precision(counts)
    r = recall(counts)
    return 2.0 * p * r / (p + r) if p + r > 0 else 0.0


def reduction_ratio(t_original: int, t_selected: int) -> float:
    """Fraction of the original features removed: 1 - t_selected / t_original."""
    if t_selected <= 0:
        raise ValueError(f"t_selected must be positive, got {t_selected}")
    if t_selected > t_original:
        raise ValueError(f"t_selected {t_selected} exceeds t_original {t_original}")
    return 1.0 - t_selected / t_original
