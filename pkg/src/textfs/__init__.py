"""Feature selection for text clustering.

TF-IDF preprocessing, per-document binary feature selection with a hybrid
TLBO-GWO optimizer (plus plain TLBO and GWO comparison arms), cosine K-means
clustering, pair-counting evaluation metrics and a seeded benchmark harness.
"""

from .baselines import GwoConfig, TlboConfig, decay_a, run_gwo, run_tlbo, wolf_update
from .corpus import (
    RawDocument,
    Vocabulary,
    WeightMatrix,
    build_vsm,
    load_corpus,
    load_stopwords,
    reduce_vsm,
    remove_stopwords,
    stem,
    tokenize,
)
from .harness import (
    ExperimentConfig,
    RunReport,
    compare_arms,
    emit_reports,
    run_experiment,
    run_experiment_on,
)
from .hybrid import (
    DocumentRunResult,
    GlobalSelection,
    HybridConfig,
    run_corpus_fs,
    run_document_fs,
)
from .kmeans import ClusterModel, cosine_similarity, run_kmeans
from .metrics import (
    ConfusionCounts,
    MetricsReport,
    accuracy,
    f_measure,
    pairwise_counts,
    precision,
    recall,
    reduction_ratio,
)
from .optcore import (
    Individual,
    MutationPolicy,
    Population,
    mad_fitness,
    mutate,
    new_rng,
    random_mask,
    rank_mutation_prob,
    rank_population,
    sigmoid_binarize,
    uniform_crossover,
)
from .stats import TestResult, mann_whitney_u, t_test

__version__ = "0.1.0"
