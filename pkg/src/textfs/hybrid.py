"""Hybrid TLBO-GWO feature selection.

Each iteration runs three stages in order: Teaching (uniform crossover of every
student with the best one, greedy acceptance), Interactive learning (wolf-style
update toward the three best students, unconditional replacement with the
archive preserving the best) and Self-learning (rank-based bit mutation, greedy
acceptance). The optimizer runs document by document; the per-document masks
are OR-combined into one global feature subset.

Masks produced by the bit-space operators (crossover, mutation) reset the
member's continuous position to +1/-1 per bit so the next wolf update starts
from a position consistent with the mask.
"""

from dataclasses import dataclass, field

import numpy as np

from .baselines import _wolf_step, decay_a, select_leaders
from .metrics import reduction_ratio
from .optcore import (
    MASK_DTYPE,
    MutationPolicy,
    Population,
    crossover_mix,
    mad_fitness_batch,
    make_population,
    new_rng,
    derive_seed,
    positions_from_mask,
    random_mask,
    rank_mutation_prob,
    rank_population,
    sigmoid_binarize,
)

Trace = list[tuple[float, float]]


@dataclass
class HybridConfig:
    iter_max: int = 500
    n_pop: int = 30
    p_max: float = 0.08
    seed: int = 0

    def __post_init__(self):
        if self.n_pop < 3:
            raise ValueError(f"n_pop must be >= 3, got {self.n_pop}")
        if not 0.0 < self.p_max <= 1.0:
            raise ValueError(f"p_max must be in (0, 1], got {self.p_max}")
        if self.iter_max < 0:
            raise ValueError(f"iter_max must be >= 0, got {self.iter_max}")


@dataclass
class DocumentRunResult:
    doc_index: int
    best_mask: np.ndarray
    best_fitness: float
    trace: Trace


@dataclass
class GlobalSelection:
    """Union of the per-document best masks over the full vocabulary."""

    global_mask: np.ndarray
    per_document: list[DocumentRunResult] = field(default_factory=list)
    reduction_ratio: float = 0.0


def _adopt_masks(pop: Population, improved: np.ndarray, cand_masks, cand_fit) -> None:
    """Greedy acceptance of bit-space candidates, resetting positions to +-1."""
    pop.masks[improved] = cand_masks[improved]
    pop.fitness[improved] = cand_fit[improved]
    pop.positions[improved] = positions_from_mask(cand_masks[improved])
    pop.absorb_best()


def teaching_stage(pop: Population, fitness_fn, rng: np.random.Generator) -> Population:
    """Cross every student with the teacher (best member); keep improvements."""
    teacher_mask = pop.masks[pop.best_index()].copy()
    patterns = rng.integers(0, 2, size=pop.masks.shape, dtype=MASK_DTYPE)
    cand_masks = crossover_mix(pop.masks, teacher_mask, patterns)
    cand_fit = fitness_fn(cand_masks)
    _adopt_masks(pop, cand_fit > pop.fitness, cand_masks, cand_fit)
    return pop


def interactive_learning_stage(pop: Population, fitness_fn, a: float, rng: np.random.Generator) -> Population:
    """Wolf update of all members toward the leaders snapshotted at stage entry.

    Replacement is unconditional; the archive is brought up to date before the
    members are overwritten and again after the new masks are evaluated.
    """
    pop.absorb_best()
    alpha, beta, delta = select_leaders(pop)
    leaders = np.stack([alpha.position, beta.position, delta.position])
    r1 = rng.random((3, pop.n_pop, pop.t))
    r2 = rng.random((3, pop.n_pop, pop.t))
    pop.positions = _wolf_step(pop.positions, leaders[:, None, :], a, r1, r2)
    pop.masks = sigmoid_binarize(pop.positions, rng)
    pop.fitness = fitness_fn(pop.masks)
    pop.absorb_best()
    return pop


def self_learning_stage(pop: Population, fitness_fn, policy: MutationPolicy, rng: np.random.Generator) -> Population:
    """Rank-based per-bit mutation; the best member's rate is 0; keep improvements."""
    ranks = rank_population(pop.fitness)
    p = np.array([rank_mutation_prob(int(r), pop.n_pop, policy.p_max) for r in ranks])
    flips = (rng.random(pop.masks.shape) < p[:, None]).astype(MASK_DTYPE)
    cand_masks = pop.masks ^ flips
    cand_fit = fitness_fn(cand_masks)
    _adopt_masks(pop, cand_fit > pop.fitness, cand_masks, cand_fit)
    return pop


def _sort_by_fitness(pop: Population) -> None:
    """Reorder members best-first (stable on ties)."""
    order = np.lexsort((np.arange(pop.n_pop), -pop.fitness))
    pop.positions = pop.positions[order]
    pop.masks = pop.masks[order]
    pop.fitness = pop.fitness[order]


def _init_population(t: int, n_pop: int, rng, fitness_fn) -> Population:
    masks = np.stack([random_mask(t, rng) for _ in range(n_pop)])
    positions = positions_from_mask(masks)
    fitness = fitness_fn(masks)
    return make_population(positions, masks, fitness)


def run_document_fs(
    doc_weights: np.ndarray,
    config: HybridConfig,
    rng: np.random.Generator,
    doc_index: int = 0,
) -> DocumentRunResult:
    """Full hybrid optimization of one document's feature mask."""
    w = np.asarray(doc_weights, dtype=np.float64)
    if w.size < 1:
        raise ValueError("document weight vector is empty")

    def fitness_fn(masks):
        return mad_fitness_batch(masks, w)

    policy = MutationPolicy(config.p_max)
    pop = _init_population(w.size, config.n_pop, rng, fitness_fn)
    trace: Trace = [(pop.best.fitness, float(pop.fitness.mean()))]
    for it in range(1, config.iter_max + 1):
        teaching_stage(pop, fitness_fn, rng)
        interactive_learning_stage(pop, fitness_fn, decay_a(it, config.iter_max), rng)
        _sort_by_fitness(pop)
        self_learning_stage(pop, fitness_fn, policy, rng)
        trace.append((pop.best.fitness, float(pop.fitness.mean())))
    return DocumentRunResult(doc_index, pop.best.mask.copy(), pop.best.fitness, trace)


def _hybrid_doc_runner(w, config: HybridConfig, rng, doc_index: int) -> DocumentRunResult:
    return run_document_fs(w, config, rng, doc_index=doc_index)


def run_corpus_fs(vsm, config: HybridConfig, doc_runner=None) -> GlobalSelection:
    """Select features document by document and OR the winners together.

    Each document gets its own substream seeded with config.seed XOR its index,
    so results do not depend on processing order. All-zero rows (documents that
    were empty after preprocessing) are skipped; they contribute no features.
    """
    if vsm.n < 1:
        raise ValueError("weight matrix has no documents")
    runner = doc_runner or _hybrid_doc_runner
    global_mask = np.zeros(vsm.t, dtype=MASK_DTYPE)
    per_document: list[DocumentRunResult] = []
    for i in range(vsm.n):
        w = vsm.weights[i]
        if not w.any():
            continue
        result = runner(w, config, new_rng(derive_seed(config.seed, i)), i)
        per_document.append(result)
        global_mask |= result.best_mask.astype(MASK_DTYPE)
    selected = int(global_mask.sum())
    if selected == 0:
        raise ValueError("no document produced a feature mask (all rows zero?)")
    return GlobalSelection(global_mask, per_document, reduction_ratio(vsm.t, selected))
