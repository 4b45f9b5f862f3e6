"""Shared machinery for binary feature-selection optimizers.

Solutions are bit masks over the t terms of one document, paired with a
continuous position vector that the swarm-style updates operate on. Fitness is
the mean absolute difference (MAD) of the selected weights, maximized. All
randomness flows through numpy PCG64 generators so a seed reproduces a run
bit-for-bit on any platform.
"""

from dataclasses import dataclass

import numpy as np
from scipy.special import expit

MASK_DTYPE = np.uint8

_SEED_MASK = (1 << 64) - 1


def new_rng(seed: int) -> np.random.Generator:
    """Deterministic generator (PCG64) for the given 64-bit seed."""
    return np.random.default_rng(seed & _SEED_MASK)


def derive_seed(base: int, index: int) -> int:
    """Substream seed: base XOR index, truncated to 64 bits."""
    return (base ^ index) & _SEED_MASK


@dataclass
class Individual:
    """One candidate solution: continuous position, binary mask, MAD fitness."""

    position: np.ndarray
    mask: np.ndarray
    fitness: float

    def copy(self) -> "Individual":
        return Individual(self.position.copy(), self.mask.copy(), self.fitness)


@dataclass
class Population:
    """Fixed-size population stored row-wise, plus the best-so-far archive."""

    positions: np.ndarray  # (n_pop, t) float
    masks: np.ndarray      # (n_pop, t) {0,1}
    fitness: np.ndarray    # (n_pop,) float
    best: Individual

    @property
    def n_pop(self) -> int:
        return self.masks.shape[0]

    @property
    def t(self) -> int:
        return self.masks.shape[1]

    def member(self, i: int) -> Individual:
        return Individual(self.positions[i].copy(), self.masks[i].copy(), float(self.fitness[i]))

    def best_index(self) -> int:
        """Index of the fittest current member; ties go to the lower index."""
        return int(np.argmax(self.fitness))

    def absorb_best(self) -> None:
        """Fold the current best member into the archive (strict improvement only)."""
        i = self.best_index()
        if self.fitness[i] > self.best.fitness:
            self.best = self.member(i)


def make_population(positions: np.ndarray, masks: np.ndarray, fitness: np.ndarray) -> Population:
    pop = Population(positions, masks, fitness, best=Individual(positions[0].copy(), masks[0].copy(), -np.inf))
    pop.best = pop.member(pop.best_index())
    return pop


# Magnitude of the position written for a mask produced by a bit-space
# operator. Must sit in the saturated part of the logistic (S(4) ~ 0.982) so
# re-binarizing reproduces the adopted mask; softer values (e.g. +-1) make the
# transfer resample ~30% of bits per step and the search cannot consolidate.
POSITION_SCALE = 4.0


def positions_from_mask(mask: np.ndarray) -> np.ndarray:
    """Continuous position consistent with a mask: +scale for set bits, -scale for clear."""
    return POSITION_SCALE * (2.0 * mask.astype(np.float64) - 1.0)


def random_mask(t: int, rng: np.random.Generator) -> np.ndarray:
    """Fair random mask of length t, redrawn until at least one bit is set."""
    if t < 1:
        raise ValueError(f"mask length must be >= 1, got {t}")
    while True:
        bits = rng.integers(0, 2, size=t, dtype=MASK_DTYPE)
        if bits.any():
            return bits


def mad_fitness(mask: np.ndarray, doc_weights: np.ndarray) -> float:
    """Mean absolute difference of the selected weights around their mean.

    Sums over selected features only; an empty or singleton selection scores 0
    (the worst value), never raises.
    """
    mask = np.asarray(mask)
    w = np.asarray(doc_weights, dtype=np.float64)
    if mask.shape != w.shape:
        raise ValueError(f"mask length {mask.shape} does not match weights {w.shape}")
    selected = w[mask.astype(bool)]
    if selected.size <= 1:
        return 0.0
    center = selected.mean()
    return float(np.abs(selected - center).mean())


def mad_fitness_batch(masks: np.ndarray, doc_weights: np.ndarray) -> np.ndarray:
    """MAD fitness of each row of a (n, t) mask matrix."""
    m = masks.astype(np.float64)
    w = np.asarray(doc_weights, dtype=np.float64)
    counts = m.sum(axis=1)
    safe = np.maximum(counts, 1.0)
    means = (m @ w) / safe
    deviations = (np.abs(w[None, :] - means[:, None]) * m).sum(axis=1)
    return np.where(counts > 1, deviations / safe, 0.0)


def logistic(x):
    """Standard logistic transfer 1 / (1 + e^-x)."""
    return expit(x)


def sigmoid_binarize(position: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    """Sample a mask: bit j is 1 iff a fresh U[0,1) draw falls below logistic(x_j)."""
    position = np.asarray(position, dtype=np.float64)
    return (rng.random(position.shape) < logistic(position)).astype(MASK_DTYPE)


def crossover_mix(student: np.ndarray, teacher: np.ndarray, pattern: np.ndarray) -> np.ndarray:
    """Positionwise pick: the student's bit where the pattern is 1, else the teacher's."""
    return np.where(np.asarray(pattern) == 1, student, teacher).astype(MASK_DTYPE)


def uniform_crossover(student: np.ndarray, teacher: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    """Uniform crossover of two masks with an independent fair bit per position."""
    student = np.asarray(student)
    teacher = np.asarray(teacher)
    if student.shape != teacher.shape:
        raise ValueError(f"mask lengths differ: {student.shape} vs {teacher.shape}")
    pattern = rng.integers(0, 2, size=student.shape, dtype=MASK_DTYPE)
    return crossover_mix(student, teacher, pattern)


@dataclass
class MutationPolicy:
    """Rank-based mutation schedule; p_max is the per-bit rate of the weakest member."""

    p_max: float = 0.08

    def __post_init__(self):
        if not 0.0 < self.p_max <= 1.0:
            raise ValueError(f"p_max must be in (0, 1], got {self.p_max}")


def rank_mutation_prob(rank: int, n: int, p_max: float) -> float:
    """Mutation probability p_max * (1 - (rank-1)/(n-1)); rank n (the best) gets 0."""
    if n < 2:
        raise ValueError(f"rank-based mutation needs n >= 2, got {n}")
    if not 1 <= rank <= n:
        raise ValueError(f"rank {rank} outside 1..{n}")
    return p_max * (1.0 - (rank - 1) / (n - 1))


def mutate(mask: np.ndarray, p: float, rng: np.random.Generator) -> np.ndarray:
    """Flip each bit independently with probability p."""
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"flip probability must be in [0, 1], got {p}")
    mask = np.asarray(mask, dtype=MASK_DTYPE)
    flips = (rng.random(mask.shape) < p).astype(MASK_DTYPE)
    return mask ^ flips


def rank_population(fitnesses) -> np.ndarray:
    """Ranks 1..n: the fittest member gets n, the weakest 1.

    Equal fitnesses are broken deterministically: the lower member index takes
    the higher rank.
    """
    f = np.asarray(fitnesses, dtype=np.float64)
    n = f.size
    order = np.lexsort((np.arange(n), -f))
    ranks = np.empty(n, dtype=np.int64)
    ranks[order] = np.arange(n, 0, -1)
    return ranks
