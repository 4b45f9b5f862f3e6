"""Reference TLBO and GWO binary optimizers used as comparison arms.

Both work on continuous positions (initialised U[-1, 1]) and obtain masks via
the sigmoid transfer before every fitness evaluation; positions persist across
iterations. The learner-phase direction is adapted for maximization: members
move toward the fitter of the pair (set ``minimize=True`` on the config to run
the textbook minimization form on continuous benchmarks).
"""

from dataclasses import dataclass

import numpy as np

from .optcore import (
    Individual,
    Population,
    mad_fitness_batch,
    make_population,
    sigmoid_binarize,
)

Trace = list[tuple[float, float]]


@dataclass
class TlboConfig:
    """The teaching factor is not tunable: it is drawn from {1, 2} each teacher step."""

    iter_max: int = 500
    n_pop: int = 30
    minimize: bool = False


@dataclass
class GwoConfig:
    iter_max: int = 500
    n_pop: int = 30


@dataclass
class GwoState:
    """Per-iteration wolf-update inputs: decayed coefficient and the three leaders."""

    a: float
    alpha: Individual
    beta: Individual
    delta: Individual
    iteration: int = 0


def decay_a(t: int, iter_max: int) -> float:
    """Linearly decaying coefficient 2 - 2*t/iter_max (2 at t=0, 0 at t=iter_max)."""
    if iter_max < 1:
        raise ValueError(f"iter_max must be >= 1, got {iter_max}")
    if not 0 <= t <= iter_max:
        raise ValueError(f"iteration {t} outside 0..{iter_max}")
    return 2.0 - 2.0 * t / iter_max


def select_leaders(pop: Population) -> tuple[Individual, Individual, Individual]:
    """Snapshot the three fittest members (ties to the lower index) as alpha/beta/delta."""
    if pop.n_pop < 3:
        raise ValueError(f"leader selection needs n_pop >= 3, got {pop.n_pop}")
    order = np.lexsort((np.arange(pop.n_pop), -pop.fitness))
    return pop.member(order[0]), pop.member(order[1]), pop.member(order[2])


def _wolf_step(x: np.ndarray, leaders: np.ndarray, a: float, r1: np.ndarray, r2: np.ndarray) -> np.ndarray:
    """Componentwise wolf update: average of the three leader-guided moves."""
    coef_a = 2.0 * a * r1 - a
    coef_c = 2.0 * r2
    dist = np.abs(coef_c * leaders - x)
    return (leaders - coef_a * dist).mean(axis=0)


def wolf_update(x: np.ndarray, state: GwoState, rng: np.random.Generator) -> np.ndarray:
    """New continuous position of one wolf guided by the alpha/beta/delta leaders."""
    x = np.asarray(x, dtype=np.float64)
    leaders = np.stack([state.alpha.position, state.beta.position, state.delta.position])
    if leaders.shape[1] != x.shape[0]:
        raise ValueError("position length does not match the leaders")
    r1 = rng.random(leaders.shape)
    r2 = rng.random(leaders.shape)
    return _wolf_step(x, leaders, state.a, r1, r2)


def _teacher_candidates(positions: np.ndarray, teacher_position: np.ndarray, t_f: int, r: np.ndarray) -> np.ndarray:
    """Teacher-phase moves: X + r*(teacher - T_F * mean), one scalar r per member."""
    mean_pos = positions.mean(axis=0)
    return positions + r[:, None] * (teacher_position - t_f * mean_pos)


def _learner_candidates(
    positions: np.ndarray,
    fitness: np.ndarray,
    partners: np.ndarray,
    r: np.ndarray,
    minimize: bool = False,
) -> np.ndarray:
    """Learner-phase moves toward the fitter of each (member, partner) pair."""
    diff = positions - positions[partners]
    if minimize:
        toward_self = fitness < fitness[partners]
    else:
        toward_self = fitness > fitness[partners]
    direction = np.where(toward_self, 1.0, -1.0)
    return positions + (r * direction)[:, None] * diff


def _greedy_replace(pop: Population, cand_pos, cand_masks, cand_fit) -> None:
    improved = cand_fit > pop.fitness
    pop.positions[improved] = cand_pos[improved]
    pop.masks[improved] = cand_masks[improved]
    pop.fitness[improved] = cand_fit[improved]
    pop.absorb_best()


def teacher_phase(pop: Population, teacher_position: np.ndarray, t_f: int, fitness_fn, rng) -> Population:
    """Move every member toward the teacher; keep a move only if it improves."""
    r = rng.random(pop.n_pop)
    cand_pos = _teacher_candidates(pop.positions, teacher_position, t_f, r)
    cand_masks = sigmoid_binarize(cand_pos, rng)
    cand_fit = fitness_fn(cand_masks)
    _greedy_replace(pop, cand_pos, cand_masks, cand_fit)
    return pop


def learner_phase(pop: Population, fitness_fn, rng, minimize: bool = False) -> Population:
    """Pair each member with a random other and step toward the fitter one."""
    n = pop.n_pop
    if n < 2:
        raise ValueError("learner phase needs at least 2 members")
    partners = rng.integers(0, n - 1, size=n)
    partners = partners + (partners >= np.arange(n))
    r = rng.random(n)
    cand_pos = _learner_candidates(pop.positions, pop.fitness, partners, r, minimize)
    cand_masks = sigmoid_binarize(cand_pos, rng)
    cand_fit = fitness_fn(cand_masks)
    _greedy_replace(pop, cand_pos, cand_masks, cand_fit)
    return pop


def _init_continuous(t: int, n_pop: int, rng, fitness_fn) -> Population:
    positions = rng.uniform(-1.0, 1.0, size=(n_pop, t))
    masks = sigmoid_binarize(positions, rng)
    fitness = fitness_fn(masks)
    return make_population(positions, masks, fitness)


def run_tlbo(doc_weights: np.ndarray, config: TlboConfig, rng: np.random.Generator) -> tuple[np.ndarray, Trace]:
    """TLBO over one document's weights; returns the archive mask and its trace."""
    w = np.asarray(doc_weights, dtype=np.float64)
    if w.size < 1:
        raise ValueError("document weight vector is empty")

    def fitness_fn(masks):
        return mad_fitness_batch(masks, w)

    pop = _init_continuous(w.size, config.n_pop, rng, fitness_fn)
    trace: Trace = [(pop.best.fitness, float(pop.fitness.mean()))]
    for _ in range(config.iter_max):
        t_f = int(rng.integers(1, 3))
        teacher_position = pop.positions[pop.best_index()].copy()
        teacher_phase(pop, teacher_position, t_f, fitness_fn, rng)
        learner_phase(pop, fitness_fn, rng, config.minimize)
        trace.append((pop.best.fitness, float(pop.fitness.mean())))
    return pop.best.mask.copy(), trace


def run_gwo(doc_weights: np.ndarray, config: GwoConfig, rng: np.random.Generator) -> tuple[np.ndarray, Trace]:
    """GWO over one document's weights; returns the archive mask and its trace."""
    w = np.asarray(doc_weights, dtype=np.float64)
    if w.size < 1:
        raise ValueError("document weight vector is empty")
    if config.n_pop < 3:
        raise ValueError(f"GWO needs n_pop >= 3 for the three leaders, got {config.n_pop}")

    def fitness_fn(masks):
        return mad_fitness_batch(masks, w)

    pop = _init_continuous(w.size, config.n_pop, rng, fitness_fn)
    trace: Trace = [(pop.best.fitness, float(pop.fitness.mean()))]
    for it in range(1, config.iter_max + 1):
        alpha, beta, delta = select_leaders(pop)
        leaders = np.stack([alpha.position, beta.position, delta.position])
        a = decay_a(it, config.iter_max)
        r1 = rng.random((3, pop.n_pop, pop.t))
        r2 = rng.random((3, pop.n_pop, pop.t))
        pop.positions = _wolf_step(pop.positions, leaders[:, None, :], a, r1, r2)
        pop.masks = sigmoid_binarize(pop.positions, rng)
        pop.fitness = fitness_fn(pop.masks)
        pop.absorb_best()
        trace.append((pop.best.fitness, float(pop.fitness.mean())))
    return pop.best.mask.copy(), trace
