"""Cosine-similarity K-means over a (possibly reduced) weight matrix.

Fully deterministic: seeding picks the k most central documents (highest mean
cosine similarity to the others), assignment breaks ties toward the lower
centroid index, and empty clusters are reseeded with the document farthest
from every current centroid.
"""

from dataclasses import dataclass

import numpy as np

from .corpus import WeightMatrix


@dataclass
class ClusterModel:
    k: int
    centroids: np.ndarray   # (k, t)
    assignment: np.ndarray  # (n,) values in 0..k-1
    iterations_run: int


def cosine_similarity(u: np.ndarray, v: np.ndarray) -> float:
    """Cosine of two vectors; 0 when either has zero norm."""
    u = np.asarray(u, dtype=np.float64)
    v = np.asarray(v, dtype=np.float64)
    if u.shape != v.shape:
        raise ValueError(f"vector lengths differ: {u.shape} vs {v.shape}")
    nu = np.linalg.norm(u)
    nv = np.linalg.norm(v)
    if nu == 0.0 or nv == 0.0:
        return 0.0
    return float(u @ v / (nu * nv))


def _cosine_matrix(rows: np.ndarray, others: np.ndarray) -> np.ndarray:
    """Pairwise cosine similarities; zero-norm rows yield 0 everywhere."""
    norm_a = np.linalg.norm(rows, axis=1)
    norm_b = np.linalg.norm(others, axis=1)
    sims = rows @ others.T
    denom = norm_a[:, None] * norm_b[None, :]
    return np.divide(sims, denom, out=np.zeros_like(sims), where=denom > 0)


def seed_centroids(vsm: WeightMatrix, k: int) -> np.ndarray:
    """Initial centroids: the k most central documents, skipping duplicate rows."""
    n = vsm.n
    if not 1 <= k <= n:
        raise ValueError(f"k={k} outside 1..{n}")
    w = vsm.weights
    sims = _cosine_matrix(w, w)
    mean_sim = (sims.sum(axis=1) - np.diag(sims)) / max(n - 1, 1)
    order = np.lexsort((np.arange(n), -mean_sim))
    chosen: list[int] = []
    for i in order:
        if any(np.array_equal(w[i], w[j]) for j in chosen):
            continue
        chosen.append(int(i))
        if len(chosen) == k:
            break
    if len(chosen) < k:
        raise ValueError(f"k={k} exceeds the {len(chosen)} distinct document rows")
    return w[chosen].copy()


def assign(vsm: WeightMatrix, centroids: np.ndarray) -> np.ndarray:
    """Nearest-centroid assignment by cosine; equal similarity goes to the lower index."""
    if centroids.shape[0] < 1:
        raise ValueError("need at least one centroid")
    sims = _cosine_matrix(vsm.weights, centroids)
    return sims.argmax(axis=1)


def update_centroids(vsm: WeightMatrix, assignment: np.ndarray, k: int) -> np.ndarray:
    """Mean of each cluster's rows; an empty cluster is reseeded with the document
    whose best similarity to any already-defined centroid is lowest."""
    w = vsm.weights
    centroids = np.zeros((k, w.shape[1]), dtype=np.float64)
    defined = np.zeros(k, dtype=bool)
    for c in range(k):
        rows = w[assignment == c]
        if rows.shape[0] > 0:
            centroids[c] = rows.mean(axis=0)
            defined[c] = True
    used: list[int] = []
    for c in np.flatnonzero(~defined):
        best_sim = _cosine_matrix(w, centroids[defined]).max(axis=1)
        if used:
            best_sim[used] = np.inf
        pick = int(best_sim.argmin())
        centroids[c] = w[pick]
        defined[c] = True
        used.append(pick)
    return centroids


def run_kmeans(vsm: WeightMatrix, k: int, max_iter: int = 50) -> ClusterModel:
    """Assign/update loop until the assignment stabilises or max_iter is hit.

    Documents with all-zero rows are attached to the largest cluster at the end
    (they carry no similarity information).
    """
    n = vsm.n
    if not 2 <= k <= n:
        raise ValueError(f"k={k} outside 2..{n}")
    centroids = seed_centroids(vsm, k)
    assignment = assign(vsm, centroids)
    iterations = 0
    for step in range(1, max_iter + 1):
        centroids = update_centroids(vsm, assignment, k)
        new_assignment = assign(vsm, centroids)
        iterations = step
        converged = np.array_equal(new_assignment, assignment)
        assignment = new_assignment
        if converged:
            break
    zero = ~vsm.weights.any(axis=1)
    if zero.any() and (~zero).any():
        counts = np.bincount(assignment[~zero], minlength=k)
        assignment = assignment.copy()
        assignment[zero] = int(counts.argmax())
    return ClusterModel(k, centroids, assignment, iterations)
