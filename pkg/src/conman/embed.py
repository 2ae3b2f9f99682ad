"""Profile-image affinity analysis over pre-computed embedding vectors.

Vectors arrive already extracted (one JSONL record per account); this module
centers them, projects onto the top principal directions found by power
iteration with deflation, clusters with a single-linkage distance threshold
plus a minimum cluster size, and scores configurations with the silhouette.
Cluster display names are a manual labeling input, never inferred.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import numpy as np

from .core import InteractionKind, StatusKind
from .stats import pct
from .unionfind import UnionFind

NOISE = -1
_POWER_TOL = 1e-9
_POWER_MAX_ITERS = 1000


class UndefinedScore(ValueError):
    pass


class SweepFailed(ValueError):
    pass


@dataclass
class EmbeddingRecord:
    account_id: str
    vector: list[float]

    def __post_init__(self):
        arr = np.asarray(self.vector, dtype=float)
        if arr.ndim != 1 or not np.all(np.isfinite(arr)):
            raise ValueError("embedding vectors must be 1-D and finite")

    def to_dict(self) -> dict:
        return {"account_id": self.account_id, "vector": list(self.vector)}

    @classmethod
    def from_dict(cls, d: dict) -> "EmbeddingRecord":
        return cls(d["account_id"], [float(x) for x in d["vector"]])


def records_to_matrix(records: Sequence[EmbeddingRecord]) -> tuple[list[str], np.ndarray]:
    dims = {len(r.vector) for r in records}
    if len(dims) > 1:
        raise ValueError(f"embedding dimensions differ across records: {sorted(dims)}")
    ids = [r.account_id for r in records]
    return ids, np.array([r.vector for r in records], dtype=float)


@dataclass
class EmbedConfig:
    reduce_to: int
    linkage_cutoff: float
    min_cluster_size: int

    def __post_init__(self):
        if not (2 <= self.reduce_to <= 128):
            raise ValueError("reduce_to must be in [2, 128]")
        if self.linkage_cutoff <= 0:
            raise ValueError("linkage_cutoff must be positive")
        if not (10 <= self.min_cluster_size <= 50):
            raise ValueError("min_cluster_size must be in [10, 50]")

    def to_dict(self) -> dict:
        return {"reduce_to": self.reduce_to, "linkage_cutoff": self.linkage_cutoff,
                "min_cluster_size": self.min_cluster_size}


@dataclass
class EmbedGrid:
    reduce_to: list[int]
    linkage_cutoff: list[float]
    min_cluster_size: list[int]

    def configs(self) -> list[EmbedConfig]:
        return [EmbedConfig(r, c, m)
                for r in sorted(self.reduce_to)
                for c in sorted(self.linkage_cutoff)
                for m in sorted(self.min_cluster_size)]


# ---------------------------------------------------------------------------
# Reduction
# ---------------------------------------------------------------------------

@dataclass
class ReduceResult:
    vectors: np.ndarray          # n x k projected data
    components: np.ndarray       # k x d projection directions
    eigenvalues: np.ndarray
    degenerate: bool = False


def _start_vector(d: int, direction: int) -> np.ndarray:
    # dense start with all components non-zero so overlap with the principal
    # direction never vanishes; varies with the direction index
    v = np.ones(d)
    v[direction % d] += 1.0
    v += 1e-3 * ((np.arange(d) + direction) % 7)
    return v / np.linalg.norm(v)


def reduce(embeddings: np.ndarray, reduce_to: int) -> ReduceResult:
    """Center and project onto the top ``reduce_to`` principal directions.

    Directions come from iterated power method with deflation (tolerance
    1e-9, up to 1000 iterations each); all-identical input yields zero
    vectors with the degenerate flag set instead of an error.
    """
    x = np.asarray(embeddings, dtype=float)
    n, d = x.shape
    if reduce_to > d:
        raise ValueError(f"reduce_to={reduce_to} exceeds data dimension {d}")
    centered = x - x.mean(axis=0)
    denom = max(n - 1, 1)
    cov = centered.T @ centered / denom

    total_var = float(np.trace(cov))
    if total_var <= 1e-18:
        return ReduceResult(np.zeros((n, reduce_to)), np.zeros((reduce_to, d)),
                            np.zeros(reduce_to), degenerate=True)

    components = np.zeros((reduce_to, d))
    eigenvalues = np.zeros(reduce_to)
    work = cov.copy()
    for j in range(reduce_to):
        v = _start_vector(d, j)
        for _ in range(_POWER_MAX_ITERS):
            w = work @ v
            norm = np.linalg.norm(w)
            if norm <= 1e-18:
                break  # remaining directions carry no variance
            w /= norm
            if np.linalg.norm(w - v) < _POWER_TOL:
                v = w
                break
            v = w
        lam = float(v @ work @ v)
        # fix the sign so output is permutation-stable
        pivot = int(np.argmax(np.abs(v)))
        if v[pivot] < 0:
            v = -v
        components[j] = v
        eigenvalues[j] = max(lam, 0.0)
        work = work - lam * np.outer(v, v)

    return ReduceResult(centered @ components.T, components, eigenvalues)


# ---------------------------------------------------------------------------
# Single-linkage clustering
# ---------------------------------------------------------------------------

@dataclass
class ClusterAssignment:
    ids: list[str]
    labels: list[int]
    label_names: dict[int, str] = field(default_factory=dict)

    def mapping(self) -> dict[str, int]:
        return dict(zip(self.ids, self.labels))

    def n_clusters(self) -> int:
        return len({l for l in self.labels if l != NOISE})

    def n_noise(self) -> int:
        return sum(1 for l in self.labels if l == NOISE)

    def to_records(self) -> list[dict]:
        return [{"account_id": i, "label": l,
                 "label_name": self.label_names.get(l)}
                for i, l in zip(self.ids, self.labels)]


def _distance_matrix(vectors: np.ndarray) -> np.ndarray:
    # direct difference form: slower than the expanded quadratic but keeps
    # full precision, so thresholding and scoring agree with naive oracles
    diff = vectors[:, None, :] - vectors[None, :, :]
    return np.sqrt((diff * diff).sum(-1))


def _canonical_labels(component_of: list[int], ids: list[str],
                      min_cluster_size: int) -> list[int]:
    """Components below the size floor become noise; surviving components are
    numbered by descending size, then lexicographic smallest member id."""
    members: dict[int, list[int]] = {}
    for idx, comp in enumerate(component_of):
        members.setdefault(comp, []).append(idx)
    kept = [idxs for idxs in members.values() if len(idxs) >= min_cluster_size]
    kept.sort(key=lambda idxs: (-len(idxs), min(ids[i] for i in idxs)))
    labels = [NOISE] * len(component_of)
    for label, idxs in enumerate(kept):
        for i in idxs:
            labels[i] = label
    return labels


def single_linkage_cluster(vectors: np.ndarray, linkage_cutoff: float,
                           min_cluster_size: int,
                           ids: list[str] | None = None) -> ClusterAssignment:
    """Connected components of the graph with edges at distance < cutoff."""
    vectors = np.asarray(vectors, dtype=float)
    n = len(vectors)
    if n == 0:
        raise ValueError("no vectors to cluster")
    if ids is None:
        ids = [f"{i:06d}" for i in range(n)]
    dist = _distance_matrix(vectors)
    uf = UnionFind(range(n))
    rows, cols = np.nonzero(np.triu(dist < linkage_cutoff, k=1))
    for a, b in zip(rows.tolist(), cols.tolist()):
        uf.union(a, b)
    component_of = [0] * n
    roots: dict[int, int] = {}
    for i in range(n):
        root = uf.find(i)
        component_of[i] = roots.setdefault(root, len(roots))
    return ClusterAssignment(list(ids), _canonical_labels(component_of, list(ids),
                                                          min_cluster_size))


# ---------------------------------------------------------------------------
# Silhouette
# ---------------------------------------------------------------------------

def silhouette(vectors: np.ndarray, labels: Sequence[int]) -> float:
    """Mean s = (b-a)/max(a,b) over non-noise points; needs >= 2 clusters."""
    vectors = np.asarray(vectors, dtype=float)
    labels = np.asarray(labels)
    mask = labels != NOISE
    pts = vectors[mask]
    labs = labels[mask]
    uniq = np.unique(labs)
    if len(uniq) < 2:
        raise UndefinedScore("silhouette needs at least two non-noise clusters")

    dist = _distance_matrix(pts)
    n = len(pts)
    scores = np.zeros(n)
    cluster_masks = {c: labs == c for c in uniq}
    cluster_sizes = {c: int(m.sum()) for c, m in cluster_masks.items()}
    for i in range(n):
        own = labs[i]
        own_mask = cluster_masks[own]
        size = cluster_sizes[own]
        if size <= 1:
            scores[i] = 0.0  # lone point in its cluster contributes zero
            continue
        a = dist[i][own_mask].sum() / (size - 1)
        b = min(dist[i][cluster_masks[other]].mean()
                for other in uniq if other != own)
        denom = max(a, b)
        scores[i] = 0.0 if denom == 0 else (b - a) / denom
    return float(scores.mean())


# ---------------------------------------------------------------------------
# Hyperparameter sweep
# ---------------------------------------------------------------------------

@dataclass
class SweepRow:
    config: EmbedConfig
    score: float | None
    n_clusters: int
    n_noise: int

    def to_dict(self) -> dict:
        d = self.config.to_dict()
        d.update({"score": self.score, "n_clusters": self.n_clusters,
                  "n_noise": self.n_noise})
        return d


@dataclass
class SweepResult:
    best: EmbedConfig
    assignment: ClusterAssignment
    table: list[SweepRow]


def _sweep_one_reduction(ids: list[str], matrix: np.ndarray, reduce_to: int,
                         cutoffs: list[float], sizes: list[int]) -> list[SweepRow]:
    reduced = reduce(matrix, reduce_to).vectors
    dist = _distance_matrix(reduced)
    n = len(ids)
    iu, ju = np.triu_indices(n, k=1)
    weights = dist[iu, ju]
    order = np.argsort(weights, kind="stable")
    sorted_w = weights[order]
    sorted_i = iu[order]
    sorted_j = ju[order]

    rows: list[SweepRow] = []
    uf = UnionFind(range(n))
    edge_ptr = 0
    for cutoff in sorted(cutoffs):
        # incremental single linkage: absorb every edge below this cutoff
        while edge_ptr < len(sorted_w) and sorted_w[edge_ptr] < cutoff:
            uf.union(int(sorted_i[edge_ptr]), int(sorted_j[edge_ptr]))
            edge_ptr += 1
        roots: dict[int, int] = {}
        component_of = [0] * n
        for i in range(n):
            root = uf.find(i)
            component_of[i] = roots.setdefault(root, len(roots))
        for min_size in sorted(sizes):
            labels = _canonical_labels(component_of, ids, min_size)
            assignment = ClusterAssignment(ids, labels)
            try:
                score = silhouette(reduced, labels)
            except UndefinedScore:
                score = None
            rows.append(SweepRow(EmbedConfig(reduce_to, cutoff, min_size), score,
                                 assignment.n_clusters(), assignment.n_noise()))
    return rows


def unit_normalize(matrix: np.ndarray) -> np.ndarray:
    norms = np.linalg.norm(matrix, axis=1, keepdims=True)
    norms[norms == 0] = 1.0
    return matrix / norms


def sweep(records: Sequence[EmbeddingRecord], grid: EmbedGrid,
          threads: int = 1, unit_norm: bool = False) -> SweepResult:
    """Evaluate every grid point; the best is the max silhouette, ties broken
    by fewer noise points, then smaller cutoff, reduce_to, min size."""
    if not grid.reduce_to or not grid.linkage_cutoff or not grid.min_cluster_size:
        raise SweepFailed("empty hyperparameter grid")
    ids, matrix = records_to_matrix(records)
    if unit_norm:
        matrix = unit_normalize(matrix)

    reduce_tos = sorted(set(grid.reduce_to))
    args = [(ids, matrix, r, grid.linkage_cutoff, grid.min_cluster_size)
            for r in reduce_tos]
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            chunks = list(pool.map(lambda a: _sweep_one_reduction(*a), args))
    else:
        chunks = [_sweep_one_reduction(*a) for a in args]
    table = [row for chunk in chunks for row in chunk]

    scored = [r for r in table if r.score is not None]
    if not scored:
        raise SweepFailed("every grid point produced an undefined silhouette")
    best_row = min(scored, key=lambda r: (-r.score, r.n_noise, r.config.linkage_cutoff,
                                          r.config.reduce_to, r.config.min_cluster_size))
    cfg = best_row.config
    reduced = reduce(matrix, cfg.reduce_to).vectors
    assignment = single_linkage_cluster(reduced, cfg.linkage_cutoff,
                                        cfg.min_cluster_size, ids)
    return SweepResult(cfg, assignment, table)


# ---------------------------------------------------------------------------
# Cluster engagement table
# ---------------------------------------------------------------------------

def cluster_engagement_table(assignment: ClusterAssignment,
                             interactions: Iterable,
                             accounts: Mapping[str, object]) -> list[dict]:
    """Share of accounts/follows/replies/quotes per named cluster, plus the
    within-cluster suspension rate. Noise points are excluded throughout."""
    if not assignment.label_names:
        raise ValueError("cluster names must be assigned before building the table")
    label_of = {i: l for i, l in zip(assignment.ids, assignment.labels) if l != NOISE}
    labels = sorted({l for l in assignment.labels if l != NOISE})

    accounts_in: dict[int, set[str]] = {l: set() for l in labels}
    for acct_id, label in label_of.items():
        accounts_in[label].add(acct_id)

    follows = {l: 0 for l in labels}
    replies = {l: 0 for l in labels}
    quoted = {l: 0 for l in labels}
    for itx in interactions:
        label = label_of.get(itx.actor)
        if label is None:
            continue
        if itx.kind is InteractionKind.FOLLOW:
            follows[label] += 1
        elif itx.kind is InteractionKind.REPLY:
            replies[label] += 1
        elif itx.kind is InteractionKind.QUOTED_TWEET:
            quoted[label] += 1

    total_accounts = sum(len(v) for v in accounts_in.values())
    total_follows = sum(follows.values())
    total_replies = sum(replies.values())
    total_quoted = sum(quoted.values())

    rows = []
    for label in labels:
        members = accounts_in[label]
        suspended = 0
        for acct_id in members:
            acct = accounts.get(acct_id)
            terminal = acct.terminal_status() if acct is not None else None
            if terminal is not None and terminal.status is StatusKind.SUSPENDED:
                suspended += 1
        rows.append({
            "label": assignment.label_names.get(label, f"Cluster{label}"),
            "accounts": len(members),
            "scammer_pct": pct(len(members), total_accounts),
            "followers_pct": pct(follows[label], total_follows),
            "replies_pct": pct(replies[label], total_replies),
            "quoted_pct": pct(quoted[label], total_quoted),
            "suspended": suspended,
            "suspended_pct": pct(suspended, len(members)),
        })
    return rows
