"""Projection, single-linkage clustering, silhouette, and the sweep."""

import sys
from pathlib import Path

import numpy as np
import pytest

from conman.core import (AccountStatus, Interaction, InteractionKind,
                         ScamAccount, Source, StatusKind)
from conman.embed import (ClusterAssignment, EmbedConfig, EmbedGrid,
                          EmbeddingRecord, SweepFailed, UndefinedScore,
                          cluster_engagement_table, reduce, silhouette,
                          single_linkage_cluster, sweep)
from conman.rng import SplitMix64

sys.path.insert(0, str(Path(__file__).parent))
from oracles import brute_silhouette, mst_threshold_clusters  # noqa: E402


def _rng_points(rng: SplitMix64, n, dim, scale=1.0):
    return np.array([[scale * (rng.random() - 0.5) for _ in range(dim)]
                     for _ in range(n)])


def _pairwise(x):
    return np.sqrt(((x[:, None, :] - x[None, :, :]) ** 2).sum(-1))


# --- reduce ------------------------------------------------------------------

def test_reduce_full_rank_preserves_distances():
    rng = SplitMix64(1)
    x = _rng_points(rng, 30, 2, scale=10)
    reduced = reduce(x, 2).vectors
    assert np.allclose(_pairwise(x), _pairwise(reduced), atol=1e-6)


def test_reduce_line_in_5d_to_1d_preserves_distances():
    rng = SplitMix64(2)
    direction = np.array([1.0, 2.0, -1.0, 0.5, 3.0])
    direction /= np.linalg.norm(direction)
    ts = np.array([rng.random() * 20 for _ in range(25)])
    x = ts[:, None] * direction[None, :]
    reduced = reduce(x, 1).vectors
    assert np.allclose(_pairwise(x), _pairwise(reduced), atol=1e-6)


def test_reduce_variance_matches_dense_eigensolver():
    rng = SplitMix64(3)
    x = _rng_points(rng, 50, 16, scale=4)
    centered = x - x.mean(axis=0)
    cov = centered.T @ centered / (len(x) - 1)
    eigenvalues = np.sort(np.linalg.eigvalsh(cov))[::-1]
    for k in (1, 3, 8):
        result = reduce(x, k)
        projected_var = result.vectors.var(axis=0, ddof=1).sum()
        assert abs(projected_var - eigenvalues[:k].sum()) < 1e-6
        assert np.allclose(np.sort(result.eigenvalues)[::-1],
                           eigenvalues[:k], atol=1e-6)


def test_reduce_variance_is_monotone_in_k():
    rng = SplitMix64(4)
    x = _rng_points(rng, 40, 10, scale=3)
    variances = [reduce(x, k).vectors.var(axis=0, ddof=1).sum()
                 for k in range(1, 10)]
    assert all(a <= b + 1e-9 for a, b in zip(variances, variances[1:]))


def test_reduce_degenerate_input_flags():
    x = np.ones((10, 4))
    result = reduce(x, 2)
    assert result.degenerate
    assert np.all(result.vectors == 0)


def test_reduce_rejects_too_many_components():
    with pytest.raises(ValueError):
        reduce(np.zeros((5, 3)), 4)


# --- single linkage -----------------------------------------------------------

def _blobs(rng, centers, n_each, noise=0.3):
    pts = []
    for c in centers:
        for _ in range(n_each):
            pts.append([ci + noise * rng.gauss() for ci in c])
    return np.array(pts)


def test_two_separated_blobs_recovered():
    rng = SplitMix64(5)
    x = _blobs(rng, [(0, 0), (50, 50)], 25)
    got = single_linkage_cluster(x, linkage_cutoff=5.0, min_cluster_size=10)
    assert got.n_clusters() == 2 and got.n_noise() == 0
    first = set(got.labels[:25])
    second = set(got.labels[25:])
    assert len(first) == 1 and len(second) == 1 and first != second


def test_small_components_become_noise():
    x = np.arange(10.0).reshape(5, 2)
    got = single_linkage_cluster(x, linkage_cutoff=100.0, min_cluster_size=10)
    assert set(got.labels) == {-1}


def test_matches_mst_threshold_oracle_batch():
    rng = SplitMix64(6)
    for trial in range(60):
        n = 5 + rng.randrange(60)
        x = _rng_points(rng, n, 2 + rng.randrange(3), scale=8)
        cutoff = 0.5 + rng.random() * 4
        min_size = 1 + rng.randrange(6)
        got = single_linkage_cluster(x, cutoff, min_size)
        oracle = mst_threshold_clusters([tuple(p) for p in x], cutoff, min_size)
        assert list(got.labels) == oracle, f"trial {trial}"


def test_labels_are_permutation_invariant():
    rng = SplitMix64(7)
    x = _blobs(rng, [(0, 0), (30, 0), (0, 30)], 15)
    ids = [f"acct{i:03d}" for i in range(len(x))]
    base = single_linkage_cluster(x, 4.0, 10, ids).mapping()
    order = list(range(len(x)))
    SplitMix64(8).shuffle(order)
    shuffled = single_linkage_cluster(x[order], 4.0, 10,
                                      [ids[i] for i in order]).mapping()
    assert shuffled == base


# --- silhouette -----------------------------------------------------------------

def test_silhouette_two_far_pairs():
    pts = np.array([[0.0, 0.0], [0.0, 1.0], [10.0, 0.0], [10.0, 1.0]])
    labels = [0, 0, 1, 1]
    score = silhouette(pts, labels)
    assert score > 0.85
    assert abs(score - brute_silhouette([tuple(p) for p in pts], labels)) < 1e-9


def test_silhouette_single_cluster_is_undefined():
    with pytest.raises(UndefinedScore):
        silhouette(np.zeros((4, 2)), [0, 0, 0, 0])


def test_silhouette_random_labels_on_uniform_data_near_zero():
    rng = SplitMix64(9)
    x = _rng_points(rng, 120, 2, scale=10)
    labels = [rng.randrange(3) for _ in range(120)]
    assert abs(silhouette(x, labels)) < 0.2


def test_silhouette_matches_brute_force_randomized():
    rng = SplitMix64(10)
    for _ in range(40):
        n = 8 + rng.randrange(40)
        x = _rng_points(rng, n, 3, scale=6)
        labels = [rng.randrange(4) - 1 for _ in range(n)]
        if len({l for l in labels if l != -1}) < 2:
            continue
        mine = silhouette(x, labels)
        assert -1.0 <= mine <= 1.0
        assert abs(mine - brute_silhouette([tuple(p) for p in x], labels)) < 1e-9


# --- sweep ----------------------------------------------------------------------

def _records(x):
    return [EmbeddingRecord(f"a{i:04d}", list(map(float, row)))
            for i, row in enumerate(x)]


def test_sweep_single_config_grid():
    rng = SplitMix64(11)
    x = _blobs(rng, [(0, 0, 0), (40, 0, 0)], 20)
    grid = EmbedGrid([2], [4.0], [10])
    result = sweep(_records(x), grid)
    assert result.best == EmbedConfig(2, 4.0, 10)
    assert len(result.table) == 1


def test_sweep_recovers_planted_three_blobs():
    rng = SplitMix64(12)
    x = _blobs(rng, [(0, 0), (25, 0), (0, 25)], 30)
    grid = EmbedGrid([2], [3.0, 5.0], [10, 20])
    result = sweep(_records(x), grid, threads=2)
    assert result.assignment.n_clusters() == 3
    assert result.assignment.n_noise() == 0
    blocks = [set(result.assignment.labels[i * 30:(i + 1) * 30]) for i in range(3)]
    assert all(len(b) == 1 for b in blocks)
    assert len(set.union(*blocks)) == 3


def test_sweep_fails_when_everything_undefined():
    x = np.zeros((12, 3))
    grid = EmbedGrid([2], [0.5], [10])
    with pytest.raises(SweepFailed):
        sweep(_records(x), grid)


def test_sweep_thread_count_does_not_change_result():
    rng = SplitMix64(13)
    x = _blobs(rng, [(0, 0, 0), (30, 0, 0), (0, 30, 0)], 15)
    grid = EmbedGrid([2, 3], [2.0, 4.0], [10, 14])
    a = sweep(_records(x), grid, threads=1)
    b = sweep(_records(x), grid, threads=4)
    assert a.best == b.best
    assert a.assignment.labels == b.assignment.labels
    assert [r.to_dict() for r in a.table] == [r.to_dict() for r in b.table]


# --- engagement table --------------------------------------------------------------

def _acct(acct_id, suspended):
    history = [AccountStatus(StatusKind.ACTIVE, 0)]
    if suspended:
        history.append(AccountStatus(StatusKind.SUSPENDED, 90 * 86400))
    return ScamAccount(acct_id, acct_id, 0, status_history=history)


def _reply(n, actor):
    return Interaction(f"i{n:03d}", InteractionKind.REPLY, actor, "t1", None,
                       "text", [], Source.IPHONE, "en", n)


def test_engagement_table_single_cluster_is_100():
    assignment = ClusterAssignment(["a", "b"], [0, 0], {0: "NFTs"})
    accounts = {x: _acct(x, suspended=True) for x in "ab"}
    rows = cluster_engagement_table(assignment, [_reply(1, "a")], accounts)
    assert rows == [{"label": "NFTs", "accounts": 2, "scammer_pct": 100.0,
                     "followers_pct": 0.0, "replies_pct": 100.0,
                     "quoted_pct": 0.0, "suspended": 2, "suspended_pct": 100.0}]


def test_engagement_table_two_equal_clusters():
    assignment = ClusterAssignment(["a", "b", "c", "d"], [0, 0, 1, 1],
                                   {0: "Male", 1: "Female"})
    accounts = {x: _acct(x, suspended=(x in "ab")) for x in "abcd"}
    rows = cluster_engagement_table(assignment, [], accounts)
    assert [r["scammer_pct"] for r in rows] == [50.0, 50.0]
    assert [r["suspended_pct"] for r in rows] == [100.0, 0.0]


def test_engagement_table_requires_names():
    assignment = ClusterAssignment(["a"], [0])
    with pytest.raises(ValueError):
        cluster_engagement_table(assignment, [], {})
