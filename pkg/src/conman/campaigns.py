"""Identifier-level clustering and agglomeration into campaign groups.

A contact identifier used by two or more accounts becomes a cluster;
identifiers seen from a single account are kept separately as singletons
so the cluster-vs-singleton comparison stays possible. Clusters that share
an account merge into groups (connected components via union-find).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping

from .channels import ChannelUse
from .core import ChannelKind, InteractionKind
from .stats import median, nearest_rank
from .unionfind import UnionFind

ALL_ROW = "All"


@dataclass
class ChannelCluster:
    identifier: str
    kind: ChannelKind
    members: set[str]
    reply_tweet_ids: set[str] = field(default_factory=set)
    quoted_tweet_ids: set[str] = field(default_factory=set)
    text_count: int = 0
    member_seen: dict[str, tuple[int, int]] = field(default_factory=dict)

    @property
    def key(self) -> str:
        return f"{self.kind.render()}:{self.identifier}"

    @property
    def size(self) -> int:
        return len(self.members)

    def to_dict(self) -> dict:
        return {"identifier": self.identifier, "kind": self.kind.render(),
                "members": sorted(self.members),
                "reply_tweet_ids": sorted(self.reply_tweet_ids),
                "quoted_tweet_ids": sorted(self.quoted_tweet_ids),
                "text_count": self.text_count,
                "member_seen": {a: list(v) for a, v in sorted(self.member_seen.items())}}

    @classmethod
    def from_dict(cls, d: dict) -> "ChannelCluster":
        return cls(d["identifier"], ChannelKind.parse(d["kind"]), set(d["members"]),
                   set(d.get("reply_tweet_ids", [])), set(d.get("quoted_tweet_ids", [])),
                   int(d.get("text_count", 0)),
                   {a: (int(v[0]), int(v[1]))
                    for a, v in d.get("member_seen", {}).items()})


def build_clusters(uses: Iterable[ChannelUse]) -> tuple[list[ChannelCluster], list[ChannelCluster]]:
    """Group uses by (kind, identifier); returns (clusters, singletons)."""
    acc: dict[tuple[str, str], ChannelCluster] = {}
    for use in uses:
        key = (use.kind.render(), use.identifier)
        cluster = acc.get(key)
        if cluster is None:
            cluster = ChannelCluster(use.identifier, use.kind, set())
            acc[key] = cluster
        cluster.members.add(use.account_id)
        if use.target_tweet:
            if use.interaction_kind == InteractionKind.REPLY.render():
                cluster.reply_tweet_ids.add(use.target_tweet)
            elif use.interaction_kind == InteractionKind.QUOTED_TWEET.render():
                cluster.quoted_tweet_ids.add(use.target_tweet)
        cluster.text_count += 1
        first, last = cluster.member_seen.get(use.account_id, (use.at, use.at))
        cluster.member_seen[use.account_id] = (min(first, use.at), max(last, use.at))

    clusters, singletons = [], []
    for key in sorted(acc):
        cluster = acc[key]
        (clusters if cluster.size >= 2 else singletons).append(cluster)
    return clusters, singletons


@dataclass
class ClusterStatsRow:
    kind: str
    total_clusters: int
    distinct_reply_tweet_ids: int
    distinct_quoted_tweet_ids: int
    distinct_tweet_ids: int
    all_text_count: int
    total_scammers: int
    min_size: int
    median_size: int
    p90_size: int
    max_size: int
    median_seen_diff_days: int

    def __post_init__(self):
        if not (self.min_size <= self.median_size <= self.p90_size <= self.max_size):
            raise ValueError("cluster size percentiles out of order")

    def to_dict(self) -> dict:
        return {"kind": self.kind, "total_clusters": self.total_clusters,
                "distinct_reply_tweet_ids": self.distinct_reply_tweet_ids,
                "distinct_quoted_tweet_ids": self.distinct_quoted_tweet_ids,
                "distinct_tweet_ids": self.distinct_tweet_ids,
                "all_text_count": self.all_text_count,
                "total_scammers": self.total_scammers,
                "min_size": self.min_size, "median_size": self.median_size,
                "p90_size": self.p90_size, "max_size": self.max_size,
                "median_seen_diff_days": self.median_seen_diff_days}


def _stats_for(kind_label: str, clusters: list[ChannelCluster]) -> ClusterStatsRow | None:
    if not clusters:
        return None
    sizes = sorted(c.size for c in clusters)
    replies: set[str] = set()
    quoted: set[str] = set()
    accounts: set[str] = set()
    text_count = 0
    seen: dict[str, tuple[int, int]] = {}
    for c in clusters:
        replies |= c.reply_tweet_ids
        quoted |= c.quoted_tweet_ids
        accounts |= c.members
        text_count += c.text_count
        for member, (first, last) in c.member_seen.items():
            prev = seen.get(member, (first, last))
            seen[member] = (min(prev[0], first), max(prev[1], last))
    diffs = [(last - first) // 86400 for first, last in seen.values()]
    return ClusterStatsRow(
        kind=kind_label,
        total_clusters=len(clusters),
        distinct_reply_tweet_ids=len(replies),
        distinct_quoted_tweet_ids=len(quoted),
        distinct_tweet_ids=len(replies | quoted),
        all_text_count=text_count,
        total_scammers=len(accounts),
        min_size=sizes[0],
        median_size=nearest_rank(sizes, 50),
        p90_size=nearest_rank(sizes, 90),
        max_size=sizes[-1],
        median_seen_diff_days=median(diffs),
    )


def cluster_stats(clusters: list[ChannelCluster]) -> list[ClusterStatsRow]:
    """Per-kind rows plus a distinct-All row, matching the stats CSV layout."""
    rows = []
    for kind in ChannelKind:
        row = _stats_for(kind.render(), [c for c in clusters if c.kind is kind])
        if row:
            rows.append(row)
    all_row = _stats_for(ALL_ROW, list(clusters))
    if all_row:
        rows.append(all_row)
    return rows


def shared_campaign_matrix(clusters: list[ChannelCluster]) -> tuple[list[str], list[list[int]]]:
    """Symmetric account-overlap counts between channel kinds."""
    kinds = [k for k in ChannelKind]
    members: dict[ChannelKind, set[str]] = {k: set() for k in kinds}
    for c in clusters:
        members[c.kind] |= c.members
    matrix = [[len(members[a] & members[b]) for b in kinds] for a in kinds]
    return [k.render() for k in kinds], matrix


@dataclass
class CampaignGroup:
    group_id: str
    cluster_ids: set[str]
    accounts: set[str]
    interaction_count: int

    def to_dict(self) -> dict:
        return {"group_id": self.group_id, "cluster_ids": sorted(self.cluster_ids),
                "accounts": sorted(self.accounts),
                "interaction_count": self.interaction_count}

    @classmethod
    def from_dict(cls, d: dict) -> "CampaignGroup":
        return cls(d["group_id"], set(d["cluster_ids"]), set(d["accounts"]),
                   int(d["interaction_count"]))


def agglomerate_groups(clusters: list[ChannelCluster],
                       interactions_per_account: Mapping[str, int] | None = None
                       ) -> list[CampaignGroup]:
    """Merge clusters that share an account into connected components.

    Group ids are deterministic: the smallest member cluster key. The
    interaction count sums each member account's interactions exactly once.
    """
    interactions_per_account = interactions_per_account or {}
    uf = UnionFind(c.key for c in clusters)
    by_account: dict[str, str] = {}
    for c in clusters:
        for account in c.members:
            if account in by_account:
                uf.union(by_account[account], c.key)
            else:
                by_account[account] = c.key

    by_key = {c.key: c for c in clusters}
    groups = []
    for rep, cluster_keys in sorted(uf.groups().items()):
        accounts: set[str] = set()
        for key in cluster_keys:
            accounts |= by_key[key].members
        count = sum(interactions_per_account.get(a, 0) for a in accounts)
        groups.append(CampaignGroup(f"group:{rep}", set(cluster_keys), accounts, count))
    groups.sort(key=lambda g: (-len(g.accounts), g.group_id))
    return groups
