"""Blocking efficacy, lifespan curves, and emission of every results table.

Every percentage cell is written next to the counts it came from, and an
audit pass re-derives each one from the same file after writing; emit fails
loudly if anything drifts. All output is byte-stable for identical inputs.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from .core import (CanonicalEnum, ChannelKind, ContactChannel, HoneyTweet,
                   Interaction, InteractionKind, ScamAccount, Source,
                   StatusKind, TEXT_KINDS, iso)
from .stats import pct


class ReportError(ValueError):
    pass


class ProbeOutcome(CanonicalEnum):
    ALIVE = "Alive"
    BLOCKED = "Blocked"
    DELETED = "Deleted"
    UNREACHABLE = "Unreachable"


@dataclass
class ProbeResult:
    kind: ChannelKind
    identifier: str
    probed_at: int
    outcome: ProbeOutcome

    def to_dict(self) -> dict:
        return {"kind": self.kind.render(), "identifier": self.identifier,
                "probed_at": self.probed_at, "outcome": self.outcome.render()}

    @classmethod
    def from_dict(cls, d: dict) -> "ProbeResult":
        return cls(ChannelKind.parse(d["kind"]), d["identifier"],
                   int(d["probed_at"]), ProbeOutcome.parse(d["outcome"]))


@dataclass
class EfficacyRow:
    platform: str
    total: int
    blocked: int

    def __post_init__(self):
        if self.blocked > self.total:
            raise ReportError(f"{self.platform}: blocked exceeds total")

    @property
    def blocked_pct(self) -> float:
        return pct(self.blocked, self.total)


def _latest_probe_per_channel(probes: Iterable[ProbeResult]) -> dict[tuple, ProbeResult]:
    latest: dict[tuple, ProbeResult] = {}
    for p in sorted(probes, key=lambda p: (p.kind.render(), p.identifier, p.probed_at)):
        latest[(p.kind, p.identifier)] = p
    return latest


def blocking_table(probes: Iterable[ProbeResult],
                   accounts: Sequence[ScamAccount]) -> list[EfficacyRow]:
    """Latest probe decides each channel; the Twitter row is the share of
    accounts suspended; the All row aggregates channel probes only."""
    latest = _latest_probe_per_channel(probes)
    rows: list[EfficacyRow] = []
    total_all = blocked_all = 0
    for kind in ChannelKind:
        mine = [p for (k, _), p in latest.items() if k is kind]
        if not mine:
            continue
        blocked = sum(1 for p in mine if p.outcome is ProbeOutcome.BLOCKED)
        rows.append(EfficacyRow(kind.render(), len(mine), blocked))
        total_all += len(mine)
        blocked_all += blocked
    if accounts:
        suspended = sum(1 for a in accounts
                        if (t := a.terminal_status()) is not None
                        and t.status is StatusKind.SUSPENDED)
        rows.append(EfficacyRow("Twitter", len(accounts), suspended))
    if total_all:
        rows.append(EfficacyRow("All", total_all, blocked_all))
    return rows


def lifespan_curves(accounts: Sequence[ScamAccount],
                    first_interaction: Mapping[str, int]) -> list[dict]:
    """Share of accounts suspended / deactivated within d days of their first
    interaction; both step curves are monotone and end at the terminal shares."""
    considered = [a for a in accounts if a.account_id in first_interaction]
    n = len(considered)
    suspended_days = []
    deactivated_days = []
    for a in considered:
        terminal = a.terminal_status()
        if terminal is None:
            continue
        day = (terminal.observed_at - first_interaction[a.account_id]) // 86400
        day = max(0, day)
        if terminal.status is StatusKind.SUSPENDED:
            suspended_days.append(day)
        else:
            deactivated_days.append(day)
    max_day = max(suspended_days + deactivated_days, default=0)
    rows = []
    for d in range(max_day + 1):
        rows.append({
            "day": d,
            "suspended_pct": pct(sum(1 for x in suspended_days if x <= d), n),
            "deactivated_pct": pct(sum(1 for x in deactivated_days if x <= d), n),
        })
    return rows


_GOOGLE_HOSTS = ("docs.google.com", "forms.gle")
_JOTFORM_HOSTS = ("jotform.com", "form.jotform.com")


def _form_provider(identifier: str) -> str:
    for host in _GOOGLE_HOSTS:
        if host in identifier:
            return "GoogleForms"
    for host in _JOTFORM_HOSTS:
        if host in identifier:
            return "JotForm"
    return "OtherForms"


def form_blocking_breakdown(channels: Iterable[ContactChannel],
                            probes: Iterable[ProbeResult]) -> list[dict]:
    """Blocked rates for form channels, split by provider then wallet."""
    latest = _latest_probe_per_channel(probes)
    cells: dict[tuple[str, str], list[int]] = {}
    for ch in channels:
        if ch.kind is not ChannelKind.FORM:
            continue
        probe = latest.get((ch.kind, ch.identifier))
        if probe is None:
            continue
        provider = _form_provider(ch.identifier)
        wallet = ch.wallet_attribution.render() if ch.wallet_attribution else "Unattributed"
        cell = cells.setdefault((provider, wallet), [0, 0])
        cell[0] += 1
        cell[1] += 1 if probe.outcome is ProbeOutcome.BLOCKED else 0
    rows = []
    providers = sorted({p for p, _ in cells})
    for provider in providers:
        p_total = p_blocked = 0
        for (p, wallet), (total, blocked) in sorted(cells.items()):
            if p != provider:
                continue
            rows.append({"provider": provider, "wallet": wallet, "total": total,
                         "blocked": blocked, "blocked_pct": pct(blocked, total)})
            p_total += total
            p_blocked += blocked
        rows.append({"provider": provider, "wallet": "All", "total": p_total,
                     "blocked": p_blocked, "blocked_pct": pct(p_blocked, p_total)})
    return rows


# ---------------------------------------------------------------------------
# Table assembly
# ---------------------------------------------------------------------------

@dataclass
class ReportInputs:
    accounts: list[ScamAccount]
    scam_ids: set[str]
    tweets: list[HoneyTweet]
    interactions: list[Interaction]
    channels: list[ContactChannel] = field(default_factory=list)
    distribution_rows: list[dict] = field(default_factory=list)
    stats_rows: list[dict] = field(default_factory=list)
    matrix_kinds: list[str] = field(default_factory=list)
    matrix: list[list[int]] = field(default_factory=list)
    engagement_rows: list[dict] | None = None
    probes: list[ProbeResult] = field(default_factory=list)
    theft_rows: list[dict] | None = None
    theft_recipients: int = 0
    price_summary: dict | None = None

    def validate(self) -> None:
        known = {a.account_id for a in self.accounts}
        for itx in self.interactions:
            if itx.actor not in known:
                raise ReportError(
                    f"interaction {itx.interaction_id} references unknown account {itx.actor}")


_MODE_LABELS = (
    (InteractionKind.REPLY, "Replies"),
    (InteractionKind.RETWEET, "Retweets"),
    (InteractionKind.QUOTED_TWEET, "Quoted Tweets"),
    (InteractionKind.LIKE, "Likes"),
    (InteractionKind.FOLLOW, "Follow"),
)


def interaction_mode_table(inputs: ReportInputs) -> list[dict]:
    """Per-mode interaction totals, scoped to scam-verdict accounts."""
    scam = [i for i in inputs.interactions if i.actor in inputs.scam_ids]
    terminal = {a.account_id: a.terminal_status() for a in inputs.accounts}

    def account_cols(ids: set[str]) -> tuple[int, int, int]:
        suspended = inactive = 0
        for acct_id in ids:
            t = terminal.get(acct_id)
            if t is None:
                continue
            if t.status is StatusKind.SUSPENDED:
                suspended += 1
            inactive += 1
        return suspended, inactive, len(ids)

    tweets_by_account: dict[str, set[str]] = {}
    for itx in scam:
        if itx.target_tweet:
            tweets_by_account.setdefault(itx.actor, set()).add(itx.target_tweet)

    rows = []
    union_tweets: set[str] = set()
    union_accounts: set[str] = set()
    sum_total = sum_distinct = 0
    for kind, label in _MODE_LABELS:
        mine = [i for i in scam if i.kind is kind]
        actors = {i.actor for i in mine}
        if kind in TEXT_KINDS:
            distinct = len({i.text for i in mine})
        else:
            distinct = len(mine)
        if kind is InteractionKind.FOLLOW:
            tweet_ids: set[str] = set()
            for actor in actors:
                tweet_ids |= tweets_by_account.get(actor, set())
        else:
            tweet_ids = {i.target_tweet for i in mine if i.target_tweet}
        suspended, inactive, total_accounts = account_cols(actors)
        rows.append({"mode": label, "total": len(mine), "distinct": distinct,
                     "distinct_tweet_ids": len(tweet_ids),
                     "suspended_accounts": suspended,
                     "inactive_accounts": inactive, "accounts": total_accounts})
        union_tweets |= tweet_ids
        union_accounts |= actors
        sum_total += len(mine)
        sum_distinct += distinct
    suspended, inactive, total_accounts = account_cols(union_accounts)
    rows.append({"mode": "Total", "total": sum_total, "distinct": sum_distinct,
                 "distinct_tweet_ids": len(union_tweets),
                 "suspended_accounts": suspended,
                 "inactive_accounts": inactive, "accounts": total_accounts})
    return rows


def source_table(inputs: ReportInputs) -> list[dict]:
    scam = [i for i in inputs.interactions if i.actor in inputs.scam_ids]
    tweets_by_source: dict[Source, set[str]] = {s: set() for s in Source}
    accounts_by_source: dict[Source, set[str]] = {s: set() for s in Source}
    all_tweets: set[str] = set()
    for itx in scam:
        accounts_by_source[itx.source].add(itx.actor)
        if itx.target_tweet:
            tweets_by_source[itx.source].add(itx.target_tweet)
            all_tweets.add(itx.target_tweet)
    rows = []
    for source in Source:
        if not accounts_by_source[source]:
            continue
        rows.append({"source": source.render(),
                     "tweet_interact_pct": pct(len(tweets_by_source[source]),
                                               len(all_tweets)),
                     "scammers": len(accounts_by_source[source])})
    return rows


def wallet_channel_table(channels: Sequence[ContactChannel]) -> list[dict]:
    """Distinct identifiers per wallet x channel kind."""
    from .core import WalletKind
    cells: dict[tuple[str, ChannelKind], set[str]] = {}
    for ch in channels:
        wallet = ch.wallet_attribution.render() if ch.wallet_attribution else "Unattributed"
        cells.setdefault((wallet, ch.kind), set()).add(ch.identifier)
    wallets = [w.render() for w in WalletKind]
    if any(w == "Unattributed" for w, _ in cells):
        wallets.append("Unattributed")
    rows = []
    totals = {k: 0 for k in ChannelKind}
    for wallet in wallets:
        row = {"wallet": wallet}
        total = 0
        for kind in ChannelKind:
            n = len(cells.get((wallet, kind), set()))
            row[kind.render().lower()] = n
            totals[kind] += n
            total += n
        row["all"] = total
        if total:
            rows.append(row)
    total_row = {"wallet": "Total"}
    total_row.update({k.render().lower(): totals[k] for k in ChannelKind})
    total_row["all"] = sum(totals.values())
    rows.append(total_row)
    return rows


# ---------------------------------------------------------------------------
# Emission
# ---------------------------------------------------------------------------

FORMATS = ("csv", "json", "markdown")
_EXTENSION = {"csv": ".csv", "json": ".json", "markdown": ".md"}


def _fmt(value) -> str:
    if isinstance(value, float):
        return f"{value:.2f}"
    return str(value)


def _write_table(path: Path, header: list[str], rows: list[list[str]],
                 fmt: str) -> None:
    if fmt == "csv":
        with path.open("w", encoding="utf-8", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(header)
            for row in rows:
                writer.writerow(row)
    elif fmt == "json":
        payload = [dict(zip(header, row)) for row in rows]
        path.write_text(json.dumps(payload, indent=1) + "\n", encoding="utf-8")
    else:  # markdown
        lines = ["| " + " | ".join(header) + " |",
                 "| " + " | ".join("---" for _ in header) + " |"]
        lines += ["| " + " | ".join(row) + " |" for row in rows]
        path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def _read_table(out: Path, name: str) -> list[dict] | None:
    """Load an emitted table regardless of the format it was written in."""
    csv_path = out / f"{name}.csv"
    if csv_path.exists():
        with csv_path.open("r", encoding="utf-8", newline="") as fh:
            return list(csv.DictReader(fh))
    json_path = out / f"{name}.json"
    if json_path.exists():
        return json.loads(json_path.read_text(encoding="utf-8"))
    md_path = out / f"{name}.md"
    if md_path.exists():
        lines = [l for l in md_path.read_text(encoding="utf-8").splitlines() if l]
        header = [c.strip() for c in lines[0].strip("|").split("|")]
        rows = []
        for line in lines[2:]:
            cells = [c.strip() for c in line.strip("|").split("|")]
            rows.append(dict(zip(header, cells)))
        return rows
    return None


def emit_report(inputs: ReportInputs, out_dir, fmt: str = "csv") -> list[Path]:
    """Write the full table bundle; the audit runs as part of emission."""
    if fmt not in FORMATS:
        raise ReportError(f"unknown report format {fmt!r}")
    inputs.validate()
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written: list[Path] = []

    def emit_csv(name: str, header: list[str], rows: Iterable[Sequence]):
        base = name[:-4] if name.endswith(".csv") else name
        path = out / (base + _EXTENSION[fmt])
        _write_table(path, header, [[_fmt(v) for v in row] for row in rows], fmt)
        written.append(path)

    mode_rows = interaction_mode_table(inputs)
    emit_csv("table1_interactions.csv",
             ["mode", "total", "distinct", "distinct_tweet_ids",
              "suspended_accounts", "inactive_accounts", "accounts"],
             [[r[k] for k in ("mode", "total", "distinct", "distinct_tweet_ids",
                              "suspended_accounts", "inactive_accounts", "accounts")]
              for r in mode_rows])

    src_rows = source_table(inputs)
    emit_csv("table2_sources.csv", ["source", "tweet_interact_pct", "scammers"],
             [[r["source"], r["tweet_interact_pct"], r["scammers"]] for r in src_rows])

    if inputs.engagement_rows is not None:
        emit_csv("table3_picture_clusters.csv",
                 ["label", "accounts", "scammer_pct", "followers_pct",
                  "replies_pct", "quoted_pct", "suspended", "suspended_pct"],
                 [[r[k] for k in ("label", "accounts", "scammer_pct", "followers_pct",
                                  "replies_pct", "quoted_pct", "suspended",
                                  "suspended_pct")]
                  for r in inputs.engagement_rows])

    if inputs.distribution_rows:
        emit_csv("table4_channels.csv", ["channel", "honey_profiles", "total"],
                 [[r["channel"], r["honey_profiles"], r["total"]]
                  for r in inputs.distribution_rows])

    wallet_rows = wallet_channel_table(inputs.channels)
    kind_cols = [k.render().lower() for k in ChannelKind]
    emit_csv("table5_wallet_channels.csv", ["wallet"] + kind_cols + ["all"],
             [[r["wallet"]] + [r.get(c, 0) for c in kind_cols] + [r["all"]]
              for r in wallet_rows])

    if inputs.theft_rows is not None:
        emit_csv("table6_key_phrases.csv", ["channel", "sent", "stolen"],
                 [[r["channel"], r["sent"], r["stolen"]] for r in inputs.theft_rows])

    if inputs.matrix:
        header = ["channel"] + inputs.matrix_kinds
        body = [[kind] + list(row) for kind, row in zip(inputs.matrix_kinds, inputs.matrix)]
        emit_csv("table7_shared_campaigns.csv", header, body)
        emit_csv("matrix.csv", header, body)

    if inputs.stats_rows:
        cols = ["kind", "total_clusters", "distinct_reply_tweet_ids",
                "distinct_quoted_tweet_ids", "distinct_tweet_ids", "all_text_count",
                "total_scammers", "min_size", "median_size", "p90_size", "max_size",
                "median_seen_diff_days"]
        emit_csv("table8_clusters.csv", cols,
                 [[r[c] for c in cols] for r in inputs.stats_rows])

    scam_accounts = [a for a in inputs.accounts if a.account_id in inputs.scam_ids]
    efficacy = blocking_table(inputs.probes, scam_accounts)
    emit_csv("efficacy.csv", ["platform", "total", "blocked", "blocked_pct"],
             [[r.platform, r.total, r.blocked, r.blocked_pct] for r in efficacy])

    first_itx: dict[str, int] = {}
    for itx in inputs.interactions:
        if itx.actor in inputs.scam_ids:
            prev = first_itx.get(itx.actor)
            first_itx[itx.actor] = itx.at if prev is None else min(prev, itx.at)
    life_rows = lifespan_curves(scam_accounts, first_itx)
    emit_csv("lifespan.csv", ["day", "suspended_pct", "deactivated_pct"],
             [[r["day"], r["suspended_pct"], r["deactivated_pct"]] for r in life_rows])

    form_rows = form_blocking_breakdown(inputs.channels, inputs.probes)
    emit_csv("form_blocking.csv", ["provider", "wallet", "total", "blocked", "blocked_pct"],
             [[r["provider"], r["wallet"], r["total"], r["blocked"], r["blocked_pct"]]
              for r in form_rows])

    summary = out / "summary.md"
    summary.write_text(_summary_markdown(inputs, mode_rows, efficacy, life_rows),
                       encoding="utf-8")
    written.append(summary)

    problems = audit_report(out)
    if problems:
        raise ReportError("report failed self-audit: " + "; ".join(problems))
    return written


def _summary_markdown(inputs: ReportInputs, mode_rows, efficacy, life_rows) -> str:
    total_row = mode_rows[-1]
    lines = ["# Run summary", ""]
    span = ""
    if inputs.tweets:
        span = f" between {iso(inputs.tweets[0].posted_at)} and {iso(inputs.tweets[-1].posted_at)}"
    lines.append(f"- {len(inputs.tweets)} bait posts published{span}")
    lines.append(f"- {len(inputs.accounts)} accounts observed, "
                 f"{len(inputs.scam_ids)} classified as scam")
    lines.append(f"- {total_row['total']} scam interactions over "
                 f"{total_row['distinct_tweet_ids']} distinct posts")
    lines.append(f"- {len(inputs.channels)} distinct contact channels extracted")
    if inputs.theft_rows:
        all_row = inputs.theft_rows[-1]
        lines.append(f"- honey wallets: {all_row['sent']} released, "
                     f"{all_row['stolen']} drained into "
                     f"{inputs.theft_recipients} distinct recipients")
    if inputs.price_summary and inputs.price_summary.get("count"):
        p = inputs.price_summary
        lines.append(f"- {p['count']} price quotes: min ${p['min']:.0f}, "
                     f"median ${p['median']:.0f}, max ${p['max']:.0f}")
    for row in efficacy:
        if row.platform == "All":
            lines.append(f"- platforms blocked {row.blocked_pct:.2f}% of probed channels")
    if life_rows:
        last = life_rows[-1]
        lines.append(f"- by day {last['day']}: {last['suspended_pct']:.2f}% suspended, "
                     f"{last['deactivated_pct']:.2f}% deactivated")
    lines.append("")
    return "\n".join(lines)


# ---------------------------------------------------------------------------
# Audit
# ---------------------------------------------------------------------------

def _check_pct(problems, label, row, pct_col, num_col, den_col):
    want = pct(int(row[num_col]), int(row[den_col]))
    got = float(row[pct_col])
    if f"{want:.2f}" != f"{got:.2f}":
        problems.append(f"{label}: {pct_col}={got} but {num_col}/{den_col} gives {want}")


def audit_report(out_dir) -> list[str]:
    """Re-derive every percentage and total from the emitted files."""
    out = Path(out_dir)
    problems: list[str] = []

    rows = _read_table(out, "efficacy")
    if rows is not None:
        channel_rows = [r for r in rows if r["platform"] not in ("Twitter", "All")]
        for r in rows:
            _check_pct(problems, "efficacy", r, "blocked_pct", "blocked", "total")
            if int(r["blocked"]) > int(r["total"]):
                problems.append(f"efficacy {r['platform']}: blocked exceeds total")
        all_rows = [r for r in rows if r["platform"] == "All"]
        if all_rows and channel_rows:
            if int(all_rows[0]["total"]) != sum(int(r["total"]) for r in channel_rows):
                problems.append("efficacy: All total is not the sum of channel rows")
            if int(all_rows[0]["blocked"]) != sum(int(r["blocked"]) for r in channel_rows):
                problems.append("efficacy: All blocked is not the sum of channel rows")

    rows = _read_table(out, "lifespan")
    if rows is not None:
        prev_s = prev_d = -1.0
        for r in rows:
            s, d = float(r["suspended_pct"]), float(r["deactivated_pct"])
            if not (0 <= s <= 100 and 0 <= d <= 100):
                problems.append("lifespan: percentage out of range")
            if s < prev_s or d < prev_d:
                problems.append("lifespan: curve is not monotone")
            if s + d > 100.0 + 1e-9:
                problems.append("lifespan: suspended + deactivated exceeds 100")
            prev_s, prev_d = s, d

    rows = _read_table(out, "matrix")
    if rows is not None:
        kinds = [r["channel"] for r in rows]
        cells = {(r["channel"], k): int(r[k]) for r in rows for k in kinds}
        for a in kinds:
            for b in kinds:
                if cells[(a, b)] != cells[(b, a)]:
                    problems.append(f"matrix: asymmetry at ({a},{b})")
                if cells[(a, b)] > min(cells[(a, a)], cells[(b, b)]):
                    problems.append(f"matrix: cell ({a},{b}) exceeds its diagonals")

    rows = _read_table(out, "table1_interactions")
    if rows is not None:
        body = [r for r in rows if r["mode"] != "Total"]
        total = [r for r in rows if r["mode"] == "Total"]
        if total:
            for col in ("total", "distinct"):
                if int(total[0][col]) != sum(int(r[col]) for r in body):
                    problems.append(f"table1: Total {col} is not the column sum")

    rows = _read_table(out, "table4_channels")
    if rows is not None:
        body = [r for r in rows if r["channel"] != "All"]
        total = [r for r in rows if r["channel"] == "All"]
        if total:
            for col in ("honey_profiles", "total"):
                if int(total[0][col]) != sum(int(r[col]) for r in body):
                    problems.append(f"table4: All {col} is not the column sum")

    rows = _read_table(out, "table6_key_phrases")
    if rows is not None:
        body = [r for r in rows if r["channel"] != "All"]
        total = [r for r in rows if r["channel"] == "All"]
        if total:
            for col in ("sent", "stolen"):
                if int(total[0][col]) != sum(int(r[col]) for r in body):
                    problems.append(f"table6: All {col} is not the column sum")
        for r in rows:
            if int(r["stolen"]) > int(r["sent"]):
                problems.append(f"table6 {r['channel']}: stolen exceeds sent")

    rows = _read_table(out, "table3_picture_clusters")
    if rows is not None:
        for r in rows:
            _check_pct(problems, f"table3 {r['label']}", r, "suspended_pct",
                       "suspended", "accounts")

    rows = _read_table(out, "table8_clusters")
    if rows is not None:
        for r in rows:
            sizes = [int(r["min_size"]), int(r["median_size"]),
                     int(r["p90_size"]), int(r["max_size"])]
            if sizes != sorted(sizes):
                problems.append(f"table8 {r['kind']}: size percentiles out of order")
            if int(r["total_scammers"]) < int(r["max_size"]):
                problems.append(f"table8 {r['kind']}: fewer scammers than max cluster")

    rows = _read_table(out, "form_blocking")
    if rows is not None:
        for r in rows:
            _check_pct(problems, f"form_blocking {r['provider']}/{r['wallet']}",
                       r, "blocked_pct", "blocked", "total")
    return problems
