"""Command-line entry point wiring the full pipeline.

Subcommands mirror the pipeline stages; ``e2e`` chains them all on one seed
and one TOML config. Data files land in the run directory, logs go to
stderr as JSON lines, and nothing is written outside the configured output
directory. Exit codes: 0 success, 1 validation error, 2 internal error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from dataclasses import dataclass
from pathlib import Path

try:
    import tomllib
except ModuleNotFoundError:  # Python 3.10
    import tomli as tomllib

from . import campaigns as campaigns_mod
from . import chain as chain_mod
from . import report as report_mod
from . import simulate as sim_mod
from .channels import (ChannelUse, ExtractionRuleSet, channel_distribution,
                       extract_uses, merge_channels)
from .core import (ContactChannel, HoneyProfile, HoneyTweet, Interaction,
                   ScamAccount, WalletKind, parse_iso, read_jsonl, write_jsonl)
from .embed import EmbedGrid, EmbeddingRecord, sweep, cluster_engagement_table, ClusterAssignment
from .engage import (EngagementSession, PriceQuote, SessionLog, classify_response,
                     craft_dm, craft_email, extract_prices, price_stats,
                     FEE_PAYMENT, KEY_PHRASE_REQUEST)
from .ingest import AccountVerdict, OfficialRegistry, classify_account, pull_timeline
from .lure import ConfigError, LureTemplateBank, PlanEntry, PostingPlan, schedule_posts
from .rng import derive
from .stats import round_half_up

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_INTERNAL = 2

_DEFAULT_LABELS = ["NFTs", "Male", "Female", "TechSupport", "Wallets",
                   "DefaultImage", "Miscellaneous"]

DEFAULTS: dict = {
    "seed": 42,
    "threads": 1,
    "format": "csv",
    "lure": {"n_profiles": 4, "lures": 500, "interval_minutes": 15,
             "start": "2022-10-14T00:00:00Z"},
    "sim": {"n_scammers": 200, "horizon_days": 90, "n_campaigns": 20,
            "benign_rate": 0.1, "engagement_rate": 0.01,
            "suspension_hazard": 0.025, "deactivation_hazard": 0.01,
            "repeat_text_prob": 0.3278, "solo_rate": 0.5},
    "embed": {"dim": 16, "n_embeddings": 500,
              "reduce_to": [2, 4, 8, 12, 16],
              "linkage_cutoff": [0.5, 1.0, 2.0, 3.0, 4.0],
              "min_cluster_size": [10, 20, 35, 50],
              "label_names": _DEFAULT_LABELS},
    "chain": {"n_wallets": 100, "usd_per_eth": 1260.0, "usd_funding": 1.26},
}


def _log(stage: str, **fields) -> None:
    rec = {"stage": stage}
    rec.update(fields)
    print(json.dumps(rec, separators=(",", ":")), file=sys.stderr)


def _merge(base: dict, override: dict) -> dict:
    out = dict(base)
    for key, value in override.items():
        if isinstance(value, dict) and isinstance(out.get(key), dict):
            out[key] = _merge(out[key], value)
        else:
            out[key] = value
    return out


@dataclass
class Pipeline:
    cfg: dict
    out: Path
    seed: int
    threads: int

    def path(self, name: str) -> Path:
        return self.out / name


def load_config(args) -> Pipeline:
    cfg = DEFAULTS
    if args.config:
        with open(args.config, "rb") as fh:
            cfg = _merge(cfg, tomllib.load(fh))
    env_seed = os.environ.get("CONMAN_SEED")
    if env_seed is not None:
        cfg = _merge(cfg, {"seed": int(env_seed)})
    env_threads = os.environ.get("CONMAN_THREADS")
    if env_threads is not None:
        cfg = _merge(cfg, {"threads": int(env_threads)})
    if getattr(args, "seed", None) is not None:
        cfg = _merge(cfg, {"seed": args.seed})
    if getattr(args, "threads", None) is not None:
        cfg = _merge(cfg, {"threads": args.threads})
    if getattr(args, "format", None) is not None:
        cfg = _merge(cfg, {"format": args.format})
    out = Path(getattr(args, "out", None) or os.environ.get("CONMAN_OUT_DIR") or "run")
    out.mkdir(parents=True, exist_ok=True)
    return Pipeline(cfg, out, int(cfg["seed"]), int(cfg["threads"]))


# ---------------------------------------------------------------------------
# Stages
# ---------------------------------------------------------------------------

def stage_lure(p: Pipeline) -> PostingPlan:
    lc = p.cfg["lure"]
    n_profiles = int(lc["n_profiles"])
    total = int(lc["lures"])
    interval = int(lc["interval_minutes"]) * 60
    start = parse_iso(lc["start"]) if isinstance(lc["start"], str) else int(lc["start"])
    profiles = [HoneyProfile(f"hp{i:02d}", f"crypto_fan_{i:02d}",
                             "cryptocurrency enthusiast", start - 30 * 86400)
                for i in range(n_profiles)]
    per_profile = -(-total // n_profiles) if n_profiles else 0
    plan = schedule_posts(profiles, per_profile, start, interval,
                          bank=LureTemplateBank.default(), seed=p.seed)
    plan = PostingPlan(plan.entries[:total], plan.interval)
    write_jsonl(p.path("profiles.jsonl"), profiles)
    write_jsonl(p.path("plan.jsonl"), plan.entries)
    _log("lure", entries=len(plan.entries), profiles=n_profiles)
    return plan


def _load_plan(p: Pipeline) -> PostingPlan:
    entries = read_jsonl(p.path("plan.jsonl"), PlanEntry.from_dict)
    return PostingPlan(entries, int(p.cfg["lure"]["interval_minutes"]) * 60)


def stage_simulate(p: Pipeline) -> sim_mod.SimOutput:
    sc = p.cfg["sim"]
    plan = _load_plan(p)
    planted = sim_mod.plant_campaigns(int(sc["n_campaigns"]), int(sc["n_scammers"]),
                                      p.seed, float(sc.get("solo_rate", 0.5)))
    config = sim_mod.SimConfig(
        seed=p.seed, n_scammers=int(sc["n_scammers"]),
        repeat_text_prob=float(sc["repeat_text_prob"]),
        engagement_rate=float(sc["engagement_rate"]),
        suspension_hazard=float(sc["suspension_hazard"]),
        deactivation_hazard=float(sc["deactivation_hazard"]),
        horizon_days=int(sc["horizon_days"]), planted_campaigns=planted)
    output = sim_mod.run_sim(config, plan)
    output = sim_mod.inject_benign(output, config, float(sc["benign_rate"]))

    write_jsonl(p.path("tweets.jsonl"), output.tweets)
    write_jsonl(p.path("accounts.jsonl"), output.accounts)
    write_jsonl(p.path("interactions.jsonl"), output.interactions)
    write_jsonl(p.path("ground_truth.jsonl"),
                [output.ground_truth[k] for k in sorted(output.ground_truth,
                                                        key=lambda k: (k[0].render(), k[1]))])
    write_jsonl(p.path("roles.jsonl"),
                [{"account_id": a, "role": r} for a, r in sorted(output.roles.items())])

    ec = p.cfg["embed"]
    scam_ids = sorted(a for a, r in output.roles.items() if r == "scammer")
    records, truth = sim_mod.make_embeddings(scam_ids, p.seed,
                                             int(ec["n_embeddings"]), int(ec["dim"]))
    write_jsonl(p.path("embeddings.jsonl"), records)
    write_jsonl(p.path("embedding_truth.jsonl"),
                [{"account_id": a, "category": c} for a, c in sorted(truth.items())])
    _log("simulate", accounts=len(output.accounts),
         interactions=len(output.interactions), planted=len(planted))
    return output


def stage_ingest(p: Pipeline) -> list[AccountVerdict]:
    accounts = read_jsonl(p.path("accounts.jsonl"), ScamAccount.from_dict)
    interactions = read_jsonl(p.path("interactions.jsonl"), Interaction.from_dict)
    stream = sorted(interactions, key=lambda i: (i.at, i.interaction_id))

    # two-chunk marking-point pull; the concatenation must equal the stream
    half = stream[:len(stream) // 2]
    got_first, mark = pull_timeline(half, None)
    got_second, mark = pull_timeline(stream, mark)
    pulled = got_first + got_second
    if [i.interaction_id for i in pulled] != [i.interaction_id for i in stream]:
        raise ConfigError("marking-point pull lost or duplicated records")
    if mark is not None:
        write_jsonl(p.path("marking_point.jsonl"), [mark])

    registry = OfficialRegistry.default()
    rules = ExtractionRuleSet.default()
    by_actor: dict[str, list[Interaction]] = {}
    for itx in pulled:
        by_actor.setdefault(itx.actor, []).append(itx)
    verdicts = [classify_account(a, by_actor.get(a.account_id, []), registry, rules)
                for a in sorted(accounts, key=lambda a: a.account_id)]
    write_jsonl(p.path("verdicts.jsonl"), verdicts)
    _log("ingest", pulled=len(pulled),
         scam=sum(1 for v in verdicts if v.verdict == "Scam"))
    return verdicts


def stage_extract(p: Pipeline, in_path=None, rules_path=None, to_stdout=False) -> list[ContactChannel]:
    interactions = read_jsonl(in_path or p.path("interactions.jsonl"),
                              Interaction.from_dict)
    rules = (ExtractionRuleSet.from_file(rules_path) if rules_path
             else ExtractionRuleSet.default())
    accounts = read_jsonl(p.path("accounts.jsonl"), ScamAccount.from_dict)
    tweets = read_jsonl(p.path("tweets.jsonl"), HoneyTweet.from_dict)
    verdict_path = p.path("verdicts.jsonl")
    scam_ids = None
    if verdict_path.exists():
        scam_ids = {v["account_id"] for v in read_jsonl(verdict_path)
                    if v["verdict"] == "Scam"}
    handles = {a.account_id: a.handle for a in accounts}
    scoped = [i for i in interactions if scam_ids is None or i.actor in scam_ids]
    uses = extract_uses(scoped, rules, handles)
    wallets = {t.tweet_id: t.wallet for t in tweets}
    channels = merge_channels(uses, rules, wallets)
    write_jsonl(p.path("uses.jsonl"), uses)
    write_jsonl(p.path("channels.jsonl"), channels)
    if to_stdout:
        for ch in channels:
            print(json.dumps(ch.to_dict(), separators=(",", ":")))
    _log("extract", uses=len(uses), channels=len(channels))
    return channels


def stage_cluster(p: Pipeline):
    uses = read_jsonl(p.path("uses.jsonl"), ChannelUse.from_dict)
    interactions = read_jsonl(p.path("interactions.jsonl"), Interaction.from_dict)
    clusters, singletons = campaigns_mod.build_clusters(uses)
    per_account: dict[str, int] = {}
    for itx in interactions:
        per_account[itx.actor] = per_account.get(itx.actor, 0) + 1
    groups = campaigns_mod.agglomerate_groups(clusters, per_account)
    stats_rows = [r.to_dict() for r in campaigns_mod.cluster_stats(clusters)]
    kinds, matrix = campaigns_mod.shared_campaign_matrix(clusters)

    write_jsonl(p.path("clusters.jsonl"), clusters)
    write_jsonl(p.path("singletons.jsonl"), singletons)
    write_jsonl(p.path("groups.jsonl"), groups)
    p.path("stats.json").write_text(
        json.dumps({"rows": stats_rows, "matrix_kinds": kinds, "matrix": matrix},
                   indent=1, sort_keys=True) + "\n", encoding="utf-8")
    _log("cluster", clusters=len(clusters), singletons=len(singletons),
         groups=len(groups))
    return clusters, groups


def stage_embed(p: Pipeline):
    ec = p.cfg["embed"]
    records = read_jsonl(p.path("embeddings.jsonl"), EmbeddingRecord.from_dict)
    grid = EmbedGrid([int(x) for x in ec["reduce_to"]],
                     [float(x) for x in ec["linkage_cutoff"]],
                     [int(x) for x in ec["min_cluster_size"]])
    result = sweep(records, grid, threads=p.threads,
                   unit_norm=bool(ec.get("unit_norm", False)))
    names = {i: n for i, n in enumerate(ec.get("label_names", _DEFAULT_LABELS))}
    result.assignment.label_names = {
        label: names.get(label, f"Cluster{label}")
        for label in sorted(set(result.assignment.labels)) if label != -1}
    write_jsonl(p.path("assignment.jsonl"), result.assignment.to_records(),
                to_dict=lambda r: r)
    rows = [r.to_dict() for r in result.table]
    with p.path("sweep_scores.csv").open("w", encoding="utf-8", newline="\n") as fh:
        fh.write("reduce_to,linkage_cutoff,min_cluster_size,score,n_clusters,n_noise\n")
        for r in rows:
            score = "" if r["score"] is None else f"{r['score']:.6f}"
            fh.write(f"{r['reduce_to']},{r['linkage_cutoff']},{r['min_cluster_size']},"
                     f"{score},{r['n_clusters']},{r['n_noise']}\n")
    p.path("best_config.json").write_text(
        json.dumps(result.best.to_dict(), indent=1, sort_keys=True) + "\n",
        encoding="utf-8")
    _log("embed", configs=len(rows), clusters=result.assignment.n_clusters(),
         noise=result.assignment.n_noise())
    return result


def stage_engage(p: Pipeline):
    channels = read_jsonl(p.path("channels.jsonl"), ContactChannel.from_dict)
    truth = {}
    gt_path = p.path("ground_truth.jsonl")
    if gt_path.exists():
        for entry in read_jsonl(gt_path, sim_mod.GroundTruthEntry.from_dict):
            truth[(entry.kind, entry.identifier)] = entry

    log_path = p.path("sessions.jsonl")
    if log_path.exists():
        log_path.unlink()
    log = SessionLog(log_path)
    drafts_dir = p.path("drafts")
    drafts_dir.mkdir(parents=True, exist_ok=True)

    payments = []
    quotes = []
    categorized = {KEY_PHRASE_REQUEST: 0, FEE_PAYMENT: 0, "unclassified": 0}
    engaged = [ch for ch in sorted(channels, key=lambda c: (c.kind.render(), c.identifier))
               if ch.kind.render() in ("Email", "Instagram")]
    for n, ch in enumerate(engaged):
        session = EngagementSession(f"es{n:04d}", ch.kind, ch.identifier)
        at = ch.last_seen + 3600
        log.created(session, at)
        if ch.kind.render() == "Email":
            draft = craft_email(ch, None, p.seed)
            (drafts_dir / f"{session.session_id}.eml").write_text(
                draft.as_eml(), encoding="utf-8")
            outbound = f"{draft.subject}\n{draft.body}"
        else:
            wallet = ch.wallet_attribution or WalletKind.METAMASK
            token = format(derive(p.seed, "dmaddr", ch.identifier), "016x")
            placeholder = f"0x{token[:2]} .... {token[-4:]}"
            outbound = craft_dm(ch.identifier, wallet, placeholder)
            (drafts_dir / f"{session.session_id}.txt").write_text(
                outbound + "\n", encoding="utf-8")
        session.say("outbound", outbound, at)
        log.message(session.session_id, "outbound", outbound, at)
        session.advance("sent")
        log.state(session.session_id, "sent", at)

        entry = truth.get((ch.kind, ch.identifier))
        if entry is None:
            session.advance("dead")
            log.state(session.session_id, "dead", at + 86400)
            continue
        wallet = entry.wallet
        reply = sim_mod.scripted_response(ch.identifier, entry.category, wallet, p.seed)
        at2 = at + 7200
        session.say("inbound", reply, at2)
        log.message(session.session_id, "inbound", reply, at2)
        session.advance("responded")
        log.state(session.session_id, "responded", at2)

        category = classify_response(reply)
        categorized[category.label] = categorized.get(category.label, 0) + 1
        for method in category.methods:
            payments.append({"session_id": session.session_id, **method.to_dict()})
        for amount in extract_prices(reply):
            quotes.append(PriceQuote(amount, session.session_id))
        session.advance("categorized")
        log.state(session.session_id, "categorized", at2)

    write_jsonl(p.path("payments.jsonl"), payments, to_dict=lambda r: r)
    summary = price_stats(quotes)
    p.path("prices.json").write_text(json.dumps(summary, indent=1, sort_keys=True) + "\n",
                                     encoding="utf-8")
    _log("engage", sessions=len(engaged), payments=len(payments), **categorized)
    return payments, summary


def stage_chain(p: Pipeline, wallets_path=None, eth_path=None, btc_path=None):
    cc = p.cfg["chain"]
    start = parse_iso(p.cfg["lure"]["start"]) if isinstance(p.cfg["lure"]["start"], str) \
        else int(p.cfg["lure"]["start"])
    if wallets_path and eth_path:
        wallets = read_jsonl(wallets_path, chain_mod.HoneyWallet.from_dict)
        eth_txs = read_jsonl(eth_path, chain_mod.EthTx.from_dict)
        btc_txs = read_jsonl(btc_path, chain_mod.BtcTx.from_dict) if btc_path else []
    else:
        btc_addresses = []
        pay_path = p.path("payments.jsonl")
        if pay_path.exists():
            btc_addresses = [r["address"] for r in read_jsonl(pay_path)
                             if r.get("method") == "crypto" and r.get("chain") == "BTC"]
        wallets, eth_txs, btc_txs = sim_mod.synthesize_chain(
            p.seed, int(cc["n_wallets"]), start,
            usd_funding=float(cc["usd_funding"]),
            usd_per_eth=float(cc["usd_per_eth"]),
            btc_addresses=btc_addresses)
        write_jsonl(p.path("wallets.jsonl"), wallets)
        write_jsonl(p.path("eth_ledger.jsonl"), eth_txs)
        write_jsonl(p.path("btc_ledger.jsonl"), btc_txs)

    events, table = chain_mod.detect_theft(wallets, eth_txs)
    write_jsonl(p.path("thefts.jsonl"), events)
    p.path("theft_table.json").write_text(
        json.dumps({"rows": table.rows, "distinct_recipients": table.distinct_recipients},
                   indent=1, sort_keys=True) + "\n", encoding="utf-8")

    eth_summaries = chain_mod.summarize_addresses([w.address for w in wallets], eth_txs)
    btc_addrs = sorted({a for tx in btc_txs for a, _ in tx.inputs + tx.outputs
                        if a != chain_mod.COINBASE})
    btc_summaries = chain_mod.summarize_addresses(btc_addrs, btc_txs) if btc_txs else []
    with p.path("summaries.csv").open("w", encoding="utf-8", newline="\n") as fh:
        fh.write("ledger,address,n_received,n_sent,total_received,"
                 "total_sent,balance,first_activity,last_activity\n")
        for ledger, rows in (("eth", eth_summaries), ("btc", btc_summaries)):
            for s in rows:
                first = "" if s.first_activity is None else s.first_activity
                last = "" if s.last_activity is None else s.last_activity
                fh.write(f"{ledger},{s.address},{s.n_received},{s.n_sent},"
                         f"{s.total_received},{s.total_sent},{s.balance},"
                         f"{first},{last}\n")

    series = chain_mod.activity_series([w.address for w in wallets], eth_txs,
                                       30 * 86400)
    with p.path("series.csv").open("w", encoding="utf-8", newline="\n") as fh:
        fh.write("bucket_start,received,sent\n")
        for bucket_start, received, sent in series:
            fh.write(f"{bucket_start},{received},{sent}\n")

    if btc_txs:
        cospend = chain_mod.cospend_clusters(btc_txs)
        write_jsonl(p.path("cospend.jsonl"),
                    [{"representative": rep, "members": members}
                     for rep, members in sorted(cospend.items())],
                    to_dict=lambda r: r)
    _log("chain", wallets=len(wallets), thefts=len(events),
         recipients=table.distinct_recipients)
    return events, table


def stage_report(p: Pipeline):
    accounts = read_jsonl(p.path("accounts.jsonl"), ScamAccount.from_dict)
    tweets = read_jsonl(p.path("tweets.jsonl"), HoneyTweet.from_dict)
    interactions = read_jsonl(p.path("interactions.jsonl"), Interaction.from_dict)
    verdicts = read_jsonl(p.path("verdicts.jsonl"))
    scam_ids = {v["account_id"] for v in verdicts if v["verdict"] == "Scam"}
    channels = read_jsonl(p.path("channels.jsonl"), ContactChannel.from_dict)

    stats = json.loads(p.path("stats.json").read_text(encoding="utf-8")) \
        if p.path("stats.json").exists() else {"rows": [], "matrix_kinds": [], "matrix": []}

    engagement_rows = None
    if p.path("assignment.jsonl").exists():
        recs = read_jsonl(p.path("assignment.jsonl"))
        ids = [r["account_id"] for r in recs]
        labels = [int(r["label"]) for r in recs]
        names = {int(r["label"]): r["label_name"] for r in recs
                 if r.get("label_name") and int(r["label"]) != -1}
        assignment = ClusterAssignment(ids, labels, names)
        acct_map = {a.account_id: a for a in accounts}
        engagement_rows = cluster_engagement_table(assignment, interactions, acct_map)

    probes_path = p.path("probes.jsonl")
    if not probes_path.exists():
        horizon_end = (tweets[-1].posted_at if tweets else 0) + 86400 * 30
        write_jsonl(probes_path, sim_mod.simulate_probes(channels, p.seed, horizon_end),
                    to_dict=lambda r: r)
    probes = read_jsonl(probes_path, report_mod.ProbeResult.from_dict)

    theft_rows = None
    recipients = 0
    if p.path("theft_table.json").exists():
        theft = json.loads(p.path("theft_table.json").read_text(encoding="utf-8"))
        theft_rows = theft["rows"]
        recipients = theft["distinct_recipients"]

    price_summary = None
    if p.path("prices.json").exists():
        price_summary = json.loads(p.path("prices.json").read_text(encoding="utf-8"))

    inputs = report_mod.ReportInputs(
        accounts=accounts, scam_ids=scam_ids, tweets=tweets,
        interactions=interactions, channels=channels,
        distribution_rows=channel_distribution(channels),
        stats_rows=stats["rows"], matrix_kinds=stats["matrix_kinds"],
        matrix=stats["matrix"], engagement_rows=engagement_rows, probes=probes,
        theft_rows=theft_rows, theft_recipients=recipients,
        price_summary=price_summary)
    written = report_mod.emit_report(inputs, p.path("report"),
                                     fmt=p.cfg.get("format", "csv"))
    _log("report", files=len(written))
    return written


def stage_audit(report_dir: str) -> int:
    problems = report_mod.audit_report(report_dir)
    for problem in problems:
        _log("audit", problem=problem)
    _log("audit", ok=not problems, checks_failed=len(problems))
    return EXIT_OK if not problems else EXIT_VALIDATION


def run_e2e(p: Pipeline) -> None:
    t0 = time.time()
    stage_lure(p)
    stage_simulate(p)
    stage_ingest(p)
    stage_extract(p)
    stage_cluster(p)
    stage_embed(p)
    stage_engage(p)
    stage_chain(p)
    stage_report(p)
    code = stage_audit(p.path("report"))
    if code != EXIT_OK:
        raise ConfigError("end-to-end report failed the audit")
    _log("e2e", seconds=round_half_up(time.time() - t0, 2))


# ---------------------------------------------------------------------------
# Argument parsing
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="conman",
                                     description="scam honeypot analysis pipeline")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--config", help="TOML config file")
        sp.add_argument("--seed", type=int, help="override the run seed")
        sp.add_argument("--threads", type=int, help="worker threads (default 1)")
        sp.add_argument("--out", help="run directory (default ./run)")

    for name in ("lure", "simulate", "ingest", "cluster", "embed", "engage"):
        common(sub.add_parser(name))

    for name in ("report", "e2e"):
        sp = sub.add_parser(name)
        common(sp)
        sp.add_argument("--format", choices=["csv", "json", "markdown"],
                        help="report table format (default csv)")

    extract = sub.add_parser("extract")
    common(extract)
    extract.add_argument("--in", dest="in_path", help="interactions JSONL")
    extract.add_argument("--rules", help="extraction rules JSON")
    extract.add_argument("--stdout", action="store_true",
                         help="also print channels to stdout")

    chain = sub.add_parser("chain")
    common(chain)
    chain.add_argument("--wallets", help="honey wallets JSONL (fixture mode)")
    chain.add_argument("--eth", help="ETH ledger JSONL (fixture mode)")
    chain.add_argument("--btc", help="BTC ledger JSONL (fixture mode)")

    audit = sub.add_parser("audit")
    audit.add_argument("report_dir", help="emitted report directory")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_VALIDATION if exc.code not in (0, None) else EXIT_OK

    try:
        if args.command == "audit":
            return stage_audit(args.report_dir)
        p = load_config(args)
        if args.command == "lure":
            stage_lure(p)
        elif args.command == "simulate":
            stage_simulate(p)
        elif args.command == "ingest":
            stage_ingest(p)
        elif args.command == "extract":
            stage_extract(p, args.in_path, args.rules, args.stdout)
        elif args.command == "cluster":
            stage_cluster(p)
        elif args.command == "embed":
            stage_embed(p)
        elif args.command == "engage":
            stage_engage(p)
        elif args.command == "chain":
            stage_chain(p, args.wallets, args.eth, args.btc)
        elif args.command == "report":
            stage_report(p)
        elif args.command == "e2e":
            run_e2e(p)
        return EXIT_OK
    except (ConfigError, ValueError, FileNotFoundError) as exc:
        _log("error", kind="validation", message=str(exc))
        return EXIT_VALIDATION
    except Exception as exc:  # noqa: BLE001 - last-resort boundary
        _log("error", kind="internal", message=f"{type(exc).__name__}: {exc}")
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
