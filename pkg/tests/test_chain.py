"""Honey wallets, UTXO walks, theft detection, co-spend, activity series."""

import sys
from pathlib import Path

import pytest

from conman.chain import (BtcTx, EthTx, HoneyWallet, LedgerError,
                          ReleaseChannel, WORDLIST, activity_series,
                          cospend_clusters, derive_address, detect_theft,
                          mint_honey_wallets, summarize_addresses)
from conman.rng import SplitMix64

sys.path.insert(0, str(Path(__file__).parent))
from oracles import brute_cospend  # noqa: E402

SAT = 100_000_000


def test_wordlist_is_2048_distinct_lowercase():
    assert len(WORDLIST) == 2048
    assert len(set(WORDLIST)) == 2048
    assert all(w == w.lower() for w in WORDLIST)


def test_mint_zero_and_hundred():
    assert mint_honey_wallets(0, 1) == []
    wallets = mint_honey_wallets(100, 1)
    assert len({w.address for w in wallets}) == 100
    assert mint_honey_wallets(100, 1) == wallets
    assert all(len(w.key_phrase) == 12 for w in wallets)


def test_wallet_validates_phrase_and_address():
    wallet = mint_honey_wallets(1, 2)[0]
    with pytest.raises(ValueError):
        HoneyWallet("w", wallet.key_phrase, "0x" + "0" * 40)
    with pytest.raises(ValueError):
        HoneyWallet("w", ["notaword"] * 12, derive_address(["notaword"] * 12))


# --- UTXO walk -------------------------------------------------------------------

def test_utxo_walk_with_change_output():
    txs = [
        BtcTx("t1", [("coinbase", 2 * SAT)], [("A", 2 * SAT)], at=10),
        BtcTx("t2", [("A", 2 * SAT)],
              [("B", int(1.5 * SAT)), ("A", int(0.4 * SAT))], at=20),
    ]
    summary = summarize_addresses(["A", "B"], txs)
    a, b = summary
    assert a.balance == int(0.4 * SAT)
    assert a.total_received == 2 * SAT + int(0.4 * SAT)
    assert a.total_sent == 2 * SAT
    assert a.n_received == 2 and a.n_sent == 1
    assert b.balance == int(1.5 * SAT)


def test_utxo_rejects_spending_unknown_output():
    txs = [BtcTx("t1", [("A", SAT)], [("B", SAT)], at=10)]
    with pytest.raises(LedgerError):
        summarize_addresses(["A"], txs)


def test_btc_tx_invariants():
    with pytest.raises(LedgerError):
        BtcTx("t", [], [("A", 1)], at=0)
    with pytest.raises(LedgerError):
        BtcTx("t", [("A", 1)], [("B", 2)], at=0)
    with pytest.raises(LedgerError):
        BtcTx("t", [("A", -1)], [("B", 0)], at=0)
    assert BtcTx("t", [("A", 5)], [("B", 3)], at=0).fee == 2


def test_empty_ledger_summaries_are_zero():
    summary = summarize_addresses(["A"], [])
    assert summary[0].balance == 0 and summary[0].first_activity is None


def test_eth_walk_balances():
    txs = [
        EthTx("t1", "coinbase", "A", 100, at=1),
        EthTx("t2", "A", "B", 60, at=2),
    ]
    a, b = summarize_addresses(["A", "B"], txs)
    assert a.balance == 40 and b.balance == 60
    assert a.n_sent == 1 and b.n_received == 1


# --- co-spend ---------------------------------------------------------------------

def _chain_txs(groups, start=0):
    """One tx per input-address group; funding txs created automatically."""
    txs = []
    n = 0
    for group in groups:
        for addr in group:
            txs.append(BtcTx(f"f{n}", [("coinbase", SAT)], [(addr, SAT)],
                             at=start + n))
            n += 1
    for g_no, group in enumerate(groups):
        txs.append(BtcTx(f"s{g_no}", [(a, SAT) for a in group],
                         [("sink", SAT * len(group) - 100)], at=1000 + g_no))
    return txs


def test_cospend_transitive_merge():
    # {A,B} spend together, then {B,C}: B must appear twice, so fund it twice
    txs = [
        BtcTx("f1", [("coinbase", 3 * SAT)],
              [("A", SAT), ("B", SAT), ("C", SAT)], at=1),
        BtcTx("f2", [("coinbase", SAT)], [("B", SAT)], at=2),
        BtcTx("s1", [("A", SAT), ("B", SAT)], [("x", 2 * SAT - 10)], at=10),
        BtcTx("s2", [("B", SAT), ("C", SAT)], [("y", 2 * SAT - 10)], at=20),
    ]
    clusters = cospend_clusters(txs)
    assert sorted(clusters["A"]) == ["A", "B", "C"]


def test_cospend_singletons_for_lone_spenders():
    txs = _chain_txs([["A"], ["B"], ["C"]])
    clusters = cospend_clusters(txs)
    assert all(len(m) == 1 for rep, m in clusters.items() if rep in "ABC")


def test_cospend_matches_brute_force_batch():
    rng = SplitMix64(31415)
    for _ in range(100):
        n_addr = 2 + rng.randrange(20)
        addresses = [f"a{i:02d}" for i in range(n_addr)]
        groups = []
        used = set()
        for _ in range(rng.randrange(8)):
            size = 1 + rng.randrange(4)
            group = sorted({addresses[rng.randrange(n_addr)] for _ in range(size)})
            groups.append(group)
        txs = _chain_txs([g for g in groups if g])
        mine = {frozenset(m) for m in cospend_clusters(txs).values()}
        assert mine == brute_cospend(txs)


# --- theft detection ---------------------------------------------------------------

def _funded_wallets(n, channel=ReleaseChannel.EMAIL):
    wallets = mint_honey_wallets(n, 99)
    txs = []
    for i, w in enumerate(wallets):
        w.released_on = channel
        w.released_at = 100 + i
        txs.append(EthTx(f"fund{i}", "funder", w.address, 1_000_000, at=10 + i))
    return wallets, txs


def test_no_outbound_means_no_theft():
    wallets, txs = _funded_wallets(5)
    events, table = detect_theft(wallets, txs)
    assert events == []
    assert table.rows[-1] == {"channel": "All", "sent": 5, "stolen": 0}


def test_three_drains_one_recipient():
    wallets, txs = _funded_wallets(3)
    for i, w in enumerate(wallets):
        txs.append(EthTx(f"drain{i}", w.address, "0xthief", 1_000_000, at=500 + i))
    events, table = detect_theft(wallets, txs)
    assert len(events) == 3
    assert table.distinct_recipients == 1


def test_partial_spend_above_threshold_is_not_theft():
    wallets, txs = _funded_wallets(1)
    txs.append(EthTx("d", wallets[0].address, "0xthief", 500_000, at=500))
    events, _ = detect_theft(wallets, txs)
    assert events == []
    txs.append(EthTx("d2", wallets[0].address, "0xthief", 450_000, at=600))
    events, _ = detect_theft(wallets, txs)  # now below 10% of funding
    assert len(events) == 1 and events[0].drain_txid == "d2"


def test_theft_detection_is_monotone_in_txs():
    wallets, txs = _funded_wallets(4)
    rng = SplitMix64(55)
    drains = [EthTx(f"d{i}", w.address, f"0xr{i % 2}", 950_000, at=900 + i)
              for i, w in enumerate(wallets)]
    stolen_counts = []
    for upto in range(len(drains) + 1):
        events, _ = detect_theft(wallets, txs + drains[:upto])
        stolen_counts.append(len(events))
    assert stolen_counts == sorted(stolen_counts)
    assert rng.next_u64() is not None  # keep the stream exercised


def test_theft_requires_release_channel():
    wallets = mint_honey_wallets(1, 3)
    with pytest.raises(ValueError):
        detect_theft(wallets, [])


# --- activity series ----------------------------------------------------------------

def test_single_tx_series():
    txs = [EthTx("t", "funder", "A", 100, at=86400 * 3)]
    series = activity_series(["A"], txs, bucket=86400)
    assert series == [(86400 * 3, 100, 0)]


def test_series_conservation_matches_summaries():
    wallets, txs = _funded_wallets(6)
    for i, w in enumerate(wallets[:3]):
        txs.append(EthTx(f"d{i}", w.address, "0xout", 800_000, at=86400 * (i + 1)))
    addresses = [w.address for w in wallets]
    series = activity_series(addresses, txs, bucket=3600)
    summaries = summarize_addresses(addresses, txs)
    assert sum(r for _, r, _ in series) == sum(s.total_received for s in summaries)
    assert sum(s for _, _, s in series) == sum(s.total_sent for s in summaries)


def test_series_rejects_bad_bucket():
    with pytest.raises(ValueError):
        activity_series(["A"], [], bucket=0)


def test_release_channel_round_trip():
    for channel in ReleaseChannel:
        assert ReleaseChannel.parse(channel.render()) is channel
