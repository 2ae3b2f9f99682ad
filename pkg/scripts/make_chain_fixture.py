#!/usr/bin/env python3
"""Build the committed chain fixtures.

Deterministic generator for:
  fixtures/honey_wallets.jsonl  100 instrumented wallets with release channels
  fixtures/eth_ledger.jsonl     funding plus drain transactions (35 thefts,
                                26 distinct recipients, 2 partial non-thefts)
  fixtures/btc_ledger.jsonl     72 watched addresses, 49 active, with exact
                                integer totals that render as 38.40 received /
                                37.74 sent / 0.659 remaining, plus one large
                                co-spend web and one isolated spender
  fixtures/btc_addresses.json   the 72-address watch list

Re-running reproduces the same bytes. scripts/verify_chain_fixture.py checks
the fixture independently of the package implementation.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from conman.addresses import random_base58_address, random_eth_address  # noqa: E402
from conman.chain import ReleaseChannel, mint_honey_wallets  # noqa: E402
from conman.rng import SplitMix64, derive  # noqa: E402

FIXTURE_DIR = Path(__file__).resolve().parents[1] / "fixtures"
SEED = 20221014
T0 = 1622505600  # 2021-06-01T00:00:00Z
WEI_FUNDING = 10 ** 15  # $1.26 at $1260/ETH
HOUR = 3600
DAY = 86400

RELEASE_PLAN = [  # (channel, sent, stolen) per the release experiment design
    ("Email", 25, 8),
    ("Forms", 30, 17),
    ("Instagram", 20, 3),
    ("Telegram", 5, 2),
    ("URLs", 20, 5),
]
N_RECIPIENTS = 26

BTC_TOTAL_SENT = 3_774_100_000        # 37.741 BTC -> renders 37.74
BTC_BALANCE_EACH = 4_118_750          # x16 = 65,900,000 sat = 0.659 BTC
BTC_N_ACTIVE = 49
BTC_N_ADDRESSES = 72
BTC_N_WITH_BALANCE = 16
BTC_FEE = 10_000
N_FILLERS = 1500
N_MERGES = 150
HUB_UTXO = 2_000_000
FILLER_UTXO = 1_000_000


def jsonl(path: Path, rows) -> None:
    with path.open("w", encoding="utf-8", newline="\n") as fh:
        for row in rows:
            fh.write(json.dumps(row, separators=(",", ":")) + "\n")


def build_eth():
    wallets = mint_honey_wallets(100, SEED)
    rng = SplitMix64(derive(SEED, "fixture-eth"))
    recipients = [random_eth_address(rng) for _ in range(N_RECIPIENTS)]
    funder = random_eth_address(rng)

    idx = 0
    stolen_ids = []
    rows_wallets = []
    txs = [{"txid": "bootstrap", "from": "coinbase", "to": funder,
            "value": WEI_FUNDING * len(wallets), "at": T0}]
    theft_no = 0
    partial_marked = 0
    for channel, sent, stolen in RELEASE_PLAN:
        for k in range(sent):
            w = wallets[idx]
            w.released_on = ReleaseChannel.parse(channel)
            w.released_at = T0 + DAY * (10 + idx)
            txs.append({"txid": f"fund-{w.wallet_id}", "from": funder,
                        "to": w.address, "value": WEI_FUNDING,
                        "at": T0 + HOUR * (1 + idx)})
            if k < stolen:
                recipient = recipients[theft_no % N_RECIPIENTS]
                # a few drains leave dust behind but still cross the threshold
                value = WEI_FUNDING if theft_no % 12 else WEI_FUNDING * 95 // 100
                txs.append({"txid": f"drain-{w.wallet_id}", "from": w.address,
                            "to": recipient, "value": value,
                            "at": w.released_at + HOUR * (2 + theft_no)})
                stolen_ids.append(w.wallet_id)
                theft_no += 1
            elif channel == "Email" and partial_marked < 2:
                # outbound spend that does NOT count as theft (60% remains)
                txs.append({"txid": f"partial-{w.wallet_id}", "from": w.address,
                            "to": recipients[0], "value": WEI_FUNDING * 40 // 100,
                            "at": w.released_at + HOUR * 5})
                partial_marked += 1
            rows_wallets.append(w.to_dict())
            idx += 1
    assert theft_no == 35 and len(set(stolen_ids)) == 35
    return rows_wallets, txs


def build_btc():
    rng = SplitMix64(derive(SEED, "fixture-btc"))
    watch = [random_base58_address(rng) for _ in range(BTC_N_ADDRESSES)]
    assert len(set(watch)) == BTC_N_ADDRESSES
    hub = random_base58_address(rng)
    sink = random_base58_address(rng)
    fillers = [random_base58_address(rng) for _ in range(N_FILLERS)]

    receipts = [60_000_000 + (i * 7_368_787) % 30_000_000
                for i in range(BTC_N_ACTIVE - 1)]
    rest = BTC_TOTAL_SENT - sum(receipts)
    assert 1_000_000 < rest < 200_000_000, rest
    receipts.append(rest)
    assert sum(receipts) == BTC_TOTAL_SENT

    txs = []
    # funding: coinbase -> funder_i -> watch address (single-input, no co-spend)
    for i in range(BTC_N_ACTIVE):
        funder = random_base58_address(rng)
        amount = receipts[i]
        txs.append({"txid": f"cb{i:04d}", "at": T0 + HOUR * i,
                    "inputs": [["coinbase", amount + BTC_FEE]],
                    "outputs": [[funder, amount + BTC_FEE]]})
        txs.append({"txid": f"in{i:04d}", "at": T0 + HOUR * i + 600,
                    "inputs": [[funder, amount + BTC_FEE]],
                    "outputs": [[watch[i], amount]]})

    # the big co-spend web: hub UTXOs merged with filler UTXOs
    txs.append({"txid": "hubfund", "at": T0 + DAY,
                "inputs": [["coinbase", HUB_UTXO * (N_MERGES + 1)]],
                "outputs": [[hub, HUB_UTXO]] * (N_MERGES + 1)})
    txs.append({"txid": "fillfund", "at": T0 + DAY + 600,
                "inputs": [["coinbase", FILLER_UTXO * N_FILLERS]],
                "outputs": [[f, FILLER_UTXO] for f in fillers]})
    for m in range(N_MERGES):
        group = fillers[m * 10:(m + 1) * 10]
        total_in = HUB_UTXO + FILLER_UTXO * len(group)
        txs.append({"txid": f"mg{m:04d}", "at": T0 + 2 * DAY + HOUR * m,
                    "inputs": [[hub, HUB_UTXO]] + [[f, FILLER_UTXO] for f in group],
                    "outputs": [[sink, total_in - BTC_FEE]]})

    # spends: watch[0] co-spends with the hub, watch[1] always spends alone
    for i in range(BTC_N_ACTIVE):
        amount = receipts[i]
        balance = BTC_BALANCE_EACH if i < BTC_N_WITH_BALANCE else 0
        inputs = [[watch[i], amount]]
        extra_in = 0
        if i == 0:
            inputs.append([hub, HUB_UTXO])
            extra_in = HUB_UTXO
        external = random_base58_address(rng)
        outputs = []
        if balance:
            outputs.append([watch[i], balance])
        outputs.append([external, amount + extra_in - balance - BTC_FEE])
        txs.append({"txid": f"sp{i:04d}", "at": T0 + 30 * DAY + HOUR * i,
                    "inputs": inputs, "outputs": outputs})
    return watch, txs


def main() -> None:
    FIXTURE_DIR.mkdir(parents=True, exist_ok=True)
    wallets, eth_txs = build_eth()
    jsonl(FIXTURE_DIR / "honey_wallets.jsonl", wallets)
    jsonl(FIXTURE_DIR / "eth_ledger.jsonl", eth_txs)
    watch, btc_txs = build_btc()
    jsonl(FIXTURE_DIR / "btc_ledger.jsonl", btc_txs)
    (FIXTURE_DIR / "btc_addresses.json").write_text(
        json.dumps(watch, indent=1) + "\n", encoding="utf-8")
    print(f"wrote fixtures to {FIXTURE_DIR}")


if __name__ == "__main__":
    main()
