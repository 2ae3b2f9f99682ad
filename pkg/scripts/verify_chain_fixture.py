#!/usr/bin/env python3
"""Independent summation check for the committed chain fixtures.

Reads the fixture JSONL directly (no package imports) and re-derives the
headline aggregates with its own arithmetic:

  - honey wallets: 100 released (25/30/20/5/20 per channel), 35 stolen
    (8/17/3/2/5), 26 distinct drain recipients
  - watched BTC addresses: 49 of 72 active, 38.40 BTC received,
    37.74 BTC sent (2dp), 16 addresses holding 0.659 BTC

Exit status 0 iff every check passes.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

FIXTURES = Path(__file__).resolve().parents[1] / "fixtures"

EXPECTED_RELEASES = {"Email": 25, "Forms": 30, "Instagram": 20,
                     "Telegram": 5, "URLs": 20}
EXPECTED_THEFTS = {"Email": 8, "Forms": 17, "Instagram": 3,
                   "Telegram": 2, "URLs": 5}

failures = []


def check(name: str, ok: bool, detail: str = "") -> None:
    print(f"[{'PASS' if ok else 'FAIL'}] {name}" + (f" ({detail})" if detail else ""))
    if not ok:
        failures.append(name)


def read_jsonl(path: Path) -> list[dict]:
    rows = []
    with path.open("r", encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if line:
                rows.append(json.loads(line))
    return rows


def verify_eth() -> None:
    wallets = read_jsonl(FIXTURES / "honey_wallets.jsonl")
    txs = read_jsonl(FIXTURES / "eth_ledger.jsonl")

    released = {}
    for w in wallets:
        released[w["released_on"]] = released.get(w["released_on"], 0) + 1
    check("eth: 100 wallets released", len(wallets) == 100, str(len(wallets)))
    check("eth: releases per channel", released == EXPECTED_RELEASES, str(released))

    received = {w["address"]: 0 for w in wallets}
    balance = {w["address"]: 0 for w in wallets}
    stolen_of = {}
    recipients = set()
    for tx in sorted(txs, key=lambda t: (t["at"], t["txid"])):
        if tx["to"] in balance:
            received[tx["to"]] += tx["value"]
            balance[tx["to"]] += tx["value"]
        sender = tx["from"]
        if sender in balance and sender != tx["to"]:
            balance[sender] -= tx["value"]
            if sender not in stolen_of and received[sender] > 0 \
                    and balance[sender] * 10 < received[sender]:
                stolen_of[sender] = tx["to"]

    channel_of = {w["address"]: w["released_on"] for w in wallets}
    thefts = {}
    for address, recipient in stolen_of.items():
        thefts[channel_of[address]] = thefts.get(channel_of[address], 0) + 1
        recipients.add(recipient)
    check("eth: 35 wallets stolen", len(stolen_of) == 35, str(len(stolen_of)))
    check("eth: thefts per channel", thefts == EXPECTED_THEFTS, str(thefts))
    check("eth: 26 distinct recipients", len(recipients) == 26, str(len(recipients)))


def verify_btc() -> None:
    watch = set(json.loads((FIXTURES / "btc_addresses.json").read_text()))
    txs = read_jsonl(FIXTURES / "btc_ledger.jsonl")
    check("btc: 72 watched addresses", len(watch) == 72, str(len(watch)))

    received = {a: 0 for a in watch}
    sent = {a: 0 for a in watch}
    active = set()
    for tx in txs:
        for addr, value in tx["inputs"]:
            if addr in watch:
                sent[addr] += value
                active.add(addr)
        for addr, value in tx["outputs"]:
            if addr in watch:
                received[addr] += value
                active.add(addr)

    total_received = sum(received.values())
    total_sent = sum(sent.values())
    balances = {a: received[a] - sent[a] for a in watch}
    nonzero = {a: b for a, b in balances.items() if b != 0}

    check("btc: 49 active addresses", len(active) == 49, str(len(active)))
    check("btc: received renders 38.40",
          f"{total_received / 1e8:.2f}" == "38.40", f"{total_received} sat")
    check("btc: sent renders 37.74",
          f"{total_sent / 1e8:.2f}" == "37.74", f"{total_sent} sat")
    check("btc: 16 addresses with balance", len(nonzero) == 16, str(len(nonzero)))
    check("btc: remaining balance is 0.659",
          f"{sum(nonzero.values()) / 1e8:.3f}" == "0.659",
          f"{sum(nonzero.values())} sat")
    check("btc: no negative balances", all(b >= 0 for b in balances.values()))


def main() -> int:
    verify_eth()
    verify_btc()
    print(f"{'OK' if not failures else 'FAILED'}: "
          f"{len(failures)} failing check(s)")
    return 0 if not failures else 1


if __name__ == "__main__":
    sys.exit(main())
