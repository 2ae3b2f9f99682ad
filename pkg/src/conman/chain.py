"""Honey-wallet instrumentation and simplified blockchain trail analysis.

**The wallet scheme here is deliberately fake.** Addresses are a truncated
SHA-256 of the joined phrase words and the 2048-entry word list is generated
syllable soup; nothing in this repository can derive a real spendable key.

Amounts are integer satoshis (BTC) and wei (ETH) so conservation checks are
exact; reports render decimals.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from hashlib import sha256
from typing import Iterable, Sequence

from .core import CanonicalEnum
from .rng import SplitMix64, derive
from .unionfind import UnionFind

SATS_PER_BTC = 100_000_000
WEI_PER_ETH = 10 ** 18

COINBASE = "coinbase"  # synthetic source for ledger bootstrap txs

STOLEN_BALANCE_FRACTION = 0.10  # drained below 10% of funding counts as theft


class LedgerError(ValueError):
    pass


class ReleaseChannel(CanonicalEnum):
    EMAIL = "Email"
    FORMS = "Forms"
    INSTAGRAM = "Instagram"
    TELEGRAM = "Telegram"
    URLS = "URLs"


# ---------------------------------------------------------------------------
# Word list + honey wallets
# ---------------------------------------------------------------------------

def _make_wordlist() -> tuple[str, ...]:
    """2048 distinct pronounceable fake words (64 onsets x 32 codas)."""
    onsets = []
    for c in ("b", "d", "f", "g", "k", "l", "m", "n", "p", "r", "s", "t",
              "v", "z", "br", "tr"):
        for v in ("a", "e", "o", "u"):
            onsets.append(c + v)
    codas = []
    for c in ("l", "n", "r", "s", "t", "v", "x", "z"):
        for v in ("a", "i", "o", "u"):
            codas.append(c + v)
    words = tuple(o + c for o in onsets for c in codas)
    assert len(words) == 2048 and len(set(words)) == 2048
    return words


WORDLIST = _make_wordlist()
_WORDSET = frozenset(WORDLIST)


def derive_address(key_phrase: Sequence[str]) -> str:
    """Hash-based stand-in for key derivation: 0x + 40 hex of SHA-256."""
    digest = sha256(" ".join(key_phrase).encode("utf-8")).hexdigest()
    return "0x" + digest[:40]


@dataclass
class HoneyWallet:
    wallet_id: str
    key_phrase: list[str]
    address: str
    funded_usd: float = 1.26
    released_on: ReleaseChannel | None = None
    released_at: int | None = None

    def __post_init__(self):
        if len(self.key_phrase) != 12 or any(w not in _WORDSET for w in self.key_phrase):
            raise ValueError("key phrase must be 12 words from the fixed word list")
        if self.address != derive_address(self.key_phrase):
            raise ValueError("address does not match the phrase derivation")
        if self.funded_usd <= 0:
            raise ValueError("funding must be positive")

    def to_dict(self) -> dict:
        return {"wallet_id": self.wallet_id, "key_phrase": self.key_phrase,
                "address": self.address, "funded_usd": self.funded_usd,
                "released_on": self.released_on.render() if self.released_on else None,
                "released_at": self.released_at}

    @classmethod
    def from_dict(cls, d: dict) -> "HoneyWallet":
        released = d.get("released_on")
        return cls(d["wallet_id"], list(d["key_phrase"]), d["address"],
                   float(d.get("funded_usd", 1.26)),
                   ReleaseChannel.parse(released) if released else None,
                   d.get("released_at"))



def mint_honey_wallets(n: int, seed: int) -> list[HoneyWallet]:
    """n deterministic wallets with distinct derived addresses."""
    wallets = []
    seen_addresses = set()
    for i in range(n):
        rng = SplitMix64(derive(seed, "wallet", i))
        phrase = [WORDLIST[rng.randrange(len(WORDLIST))] for _ in range(12)]
        address = derive_address(phrase)
        if address in seen_addresses:
            raise LedgerError("address collision while minting honey wallets")
        seen_addresses.add(address)
        wallets.append(HoneyWallet(f"hw{i:04d}", phrase, address))
    return wallets


# ---------------------------------------------------------------------------
# Transactions
# ---------------------------------------------------------------------------

@dataclass
class BtcTx:
    txid: str
    inputs: list[tuple[str, int]]   # (address, satoshis)
    outputs: list[tuple[str, int]]
    at: int

    def __post_init__(self):
        if not self.inputs or not self.outputs:
            raise LedgerError(f"tx {self.txid} needs at least one input and output")
        if any(v < 0 for _, v in self.inputs + self.outputs):
            raise LedgerError(f"tx {self.txid} carries a negative value")
        if sum(v for _, v in self.inputs) < sum(v for _, v in self.outputs):
            raise LedgerError(f"tx {self.txid} outputs exceed inputs")

    @property
    def fee(self) -> int:
        return sum(v for _, v in self.inputs) - sum(v for _, v in self.outputs)

    def to_dict(self) -> dict:
        return {"txid": self.txid, "inputs": [list(i) for i in self.inputs],
                "outputs": [list(o) for o in self.outputs], "at": self.at}

    @classmethod
    def from_dict(cls, d: dict) -> "BtcTx":
        return cls(d["txid"], [(a, int(v)) for a, v in d["inputs"]],
                   [(a, int(v)) for a, v in d["outputs"]], int(d["at"]))


@dataclass
class EthTx:
    txid: str
    sender: str
    to: str
    value: int  # wei
    at: int

    def __post_init__(self):
        if self.value < 0:
            raise LedgerError(f"tx {self.txid} carries a negative value")

    @property
    def self_transfer(self) -> bool:
        return self.sender == self.to

    def to_dict(self) -> dict:
        return {"txid": self.txid, "from": self.sender, "to": self.to,
                "value": self.value, "at": self.at}

    @classmethod
    def from_dict(cls, d: dict) -> "EthTx":
        return cls(d["txid"], d["from"], d["to"], int(d["value"]), int(d["at"]))


@dataclass
class AddressSummary:
    address: str
    n_received: int = 0
    n_sent: int = 0
    total_received: int = 0
    total_sent: int = 0
    balance: int = 0
    first_activity: int | None = None
    last_activity: int | None = None

    def to_dict(self) -> dict:
        return {"address": self.address, "n_received": self.n_received,
                "n_sent": self.n_sent, "total_received": self.total_received,
                "total_sent": self.total_sent, "balance": self.balance,
                "first_activity": self.first_activity,
                "last_activity": self.last_activity}


def _tx_order(txs):
    return sorted(txs, key=lambda t: (t.at, t.txid))


def _walk_btc(txs: Sequence[BtcTx]) -> dict[str, AddressSummary]:
    """Full UTXO walk; every non-coinbase input must consume a matching
    unspent output, so unspent values can never go negative."""
    unspent: dict[str, list[int]] = {}
    summaries: dict[str, AddressSummary] = {}

    def summary(addr: str) -> AddressSummary:
        if addr not in summaries:
            summaries[addr] = AddressSummary(addr)
        return summaries[addr]

    for tx in _tx_order(txs):
        touched_in: set[str] = set()
        for addr, value in tx.inputs:
            if addr == COINBASE:
                continue
            pool = unspent.get(addr, [])
            if value not in pool:
                raise LedgerError(
                    f"tx {tx.txid} spends {value} sat from {addr} with no matching unspent output")
            pool.remove(value)
            s = summary(addr)
            s.total_sent += value
            touched_in.add(addr)
        for addr in touched_in:
            summary(addr).n_sent += 1
        touched_out: set[str] = set()
        for addr, value in tx.outputs:
            unspent.setdefault(addr, []).append(value)
            s = summary(addr)
            s.total_received += value
            touched_out.add(addr)
        for addr in touched_out:
            summary(addr).n_received += 1
        for addr in touched_in | touched_out:
            s = summary(addr)
            s.first_activity = tx.at if s.first_activity is None else min(s.first_activity, tx.at)
            s.last_activity = tx.at if s.last_activity is None else max(s.last_activity, tx.at)

    for addr, s in summaries.items():
        s.balance = sum(unspent.get(addr, []))
        assert s.balance == s.total_received - s.total_sent
    return summaries


def _walk_eth(txs: Sequence[EthTx]) -> dict[str, AddressSummary]:
    summaries: dict[str, AddressSummary] = {}

    def summary(addr: str) -> AddressSummary:
        if addr not in summaries:
            summaries[addr] = AddressSummary(addr)
        return summaries[addr]

    for tx in _tx_order(txs):
        if tx.sender != COINBASE:
            s = summary(tx.sender)
            s.n_sent += 1
            s.total_sent += tx.value
            s.first_activity = tx.at if s.first_activity is None else min(s.first_activity, tx.at)
            s.last_activity = tx.at if s.last_activity is None else max(s.last_activity, tx.at)
        r = summary(tx.to)
        r.n_received += 1
        r.total_received += tx.value
        r.first_activity = tx.at if r.first_activity is None else min(r.first_activity, tx.at)
        r.last_activity = tx.at if r.last_activity is None else max(r.last_activity, tx.at)

    for s in summaries.values():
        s.balance = s.total_received - s.total_sent
    return summaries


def summarize_addresses(addresses: Iterable[str],
                        txs: Sequence[BtcTx] | Sequence[EthTx]) -> list[AddressSummary]:
    """Per-address counts, totals, and balance over the full ledger."""
    if txs and isinstance(txs[0], EthTx):
        walked = _walk_eth(txs)
    else:
        walked = _walk_btc(txs)
    return [walked.get(addr, AddressSummary(addr)) for addr in addresses]


# ---------------------------------------------------------------------------
# Theft detection
# ---------------------------------------------------------------------------

@dataclass
class TheftEvent:
    wallet_id: str
    drain_txid: str
    recipients: list[str]
    at: int

    def to_dict(self) -> dict:
        return {"wallet_id": self.wallet_id, "drain_txid": self.drain_txid,
                "recipients": self.recipients, "at": self.at}

    @classmethod
    def from_dict(cls, d: dict) -> "TheftEvent":
        return cls(d["wallet_id"], d["drain_txid"], list(d["recipients"]), int(d["at"]))


@dataclass
class TheftTable:
    rows: list[dict] = field(default_factory=list)  # channel, sent, stolen
    distinct_recipients: int = 0


def detect_theft(wallets: Sequence[HoneyWallet],
                 txs: Sequence[EthTx]) -> tuple[list[TheftEvent], TheftTable]:
    """A wallet is stolen once an outbound tx pushes its balance below 10%
    of everything it received; the per-channel table groups by release channel."""
    for w in wallets:
        if w.released_on is None:
            raise ValueError(f"wallet {w.wallet_id} has no release channel")

    by_address = {w.address: w for w in wallets}
    received: dict[str, int] = {w.address: 0 for w in wallets}
    balance: dict[str, int] = {w.address: 0 for w in wallets}
    events: list[TheftEvent] = []
    stolen: set[str] = set()

    for tx in _tx_order(txs):
        if tx.to in balance:
            received[tx.to] += tx.value
            balance[tx.to] += tx.value
        if tx.sender in balance and not tx.self_transfer:
            balance[tx.sender] -= tx.value
            wallet = by_address[tx.sender]
            threshold = STOLEN_BALANCE_FRACTION * received[tx.sender]
            if wallet.wallet_id not in stolen and received[tx.sender] > 0 \
                    and balance[tx.sender] < threshold:
                stolen.add(wallet.wallet_id)
                events.append(TheftEvent(wallet.wallet_id, tx.txid, [tx.to], tx.at))

    rows = []
    recipients: set[str] = set()
    for ev in events:
        recipients.update(ev.recipients)
    stolen_by_channel: dict[ReleaseChannel, int] = {c: 0 for c in ReleaseChannel}
    sent_by_channel: dict[ReleaseChannel, int] = {c: 0 for c in ReleaseChannel}
    by_id = {w.wallet_id: w for w in wallets}
    for w in wallets:
        sent_by_channel[w.released_on] += 1
    for ev in events:
        stolen_by_channel[by_id[ev.wallet_id].released_on] += 1
    for channel in ReleaseChannel:
        rows.append({"channel": channel.render(),
                     "sent": sent_by_channel[channel],
                     "stolen": stolen_by_channel[channel]})
    rows.append({"channel": "All", "sent": len(wallets), "stolen": len(events)})
    return events, TheftTable(rows, len(recipients))


# ---------------------------------------------------------------------------
# Co-spend clustering and activity series
# ---------------------------------------------------------------------------

def cospend_clusters(txs: Sequence[BtcTx]) -> dict[str, list[str]]:
    """All input addresses of one tx belong to one entity; output-only
    addresses stay singletons. Keys are the lexicographically smallest member."""
    uf = UnionFind()
    for tx in txs:
        spenders = [a for a, _ in tx.inputs if a != COINBASE]
        for addr in spenders:
            uf.add(addr)
        for a, b in zip(spenders, spenders[1:]):
            uf.union(a, b)
        for addr, _ in tx.outputs:
            uf.add(addr)
    return uf.groups()


def activity_series(addresses: Iterable[str],
                    txs: Sequence[BtcTx] | Sequence[EthTx],
                    bucket: int) -> list[tuple[int, int, int]]:
    """(bucket_start, received, sent) per bucket spanning first..last activity."""
    if bucket <= 0:
        raise ValueError("bucket duration must be positive")
    watch = set(addresses)
    received: dict[int, int] = {}
    sent: dict[int, int] = {}
    lo = hi = None
    for tx in _tx_order(txs):
        start = (tx.at // bucket) * bucket
        got = spent = 0
        if isinstance(tx, EthTx):
            if tx.to in watch:
                got += tx.value
            if tx.sender in watch and tx.sender != COINBASE:
                spent += tx.value
        else:
            got = sum(v for a, v in tx.outputs if a in watch)
            spent = sum(v for a, v in tx.inputs if a in watch and a != COINBASE)
        if got == 0 and spent == 0:
            continue
        received[start] = received.get(start, 0) + got
        sent[start] = sent.get(start, 0) + spent
        lo = start if lo is None else min(lo, start)
        hi = start if hi is None else max(hi, start)
    if lo is None:
        return []
    return [(t, received.get(t, 0), sent.get(t, 0)) for t in range(lo, hi + bucket, bucket)]
