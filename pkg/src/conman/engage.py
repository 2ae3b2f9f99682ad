"""Off-platform bait engagement: drafting, response triage, payment parsing.

Drafts are generated, never sent; transcripts arrive from fixtures or the
simulator. Responses fall into exactly one of three buckets: a request for
the wallet's secret phrase, a fee demand (with at least one payment method),
or unclassified.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Iterable

from .addresses import is_valid_base58_address, is_valid_bech32_address, is_valid_eth_address
from .core import ChannelKind, ContactChannel, WalletKind
from .rng import SplitMix64, derive
from .stats import nearest_rank

KEY_PHRASE_REQUEST = "key_phrase_request"
FEE_PAYMENT = "fee_payment"
UNCLASSIFIED = "unclassified"

_SESSION_STATES = ("drafted", "sent", "responded", "categorized")
DEAD = "dead"


class ValidationError(ValueError):
    pass


@dataclass(frozen=True)
class PayPal:
    handle: str

    def to_dict(self):
        return {"method": "paypal", "handle": self.handle}


@dataclass(frozen=True)
class Crypto:
    address: str
    chain: str  # "BTC" | "ETH"

    def to_dict(self):
        return {"method": "crypto", "address": self.address, "chain": self.chain}


@dataclass(frozen=True)
class GiftCard:
    vendor: str  # "CardDelivery" | "Amazon" | "Other"

    def to_dict(self):
        return {"method": "gift_card", "vendor": self.vendor}


PaymentMethod = PayPal | Crypto | GiftCard


def payment_from_dict(d: dict) -> PaymentMethod:
    if d["method"] == "paypal":
        return PayPal(d["handle"])
    if d["method"] == "crypto":
        return Crypto(d["address"], d["chain"])
    if d["method"] == "gift_card":
        return GiftCard(d["vendor"])
    raise ValueError(f"unknown payment method {d['method']!r}")


@dataclass
class ScammerCategory:
    label: str
    methods: list[PaymentMethod] = field(default_factory=list)

    def __post_init__(self):
        if self.label == FEE_PAYMENT and not self.methods:
            raise ValueError("fee_payment category requires at least one method")


@dataclass
class PaymentRules:
    key_phrase_cues: list[str]
    paypal_me_pattern: str
    paypal_marker_pattern: str
    gift_card_vendors: list[tuple[str, str]]
    btc_base58_pattern: str
    btc_bech32_pattern: str
    eth_pattern: str
    price_pattern: str

    def __post_init__(self):
        self.paypal_me_re = re.compile(self.paypal_me_pattern, re.IGNORECASE)
        self.paypal_marker_re = re.compile(self.paypal_marker_pattern, re.IGNORECASE)
        self.btc_base58_re = re.compile(self.btc_base58_pattern)
        self.btc_bech32_re = re.compile(self.btc_bech32_pattern)
        self.eth_re = re.compile(self.eth_pattern)
        self.price_re = re.compile(self.price_pattern)

    @classmethod
    def _from_json(cls, d: dict) -> "PaymentRules":
        return cls(d["key_phrase_cues"], d["paypal_me_pattern"],
                   d["paypal_marker_pattern"],
                   [tuple(v) for v in d["gift_card_vendors"]],
                   d["btc_base58_pattern"], d["btc_bech32_pattern"],
                   d["eth_pattern"], d["price_pattern"])

    @classmethod
    def from_file(cls, path) -> "PaymentRules":
        with Path(path).open("r", encoding="utf-8") as fh:
            return cls._from_json(json.load(fh))

    @classmethod
    def default(cls) -> "PaymentRules":
        text = resources.files("conman.data").joinpath("payment_rules.json").read_text("utf-8")
        return cls._from_json(json.loads(text))


def extract_payment(text: str, rules: PaymentRules | None = None) -> list[PaymentMethod]:
    """Every checksum-valid payment method mentioned in the text, in order."""
    rules = rules or PaymentRules.default()
    methods: list[PaymentMethod] = []
    seen: set = set()

    def add(m: PaymentMethod):
        if m not in seen:
            seen.add(m)
            methods.append(m)

    for match in rules.paypal_me_re.finditer(text):
        add(PayPal(match.group(1).rstrip(".").lower()))
    for match in rules.paypal_marker_re.finditer(text):
        add(PayPal(match.group(1).lower()))
    for match in rules.btc_base58_re.finditer(text):
        if is_valid_base58_address(match.group(0)):
            add(Crypto(match.group(0), "BTC"))
    for match in rules.btc_bech32_re.finditer(text):
        if is_valid_bech32_address(match.group(0)):
            add(Crypto(match.group(0), "BTC"))
    for match in rules.eth_re.finditer(text):
        if is_valid_eth_address(match.group(0)):
            add(Crypto(match.group(0), "ETH"))
    lowered = text.lower()
    matched_specific = False
    for needle, vendor in rules.gift_card_vendors:
        if needle in lowered:
            if vendor == "Other" and matched_specific:
                continue
            add(GiftCard(vendor))
            if vendor != "Other":
                matched_specific = True
    return methods


def classify_response(text: str, urls: Iterable[str] = (),
                      rules: PaymentRules | None = None) -> ScammerCategory:
    """Exactly one category per response; phrase requests outrank fee demands."""
    rules = rules or PaymentRules.default()
    haystack = " ".join([text or ""] + list(urls)).lower()
    if any(cue in haystack for cue in rules.key_phrase_cues):
        return ScammerCategory(KEY_PHRASE_REQUEST)
    methods = extract_payment(text or "", rules)
    if methods:
        return ScammerCategory(FEE_PAYMENT, methods)
    return ScammerCategory(UNCLASSIFIED)


def extract_prices(text: str, rules: PaymentRules | None = None) -> list[float]:
    rules = rules or PaymentRules.default()
    out = []
    for match in rules.price_re.finditer(text):
        out.append(float(match.group(1).replace(",", "")))
    return out


@dataclass
class PriceQuote:
    amount_usd: float
    session_id: str

    def __post_init__(self):
        if self.amount_usd <= 0:
            raise ValueError("price quotes must be positive")


def price_stats(quotes: Iterable[PriceQuote]) -> dict:
    amounts = sorted(q.amount_usd for q in quotes)
    if not amounts:
        return {"count": 0, "min": None, "median": None, "max": None}
    return {"count": len(amounts), "min": amounts[0],
            "median": nearest_rank(amounts, 50), "max": amounts[-1]}


# ---------------------------------------------------------------------------
# Drafting
# ---------------------------------------------------------------------------

@dataclass
class EmailTemplates:
    subjects: list[str]
    bodies: list[str]

    @classmethod
    def default(cls) -> "EmailTemplates":
        text = resources.files("conman.data").joinpath("email_templates.json").read_text("utf-8")
        d = json.loads(text)
        return cls(d["subjects"], d["bodies"])


@dataclass
class EmailDraft:
    to: str
    subject: str
    body: str

    def as_eml(self) -> str:
        return f"To: {self.to}\nSubject: {self.subject}\n\n{self.body}\n"


ALL_WALLETS = tuple(WalletKind)


def craft_email(channel: ContactChannel, templates: EmailTemplates | None,
                seed: int) -> EmailDraft:
    """Wallet-keyed support request; the identifier salts the stream so two
    channels never receive the same body."""
    if channel.kind is not ChannelKind.EMAIL:
        raise ValidationError("craft_email requires an Email channel")
    templates = templates or EmailTemplates.default()
    rng = SplitMix64(derive(seed, "email", channel.identifier))
    wallet = channel.wallet_attribution or rng.choice(ALL_WALLETS)
    ticket = f"{rng.next_u64() & 0xFFFFFFFF:08x}"
    subject = rng.choice(templates.subjects).format(wallet=wallet.render())
    body = rng.choice(templates.bodies).format(wallet=wallet.render(), ticket=ticket)
    return EmailDraft(channel.identifier, subject, body)


_DM_SKELETON = ("Hi @{handle}! Thanks for replying to my post earlier. "
                "I still cannot get into my {wallet} wallet address {address} "
                "and the app keeps failing. I need this help asap please, "
                "thanks in advance!")


def craft_dm(handle: str, wallet: WalletKind, address_placeholder: str) -> str:
    if not handle:
        raise ValidationError("DM needs a recipient handle")
    return _DM_SKELETON.format(handle=handle.lstrip("@"), wallet=wallet.render(),
                               address=address_placeholder)


# ---------------------------------------------------------------------------
# Sessions (append-only event log)
# ---------------------------------------------------------------------------

class StateError(ValueError):
    pass


@dataclass
class EngagementSession:
    session_id: str
    channel_kind: ChannelKind
    identifier: str
    state: str = "drafted"
    transcript: list[tuple[str, str, int]] = field(default_factory=list)  # (direction, text, at)

    def advance(self, new_state: str) -> None:
        if new_state == DEAD:
            self.state = DEAD
            return
        if self.state == DEAD:
            raise StateError("session is dead")
        if new_state not in _SESSION_STATES:
            raise StateError(f"unknown state {new_state!r}")
        if _SESSION_STATES.index(new_state) < _SESSION_STATES.index(self.state):
            raise StateError(f"cannot move back from {self.state} to {new_state}")
        self.state = new_state

    def say(self, direction: str, text: str, at: int) -> None:
        if direction not in ("outbound", "inbound"):
            raise StateError("direction must be outbound or inbound")
        self.transcript.append((direction, text, at))


class SessionLog:
    """Append-only JSONL event log; replay rebuilds sessions after a crash."""

    def __init__(self, path):
        self.path = Path(path)
        self.path.parent.mkdir(parents=True, exist_ok=True)

    def append(self, event: dict) -> None:
        with self.path.open("a", encoding="utf-8", newline="\n") as fh:
            fh.write(json.dumps(event, separators=(",", ":")) + "\n")

    def created(self, session: EngagementSession, at: int) -> None:
        self.append({"event": "created", "session_id": session.session_id,
                     "kind": session.channel_kind.render(),
                     "identifier": session.identifier, "at": at})

    def state(self, session_id: str, state: str, at: int) -> None:
        self.append({"event": "state", "session_id": session_id,
                     "state": state, "at": at})

    def message(self, session_id: str, direction: str, text: str, at: int) -> None:
        self.append({"event": "message", "session_id": session_id,
                     "direction": direction, "text": text, "at": at})

    def replay(self) -> dict[str, EngagementSession]:
        sessions: dict[str, EngagementSession] = {}
        if not self.path.exists():
            return sessions
        with self.path.open("r", encoding="utf-8") as fh:
            for line in fh:
                line = line.strip()
                if not line:
                    continue
                ev = json.loads(line)
                sid = ev["session_id"]
                if ev["event"] == "created":
                    sessions[sid] = EngagementSession(
                        sid, ChannelKind.parse(ev["kind"]), ev["identifier"])
                elif ev["event"] == "state":
                    sessions[sid].advance(ev["state"])
                elif ev["event"] == "message":
                    sessions[sid].say(ev["direction"], ev["text"], ev["at"])
        return sessions
