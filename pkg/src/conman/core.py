"""Shared domain types, identifier normalization, and the JSONL formats.

Everything downstream (simulator, extractor, clustering, reports) talks in
these records. Timestamps are UTC seconds since the epoch in storage and
only rendered as ISO-8601 inside reports.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from datetime import datetime, timezone
from enum import Enum
from pathlib import Path
from typing import Callable, Iterable
from urllib.parse import urlsplit, urlunsplit


class CanonicalEnum(Enum):
    """Enum whose values are canonical strings; parsing is case-insensitive."""

    def render(self) -> str:
        return self.value

    @classmethod
    def parse(cls, text: str):
        key = "".join(text.lower().split()).replace("-", "").replace("_", "")
        for member in cls:
            if "".join(member.value.lower().split()) == key:
                return member
        aliases = getattr(cls, "_aliases", None)
        if aliases is not None:
            for alias, member in aliases().items():
                if alias == key:
                    return member
        raise ValueError(f"unknown {cls.__name__}: {text!r}")


class WalletKind(CanonicalEnum):
    BADGER = "Badger"
    BINANCE = "Binance"
    BITPAY = "BitPay"
    COINBASE = "Coinbase"
    EXODUS = "Exodus"
    FREE = "Free"
    LEDGER = "Ledger"
    METAMASK = "MetaMask"
    TREZOR = "Trezor"
    TRUSTWALLET = "TrustWallet"

    @classmethod
    def _aliases(cls):
        return {"freewallet": cls.FREE}


class InteractionKind(CanonicalEnum):
    REPLY = "Reply"
    RETWEET = "Retweet"
    QUOTED_TWEET = "QuotedTweet"
    LIKE = "Like"
    FOLLOW = "Follow"


class Source(CanonicalEnum):
    IPHONE = "iPhone"
    ANDROID = "Android"
    WEB_APP = "WebApp"
    DECK = "Deck"
    IPAD = "iPad"


class StatusKind(CanonicalEnum):
    ACTIVE = "Active"
    SUSPENDED = "Suspended"
    NOT_FOUND = "NotFound"


class ChannelKind(CanonicalEnum):
    EMAIL = "Email"
    FORM = "Form"
    INSTAGRAM = "Instagram"
    TELEGRAM = "Telegram"
    TWITTER_DM = "TwitterDM"
    WHATSAPP = "WhatsApp"


TEXT_KINDS = (InteractionKind.REPLY, InteractionKind.QUOTED_TWEET)
GMAIL_DOMAINS = ("gmail.com", "googlemail.com")


def iso(ts: int) -> str:
    """Render an epoch-seconds timestamp as ISO-8601 UTC."""
    return datetime.fromtimestamp(ts, tz=timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")


def parse_iso(text: str) -> int:
    return int(datetime.fromisoformat(text.replace("Z", "+00:00")).timestamp())


# ---------------------------------------------------------------------------
# Identifier normalization
# ---------------------------------------------------------------------------

class NormalizationError(ValueError):
    def __init__(self, kind: ChannelKind, raw: str, reason: str):
        super().__init__(f"malformed {kind.render()} identifier {raw!r}: {reason}")
        self.kind = kind
        self.raw = raw
        self.reason = reason


_HANDLE_KINDS = (ChannelKind.INSTAGRAM, ChannelKind.TELEGRAM,
                 ChannelKind.TWITTER_DM, ChannelKind.WHATSAPP)


def normalize_identifier(raw: str, kind: ChannelKind, *,
                         gmail_canonicalize: bool = True) -> str:
    """Canonical form of a contact identifier so clustering keys are stable.

    Lowercases and strips; gmail-hosted addresses additionally drop local-part
    dots and ``+suffix`` aliases (disable via ``gmail_canonicalize``); form
    URLs lose query/fragment and trailing slash; handles lose a leading ``@``.
    """
    s = raw.strip().lower()
    if not s:
        raise NormalizationError(kind, raw, "empty")

    if kind is ChannelKind.EMAIL:
        if s.count("@") != 1:
            raise NormalizationError(kind, raw, "expected exactly one @")
        local, domain = s.split("@")
        if not local or "." not in domain:
            raise NormalizationError(kind, raw, "missing local part or domain")
        if gmail_canonicalize and domain in GMAIL_DOMAINS:
            local = local.split("+", 1)[0].replace(".", "")
            if not local:
                raise NormalizationError(kind, raw, "empty local part after canonicalization")
        return f"{local}@{domain}"

    if kind is ChannelKind.FORM:
        parts = urlsplit(s)
        if parts.scheme not in ("http", "https") or not parts.netloc:
            raise NormalizationError(kind, raw, "not an absolute http(s) URL")
        path = parts.path.rstrip("/")
        return urlunsplit((parts.scheme, parts.netloc, path, "", ""))

    if kind in _HANDLE_KINDS:
        handle = s.lstrip("@")
        if not handle or any(c.isspace() for c in handle) or "/" in handle:
            raise NormalizationError(kind, raw, "not a bare handle")
        return handle

    raise NormalizationError(kind, raw, "unsupported kind")


# ---------------------------------------------------------------------------
# Record types
# ---------------------------------------------------------------------------

@dataclass
class HoneyProfile:
    profile_id: str
    handle: str
    persona_description: str
    created_at: int

    def __post_init__(self):
        if not self.handle:
            raise ValueError("profile handle must be non-empty")

    def to_dict(self) -> dict:
        return {"profile_id": self.profile_id, "handle": self.handle,
                "persona_description": self.persona_description,
                "created_at": self.created_at}

    @classmethod
    def from_dict(cls, d: dict) -> "HoneyProfile":
        return cls(d["profile_id"], d["handle"], d["persona_description"],
                   int(d["created_at"]))


@dataclass
class HoneyTweet:
    tweet_id: str
    profile_id: str
    wallet: WalletKind
    sentences: list[str]
    hashtags: list[str]
    full_text: str
    posted_at: int

    def __post_init__(self):
        if len(self.sentences) != 3:
            raise ValueError("a honey tweet has exactly three sentences")
        expected = " ".join(self.sentences + self.hashtags)
        if self.full_text != expected:
            raise ValueError("full_text must join sentences and hashtags with single spaces")
        if len(self.full_text) > 280:
            raise ValueError("full_text exceeds 280 code points")

    def to_dict(self) -> dict:
        return {"tweet_id": self.tweet_id, "profile_id": self.profile_id,
                "wallet": self.wallet.render(), "sentences": self.sentences,
                "hashtags": self.hashtags, "full_text": self.full_text,
                "posted_at": self.posted_at}

    @classmethod
    def from_dict(cls, d: dict) -> "HoneyTweet":
        return cls(d["tweet_id"], d["profile_id"], WalletKind.parse(d["wallet"]),
                   list(d["sentences"]), list(d["hashtags"]), d["full_text"],
                   int(d["posted_at"]))


@dataclass
class Interaction:
    interaction_id: str
    kind: InteractionKind
    actor: str
    target_tweet: str | None
    target_profile: str | None
    text: str | None
    urls: list[str]
    source: Source
    lang: str
    at: int

    def __post_init__(self):
        if self.kind in TEXT_KINDS:
            if self.text is None:
                raise ValueError(f"{self.kind.render()} requires text")
            if self.target_tweet is None:
                raise ValueError(f"{self.kind.render()} requires a target tweet")
        elif self.kind is InteractionKind.FOLLOW:
            if self.target_profile is None or self.target_tweet is not None:
                raise ValueError("Follow targets a profile, not a tweet")
            if self.text is not None:
                raise ValueError("Follow carries no text")
        else:  # Like / Retweet
            if self.text is not None:
                raise ValueError(f"{self.kind.render()} carries no text")
            if self.target_tweet is None:
                raise ValueError(f"{self.kind.render()} requires a target tweet")

    def to_dict(self) -> dict:
        return {"interaction_id": self.interaction_id, "kind": self.kind.render(),
                "actor": self.actor, "target_tweet": self.target_tweet,
                "target_profile": self.target_profile, "text": self.text,
                "urls": self.urls, "source": self.source.render(),
                "lang": self.lang, "at": self.at}

    @classmethod
    def from_dict(cls, d: dict) -> "Interaction":
        return cls(d["interaction_id"], InteractionKind.parse(d["kind"]), d["actor"],
                   d.get("target_tweet"), d.get("target_profile"), d.get("text"),
                   list(d.get("urls", [])), Source.parse(d["source"]),
                   d["lang"], int(d["at"]))


@dataclass(frozen=True)
class AccountStatus:
    status: StatusKind
    observed_at: int

    def to_dict(self) -> dict:
        return {"status": self.status.render(), "observed_at": self.observed_at}

    @classmethod
    def from_dict(cls, d: dict) -> "AccountStatus":
        return cls(StatusKind.parse(d["status"]), int(d["observed_at"]))


@dataclass
class ScamAccount:
    account_id: str
    handle: str
    created_at: int
    name: str = ""
    location: str = ""
    description: str = ""
    followers_count: int = 0
    following_count: int = 0
    verified: bool = False
    profile_image_ref: str | None = None
    status_history: list[AccountStatus] = field(default_factory=list)

    def __post_init__(self):
        if self.followers_count < 0 or self.following_count < 0:
            raise ValueError("follower/following counts must be non-negative")
        self._check_history()

    def _check_history(self):
        last_at = None
        terminal_seen = False
        for st in self.status_history:
            if last_at is not None and st.observed_at < last_at:
                raise ValueError("status history must be time-ordered")
            if terminal_seen and st.status is StatusKind.ACTIVE:
                raise ValueError("account cannot return to Active after a terminal status")
            last_at = st.observed_at
            terminal_seen = terminal_seen or st.status is not StatusKind.ACTIVE
        return True

    def terminal_status(self) -> AccountStatus | None:
        for st in self.status_history:
            if st.status is not StatusKind.ACTIVE:
                return st
        return None

    def to_dict(self) -> dict:
        return {"account_id": self.account_id, "handle": self.handle,
                "created_at": self.created_at, "name": self.name,
                "location": self.location, "description": self.description,
                "followers_count": self.followers_count,
                "following_count": self.following_count,
                "verified": self.verified,
                "profile_image_ref": self.profile_image_ref,
                "status_history": [s.to_dict() for s in self.status_history]}

    @classmethod
    def from_dict(cls, d: dict) -> "ScamAccount":
        return cls(d["account_id"], d["handle"], int(d["created_at"]),
                   d.get("name", ""), d.get("location", ""), d.get("description", ""),
                   int(d.get("followers_count", 0)), int(d.get("following_count", 0)),
                   bool(d.get("verified", False)), d.get("profile_image_ref"),
                   [AccountStatus.from_dict(s) for s in d.get("status_history", [])])


@dataclass
class ContactChannel:
    kind: ChannelKind
    identifier: str
    raw: str
    wallet_attribution: WalletKind | None
    first_seen: int
    last_seen: int
    observed_in: set[str] = field(default_factory=set)

    def __post_init__(self):
        if self.first_seen > self.last_seen:
            raise ValueError("first_seen must not exceed last_seen")
        if not self.observed_in:
            raise ValueError("a channel must be observed in at least one interaction")

    def to_dict(self) -> dict:
        return {"kind": self.kind.render(), "identifier": self.identifier,
                "raw": self.raw,
                "wallet_attribution": self.wallet_attribution.render()
                if self.wallet_attribution else None,
                "first_seen": self.first_seen, "last_seen": self.last_seen,
                "observed_in": sorted(self.observed_in)}

    @classmethod
    def from_dict(cls, d: dict) -> "ContactChannel":
        wallet = d.get("wallet_attribution")
        return cls(ChannelKind.parse(d["kind"]), d["identifier"], d["raw"],
                   WalletKind.parse(wallet) if wallet else None,
                   int(d["first_seen"]), int(d["last_seen"]),
                   set(d.get("observed_in", [])))


# ---------------------------------------------------------------------------
# JSONL I/O
# ---------------------------------------------------------------------------

class JsonlError(ValueError):
    def __init__(self, path, line_no: int, reason: str):
        super().__init__(f"{path}:{line_no}: {reason}")
        self.path = path
        self.line_no = line_no


def write_jsonl(path, records: Iterable, to_dict: Callable = None) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8", newline="\n") as fh:
        for rec in records:
            d = to_dict(rec) if to_dict else (rec.to_dict() if hasattr(rec, "to_dict") else rec)
            fh.write(json.dumps(d, separators=(",", ":")) + "\n")


def read_jsonl(path, from_dict: Callable = None) -> list:
    out = []
    with Path(path).open("r", encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                d = json.loads(line)
            except json.JSONDecodeError as exc:
                raise JsonlError(path, line_no, f"invalid JSON ({exc.msg})") from exc
            try:
                out.append(from_dict(d) if from_dict else d)
            except (KeyError, ValueError, TypeError) as exc:
                raise JsonlError(path, line_no, f"invalid record ({exc})") from exc
    return out
