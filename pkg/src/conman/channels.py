"""Pull contact channels out of reply/quote text and embedded URLs.

Emails come from a regex over the text; platform channels come from host
matching on URLs plus a few text patterns for handle-style mentions
("DM us on instagram @fix_desk"). A bare "DM me" with no handle resolves
to the posting account's own handle — that rule is a heuristic and lives
in the editable rules file like everything else here.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Iterable, Mapping
from urllib.parse import parse_qs, urlsplit

from .core import (ChannelKind, ContactChannel, Interaction, NormalizationError,
                   TEXT_KINDS, WalletKind, normalize_identifier)


@dataclass
class ExtractionRuleSet:
    email_pattern: str
    url_pattern: str
    host_map: dict[str, ChannelKind]
    path_requirements: dict[str, list[str]]
    handle_patterns: dict[ChannelKind, str]
    dm_phrases: list[str]
    wallet_keywords: dict[str, WalletKind]

    def __post_init__(self):
        missing = set(WalletKind) - set(self.wallet_keywords.values())
        if missing:
            raise ValueError(f"wallet_keywords must cover every wallet, missing {missing}")
        if any(k != k.lower() for k in self.host_map):
            raise ValueError("host_map keys must be lowercase")
        self.email_re = re.compile(self.email_pattern)
        self.url_re = re.compile(self.url_pattern)
        self.handle_res = {kind: re.compile(pat, re.IGNORECASE)
                           for kind, pat in self.handle_patterns.items()}

    @classmethod
    def _from_json(cls, d: dict) -> "ExtractionRuleSet":
        return cls(
            email_pattern=d["email_pattern"],
            url_pattern=d.get("url_pattern", r"https?://\S+"),
            host_map={h: ChannelKind.parse(k) for h, k in d["host_map"].items()},
            path_requirements=d.get("path_requirements", {}),
            handle_patterns={ChannelKind.parse(k): p
                             for k, p in d.get("handle_patterns", {}).items()},
            dm_phrases=[p.lower() for p in d.get("dm_phrases", [])],
            wallet_keywords={k.lower(): WalletKind.parse(v)
                             for k, v in d["wallet_keywords"].items()},
        )

    @classmethod
    def from_file(cls, path) -> "ExtractionRuleSet":
        with Path(path).open("r", encoding="utf-8") as fh:
            return cls._from_json(json.load(fh))

    @classmethod
    def default(cls) -> "ExtractionRuleSet":
        text = resources.files("conman.data").joinpath("rules.json").read_text("utf-8")
        return cls._from_json(json.loads(text))


@dataclass
class ExtractionResult:
    channels: list[ContactChannel] = field(default_factory=list)
    unmatched_urls: list[str] = field(default_factory=list)


def _two_ld(host: str) -> str:
    labels = host.split(".")
    return ".".join(labels[-2:]) if len(labels) >= 2 else host


def _strip_url(token: str) -> str:
    return token.rstrip(".,;:!?)'\"")


def classify_url(url: str, rules: ExtractionRuleSet) -> tuple[ChannelKind, str] | None:
    """Map a URL onto (channel kind, raw identifier); None when no rule matches."""
    parts = urlsplit(url.strip())
    host = parts.netloc.lower().split(":")[0].removeprefix("www.")
    if not host:
        return None
    kind = None
    for suffix, mapped in rules.host_map.items():
        if host == suffix or host.endswith("." + suffix):
            required = rules.path_requirements.get(suffix)
            if required and not any(parts.path.lower().startswith(p) for p in required):
                continue
            kind = mapped
            break
    if kind is None:
        return None

    if kind is ChannelKind.FORM:
        return kind, url
    segments = [s for s in parts.path.split("/") if s]
    if kind is ChannelKind.WHATSAPP:
        if host == "api.whatsapp.com":
            phone = parse_qs(parts.query).get("phone", [""])[0]
            return (kind, phone) if phone else None
        return (kind, segments[0]) if segments else None
    if kind is ChannelKind.TWITTER_DM:
        recipient = parse_qs(parts.query).get("recipient_id", [""])[0]
        if recipient:
            return kind, recipient
        return (kind, segments[1]) if len(segments) > 1 else None
    # Instagram / Telegram profile URLs: first path segment is the handle
    return (kind, segments[0]) if segments else None


def extract_raw(text: str | None, urls: Iterable[str], rules: ExtractionRuleSet,
                actor_handle: str | None = None):
    """All (kind, normalized identifier, raw) hits plus unmatched URLs."""
    hits: list[tuple[ChannelKind, str, str]] = []
    seen: set[tuple[ChannelKind, str]] = set()
    unmatched: set[str] = set()

    def add(kind: ChannelKind, candidate: str, raw_seen: str | None = None):
        try:
            ident = normalize_identifier(candidate, kind)
        except NormalizationError:
            return False
        if (kind, ident) not in seen:
            seen.add((kind, ident))
            hits.append((kind, ident, raw_seen or candidate))
        return True

    candidates = [u for u in urls if u]
    if text:
        for match in rules.email_re.finditer(text):
            add(ChannelKind.EMAIL, match.group(0))
        candidates.extend(_strip_url(m.group(0)) for m in rules.url_re.finditer(text))

    for url in candidates:
        mapped = classify_url(url, rules)
        if mapped is None or not add(mapped[0], mapped[1], url):
            unmatched.add(url)

    if text:
        for kind, pattern in rules.handle_res.items():
            for match in pattern.finditer(text):
                add(kind, match.group(1))
        lowered = text.lower()
        has_dm_phrase = any(p in lowered for p in rules.dm_phrases)
        # bare "DM me" with no other extractable contact resolves to the actor
        if has_dm_phrase and not hits and actor_handle:
            add(ChannelKind.TWITTER_DM, actor_handle)

    return hits, sorted(unmatched)


def extract_channels(text: str | None, urls: Iterable[str], rules: ExtractionRuleSet, *,
                     actor_handle: str | None = None, interaction_id: str = "",
                     at: int = 0, context_wallet: WalletKind | None = None) -> ExtractionResult:
    """Single-interaction extraction; total, never raises on weird input."""
    hits, unmatched = extract_raw(text, urls, rules, actor_handle)
    channels = [ContactChannel(kind=kind, identifier=ident, raw=raw,
                               wallet_attribution=attribute_wallet(ident, context_wallet, rules),
                               first_seen=at, last_seen=at,
                               observed_in={interaction_id} if interaction_id else {"-"})
                for kind, ident, raw in hits]
    channels.sort(key=lambda c: (c.kind.render(), c.identifier))
    return ExtractionResult(channels, unmatched)


def attribute_wallet(identifier: str, context_wallet: WalletKind | None,
                     rules: ExtractionRuleSet) -> WalletKind | None:
    """Longest wallet keyword inside the identifier wins; else the tweet's wallet."""
    best: tuple[int, str] | None = None
    lowered = identifier.lower()
    for keyword in rules.wallet_keywords:
        if keyword in lowered:
            key = (-len(keyword), keyword)
            if best is None or key < best:
                best = key
    if best is not None:
        return rules.wallet_keywords[best[1]]
    return context_wallet


# ---------------------------------------------------------------------------
# Corpus-level extraction
# ---------------------------------------------------------------------------

@dataclass
class ChannelUse:
    """One account mentioning one identifier in one interaction."""
    kind: ChannelKind
    identifier: str
    raw: str
    account_id: str
    interaction_id: str
    interaction_kind: str
    target_tweet: str | None
    at: int
    text: str

    def to_dict(self) -> dict:
        return {"kind": self.kind.render(), "identifier": self.identifier,
                "raw": self.raw, "account_id": self.account_id,
                "interaction_id": self.interaction_id,
                "interaction_kind": self.interaction_kind,
                "target_tweet": self.target_tweet, "at": self.at, "text": self.text}

    @classmethod
    def from_dict(cls, d: dict) -> "ChannelUse":
        return cls(ChannelKind.parse(d["kind"]), d["identifier"], d["raw"],
                   d["account_id"], d["interaction_id"], d["interaction_kind"],
                   d.get("target_tweet"), int(d["at"]), d.get("text", ""))


def extract_uses(interactions: Iterable[Interaction], rules: ExtractionRuleSet,
                 handles: Mapping[str, str] | None = None) -> list[ChannelUse]:
    """Run extraction over every textual interaction in a corpus."""
    uses: list[ChannelUse] = []
    handles = handles or {}
    for itx in interactions:
        if itx.kind not in TEXT_KINDS:
            continue
        hits, _ = extract_raw(itx.text, itx.urls, rules, handles.get(itx.actor))
        for kind, ident, raw in hits:
            uses.append(ChannelUse(kind, ident, raw, itx.actor, itx.interaction_id,
                                   itx.kind.render(), itx.target_tweet, itx.at,
                                   itx.text or ""))
    uses.sort(key=lambda u: (u.at, u.interaction_id, u.kind.render(), u.identifier))
    return uses


def merge_channels(uses: Iterable[ChannelUse], rules: ExtractionRuleSet,
                   tweet_wallets: Mapping[str, WalletKind] | None = None) -> list[ContactChannel]:
    """Deduplicate uses into one ContactChannel per (kind, identifier)."""
    tweet_wallets = tweet_wallets or {}
    merged: dict[tuple[str, str], ContactChannel] = {}
    for use in sorted(uses, key=lambda u: (u.at, u.interaction_id)):
        key = (use.kind.render(), use.identifier)
        context = tweet_wallets.get(use.target_tweet) if use.target_tweet else None
        if key not in merged:
            merged[key] = ContactChannel(
                kind=use.kind, identifier=use.identifier, raw=use.raw,
                wallet_attribution=attribute_wallet(use.identifier, context, rules),
                first_seen=use.at, last_seen=use.at, observed_in={use.interaction_id})
        else:
            ch = merged[key]
            ch.first_seen = min(ch.first_seen, use.at)
            ch.last_seen = max(ch.last_seen, use.at)
            ch.observed_in.add(use.interaction_id)
            if ch.wallet_attribution is None:
                ch.wallet_attribution = attribute_wallet(use.identifier, context, rules)
    return [merged[k] for k in sorted(merged)]


def channel_distribution(channels: Iterable[ContactChannel],
                         honey_interaction_ids: set[str] | None = None) -> list[dict]:
    """Distinct identifiers per kind, split into honey-observed vs overall."""
    honey: dict[ChannelKind, set[str]] = {k: set() for k in ChannelKind}
    total: dict[ChannelKind, set[str]] = {k: set() for k in ChannelKind}
    for ch in channels:
        total[ch.kind].add(ch.identifier)
        if honey_interaction_ids is None or ch.observed_in & honey_interaction_ids:
            honey[ch.kind].add(ch.identifier)
    rows = [{"channel": kind.render(), "honey_profiles": len(honey[kind]),
             "total": len(total[kind])} for kind in ChannelKind]
    rows.append({"channel": "All",
                 "honey_profiles": sum(len(honey[k]) for k in ChannelKind),
                 "total": sum(len(total[k]) for k in ChannelKind)})
    return rows
