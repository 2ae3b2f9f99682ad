"""Bait-post generation: three-sentence drafts, dedup, and posting schedule.

A draft is greeting + problem + urgency drawn from a template bank, plus one
hashtag pattern, all keyed to a wallet provider. Validation rejects
duplicates against a history set and anything over the 280-code-point cap.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from .core import HoneyProfile, WalletKind
from .rng import SplitMix64, derive

TWEET_LIMIT = 280
ALL_WALLETS = tuple(WalletKind)


class ConfigError(ValueError):
    pass


@dataclass
class LureTemplateBank:
    greetings: list[str]
    problem_patterns: list[str]
    urgency_patterns: list[str]
    hashtag_patterns: list[str]

    def __post_init__(self):
        for name in ("greetings", "problem_patterns", "urgency_patterns", "hashtag_patterns"):
            if not getattr(self, name):
                raise ConfigError(f"template bank field {name} must be non-empty")
        for pattern in self.problem_patterns:
            if "{wallet}" not in pattern:
                raise ConfigError(f"problem pattern missing {{wallet}}: {pattern!r}")
            lowered = pattern.lower()
            if "help" not in lowered and "support" not in lowered:
                raise ConfigError(f"problem pattern missing help/support keyword: {pattern!r}")
        for pattern in self.hashtag_patterns:
            if "{wallet}" not in pattern:
                raise ConfigError(f"hashtag pattern missing {{wallet}}: {pattern!r}")

    @classmethod
    def from_file(cls, path) -> "LureTemplateBank":
        with Path(path).open("r", encoding="utf-8") as fh:
            d = json.load(fh)
        return cls(d["greetings"], d["problem_patterns"],
                   d["urgency_patterns"], d["hashtag_patterns"])

    @classmethod
    def default(cls) -> "LureTemplateBank":
        text = resources.files("conman.data").joinpath("bank.json").read_text("utf-8")
        d = json.loads(text)
        return cls(d["greetings"], d["problem_patterns"],
                   d["urgency_patterns"], d["hashtag_patterns"])


@dataclass
class LureDraft:
    wallet: WalletKind
    sentences: list[str]
    hashtags: list[str]

    @property
    def full_text(self) -> str:
        return " ".join(self.sentences + self.hashtags)

    def to_dict(self) -> dict:
        return {"wallet": self.wallet.render(), "sentences": self.sentences,
                "hashtags": self.hashtags, "full_text": self.full_text}

    @classmethod
    def from_dict(cls, d: dict) -> "LureDraft":
        return cls(WalletKind.parse(d["wallet"]), list(d["sentences"]), list(d["hashtags"]))


@dataclass
class LureVerdict:
    accepted: bool
    reason: str | None = None  # "duplicate" | "too_long"

    DUPLICATE = "duplicate"
    TOO_LONG = "too_long"


def generate_lure(bank: LureTemplateBank, wallet: WalletKind | None,
                  seed: int) -> LureDraft:
    """Deterministic draft for (bank, wallet, seed); wallet drawn uniformly when absent."""
    rng = SplitMix64(derive(seed, "lure"))
    if wallet is None:
        wallet = rng.choice(ALL_WALLETS)
    name = wallet.render()
    greeting = rng.choice(bank.greetings)
    problem = rng.choice(bank.problem_patterns).format(wallet=name)
    urgency = rng.choice(bank.urgency_patterns)
    hashtags = rng.choice(bank.hashtag_patterns).format(wallet=name).split(" ")
    return LureDraft(wallet, [greeting, problem, urgency], hashtags)


def validate_lure(draft: LureDraft, history: set[str]) -> LureVerdict:
    text = draft.full_text
    if text in history:
        return LureVerdict(False, LureVerdict.DUPLICATE)
    if len(text) > TWEET_LIMIT:
        return LureVerdict(False, LureVerdict.TOO_LONG)
    return LureVerdict(True)


@dataclass
class PlanEntry:
    profile_id: str
    draft: LureDraft
    scheduled_at: int

    def to_dict(self) -> dict:
        d = self.draft.to_dict()
        d["profile_id"] = self.profile_id
        d["scheduled_at"] = self.scheduled_at
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "PlanEntry":
        return cls(d["profile_id"], LureDraft.from_dict(d), int(d["scheduled_at"]))


@dataclass
class PostingPlan:
    entries: list[PlanEntry] = field(default_factory=list)
    interval: int = 900  # seconds

    def __post_init__(self):
        by_profile: dict[str, int] = {}
        for entry in self.entries:
            prev = by_profile.get(entry.profile_id)
            if prev is not None and entry.scheduled_at - prev != self.interval:
                raise ConfigError("per-profile schedule spacing must equal the interval")
            by_profile[entry.profile_id] = entry.scheduled_at
        times = [e.scheduled_at for e in self.entries]
        if times != sorted(times):
            raise ConfigError("plan entries must be sorted by time")


def schedule_posts(profiles: list[HoneyProfile], count_per_profile: int,
                   start: int, interval: int, *,
                   bank: LureTemplateBank | None = None,
                   seed: int = 0) -> PostingPlan:
    """Build a deduplicated posting plan.

    Profiles are staggered by interval/len(profiles) so the stream is evenly
    paced while each profile still posts exactly every ``interval`` seconds.
    Drafts that collide with already-planned text are regenerated with the
    next sub-seed, so accepted drafts are always unique.
    """
    if interval <= 0:
        raise ConfigError("posting interval must be positive")
    if count_per_profile < 0:
        raise ConfigError("count_per_profile must be non-negative")
    bank = bank or LureTemplateBank.default()

    history: set[str] = set()
    entries: list[PlanEntry] = []
    draw = 0
    for slot in range(count_per_profile):
        for idx, profile in enumerate(profiles):
            offset = (idx * interval) // max(1, len(profiles))
            when = start + slot * interval + offset
            while True:
                draft = generate_lure(bank, None, derive(seed, "plan", draw))
                draw += 1
                verdict = validate_lure(draft, history)
                if verdict.accepted:
                    break
                if verdict.reason == LureVerdict.TOO_LONG:
                    raise ConfigError("template bank produced an over-length draft")
            history.add(draft.full_text)
            entries.append(PlanEntry(profile.profile_id, draft, when))
    entries.sort(key=lambda e: (e.scheduled_at, e.profile_id))
    return PostingPlan(entries, interval)
