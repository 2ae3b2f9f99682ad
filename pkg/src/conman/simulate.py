"""Deterministic simulated social platform with scripted scammer agents.

Everything downstream gets exercised against this harness: scammers engage
bait posts according to per-mode participation weights, campaign members
embed their planted contact identifiers with pivot phrasings, accounts get
suspended or deleted by daily hazards, and ground truth records every
planted identifier so extraction and clustering can be checked exactly.

All randomness flows from one seed through per-account streams, so adding
or removing accounts never perturbs the others.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

from .addresses import random_base58_address, random_bech32_address, random_eth_address
from .core import (AccountStatus, ChannelKind, HoneyProfile, HoneyTweet,
                   Interaction, InteractionKind, ScamAccount, Source,
                   StatusKind, WalletKind)
from .embed import EmbeddingRecord
from .lure import ConfigError, PostingPlan
from .rng import SplitMix64, derive

MINUTE = 60
DAY = 86400

MODE_WEIGHT_DEFAULTS = {
    InteractionKind.REPLY: 0.8692,
    InteractionKind.LIKE: 0.4661,
    InteractionKind.QUOTED_TWEET: 0.2660,
    InteractionKind.RETWEET: 0.0494,
    InteractionKind.FOLLOW: 0.0721,
}

SOURCE_MIX_DEFAULTS = {
    Source.IPHONE: 0.4024,
    Source.ANDROID: 0.4086,
    Source.WEB_APP: 0.1742,
    Source.DECK: 0.0121,
    Source.IPAD: 0.0027,
}

KEY_PHRASE = "key_phrase"
FEE_PAYMENT = "fee_payment"

_ORGANIC_MODES = (InteractionKind.REPLY, InteractionKind.RETWEET,
                  InteractionKind.QUOTED_TWEET, InteractionKind.LIKE)

_MANDATORY_WINDOW = 48  # earliest tweets targeted by seeded pivot replies


@dataclass
class PlantedCampaign:
    campaign_id: str
    member_indices: tuple[int, ...]
    identifiers: tuple[tuple[ChannelKind, str], ...]
    wallet_focus: WalletKind
    category: str  # KEY_PHRASE | FEE_PAYMENT

    def __post_init__(self):
        if not self.identifiers:
            raise ConfigError(f"campaign {self.campaign_id} has no identifiers")
        if self.category not in (KEY_PHRASE, FEE_PAYMENT):
            raise ConfigError(f"campaign {self.campaign_id} has unknown category")

    def to_dict(self) -> dict:
        return {"campaign_id": self.campaign_id,
                "member_indices": list(self.member_indices),
                "identifiers": [[k.render(), i] for k, i in self.identifiers],
                "wallet_focus": self.wallet_focus.render(),
                "category": self.category}

    @classmethod
    def from_dict(cls, d: dict) -> "PlantedCampaign":
        return cls(d["campaign_id"], tuple(d["member_indices"]),
                   tuple((ChannelKind.parse(k), i) for k, i in d["identifiers"]),
                   WalletKind.parse(d["wallet_focus"]), d["category"])


@dataclass
class SimConfig:
    seed: int
    n_scammers: int
    mode_weights: dict[InteractionKind, float] = field(
        default_factory=lambda: dict(MODE_WEIGHT_DEFAULTS))
    repeat_text_prob: float = 0.3278
    source_mix: dict[Source, float] = field(
        default_factory=lambda: dict(SOURCE_MIX_DEFAULTS))
    engagement_rate: float = 0.01  # per-tweet engagement intensity
    suspension_hazard: float = 0.025
    deactivation_hazard: float = 0.01
    horizon_days: int = 90
    planted_campaigns: list[PlantedCampaign] = field(default_factory=list)

    def __post_init__(self):
        if self.n_scammers < 0:
            raise ConfigError("n_scammers must be non-negative")
        if self.horizon_days < 1:
            raise ConfigError("horizon_days must be at least 1")
        probs = (list(self.mode_weights.values()) + list(self.source_mix.values())
                 + [self.repeat_text_prob, self.suspension_hazard,
                    self.deactivation_hazard])
        if any(p < 0 or p > 1 for p in probs):
            raise ConfigError("probabilities must lie in [0, 1]")
        for camp in self.planted_campaigns:
            bad = [i for i in camp.member_indices if not 0 <= i < self.n_scammers]
            if bad:
                raise ConfigError(f"campaign {camp.campaign_id} references "
                                  f"missing scammer indices {bad}")


@dataclass
class GroundTruthEntry:
    kind: ChannelKind
    identifier: str
    campaign_id: str
    category: str
    wallet: WalletKind

    def to_dict(self) -> dict:
        return {"kind": self.kind.render(), "identifier": self.identifier,
                "campaign_id": self.campaign_id, "category": self.category,
                "wallet": self.wallet.render()}

    @classmethod
    def from_dict(cls, d: dict) -> "GroundTruthEntry":
        return cls(ChannelKind.parse(d["kind"]), d["identifier"], d["campaign_id"],
                   d["category"], WalletKind.parse(d["wallet"]))


@dataclass
class SimOutput:
    profiles: list[HoneyProfile]
    tweets: list[HoneyTweet]
    accounts: list[ScamAccount]
    interactions: list[Interaction]
    ground_truth: dict[tuple[ChannelKind, str], GroundTruthEntry]
    roles: dict[str, str]  # account_id -> scammer | benign | official | verified

    def validate(self) -> None:
        actors = {a.account_id for a in self.accounts}
        terminal = {a.account_id: a.terminal_status() for a in self.accounts}
        for itx in self.interactions:
            if itx.actor not in actors:
                raise ConfigError(f"interaction {itx.interaction_id} has unknown actor")
            t = terminal.get(itx.actor)
            if t is not None and itx.at >= t.observed_at:
                raise ConfigError(
                    f"interaction {itx.interaction_id} happens after actor became inactive")


# ---------------------------------------------------------------------------
# Planted campaign generation
# ---------------------------------------------------------------------------

_WORDS = ("recovery", "support", "helpdesk", "fix", "care", "desk",
          "assist", "restore", "unlock", "rescue")

_KIND_CYCLE = (ChannelKind.FORM, ChannelKind.EMAIL, ChannelKind.TWITTER_DM,
               ChannelKind.INSTAGRAM, ChannelKind.TELEGRAM, ChannelKind.WHATSAPP)


def _new_identifier(kind: ChannelKind, wallet: WalletKind, rng: SplitMix64,
                    taken: set[tuple[ChannelKind, str]]) -> str:
    wallet_tag = wallet.render().lower() if rng.chance(0.5) else rng.choice(_WORDS)
    while True:
        word = rng.choice(_WORDS)
        n = rng.randrange(1000)
        if kind is ChannelKind.EMAIL:
            domain = rng.choice(("gmail.com", "outlook.com", "protonmail.com"))
            ident = f"{wallet_tag}{word}{n}@{domain}"
        elif kind is ChannelKind.FORM:
            token = "".join("abcdefghijklmnopqrstuvwxyz0123456789"[rng.randrange(36)]
                            for _ in range(20))
            if rng.chance(0.8):
                ident = f"https://docs.google.com/forms/d/e/{token}/viewform"
            else:
                ident = f"https://forms.gle/{token[:10]}"
        elif kind is ChannelKind.WHATSAPP:
            ident = "1" + "".join(str(rng.randrange(10)) for _ in range(10))
        elif kind is ChannelKind.TWITTER_DM:
            ident = f"{word[:6]}_{wallet_tag[:5]}{n % 100}"
        else:  # Instagram / Telegram handles
            ident = f"{wallet_tag}_{word}{n}"
        if (kind, ident) not in taken:
            taken.add((kind, ident))
            return ident


def plant_campaigns(n_campaigns: int, n_scammers: int, seed: int,
                    solo_rate: float = 0.5) -> list[PlantedCampaign]:
    """Deterministic campaign roster: multi-member campaigns plus solo
    scammers with personal identifiers."""
    rng = SplitMix64(derive(seed, "campaigns"))
    taken: set[tuple[ChannelKind, str]] = set()
    campaigns: list[PlantedCampaign] = []
    in_campaign: set[int] = set()

    for c in range(n_campaigns):
        size = min(n_scammers, 2 + rng.randrange(7))
        if size < 2:
            break
        members = tuple(sorted(rng.sample(n_scammers, size)))
        wallet = rng.choice(tuple(WalletKind))
        n_ids = 1 + rng.randrange(4)
        kinds = [_KIND_CYCLE[rng.randrange(len(_KIND_CYCLE))] for _ in range(n_ids)]
        identifiers = tuple((k, _new_identifier(k, wallet, rng, taken)) for k in kinds)
        category = KEY_PHRASE if rng.chance(0.4) else FEE_PAYMENT
        campaigns.append(PlantedCampaign(f"camp{c:03d}", members, identifiers,
                                         wallet, category))
        in_campaign.update(members)

    for i in range(n_scammers):
        if i in in_campaign or not rng.chance(solo_rate):
            continue
        wallet = rng.choice(tuple(WalletKind))
        kind = _KIND_CYCLE[rng.randrange(len(_KIND_CYCLE))]
        identifiers = ((kind, _new_identifier(kind, wallet, rng, taken)),)
        category = KEY_PHRASE if rng.chance(0.4) else FEE_PAYMENT
        campaigns.append(PlantedCampaign(f"solo{i:05d}", (i,), identifiers,
                                         wallet, category))
    return campaigns


# ---------------------------------------------------------------------------
# Text banks
# ---------------------------------------------------------------------------

_PIVOT_TEMPLATES = {
    ChannelKind.EMAIL: (
        "our team can fix your {wallet} wallet, reach us at {id} asap",
        "we recover locked wallets daily, message our desk at {id}",
        "email {id} right now and an agent will restore your {wallet} access",
    ),
    ChannelKind.FORM: (
        "we got you, fill this form {id} to start your {wallet} recovery",
        "submit your case here {id} and support will contact you",
        "open {id} and complete the request, fixes take minutes",
    ),
    ChannelKind.INSTAGRAM: (
        "DM us on instagram @{id} for quick {wallet} support",
        "our specialist is on instagram @{id}, send a message",
        "reach the recovery team on instagram @{id} now",
    ),
    ChannelKind.TELEGRAM: (
        "chat with our agent on telegram @{id} for {wallet} help",
        "fastest fix is on telegram @{id}, message now",
        "our support bot is on telegram @{id}",
    ),
    ChannelKind.WHATSAPP: (
        "text us on whatsapp {url} and we will sort your {wallet} wallet",
        "message the desk on whatsapp {url} right away",
        "whatsapp support line: {url}",
    ),
    ChannelKind.TWITTER_DM: (
        "send a dm to @{id} and the team will fix it",
        "for instant {wallet} help send a dm to @{id}",
        "dm to @{id} now, agents online",
    ),
}

_KEY_TAILS = (" have your recovery phrase ready",
              " you will need your 12 words backup")
_FEE_TAILS = (" service fee is ${price}", " small fee of ${price} applies")

_GENERIC_TEXTS = (
    "i had the same problem last month, awful",
    "these {wallet} outages keep happening",
    "following this, same issue here",
    "hope you get this sorted friend",
    "mine did this too after the update",
)

_BENIGN_TEXTS = (
    "so sorry this happened to you",
    "hope you get your wallet back soon",
    "this happened to my friend too, good luck",
    "stay safe out there, lots of fake accounts in replies",
    "sending good vibes, hope it works out",
)

_VERIFIED_TEXTS = (
    "rough week for wallet users, stay strong",
    "seeing a lot of these reports lately",
)

_NAMES = ("Alex Rivers", "Sam Okafor", "Jordan Lee", "Casey Nguyen", "Riley Park",
          "Dana Moss", "Quinn Ideh", "Morgan Silva", "Jamie Cole", "Avery Tan")
_LOCATIONS = ("", "", "", "", "", "", "USA", "UK", "France", "Nigeria", "Canada",
              "India", "Congo", "Cryptoverse", "Earth", "Blockchain", "Metaverse")
_DESCRIPTIONS = ("wallet recovery enthusiast", "crypto since 2017", "here to help",
                 "nft collector", "defi degen", "support specialist", "")
_LANGS = ("fr", "es", "ja", "zh", "cy", "lt", "in")


def _wallet_url(identifier: str, kind: ChannelKind) -> str | None:
    if kind is ChannelKind.FORM:
        return identifier
    if kind is ChannelKind.WHATSAPP:
        return f"https://wa.me/{identifier}"
    if kind is ChannelKind.INSTAGRAM:
        return f"https://instagram.com/{identifier}"
    if kind is ChannelKind.TELEGRAM:
        return f"https://t.me/{identifier}"
    return None


def _pivot_text(rng: SplitMix64, kind: ChannelKind, identifier: str,
                wallet: WalletKind, category: str) -> tuple[str, list[str]]:
    template = rng.choice(_PIVOT_TEMPLATES[kind])
    url = _wallet_url(identifier, kind)
    text = template.format(id=identifier, url=url or identifier,
                           wallet=wallet.render())
    urls: list[str] = []
    if url is not None and (kind is ChannelKind.FORM or rng.chance(0.5)):
        urls.append(url)
    if rng.chance(0.7):
        if category == KEY_PHRASE:
            text += rng.choice(_KEY_TAILS)
        else:
            price = 150 + 25 * rng.randrange(97)
            text += rng.choice(_FEE_TAILS).format(price=price)
    return text, urls


def _draw_source(rng: SplitMix64, mix: dict[Source, float]) -> Source:
    total = sum(mix.values())
    u = rng.random() * total
    acc = 0.0
    for source in Source:
        acc += mix.get(source, 0.0)
        if u < acc:
            return source
    return Source.IPHONE


# ---------------------------------------------------------------------------
# The simulation proper
# ---------------------------------------------------------------------------

@dataclass
class _Event:
    kind: InteractionKind
    actor_idx: int
    target_tweet: str | None
    target_profile: str | None
    text: str | None
    urls: list[str]
    source: Source
    lang: str
    at: int
    seq: int


def run_sim(config: SimConfig, plan: PostingPlan) -> SimOutput:
    """Deterministic simulation of scripted scammers engaging the plan."""
    if config.n_scammers > 0 and not plan.entries:
        raise ConfigError("a non-empty posting plan is required when scammers exist")

    profile_ids = sorted({e.profile_id for e in plan.entries})
    start = plan.entries[0].scheduled_at if plan.entries else 0
    profiles = [HoneyProfile(pid, f"honey_{pid}", "cryptocurrency enthusiast",
                             start - 30 * DAY) for pid in profile_ids]
    tweets = [HoneyTweet(f"t{i:06d}", e.profile_id, e.draft.wallet,
                         e.draft.sentences, e.draft.hashtags, e.draft.full_text,
                         e.scheduled_at)
              for i, e in enumerate(plan.entries)]

    campaigns_of: dict[int, list[PlantedCampaign]] = {}
    for camp in config.planted_campaigns:
        for idx in camp.member_indices:
            campaigns_of.setdefault(idx, []).append(camp)

    ground_truth: dict[tuple[ChannelKind, str], GroundTruthEntry] = {}
    for camp in config.planted_campaigns:
        for kind, ident in camp.identifiers:
            ground_truth[(kind, ident)] = GroundTruthEntry(
                kind, ident, camp.campaign_id, camp.category, camp.wallet_focus)

    accounts: list[ScamAccount] = []
    events: list[_Event] = []
    roles: dict[str, str] = {}
    window = min(len(tweets), _MANDATORY_WINDOW)

    for i in range(config.n_scammers):
        rng = SplitMix64(derive(config.seed, "scammer", i))
        account_id = f"s{i:05d}"
        handle = f"{rng.choice(_WORDS)}{rng.choice(_WORDS)}{i:04d}"
        created_at = start - (30 + rng.randrange(1000)) * DAY
        name = rng.choice(_NAMES)
        location = rng.choice(_LOCATIONS)
        description = rng.choice(_DESCRIPTIONS)
        followers = rng.randrange(5000)
        following = 1 + rng.randrange(300)
        lang = "en" if rng.chance(0.975) else rng.choice(_LANGS)

        participates = {mode: rng.chance(config.mode_weights.get(mode, 0.0))
                        for mode in InteractionKind}

        my_campaigns = campaigns_of.get(i, [])
        my_identifiers: list[tuple[ChannelKind, str, PlantedCampaign]] = []
        for camp in my_campaigns:
            for kind, ident in camp.identifiers:
                my_identifiers.append((kind, ident, camp))

        own_texts: list[tuple[str, list[str]]] = []
        my_events: list[_Event] = []
        seq = 0

        def emit(kind, tweet, text, urls, at, target_profile=None):
            nonlocal seq
            my_events.append(_Event(kind, i, tweet.tweet_id if tweet else None,
                                    target_profile, text, urls,
                                    _draw_source(rng, config.source_mix),
                                    lang, at, seq))
            seq += 1

        # seeded pivot replies guarantee every owned identifier is recoverable
        if window:
            for kind, ident, camp in my_identifiers:
                tweet = tweets[rng.randrange(window)]
                at = tweet.posted_at + MINUTE * (2 + rng.randrange(28))
                text, urls = _pivot_text(rng, kind, ident, camp.wallet_focus,
                                         camp.category)
                own_texts.append((text, urls))
                emit(InteractionKind.REPLY, tweet, text, urls, at)

        engaged: dict[InteractionKind, set[int]] = {m: set() for m in _ORGANIC_MODES}
        for mode in _ORGANIC_MODES:
            if not participates[mode] or not tweets:
                continue
            pos = -1
            while True:
                pos += 1 + rng.geometric(config.engagement_rate)
                if pos >= len(tweets):
                    break
                if pos in engaged[mode]:
                    continue
                engaged[mode].add(pos)
                tweet = tweets[pos]
                at = tweet.posted_at + MINUTE * (2 + rng.randrange(178))
                if mode in (InteractionKind.REPLY, InteractionKind.QUOTED_TWEET):
                    if own_texts and rng.chance(config.repeat_text_prob):
                        text, urls = rng.choice(own_texts)
                    elif my_identifiers:
                        kind, ident, camp = rng.choice(my_identifiers)
                        text, urls = _pivot_text(rng, kind, ident,
                                                 camp.wallet_focus, camp.category)
                    else:
                        text = rng.choice(_GENERIC_TEXTS).format(
                            wallet=tweet.wallet.render())
                        urls = []
                    own_texts.append((text, urls))
                    emit(mode, tweet, text, list(urls), at)
                else:
                    emit(mode, tweet, None, [], at)

        if participates[InteractionKind.FOLLOW] and profiles:
            n_follow = 1 + rng.randrange(len(profiles))
            for idx in rng.sample(len(profiles), n_follow):
                at = start + MINUTE * (5 + rng.randrange(1440))
                emit(InteractionKind.FOLLOW, None, None, [], at,
                     target_profile=profiles[idx].profile_id)

        # terminal status hazard, measured from first interaction
        status_history = []
        if my_events:
            first_at = min(e.at for e in my_events)
            suspend_day = 1 + rng.geometric(config.suspension_hazard) \
                if config.suspension_hazard > 0 else config.horizon_days + 1
            deactivate_day = 1 + rng.geometric(config.deactivation_hazard) \
                if config.deactivation_hazard > 0 else config.horizon_days + 1
            terminal_day = min(suspend_day, deactivate_day)
            status_history.append(AccountStatus(StatusKind.ACTIVE, first_at))
            if terminal_day <= config.horizon_days:
                terminal_kind = (StatusKind.SUSPENDED if suspend_day <= deactivate_day
                                 else StatusKind.NOT_FOUND)
                terminal_at = first_at + terminal_day * DAY
                status_history.append(AccountStatus(terminal_kind, terminal_at))
                my_events = [e for e in my_events if e.at < terminal_at]
        else:
            status_history.append(AccountStatus(StatusKind.ACTIVE, start))

        accounts.append(ScamAccount(account_id, handle, created_at, name, location,
                                    description, followers, following, False, None,
                                    status_history))
        roles[account_id] = "scammer"
        events.extend(my_events)

    interactions = _finalize(events, [a.account_id for a in accounts])
    out = SimOutput(profiles, tweets, accounts, interactions, ground_truth, roles)
    out.validate()
    return out


def _finalize(events: list[_Event], account_ids: list[str]) -> list[Interaction]:
    events = sorted(events, key=lambda e: (e.at, e.actor_idx, e.seq))
    out = []
    for n, e in enumerate(events):
        out.append(Interaction(f"i{n:06d}", e.kind, account_ids[e.actor_idx],
                               e.target_tweet, e.target_profile, e.text, e.urls,
                               e.source, e.lang, e.at))
    return out


# ---------------------------------------------------------------------------
# Benign / official injection
# ---------------------------------------------------------------------------

_OFFICIALS = (("TrustWallet", "trustwallet.com"),
              ("MetaMask", "metamask.io"),
              ("coinbasesupport", "coinbase.com"))


def inject_benign(output: SimOutput, config: SimConfig, rate: float) -> SimOutput:
    """Add benign repliers plus official/verified responders for filter tests."""
    if not 0 <= rate <= 1:
        raise ConfigError("benign rate must lie in [0, 1]")
    if rate == 0:
        return output

    start = output.tweets[0].posted_at if output.tweets else 0
    accounts = list(output.accounts)
    interactions_raw: list[_Event] = []
    roles = dict(output.roles)
    new_ids: list[str] = []
    n_benign = round(rate * config.n_scammers)

    def benign_account(account_id, handle, verified, role, description):
        accounts.append(ScamAccount(account_id, handle, start - 400 * DAY,
                                    handle, "", description, 100, 50, verified, None,
                                    [AccountStatus(StatusKind.ACTIVE, start)]))
        roles[account_id] = role
        new_ids.append(account_id)

    for b in range(n_benign):
        rng = SplitMix64(derive(config.seed, "benign", b))
        account_id = f"b{b:04d}"
        benign_account(account_id, f"friendly_user_{b:04d}", False, "benign",
                       "just a crypto fan")
        n_replies = 1 + rng.randrange(4)
        for _ in range(n_replies):
            if not output.tweets:
                break
            tweet = rng.choice(output.tweets)
            at = tweet.posted_at + MINUTE * (5 + rng.randrange(600))
            interactions_raw.append(_Event(
                InteractionKind.REPLY, len(new_ids) - 1, tweet.tweet_id, None,
                rng.choice(_BENIGN_TEXTS), [], _draw_source(rng, config.source_mix),
                "en", at, len(interactions_raw)))

    for n, (handle, domain) in enumerate(_OFFICIALS):
        rng = SplitMix64(derive(config.seed, "official", n))
        account_id = f"o{n:04d}"
        benign_account(account_id, handle, True, "official", "official support")
        if output.tweets:
            tweet = rng.choice(output.tweets)
            at = tweet.posted_at + MINUTE * (3 + rng.randrange(120))
            text = (f"for account issues please use https://support.{domain}/en "
                    f"or email support@{domain}, beware of impostors")
            interactions_raw.append(_Event(
                InteractionKind.REPLY, len(new_ids) - 1, tweet.tweet_id, None,
                text, [f"https://support.{domain}/en"],
                _draw_source(rng, config.source_mix), "en", at,
                len(interactions_raw)))

    for v in range(2):
        rng = SplitMix64(derive(config.seed, "verified", v))
        account_id = f"v{v:04d}"
        benign_account(account_id, f"famous_voice_{v}", True, "verified",
                       "public figure")
        if output.tweets:
            tweet = rng.choice(output.tweets)
            at = tweet.posted_at + MINUTE * (10 + rng.randrange(300))
            interactions_raw.append(_Event(
                InteractionKind.REPLY, len(new_ids) - 1, tweet.tweet_id, None,
                rng.choice(_VERIFIED_TEXTS), [], _draw_source(rng, config.source_mix),
                "en", at, len(interactions_raw)))

    extra = _finalize(interactions_raw, new_ids)
    renumbered = []
    base = len(output.interactions)
    for n, itx in enumerate(extra):
        renumbered.append(Interaction(f"i{base + n:06d}", itx.kind, itx.actor,
                                      itx.target_tweet, itx.target_profile, itx.text,
                                      itx.urls, itx.source, itx.lang, itx.at))
    merged = sorted(output.interactions + renumbered,
                    key=lambda x: (x.at, x.interaction_id))
    out = SimOutput(output.profiles, output.tweets, accounts, merged,
                    output.ground_truth, roles)
    out.validate()
    return out


# ---------------------------------------------------------------------------
# Scripted engagement responses, probes, embeddings, chain synthesis
# ---------------------------------------------------------------------------

def scripted_response(identifier: str, category: str, wallet: WalletKind,
                      seed: int) -> str:
    """What the scammer behind this identifier replies when baited."""
    rng = SplitMix64(derive(seed, "response", identifier))
    if category == KEY_PHRASE:
        openers = (
            "we can restore your {wallet} wallet today.",
            "diagnostics complete, your {wallet} account is recoverable.",
        )
        asks = (
            " fill this form with your 12 words recovery phrase: "
            "https://docs.google.com/forms/d/e/{tok}/viewform",
            " send over your secret phrase so the engineer can resync it",
            " submit the recovery phrase here https://forms.gle/{tok10} to proceed",
        )
        tok = "".join("abcdefghijklmnopqrstuvwxyz0123456789"[rng.randrange(36)]
                      for _ in range(20))
        return (rng.choice(openers) + rng.choice(asks)).format(
            wallet=wallet.render(), tok=tok, tok10=tok[:10])

    price = 150 + 25 * rng.randrange(97)
    methods = []
    pick = rng.randrange(4)
    if pick == 0:
        methods.append(f"pay to paypal.me/{rng.choice(_WORDS)}{rng.randrange(100)}")
    elif pick == 1:
        chain_pick = rng.randrange(3)
        if chain_pick == 0:
            methods.append(f"send btc to {random_base58_address(rng)}")
        elif chain_pick == 1:
            methods.append(f"send btc to {random_bech32_address(rng)}")
        else:
            methods.append(f"send eth to {random_eth_address(rng)}")
    elif pick == 2:
        vendor = "carddelivery" if rng.chance(0.5) else "amazon gift card"
        methods.append(f"we accept {vendor} payments, send the code")
    else:
        methods.append(f"pay to paypal.me/{rng.choice(_WORDS)}{rng.randrange(100)}")
        methods.append(f"or send eth to {random_eth_address(rng)}")
    return (f"the repair tool license for {wallet.render()} costs ${price}. "
            + " ".join(methods))


_PROBE_BLOCK_RATES = {
    ChannelKind.EMAIL: 0.088,
    ChannelKind.FORM: 0.3528,
    ChannelKind.INSTAGRAM: 0.5755,
    ChannelKind.TELEGRAM: 0.0,
    ChannelKind.TWITTER_DM: 0.702,
    ChannelKind.WHATSAPP: 0.3177,
}


def simulate_probes(channels, seed: int, probed_at: int) -> list[dict]:
    """One scripted probe outcome per channel, keyed by identifier."""
    probes = []
    for ch in sorted(channels, key=lambda c: (c.kind.render(), c.identifier)):
        rng = SplitMix64(derive(seed, "probe", ch.kind.render(), ch.identifier))
        u = rng.random()
        block_rate = _PROBE_BLOCK_RATES.get(ch.kind, 0.3)
        if u < block_rate:
            outcome = "Blocked"
        elif u < block_rate + 0.02:
            outcome = "Deleted"
        elif u < block_rate + 0.03:
            outcome = "Unreachable"
        else:
            outcome = "Alive"
        probes.append({"kind": ch.kind.render(), "identifier": ch.identifier,
                       "probed_at": probed_at, "outcome": outcome})
    return probes


_PICTURE_CATEGORIES = (
    ("NFTs", 0.2298), ("Male", 0.2281), ("Female", 0.2256),
    ("TechSupport", 0.1187), ("Wallets", 0.1164), ("DefaultImage", 0.0701),
    ("Miscellaneous", 0.0109),
)


def make_embeddings(account_ids: list[str], seed: int, n_total: int,
                    dim: int = 16) -> tuple[list[EmbeddingRecord], dict[str, str]]:
    """Synthetic profile-picture embeddings with planted blob structure.

    Each account lands in one of seven picture categories; six are tight
    gaussian blobs on separated axes, the last is scattered noise. Padding
    ids x#### fill the file up to ``n_total`` records.
    """
    if dim < 8:
        raise ConfigError("embedding dim must be at least 8 for 7 categories")
    ids = list(account_ids)
    for i in range(max(0, n_total - len(ids))):
        ids.append(f"x{i:04d}")
    ids = ids[:max(n_total, 0)] if n_total else ids

    records = []
    truth: dict[str, str] = {}
    for account_id in ids:
        rng = SplitMix64(derive(seed, "embed", account_id))
        u = rng.random()
        acc = 0.0
        chosen = _PICTURE_CATEGORIES[-1][0]
        for idx, (name, share) in enumerate(_PICTURE_CATEGORIES):
            acc += share
            if u < acc:
                chosen = name
                break
        truth[account_id] = chosen
        cat_idx = next(k for k, (name, _) in enumerate(_PICTURE_CATEGORIES)
                       if name == chosen)
        if chosen == "Miscellaneous":
            vector = [rng.random() * 40.0 - 20.0 for _ in range(dim)]
        else:
            vector = [8.0 if d == cat_idx else 0.0 for d in range(dim)]
            vector = [v + 0.6 * rng.gauss() for v in vector]
        records.append(EmbeddingRecord(account_id, vector))
    return records, truth


# ---------------------------------------------------------------------------
# Synthetic chain activity for the end-to-end run
# ---------------------------------------------------------------------------

_RELEASE_SHARES = (("Email", 0.25), ("Forms", 0.30), ("Instagram", 0.20),
                   ("Telegram", 0.05), ("URLs", 0.20))
_THEFT_RATES = {"Email": 0.32, "Forms": 0.57, "Instagram": 0.15,
                "Telegram": 0.40, "URLs": 0.25}


def synthesize_chain(seed: int, n_wallets: int, start: int,
                     usd_funding: float = 1.26, usd_per_eth: float = 1260.0,
                     btc_addresses: Iterable[str] = ()):
    """Deterministic honey-wallet ledger plus a small co-spending BTC ledger."""
    from .chain import BtcTx, EthTx, ReleaseChannel, WEI_PER_ETH, mint_honey_wallets

    wallets = mint_honey_wallets(n_wallets, seed)
    funding_wei = int(round(usd_funding / usd_per_eth * WEI_PER_ETH))

    quotas = []
    assigned = 0
    for name, share in _RELEASE_SHARES[:-1]:
        q = int(round(share * n_wallets))
        quotas.append((name, q))
        assigned += q
    quotas.append((_RELEASE_SHARES[-1][0], max(0, n_wallets - assigned)))

    eth_txs = []
    idx = 0
    rng = SplitMix64(derive(seed, "chain"))
    funder = "0x" + "f" * 40
    recipients = ["0x" + format(derive(seed, "thief", r), "040x")[:40]
                  for r in range(max(1, int(n_wallets * 0.26)))]
    eth_txs.append(EthTx("fund-source", "coinbase", funder,
                         funding_wei * n_wallets, start))
    for name, quota in quotas:
        for _ in range(quota):
            if idx >= n_wallets:
                break
            w = wallets[idx]
            w.released_on = ReleaseChannel.parse(name)
            w.released_at = start + DAY * (1 + rng.randrange(20))
            eth_txs.append(EthTx(f"fund-{w.wallet_id}", funder, w.address,
                                 funding_wei, start + 3600 * (1 + idx)))
            if rng.chance(_THEFT_RATES[name]):
                recipient = recipients[rng.randrange(len(recipients))]
                eth_txs.append(EthTx(f"drain-{w.wallet_id}", w.address, recipient,
                                     funding_wei, w.released_at + 3600 * (1 + rng.randrange(72))))
            idx += 1

    btc_txs = []
    addrs = sorted(set(btc_addresses))
    sat = 5_000_000
    for n, addr in enumerate(addrs):
        fund_id = f"bf{n:04d}"
        btc_txs.append(BtcTx(fund_id, [("coinbase", sat * 2)], [(addr, sat * 2)],
                             start + 7200 * n))
        rng2 = SplitMix64(derive(seed, "btc", addr))
        if rng2.chance(0.7):
            fee = 10_000
            spend_to = "ext" + format(rng2.next_u64(), "016x")
            btc_txs.append(BtcTx(f"bs{n:04d}", [(addr, sat * 2)],
                                 [(spend_to, sat * 2 - fee)],
                                 start + 7200 * n + 3600))
    return wallets, eth_txs, btc_txs
