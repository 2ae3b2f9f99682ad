"""Timeline ingestion and false-positive filtering.

Pulls are incremental against a marking point so repeated polls of a growing
stream never return duplicates. Classification orders exclusions before
inclusions: official handles, then verified accounts, then accounts whose
links are all on official domains, and only then the scam signals (payment
or key-phrase requests, or any pivot to an off-platform channel).
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Iterable
from urllib.parse import urlsplit

from .channels import ExtractionRuleSet, extract_raw
from .core import (AccountStatus, CanonicalEnum, Interaction, ScamAccount,
                   StatusKind, TEXT_KINDS)
from .engage import PaymentRules, UNCLASSIFIED, classify_response

VERDICT_SCAM = "Scam"
VERDICT_BENIGN = "Benign"
VERDICT_OFFICIAL = "Official"
VERDICT_VERIFIED = "Verified"
VERDICT_EXCLUDED = "Excluded"


class IngestError(ValueError):
    def __init__(self, offending_id: str, reason: str):
        super().__init__(f"{reason} (interaction {offending_id})")
        self.offending_id = offending_id


@dataclass
class MarkingPoint:
    account_id: str
    last_interaction_id: str
    last_at: int

    def key(self) -> tuple[int, str]:
        return (self.last_at, self.last_interaction_id)

    def to_dict(self) -> dict:
        return {"account_id": self.account_id,
                "last_interaction_id": self.last_interaction_id,
                "last_at": self.last_at}

    @classmethod
    def from_dict(cls, d: dict) -> "MarkingPoint":
        return cls(d["account_id"], d["last_interaction_id"], int(d["last_at"]))


def pull_timeline(stream: Iterable[Interaction],
                  mark: MarkingPoint | None,
                  account_id: str = "*") -> tuple[list[Interaction], MarkingPoint | None]:
    """Records strictly after ``mark``, plus the advanced mark.

    The stream must be ordered by (at, interaction_id); an out-of-order
    record raises IngestError naming it. With no new records the original
    mark comes back unchanged.
    """
    after = mark.key() if mark else None
    prev_key: tuple[int, str] | None = None
    out: list[Interaction] = []
    for rec in stream:
        key = (rec.at, rec.interaction_id)
        if prev_key is not None and key <= prev_key:
            raise IngestError(rec.interaction_id, "stream is out of order")
        prev_key = key
        if after is None or key > after:
            out.append(rec)
    if not out:
        return [], mark
    last = out[-1]
    return out, MarkingPoint(account_id, last.interaction_id, last.at)


# ---------------------------------------------------------------------------
# Registry + classification
# ---------------------------------------------------------------------------

@dataclass
class OfficialRegistry:
    official_handles: set[str]
    official_domains: set[str]
    exchange_names: set[str]
    coin_names: set[str]

    def __post_init__(self):
        for name in ("official_handles", "official_domains", "exchange_names", "coin_names"):
            entries = getattr(self, name)
            if any(e != e.lower() for e in entries):
                raise ValueError(f"registry {name} entries must be lowercase")

    @classmethod
    def _from_json(cls, d: dict) -> "OfficialRegistry":
        return cls(set(d["official_handles"]), set(d["official_domains"]),
                   set(d.get("exchange_names", [])), set(d.get("coin_names", [])))

    @classmethod
    def from_file(cls, path) -> "OfficialRegistry":
        with Path(path).open("r", encoding="utf-8") as fh:
            return cls._from_json(json.load(fh))

    @classmethod
    def default(cls) -> "OfficialRegistry":
        text = resources.files("conman.data").joinpath("registry.json").read_text("utf-8")
        return cls._from_json(json.loads(text))


@dataclass
class AccountVerdict:
    account_id: str
    verdict: str
    rule_id: str

    def to_dict(self) -> dict:
        return {"account_id": self.account_id, "verdict": self.verdict,
                "rule_id": self.rule_id}

    @classmethod
    def from_dict(cls, d: dict) -> "AccountVerdict":
        return cls(d["account_id"], d["verdict"], d["rule_id"])


def _two_ld(host: str) -> str:
    labels = host.lower().split(".")
    return ".".join(labels[-2:]) if len(labels) >= 2 else host.lower()


def _linked_2lds(interactions: list[Interaction], rules: ExtractionRuleSet) -> set[str]:
    """2LDs of every email domain and URL host embedded in the account's texts."""
    out: set[str] = set()
    for itx in interactions:
        if itx.kind not in TEXT_KINDS:
            continue
        text = itx.text or ""
        for match in rules.email_re.finditer(text):
            out.add(_two_ld(match.group(0).rsplit("@", 1)[1]))
        urls = list(itx.urls) + [m.group(0) for m in rules.url_re.finditer(text)]
        for url in urls:
            host = urlsplit(url.strip()).netloc.split(":")[0]
            if host:
                out.add(_two_ld(host))
    return out


def classify_account(acct: ScamAccount, interactions: Iterable[Interaction],
                     registry: OfficialRegistry,
                     rules: ExtractionRuleSet | None = None,
                     payment_rules: PaymentRules | None = None) -> AccountVerdict:
    """First matching rule wins; interactions are sorted first so the verdict
    does not depend on input order."""
    rules = rules or ExtractionRuleSet.default()
    payment_rules = payment_rules or PaymentRules.default()
    ints = sorted(interactions, key=lambda i: (i.at, i.interaction_id))

    if acct.handle.lower() in registry.official_handles:
        return AccountVerdict(acct.account_id, VERDICT_OFFICIAL, "official-handle")
    if acct.verified:
        return AccountVerdict(acct.account_id, VERDICT_VERIFIED, "verified-account")

    linked = _linked_2lds(ints, rules)
    if linked and linked <= registry.official_domains:
        return AccountVerdict(acct.account_id, VERDICT_BENIGN, "official-links")

    for itx in ints:
        if itx.kind not in TEXT_KINDS:
            continue
        if classify_response(itx.text or "", itx.urls, payment_rules).label != UNCLASSIFIED:
            return AccountVerdict(acct.account_id, VERDICT_SCAM, "payment-or-phrase")
        hits, _ = extract_raw(itx.text, itx.urls, rules, acct.handle)
        if hits:
            return AccountVerdict(acct.account_id, VERDICT_SCAM, "pivot-channel")

    return AccountVerdict(acct.account_id, VERDICT_BENIGN, "no-engagement")


class ApiResult(CanonicalEnum):
    OK = "Ok"
    FORBIDDEN = "Forbidden"
    NOT_FOUND = "NotFound"


_STATUS_FOR_RESULT = {
    ApiResult.OK: StatusKind.ACTIVE,
    ApiResult.FORBIDDEN: StatusKind.SUSPENDED,
    ApiResult.NOT_FOUND: StatusKind.NOT_FOUND,
}


def snapshot_status(api_result: ApiResult | str, at: int) -> AccountStatus:
    """Map a profile-lookup outcome onto an account status stamped ``at``."""
    if isinstance(api_result, str):
        api_result = ApiResult.parse(api_result)
    return AccountStatus(_STATUS_FOR_RESULT[api_result], at)
