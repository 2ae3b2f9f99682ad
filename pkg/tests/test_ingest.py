"""Marking-point pulls and the false-positive filtering rules."""

import pytest

from conman.core import (AccountStatus, Interaction, InteractionKind,
                         ScamAccount, Source, StatusKind)
from conman.ingest import (ApiResult, IngestError, MarkingPoint,
                           OfficialRegistry, classify_account, pull_timeline,
                           snapshot_status, VERDICT_BENIGN, VERDICT_OFFICIAL,
                           VERDICT_SCAM, VERDICT_VERIFIED)

REGISTRY = OfficialRegistry.default()


def _itx(n, at, actor="a", text="hello", kind=InteractionKind.REPLY, urls=()):
    return Interaction(f"i{n:03d}", kind, actor, "t1", None, text, list(urls),
                       Source.ANDROID, "en", at)


def _account(**overrides):
    base = dict(account_id="a", handle="random_user", created_at=0)
    base.update(overrides)
    return ScamAccount(**base)


# --- pull_timeline --------------------------------------------------------------

def test_empty_stream_returns_mark_unchanged():
    mark = MarkingPoint("*", "i001", 10)
    got, new_mark = pull_timeline([], mark)
    assert got == [] and new_mark is mark


def test_pull_after_mark_returns_suffix():
    stream = [_itx(n, at=n * 10) for n in range(1, 6)]
    mark = MarkingPoint("*", "i002", 20)
    got, new_mark = pull_timeline(stream, mark)
    assert [i.interaction_id for i in got] == ["i003", "i004", "i005"]
    assert new_mark.last_interaction_id == "i005" and new_mark.last_at == 50


def test_successive_pulls_are_exactly_once():
    stream = [_itx(n, at=n * 7) for n in range(1, 30)]
    first, mark = pull_timeline(stream[:12], None)
    grown = stream[:25]
    second, mark = pull_timeline(grown, mark)
    third, mark = pull_timeline(stream, mark)
    ids = [i.interaction_id for i in first + second + third]
    assert ids == [i.interaction_id for i in stream]  # no loss
    assert len(ids) == len(set(ids))  # no duplicates


def test_out_of_order_stream_raises_with_id():
    stream = [_itx(1, at=50), _itx(2, at=40)]
    with pytest.raises(IngestError) as err:
        pull_timeline(stream, None)
    assert err.value.offending_id == "i002"


# --- classification ---------------------------------------------------------------

def test_verified_account_is_excluded():
    verdict = classify_account(_account(verified=True), [], REGISTRY)
    assert verdict.verdict == VERDICT_VERIFIED
    assert verdict.rule_id == "verified-account"


def test_official_handle_wins_over_everything():
    acct = _account(handle="TrustWallet", verified=True)
    verdict = classify_account(acct, [_itx(1, 5, text="pay paypal.me/x")], REGISTRY)
    assert verdict.verdict == VERDICT_OFFICIAL


def test_pivot_reply_is_scam():
    itx = _itx(1, 5, text="DM us on instagram @wallet_fix")
    verdict = classify_account(_account(), [itx], REGISTRY)
    assert verdict.verdict == VERDICT_SCAM
    assert verdict.rule_id == "pivot-channel"


def test_payment_request_is_scam():
    itx = _itx(1, 5, text="the fix costs $99, paypal.me/collector")
    verdict = classify_account(_account(), [itx], REGISTRY)
    assert verdict.verdict == VERDICT_SCAM
    assert verdict.rule_id == "payment-or-phrase"


def test_plain_sympathy_is_benign():
    itx = _itx(1, 5, text="sorry that happened to you")
    verdict = classify_account(_account(), [itx], REGISTRY)
    assert verdict.verdict == VERDICT_BENIGN
    assert verdict.rule_id == "no-engagement"


def test_official_links_only_is_benign():
    itx = _itx(1, 5, text="contact support@trustwallet.com or see the docs",
               urls=["https://community.trustwallet.com/help"])
    verdict = classify_account(_account(), [itx], REGISTRY)
    assert verdict.verdict == VERDICT_BENIGN
    assert verdict.rule_id == "official-links"


def test_mixed_official_and_scam_links_fall_through():
    itx = _itx(1, 5, text="see support@trustwallet.com or mail fix@scamdesk.io")
    verdict = classify_account(_account(), [itx], REGISTRY)
    assert verdict.verdict == VERDICT_SCAM


def test_verdict_is_order_independent():
    interactions = [
        _itx(1, 50, text="hello there"),
        _itx(2, 10, text="reach us at desk@scam.io"),
        _itx(3, 30, text="nice day"),
    ]
    a = classify_account(_account(), interactions, REGISTRY)
    b = classify_account(_account(), list(reversed(interactions)), REGISTRY)
    assert (a.verdict, a.rule_id) == (b.verdict, b.rule_id)


def test_likes_alone_are_benign():
    like = Interaction("i1", InteractionKind.LIKE, "a", "t1", None, None, [],
                       Source.IPHONE, "en", 1)
    verdict = classify_account(_account(), [like], REGISTRY)
    assert verdict.verdict == VERDICT_BENIGN


# --- snapshot_status ----------------------------------------------------------------

def test_snapshot_status_mapping():
    assert snapshot_status(ApiResult.FORBIDDEN, 12 * 86400).status is StatusKind.SUSPENDED
    assert snapshot_status(ApiResult.OK, 5).status is StatusKind.ACTIVE
    assert snapshot_status("not_found", 9).status is StatusKind.NOT_FOUND
    assert snapshot_status(ApiResult.FORBIDDEN, 99).observed_at == 99


def test_registry_rejects_uppercase_entries():
    with pytest.raises(ValueError):
        OfficialRegistry({"MetaMask"}, set(), set(), set())


def test_status_history_helper():
    acct = _account(status_history=[AccountStatus(StatusKind.ACTIVE, 1),
                                    AccountStatus(StatusKind.NOT_FOUND, 9)])
    assert acct.terminal_status().status is StatusKind.NOT_FOUND
