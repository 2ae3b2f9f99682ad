"""Contact-channel extraction, wallet attribution, and distribution counts."""

import pytest
from hypothesis import given, strategies as st

from conman.channels import (ExtractionRuleSet, attribute_wallet,
                             channel_distribution, classify_url,
                             extract_channels, extract_raw, extract_uses,
                             merge_channels)
from conman.core import (ChannelKind, ContactChannel, Interaction,
                         InteractionKind, Source, WalletKind)

RULES = ExtractionRuleSet.default()


def _hits(text=None, urls=(), actor=None):
    hits, unmatched = extract_raw(text, list(urls), RULES, actor)
    return [(k, i) for k, i, _ in hits], unmatched


def test_email_in_text_is_extracted():
    hits, _ = _hits("reach us at metamaskrecovery1@gmail.com asap")
    assert hits == [(ChannelKind.EMAIL, "metamaskrecovery1@gmail.com")]


def test_google_form_url_is_a_form_channel():
    hits, unmatched = _hits(urls=["https://docs.google.com/forms/d/e/XYZ/viewform"])
    assert hits == [(ChannelKind.FORM, "https://docs.google.com/forms/d/e/xyz/viewform")]
    assert unmatched == []


def test_plain_text_has_no_channels():
    hits, unmatched = _hits("great weather today")
    assert hits == [] and unmatched == []


def test_urls_inside_text_are_scanned_too():
    hits, _ = _hits("chat here https://t.me/fix_desk99 please")
    assert hits == [(ChannelKind.TELEGRAM, "fix_desk99")]


def test_instagram_handle_from_text():
    hits, _ = _hits("DM us on instagram @wallet_fix for help")
    assert hits == [(ChannelKind.INSTAGRAM, "wallet_fix")]


def test_twitter_dm_handle_pattern():
    hits, _ = _hits("send a dm to @recover_hub and wait")
    assert hits == [(ChannelKind.TWITTER_DM, "recover_hub")]


def test_dm_phrase_falls_back_to_actor_handle():
    hits, _ = _hits("dm me for the fix", actor="Scammy123")
    assert hits == [(ChannelKind.TWITTER_DM, "scammy123")]


def test_dm_phrase_without_actor_yields_nothing():
    hits, _ = _hits("dm me for the fix")
    assert hits == []


def test_instagram_mention_does_not_double_as_twitter_dm():
    hits, _ = _hits("DM us on instagram @fixer55 now", actor="actor")
    assert hits == [(ChannelKind.INSTAGRAM, "fixer55")]


def test_whatsapp_urls():
    hits, _ = _hits(urls=["https://wa.me/15551234567",
                          "https://api.whatsapp.com/send?phone=447700900123"])
    assert (ChannelKind.WHATSAPP, "15551234567") in hits
    assert (ChannelKind.WHATSAPP, "447700900123") in hits


def test_jotform_and_forms_gle():
    hits, _ = _hits(urls=["https://form.jotform.com/230012345", "https://forms.gle/AbCd12"])
    kinds = [k for k, _ in hits]
    assert kinds == [ChannelKind.FORM, ChannelKind.FORM]


def test_docs_google_requires_forms_path():
    assert classify_url("https://docs.google.com/document/d/1", RULES) is None
    assert classify_url("https://docs.google.com/forms/d/e/A/viewform", RULES) is not None


def test_twitter_dm_url_variants():
    kind, ident = classify_url(
        "https://twitter.com/messages/compose?recipient_id=99887", RULES)
    assert kind is ChannelKind.TWITTER_DM and ident == "99887"
    assert classify_url("https://twitter.com/someuser/status/1", RULES) is None


def test_unmatched_urls_are_reported_and_disjoint():
    result = extract_channels("see https://example.com/page and t.me",
                              ["https://instagram.com/fixer"], RULES,
                              interaction_id="i1", at=5)
    matched = {c.raw for c in result.channels}
    assert "https://example.com/page" in result.unmatched_urls
    assert not (set(result.unmatched_urls) & matched)


def test_extract_channels_dedupes_by_kind_identifier():
    result = extract_channels(
        "mail a@b.com or A@b.com", ["https://instagram.com/x", "https://instagram.com/x"],
        RULES, interaction_id="i1", at=1)
    keys = [(c.kind, c.identifier) for c in result.channels]
    assert len(keys) == len(set(keys)) == 2


# --- wallet attribution -------------------------------------------------------

def test_attribute_wallet_keyword_beats_context():
    got = attribute_wallet("metamask.fix22@gmail.com", WalletKind.COINBASE, RULES)
    assert got is WalletKind.METAMASK


def test_attribute_wallet_falls_back_to_context():
    got = attribute_wallet("help.desk77@gmail.com", WalletKind.LEDGER, RULES)
    assert got is WalletKind.LEDGER


def test_attribute_wallet_longest_keyword_wins():
    got = attribute_wallet("trustwallet-metamask@x.com", WalletKind.FREE, RULES)
    assert got is WalletKind.TRUSTWALLET


def test_rules_must_cover_all_wallets():
    with pytest.raises(ValueError):
        ExtractionRuleSet("e", "u", {}, {}, {}, [], {"metamask": WalletKind.METAMASK})


# --- corpus-level -------------------------------------------------------------

def _interaction(n, actor, text, urls=(), kind=InteractionKind.REPLY, at=None):
    return Interaction(f"i{n:03d}", kind, actor, "t1", None, text, list(urls),
                       Source.IPHONE, "en", at if at is not None else n)


def test_extract_uses_skips_textless_kinds():
    likes = Interaction("i1", InteractionKind.LIKE, "a", "t1", None, None, [],
                        Source.IPHONE, "en", 1)
    uses = extract_uses([likes], RULES)
    assert uses == []


def test_merge_channels_unions_observations():
    interactions = [
        _interaction(1, "a", "mail me at Fix.It@GMAIL.com", at=100),
        _interaction(2, "b", "mail me at fixit@gmail.com", at=50),
    ]
    uses = extract_uses(interactions, RULES)
    merged = merge_channels(uses, RULES, {"t1": WalletKind.EXODUS})
    assert len(merged) == 1
    ch = merged[0]
    assert ch.identifier == "fixit@gmail.com"
    assert ch.first_seen == 50 and ch.last_seen == 100
    assert ch.observed_in == {"i001", "i002"}
    assert ch.wallet_attribution is WalletKind.EXODUS


def test_extraction_idempotent_over_repeats():
    itx = _interaction(1, "a", "mail me at fix@x.com")
    once = merge_channels(extract_uses([itx], RULES), RULES)
    twice = merge_channels(extract_uses([itx, itx], RULES), RULES)
    assert [(c.kind, c.identifier) for c in once] == \
           [(c.kind, c.identifier) for c in twice]


def test_distribution_counts_distinct_identifiers():
    def chan(kind, ident, seen):
        return ContactChannel(kind, ident, ident, None, 0, 0, seen)

    rows = channel_distribution([
        chan(ChannelKind.EMAIL, "a@b.com", {"i1"}),
        chan(ChannelKind.EMAIL, "a@b.com", {"i2"}),
        chan(ChannelKind.FORM, "https://forms.gle/x", {"i3"}),
    ], honey_interaction_ids={"i1", "i3"})
    by = {r["channel"]: r for r in rows}
    assert by["Email"]["total"] == 1  # same identifier twice
    assert by["Form"]["honey_profiles"] == 1
    assert by["All"]["total"] == sum(
        r["total"] for r in rows if r["channel"] != "All")


def test_distribution_empty_is_all_zeros():
    rows = channel_distribution([])
    assert all(r["total"] == 0 and r["honey_profiles"] == 0 for r in rows)


@given(st.lists(st.sampled_from([
    "https://instagram.com/aa", "https://t.me/bbb", "https://example.org/x",
    "https://wa.me/1234567", "https://docs.google.com/forms/d/e/q/viewform",
    "https://unknown.io/", "https://forms.gle/zz"]), max_size=8))
def test_no_url_is_both_matched_and_unmatched(urls):
    hits, unmatched = extract_raw(None, urls, RULES)
    matched_raw = {raw for _, _, raw in hits}
    assert not (set(unmatched) & matched_raw)
    # every input URL is accounted for one way or the other
    for url in urls:
        assert url in matched_raw or url in unmatched
