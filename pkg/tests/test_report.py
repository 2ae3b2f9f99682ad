"""Efficacy tables, lifespan curves, emission determinism, and the audit."""

import pytest

from conman.core import (AccountStatus, ChannelKind, ContactChannel, HoneyTweet,
                         Interaction, InteractionKind, ScamAccount, Source,
                         StatusKind, WalletKind)
from conman.report import (EfficacyRow, ProbeOutcome, ProbeResult, ReportError,
                           ReportInputs, audit_report, blocking_table, emit_report,
                           form_blocking_breakdown, lifespan_curves)
from conman.stats import pct


def _probe(kind, ident, outcome, at=100):
    return ProbeResult(kind, ident, at, ProbeOutcome.parse(outcome))


def _acct(acct_id, terminal=None, day=0, first=0):
    history = [AccountStatus(StatusKind.ACTIVE, first)]
    if terminal:
        history.append(AccountStatus(StatusKind.parse(terminal),
                                     first + day * 86400))
    return ScamAccount(acct_id, acct_id, 0, status_history=history)


def test_reference_scale_rounding():
    assert pct(6423, 9149) == 70.20
    assert pct(2531, 9149) == 27.66


def test_blocking_all_blocked_is_100():
    probes = [_probe(ChannelKind.EMAIL, f"e{i}@x.com", "Blocked") for i in range(4)]
    rows = blocking_table(probes, [])
    email = next(r for r in rows if r.platform == "Email")
    assert email.blocked_pct == 100.0


def test_blocking_zero_probe_platform_omitted():
    probes = [_probe(ChannelKind.EMAIL, "e@x.com", "Alive")]
    rows = blocking_table(probes, [])
    assert {r.platform for r in rows} == {"Email", "All"}


def test_blocking_latest_probe_decides():
    probes = [_probe(ChannelKind.FORM, "f", "Alive", at=10),
              _probe(ChannelKind.FORM, "f", "Blocked", at=20)]
    rows = blocking_table(probes, [])
    form = next(r for r in rows if r.platform == "Form")
    assert form.blocked == 1


def test_blocking_twitter_row_uses_suspensions():
    accounts = [_acct("a", "Suspended", 3), _acct("b", "NotFound", 4), _acct("c")]
    rows = blocking_table([], accounts)
    twitter = next(r for r in rows if r.platform == "Twitter")
    assert (twitter.total, twitter.blocked) == (3, 1)


def test_efficacy_row_validates():
    with pytest.raises(ReportError):
        EfficacyRow("x", 1, 2)


def test_lifespan_all_suspended_day_zero():
    accounts = [_acct(f"a{i}", "Suspended", 0) for i in range(5)]
    rows = lifespan_curves(accounts, {a.account_id: 0 for a in accounts})
    assert rows[0] == {"day": 0, "suspended_pct": 100.0, "deactivated_pct": 0.0}


def test_lifespan_monotone_and_final_shares():
    accounts = ([_acct(f"s{i}", "Suspended", i) for i in range(7)]
                + [_acct(f"d{i}", "NotFound", i + 1) for i in range(2)]
                + [_acct("alive")])
    first = {a.account_id: 0 for a in accounts}
    rows = lifespan_curves(accounts, first)
    sus = [r["suspended_pct"] for r in rows]
    dea = [r["deactivated_pct"] for r in rows]
    assert sus == sorted(sus) and dea == sorted(dea)
    assert rows[-1]["suspended_pct"] == pct(7, 10)
    assert rows[-1]["deactivated_pct"] == pct(2, 10)


def _form_channel(ident, wallet=None):
    return ContactChannel(ChannelKind.FORM, ident, ident, wallet, 0, 0, {"i"})


def test_form_breakdown_splits_providers():
    channels = [
        _form_channel("https://docs.google.com/forms/d/e/a/viewform",
                      WalletKind.COINBASE),
        _form_channel("https://docs.google.com/forms/d/e/b/viewform",
                      WalletKind.COINBASE),
        _form_channel("https://form.jotform.com/1", WalletKind.TRUSTWALLET),
    ]
    probes = [_probe(ChannelKind.FORM, channels[0].identifier, "Blocked"),
              _probe(ChannelKind.FORM, channels[1].identifier, "Alive"),
              _probe(ChannelKind.FORM, channels[2].identifier, "Alive")]
    rows = form_blocking_breakdown(channels, probes)
    google_all = next(r for r in rows
                      if r["provider"] == "GoogleForms" and r["wallet"] == "All")
    assert google_all == {"provider": "GoogleForms", "wallet": "All", "total": 2,
                          "blocked": 1, "blocked_pct": 50.0}
    assert any(r["provider"] == "JotForm" for r in rows)


def test_form_breakdown_empty():
    assert form_blocking_breakdown([], []) == []


# --- emit + audit -------------------------------------------------------------------

def _tweet(n):
    sentences = ["Hey!", "My MetaMask wallet needs help.", "asap!"]
    return HoneyTweet(f"t{n:03d}", "hp0", WalletKind.METAMASK, sentences,
                      ["#MetaMaskhelp"], " ".join(sentences + ["#MetaMaskhelp"]),
                      1000 + 900 * n)


def _reply(n, actor, at):
    return Interaction(f"i{n:03d}", InteractionKind.REPLY, actor, f"t{n % 3:03d}",
                       None, "reach me at fix@x.com", [], Source.IPHONE, "en", at)


def _inputs():
    accounts = [_acct("s1", "Suspended", 2, first=2000), _acct("s2"), _acct("b1")]
    interactions = [_reply(0, "s1", 2000), _reply(1, "s2", 2500),
                    _reply(2, "b1", 2600)]
    channel = ContactChannel(ChannelKind.EMAIL, "fix@x.com", "fix@x.com",
                             WalletKind.METAMASK, 2000, 2500, {"i000", "i001"})
    return ReportInputs(
        accounts=accounts, scam_ids={"s1", "s2"}, tweets=[_tweet(n) for n in range(3)],
        interactions=interactions, channels=[channel],
        distribution_rows=[{"channel": "Email", "honey_profiles": 1, "total": 1},
                           {"channel": "All", "honey_profiles": 1, "total": 1}],
        probes=[_probe(ChannelKind.EMAIL, "fix@x.com", "Blocked")])


def test_emit_then_audit_clean(tmp_path):
    emit_report(_inputs(), tmp_path / "report")
    assert audit_report(tmp_path / "report") == []


def test_emit_is_byte_stable(tmp_path):
    emit_report(_inputs(), tmp_path / "a")
    emit_report(_inputs(), tmp_path / "b")
    for path in sorted((tmp_path / "a").iterdir()):
        other = tmp_path / "b" / path.name
        assert path.read_bytes() == other.read_bytes(), path.name


def test_emit_empty_pipeline_headers_only(tmp_path):
    inputs = ReportInputs(accounts=[], scam_ids=set(), tweets=[],
                          interactions=[], channels=[])
    emit_report(inputs, tmp_path / "report")
    table1 = (tmp_path / "report" / "table1_interactions.csv").read_text()
    lines = table1.strip().splitlines()
    assert lines[0].startswith("mode,")
    # only the per-mode zero rows and the Total row, all zeros
    assert all(line.split(",")[1] == "0" for line in lines[1:])


def test_emit_rejects_unknown_actor(tmp_path):
    inputs = _inputs()
    inputs.interactions.append(_reply(9, "ghost", 3000))
    with pytest.raises(ReportError):
        emit_report(inputs, tmp_path / "report")


def test_audit_catches_tampering(tmp_path):
    emit_report(_inputs(), tmp_path / "report")
    eff = tmp_path / "report" / "efficacy.csv"
    text = eff.read_text().replace("100.00", "90.00")
    eff.write_text(text)
    problems = audit_report(tmp_path / "report")
    assert problems and "efficacy" in problems[0]


def test_interaction_mode_table_counts_follow_tweets(tmp_path):
    follow = Interaction("i500", InteractionKind.FOLLOW, "s1", None, "hp0",
                         None, [], Source.IPHONE, "en", 2100)
    inputs = _inputs()
    inputs.interactions.append(follow)
    emit_report(inputs, tmp_path / "report")
    rows = (tmp_path / "report" / "table1_interactions.csv").read_text().splitlines()
    follow_row = next(r for r in rows if r.startswith("Follow"))
    # the following account interacted with one distinct tweet via replies
    assert follow_row.split(",")[3] == "1"


def test_form_blocking_reference_arithmetic():
    assert pct(15, 159) == 9.43
    # printed sources truncate; half-up lands within 0.01
    assert abs(pct(186, 228) - 81.57) <= 0.01 + 1e-9


def test_table1_has_five_modes_plus_total(tmp_path):
    emit_report(_inputs(), tmp_path / "report")
    rows = (tmp_path / "report" / "table1_interactions.csv").read_text().splitlines()
    assert [r.split(",")[0] for r in rows[1:]] == \
        ["Replies", "Retweets", "Quoted Tweets", "Likes", "Follow", "Total"]


def test_lifespan_converges_within_horizon_on_sim_output():
    from conman.core import HoneyProfile
    from conman.lure import schedule_posts
    from conman.simulate import SimConfig, run_sim

    profiles = [HoneyProfile(f"hp{i}", f"h{i}", "fan", 0) for i in range(4)]
    plan = schedule_posts(profiles, 40, start=1_665_705_600, interval=900, seed=2)
    output = run_sim(SimConfig(seed=2, n_scammers=120, horizon_days=90), plan)
    first = {}
    for itx in output.interactions:
        first[itx.actor] = min(first.get(itx.actor, itx.at), itx.at)
    rows = lifespan_curves(output.accounts, first)
    assert rows[-1]["day"] <= 90
    terminal = [a.terminal_status() for a in output.accounts if a.account_id in first]
    n = len([a for a in output.accounts if a.account_id in first])
    suspended = sum(1 for t in terminal if t and t.status is StatusKind.SUSPENDED)
    deactivated = sum(1 for t in terminal if t and t.status is StatusKind.NOT_FOUND)
    assert rows[-1]["suspended_pct"] == pct(suspended, n)
    assert rows[-1]["deactivated_pct"] == pct(deactivated, n)
