"""CLI behavior: exit codes, artifacts, fixture mode, output confinement."""

import json
from pathlib import Path

import pytest

from conman.cli import main

FIXTURES = Path(__file__).resolve().parents[1] / "fixtures"

TINY = """
seed = 7
[lure]
lures = 80
[sim]
n_scammers = 25
n_campaigns = 4
benign_rate = 0.2
[embed]
n_embeddings = 80
reduce_to = [2, 4]
linkage_cutoff = [1.0, 2.0]
min_cluster_size = [10, 20]
[chain]
n_wallets = 20
"""


@pytest.fixture(scope="module")
def tiny_run(tmp_path_factory):
    base = tmp_path_factory.mktemp("cli")
    config = base / "tiny.toml"
    config.write_text(TINY, encoding="utf-8")
    out = base / "run"
    assert main(["e2e", "--config", str(config), "--out", str(out)]) == 0
    return base, config, out


def test_e2e_exit_zero_and_artifacts(tiny_run):
    _, _, out = tiny_run
    for name in ("plan.jsonl", "accounts.jsonl", "interactions.jsonl",
                 "verdicts.jsonl", "channels.jsonl", "clusters.jsonl",
                 "groups.jsonl", "assignment.jsonl", "sessions.jsonl",
                 "thefts.jsonl", "report/summary.md"):
        assert (out / name).exists(), name


def test_audit_on_clean_bundle(tiny_run):
    _, _, out = tiny_run
    assert main(["audit", str(out / "report")]) == 0


def test_audit_flags_corruption(tiny_run, tmp_path):
    _, _, out = tiny_run
    corrupted = tmp_path / "report"
    corrupted.mkdir()
    for path in (out / "report").iterdir():
        (corrupted / path.name).write_bytes(path.read_bytes())
    eff = corrupted / "efficacy.csv"
    rows = eff.read_text().splitlines()
    rows[1] = rows[1].rsplit(",", 1)[0] + ",12.34"
    eff.write_text("\n".join(rows) + "\n")
    assert main(["audit", str(corrupted)]) == 1


def test_unknown_flag_is_validation_error(capsys):
    assert main(["e2e", "--bogus"]) == 1
    assert "usage" in capsys.readouterr().err.lower()


def test_bad_config_is_validation_error(tmp_path):
    config = tmp_path / "bad.toml"
    config.write_text("[lure]\ninterval_minutes = 0\n", encoding="utf-8")
    assert main(["lure", "--config", str(config), "--out", str(tmp_path / "o")]) == 1


def test_no_writes_outside_out_dir(tiny_run):
    base, config, out = tiny_run
    entries = {p.name for p in base.iterdir()}
    assert entries == {"tiny.toml", "run"}


def test_extract_subcommand_on_existing_run(tiny_run, capsys):
    _, config, out = tiny_run
    code = main(["extract", "--config", str(config), "--out", str(out),
                 "--in", str(out / "interactions.jsonl"), "--stdout"])
    assert code == 0
    lines = [json.loads(l) for l in capsys.readouterr().out.splitlines()]
    planted = {(r["kind"], r["identifier"])
               for r in map(json.loads,
                            (out / "ground_truth.jsonl").read_text().splitlines())}
    extracted = {(r["kind"], r["identifier"]) for r in lines}
    assert extracted == planted


def test_chain_fixture_mode_reproduces_release_table(tmp_path):
    out = tmp_path / "chain"
    code = main(["chain", "--out", str(out),
                 "--wallets", str(FIXTURES / "honey_wallets.jsonl"),
                 "--eth", str(FIXTURES / "eth_ledger.jsonl"),
                 "--btc", str(FIXTURES / "btc_ledger.jsonl")])
    assert code == 0
    table = json.loads((out / "theft_table.json").read_text())
    assert table["rows"][-1] == {"channel": "All", "sent": 100, "stolen": 35}
    assert table["distinct_recipients"] == 26


def test_seed_flag_overrides_config(tmp_path):
    config = tmp_path / "c.toml"
    config.write_text(TINY, encoding="utf-8")
    a, b = tmp_path / "a", tmp_path / "b"
    assert main(["lure", "--config", str(config), "--out", str(a), "--seed", "1"]) == 0
    assert main(["lure", "--config", str(config), "--out", str(b), "--seed", "2"]) == 0
    assert (a / "plan.jsonl").read_bytes() != (b / "plan.jsonl").read_bytes()


@pytest.mark.parametrize("fmt,ext", [("json", ".json"), ("markdown", ".md")])
def test_report_formats_audit_clean(tiny_run, tmp_path, fmt, ext):
    base, config, _ = tiny_run
    out = tmp_path / fmt
    assert main(["e2e", "--config", str(config), "--out", str(out),
                 "--format", fmt]) == 0
    assert (out / "report" / f"efficacy{ext}").exists()
    assert main(["audit", str(out / "report")]) == 0
