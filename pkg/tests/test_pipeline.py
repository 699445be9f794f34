import json
import os

import pytest

from twodist.cli import main
from twodist.pipeline import (
    EXIT_ABORT,
    EXIT_FAIL,
    EXIT_PASS,
    Manifest,
    certification_from_results,
    load_certification,
    run_all,
)


@pytest.fixture(scope="module")
def cert_file(tmp_path_factory, certification):
    path = tmp_path_factory.mktemp("cert") / "certified.json"
    payload = certification_from_results(certification["results"])
    path.write_text(json.dumps(payload))
    return str(path)


def _manifest(outdir, cert_file, **kw):
    defaults = dict(
        outdir=str(outdir),
        certification_path=cert_file,
        direct_budget=200_000,  # keep the direct probe short; abort tolerated
        restriction_max_tail=2,
    )
    defaults.update(kw)
    return Manifest(**defaults)


def test_run_all_default_green(tmp_path, cert_file):
    code = run_all(_manifest(tmp_path / "out", cert_file))
    assert code == EXIT_PASS
    names = sorted(os.listdir(tmp_path / "out"))
    assert names == [
        "audit.json",
        "certified.json",
        "gadgets.json",
        "helpers.json",
        "reducibility.json",
        "summary.json",
    ]
    summary = json.loads((tmp_path / "out" / "summary.json").read_text())
    assert summary["exit_code"] == 0
    statuses = {t["task"]: t["status"] for t in summary["tasks"]}
    assert all(v == "pass" for v in statuses.values()), statuses


def test_run_all_mutated_rule_fails_audit(tmp_path, cert_file):
    manifest = _manifest(
        tmp_path / "out", cert_file, mutate_rule="R0(i)", mutate_quarters=-1
    )
    code = run_all(manifest)
    assert code == EXIT_FAIL
    audit = json.loads((tmp_path / "out" / "audit.json").read_text())
    assert audit["all_nonnegative"] is False


def test_run_all_without_certification_refuses_audit(tmp_path):
    manifest = Manifest(
        outdir=str(tmp_path / "out"),
        include_certification=False,
        direct_budget=100_000,
        restriction_max_tail=1,
    )
    code = run_all(manifest)
    assert code == EXIT_FAIL
    audit = json.loads((tmp_path / "out" / "audit.json").read_text())
    assert "refused" in audit
    summary = json.loads((tmp_path / "out" / "summary.json").read_text())
    statuses = {t["task"]: t["status"] for t in summary["tasks"]}
    assert statuses["discharging-audit"] == "fail"


def test_reports_deterministic_modulo_timestamp(tmp_path, cert_file):
    run_all(_manifest(tmp_path / "a", cert_file))
    run_all(_manifest(tmp_path / "b", cert_file))
    for name in ("helpers.json", "audit.json", "gadgets.json", "reducibility.json",
                 "certified.json"):
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()
    sa = json.loads((tmp_path / "a" / "summary.json").read_text())
    sb = json.loads((tmp_path / "b" / "summary.json").read_text())
    sa.pop("generated_at"), sb.pop("generated_at")
    assert sa == sb


def test_certification_artifact_round_trip(tmp_path, certification):
    payload = certification_from_results(certification["results"])
    path = tmp_path / "c.json"
    path.write_text(json.dumps(payload))
    loaded = load_certification(str(path))
    assert all(v == "reducible" for v in loaded.values())
    assert len(loaded) == 32


def test_cli_run_and_report(tmp_path, cert_file, capsys, monkeypatch):
    out = tmp_path / "reports"
    code = main([
        "run",
        "--out",
        str(out),
        "--certification",
        cert_file,
        "--direct-budget",
        "200000",
    ])
    assert code == EXIT_PASS
    capsys.readouterr()
    assert main(["report", "--dir", str(out)]) == EXIT_PASS
    lines = capsys.readouterr().out.splitlines()
    assert any("discharging-audit" in ln and "pass" in ln for ln in lines)


def test_cli_audit_against_artifact(tmp_path, cert_file, capsys):
    assert main(["audit", "--db", cert_file]) == EXIT_PASS
    payload = json.loads(capsys.readouterr().out)
    assert payload["all_nonnegative"] is True
    assert main([
        "audit", "--db", cert_file, "--mutate", "R0(i)", "--mutate-quarters", "-1",
    ]) == EXIT_FAIL
