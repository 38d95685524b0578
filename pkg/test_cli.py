#!/usr/bin/env python3
"""
Test Command Line

Statuses, exit codes, reports written to disk and the configuration layer.
"""

import json
import sys
from pathlib import Path

import pytest
from pydantic import ValidationError

# Add src to path
sys.path.insert(0, str(Path(__file__).parent))

from src.cli import (
    ALIASES,
    EXIT_CODES,
    COMMANDS,
    Report,
    ReportStatus,
    ToolkitConfig,
    main,
    read_report,
    run,
)
from src.cli.runner import parse_window
from src.lattice import FiniteSet
from src.utils.errors import ParseError

CONFIG = ToolkitConfig()
CORPUS = Path(__file__).parent / "corpus"
REPORTS = CORPUS / "reports"


def cli(*argv: str) -> Report:
    return run(list(argv), CONFIG)


def test_every_command_is_registered():
    assert set(COMMANDS) == {
        "simulate", "image", "preinj", "cert-window", "entropy", "mdim", "density",
        "locus", "tiling", "sft-lang", "sft-periodic", "sft-cert-periodic",
    }
    assert ALIASES == {"certB": "cert-window", "sft-certC": "sft-cert-periodic"}


def test_exit_codes():
    assert EXIT_CODES[ReportStatus.PASS] == 0
    assert EXIT_CODES[ReportStatus.COMPLETED] == 0
    assert EXIT_CODES[ReportStatus.FAIL] == 3
    assert EXIT_CODES[ReportStatus.BUDGET_EXCEEDED] == 4
    assert EXIT_CODES[ReportStatus.PRECONDITION_FAILED] == 5
    assert EXIT_CODES[ReportStatus.PARSE_ERROR] == 6


def test_parse_window():
    assert parse_window("-2..2", 1) == FiniteSet.interval(-2, 2)
    assert parse_window("0..1", 2) == FiniteSet.box(0, 1, 2)
    assert parse_window("0..1,3..4", 2) == FiniteSet.rect((0, 3), (1, 4))
    for bad in ("0-3", "3..1", "0..1,0..1,0..1"):
        with pytest.raises(ParseError):
            parse_window(bad, 2)


def test_simulate():
    report = cli("simulate", "--example", "shift-toward-origin", "--window=-4..4", "--cells=-3:1 0:1 2:1")
    assert report.status == ReportStatus.COMPLETED
    assert report.value("output") == [1, 0, 0, 1, 1, 1, 0, 1, 0]
    twice = cli("simulate", "--example", "shift", "--window", "0..2", "--cells", "2:1", "--steps", "2")
    assert twice.value("output") == [1, 0, 0]


def test_simulate_rejects_bad_steps():
    report = cli("simulate", "--example", "identity", "--window", "0..2", "--steps", "0")
    assert report.status == ReportStatus.PRECONDITION_FAILED
    assert report.exit_code == 5


def test_image_counts_and_probe():
    report = cli("image", "--example", "shift-toward-origin", "--window=-2..2", "--probe=-1 0 1")
    assert report.value("image_count") == 8
    assert report.verdicts["open_probe"]["accepted"] == [0, 0, 0]


def test_unknown_example_is_a_parse_error():
    report = cli("image", "--example", "no-such-rule", "--window", "0..1")
    assert report.status == ReportStatus.PARSE_ERROR
    assert report.exit_code == 6
    assert report.error["source"] == "--example"


def test_missing_rule_file_is_a_parse_error(tmp_path):
    report = cli("image", "--rules", str(tmp_path / "missing.nuca"), "--window", "0..1")
    assert report.status == ReportStatus.PARSE_ERROR


def test_rule_file_from_corpus():
    report = cli("image", "--rules", str(CORPUS / "alphabet-collapse.nuca"), "--window", "0..2")
    assert report.value("image_count") == 8


def test_preinj_reports_witness_and_replay():
    report = cli("preinj", "--example", "diagonal-xor", "--bound", "2", "--radius", "3")
    assert report.status == ReportStatus.FAIL
    assert report.exit_code == 3
    assert report.witness["E"] == [[0, -1], [0, 0]]
    assert report.replay.startswith("python -m src.cli preinj --example diagonal-xor")


def test_preinj_on_linear_rules():
    none = cli("preinj", "--linear-example", "xor-sum", "--bound", "3", "--radius", "2")
    assert none.status == ReportStatus.COMPLETED
    assert none.verdicts["search"] == "none_up_to_bound"
    found = cli("preinj", "--linear-example", "zero", "--bound", "1", "--radius", "0")
    assert found.status == ReportStatus.FAIL


def test_preinj_budget_exhaustion():
    report = cli("preinj", "--example", "diagonal-xor", "--bound", "2", "--radius", "1", "--max-support", "1")
    assert report.status == ReportStatus.BUDGET_EXCEEDED
    assert report.exit_code == 4
    assert "size <= 1" in report.error["exhausted"]


def test_cert_window():
    passed = cli("cert-window", "--example", "zero-on-3Z", "--pinned", "coset(3,0)", "--window", "0..5")
    assert passed.status == ReportStatus.PASS
    assert passed.value("expected") == 16
    failed = cli("cert-window", "--example", "alphabet-collapse", "--window", "0..1", "--compare", "2")
    assert failed.status == ReportStatus.FAIL
    assert failed.value("image_count") == 4
    assert failed.witness is not None
    assert failed.verdicts["bound_comparison"]["certificate_failed_at"] == 1


def test_cert_window_answers_to_certb():
    rules = str(CORPUS / "alphabet-collapse.nuca")
    report = cli("certB", "--rules", rules, "--window", "0..1", "--filler", "0")
    assert report.command == "cert-window"
    assert report.status == ReportStatus.FAIL
    assert report.exit_code == 3
    assert (report.value("expected"), report.value("image_count")) == (9, 4)
    assert report.witness is not None
    assert report.replay.split()[3] == "certB"


def test_budget_exceeded_on_large_window():
    report = cli("image", "--example", "xor-pair", "--window", "0..30", "--max-patterns", "64")
    assert report.status == ReportStatus.BUDGET_EXCEEDED
    assert report.error["limit"] == 64


def test_entropy_sources():
    full = cli("entropy", "--full-shift", "2", "--n-max", "2")
    assert full.value("count[n=2]") == 32
    sft = cli("entropy", "--sft-example", "hard-square", "--n-max", "1")
    labels = {v.name: v.exact for v in sft.values}
    assert labels["count[n=1]"] is False
    image = cli("entropy", "--example", "alphabet-collapse", "--n-max", "2", "--bracket", "1", "1")
    assert image.value("count[n=1]") == 8
    assert not [v for v in image.values if v.name == "bracket_low"][0].exact


def test_mdim():
    report = cli("mdim", "--linear-example", "identity-except-3Z", "--n-max", "3")
    assert report.value("ratio[n=1]") == "2/3"
    assert report.value("ratio[n=2]") == "4/5"


def test_density_and_laws():
    report = cli("density", "--set", "coset(2,1)")
    assert report.status == ReportStatus.COMPLETED
    assert report.value("upper_natural") == "1/2"
    assert report.verdicts["method"] == "periodic"
    laws = cli("density", "--set", "coset(2,1)", "--other", "finite{0,1}")
    assert laws.status == ReportStatus.PASS


def test_density_parse_error_carries_column():
    report = cli("density", "--set", "coset(2,")
    assert report.status == ReportStatus.PARSE_ERROR
    assert report.error["column"] >= 1


def test_locus():
    report = cli("locus", "--linear-example", "identity-except-3Z", "--region", "0..299", "--shapes", "0..29")
    assert report.status == ReportStatus.PASS
    assert report.value("measured_density") == "1/3"
    assert report.value("kernel_dims") == [10] * 10


def test_tiling_verify_failure_and_pass():
    small = cli("tiling", "--region", "0..99", "--shapes", "0..9")
    assert small.status == ReportStatus.FAIL
    assert small.value("tiles") == 10
    assert small.verdicts["verify"]["interior_subset"] is False
    large = cli("tiling", "--region", "0..10000", "--shapes", "0..99", "--tolerance", "1/20")
    assert large.status == ReportStatus.PASS
    assert large.verdicts["ab_covering"] is True


def test_sft_lang():
    report = cli("sft-lang", "--sft-example", "golden-mean", "--window", "0..4")
    assert report.value("count") == 13
    plane = cli("sft-lang", "--sft-example", "hard-square", "--window", "0..1", "--list")
    assert plane.value("count") == 7
    assert plane.verdicts["padding"] == 1
    assert len(plane.value("patterns")) == 7


def test_sft_periodic():
    report = cli("sft-periodic", "--sft-example", "golden-mean", "--period", "2", "--approx", "2", "1", "3",
                 "--irreducible=-2..2")
    assert report.status == ReportStatus.PASS
    assert report.value("periodic_count") == 3
    assert report.value("k") == 12
    assert report.value("period") == 28
    failing = cli("sft-periodic", "--sft-example", "period-two", "--irreducible=-2..2")
    assert failing.status == ReportStatus.FAIL
    assert failing.witness["irreducibility"]["T"] == [[3]]
    nothing = cli("sft-periodic", "--sft-example", "golden-mean")
    assert nothing.status == ReportStatus.PRECONDITION_FAILED


def test_sft_cert_periodic():
    report = cli("sft-cert-periodic", "--sft-example", "full-shift-3", "--example", "alphabet-collapse",
                 "--pinned", "finite{0}", "--n", "1", "--n0", "2", "--r", "1")
    assert report.status == ReportStatus.FAIL
    assert report.value("period") == 4
    assert report.witness["period"] == 4


def test_sft_cert_periodic_answers_to_sft_certc():
    report = cli("sft-certC", "--sft-example", "golden-mean", "--example", "shift",
                 "--pinned", "finite{0}", "--n", "2", "--n0", "2", "--r", "1")
    assert report.command == "sft-cert-periodic"
    assert report.status == ReportStatus.PASS
    assert (report.value("k"), report.value("period")) == (6, 16)
    assert report.verdicts["chain_holds"]


def test_report_written_and_read_back(tmp_path):
    target = tmp_path / "out" / "report.json"
    report = cli("density", "--set", "coset(3,0)", "--output", str(target))
    assert target.exists()
    again = read_report(target)
    assert again.status == report.status
    assert again.value("upper_natural") == "1/3"
    assert again.schema_version == 1
    assert "total_seconds" in again.timings
    assert not list(target.parent.glob("*.tmp"))


def test_every_corpus_file_has_a_reference_report():
    shipped = {f"{path.name}.json" for path in CORPUS.iterdir() if path.is_file()}
    assert shipped == {path.name for path in REPORTS.glob("*.json")}
    for path in REPORTS.glob("*.json"):
        assert f"corpus/{path.stem}" in read_report(path).argv


@pytest.mark.parametrize("path", sorted(REPORTS.glob("*.json")), ids=lambda path: path.stem)
def test_corpus_reference_reports_reproduce(path, monkeypatch):
    monkeypatch.chdir(Path(__file__).parent)
    expected = path.read_text(encoding="utf-8")
    recorded = read_report(path)
    assert cli(*recorded.argv).to_reference_json() == expected


def test_reference_json_drops_timings():
    report = cli("density", "--set", "coset(2,0)")
    assert "total_seconds" in report.timings
    assert "timings" not in json.loads(report.to_reference_json())
    assert json.loads(report.to_json())["timings"]


def test_main_prints_json(capsys):
    code = main(["density", "--set", "coset(2,0)", "--json"])
    assert code == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["command"] == "density"
    assert payload["status"] == "COMPLETED"


def test_main_prints_summary_and_exit_code(capsys):
    code = main(["cert-window", "--example", "alphabet-collapse", "--window", "0..1"])
    assert code == 3
    out = capsys.readouterr().out
    assert out.startswith("cert-window: FAIL")
    assert "replay:" in out


def test_argparse_errors_exit_with_two():
    with pytest.raises(SystemExit) as caught:
        run([], CONFIG)
    assert caught.value.code == 2
    with pytest.raises(SystemExit) as caught:
        run(["image", "--example", "identity", "--window", "0..1", "--max-patterns", "0"], CONFIG)
    assert caught.value.code == 2


def test_config_validation():
    with pytest.raises(ValidationError):
        ToolkitConfig(max_patterns=0)
    with pytest.raises(ValidationError):
        ToolkitConfig(log_level="LOUD")
    assert ToolkitConfig(log_level="debug").log_level == "DEBUG"
    assert CONFIG.with_overrides(max_window=None).max_window == 4096


def test_config_from_env(monkeypatch):
    monkeypatch.setenv("NUCA_MAX_SUPPORT", "3")
    monkeypatch.setenv("NUCA_SEED", "7")
    config = ToolkitConfig.from_env()
    assert config.max_support == 3
    assert config.seed == 7
    assert config.budget().max_support == 3


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-v"]))
