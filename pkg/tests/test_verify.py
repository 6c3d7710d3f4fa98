import pytest

from su2ladders.verify import (REQUIRED_ANCHORS, SuiteConfig,
                               export_report, report_from_json, run_suite)


@pytest.fixture(scope="module")
def default_report():
    return run_suite(SuiteConfig(spins=[1, 2], n_max=4))


def test_default_config_passes(default_report):
    assert default_report.overall_pass
    assert default_report.failed_count == 0
    assert len(default_report.checks) > 100


def test_registry_covers_required_anchors(default_report):
    anchors = {c.anchor for c in default_report.checks}
    missing = REQUIRED_ANCHORS - anchors
    assert not missing, f"uncovered anchors: {sorted(missing)}"


def test_checks_run_in_stable_order(default_report):
    again = run_suite(SuiteConfig(spins=[1, 2], n_max=4))
    assert [c.name for c in again.checks] == \
        [c.name for c in default_report.checks]


def test_reports_are_byte_identical(default_report):
    again = run_suite(SuiteConfig(spins=[1, 2], n_max=4))
    assert again.to_json() == default_report.to_json()
    assert again.to_csv() == default_report.to_csv()


def test_json_roundtrip(default_report):
    parsed = report_from_json(default_report.to_json())
    assert parsed == default_report.to_json_dict()
    assert parsed["overall_pass"] is True
    assert parsed["counts"]["total"] == len(default_report.checks)


def test_csv_row_count(default_report):
    lines = default_report.to_csv().strip().splitlines()
    assert len(lines) == len(default_report.checks) + 1  # header


def test_wall_times_not_serialized(default_report):
    assert "wall_time" not in default_report.to_json()
    assert any(c.wall_time >= 0 for c in default_report.checks)


def test_export_and_parse(tmp_path, default_report):
    path = tmp_path / "report.json"
    export_report(default_report, str(path))
    assert report_from_json(path.read_text()) == default_report.to_json_dict()
    csv_path = tmp_path / "report.csv"
    export_report(default_report, str(csv_path), "csv")
    assert csv_path.read_text() == default_report.to_csv()


def test_export_io_error_carries_path(default_report):
    with pytest.raises(OSError, match="no/such/dir"):
        export_report(default_report, "/no/such/dir/report.json")


def test_degenerate_nmax_records_empty_restrictions():
    report = run_suite(SuiteConfig(spins=[1], n_max=1))
    assert not report.overall_pass
    empties = [c for c in report.checks
               if "empty restriction" in c.detail]
    assert empties, "budget-2 checks should report empty restrictions"
    assert all(not c.passed for c in empties)


def test_config_validation():
    with pytest.raises(ValueError):
        run_suite(SuiteConfig(spins=[], n_max=4))
    with pytest.raises(ValueError):
        run_suite(SuiteConfig(spins=[0], n_max=4))
    with pytest.raises(ValueError):
        run_suite(SuiteConfig(spins=[1], n_max=0))
    with pytest.raises(ValueError):
        run_suite(SuiteConfig(spins=[1], n_max=4, output_format="xml"))


def test_tolerance_override_can_force_failure():
    config = SuiteConfig(spins=[1], n_max=3,
                         tolerance_overrides={"su2-commutators": 1e-30})
    report = run_suite(config)
    failed = {c.name for c in report.checks if not c.passed}
    assert "su2-commutators" in failed


def test_global_default_tolerance_applies():
    config = SuiteConfig(spins=[1], n_max=3, default_tolerance=1e-30)
    report = run_suite(config)
    assert not report.overall_pass


def test_parallelism_hint_does_not_change_report():
    a = run_suite(SuiteConfig(spins=[1], n_max=3, parallelism=1))
    b = run_suite(SuiteConfig(spins=[1], n_max=3, parallelism=8))
    da, db = a.to_json_dict(), b.to_json_dict()
    da["config"].pop("parallelism")
    db["config"].pop("parallelism")
    assert da == db


def test_discrepancy_ledger_is_populated(default_report):
    topics = {d["topic"] for d in default_report.discrepancies}
    assert "closure-matrix-variant" in topics
    assert "s1-unrestricted-closure-correction" in topics
    assert "s1-lowering-ladder-factor-placement" in topics
    assert "s1-bracket-ladder-pairing" in topics


def test_spin3_reports_trivial_kernel_counterexamples():
    report = run_suite(SuiteConfig(spins=[3], n_max=4))
    assert report.overall_pass
    topics = {d["topic"] for d in report.discrepancies}
    assert "trivial-kernel-counterexample" in topics
