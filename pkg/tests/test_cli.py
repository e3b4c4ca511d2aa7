import json

import pytest

from quadric_prolongation.cli import (
    EXIT_FAIL,
    EXIT_INPUT,
    EXIT_OK,
    ReportWriteError,
    RunConfig,
    canonical_json,
    main,
    run_command,
    write_report,
)

HEIS1 = {"n": 1, "k": 1, "mats": [[[["1/1", "0/1"]]]]}
KERNEL = {"n": 2, "k": 1, "mats": [[[["1/1", "0/1"], ["0/1", "0/1"]], [["0/1", "0/1"], ["0/1", "0/1"]]]]}


@pytest.fixture
def form(tmp_path):
    def write(doc, name="pack.json"):
        p = tmp_path / name
        p.write_text(json.dumps(doc))
        return str(p)

    return write


def test_verify_heisenberg(form):
    code, report = run_command(RunConfig("verify", form_path=form(HEIS1)))
    assert code == EXIT_OK
    v = report["verification"]
    assert v["direct_dims"][:5] == [1, 2, 2, 2, 1]
    assert v["prolonged_dims"][:5] == [1, 2, 2, 2, 1]
    assert report["pack"]["form"] == HEIS1


def test_solve_reports_constants(form):
    code, report = run_command(RunConfig("solve", form_path=form(HEIS1)))
    assert code == EXIT_OK
    assert report["dims"] == [1, 2, 2, 2, 1]
    assert report["structure_constants"]
    assert all(isinstance(c[3], str) and "/" in c[3] for c in report["structure_constants"])


def test_prolong_certificate(form):
    code, report = run_command(RunConfig("prolong", form_path=form(HEIS1), max_level=4))
    assert code == EXIT_OK
    assert report["certificate"]["dims"] == [1, 2, 2, 2, 1, 0]
    assert all(report["certificate"]["identities"].values())


def test_prolong_max_level_exhausted(form):
    code, report = run_command(RunConfig("prolong", form_path=form(HEIS1), max_level=2))
    assert code == EXIT_FAIL
    assert "max_level" in report["error"]


def test_solve_degenerate_has_witness(form):
    code, report = run_command(RunConfig("solve", form_path=form(KERNEL)))
    assert code != EXIT_OK
    assert report["nondegeneracy"]["kernel_vector"] == [["0/1", "0/1"], ["1/1", "0/1"]]


def test_missing_file(tmp_path):
    code, report = run_command(RunConfig("solve", form_path=str(tmp_path / "absent.json")))
    assert code == EXIT_INPUT
    assert "absent.json" in report["error"]


def test_parse_error_propagates(form):
    code, report = run_command(RunConfig("verify", form_path=form({"n": 1, "k": 1, "mats": [[[["0/1", "1/1"]]]]})))
    assert code == EXIT_INPUT
    assert "Hermitian" in report["error"]


def test_unknown_suite():
    code, report = run_command(RunConfig("catalog", suite="nope"))
    assert code == EXIT_INPUT


def test_config_validation():
    with pytest.raises(ValueError):
        RunConfig("solve")
    with pytest.raises(ValueError):
        RunConfig("catalog")
    with pytest.raises(ValueError):
        RunConfig("explode", form_path="x")
    with pytest.raises(ValueError):
        RunConfig("prolong", form_path="x", max_level=0)


def test_catalog_one_report_per_pack():
    code, report = run_command(RunConfig("catalog", suite="heisenberg"))
    assert code == EXIT_OK
    assert [r["pack"]["name"] for r in report["reports"]] == ["heisenberg-n1", "heisenberg-n2", "heisenberg-n3"]
    assert all("structure_constants" not in r for r in report["reports"])
    _, with_constants = run_command(RunConfig("catalog", suite="heisenberg", include_constants=True))
    assert all("structure_constants" in r for r in with_constants["reports"])


def test_write_report_roundtrip_and_determinism(tmp_path, form):
    _, report = run_command(RunConfig("solve", form_path=form(HEIS1)))
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    write_report(report, str(a))
    _, again = run_command(RunConfig("solve", form_path=form(HEIS1)))
    write_report(again, str(b))
    assert a.read_bytes() == b.read_bytes()
    assert json.loads(a.read_text()) == report
    assert canonical_json(json.loads(a.read_text())) == a.read_text()


def test_write_report_unwritable(tmp_path):
    target = tmp_path / "missing-dir" / "r.json"
    with pytest.raises(ReportWriteError, match="missing-dir"):
        write_report({"passed": True}, str(target))


def test_main_exit_codes(form, tmp_path, capsys):
    out = tmp_path / "r.json"
    assert main(["verify", "--form", form(HEIS1), "--out", str(out)]) == EXIT_OK
    assert json.loads(out.read_text())["passed"] is True
    assert main(["solve", "--form", form(KERNEL, "k.json"), "--out", str(out)]) == EXIT_FAIL
    assert "common kernel" in capsys.readouterr().err
    with pytest.raises(SystemExit) as info:
        main(["prolong", "--form", form(HEIS1), "--max-level", "0"])
    assert info.value.code == 2
