import json

import pytest
from click.testing import CliRunner

from app import cli
from core.document import dump, empty, load
from core.field import Field
from core.random_data import compensated_algebra, rng_for
from core.workbench import Workbench

from .conftest import write_doc


@pytest.fixture
def runner():
    return CliRunner()


@pytest.fixture
def module_data(upper_triangular_data):
    """Upper triangular matrices as a right module over themselves."""
    upper_triangular_data["modules"] = {
        "M": {"complex": "A", "algebra": "U", "side": "right", "ops": {"2": "m2"}, "bound": 2}
    }
    return upper_triangular_data


def _report(result):
    return json.loads(result.output)


def test_check_twisted_passes_on_the_cone(runner, tmp_path, cone_data):
    path = write_doc(tmp_path, "cone.dgj", cone_data)
    result = runner.invoke(cli, ["check", "twisted", path])
    assert result.exit_code == 0, result.output
    report = _report(result)
    assert report["command"] == "check twisted"
    assert report["status"] == "pass"
    assert report["window"] == [0, 1]
    assert report["details"]["shape"]["bounded"] is True


def test_check_twisted_fails_with_a_witness(runner, tmp_path, broken_data):
    path = write_doc(tmp_path, "broken.dgj", broken_data)
    result = runner.invoke(cli, ["check", "twisted", path])
    assert result.exit_code == 1
    report = _report(result)
    assert report["status"] == "fail"
    assert report["witness"]["i"] == 0
    assert report["witness"]["j"] == 1


def test_check_dg_without_quivers(runner, tmp_path, cone_data):
    path = write_doc(tmp_path, "cone.dgj", cone_data)
    result = runner.invoke(cli, ["check", "dg", path])
    assert result.exit_code == 0
    assert _report(result)["details"]["complexes"] == ["C"]


def test_missing_document_is_an_error(runner, tmp_path):
    result = runner.invoke(cli, ["check", "twisted", str(tmp_path / "nowhere.dgj")])
    assert result.exit_code == 2
    report = _report(result)
    assert report["status"] == "error"
    assert "cannot read" in report["detail"]


def test_convolving_a_broken_complex_reports_the_cell(runner, tmp_path, broken_data):
    path = write_doc(tmp_path, "broken.dgj", broken_data)
    result = runner.invoke(cli, ["convolve", path])
    assert result.exit_code == 2
    report = _report(result)
    assert report["command"] == "convolve"
    assert report["witness"]["i"] == 0


def test_convolve_writes_the_complex(runner, tmp_path, cone_data):
    path = write_doc(tmp_path, "cone.dgj", cone_data)
    out = tmp_path / "conv.dgj"
    result = runner.invoke(cli, ["convolve", path, "--out", str(out)])
    assert result.exit_code == 0, result.output
    report = _report(result)
    assert report["details"]["dims"] == {"0": 1, "1": 2, "2": 1}
    assert report["details"]["homology"] == {}
    doc = load(out)
    assert doc.get("complexes", report["details"]["name"]).space.total_dim == 4


def test_rowcol_reflect_of_a_single_cell(runner, tmp_path, cone_data):
    cone_data["bicomplexes"] = {"B": {"objects": [{"cell": [0, 1], "object": "C"}], "arrows": []}}
    path = write_doc(tmp_path, "bi.dgj", cone_data)
    result = runner.invoke(cli, ["rowcol", path, "--mode", "reflect"])
    assert result.exit_code == 0, result.output
    assert _report(result)["details"]["mode"] == "reflect"
    result = runner.invoke(cli, ["check", "bitwisted", path])
    assert result.exit_code == 0


def test_check_algebra_on_upper_triangular_matrices(runner, tmp_path, upper_triangular_data):
    path = write_doc(tmp_path, "ut.dgj", upper_triangular_data)
    result = runner.invoke(cli, ["ainfty", "check-algebra", path, "--max-word", "4"])
    assert result.exit_code == 0, result.output
    report = _report(result)
    assert report["window"] == [1, 4]
    assert report["details"]["name"] == "U"


def test_bar_is_written_on_the_word_window(runner, tmp_path, upper_triangular_data):
    path = write_doc(tmp_path, "ut.dgj", upper_triangular_data)
    result = runner.invoke(cli, ["ainfty", "bar", path, "--max-word", "3"])
    assert result.exit_code == 0, result.output
    report = _report(result)
    assert report["window"] == [-2, 0]
    assert report["details"]["objects"]["-1"] == {"0": 9}


def test_check_module_and_transfer(runner, tmp_path, module_data):
    path = write_doc(tmp_path, "mod.dgj", module_data)
    result = runner.invoke(cli, ["ainfty", "check-module", path, "--max-word", "3"])
    assert result.exit_code == 0, result.output
    out = tmp_path / "transferred.dgj"
    result = runner.invoke(cli, ["transfer", path, "--onto-homology", "--max-word", "3", "--out", str(out)])
    assert result.exit_code == 0, result.output
    report = _report(result)
    assert report["details"]["module"] == "M_transferred"
    assert report["details"]["dims"] == {"0": 3}
    assert "M_transferred" in load(out).names("modules")
    result = runner.invoke(cli, ["transfer", "verify", path, "--onto-homology", "--max-word", "3"])
    assert result.exit_code == 0, result.output


def test_transfer_needs_a_retract(runner, tmp_path, module_data):
    path = write_doc(tmp_path, "mod.dgj", module_data)
    result = runner.invoke(cli, ["transfer", path])
    assert result.exit_code == 2
    assert "retract" in _report(result)["detail"]
    result = runner.invoke(cli, ["transfer", "verify"])
    assert result.exit_code == 2


def test_selftest_runs_one_instance(runner):
    result = runner.invoke(cli, ["selftest", "--seed", "3", "--count", "1", "--family", "twisted_d2"])
    assert result.exit_code == 0, result.output
    report = _report(result)
    assert report["details"]["families"] == {"twisted_d2": 1}


def test_selftest_diagrams_and_transfer_families(runner):
    result = runner.invoke(cli, ["selftest", "--seed", "0", "--count", "2", "--family", "diagrams",
                                 "--family", "transfer", "--field", "fp:101"])
    assert result.exit_code == 0, result.output
    assert _report(result)["details"]["families"] == {"diagrams": 2, "transfer": 2}


def test_selftest_default_counts_cover_every_family():
    from core.selftest_mixin import DEFAULT_COUNTS, FAMILIES

    assert set(DEFAULT_COUNTS) == set(FAMILIES)
    assert DEFAULT_COUNTS["twisted_d2"] >= 200
    assert min(DEFAULT_COUNTS.values()) >= 100


def test_verbose_echoes_the_log(runner, tmp_path, cone_data):
    path = write_doc(tmp_path, "cone.dgj", cone_data)
    result = runner.invoke(cli, ["check", "twisted", path, "--verbose"])
    assert result.exit_code == 0
    assert "Checked twisted complex T" in result.output


def test_check_algebra_on_a_compensated_algebra(runner, tmp_path):
    F101 = Field.from_spec("fp:101")
    doc = empty(F101)
    doc.add_algebra("K", compensated_algebra(F101, rng_for(2), bound=4))
    path = tmp_path / "k.dgj"
    dump(doc, path)
    result = runner.invoke(cli, ["ainfty", "check-algebra", str(path), "--max-word", "4"])
    assert result.exit_code == 0, result.output
    assert _report(result)["details"]["bound"] == 4


def test_workbench_logs_failures_with_their_witness(tmp_path, broken_data):
    wb = Workbench()
    path = write_doc(tmp_path, "broken.dgj", broken_data)
    report = wb.check_twisted(path)
    assert wb.last_report is report
    lines = wb.get_logs(command="check twisted")
    assert len(lines) == 2
    assert lines[0].endswith(" ms")
    assert '"i": 0' in lines[1]
    assert wb.get_logs(limit=1) == lines[-1:]
    wb.clear_logs()
    assert wb.get_logs() == []
