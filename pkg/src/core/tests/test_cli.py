import json
import logging

from core.cli import EXIT_FAILED, EXIT_INFEASIBLE, EXIT_NEGATIVE, EXIT_OK, main
from core.utils.logger import setup_logging

log = logging.getLogger(__name__)

setup_logging(stream=False, to_file=False)

QUIET = ["--quiet", "--no-log-file"]


def _run(capsys, *argv):
    code = main(QUIET + list(argv))
    return code, capsys.readouterr().out


def test_check_pack_reports_r(capsys):
    code, out = _run(capsys, "check", "--mode", "pack", "--lambda", "1", "--n", "5", "--lengths", "3,3,3")
    report = json.loads(out)
    assert code == EXIT_NEGATIVE
    assert report["admissible"] is False
    assert report["conditions"]["r"] == 1


def test_check_modes(capsys):
    code, _ = _run(capsys, "check", "--mode", "admissible", "--lambda", "2", "--n", "3", "--lengths", "2,2,2")
    assert code == EXIT_OK
    code, _ = _run(capsys, "check", "--mode", "path", "--n", "4", "--lengths", "4")
    assert code == EXIT_NEGATIVE
    code, out = _run(
        capsys, "check", "--mode", "berge", "--n", "38", "--k", "35", "--cycles", "38x221", "--paths", "37,1"
    )
    assert code == EXIT_OK
    assert json.loads(out)["conditions"]["guaranteed"] is True


def test_oracle(capsys):
    assert _run(capsys, "oracle", "--n", "5", "--lengths", "3,3") == (EXIT_OK, "true\n")
    assert _run(capsys, "oracle", "--n", "5", "--lengths", "3,3,3") == (EXIT_NEGATIVE, "false\n")
    assert _run(capsys, "oracle", "--n", "3", "--lengths", "3")[0] == EXIT_OK
    assert _run(capsys, "oracle", "--n", "9", "--lengths", "3")[0] == EXIT_INFEASIBLE


def test_decompose_then_verify(capsys, tmp_path):
    out = tmp_path / "cert.json"
    code, _ = _run(capsys, "decompose", "--n", "5", "--k", "4", "--cycles", "2", "--paths", "3", "--out", str(out))
    assert code == EXIT_OK
    report = json.loads((tmp_path / "cert.report.json").read_text())
    assert report["case"] == "case3"
    assert report["verified"] is True
    assert report["output"] == str(out)

    code, text = _run(capsys, "verify", "--input", str(out), "--cycles", "2", "--paths", "3")
    assert code == EXIT_OK
    assert json.loads(text) == {"ok": True, "violations": []}

    code, text = _run(capsys, "verify", "--input", str(out), "--cycles", "2", "--paths", "2,1")
    assert code == EXIT_NEGATIVE
    assert [v["code"] for v in json.loads(text)["violations"]] == ["LengthMismatch"]


def test_decompose_to_stdout_is_deterministic(capsys):
    argv = ["decompose", "--n", "10", "--k", "8", "--cycles", "10x3,2x2", "--paths", "9,2", "--seed", "9"]
    first = _run(capsys, *argv)
    second = _run(capsys, *argv)
    assert first[0] == EXIT_OK
    assert first == second
    assert json.loads(first[1])["k"] == 8


def test_decompose_dumps_stages(capsys, tmp_path):
    out = tmp_path / "run.json"
    code, _ = _run(
        capsys, "decompose", "--n", "7", "--k", "4", "--paths", "6x5,5", "--out", str(out), "--dump-stages"
    )
    assert code == EXIT_OK
    hp = json.loads((tmp_path / "run.H_P.json").read_text())
    assert hp["branch"] == "hp-paths"
    assert (tmp_path / "run.H_C.json").exists()


def test_decompose_rejects_bad_input(capsys, tmp_path):
    assert _run(capsys, "decompose", "--n", "6", "--k", "3", "--cycles", "21")[0] == EXIT_INFEASIBLE
    assert _run(capsys, "decompose", "--n", "6", "--k", "3", "--hamilton")[0] == EXIT_INFEASIBLE
    assert _run(capsys, "decompose", "--n", "5", "--k", "4", "--cycles", "2,a")[0] == EXIT_INFEASIBLE
    garbage = tmp_path / "garbage.json"
    garbage.write_text("not json")
    assert _run(capsys, "verify", "--input", str(garbage))[0] == EXIT_INFEASIBLE


def test_decompose_hamilton(capsys):
    code, out = _run(capsys, "decompose", "--n", "4", "--k", "3", "--hamilton")
    assert code == EXIT_OK
    assert [len(w["edges"]) for w in json.loads(out)["walks"]] == [4]


def test_graph_decompose(capsys):
    code, out = _run(capsys, "graph-decompose", "--n", "5", "--lengths", "5,5")
    assert code == EXIT_OK
    assert len(json.loads(out)["walks"]) == 2
    code, _ = _run(capsys, "graph-decompose", "--n", "5", "--lengths", "3,3,3")
    assert code == EXIT_INFEASIBLE
    code, out = _run(capsys, "graph-decompose", "--n", "5", "--lengths", "3,3", "--mode", "pack")
    assert code == EXIT_OK
    assert len(json.loads(out)["leave"]) == 4


def test_factorize(capsys):
    code, out = _run(capsys, "factorize", "--n", "4")
    classes = json.loads(out)["classes"]
    assert code == EXIT_OK
    assert len(classes) == 3
    assert all(len(cls) == 2 for cls in classes)
    assert _run(capsys, "factorize", "--n", "2")[0] == EXIT_INFEASIBLE


def test_exit_codes_are_distinct():
    assert len({EXIT_OK, EXIT_NEGATIVE, EXIT_INFEASIBLE, EXIT_FAILED}) == 4
