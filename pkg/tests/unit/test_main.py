import pytest

from main import build_parser, main

RUN = "law = burgers\nscenario = riemann\ncells = 4\nslabs = 2\np = 1\nt_final = 0.125\n"


@pytest.fixture
def config_file(tmp_path):
    def write(text):
        path = tmp_path / "run.cfg"
        path.write_text(text, encoding="utf-8")
        return str(path)

    return write


def test_parser_defaults():
    args = build_parser().parse_args(["verify-lemma"])
    assert (args.p, args.q, args.trials, args.seed, args.dim) == ([1, 2, 3], [2, 4, 6, 8], 1000, 0, 1)


def test_run_succeeds(tmp_path, config_file):
    assert main(["run", config_file(RUN), "--out", str(tmp_path / "out")]) == 0
    assert (tmp_path / "out" / "summary.txt").is_file()


def test_run_failure_exits_nonzero(tmp_path, config_file):
    assert main(["run", config_file(RUN + "max_iter = 1\n"), "--out", str(tmp_path / "out")]) == 1


def test_invalid_config_exits_with_usage_error(tmp_path, config_file, caplog):
    assert main(["run", config_file(RUN + "beta = 0.6\n"), "--out", str(tmp_path)]) == 2
    assert "beta must lie in (0, 0.5)" in caplog.text


def test_missing_config_file(tmp_path):
    assert main(["run", str(tmp_path / "absent.cfg")]) == 2


def test_verify_lemma_writes_report(tmp_path):
    assert main(["verify-lemma", "--p", "1,2", "--q", "2,4", "--trials", "50", "--out", str(tmp_path)]) == 0
    assert len((tmp_path / "lemma.txt").read_text(encoding="utf-8").splitlines()) == 4


def test_sweep_command(tmp_path, config_file):
    assert main(["sweep", config_file(RUN), "--refine", "2", "--out", str(tmp_path / "sweep")]) == 0
    assert (tmp_path / "sweep" / "sweep.csv").is_file()
