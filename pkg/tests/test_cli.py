"""
Command-line front end: outputs and exit codes
"""
import json
from concurrent.futures import ThreadPoolExecutor

import pytest

import hecke.cli as cli
from config.config import SUITES, Config
from hecke.exceptions import ConfigError, InvariantViolation
from hecke.serialize import write_atomic
from hecke.suites import SUITE_FUNCTIONS, SuiteReport
from utils.logger import log

A1_M2 = ["--type", "A1", "--m", "2", "--denominator", "3"]


@pytest.fixture(autouse=True)
def clean_environment(monkeypatch):
    monkeypatch.delenv("HECKE_THREADS", raising=False)
    monkeypatch.setattr(Config, "DEFAULT_FORMAT", "json")
    monkeypatch.setattr(Config, "THREADS", 1)


def run(capsys, *argv):
    code = cli.main(list(argv))
    return code, capsys.readouterr().out


@pytest.mark.smoke
@pytest.mark.critical
class TestCommands:

    @pytest.mark.parametrize("argv, rows", [
        (A1_M2, 4),
        (["--type", "A2", "--m", "1", "--denominator", "1"], 4),
        (["--type", "A1", "--m", "1", "--denominator", "1"], 2),
    ])
    def test_enumerate(self, capsys, argv, rows):
        code, out = run(capsys, "enumerate", *argv)
        doc = json.loads(out)
        assert code == 0
        assert len(doc["twisted_involutions"]) == rows
        assert doc["reconciliation"] == {"block_total": rows, "twisted_involutions": rows, "match": True}
        assert doc["schema_version"] == Config.SCHEMA_VERSION
        log.info(f"✓ enumerate {' '.join(argv)}: {rows} rows")

    def test_enumerate_signs(self, capsys):
        _, out = run(capsys, "enumerate", *A1_M2)
        rows = {(tuple(r["w"]), tuple(r["lambda"])): r for r in json.loads(out)["twisted_involutions"]}
        reflection = rows[((1,), ("0/1",))]
        assert (reflection["z"], reflection["u"], reflection["sign"]) == ([], [1], -1)

    def test_act(self, capsys):
        code, out = run(capsys, "act", *A1_M2, "--gen", "s1")
        doc = json.loads(out)
        assert code == 0
        assert list(doc["tables"]) == ["s1"]
        assert len(doc["tables"]["s1"]) == 4

    def test_canonical_anchor(self, capsys):
        code, out = run(capsys, "canonical", *A1_M2)
        basis = json.loads(out)["canonical_basis"]
        assert code == 0
        hat = {tuple(e["index"]["w"]): e["coeff"] for e in basis["a[s1;0/1]"]}
        assert hat == {(1,): {"lo": 0, "coeffs": [1]}, (): {"lo": -1, "coeffs": [1]}}
        log.info("✓ canonical: hat a_{s,0} = a_{s,0} + v^-1 a_{1,0}")

    def test_canonical_single_orbit(self, capsys):
        code, out = run(capsys, "canonical", *A1_M2, "--orbit", "1/3")
        basis = json.loads(out)["canonical_basis"]
        assert code == 0
        assert sorted(basis) == ["a[1;1/3]", "a[1;2/3]"]

    def test_verify_every_suite_on_a2(self, capsys):
        code, out = run(capsys, "verify", "--type", "A2", "--m", "1", "--denominator", "2")
        doc = json.loads(out)
        assert code == 0 and doc["passed"]
        assert [s["name"] for s in doc["suites"]] == list(SUITES)
        log.info("✓ verify A2 m=1 N=2: every suite passed")

    def test_verify(self, capsys):
        code, out = run(capsys, "verify", "--type", "A2", "--m", "1", "--denominator", "2",
                        "--suites", "braid,quadratic,oracle", "--threads", "2")
        doc = json.loads(out)
        assert code == 0 and doc["passed"]
        assert [s["name"] for s in doc["suites"]] == ["braid", "quadratic", "oracle"]

    def test_ffcheck(self, capsys):
        code, out = run(capsys, "ffcheck", "--q", "3", "--q", "5")
        doc = json.loads(out)
        assert code == 0 and doc["passed"]
        assert [f["q"] for f in doc["fields"]] == [3, 5]

    def test_text_and_csv(self, capsys):
        _, text = run(capsys, "enumerate", *A1_M2, "--format", "text")
        lines = text.splitlines()
        assert lines[0].split() == ["w", "lambda", "z", "u", "sign"]
        assert len(lines) == 2 + 4 + 1
        _, csv_out = run(capsys, "ffcheck", "--q", "3", "--format", "csv")
        assert csv_out.splitlines()[0].startswith("q,status,")
        assert csv_out.splitlines()[1].startswith("3,pass,")

    def test_config_file(self, capsys, tmp_path):
        path = tmp_path / "job.env"
        path.write_text("TYPE=A1\nM=2\nDENOMINATOR=3\nFORMAT=json\n")
        code, out = run(capsys, "enumerate", "--config", str(path))
        assert code == 0
        assert json.loads(out)["type"] == "A1"


@pytest.mark.regression
class TestArtifacts:

    def test_atomic_output_is_reproducible(self, capsys, tmp_path):
        target = tmp_path / "out" / "canonical.json"
        assert cli.main(["canonical", *A1_M2, "--out", str(target)]) == 0
        first = target.read_bytes()
        assert cli.main(["canonical", *A1_M2, "--out", str(target)]) == 0
        assert target.read_bytes() == first
        assert [p.name for p in target.parent.iterdir()] == ["canonical.json"]
        assert capsys.readouterr().out == ""

    def test_concurrent_writers_do_not_share_a_temp_file(self, tmp_path):
        target = tmp_path / "shared.json"
        texts = [f"{k}\n" * 2000 for k in range(8)]
        with ThreadPoolExecutor(max_workers=8) as pool:
            list(pool.map(lambda text: write_atomic(target, text), texts))
        assert target.read_text() in texts
        assert [p.name for p in tmp_path.iterdir()] == ["shared.json"]

    def test_verify_output_is_reproducible(self, capsys):
        _, first = run(capsys, "verify", *A1_M2)
        _, second = run(capsys, "verify", *A1_M2)
        assert first == second


@pytest.mark.regression
class TestExitCodes:

    @pytest.mark.parametrize("argv", [
        ["enumerate", "--type", "A1", "--m", "0"],
        ["enumerate", "--type", "Q9"],
        ["enumerate", "--type", "A1", "--format", "xml"],
        ["frobnicate"],
        ["act", *A1_M2, "--gen", "s4"],
        ["verify", *A1_M2, "--suites", "braid,unknown"],
        ["ffcheck", "--q", "9"],
        ["canonical", *A1_M2, "--orbit", "1/3,0"],
    ])
    def test_usage_errors(self, capsys, argv):
        assert cli.main(argv) == cli.EXIT_USAGE

    def test_malformed_thread_setting(self, capsys, monkeypatch):
        monkeypatch.setenv("HECKE_THREADS", "many")
        assert cli.main(["enumerate", *A1_M2]) == cli.EXIT_USAGE
        assert "HECKE_THREADS" in capsys.readouterr().err

    def test_io_failure(self, tmp_path):
        blocker = tmp_path / "file.txt"
        blocker.write_text("not a directory")
        assert cli.main(["enumerate", *A1_M2, "--out", str(blocker / "x.json")]) == cli.EXIT_IO

    def test_invariant_failure(self, monkeypatch):
        def broken(module, orbit):
            raise InvariantViolation("forced", witness="here")

        monkeypatch.setattr(cli, "canonical_basis", broken)
        assert cli.main(["canonical", *A1_M2]) == cli.EXIT_FAILURE

    def test_failed_suite(self, capsys, monkeypatch):
        monkeypatch.setitem(SUITE_FUNCTIONS, "braid", lambda module: SuiteReport("braid").fail("forced"))
        code, out = run(capsys, "verify", *A1_M2, "--suites", "braid")
        assert code == cli.EXIT_FAILURE
        assert json.loads(out)["suites"][0]["failure"] == "forced"

    def test_generator_parsing(self):
        assert cli.parse_generators("s1, 2", 2) == [1, 2]
        assert cli.parse_generators(None, 3) == [1, 2, 3]
        with pytest.raises(ConfigError):
            cli.parse_generators("t1", 2)
