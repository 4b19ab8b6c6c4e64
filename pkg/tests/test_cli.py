import json
import subprocess
import sys

import pytest

from padicjc.cli import main
from padicjc.padic import parse_scalar


@pytest.fixture(autouse=True)
def _restore_precision(monkeypatch):
    # main() exports the resolved precision; keep it from leaking into other tests
    monkeypatch.delenv("PADICJC_PRECISION", raising=False)


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


class TestDocumentedExamples:
    def test_eval(self, capsys):
        code, out, _ = run(capsys, "eval", "--prime", "3", "--point", "0,0,1,0,0")
        assert code == 0 and out.strip() == '{"j":"1","h":"0"}'

    def test_image(self, capsys):
        code, out, _ = run(capsys, "image", "--prime", "2", "--j", "6", "--h", "1/2")
        assert code == 0
        assert out.strip() == '{"verdict":"NotInImage","reason":"ord(j)>=1 requires ord(h)>=0"}'

    def test_orbits(self, capsys):
        code, out, _ = run(capsys, "orbits", "--prime", "5", "--k", "1", "--r", "0")
        assert code == 0 and out.strip() == '{"count":4}'


class TestSubcommands:
    def test_classify(self, capsys):
        code, out, _ = run(capsys, "classify", "--prime", "5", "--point", "0,0,-1,0,0")
        assert code == 0 and json.loads(out)["variant"] == "Rank0"

    def test_fiber(self, capsys):
        code, out, _ = run(capsys, "fiber", "--prime", "5", "--j", "1", "--h", "0")
        assert code == 0 and json.loads(out)["variant"] == "SingularAlongFourLines"

    def test_witness_round_trip(self, capsys):
        code, out, _ = run(capsys, "image", "--prime", "3", "--j", "23", "--h", "0")
        data = json.loads(out)
        assert code == 0 and data["verdict"] == "InImage"
        for s in data["witness"]:
            x = parse_scalar(3, s)
            assert x.to_string() == s

    def test_spin_range(self, capsys):
        code, out, _ = run(capsys, "spin", "--prime", "3", "--range", "0", "5")
        rows = json.loads(out)
        assert code == 0 and len(rows) >= 5

    def test_normal_form(self, capsys):
        code, out, _ = run(capsys, "normal-form", "--prime", "5", "--pole", "-1")
        assert code == 0 and json.loads(out)

    def test_flow(self, capsys):
        code, out, _ = run(capsys, "flow", "--prime", "5", "--x0", "1", "--y0", "0", "--degree", "2")
        assert code == 0 and "-2" in out

    def test_viz_matches_golden(self, capsys):
        from padicjc.verification import golden_bytes

        code, out, _ = run(
            capsys, "viz", "--prime", "2", "--dataset", "fiber", "--j", "22", "--h", "1", "--mod-exp", "6", "--depth", "6"
        )
        assert code == 0 and out.encode() == golden_bytes("fiber_22_1_p2.csv")

    def test_oracle(self, capsys):
        code, out, _ = run(capsys, "oracle", "--prime", "3", "--task", "orbits", "--mod-exp", "6", "--k", "1", "--r", "0")
        assert code == 0 and json.loads(out)["count"] == 4

    def test_global_flags_before_subcommand(self, capsys):
        code, out, _ = run(capsys, "--prime", "5", "orbits", "--k", "1", "--r", "0")
        assert code == 0 and json.loads(out) == {"count": 4}


class TestErrors:
    def test_usage(self, capsys):
        code, _, err = run(capsys, "eval", "--prime", "4", "--point", "0,0,1,0,0")
        assert code == 1 and err
        code, _, _ = run(capsys, "nosuch")
        assert code == 1
        code, _, _ = run(capsys, "eval", "--prime", "3", "--precision", "4", "--point", "0,0,1,0,0")
        assert code == 1

    def test_domain_error(self, capsys):
        code, out, _ = run(capsys, "viz", "--prime", "7", "--dataset", "critical-set")
        assert code == 2
        err = json.loads(out)
        assert set(err) == {"error", "module", "operation", "input", "message"}
        assert err["error"] == "UnsupportedPrime"

    def test_precision_env(self, capsys, monkeypatch):
        monkeypatch.setenv("PADICJC_PRECISION", "12")
        code, out, _ = run(capsys, "image", "--prime", "5", "--j", "23", "--h", "0")
        assert code == 0
        monkeypatch.setenv("PADICJC_PRECISION", "3")
        code, _, _ = run(capsys, "image", "--prime", "5", "--j", "23", "--h", "0")
        assert code == 1


def test_module_entry_and_verify(tmp_path):
    proc = subprocess.run(
        [sys.executable, "-m", "padicjc", "verify", "--quick"],
        capture_output=True,
        text=True,
        cwd=tmp_path,
        timeout=600,
    )
    assert proc.returncode == 0, proc.stderr
    data = json.loads(proc.stdout)
    assert data["passed"] and [r["criterion"] for r in data["results"]] == list(range(1, 13))
    assert "[PASS] criterion 11" in proc.stderr
    version = subprocess.run([sys.executable, "-m", "padicjc", "--version"], capture_output=True, text=True)
    assert "schema 1" in version.stdout
