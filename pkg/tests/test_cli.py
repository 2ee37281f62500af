import json
import subprocess
import sys

import pytest

from collatz_phase import cli
from collatz_phase.reports import RunManifest, read_csv

SMALL = {
    "verify": ["--lo", "1", "--hi", "2000"],
    "scan": ["--a-range", "5.5,6.5", "--b-range", "0,0.5", "--coarse", "0.5", "--fine", "0.1",
             "--sample-hi", "1000"],
    "trajectory": ["--x", "27"],
    "cumulative": ["--lo", "1", "--hi", "500"],
    "zones": ["--hi", "5000", "--deltas", "0.01,0.05"],
    "cycles": ["--pmax", "8"],
    "stats": ["--hi", "2000", "--growth", "27,703"],
    "spectrum": ["--hi", "2000", "--kmax", "3", "--m", "8"],
    "flow": ["--grid", "10"],
}


def _run(tmp_path, name, args):
    out = tmp_path / name
    code = cli.main([name, *args, "--out", str(out)])
    return code, out


@pytest.mark.parametrize("name", sorted(SMALL))
def test_each_command_writes_outputs_and_manifest(tmp_path, name):
    code, out = _run(tmp_path, name, SMALL[name])
    assert code == 0
    m = RunManifest.load(out / f"manifest-{name}.json")
    assert m.command == name and m.outputs
    for fname, _ in m.outputs:
        assert (out / fname).stat().st_size > 0


def test_compare_paper_small(tmp_path):
    code, out = _run(tmp_path, "compare-paper", ["--hi", "4"])
    assert code == 0
    m = RunManifest.load(out / "manifest-compare-paper.json")
    assert any(n.endswith(".csv") for n, _ in m.outputs)


def test_cycles_csv_schema(tmp_path):
    _, out = _run(tmp_path, "cycles", ["--pmax", "8"])
    rows = read_csv(out / "cycles.csv", cli.CYCLE_SCHEMA)
    assert [r[0] for r in rows] == list(range(1, 9))
    assert rows[2][3] == pytest.approx(0.160558, abs=1e-6) and rows[2][5] is True


def test_trajectory_csv_schema(tmp_path):
    _, out = _run(tmp_path, "trajectory", ["--x", "27"])
    rows = read_csv(out / "trajectory-27.csv", cli.TRAJ_SCHEMA)
    assert len(rows) == 112 and rows[-1][1] == 1


def test_bad_arguments_exit_2(tmp_path):
    with pytest.raises(SystemExit) as e:
        cli.main(["verify", "--lo", "one"])
    assert e.value.code == 2
    with pytest.raises(SystemExit) as e:
        cli.main(["nosuchcommand"])
    assert e.value.code == 2
    assert cli.main(["verify", "--lo", "10", "--hi", "1", "--out", str(tmp_path)]) == 2
    assert cli.main(["verify", "--family", "3", "--out", str(tmp_path)]) == 2


def test_unknown_config_key(tmp_path):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"cycles": {"pmaxx": 3}}))
    assert cli.main(["cycles", "--config", str(cfg), "--out", str(tmp_path)]) == 2


def test_precedence_flags_over_config_over_defaults(tmp_path, monkeypatch):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"digits": 4, "cycles": {"pmax": 5, "bound": 0.3}}))
    args = cli.build_parser().parse_args(["cycles", "--config", str(cfg), "--pmax", "3"])
    monkeypatch.setenv("COLLATZ_PHASE_OUT", "envdir")
    monkeypatch.setenv("COLLATZ_PHASE_WORKERS", "2")
    c = cli.resolve(args)
    assert c["pmax"] == 3 and c["bound"] == 0.3 and c["digits"] == 4
    assert c["out"] == "envdir" and c["workers"] == 2
    assert cli.resolve(cli.build_parser().parse_args(["cycles"]))["pmax"] == 8


def test_manifest_rerun_reproduces_checksums(tmp_path):
    _, first = _run(tmp_path, "verify", ["--lo", "1", "--hi", "3000", "--scheme", "stratified",
                                         "-n", "500", "--seed", "9"])
    m1 = RunManifest.load(first / "manifest-verify.json")
    cfg = dict(m1.config)
    cfg["out"] = str(tmp_path / "again")
    (tmp_path / "cfg.json").write_text(json.dumps(cfg))
    assert cli.main(["verify", "--config", str(tmp_path / "cfg.json")]) == 0
    m2 = RunManifest.load(tmp_path / "again" / "manifest-verify.json")
    assert m1.outputs == m2.outputs and m1.seed == m2.seed == 9


def test_console_entry_point(tmp_path):
    r = subprocess.run([sys.executable, "-m", "collatz_phase.cli", "cycles", "--pmax", "2",
                        "--out", str(tmp_path)], capture_output=True, text=True)
    assert r.returncode == 0 and "manifest" in r.stdout
