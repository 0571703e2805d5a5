import csv
import json
import math
import subprocess
import sys

import numpy as np
import pytest

from leakywire.cli import main
from leakywire.config import config_from_dict, load_config
from leakywire.errors import ConfigError


def write(path, text):
    path.write_text(text)
    return str(path)


CIRCLE = """\
command: bound
alpha: 1
n: 256
curve:
  kind: builtin
  name: circle
  params: {R: 1}
"""


def test_bound_report_round_trip(tmp_path):
    cfg = write(tmp_path / "c.yaml", CIRCLE)
    out = tmp_path / "r.json"
    assert main(["bound", "--config", cfg, "--out", str(out)]) == 0
    rec = json.loads(out.read_text())
    assert rec["bound"] == pytest.approx(-math.pi ** 2 / 16)
    assert rec["states"] and all(s["pass"] for s in rec["states"])
    assert main(["validate-report", str(out)]) == 0


def test_validate_report_rejects(tmp_path):
    bad = write(tmp_path / "bad.json", json.dumps({"alpha": 1}))
    assert main(["validate-report", bad]) == 2


def test_cconst(tmp_path, capsys):
    cfg = write(tmp_path / "c.yaml", CIRCLE)
    out = tmp_path / "c.json"
    assert main(["cconst", "--config", cfg, "--out", str(out)]) == 0
    assert "c = 0.63661977" in capsys.readouterr().out
    assert json.loads(out.read_text())["c"] == pytest.approx(2 / math.pi, abs=1e-8)


def test_sweep_beta_matches_sine(tmp_path):
    cfg = write(tmp_path / "s.yaml", """\
curve: {kind: builtin, name: angle, params: {T: 40}}
sweep:
  parameter: beta
  values: [pi, pi/6, pi/2, pi/3, 2*pi/3, pi/2]
""")
    out = tmp_path / "s.csv"
    assert main(["sweep", "--config", cfg, "--out", str(out), "--format", "csv"]) == 0
    rows = list(csv.DictReader(out.open()))
    beta = np.array([float(r["beta"]) for r in rows])
    assert np.all(np.diff(beta) > 0) and len(beta) == 5       # sorted, no duplicates
    c = np.array([float(r["c"]) for r in rows])
    assert np.allclose(c, np.sin(beta / 2), atol=1e-6)


def test_sweep_kappa(tmp_path):
    cfg = write(tmp_path / "k.yaml", CIRCLE + "sweep: {parameter: kappa, start: 0.5, stop: 2, num: 4}\n")
    out = tmp_path / "k.json"
    assert main(["sweep", "--config", cfg, "--out", str(out)]) == 0
    rows = json.loads(out.read_text())
    assert [r["kappa"] for r in rows] == pytest.approx([0.5, 1.0, 1.5, 2.0])
    assert all(a["mu_max"] > b["mu_max"] for a, b in zip(rows, rows[1:]))


def test_spectrum_writes_both(tmp_path):
    cfg = write(tmp_path / "c.yaml", CIRCLE + "kappa_points: 8\n")
    out = tmp_path / "spectrum.json"
    assert main(["spectrum", "--config", cfg, "--out", str(out)]) == 0
    states = json.loads(out.read_text())["states"]
    assert states[0]["lambda"] < 0
    header = (tmp_path / "spectrum.csv").read_text().splitlines()[0]
    assert header == "kappa,mu_1,mu_2,mu_3,mu_4"


def test_star_graph_config(tmp_path):
    cfg = write(tmp_path / "g.yaml", "T: 30\nn: 384\ncurve: {kind: star, edges: 3}\n")
    out = tmp_path / "g.json"
    assert main(["bound", "--config", cfg, "--out", str(out)]) == 0
    rec = json.loads(out.read_text())
    assert rec["bound"] == -2.25 and rec["bound_kind"] == "Graph"


def test_csv_curve_and_bound_undefined(tmp_path):
    t = np.linspace(0, 2 * math.pi, 201)
    rows = "\n".join(f"{a:.17g},{b:.17g},{c:.17g}" for a, b, c in zip(t, np.sin(t), np.sin(t) * np.cos(t)))
    write(tmp_path / "eight.csv", "t,x,y\n" + rows + "\n")
    cfg = write(tmp_path / "e.yaml", "curve: {kind: csv, path: eight.csv, type: loop}\n")
    assert main(["bound", "--config", cfg]) == 4


def test_config_errors(tmp_path, capsys):
    cfg = write(tmp_path / "bad.yaml", "curve: {kind: builtin, name: circle}\nalpha: -2\n")
    assert main(["bound", "--config", cfg]) == 2
    assert "line 2" in capsys.readouterr().err
    cfg = write(tmp_path / "typo.yaml", "alpah: 1\n")
    assert main(["bound", "--config", cfg]) == 2
    cfg = write(tmp_path / "broken.yaml", "curve: [unclosed\n")
    assert main(["bound", "--config", cfg]) == 2
    assert main(["bound", "--config", str(tmp_path / "missing.yaml")]) == 2
    assert main(["bound"]) == 2


@pytest.mark.parametrize("data", [
    {"curve": {"kind": "builtin", "name": "circle"}, "n": 8},
    {"curve": {"kind": "builtin", "name": "circle"}, "kappa_min": 2, "kappa_max": 1},
    {"curve": {"kind": "builtin", "name": "circle"}, "format": "xml"},
    {"command": "sweep", "curve": {"kind": "builtin", "name": "circle"},
     "sweep": {"parameter": "beta", "values": [1]}},
    {"command": "sweep", "curve": {"kind": "builtin", "name": "circle"},
     "sweep": {"parameter": "radius", "values": [1]}},
])
def test_config_validation(data):
    with pytest.raises(ConfigError):
        config_from_dict(data)


def test_pi_expressions():
    cfg = config_from_dict({"alpha": "pi/2", "curve": {"kind": "builtin", "name": "circle"}})
    assert cfg.alpha == pytest.approx(math.pi / 2)
    with pytest.raises(ConfigError):
        config_from_dict({"alpha": "__import__('os')", "curve": {"kind": "builtin", "name": "circle"}})


def test_bare_csv_config(tmp_path):
    t = np.linspace(0, 2 * math.pi, 101)
    rows = "\n".join(f"{a:.17g},{b:.17g},{c:.17g}" for a, b, c in zip(t, np.cos(t), np.sin(t)))
    path = write(tmp_path / "circ.csv", "t,x,y\n" + rows + "\n")
    cfg = load_config(path)
    assert cfg.curve["kind"] == "csv"


def test_selftest_subprocess():
    proc = subprocess.run([sys.executable, "-m", "leakywire", "selftest-k0"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    rows = list(csv.DictReader(proc.stdout.splitlines()))
    assert rows and all(abs(float(r["residual"])) <= 1e-8 for r in rows)


def test_deterministic_output(tmp_path):
    cfg = write(tmp_path / "c.yaml", CIRCLE)
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    main(["bound", "--config", cfg, "--out", str(a), "--threads", "1"])
    main(["bound", "--config", cfg, "--out", str(b)])
    assert a.read_text() == b.read_text()
