import json
import os
import subprocess
import sys

import numpy as np
import pytest

from sgcoherent import __version__, analysis, cli, states, waveguide
from sgcoherent.serialize import read_csv, serialize, to_table


def run_cli(args, tmp_path, name="out.csv"):
    out = tmp_path / name
    code = cli.run([*args, "--out", str(out)])
    return code, out


# --- serialize ----------------------------------------------------------------

def test_columns_per_result_type():
    s = states.sg_evolved(1, 2.0)
    assert list(to_table(analysis.photon_distribution(s))[0]) == ["n", "p"]
    assert list(to_table(analysis.husimi_grid(s, resolution=5))[0]) == ["re", "im", "q"]
    series = analysis.mandel_scan(0.1, 3.0, 5)
    cols, meta = to_table(series)
    assert list(cols) == ["tau", "q"]
    assert {"tau_star", "q_star", "zero_crossing"} <= set(meta)
    assert list(to_table(s)[0]) == ["n", "re", "im"]
    assert list(to_table(waveguide.WaveguideField(s.coeffs, 2.0, 1))[0]) == ["n", "re", "im", "intensity"]
    with pytest.raises(TypeError):
        to_table(object())
    with pytest.raises(ValueError):
        serialize(s, "xml")


def test_csv_layout_and_roundtrip():
    dist = analysis.photon_distribution(states.sg_vacuum_displaced(2.32))
    data = serialize(dist, "csv", {"command": "pdist"})
    text = data.decode()
    assert "\r" not in text and text.endswith("\n")
    lines = text.splitlines()
    assert lines[0] == '# command: "pdist"'
    header = next(line for line in lines if not line.startswith("#"))
    assert header == "n,p"
    meta, cols = read_csv(data)
    assert meta["command"] == "pdist"
    assert np.array_equal(cols["p"], dist.probs)
    assert np.array_equal(cols["n"], dist.n)


def test_json_roundtrip_is_exact():
    grid = analysis.husimi_grid(states.sg_evolved(0, 2.32), (-3, 3), resolution=9)
    doc = json.loads(serialize(grid, "json", {"command": "qfunc"}))
    assert doc["meta"]["shape"] == [9, 9]
    q = np.array(doc["data"]["q"]).reshape(doc["meta"]["shape"])
    assert np.array_equal(q, grid.values)
    re = np.array(doc["data"]["re"]).reshape(9, 9)
    assert np.array_equal(re[0], grid.re)
    # re-serialising the parsed document gives the same text
    again = json.dumps({"meta": doc["meta"], "data": doc["data"]}, allow_nan=False) + "\n"
    assert again.encode() == serialize(grid, "json", {"command": "qfunc"})


def test_csv_has_at_least_15_digits():
    data = serialize(({"v": np.array([1 / 3])}, {}), "csv").decode()
    value = data.splitlines()[-1]
    assert len(value.replace("0.", "", 1)) >= 15
    assert float(value) == 1 / 3


def test_missing_zero_crossing_serialises_as_null():
    series = analysis.mandel_scan(0.1, 3.0, 5)
    assert series.zero_crossing is None
    doc = json.loads(serialize(series, "json"))
    assert doc["meta"]["zero_crossing"] is None


# --- CLI ---------------------------------------------------------------------------

def test_mandel_command(tmp_path):
    code, out = run_cli(["mandel", "--m", "0", "--tau-max", "20", "--steps", "400"], tmp_path, "q.json")
    assert code == 0
    doc = json.loads(out.read_bytes())
    meta = doc["meta"]
    assert abs(meta["tau_star"] - 2.32) <= 0.02 and abs(meta["q_star"] + 0.64) <= 0.01
    assert meta["command"] == "mandel" and meta["version"] == __version__
    assert len(doc["data"]["tau"]) == 400


def test_qfunc_command(tmp_path):
    code, out = run_cli(["qfunc", "--m", "0", "--tau", "2.32", "--window", "-6:6", "--res", "257"], tmp_path)
    assert code == 0
    meta, cols = read_csv(out.read_bytes())
    assert meta["shape"] == [257, 257]
    assert cols["q"].size == 257 * 257
    assert meta["params"]["window"] == [-6.0, 6.0]
    assert {"truncation", "tail_bound", "version", "command", "params"} <= set(meta)
    grid = analysis.husimi_grid(states.sg_evolved(0, 2.32), (-6, 6), resolution=257)
    assert np.array_equal(cols["q"], grid.values.ravel())


def test_window_equals_form_and_im_window(tmp_path):
    code, out = run_cli(["qfunc", "--window=-2:2", "--im-window", "-1:3", "--res", "5"], tmp_path)
    assert code == 0
    meta, cols = read_csv(out.read_bytes())
    assert meta["im_range"] == [-1.0, 3.0] and meta["re_range"] == [-2.0, 2.0]


@pytest.mark.parametrize("command", ["state", "pdist", "waveguide"])
def test_other_commands(tmp_path, command):
    code, out = run_cli([command], tmp_path, "x.json")
    assert code == 0
    doc = json.loads(out.read_bytes())
    assert doc["meta"]["command"] == command
    assert isinstance(doc["meta"]["truncation"], int)


def test_waveguide_ode_matches_closed(tmp_path):
    _, a = run_cli(["waveguide", "--m", "1", "--z", "5", "--method", "ode"], tmp_path, "a.json")
    _, b = run_cli(["waveguide", "--m", "1", "--z", "5"], tmp_path, "b.json")
    da = json.loads(a.read_bytes())["data"]
    db = json.loads(b.read_bytes())["data"]
    assert np.max(np.abs(np.array(da["intensity"]) - np.array(db["intensity"]))) < 1e-6


def test_pdist_recipes(tmp_path):
    for recipe in ("approx", "exact", "evolved"):
        code, out = run_cli(["pdist", "--recipe", recipe, "--x", "1.5"], tmp_path)
        assert code == 0
        _, cols = read_csv(out.read_bytes())
        assert abs(cols["p"].sum() - 1) < 1e-10


def test_presets(tmp_path):
    assert {"fig2-a", "fig3-d", "fig4", "fig5-a-ii", "fig6-d-iv", "fig7-c"} <= set(cli.PRESETS)
    code, out = run_cli(["qfunc", "--preset", "fig5-b-iii", "--res", "9"], tmp_path)
    assert code == 0
    meta, _ = read_csv(out.read_bytes())
    assert meta["params"]["m"] == 1 and meta["params"]["tau"] == 5.0 and meta["params"]["recipe"] == "evolved"
    # explicit flags override the preset
    code, out = run_cli(["pdist", "--preset", "fig3-a", "--x", "2.0"], tmp_path)
    meta, _ = read_csv(out.read_bytes())
    assert meta["params"]["tau"] == 2.0 and meta["params"]["recipe"] == "exact"


def test_determinism(tmp_path):
    _, a = run_cli(["qfunc", "--preset", "fig2-b", "--res", "17"], tmp_path, "a.csv")
    _, b = run_cli(["qfunc", "--preset", "fig2-b", "--res", "17"], tmp_path, "b.csv")
    assert a.read_bytes() == b.read_bytes()


@pytest.mark.parametrize(
    "args",
    [
        ["pdist", "--m", "-1"],
        ["qfunc", "--res", "1"],
        ["qfunc", "--window", "3:1"],
        ["mandel", "--steps", "1"],
        ["mandel", "--tau-min", "0"],
        ["waveguide", "--tol", "0"],
        ["pdist", "--preset", "fig4"],
        ["state", "--tau", "nan"],
        ["nonsense"],
        [],
    ],
)
def test_usage_errors_exit_2(tmp_path, args):
    assert cli.run([*args, "--out", str(tmp_path / "x.csv")] if args else []) == 2


def test_numeric_failure_exits_3(tmp_path):
    code, out = run_cli(["waveguide", "--m", "1", "--z", "5", "--method", "ode", "--truncation", "10"], tmp_path)
    assert code == 3
    assert not out.exists()


def test_unwritable_output_exits_2(tmp_path):
    assert cli.run(["pdist", "--out", str(tmp_path / "missing" / "x.csv")]) == 2


@pytest.mark.slow
def test_verify_subprocess(tmp_path):
    out = tmp_path / "report.json"
    env = dict(os.environ, SGCOHERENT_THREADS="1")
    proc = subprocess.run(
        [sys.executable, "-m", "sgcoherent", "verify", "--out", str(out)], env=env, capture_output=True, text=True
    )
    assert proc.returncode == 0, proc.stderr
    doc = json.loads(out.read_text())
    assert all(doc["data"]["passed"]) and len(doc["data"]["check"]) == 16
    assert proc.stderr.count("PASS") == 16
