import io
import json

import numpy as np
import pytest

from secantpot.cli import main


def run(argv):
    out, err = io.StringIO(), io.StringIO()
    code = main(argv, out=out, err=err)
    return code, out.getvalue(), err.getvalue()


def test_potential_fixed_point():
    code, out, _ = run(["potential", "--fn", "z^3-1", "--root", "1", "--point", "1+0i,1+0i"])
    assert code == 0
    assert "basin: 0" in out and "h: 0.0" in out


def test_potential_json():
    code, out, _ = run(["potential", "--fn", "z^3-1", "--root", "1", "--point", "0.9+0i,1.1+0i", "--json"])
    rec = json.loads(out)
    assert code == 0 and rec["basin"] == 0 and rec["N"] >= 0
    assert abs(rec["h"] - rec["direct_limit_h"]) <= 1e-8 * rec["h"]


def test_roots():
    code, out, _ = run(["roots", "--fn", "(z^2-1)*(z-1/2)"])
    assert code == 0 and len(out.strip().splitlines()) == 3
    code, out, _ = run(["roots", "--fn", "z^3-z", "--window", "-0.5", "0.5", "-0.5", "0.5"])
    assert "exceptional" in out and len(out.strip().splitlines()) == 1


@pytest.mark.parametrize("argv", [
    [],
    ["bogus"],
    ["potential", "--fn", "z^3-1"],
    ["potential", "--fn", "z^3-1", "--root", "1j", "--point", "1,1"],
    ["roots", "--fn", "z^^2"],
    ["render"],
    ["render", "--config", "/nonexistent/cfg.json"],
])
def test_usage_errors(argv):
    code, _, err = run(argv)
    assert code == 2
    assert "usage" in err


def test_syntax_error_names_offset():
    code, _, err = run(["roots", "--fn", "z^^2"])
    assert code == 2 and "offset 2" in err


def test_render_config(tmp_path):
    cfg = {"function": "z^3-1", "slice": {"kind": "Diagonal", "window": [-1, 1, -1, 1]},
           "resolution": [40, 30], "out_path": str(tmp_path / "fig.ppm")}
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps(cfg))
    code, out, _ = run(["render", "--config", str(path), "--workers", "1"])
    assert code == 0 and "basins: [0, 1, 2]" in out and " s" in out
    assert (tmp_path / "fig.ppm").read_bytes().startswith(b"P6\n40 30\n255\n")


def test_render_inline_matches_config(tmp_path):
    a = tmp_path / "a.ppm"
    b = tmp_path / "b.ppm"
    run(["render", "--fn", "z^3-1", "--window", "-1", "1", "-1", "1", "--resolution", "20", "20", "--out", str(a)])
    cfg = {"function": "z^3-1", "slice": {"kind": "Diagonal", "window": [-1, 1, -1, 1]},
           "resolution": [20, 20], "out_path": str(b)}
    (tmp_path / "c.json").write_text(json.dumps(cfg))
    run(["render", "--config", str(tmp_path / "c.json")])
    assert a.read_bytes() == b.read_bytes()


def test_verify_report_is_consistent():
    code, out, _ = run(["verify", "--fn", "z^3-1", "--root", "1", "--count-scale", "0.1", "--json"])
    rep = json.loads(out)
    assert rep["seed"] == 42
    assert code == (0 if rep["passed"] else 1)
    assert rep["passed"] == all(c["passed"] for c in rep["checks"])
    failed = [c for c in rep["checks"] if not c["passed"]]
    for c in failed:
        assert c["witness"] is not None


def test_verify_table_prints_seed():
    code, out, _ = run(["verify", "--fn", "z^3-1", "--root", "1", "--count-scale", "0.1", "--seed", "7"])
    assert "seed 7" in out
    assert out.count("PASS") + out.count("FAIL") >= 20


def test_verify_example_all_pass():
    """The documented example: every suite passes at the stated tolerances."""
    code, out, _ = run(["verify", "--fn", "z^3-1", "--root", "1"])
    assert code == 0, out


def test_module_entry_point():
    import subprocess
    import sys

    res = subprocess.run([sys.executable, "-m", "secantpot", "roots", "--fn", "z^2-2"], capture_output=True, text=True)
    assert res.returncode == 0
    vals = sorted(float(line.split()[1].split("+")[0]) for line in res.stdout.strip().splitlines())
    assert np.allclose(vals, [-2 ** 0.5, 2 ** 0.5])
