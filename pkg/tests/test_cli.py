import csv
import io
import json
import math

import pytest

from smoothlab.cli import main, parse_grid, UsageError


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def rows(text):
    body = [line for line in text.splitlines() if not line.startswith("#")]
    return list(csv.DictReader(io.StringIO("\n".join(body))))


def test_grid_syntax():
    assert parse_grid("0:1:0.25") == [0.0, 0.25, 0.5, 0.75, 1.0]
    assert parse_grid("0.01:0.7:0.005")[-1] == 0.7
    assert parse_grid("1,2.5") == [1.0, 2.5]
    for bad in ("1:2", "a:b:c", "0:1:0", "1:0:0.1"):
        with pytest.raises(UsageError):
            parse_grid(bad)


def test_narrowness(capsys):
    code, out, _ = run(capsys, "narrowness", "--c", "10,2", "--d", "784,3072")
    assert code == 0
    table = {(r["c"], r["d"]): float(r["theta_limit_degrees"]) for r in rows(out)}
    assert abs(table[("10", "784")] - 76.7) <= 0.1
    assert abs(table[("10", "3072")] - 83.2) <= 0.1
    assert table[("2", "784")] == 90.0


def test_vanish(capsys):
    code, out, _ = run(capsys, "vanish", "--d", "3,50")
    assert code == 0
    r = rows(out)
    assert abs(float(r[0]["sigma_van_empirical"]) - 0.651) <= 0.003
    assert abs(float(r[0]["sigma_van_bound"]) - 0.8165) <= 1e-4
    assert abs(float(r[1]["sigma_van_empirical"]) - 0.141) <= 0.003
    assert abs(float(r[1]["sigma_van_bound"]) - 0.2) <= 1e-12
    assert all(float(x["sigma_van_bound"]) >= float(x["sigma_van_empirical"]) for x in r)


def test_shrink_rate_marks_vanished(capsys):
    code, out, _ = run(capsys, "shrink-rate", "--d", "3", "--sigma", "0.5:0.7:0.05")
    assert code == 0
    flags = [r["vanished"] for r in rows(out)]
    # the d=3 vanishing point is 0.6501
    assert flags == ["false", "false", "false", "false", "true"]
    assert "-dR_sigma/dsigma" in out


def test_shrink_rate_empty_d(capsys):
    code, _, err = run(capsys, "shrink-rate", "--d", "")
    assert code == 2 and "error" in err


def test_certify_cone_peaks(capsys):
    code, out, _ = run(capsys, "certify", "--cone", "--theta", "80", "--d", "25", "--peaks")
    assert code == 0
    (r,) = rows(out)
    assert abs(float(r["peak_scaled_radius"]) - 0.84) <= 0.02


def test_certify_ball_surface(capsys, tmp_path):
    out_file = tmp_path / "surface.csv"
    code, _, _ = run(capsys, "certify", "--ball", "--d", "30", "--a-grid", "0:1:0.5",
                     "--sigma-grid", "0.05:0.25:0.05", "--out", str(out_file))
    assert code == 0
    r = rows(out_file.read_text())
    assert len(r) == 15
    zero_row = [x for x in r if x["a"] == "0.0" and x["sigma"] == "0.2"][0]
    assert zero_row["abstained"] == "true"


def test_certify_needs_geometry(capsys):
    code, _, _ = run(capsys, "certify", "--d", "3")
    assert code == 2


def test_synthetic_modes(capsys):
    code, out, _ = run(capsys, "synthetic", "--mode", "mi", "--sigma", "0")
    assert code == 0 and float(rows(out)[0]["mutual_info_nats"]) == pytest.approx(math.log(2))
    code, out, _ = run(capsys, "synthetic", "--a", "1", "--k", "80", "--eps", "0.1",
                       "--sigma-train", "45", "--sigma-infer", "45", "--mode", "smoothed")
    assert code == 0 and float(rows(out)[0]["accuracy"]) <= 0.6
    code, out, _ = run(capsys, "synthetic", "--a", "1", "--k", "2", "--eps", "0.1",
                       "--sigma-train", "3", "--mode", "original")
    assert code == 0 and float(rows(out)[0]["accuracy"]) <= 0.6


def test_synthetic_bad_eps(capsys):
    code, _, _ = run(capsys, "synthetic", "--eps", "0.6", "--sigma-train", "1")
    assert code == 2


def test_mc_check_ball(capsys):
    region = json.dumps({"kind": "ball", "dim": 3, "radius": 1})
    code, out, _ = run(capsys, "mc-check", "--region", region, "--sigma", "0.4", "--n", "100000",
                       "--seed", "4")
    assert code == 0
    assert abs(float(rows(out)[0]["z_score"])) <= 4


def test_mc_check_deterministic(capsys):
    region = json.dumps({"kind": "cone", "dim": 5, "theta_deg": 40})
    argv = ("mc-check", "--region", region, "--point", "0,0,0,0,-0.5", "--sigma", "0.7",
            "--n", "20000", "--seed", "77")
    _, first, _ = run(capsys, *argv)
    _, second, _ = run(capsys, *argv)
    assert first == second


def test_mc_check_halfspace_analytic(capsys):
    region = json.dumps({"kind": "halfspace", "dim": 2, "offset": 0.5})
    code, out, _ = run(capsys, "mc-check", "--region", region, "--point", "3,0", "--sigma", "1",
                       "--n", "1000")
    assert code == 0
    from smoothlab.specfn import std_normal_cdf
    assert float(rows(out)[0]["analytic"]) == std_normal_cdf(0.5)


def test_mc_check_off_axis_has_no_analytic(capsys):
    region = json.dumps({"kind": "ball", "dim": 2, "radius": 1})
    _, out, _ = run(capsys, "mc-check", "--region", region, "--point", "0.3,0", "--sigma", "1",
                    "--n", "1000")
    assert rows(out)[0]["analytic"] == ""


def test_mc_check_bad_json(capsys):
    code, _, err = run(capsys, "mc-check", "--region", "{kind", "--sigma", "1")
    assert code == 2 and "JSON" in err


def test_manifest_without_timestamp(capsys, monkeypatch):
    monkeypatch.delenv("SOURCE_DATE_EPOCH", raising=False)
    _, out, _ = run(capsys, "narrowness", "--c", "3", "--d", "10")
    assert "# tool: smoothlab" in out and "timestamp" not in out
    monkeypatch.setenv("SOURCE_DATE_EPOCH", "0")
    _, out, _ = run(capsys, "narrowness", "--c", "3", "--d", "10")
    assert "# timestamp: 1970-01-01T00:00:00Z" in out


def test_numerical_failure_exit_code(capsys, monkeypatch):
    from smoothlab import cli
    from smoothlab.errors import NumericalError

    def boom(*args, **kwargs):
        raise NumericalError("forced", estimate=0.5, error_bound=1.0)

    monkeypatch.setattr(cli, "vanish_sigma", boom)
    code, _, err = run(capsys, "vanish", "--d", "3")
    assert code == 3 and "forced" in err
