import csv
import json
import math

import numpy as np
import pytest

from covert_mmwave import cli
from covert_mmwave.channel import benchmark, db_to_linear
from covert_mmwave.errors import ConfigError, NumericalError


def write(tmp_path, obj, name="cfg.json"):
    path = tmp_path / name
    path.write_text(obj if isinstance(obj, str) else json.dumps(obj))
    return str(path)


def read_csv(text):
    meta = [l for l in text.splitlines() if l.startswith("#")]
    body = [l for l in text.splitlines() if l and not l.startswith("#")]
    rows = list(csv.reader(body))
    return meta, rows[0], [[float(v) for v in r] for r in rows[1:]]


def test_empty_config_is_benchmark(tmp_path):
    assert cli.load_config(write(tmp_path, "")) == benchmark()
    assert cli.load_config(write(tmp_path, {})) == benchmark()
    cfg = cli.load_config(None)
    assert cfg.fading.nu_l == 3 and cfg.fading.nu_n == 2
    assert math.degrees(cfg.bob.steer_sigma) == pytest.approx(5.0)


def test_single_override(tmp_path):
    cfg = cli.load_config(write(tmp_path, {"pa_dbm": 5}))
    assert cfg == benchmark().replace(p_a=db_to_linear(5.0))


def test_flat_round_trip(tmp_path):
    flat = {"pa_dbm": 7.5, "theta_as_deg": 15, "nu_n": 1, "willie_in_main_lobe": True,
            "jammer_gain_mode": "deterministic_main", "c_n": 3e-7}
    cfg = cli.config_from_flat(flat)
    back = cli.flat_config(cfg)
    for key, value in flat.items():
        assert back[key] == pytest.approx(value)
    again = cli.config_from_flat(back)
    assert again.p_a == pytest.approx(cfg.p_a, rel=1e-14)
    assert cli.config_hash(cfg) == cli.config_hash(cli.config_from_flat(flat))


@pytest.mark.parametrize("bad, field", [({"nu_l": 2.5}, "nu_l"), ({"nu_n": 0}, "nu_n"),
                                        ({"pa_dbm": "high"}, "pa_dbm"), ({"d_ab_m": -3}, "d_ab_m"),
                                        ({"theta_b_deg": 400}, "theta_b_deg"),
                                        ({"side_af_db": 20}, "side_af_db"),
                                        ({"jammer_gain_mode": "x"}, "jammer_gain_mode"),
                                        ({"bogus": 1}, "bogus")])
def test_invalid_fields(tmp_path, bad, field):
    with pytest.raises(ConfigError) as info:
        cli.load_config(write(tmp_path, bad))
    assert info.value.field == field


def test_malformed_file_exit_code(tmp_path, capsys):
    assert cli.main(["detect", "--config", write(tmp_path, "{nope")]) == cli.EXIT_CONFIG
    assert "malformed" in capsys.readouterr().err
    assert cli.main(["detect", "--config", write(tmp_path, {"nu_l": 2.5})]) == cli.EXIT_CONFIG
    assert "nu_l" in capsys.readouterr().err


def test_single_commands(capsys):
    assert cli.main(["design"]) == 0
    meta, cols, rows = read_csv(capsys.readouterr().out)
    assert any(m.startswith("# config_sha256=") for m in meta)
    assert cols == ["epsilon", "pj_opt_dbm", "rb_opt_bits_per_use", "outage_opt",
                    "rate_opt_bits_per_use"]
    assert rows[0][1] == pytest.approx(15.52, abs=0.1)
    assert cli.main(["outage", "--rb", "0.1"]) == 0
    _, cols, rows = read_csv(capsys.readouterr().out)
    assert rows[0][cols.index("outage")] == pytest.approx(0.00314, rel=0.02)
    assert cli.main(["capacity", "--pj-opt"]) == 0
    _, cols, rows = read_csv(capsys.readouterr().out)
    assert rows[0][1] == pytest.approx(6.955, abs=0.01)


def test_detect_sweep_monotone_and_deterministic(tmp_path, capsys):
    args = ["sweep", "--variable", "pj_max_dbm", "--start", "-10", "--stop", "40",
            "--steps", "26", "--metrics", "detect"]
    assert cli.main(args) == 0
    first = capsys.readouterr().out
    assert cli.main(args + ["--workers", "4"]) == 0
    assert capsys.readouterr().out == first
    _, cols, rows = read_csv(first)
    col = np.array(rows)[:, cols.index("detect_error")]
    assert np.all(np.diff(col) >= 0)
    assert col[0] < 0.05 and col[-1] > 0.999


def test_rate_sweep_hits_table_abscissae(tmp_path):
    out = tmp_path / "rb.csv"
    assert cli.main(["sweep", "--variable", "rb", "--start", "0.1", "--stop", "10",
                     "--steps", "199", "--metrics", "effective_rate", "--pj-opt",
                     "--out", str(out)]) == 0
    _, cols, rows = read_csv(out.read_text())
    table = {0.1: 0.0997, 0.5: 0.4787, 1.0: 0.9065, 2.5: 2.1975, 5.0: 4.3459, 10.0: 0.0866}
    found = 0
    for r in rows:
        for rb, rate in table.items():
            if abs(r[0] - rb) < 1e-9:
                tol = 0.05 if rb == 10.0 else 0.02
                assert r[cols.index("effective_rate_bits_per_use")] == pytest.approx(rate, rel=tol)
                found += 1
    assert found == 6


def test_sweep_units_in_header():
    spec = cli.SweepSpec("pa_dbm", 0, 20, 3, ("capacity", "design", "outage"))
    cols = spec.columns()
    assert cols[0] == "pa_dbm" and "capacity_bits_per_use" in cols and "pj_opt_dbm" in cols


def test_sweep_spec_validation():
    for bad in [("nope", 0, 1, 3, ("detect",)), ("rb", 1, 0, 3, ("detect",)),
                ("rb", 0, 1, 1, ("detect",)), ("rb", 0, 1, 3, ("bad",))]:
        with pytest.raises(ValueError):
            cli.SweepSpec(*bad)


def test_sweep_needs_rate_for_outage(capsys):
    assert cli.main(["sweep", "--variable", "pa_dbm", "--start", "0", "--stop", "1",
                     "--steps", "2", "--metrics", "outage"]) == cli.EXIT_CONFIG


def test_partial_csv_on_numerical_failure(monkeypatch, capsys):
    real = cli.ergodic_capacity
    calls = {"n": 0}

    def flaky(cfg, *a, **k):
        calls["n"] += 1
        if calls["n"] == 3:
            raise NumericalError("quadrature budget exhausted", nu=1)
        return real(cfg, *a, **k)

    monkeypatch.setattr(cli, "ergodic_capacity", flaky)
    code = cli.main(["sweep", "--variable", "pj_max_dbm", "--start", "0", "--stop", "30",
                     "--steps", "5", "--metrics", "capacity"])
    out = capsys.readouterr().out
    assert code == cli.EXIT_NUMERICAL
    _, _, rows = read_csv(out)
    assert len(rows) == 2
    assert out.rstrip().splitlines()[-1].startswith("# error:")


def test_verify_tight_passes(capsys):
    assert cli.main(["verify", "--tier", "tight"]) == 0
    report = capsys.readouterr().out
    assert report.count("PASS") == 8 and "FAIL" not in report


def test_verify_loose_failure_report(capsys):
    checks = [cli.Check("capacity", 3.2, 3.1, 0.06, 0.0014)]
    text = cli.format_checks(checks)
    for token in ("capacity", "3.2", "3.1", "6.000e-02", "1.400e-03", "FAIL"):
        assert token in text


def test_verify_loose_exit_code(tmp_path, capsys):
    code = cli.main(["verify", "--tier", "loose", "--samples", "200000", "--seed", "3",
                     "--pj-opt"])
    report = capsys.readouterr().out
    assert "# seed=3" in report
    assert code in (cli.EXIT_OK, cli.EXIT_VERIFY)
    assert (code == cli.EXIT_OK) == ("FAIL" not in report)
