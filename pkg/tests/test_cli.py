import pytest

from cipc_covert import cli
from cipc_covert.config import Settings, SweepSpec, parse_config_text
from cipc_covert.errors import ConfigError


def test_parse_config_text():
    s = parse_config_text("""
# comment
scheme = truncated   # trailing
q = 2
p_a_max_db = 10
""")
    assert s.scheme == "truncated" and s.q == 2.0 and s.p_a_max_db == 10.0
    cfg, sp = s.build()
    assert cfg.p_a_max == pytest.approx(10.0)


@pytest.mark.parametrize("text", [
    "foo = 1", "q = abc", "q 1", "q = 1\nq = 2", "scheme = fancy", "scheme = truncated",
    "phi = 2",
])
def test_bad_configs(text):
    with pytest.raises(ConfigError):
        parse_config_text(text).build()


def test_config_keys_complete():
    assert set(Settings.keys()) == {
        "scheme", "q", "p_a_max_db", "p_b_max_db", "rate", "epsilon", "sigma2_b_db",
        "sigma2_w_db", "phi", "lambda_ab", "lambda_aw", "lambda_bw", "lambda_bb"}


def test_sweep_spec():
    s = SweepSpec.parse("tau:0:4:5:linear")
    assert list(s.values()) == [0, 1, 2, 3, 4]
    assert SweepSpec.parse("q:1:100:3:log").values()[1] == pytest.approx(10.0)
    for bad in ("tau:1:0:5", "tau:0:1:1", "q:0:1:5:log", "x:0:1:5", "tau:0:1", "tau:0:1:5:cubic"):
        with pytest.raises(ConfigError):
            SweepSpec.parse(bad)


def test_fmt():
    assert cli.fmt(1 / 3) == "0.333333333333"
    assert cli.fmt(None) == "" and cli.fmt(float("nan")) == ""
    assert cli.fmt(True) == "1" and cli.fmt(2) == "2"


def test_detection_curve_fig3_minimum(tmp_path):
    out = tmp_path / "f3.csv"
    assert cli.run(["figure", "fig3", "--out", str(out)]) == 0
    text = out.read_bytes().decode()
    assert "\r" not in text
    lines = text.splitlines()
    assert lines[0] == ",".join(cli.DETECTION_HEADER)
    rows = [list(map(lambda v: float(v) if v else None, l.split(","))) for l in lines[1:]]
    best = min(rows, key=lambda r: r[3])
    assert best[0] == 2.0 and best[3] == pytest.approx(0.306852819440, abs=1e-11)
    assert all(r[1] == 1.0 for r in rows if r[0] < 1.0)


def test_detection_curve_fig4_minimum(tmp_path):
    out = tmp_path / "f4.csv"
    assert cli.run(["figure", "fig4", "--out", str(out), "--mc", "--draws", "20000"]) == 0
    rows = [l.split(",") for l in out.read_text().splitlines()[1:]]
    best = min(rows, key=lambda r: float(r[3]))
    assert float(best[0]) == 2.0
    assert all(r[4] != "" for r in rows)


def test_detection_curve_command(tmp_path, capsys):
    cfg = tmp_path / "c.conf"
    cfg.write_text("scheme = conventional\n")
    assert cli.run(["detection-curve", "--config", str(cfg), "--sweep", "tau:0:3:4"]) == 0
    out = capsys.readouterr().out.splitlines()
    assert len(out) == 5 and out[1].startswith("0,1,0,1,,,,")


def test_ect_sweep_command(tmp_path):
    cfg = tmp_path / "c.conf"
    cfg.write_text("scheme = conventional\nrate = 1\nepsilon = 0.1\n")
    out = tmp_path / "e.csv"
    assert cli.run(["ect-sweep", "--config", str(cfg), "--sweep", "p_b_max_db:0:20:3",
                    "--out", str(out)]) == 0
    lines = out.read_text().splitlines()
    assert lines[0] == ",".join(cli.ECT_HEADER)
    first = lines[1].split(",")
    assert first[3] == "0" and first[6] == "0"  # Q_eps too small to decode R=1
    last = lines[-1].split(",")
    assert float(last[3]) > 0 and last[6] == "1" and last[5] != ""


def test_exit_codes(tmp_path, capsys):
    missing = tmp_path / "nope.conf"
    assert cli.run(["verify", "--config", str(missing)]) == cli.EXIT_CONFIG
    bad = tmp_path / "bad.conf"
    bad.write_text("scheme = truncated\n")
    assert cli.run(["detection-curve", "--config", str(bad)]) == cli.EXIT_CONFIG
    undecodable = tmp_path / "u.conf"
    undecodable.write_text("rate = 1\n")
    assert cli.run(["verify", "--config", str(undecodable), "--draws", "100"]) == cli.EXIT_CONFIG
    assert cli.run(["ect-sweep", "--sweep", "tau:0:1:3"]) == cli.EXIT_CONFIG
    with pytest.raises(SystemExit) as info:
        cli.run(["figure", "fig9"])
    assert info.value.code == 2
    capsys.readouterr()


def test_numeric_error_exit(tmp_path, capsys):
    cfg = tmp_path / "c.conf"
    cfg.write_text("scheme = truncated\np_a_max_db = 0\nq = 1e-305\n")
    assert cli.run(["detection-curve", "--config", str(cfg), "--sweep", "tau:0:3:4"]) == cli.EXIT_NUMERIC
    capsys.readouterr()


def test_verify_pass_and_corruption(capsys):
    assert cli.run(["verify", "--draws", "200000"]) == cli.EXIT_OK
    report = capsys.readouterr().out
    assert report.count("PASS") == 7
    text = "scheme = conventional\nq = 2\nrate = 1\np_b_max_db = 10\n"
    settings = parse_config_text(text)
    report, ok = cli.verify_report(settings, 200_000, 42, perturb={"lambda_bb": 1.5})
    assert not ok
    assert [l.split()[1] for l in report.splitlines() if l.startswith("FAIL")] == ["delta"]


def test_verify_same_seed_same_report(capsys):
    cli.run(["verify", "--draws", "50000", "--seed", "3"])
    a = capsys.readouterr().out
    cli.run(["verify", "--draws", "50000", "--seed", "3", "--threads", "4"])
    b = capsys.readouterr().out
    assert a == b
