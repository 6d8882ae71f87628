"""Command-line interface: parsing, exit codes, report determinism."""

import json

import pytest

from mirrorkit import cli


@pytest.mark.parametrize(
    "text,value",
    [
        ("1", 1 + 0j),
        ("-2.5", -2.5 + 0j),
        ("0.3-0.7i", 0.3 - 0.7j),
        ("2/3+1/5i", complex(2 / 3, 1 / 5)),
        ("1e-3+2i", 0.001 + 2j),
        ("i", 1j),
        ("-i", -1j),
        ("4+j", 4 + 1j),
        ("-1/4i", -0.25j),
    ],
)
def test_parse_complex(text, value):
    assert cli.parse_complex(text) == value


@pytest.mark.parametrize("bad", ["", "1+", "1i+2", "one", "2//3", "1e+i"])
def test_parse_complex_rejects_garbage(bad):
    with pytest.raises(ValueError):
        cli.parse_complex(bad)


def test_parse_complex_list_arity():
    assert cli.parse_complex_list("1,2i", expect=2) == (1 + 0j, 2j)
    with pytest.raises(ValueError):
        cli.parse_complex_list("1,2i", expect=3)


def test_parse_poly():
    fn = cli.parse_poly("p1*p2 + 2*I", 2)
    assert fn((3 + 0j, 5 + 0j)) == 15 + 2j
    alias = cli.parse_poly("p^2", 1)
    assert alias((4 + 0j,)) == 16 + 0j
    with pytest.raises(ValueError):
        cli.parse_poly("__import__('os')", 1)
    with pytest.raises(ValueError):
        cli.parse_poly("q + 1", 1)


def test_thread_cap_validation(monkeypatch):
    monkeypatch.setenv("MIRRORKIT_THREADS", "2")
    assert cli._thread_cap() == 2
    monkeypatch.setenv("MIRRORKIT_THREADS", "zero")
    with pytest.raises(SystemExit):
        cli._thread_cap()
    monkeypatch.setenv("MIRRORKIT_THREADS", "0")
    with pytest.raises(SystemExit):
        cli._thread_cap()
    monkeypatch.delenv("MIRRORKIT_THREADS")
    assert cli._thread_cap() is None


def test_series_command_writes_passing_report(tmp_path):
    out = tmp_path / "series.json"
    code = cli.main(
        ["series", "--model", "P1", "--kind", "h", "--dmax", "2", "--output", str(out)]
    )
    assert code == 0
    data = json.loads(out.read_text())
    assert data["passed"] is True
    assert data["command"] == "series"
    assert data["model"]["name"] == "P1"


def test_verify_command_exit_zero(tmp_path):
    out = tmp_path / "verify.json"
    code = cli.main(
        ["verify", "--model", "P1", "--kind", "k", "--dmax", "3", "--output", str(out)]
    )
    assert code == 0
    data = json.loads(out.read_text())
    assert data["results"]["all_pass"] is True


def test_critical_command_reports_points(tmp_path):
    out = tmp_path / "crit.json"
    code = cli.main(["critical", "--model", "P1", "--Q", "4", "--output", str(out)])
    assert code == 0
    data = json.loads(out.read_text())
    assert len(data["results"]["points"]) == 2


def test_error_exit_code_on_bad_arity(tmp_path, capsys):
    # P1xP1 needs two Novikov components; one is a structured error, not a crash
    code = cli.main(["critical", "--model", "P1xP1", "--Q", "1"])
    assert code == 2
    data = json.loads(capsys.readouterr().out)
    assert data["passed"] is False
    assert data["results"]["error"] == "ValueError"


def test_error_exit_code_on_domain_error(capsys):
    code = cli.main(["integrate", "--model", "P1", "--kind", "h", "--Q", "1", "--z", "-0.5"])
    assert code == 2
    data = json.loads(capsys.readouterr().out)
    assert data["results"]["error"] == "ContourDivergence"


def test_unknown_model_is_structured(capsys):
    code = cli.main(["series", "--model", "P3"])
    assert code == 2
    data = json.loads(capsys.readouterr().out)
    assert data["results"]["error"] == "UnknownModel"


def test_integrate_stationary_phase_and_plot_data(tmp_path):
    out = tmp_path / "sp.json"
    plot = tmp_path / "sp.dat"
    code = cli.main(
        [
            "integrate", "--model", "P1", "--kind", "h", "--Q", "1", "--z", "0.2",
            "--stationary-phase", "0.2,0.1", "--plot-data", str(plot),
            "--output", str(out),
        ]
    )
    assert code == 0
    rows = [line.split() for line in plot.read_text().splitlines() if line.strip()]
    assert len(rows) == 2
    assert float(rows[0][1]) > float(rows[1][1])  # deviation shrinks with z


def test_reports_are_byte_identical_across_runs(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    argv = ["critical", "--model", "P2", "--Q", "1", "--output"]
    assert cli.main(argv + [str(a)]) == 0
    assert cli.main(argv + [str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()
