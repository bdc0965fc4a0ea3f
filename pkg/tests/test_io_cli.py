import json
import math

import pytest

from mmplc.cli import main, resolve_seed
from mmplc.experiments import TrialRecord
from mmplc.io import emit_csv, emit_svg_scatter, read_csv, write_json


def rec(i, adv=2.0):
    return TrialRecord(i, 0.1 + i, 3.0, 0.7, 0.1 + i, 0.7, adv, 18.0, math.log10(adv),
                       True, i % 2 == 0, False, True, 1.0)


def test_csv_round_trip(tmp_path):
    rows = [rec(2, 1 / 3), rec(0, 1e-300), rec(1, 123456.789)]
    path = emit_csv(rows, tmp_path / "x.csv")
    back = read_csv(path)
    assert back == sorted(rows, key=lambda r: r.trial_id)
    text = path.read_text()
    assert text.splitlines()[0].startswith("trial_id,sigma_min_h")
    assert "\r" not in text and text.endswith("\n")
    assert text.splitlines()[1].split(",")[-6:-2] == ["1", "1", "0", "1"]


def test_csv_failed_record_round_trip(tmp_path):
    path = emit_csv([TrialRecord.failure(0)], tmp_path / "f.csv")
    (back,) = read_csv(path)
    assert back.failed and math.isnan(back.adv)


def test_empty_csv_input_creates_nothing(tmp_path):
    target = tmp_path / "empty.csv"
    with pytest.raises(ValueError):
        emit_csv([], target)
    assert not target.exists()


def test_unwritable_csv_path(tmp_path):
    with pytest.raises(OSError):
        emit_csv([rec(0)], tmp_path / "missing" / "x.csv")


def test_read_csv_rejects_wrong_header(tmp_path):
    p = tmp_path / "bad.csv"
    p.write_text("a,b\n1,2\n")
    with pytest.raises(ValueError):
        read_csv(p)


def test_svg_counts(tmp_path):
    path = emit_svg_scatter([1.0, 2.0, 3.0, 2.5], {"mean": 2.1, "ref": 4.6}, tmp_path / "p.svg")
    text = path.read_text()
    assert text.count('class="point"') == 4
    assert text.count('class="reference"') == 2
    assert text.lstrip().startswith("<svg")


def test_svg_empty_series(tmp_path):
    target = tmp_path / "e.svg"
    with pytest.raises(ValueError):
        emit_svg_scatter([], {}, target)
    assert not target.exists()


def test_write_json(tmp_path):
    path = write_json({"b": 1, "a": [1, 2]}, tmp_path / "o.json")
    assert list(json.loads(path.read_text())) == ["b", "a"]


def test_resolve_seed(monkeypatch):
    monkeypatch.delenv("MMPLC_SEED", raising=False)
    assert resolve_seed(None) == 0
    monkeypatch.setenv("MMPLC_SEED", "42")
    assert resolve_seed(None) == 42
    assert resolve_seed(7) == 7
    monkeypatch.setenv("MMPLC_SEED", "nope")
    with pytest.raises(SystemExit):
        resolve_seed(None)


def test_cli_simulate_json_and_csv(tmp_path, monkeypatch):
    monkeypatch.setenv("MMPLC_SEED", "5")
    out, js = tmp_path / "s.csv", tmp_path / "s.json"
    argv = ["simulate", "--nt", "4", "--nr", "6", "--nrp", "8", "--alpha", "0.05",
            "--trials", "12", "--out", str(out), "--json", str(js)]
    assert main(argv) == 0
    rep = json.loads(js.read_text())
    assert rep["trials"] == 12 and rep["zf_regime"] is not None
    assert len(read_csv(out)) == 12
    # the env seed is honoured: an explicit --seed 5 reproduces the file
    out2 = tmp_path / "s2.csv"
    assert main([*argv[:-4], "--out", str(out2), "--seed", "5", "--json", str(tmp_path / "t.json")]) == 0
    assert out.read_bytes() == out2.read_bytes()


def test_cli_simulate_stdout(capsys):
    assert main(["simulate", "--nt", "3", "--trials", "3", "--precoder", "identity", "--seed", "1"]) == 0
    assert json.loads(capsys.readouterr().out)["trials"] == 3


def test_cli_reports_bad_parameters(capsys):
    assert main(["simulate", "--nt", "4", "--nr", "2", "--trials", "2"]) == 1
    assert "error" in capsys.readouterr().err
    assert main(["simulate", "--nt", "4", "--nr", "6", "--precoder", "inverse", "--trials", "2"]) == 1


def test_cli_fig1_and_plot(tmp_path):
    csv_path, svg, js = tmp_path / "f.csv", tmp_path / "f.svg", tmp_path / "f.json"
    assert main(["fig1", "--n", "3", "--trials", "7", "--out", str(csv_path), "--svg", str(svg),
                 "--json", str(js)]) == 0
    text = svg.read_text()
    assert text.count('class="point"') == 7 and text.count('class="reference"') == 2
    assert json.loads(js.read_text())["reference_log10_adv"] == pytest.approx(math.log10(9))

    svg2 = tmp_path / "g.svg"
    assert main(["plot", str(csv_path), "--out", str(svg2), "--n", "3"]) == 0
    assert svg2.read_text().count('class="point"') == 7


def test_cli_plot_missing_csv(tmp_path, capsys):
    assert main(["plot", str(tmp_path / "nope.csv"), "--out", str(tmp_path / "x.svg")]) == 1


def test_cli_edges_lsv_regime(tmp_path, capsys):
    assert main(["edges", "--nt", "20", "--yp", "2", "--trials", "3", "--seed", "1"]) == 0
    assert json.loads(capsys.readouterr().out)["n_r_prime"] == 40
    assert main(["lsv", "--n", "50", "--trials", "5"]) == 0
    assert "ks_statistic" in json.loads(capsys.readouterr().out)
    assert main(["regime", "--nt", "64"]) == 0
    out = capsys.readouterr().out
    assert "minimal contradicting y' = 96" in out
    js = tmp_path / "r.json"
    assert main(["regime", "--nt", "64", "--json", str(js)]) == 0
    assert json.loads(js.read_text())["minimal_y_prime"] == {"64": 96.0}
