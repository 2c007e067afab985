import json

import numpy as np
import pytest

from lfcalc import io as lio
from lfcalc.cli import main
from lfcalc.formal import FormalExpr, Support
from lfcalc.numeric import Grid, SampledSignal
from lfcalc.report import VerificationReport, dump_reports


def write_spec(path, alpha=1.0, terms=None, **extra):
    doc = {"alpha": alpha, "support": "half-line",
           "terms": terms or [{"coeff": [1, 0], "k": 0, "lambda": [-1, 0], "anchor": 0}]}
    doc.update(extra)
    path.write_text(json.dumps(doc))
    return str(path)


def test_spec_parsing(tmp_path):
    e = lio.load_signal_spec(write_spec(tmp_path / "s.json", 0.5))
    assert isinstance(e, FormalExpr) and e.alpha == 0.5 and len(e) == 1
    back = lio.parse_signal_spec(lio.expr_to_json(e))
    assert back == e
    doc = {"terms": [{"coeff": 1, "k": 0, "lambda": 0}], "support": {"kind": "interval", "a": -1, "b": 1}}
    e = lio.parse_signal_spec(doc, alpha=0.7)
    assert e.support == Support.interval(-1, 1)


@pytest.mark.parametrize("doc", [
    [],
    {},
    {"terms": [], "samples": "x.csv"},
    {"terms": [{"k": -1}]},
    {"terms": [{"coeff": "a"}]},
    {"terms": [{"anchor": 0}, {"anchor": 1}]},
    {"terms": [], "alpha": 1.5},
    {"terms": [], "support": "circle"},
])
def test_spec_errors(doc):
    with pytest.raises(lio.SpecError):
        lio.parse_signal_spec(doc)


def test_signal_csv_round_trip(tmp_path):
    g = Grid.linspace(0, 1, 5)
    sig = SampledSignal(g, np.exp(1j * g.points))
    p = tmp_path / "sig.csv"
    lio.write_signal_csv(p, sig, {"alpha": 0.5})
    back = lio.read_signal_csv(p)
    assert np.array_equal(back.values, sig.values) and np.array_equal(back.x, sig.x)
    (tmp_path / "bad.csv").write_text("x,re\n0,1\n1,2\n")
    with pytest.raises(lio.SpecError):
        lio.read_signal_csv(tmp_path / "bad.csv")
    (tmp_path / "empty.csv").write_text("")
    with pytest.raises(lio.SpecError):
        lio.read_signal_csv(tmp_path / "empty.csv")


def test_svg_is_static_markup(tmp_path):
    text = lio.svg_plot(tmp_path / "p.svg", [0, 1, 2], [("a<b", [1, 3, 2])], title="t")
    assert text.startswith("<svg") and "<polyline" in text and "a&lt;b" in text
    assert "<script" not in text


def test_report_serialization(tmp_path):
    r = VerificationReport("shift", 1.0, 1.0, 2e-13, 1e-12, variant="v", asserted=True, alpha=1.0)
    text = r.to_text()
    for field in ("identity", "lhs_norm", "rhs_norm", "max_abs_discrepancy", "tolerance", "pass", "variant"):
        assert f"{field}:" in text
    doc = json.loads(dump_reports([r], tmp_path / "r.json"))
    assert doc["all_asserted_pass"] is True


def test_transform_command_classical(tmp_path):
    spec = write_spec(tmp_path / "e.json")
    out = tmp_path / "s.csv"
    svg = tmp_path / "s.svg"
    assert main(["transform", spec, "--out", str(out), "--plot", str(svg)]) == 0
    header, cols, data = lio.read_csv(out)
    assert cols == ["omega", "re", "im", "closed_re", "closed_im", "gap"]
    w = data[:, 0]
    ref = 1 / (1 + 2j * np.pi * w)
    assert np.max(np.abs(data[:, 1] + 1j * data[:, 2] - ref)) < 1e-6
    assert np.max(data[:, 5]) < 1e-6
    assert header["alpha"] == "1.0" and header["convention"] == "case3"
    assert svg.read_text().startswith("<svg")


def test_transform_command_fractional_gap(tmp_path):
    spec = write_spec(tmp_path / "e.json", alpha=0.5)
    out = tmp_path / "s.csv"
    assert main(["transform", spec, "--omega-count", "17", "--nodes", "512", "--out", str(out)]) == 0
    header, cols, data = lio.read_csv(out)
    assert np.max(data[:, cols.index("gap")]) > 1e-3
    assert float(header["exponential_law_gap_probe"]) > 0


@pytest.mark.filterwarnings("ignore::RuntimeWarning")
def test_exit_codes(tmp_path, capsys):
    (tmp_path / "empty.csv").write_text("")
    (tmp_path / "emp.json").write_text(json.dumps({"samples": "empty.csv"}))
    assert main(["transform", str(tmp_path / "emp.json")]) == 2
    (tmp_path / "bad.json").write_text("{not json")
    assert main(["transform", str(tmp_path / "bad.json")]) == 2
    assert main(["transform", str(tmp_path / "missing.json")]) == 2
    assert main(["ml-eval", "1+"]) == 2
    with pytest.raises(SystemExit) as exc:
        main(["transform", "x.json", "--alpha", "2"])
    assert exc.value.code == 2
    # a signal that cannot be evaluated is a numeric failure
    spec = write_spec(tmp_path / "grow.json", alpha=1.0,
                      terms=[{"coeff": 1, "k": 0, "lambda": [800, 0]}])
    assert main(["transform", spec, "--omega-count", "3", "--nodes", "16"]) == 3


def test_inverse_command(tmp_path):
    spec = write_spec(tmp_path / "g.json", alpha=1.0)
    s = tmp_path / "s.csv"
    main(["transform", spec, "--out", str(s), "--omega-range", "-64", "64", "--omega-count", "4097",
          "--nodes", "32768"])
    out = tmp_path / "x.csv"
    assert main(["inverse", str(s), "--x-range", "0.5", "3", "--x-count", "6", "--nodes", "16384",
                 "--out", str(out)]) == 0
    header, _, _ = lio.read_csv(out)
    assert header["nodes"] == "16384" and header["spectrum_nodes"] == "32768"
    sig = lio.read_signal_csv(out)
    assert np.max(np.abs(sig.values - np.exp(-sig.x))) < 1e-2


def test_sampled_spec_convolve_and_series(tmp_path):
    g = Grid.linspace(0, 8, 801)
    lio.write_signal_csv(tmp_path / "a.csv", SampledSignal(g, np.exp(-g.points)), {})
    (tmp_path / "a.json").write_text(json.dumps({"samples": "a.csv", "support": "half-line"}))
    spec2 = write_spec(tmp_path / "b.json", terms=[{"coeff": 1, "k": 0, "lambda": -2}])
    out = tmp_path / "c.csv"
    assert main(["convolve", str(tmp_path / "a.json"), spec2, "--out", str(out)]) == 0
    sig = lio.read_signal_csv(out)
    assert np.max(np.abs(sig.values - (np.exp(-sig.x) - np.exp(-2 * sig.x)))) < 1e-4
    one = tmp_path / "one.json"
    one.write_text(json.dumps({"terms": [{"coeff": 1, "k": 0, "lambda": 0}],
                               "support": {"kind": "interval", "a": -1, "b": 1}}))
    out = tmp_path / "series.csv"
    assert main(["series", str(one), "--alpha", "0.6", "--terms", "3", "--out", str(out),
                 "--plot", str(tmp_path / "series.svg")]) == 0
    _, cols, data = lio.read_csv(out)
    assert abs(data[3, 1] - 1) < 1e-13 and data[3, 0] == 0


def test_tables(tmp_path):
    out = tmp_path / "m.csv"
    assert main(["table", "moments", "--alpha", "0.5", "--nodes", "16", "--out", str(out)]) == 0
    _, cols, data = lio.read_csv(out)
    assert data.shape[0] == 32 and np.max(data[:, 3]) <= 1e-10
    assert main(["table", "riemann-divergence", "--alpha", "0.5", "--out", str(out)]) == 0
    _, cols, data = lio.read_csv(out)
    assert np.allclose(data[:, 1], data[:, 2], rtol=1e-12, atol=0)
    assert main(["table", "ml-values", "--alpha", "1", "--out", str(out)]) == 0
    _, cols, data = lio.read_csv(out)
    assert np.max(data[:, -1]) <= 1e-12
    assert main(["table", "ml-values", "--alpha", "0.5", "--out", str(out)]) == 0
    _, cols, data = lio.read_csv(out)
    assert np.max(data[:, -1]) <= 1e-10


def test_ml_eval_command(capsys):
    assert main(["ml-eval", "--alpha", "0.5", "1", "2-1j"]) == 0
    text = capsys.readouterr().out
    assert "5.00898" in text


def test_verify_formal_command(tmp_path):
    out = tmp_path / "r.json"
    assert main(["verify", "--suite", "formal", "--count", "5", "--roundtrip-count", "20",
                 "--out", str(out)]) == 0
    doc = json.loads(out.read_text())
    assert doc["all_asserted_pass"]
    assert {r["identity"] for r in doc["reports"]} >= {"linearity", "derivative", "convolution"}


def test_verify_numeric_fractional_reports_only(tmp_path):
    out = tmp_path / "r.json"
    assert main(["verify", "--suite", "numeric", "--alpha", "0.7", "--out", str(out)]) == 0
    doc = json.loads(out.read_text())
    assert any(not r["asserted"] for r in doc["reports"])


def test_determinism(tmp_path):
    spec = write_spec(tmp_path / "e.json", alpha=0.6)
    outs = []
    for i in range(2):
        p = tmp_path / f"s{i}.csv"
        main(["transform", spec, "--omega-count", "33", "--nodes", "256", "--seed", "7", "--out", str(p)])
        outs.append(p.read_bytes())
    assert outs[0] == outs[1]
