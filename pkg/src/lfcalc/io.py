"""CSV, JSON signal specs and static SVG plots.

CSV files carry ``# key: value`` comment lines followed by a header row.
Floats are written with ``repr`` so identical runs give identical bytes.
"""

from __future__ import annotations

import csv
import io as _io
import json
import math
from pathlib import Path

import numpy as np

from .formal import FormalExpr, FormalTerm, RationalSpectrum, Support
from .numeric import Grid, SampledSignal
from .special import KernelConvention

__all__ = [
    "SpecError",
    "expr_to_json",
    "load_signal_spec",
    "read_csv",
    "read_signal_csv",
    "read_spectrum_csv",
    "spectrum_to_json",
    "svg_plot",
    "write_csv",
]


class SpecError(ValueError):
    """Malformed input file or signal spec."""


def _fmt(v) -> str:
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return str(v)


def write_csv(path, header: dict, columns, rows) -> str:
    """Write (or return, when ``path`` is None) a commented CSV document."""
    buf = _io.StringIO()
    for k, v in header.items():
        buf.write(f"# {k}: {_fmt(v)}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for row in rows:
        w.writerow([_fmt(v) for v in row])
    text = buf.getvalue()
    if path is not None:
        Path(path).write_text(text, encoding="utf-8")
    return text


def read_csv(path):
    """Return ``(header_dict, column_names, float_matrix)``."""
    try:
        lines = Path(path).read_text(encoding="utf-8").splitlines()
    except OSError as exc:
        raise SpecError(f"cannot read {path}: {exc}") from exc
    header = {}
    body = []
    for line in lines:
        if line.startswith("#"):
            key, _, val = line[1:].partition(":")
            header[key.strip()] = val.strip()
        elif line.strip():
            body.append(line)
    if not body:
        raise SpecError(f"{path}: no header row")
    cols = [c.strip() for c in next(csv.reader([body[0]]))]
    try:
        data = np.array(
            [[float(v) for v in r] for r in csv.reader(body[1:])], dtype=float
        ).reshape(-1, len(cols))
    except ValueError as exc:
        raise SpecError(f"{path}: non-numeric or ragged data ({exc})") from exc
    return header, cols, data


def _require(cols, names, path):
    missing = [n for n in names if n not in cols]
    if missing:
        raise SpecError(f"{path}: missing columns {missing}")
    return [cols.index(n) for n in names]


def read_signal_csv(path, support: str = "interval") -> SampledSignal:
    """Samples from a CSV with columns ``x, re, im``."""
    _, cols, data = read_csv(path)
    ix, ir, ii = _require(cols, ["x", "re", "im"], path)
    if data.shape[0] < 2:
        raise SpecError(f"{path}: a signal needs at least 2 samples")
    try:
        grid = Grid(data[:, ix])
        return SampledSignal(grid, data[:, ir] + 1j * data[:, ii], support)
    except ValueError as exc:
        raise SpecError(f"{path}: {exc}") from exc


def write_signal_csv(path, sig: SampledSignal, header: dict) -> str:
    rows = zip(sig.x, sig.values.real, sig.values.imag)
    return write_csv(path, header, ["x", "re", "im"], rows)


def read_spectrum_csv(path):
    """``Spectrum`` from a CSV written by the transform command."""
    from .transform import Spectrum

    header, cols, data = read_csv(path)
    iw, ir, ii = _require(cols, ["omega", "re", "im"], path)
    try:
        return Spectrum(
            Grid(data[:, iw]),
            data[:, ir] + 1j * data[:, ii],
            KernelConvention.parse(header.get("convention", "case3")),
            float(header["alpha"]),
            float(header.get("truncation", "nan")),
            int(header.get("nodes", "0")),
        )
    except (KeyError, ValueError) as exc:
        raise SpecError(f"{path}: bad spectrum file ({exc})") from exc


# --------------------------------------------------------------------------
# JSON


def _complex(v, what):
    if isinstance(v, (int, float)):
        return complex(v)
    if isinstance(v, (list, tuple)) and len(v) == 2:
        return complex(float(v[0]), float(v[1]))
    raise SpecError(f"{what} must be a number or [re, im]")


def _support(obj, anchor):
    if obj is None or obj == "half-line":
        return Support.half_line(anchor)
    if isinstance(obj, dict) and obj.get("kind") == "interval":
        return Support.interval(float(obj["a"]), float(obj["b"]))
    if isinstance(obj, dict) and obj.get("kind") == "half-line":
        return Support.half_line(float(obj.get("a", anchor)))
    raise SpecError(f"unknown support {obj!r}")


def parse_signal_spec(doc, base_dir=None, alpha=None):
    """Signal spec dictionary to ``FormalExpr`` or ``SampledSignal``.

    Exactly one of ``terms`` (symbolic) or ``samples`` (CSV path) is allowed.
    """
    if not isinstance(doc, dict):
        raise SpecError("signal spec must be a JSON object")
    has_terms, has_samples = "terms" in doc, "samples" in doc
    if has_terms == has_samples:
        raise SpecError("signal spec needs exactly one of 'terms' or 'samples'")
    a = alpha if alpha is not None else doc.get("alpha", 1.0)
    try:
        a = float(a)
    except (TypeError, ValueError):
        raise SpecError("alpha must be a number") from None
    if not 0 < a <= 1:
        raise SpecError("alpha must lie in (0, 1]")
    if has_samples:
        p = Path(doc["samples"])
        if base_dir is not None and not p.is_absolute():
            p = Path(base_dir) / p
        return read_signal_csv(p, doc.get("support", "interval"))
    terms = doc["terms"]
    if not isinstance(terms, list):
        raise SpecError("'terms' must be a list")
    anchors = {float(t.get("anchor", 0.0)) for t in terms if isinstance(t, dict)}
    if len(anchors) > 1:
        raise SpecError("all terms must share one anchor")
    anchor = anchors.pop() if anchors else 0.0
    out = []
    for t in terms:
        if not isinstance(t, dict):
            raise SpecError("each term must be an object")
        try:
            k = int(t.get("k", 0))
        except (TypeError, ValueError):
            raise SpecError("k must be an integer") from None
        if k < 0:
            raise SpecError("k must be nonnegative")
        out.append(FormalTerm(_complex(t.get("coeff", 1.0), "coeff"), k,
                              _complex(t.get("lambda", 0.0), "lambda")))
    try:
        return FormalExpr.build(out, a, anchor, _support(doc.get("support"), anchor))
    except (KeyError, TypeError, ValueError) as exc:
        raise SpecError(f"invalid symbolic spec: {exc}") from exc


def load_signal_spec(path, alpha=None):
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as exc:
        raise SpecError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise SpecError(f"{path}: invalid JSON ({exc})") from exc
    return parse_signal_spec(doc, Path(path).parent, alpha)


def expr_to_json(e: FormalExpr) -> dict:
    sup = e.support
    return {
        "alpha": e.alpha,
        "support": {"kind": sup.kind, "a": sup.a, "b": None if math.isinf(sup.b) else sup.b},
        "terms": e.to_records(),
    }


def spectrum_to_json(S: RationalSpectrum) -> dict:
    return {"alpha": S.alpha, "variable": "s = i^a h0 omega^a", "terms": S.to_records()}


# --------------------------------------------------------------------------
# SVG


def svg_plot(path, x, series, title="", xlabel="", ylabel="", width=640, height=400) -> str:
    """Static line plot: axes, tick labels and one polyline per series.

    ``series`` is a list of ``(label, y)`` pairs.
    """
    colors = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd"]
    x = np.asarray(x, dtype=float)
    ys = [np.asarray(y, dtype=float) for _, y in series]
    ml, mr, mt, mb = 70, 20, 40, 50
    pw, ph = width - ml - mr, height - mt - mb
    x0, x1 = float(x.min()), float(x.max())
    finite = np.concatenate([y[np.isfinite(y)] for y in ys]) if ys else np.zeros(1)
    y0, y1 = float(finite.min()), float(finite.max())
    if x1 == x0:
        x1 = x0 + 1.0
    if y1 == y0:
        y1 = y0 + 1.0

    def px(v):
        return ml + (v - x0) / (x1 - x0) * pw

    def py(v):
        return mt + ph - (v - y0) / (y1 - y0) * ph

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        f'<rect x="0" y="0" width="{width}" height="{height}" fill="white"/>',
        f'<rect x="{ml}" y="{mt}" width="{pw}" height="{ph}" fill="none" stroke="black"/>',
    ]
    for i in range(5):
        tx = x0 + (x1 - x0) * i / 4
        ty = y0 + (y1 - y0) * i / 4
        out.append(f'<text x="{px(tx):.2f}" y="{mt + ph + 18}" font-size="11" '
                   f'text-anchor="middle">{tx:.3g}</text>')
        out.append(f'<text x="{ml - 6}" y="{py(ty) + 4:.2f}" font-size="11" '
                   f'text-anchor="end">{ty:.3g}</text>')
    for j, ((label, _), y) in enumerate(zip(series, ys)):
        ok = np.isfinite(y)
        pts = " ".join(f"{px(a):.2f},{py(b):.2f}" for a, b in zip(x[ok], y[ok]))
        c = colors[j % len(colors)]
        out.append(f'<polyline fill="none" stroke="{c}" stroke-width="1.2" points="{pts}"/>')
        out.append(f'<text x="{ml + 8}" y="{mt + 14 + 14 * j}" font-size="11" fill="{c}">'
                   f"{_esc(label)}</text>")
    out.append(f'<text x="{width / 2}" y="22" font-size="14" text-anchor="middle">{_esc(title)}</text>')
    out.append(f'<text x="{ml + pw / 2}" y="{height - 10}" font-size="12" '
               f'text-anchor="middle">{_esc(xlabel)}</text>')
    out.append(f'<text x="16" y="{mt + ph / 2}" font-size="12" text-anchor="middle" '
               f'transform="rotate(-90 16 {mt + ph / 2})">{_esc(ylabel)}</text>')
    out.append("</svg>")
    text = "\n".join(out) + "\n"
    if path is not None:
        Path(path).write_text(text, encoding="utf-8")
    return text


def _esc(s: str) -> str:
    return str(s).replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")
