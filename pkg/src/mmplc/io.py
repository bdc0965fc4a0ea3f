"""CSV, JSON and SVG output."""

from __future__ import annotations

import csv
import json
import math
from pathlib import Path

import numpy as np

from .experiments import CSV_FIELDS, TrialRecord

_BOOL_FIELDS = {"b_success_paper", "b_success_symbol", "e_success_paper", "e_success_symbol", "failed"}


def _fmt(name: str, value) -> str:
    if name in _BOOL_FIELDS:
        return "1" if value else "0"
    if name == "trial_id":
        return str(int(value))
    # repr gives the shortest string that round-trips exactly
    return repr(float(value))


def emit_csv(records, path) -> Path:
    """Write trial records in trial order. Float columns round-trip bit-exactly."""
    records = sorted(records, key=lambda r: r.trial_id)
    if not records:
        raise ValueError("no records to write")
    path = Path(path)
    try:
        with path.open("w", newline="", encoding="ascii") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(CSV_FIELDS)
            for r in records:
                w.writerow([_fmt(name, getattr(r, name)) for name in CSV_FIELDS])
    except OSError as exc:
        raise OSError(f"cannot write CSV to {path}: {exc}") from exc
    return path


def read_csv(path) -> list[TrialRecord]:
    path = Path(path)
    try:
        fh = path.open(newline="", encoding="ascii")
    except OSError as exc:
        raise OSError(f"cannot read CSV from {path}: {exc}") from exc
    with fh:
        reader = csv.DictReader(fh)
        if tuple(reader.fieldnames or ()) != CSV_FIELDS:
            raise ValueError(f"{path}: unexpected header {reader.fieldnames}")
        out = []
        for row in reader:
            kw = {}
            for name in CSV_FIELDS:
                raw = row[name]
                if name in _BOOL_FIELDS:
                    kw[name] = raw == "1"
                elif name == "trial_id":
                    kw[name] = int(raw)
                else:
                    kw[name] = float(raw)
            out.append(TrialRecord(**kw))
    return out


def write_json(obj: dict, path) -> Path:
    path = Path(path)
    try:
        path.write_text(json.dumps(obj, indent=2) + "\n", encoding="utf-8")
    except OSError as exc:
        raise OSError(f"cannot write JSON to {path}: {exc}") from exc
    return path


def emit_svg_scatter(
    series,
    reference_lines: dict[str, float],
    path,
    *,
    title: str = "",
    x_label: str = "trial",
    y_label: str = "log10(adv)",
    width: int = 800,
    height: int = 480,
) -> Path:
    """Scatter ``series`` against its index with labelled horizontal reference lines."""
    y = np.asarray(series, dtype=np.float64)
    if y.size == 0:
        raise ValueError("cannot plot an empty series")
    refs = {k: float(v) for k, v in reference_lines.items()}
    left, right, top, bottom = 70, 20, 40, 50
    pw, ph = width - left - right, height - top - bottom
    finite = y[np.isfinite(y)]
    lo = min([*finite, *refs.values()]) if finite.size or refs else 0.0
    hi = max([*finite, *refs.values()]) if finite.size or refs else 1.0
    pad = 0.05 * (hi - lo) if hi > lo else 0.5
    lo, hi = lo - pad, hi + pad

    def sx(i):
        return left + (pw * i / max(1, y.size - 1))

    def sy(v):
        return top + ph * (hi - v) / (hi - lo)

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        f'<rect x="{left}" y="{top}" width="{pw}" height="{ph}" fill="white" stroke="black"/>',
        f'<text x="{width / 2:.1f}" y="24" text-anchor="middle" font-size="15">{title}</text>',
        f'<text x="{left + pw / 2:.1f}" y="{height - 12}" text-anchor="middle" font-size="13">{x_label}</text>',
        f'<text x="16" y="{top + ph / 2:.1f}" text-anchor="middle" font-size="13" '
        f'transform="rotate(-90 16 {top + ph / 2:.1f})">{y_label}</text>',
    ]
    for k in range(5):
        v = lo + (hi - lo) * k / 4
        parts.append(
            f'<text x="{left - 6}" y="{sy(v) + 4:.1f}" text-anchor="end" font-size="11">{v:.2f}</text>'
        )
    parts.append('<g class="points" fill="steelblue">')
    for i, v in enumerate(y):
        if math.isfinite(v):
            parts.append(f'<circle class="point" cx="{sx(i):.2f}" cy="{sy(v):.2f}" r="2"/>')
    parts.append("</g>")
    colours = ["crimson", "darkgreen", "darkorange", "purple"]
    for j, (label, v) in enumerate(refs.items()):
        c = colours[j % len(colours)]
        parts.append(
            f'<line class="reference" x1="{left}" y1="{sy(v):.2f}" x2="{left + pw}" '
            f'y2="{sy(v):.2f}" stroke="{c}" stroke-width="2" stroke-dasharray="6 3"/>'
        )
        parts.append(
            f'<text x="{left + pw - 4}" y="{sy(v) - 5:.2f}" text-anchor="end" font-size="12" '
            f'fill="{c}">{label} = {v:.3f}</text>'
        )
    parts.append("</svg>")
    path = Path(path)
    try:
        path.write_text("\n".join(parts) + "\n", encoding="utf-8")
    except OSError as exc:
        raise OSError(f"cannot write SVG to {path}: {exc}") from exc
    return path
