"""Rendering helpers shared by the CLI.

Data outputs carry exact rationals as strings; nothing here converts to
floating point. JSON text is canonical (two-space indent, insertion
order preserved) so parsing and re-rendering reproduces it byte for byte.
"""

import csv
import io
import json

from .eps import EpsLaurent
from .rational import rat_str

FORMATS = ("json", "csv", "markdown", "latex")


def eps_series_obj(value: EpsLaurent) -> dict:
    """{"exponent": "p/q"} with keys ascending numerically."""
    return {str(e): rat_str(c) for e, c in sorted(value.terms.items())}


def eps_poly_str(value: EpsLaurent) -> str:
    """Single-line polynomial rendering for table cells, e.g. "3 + 1/4*eps^2"."""
    if not value.terms:
        return "0"
    parts = []
    for e, c in sorted(value.terms.items()):
        if e == 0:
            parts.append(rat_str(c))
        elif e == 1:
            parts.append(f"{rat_str(c)}*eps")
        else:
            parts.append(f"{rat_str(c)}*eps^{e}")
    return " + ".join(parts).replace("+ -", "- ")


def to_json(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def _render_csv(headers, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(headers)
    for row in rows:
        w.writerow(row)
    return buf.getvalue()


def _render_markdown(headers, rows) -> str:
    lines = [
        "| " + " | ".join(headers) + " |",
        "| " + " | ".join("---" for _ in headers) + " |",
    ]
    for row in rows:
        lines.append("| " + " | ".join(str(c) for c in row) + " |")
    return "\n".join(lines) + "\n"


def _render_latex(headers, rows) -> str:
    cols = "l" * len(headers)
    lines = [
        f"\\begin{{tabular}}{{{cols}}}",
        "\\hline",
        " & ".join(headers) + " \\\\",
        "\\hline",
    ]
    for row in rows:
        lines.append(" & ".join(str(c) for c in row) + " \\\\")
    lines += ["\\hline", "\\end{tabular}"]
    return "\n".join(lines) + "\n"


def render_rows(headers, rows, fmt: str) -> str:
    """Render a header + string-cell row list in csv, markdown or latex."""
    if fmt == "csv":
        return _render_csv(headers, rows)
    if fmt == "markdown":
        return _render_markdown(headers, rows)
    if fmt == "latex":
        return _render_latex(headers, rows)
    raise ValueError(f"no tabular renderer for format {fmt!r}")
