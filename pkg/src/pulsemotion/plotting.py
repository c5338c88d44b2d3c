"""SVG rendering of pipeline artifacts, with the plotted numbers echoed
as CSV next to the figure.

Three artifact kinds are understood: a ComponentSet CSV ("components"),
a match-curve CSV with peak markers ("match-curve"), and a selected
component with labeled peaks ("peaks"). SVG output is deterministic
(fixed hash salt, no embedded date).
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from . import bss  # noqa: E402
from .errors import DataError  # noqa: E402

plt.rcParams["svg.hashsalt"] = "pulsemotion"

KINDS = ("components", "match-curve", "peaks")


def _read_artifact_table(path):
    """Parse an artifact CSV: meta dict, column names, float columns."""
    with open(path, "r", encoding="utf-8") as fh:
        lines = fh.read().splitlines()
    if len(lines) < 3 or not lines[0].startswith("#"):
        raise DataError(f"{path}: not an artifact CSV (missing comment header)")
    meta = {}
    for tok in lines[0][1:].split():
        if "=" in tok:
            key, val = tok.split("=", 1)
            meta[key] = val
    columns = lines[1].split(",")
    data = {c: [] for c in columns}
    for lineno, line in enumerate(lines[2:], start=3):
        if not line.strip():
            continue
        parts = line.split(",")
        if len(parts) != len(columns):
            raise DataError(f"{path}: line {lineno}: expected "
                            f"{len(columns)} fields")
        for c, p in zip(columns, parts):
            try:
                data[c].append(float(p))
            except ValueError as exc:
                raise DataError(f"{path}: line {lineno}: {exc}") from exc
    return meta, columns, data


def _save(fig, out_path: Path) -> None:
    fig.savefig(out_path, format="svg", metadata={"Date": None})
    plt.close(fig)


def _echo_csv(out_path: Path, header: str, rows) -> None:
    with open(out_path.with_suffix(".csv"), "w", encoding="utf-8") as fh:
        fh.write(header + "\n")
        for row in rows:
            fh.write(",".join(repr(v) if isinstance(v, float) else str(v)
                              for v in row) + "\n")


def render_components(artifact_path, out_path: Path) -> None:
    cs = bss.read_components(artifact_path)
    k = cs.n_components
    t = [j / cs.sample_rate for j in range(cs.n_samples)]
    fig, axes = plt.subplots(k, 1, figsize=(10, 1.8 * k), sharex=True)
    if k == 1:
        axes = [axes]
    for i, ax in enumerate(axes):
        ax.plot(t, cs.components[i], linewidth=0.7)
        ax.set_ylabel(f"c{i}")
    axes[-1].set_xlabel("time (s)")
    fig.suptitle(f"extracted components ({cs.method})")
    _save(fig, out_path)
    rows = [[j] + [float(v) for v in cs.components[:, j]]
            for j in range(cs.n_samples)]
    _echo_csv(out_path, "t," + ",".join(f"c{i}" for i in range(k)), rows)


def render_match_curve(artifact_path, out_path: Path) -> None:
    meta, _, data = _read_artifact_table(artifact_path)
    if "pos" not in data or "dist" not in data:
        raise DataError(f"{artifact_path}: expected pos,dist columns")
    pos = data["pos"]
    dist = data["dist"]
    marks = data.get("is_peak", [0.0] * len(pos))
    window = int(float(meta.get("window", 0)))
    fig, ax = plt.subplots(figsize=(10, 4))
    ax.plot(pos, dist, linewidth=0.8, label="DTW distance")
    px = [p + window // 2 for p, m in zip(pos, marks) if m]
    # markers sit at the window centers the peak indices refer to
    py = [v for v, m in zip(dist, marks) if m]
    ax.plot(px, py, "v", color="tab:red", label="detected peaks")
    ax.set_xlabel("window start (samples)")
    ax.set_ylabel("distance")
    ax.legend()
    fig.suptitle(f"match curve (component {meta.get('component', '?')})")
    _save(fig, out_path)
    _echo_csv(out_path, "pos,dist,is_peak",
              [[int(p), float(v), int(m)] for p, v, m in zip(pos, dist, marks)])


def render_peaks(artifact_path, out_path: Path) -> None:
    meta, _, data = _read_artifact_table(artifact_path)
    if "t" not in data or "value" not in data:
        raise DataError(f"{artifact_path}: expected t,value columns")
    t = data["t"]
    value = data["value"]
    marks = data.get("is_peak", [0.0] * len(t))
    fig, ax = plt.subplots(figsize=(10, 4))
    ax.plot(t, value, linewidth=0.7)
    px = [x for x, m in zip(t, marks) if m]
    py = [v for v, m in zip(value, marks) if m]
    ax.plot(px, py, "o", color="tab:red", label="peaks")
    for n, (x, y) in enumerate(zip(px, py), start=1):
        ax.annotate(str(n), (x, y), textcoords="offset points", xytext=(0, 6),
                    fontsize=7, ha="center")
    ax.set_xlabel("sample")
    ax.set_ylabel("amplitude")
    ax.legend()
    fig.suptitle(f"peak locations on component {meta.get('component', '?')}")
    _save(fig, out_path)
    _echo_csv(out_path, "t,value,is_peak",
              [[int(x), float(v), int(m)] for x, v, m in zip(t, value, marks)])


def render(artifact_path, kind: str, out_path) -> None:
    out = Path(out_path)
    if kind == "components":
        render_components(artifact_path, out)
    elif kind == "match-curve":
        render_match_curve(artifact_path, out)
    elif kind == "peaks":
        render_peaks(artifact_path, out)
    else:
        raise DataError(f"unknown plot kind {kind!r}; expected one of {KINDS}")
