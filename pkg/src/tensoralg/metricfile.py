"""Line-oriented metric definition files.

Sections introduce what a line defines; every content line is
``[section] key = value`` (the section tag may be omitted on continuation
lines).  Example::

    [chart] coords = t, r, theta, phi
    [constants] m
    [metric] row = (2*m-r)/r, 0, 0, 0
    [metric] row = 0, r/(r-2*m), 0, 0
    [metric] row = 0, 0, r^2, 0
    [metric] row = 0, 0, 0, r^2*sin(theta)^2
    [frame] row = sqrt((r-2*m)/r), 0, 0, 0
    ...
    [frame] frame_metric = diag(-1,1,1,1)

Optional ``[torsion] entry = i, j, k, expression`` lines (1-based indices)
install a torsion tensor, and ``[nonmetricity] mu = p, q, ...`` the
nonmetricity vector.  ``#`` starts a comment.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import scalars
from .curvature import MetricContext, setup_frame, setup_metric


class MetricFileError(ValueError):
    """Malformed metric definition file; message carries the line number."""


@dataclass
class MetricFile:
    coords: list = field(default_factory=list)
    constants: list = field(default_factory=list)
    metric_rows: list = field(default_factory=list)
    frame_rows: list = field(default_factory=list)
    frame_metric: list = field(default_factory=list)
    torsion_entries: list = field(default_factory=list)
    nonmetricity: list | None = None

    def to_context(self, frame: bool = False) -> MetricContext:
        n = len(self.coords)
        if n < 2:
            raise MetricFileError("chart must declare at least two coordinates")
        if frame or (not self.metric_rows and self.frame_rows):
            if not self.frame_rows:
                raise MetricFileError("no [frame] rows to build the metric from")
            lfg = self.frame_metric or _identity_rows(n)
            ctx = setup_frame(self.coords, self.frame_rows, lfg,
                              constants=tuple(self.constants))
        else:
            if len(self.metric_rows) != n:
                raise MetricFileError(
                    f"expected {n} metric rows, found {len(self.metric_rows)}")
            ctx = setup_metric(self.coords, self.metric_rows,
                               constants=tuple(self.constants))
        if self.torsion_entries:
            tau = [[[0] * n for _ in range(n)] for _ in range(n)]
            for (i, j, k, expr) in self.torsion_entries:
                tau[i - 1][j - 1][k - 1] = expr
                tau[j - 1][i - 1][k - 1] = f"-({expr})"
            ctx.set_torsion(tau)
        if self.nonmetricity is not None:
            ctx.set_nonmetricity(self.nonmetricity)
        return ctx

    def render(self) -> str:
        lines = [f"[chart] coords = {', '.join(self.coords)}"]
        if self.constants:
            lines.append(f"[constants] {', '.join(self.constants)}")
        for row in self.metric_rows:
            lines.append(f"[metric] row = {', '.join(row)}")
        for row in self.frame_rows:
            lines.append(f"[frame] row = {', '.join(row)}")
        if self.frame_rows and self.frame_metric:
            diag = _as_diag(self.frame_metric)
            if diag is not None:
                lines.append(f"[frame] frame_metric = diag({','.join(diag)})")
            else:
                for row in self.frame_metric:
                    lines.append(f"[frame] metric_row = {', '.join(row)}")
        for (i, j, k, expr) in self.torsion_entries:
            lines.append(f"[torsion] entry = {i}, {j}, {k}, {expr}")
        if self.nonmetricity is not None:
            lines.append(f"[nonmetricity] mu = {', '.join(self.nonmetricity)}")
        return "\n".join(lines) + "\n"


def _identity_rows(n):
    return [["1" if i == j else "0" for j in range(n)] for i in range(n)]


def _as_diag(rows):
    n = len(rows)
    if all(rows[i][j] == "0" for i in range(n) for j in range(n) if i != j):
        return [rows[i][i] for i in range(n)]
    return None


def _split_values(text):
    return [part.strip() for part in text.split(",") if part.strip()]


def parse_metric_file(text: str) -> MetricFile:
    """Parse metric definition text, reporting errors with line numbers."""
    mf = MetricFile()
    section = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("["):
            end = line.find("]")
            if end < 0:
                raise MetricFileError(f"line {lineno}: unterminated section tag")
            section = line[1:end].strip().lower()
            line = line[end + 1:].strip()
            if not line:
                if section == "constants":
                    continue
                continue
        if section is None:
            raise MetricFileError(f"line {lineno}: content before any section")
        if "=" in line:
            key, _, value = line.partition("=")
            key, value = key.strip().lower(), value.strip()
        else:
            key, value = None, line
        try:
            _ingest(mf, section, key, value)
        except MetricFileError:
            raise
        except ValueError as exc:
            raise MetricFileError(f"line {lineno}: {exc}") from exc
    # validate expressions early so errors carry context
    for row in mf.metric_rows + mf.frame_rows + mf.frame_metric:
        for entry in row:
            scalars.parse(entry)
    return mf


def _ingest(mf, section, key, value):
    if section == "chart":
        if key != "coords":
            raise ValueError(f"unknown chart key {key!r}")
        mf.coords = _split_values(value)
    elif section == "constants":
        if key not in (None, "names"):
            raise ValueError(f"unknown constants key {key!r}")
        mf.constants.extend(_split_values(value))
    elif section == "metric":
        if key != "row":
            raise ValueError(f"unknown metric key {key!r}")
        mf.metric_rows.append(_split_values(value))
    elif section == "frame":
        if key == "row":
            mf.frame_rows.append(_split_values(value))
        elif key == "frame_metric":
            value = value.strip()
            if value.startswith("diag(") and value.endswith(")"):
                diag = _split_values(value[5:-1])
                n = len(diag)
                mf.frame_metric = [
                    [diag[i] if i == j else "0" for j in range(n)]
                    for i in range(n)]
            else:
                raise ValueError("frame_metric expects diag(...) syntax")
        elif key == "metric_row":
            mf.frame_metric.append(_split_values(value))
        else:
            raise ValueError(f"unknown frame key {key!r}")
    elif section == "torsion":
        if key != "entry":
            raise ValueError(f"unknown torsion key {key!r}")
        parts = _split_values(value)
        if len(parts) != 4:
            raise ValueError("torsion entry wants: i, j, k, expression")
        mf.torsion_entries.append(
            (int(parts[0]), int(parts[1]), int(parts[2]), parts[3]))
    elif section == "nonmetricity":
        if key != "mu":
            raise ValueError(f"unknown nonmetricity key {key!r}")
        mf.nonmetricity = _split_values(value)
    else:
        raise ValueError(f"unknown section [{section}]")


def from_entry(entry) -> MetricFile:
    """Metric file document for a catalog entry."""
    mf = MetricFile(
        coords=list(entry.coords),
        constants=list(entry.constants),
        metric_rows=[list(row) for row in entry.lg])
    if entry.fri is not None:
        mf.frame_rows = [list(row) for row in entry.fri]
        mf.frame_metric = [list(row) for row in entry.frame_metric]
    return mf
