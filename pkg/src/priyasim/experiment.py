"""Run protocol x seed sweeps and write the figure CSVs."""

from __future__ import annotations

import csv
import io
import os
import tempfile
from concurrent.futures import ProcessPoolExecutor
from dataclasses import replace
from pathlib import Path

import numpy as np

from .config import ExperimentSpec, emit_config
from .engine import MetricsReport, run

CSV_FILES = ("deaths.csv", "energy.csv", "packets.csv", "node_energy.csv", "summary.csv")
CONFIG_ECHO = "resolved_config.txt"


def _fmt(x) -> str:
    if x is None:
        return "NA"
    if isinstance(x, (bool, np.bool_)):
        return str(int(x))
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return repr(float(x))


def _padded(series, length):
    """Carry the last value forward so runs of different length line up."""
    out = np.empty((len(series), length))
    for i, s in enumerate(series):
        out[i, : len(s)] = s
        out[i, len(s):] = s[-1] if s else 0.0
    return out


def median_series(reports, attr) -> np.ndarray:
    series = [getattr(r, attr) for r in reports]
    length = max(len(s) for s in series)
    if length == 0:
        return np.empty(0)
    return np.median(_padded(series, length), axis=0)


def run_all(spec: ExperimentSpec, jobs: int = 1) -> dict:
    """Every (protocol, seed) run, keyed by that pair."""
    pairs = [(p, s) for p in spec.protocols for s in spec.seeds]
    scenarios = [replace(spec.scenario, protocol=p, seed=s) for p, s in pairs]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            reports = list(pool.map(run, scenarios))
    else:
        reports = [run(sc) for sc in scenarios]
    return dict(zip(pairs, reports))


def _table(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([_fmt(v) if not isinstance(v, str) else v for v in row])
    return buf.getvalue()


def render_csvs(spec: ExperimentSpec, reports: dict) -> dict:
    """CSV text per file name."""
    n = spec.scenario.nodes
    deaths, energy, packets, node_rows, summary = [], [], [], [], []
    for p in spec.protocols:
        group = [reports[(p, s)] for s in spec.seeds]
        alive = median_series(group, "alive")
        joules = median_series(group, "energy_cum")
        bs = median_series(group, "bs_packets_cum")
        ch = median_series(group, "ch_packets_cum")
        for r in range(len(alive)):
            deaths.append((r, p, alive[r], 100.0 * (n - alive[r]) / n))
            energy.append((r, p, joules[r]))
            packets.append((r, p, bs[r], ch[r]))
        for s in spec.seeds:
            rep: MetricsReport = reports[(p, s)]
            for i, d in enumerate(rep.node_dissipation):
                node_rows.append((p, s, i, d))
            sm = rep.summary
            summary.append((p, s, sm.first_death_round, sm.all_dead_round,
                            sm.cluster_formation_time, sm.avg_delay,
                            sm.yield_at_ch, sm.yield_at_bs))
    return {
        "deaths.csv": _table(("round", "protocol", "alive_count", "dead_pct"), deaths),
        "energy.csv": _table(("round", "protocol", "cumulative_joules"), energy),
        "packets.csv": _table(("round", "protocol", "bs_packets_cum", "ch_packets_cum"), packets),
        "node_energy.csv": _table(("protocol", "seed", "node_id", "dissipated_joules"), node_rows),
        "summary.csv": _table(
            ("protocol", "seed", "first_death_round", "all_dead_round", "formation_time_s",
             "avg_delay_s", "yield_ch_pps", "yield_bs_pps"), summary),
    }


def write_atomically(out_dir, files: dict) -> list[Path]:
    """Write every file to a temp name first, then rename them all into place.

    Existing outputs are left untouched unless every temp file was written.
    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    staged = []
    try:
        for name, text in files.items():
            fd, tmp = tempfile.mkstemp(prefix=f".{name}.", dir=out)
            staged.append((tmp, out / name))
            with os.fdopen(fd, "w", newline="") as fh:
                fh.write(text)
    except BaseException:
        for tmp, _ in staged:
            Path(tmp).unlink(missing_ok=True)
        raise
    for tmp, final in staged:
        os.replace(tmp, final)
    return [final for _, final in staged]


def run_experiment(spec: ExperimentSpec, jobs: int = 1) -> list[Path]:
    reports = run_all(spec, jobs)
    files = render_csvs(spec, reports)
    files[CONFIG_ECHO] = emit_config(spec)
    return write_atomically(spec.out_dir, files)
