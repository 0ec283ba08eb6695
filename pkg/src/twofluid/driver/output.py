"""Snapshot, audit and metadata files of a run directory.

Snapshot CSV layout: one comment line ``# t = <time>``, a header row
``x,r1,r2,v1,v2,p,alpha1,rho1,rho2,e1,e2`` and one row per cell, every
number written with 17 significant digits.
"""
from __future__ import annotations

import csv
import json
from pathlib import Path

import numpy as np

from ..closure import close_state
from ..core import Grid, MixtureState
from ..integrate import Trajectory
from .config import build_config, parse_text

SNAPSHOT_COLUMNS = ("x", "r1", "r2", "v1", "v2", "p", "alpha1", "rho1", "rho2", "e1", "e2")
METADATA_NAME = "run_metadata.txt"
AUDIT_NAME = "conservation_audit.csv"


def _fmt(v: float) -> str:
    return f"{v:.17g}"


def write_snapshot_csv(traj: Trajectory, time: float, path) -> float:
    """Write the snapshot nearest ``time``; returns the time actually written."""
    t, state = traj.nearest(time)
    cl = close_state(state, traj.eos)
    cols = [state.grid.x, state.r1, state.r2, cl.v1, cl.v2, cl.p, cl.alpha1,
            cl.rho1, cl.rho2, cl.e1, cl.e2]
    with open(path, "w", newline="") as fh:
        fh.write(f"# t = {_fmt(t)}\n")
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(SNAPSHOT_COLUMNS)
        for row in zip(*cols):
            w.writerow([_fmt(v) for v in row])
    return t


def read_snapshot_csv(path, length: float = 1.0) -> tuple[float, MixtureState]:
    """Inverse of :func:`write_snapshot_csv`: conserved fields from the primitive columns."""
    with open(path) as fh:
        first = fh.readline()
        if not first.startswith("# t ="):
            raise ValueError(f"{path}: missing '# t = ...' header line")
        t = float(first.split("=", 1)[1])
        header = next(csv.reader([fh.readline()]))
        if tuple(header) != SNAPSHOT_COLUMNS:
            raise ValueError(f"{path}: unexpected columns {header}")
        data = np.loadtxt(fh, delimiter=",", ndmin=2)
    col = dict(zip(SNAPSHOT_COLUMNS, data.T))
    grid = Grid(len(data), length)
    r1, r2 = col["r1"], col["r2"]
    state = MixtureState(grid, r1, r2, r1 * col["v1"], r2 * col["v2"],
                         r1 * col["e1"], r2 * col["e2"])
    return t, state


def snapshot_name(index: int) -> str:
    return f"snapshot_{index:05d}.csv"


def write_metadata(path, resolved: dict, extra: dict | None = None):
    """Plain ``key = value`` echo of the resolved config, readable by the config loader."""
    lines = [f"{k} = {v!r}" if isinstance(v, str) else f"{k} = {_fmt(v) if isinstance(v, float) else v}"
             for k, v in resolved.items()]
    if extra:
        lines.append("")
        lines += [f"# {k}: {json.dumps(v)}" for k, v in extra.items()]
    Path(path).write_text("\n".join(lines) + "\n")


def write_run(traj: Trajectory, out_dir, resolved: dict, times=None) -> list[Path]:
    """Write snapshots (all recorded, or nearest to each of ``times``) and metadata."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    if times is None:
        wanted = list(traj.times)
    else:
        wanted = sorted({traj.nearest(t)[0] for t in times})
    paths = []
    for i, t in enumerate(wanted):
        p = out / snapshot_name(i)
        write_snapshot_csv(traj, t, p)
        paths.append(p)
    extra = {"snapshots": len(paths), "steps": len(traj.dts),
             "clamp_events": traj.clamp_events}
    write_metadata(out / METADATA_NAME, resolved, extra)
    return paths


def load_run(out_dir) -> Trajectory:
    """Rebuild a trajectory from a run directory (metadata plus snapshot CSVs)."""
    out = Path(out_dir)
    meta = out / METADATA_NAME
    if not meta.exists():
        raise FileNotFoundError(f"{meta} not found")
    cfg = build_config(parse_text(meta.read_text()))
    clamp = 0
    for line in meta.read_text().splitlines():
        if line.startswith("# clamp_events:"):
            clamp = int(line.split(":", 1)[1])
    files = sorted(out.glob("snapshot_*.csv"))
    if not files:
        raise FileNotFoundError(f"no snapshot files in {out}")
    traj = Trajectory(Grid(cfg.n_cells), cfg.eos, cfg.params, clamp_events=clamp)
    for f in files:
        t, state = read_snapshot_csv(f)
        traj.append(t, state)
    return traj

