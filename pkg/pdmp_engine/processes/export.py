"""
Tabular exports of simulated paths.
"""

import logging
from pathlib import Path
from typing import Callable, Iterable, Optional, Tuple

import pandas as pd

from ..config.simulation_config import SIMULATION_CONFIG
from .paths import CadlagPath

logger = logging.getLogger(__name__)

HIT_COLUMNS = ["replica", "i", "t_star", "prejump_speed", "postjump_value"]
PATH_COLUMNS = ["t", "x", "kind"]


def hits_to_dataframe(replica_paths: Iterable[Tuple[int, CadlagPath]]):
    """
    Hitting records of many replicas as one table.

    Args:
        replica_paths: (replica index, path) pairs, in the order rows should appear

    Returns:
        pandas DataFrame with columns replica, i, t_star, prejump_speed, postjump_value
    """
    rows = []
    for replica, path in replica_paths:
        for record in path.jumps:
            rows.append({
                "replica": replica,
                "i": record.index,
                "t_star": record.time,
                "prejump_speed": record.prejump_speed,
                "postjump_value": record.postjump_value,
            })
    return pd.DataFrame(rows, columns=HIT_COLUMNS)


def path_to_dataframe(path: CadlagPath, transform: Optional[Callable[[float], float]] = None):
    """
    Event points of one path: every segment start, each jump as a hit row
    (left limit) followed by a jump_target row, and the horizon value.

    Args:
        path: Path to dump
        transform: Optional map applied to every x (e.g. G^-1 for a flow path)
    """
    value = transform if transform is not None else float
    jump_times = set(path.jump_times.tolist())
    rows = []
    for j, t in enumerate(path.t_start):
        t = float(t)
        if j > 0 and t in jump_times:
            rows.append({"t": t, "x": value(path.x_end[j - 1]), "kind": "hit"})
            rows.append({"t": t, "x": value(path.x_start[j]), "kind": "jump_target"})
        else:
            rows.append({"t": t, "x": value(path.x_start[j]), "kind": "segment_start"})
    rows.append({"t": path.horizon, "x": value(path.x_end[-1]), "kind": "horizon"})
    return pd.DataFrame(rows, columns=PATH_COLUMNS)


def write_table(df: pd.DataFrame, out_dir: Path, stem: str, fmt: str = "csv") -> Path:
    """
    Write a table as CSV (17 significant digits) or as JSON records.

    Returns:
        Path of the written file
    """
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    if fmt == "json":
        target = out_dir / f"{stem}.json"
        df.to_json(target, orient="records", double_precision=15)
    else:
        target = out_dir / f"{stem}.csv"
        df.to_csv(target, index=False, float_format=SIMULATION_CONFIG["output"]["float_format"], lineterminator="\n")
    logger.info("wrote %d rows to %s", len(df), target)
    return target
