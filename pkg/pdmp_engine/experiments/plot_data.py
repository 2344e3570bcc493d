"""
Long-format plot data from experiment summaries, and an optional plotly rendering.
"""

import logging
from pathlib import Path
from typing import Iterable, Optional

import pandas as pd
import plotly.express as px

from ..config.simulation_config import SIMULATION_CONFIG
from ..errors import EmptyInputError, InconsistentSummariesError
from ..validation.summary import ExperimentSummary

logger = logging.getLogger(__name__)

PLOT_COLUMNS = ["sweep_value", "estimator", "value", "std_error"]


def emit_plot_data(summary_files: Iterable, parameter: str = "epsilon", out_path: Optional[Path] = None) -> pd.DataFrame:
    """
    Collect summaries into one row per (sweep value, estimator).

    Args:
        summary_files: summary.json paths, one per sweep point
        parameter: Resolved-config key holding each summary's sweep value
        out_path: Where to write the CSV; nothing is written when None

    Returns:
        DataFrame with columns sweep_value, estimator, value, std_error

    Raises:
        EmptyInputError: no summary files
        InconsistentSummariesError: summaries report different estimator sets
    """
    summaries = [(Path(p), ExperimentSummary.load(p)) for p in summary_files]
    if not summaries:
        raise EmptyInputError("no summary files to build plot data from")

    expected = None
    rows = []
    for path, summary in summaries:
        names = sorted(e.name for e in summary.estimators)
        if expected is None:
            expected = names
        elif names != expected:
            raise InconsistentSummariesError(f"{path} reports estimators {names}, expected {expected}")
        if parameter not in summary.resolved_config:
            raise InconsistentSummariesError(f"{path} has no {parameter!r} in its resolved config")
        for entry in summary.estimators:
            rows.append({
                "sweep_value": summary.resolved_config[parameter],
                "estimator": entry.name,
                "value": entry.value,
                "std_error": entry.std_error,
            })

    frame = pd.DataFrame(rows, columns=PLOT_COLUMNS)
    if out_path is not None:
        out_path = Path(out_path)
        out_path.parent.mkdir(parents=True, exist_ok=True)
        frame.to_csv(out_path, index=False, float_format=SIMULATION_CONFIG["output"]["float_format"], lineterminator="\n")
        logger.info("wrote %d plot rows to %s", len(frame), out_path)
    return frame


def render_plot(plot_csv, out_html, log_x: bool = True) -> Path:
    """
    Draw long-format plot data: one line per estimator, error bars of one standard error.

    Returns:
        Path of the written HTML file
    """
    frame = pd.read_csv(plot_csv)
    if frame.empty:
        raise EmptyInputError(f"{plot_csv} has no rows")
    fig = px.line(
        frame.sort_values(["estimator", "sweep_value"]),
        x="sweep_value",
        y="value",
        color="estimator",
        error_y="std_error",
        markers=True,
        log_x=log_x,
        title="Estimators along the sweep",
    )
    out_html = Path(out_html)
    out_html.parent.mkdir(parents=True, exist_ok=True)
    fig.write_html(str(out_html))
    logger.info("wrote plot %s", out_html)
    return out_html
