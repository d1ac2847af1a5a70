# This file is part of the FQR-T fluid model toolkit (fqrt-fluid).
#
# Copyright (c) 2021-2022 New York University.
#
# fqrt-fluid is released under the Revised BSD License. See file LICENSE for
# full license details.

"""Experiment reports and their serialization. All numbers are written with
12 significant digits. Report files only contain values that are determined
by the configuration and the master seed; wall-clock timings are written to
a separate file.
"""

from __future__ import annotations
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

import json
import logging
import math
import os

import numpy as np
import pandas as pd


logger = logging.getLogger(__name__)


"""Float format for all numeric output."""
FLOAT_FORMAT = '%.12g'

"""Names of the files that are written by a run of several experiments."""
SUMMARY_FILE = 'summary.json'
TIMINGS_FILE = 'timings.json'

"""Supported output formats."""
FORMATS = ['csv', 'json']


@dataclass
class ComparisonReport:
    """Result of an experiment. The rows table has one row per scale index
    (or per evaluation point). Details are additional tables that are
    written as separate CSV files.
    """
    kind: str
    passed: bool
    metrics: Dict[str, Any]
    rows: pd.DataFrame
    details: Dict[str, pd.DataFrame] = field(default_factory=dict)
    notes: List[str] = field(default_factory=list)
    timings: Dict[str, float] = field(default_factory=dict)
    provenance: Dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> Dict[str, Any]:
        """Serialization of the report without the timings."""
        return {
            'kind': self.kind,
            'passed': self.passed,
            'metrics': self.metrics,
            'rows': self.rows.to_dict(orient='records'),
            'notes': self.notes,
            'provenance': self.provenance
        }


# -- Number formatting --------------------------------------------------------

def format_number(value: Any) -> Any:
    """Round floating-point values to 12 significant digits. Non-finite
    values are rendered as strings since they are not valid Json.
    """
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        value = float(value)
        if not math.isfinite(value):
            return str(value)
        return float(FLOAT_FORMAT % value)
    if isinstance(value, dict):
        return {key: format_number(val) for key, val in value.items()}
    if isinstance(value, (list, tuple)):
        return [format_number(val) for val in value]
    return value


def dumps(doc: Any) -> str:
    """Json serialization with formatted numbers."""
    return json.dumps(format_number(doc), indent=2)


# -- Writers ------------------------------------------------------------------

def _write(path: str, text: str):
    """Write text to file. Errors are re-raised with the file path."""
    try:
        with open(path, 'wt') as f:
            f.write(text)
    except OSError as ex:
        raise OSError(ex.errno, ex.strerror, path) from ex
    logger.info('wrote %s', path)


def _provenance_lines(provenance: Dict[str, Any]) -> str:
    lines = list()
    for key, value in provenance.items():
        if isinstance(value, (dict, list)):
            value = json.dumps(format_number(value), sort_keys=True)
        lines.append('# {}: {}\n'.format(key, value))
    return ''.join(lines)


def frame_to_text(
    df: pd.DataFrame, fmt: Optional[str] = 'csv',
    provenance: Optional[Dict[str, Any]] = None
) -> str:
    """Render a data frame as CSV (with '#' provenance header lines) or as a
    Json object with provenance, columns and records.

    Parameters
    ----------
    df: pandas.DataFrame
        Data frame.
    fmt: string, default='csv'
        Output format.
    provenance: dict, default=None
        Provenance information (seed, n, parameters).

    Returns
    -------
    string
    """
    provenance = provenance if provenance is not None else dict()
    if fmt == 'csv':
        body = df.to_csv(index=False, float_format=FLOAT_FORMAT, lineterminator='\n')
        return _provenance_lines(provenance) + body
    elif fmt == 'json':
        doc = {
            'provenance': provenance,
            'columns': list(df.columns),
            'data': df.to_dict(orient='records')
        }
        return dumps(doc) + '\n'
    raise ValueError("unknown format '{}'".format(fmt))


def write_frame(
    df: pd.DataFrame, path: str, fmt: Optional[str] = 'csv',
    provenance: Optional[Dict[str, Any]] = None
) -> str:
    """Write a data frame to file (see frame_to_text). Returns the path."""
    _write(path, frame_to_text(df, fmt=fmt, provenance=provenance))
    return path


def write_report(report: ComparisonReport, out_dir: str, fmt: Optional[str] = 'csv') -> List[str]:
    """Write the report file `<kind>.<fmt>` and one CSV file
    `<kind>_<name>.csv` for each detail table. The output directory is created
    if it does not exist.

    Parameters
    ----------
    report: fqrt_fluid.harness.report.ComparisonReport
        Experiment report.
    out_dir: string
        Output directory.
    fmt: string, default='csv'
        Format of the report file.

    Returns
    -------
    list of string
    """
    os.makedirs(out_dir, exist_ok=True)
    path = os.path.join(out_dir, '{}.{}'.format(report.kind, fmt))
    if fmt == 'csv':
        header = dict(report.provenance)
        header['kind'] = report.kind
        header['passed'] = report.passed
        header['metrics'] = report.metrics
        for note in report.notes:
            header.setdefault('notes', list()).append(note)
        text = frame_to_text(report.rows, fmt='csv', provenance=header)
    elif fmt == 'json':
        text = dumps(report.to_dict()) + '\n'
    else:
        raise ValueError("unknown format '{}'".format(fmt))
    _write(path, text)
    paths = [path]
    for name in sorted(report.details):
        filename = os.path.join(out_dir, '{}_{}.csv'.format(report.kind, name))
        paths.append(
            write_frame(report.details[name], filename, provenance=report.provenance)
        )
    return paths


def write_summary(reports: List[ComparisonReport], out_dir: str) -> str:
    """Write the machine-readable pass/fail summary for a list of reports."""
    os.makedirs(out_dir, exist_ok=True)
    doc = {
        'passed': all(r.passed for r in reports),
        'experiments': {r.kind: r.passed for r in reports}
    }
    path = os.path.join(out_dir, SUMMARY_FILE)
    _write(path, dumps(doc) + '\n')
    return path


def write_timings(reports: List[ComparisonReport], out_dir: str) -> str:
    """Write the wall-clock timings of all reports."""
    os.makedirs(out_dir, exist_ok=True)
    path = os.path.join(out_dir, TIMINGS_FILE)
    _write(path, dumps({r.kind: r.timings for r in reports}) + '\n')
    return path
