"""
CSV and JSON report emission.

All files of a run are written through one :class:`ReportWriter` bound to
the output directory; names that resolve outside it are refused. Output
is byte-deterministic: floats use ``repr``, JSON keys are sorted and line
endings are ``\\n``.

Author: Ahmad Yateem
"""

import csv
import io
import json
import math
from pathlib import Path
from typing import Dict, Iterable, List, Union

import numpy as np

from configs.config import Config
from experiments.base import ExperimentReport
from utils.exceptions import ReportWriteError
from utils.logger import setup_logger

logger = setup_logger(__name__)


def format_cell(value) -> str:
    """CSV text of one cell; None and non-finite floats become empty or tagged."""
    if value is None:
        return ''
    if isinstance(value, (bool, np.bool_)):
        return str(int(value))
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        value = float(value)
        if math.isnan(value):
            return 'nan'
        if math.isinf(value):
            return 'inf' if value > 0 else '-inf'
        return repr(value)
    return str(value)


def to_jsonable(value):
    """Convert numpy scalars/arrays and tuples into plain JSON values."""
    if isinstance(value, dict):
        return {str(k): to_jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_jsonable(v) for v in value]
    if isinstance(value, np.ndarray):
        return [to_jsonable(v) for v in value.tolist()]
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        value = float(value)
        return value if math.isfinite(value) else None
    if isinstance(value, complex):
        return [value.real, value.imag]
    return value


def render_csv(header: List[str], rows: Iterable[Dict[str, object]]) -> str:
    buffer = io.StringIO()
    writer = csv.DictWriter(buffer, fieldnames=header, extrasaction='ignore', lineterminator='\n')
    writer.writeheader()
    for row in rows:
        writer.writerow({name: format_cell(row.get(name)) for name in header})
    return buffer.getvalue()


def render_json(document: Dict[str, object]) -> str:
    return json.dumps(to_jsonable(document), sort_keys=True, indent=2) + '\n'


def report_document(report: ExperimentReport, config_hash: str = None) -> Dict[str, object]:
    return {
        'kind': report.kind,
        'verdict': report.verdict,
        'flags': report.flags,
        'summary': report.summary,
        'provenance': report.provenance,
        'rows': len(report.rows),
        'config_hash': config_hash,
        'tool_version': Config.TOOL_VERSION,
    }


class ReportWriter:
    """
    Single writer for everything a run produces.

    Attributes:
        out_dir: Directory every written file must stay inside
    """

    def __init__(self, out_dir: Union[str, Path]):
        self.out_dir = Path(out_dir).resolve()
        self.written: List[Path] = []

    def path_for(self, name: Union[str, Path]) -> Path:
        candidate = Path(name)
        if not candidate.is_absolute():
            candidate = self.out_dir / candidate
        candidate = candidate.resolve()
        if candidate != self.out_dir and self.out_dir not in candidate.parents:
            raise ReportWriteError(f"Refusing to write outside {self.out_dir}", str(candidate))
        return candidate

    def _prepare(self, name: Union[str, Path]) -> Path:
        path = self.path_for(name)
        try:
            path.parent.mkdir(parents=True, exist_ok=True)
        except OSError as e:
            raise ReportWriteError(f"Cannot create output directory: {e.strerror or e}", str(path.parent))
        return path

    def write_text(self, name: Union[str, Path], text: str) -> Path:
        path = self._prepare(name)
        try:
            with open(path, 'w', encoding='utf-8', newline='') as handle:
                handle.write(text)
        except OSError as e:
            raise ReportWriteError(f"Cannot write report: {e.strerror or e}", str(path))
        self.written.append(path)
        logger.info('Report written', extra={'event_type': 'report', 'path': str(path)})
        return path

    def write_bytes(self, name: Union[str, Path], payload: bytes) -> Path:
        path = self._prepare(name)
        try:
            path.write_bytes(payload)
        except OSError as e:
            raise ReportWriteError(f"Cannot write file: {e.strerror or e}", str(path))
        self.written.append(path)
        return path


def emit_report(report: ExperimentReport, csv_path: Union[str, Path], json_path: Union[str, Path],
                config_hash: str = None, writer: ReportWriter = None) -> None:
    """
    Write the report rows as CSV and the verdict summary as JSON.

    Args:
        report: Finished experiment report
        csv_path: CSV target (sweep key, measured columns, error columns)
        json_path: JSON target (verdict, flags, summary, provenance, hash, version)
        config_hash: Hash of the configuration bytes and seed
        writer: Writer confining the paths (default: each file's own directory)

    Raises:
        ReportWriteError: If either file cannot be written
    """
    def target(path):
        return writer or ReportWriter(Path(path).resolve().parent)

    target(csv_path).write_text(csv_path, render_csv(report.header, report.rows))
    target(json_path).write_text(json_path, render_json(report_document(report, config_hash)))
