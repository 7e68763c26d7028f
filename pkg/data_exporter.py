import json
import logging
import sys
from pathlib import Path
from typing import Dict, List, Optional

import pandas as pd

logger = logging.getLogger(__name__)

# =============================================================================
# CONFIGURATION
# =============================================================================

CSV_FLOAT_FORMAT = '%.15g'     # data files: 15 significant digits
SUMMARY_DECIMALS = 6           # human-readable summaries
EXPORT_FORMATS   = ('csv', 'json')


class DataExporter:
    """Write analysis tables as CSV or JSON, to a file or to stdout"""

    def __init__(self, fmt: str = 'csv', out_path: Optional[str] = None):
        if fmt not in EXPORT_FORMATS:
            raise ValueError(f"format must be one of {EXPORT_FORMATS}, got {fmt!r}")
        self.fmt = fmt
        self.out_path = Path(out_path) if out_path else None

    # -------------------------------------------------------------------------
    # RENDERING
    # -------------------------------------------------------------------------

    @staticmethod
    def _round_value(value):
        # same 15-digit rounding as the CSV writer so both formats carry equal numbers
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            return value
        return float(CSV_FLOAT_FORMAT % value)

    def render(self, frame: pd.DataFrame) -> str:
        if self.fmt == 'csv':
            return frame.to_csv(index=False, float_format=CSV_FLOAT_FORMAT, lineterminator='\n')
        records: List[Dict] = [
            {col: self._round_value(val) for col, val in row.items()}
            for row in frame.to_dict(orient='records')
        ]
        return json.dumps(records, ensure_ascii=False, indent=2) + '\n'

    # -------------------------------------------------------------------------
    # OUTPUT
    # -------------------------------------------------------------------------

    def export(self, frame: pd.DataFrame, label: str = 'rows'):
        """
        Write the table. OSError from an unwritable path is logged and re-raised
        so the entry script can map it to its I/O exit code.
        """
        text = self.render(frame)
        if self.out_path is None:
            sys.stdout.write(text)
            sys.stdout.flush()
            return
        try:
            with open(self.out_path, 'w', encoding='utf-8', newline='') as fh:
                fh.write(text)
        except OSError as e:
            logger.error(f"❌ Could not write {label} to {self.out_path}: {e}")
            raise
        logger.info(f"📊 Exported {len(frame)} {label} to {self.out_path} ({self.fmt})")


def humanize(value: float) -> str:
    """Fixed 6-decimal rendering used in log summaries and printed thresholds."""
    return f"{value:.{SUMMARY_DECIMALS}f}"
