import os
from typing import Any, Optional

import pandas as pd


class IterationTrace:
    """A log of per-iteration snapshots taken while a solver runs.

    Every call to `capture` appends one row. The solver never reads the log
    back; it exists for diagnostics and for writing trace files.

    Useful for debugging convergence and plotting residual curves.
    """

    def __init__(self, header: Optional[dict[str, Any]] = None):
        # Run parameters, written as comment lines above the table.
        self.header = dict(header or {})
        # List of snapshots, one per iteration
        self.log = list[dict[str, float]]()

    def capture(self, **row: float):
        """Take a snapshot of the current iteration.

        Args:
            **row - Column values for this iteration
        """
        self.log.append(dict(row))

    def __len__(self) -> int:
        return len(self.log)

    def to_frame(self) -> pd.DataFrame:
        """Get the captured rows as a table.

        Returns:
            DataFrame with one row per captured iteration.
        """
        return pd.DataFrame.from_records(self.log)

    def write_csv(self, path: str):
        """Write the trace as CSV with the header as `#` comment lines.

        The file is written to a temporary sibling first and then moved into
        place, so readers never see a partial trace.

        Args:
            path - Destination file
        """
        tmp = f"{path}.tmp"
        with open(tmp, "w", newline="") as fh:
            for key, value in self.header.items():
                fh.write(f"# {key}={value}\n")
            self.to_frame().to_csv(fh, index=False, float_format="%.17g")
        os.replace(tmp, path)


def read_trace_header(path: str) -> dict[str, str]:
    """Read the `#` header lines of a trace file.

    Args:
        path - Trace CSV written by `IterationTrace.write_csv`

    Returns:
        Mapping of header keys to their (string) values.
    """
    header = dict[str, str]()
    with open(path) as fh:
        for line in fh:
            if not line.startswith("#"):
                break
            key, _, value = line[1:].strip().partition("=")
            header[key] = value
    return header
