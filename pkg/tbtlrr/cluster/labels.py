import os

import numpy as np

from tbtlrr.common.errors import FormatError
from tbtlrr.common.types import Labels


def read_labels(path: str) -> Labels:
    """Read labels from a CSV file with one 1-based integer per line.

    Args:
        path - File to read

    Returns:
        Labels as an int64 array.

    Raises:
        FormatError if a line is not a positive integer.
    """
    with open(path) as fh:
        lines = [line.strip() for line in fh if line.strip()]
    try:
        labels = np.array([int(line) for line in lines], dtype=np.int64)
    except ValueError as e:
        raise FormatError(f"Labels in {path} must be integers: {e}") from e
    if labels.size == 0:
        raise FormatError(f"No labels in {path}")
    if labels.min() < 1:
        raise FormatError(f"Labels in {path} must be 1-based")
    return labels


def write_labels(path: str, labels: Labels):
    """Write labels as one integer per line.

    Args:
        path - Destination file
        labels - 1-based labels
    """
    tmp = f"{path}.tmp"
    np.savetxt(tmp, np.asarray(labels, dtype=np.int64), fmt="%d")
    os.replace(tmp, path)
