"""Binary T3B tensor format.

Layout: magic `T3B1`, then n1, n2, n3 as little-endian uint32, then
n1 * n2 * n3 little-endian float64 values, slice-major with every frontal
slice column-major.
"""
import math
import os

import numpy as np

from tbtlrr.common.errors import FormatError
from tbtlrr.common.types import Tensor3

from .core import as_tensor3

MAGIC = b"T3B1"
HEADER_SIZE = len(MAGIC) + 3 * 4


def encode_t3b(b: Tensor3) -> bytes:
    """Serialize a tensor to T3B bytes.

    Args:
        b - Tensor to serialize

    Returns:
        Raw T3B payload.
    """
    b = as_tensor3(b)
    head = np.asarray(b.shape, dtype="<u4").tobytes()
    body = np.asarray(b, dtype="<f8").ravel(order="F").tobytes()
    return MAGIC + head + body


def decode_t3b(data: bytes) -> Tensor3:
    """Parse T3B bytes into a tensor.

    Args:
        data - Raw T3B payload

    Returns:
        Tensor with the stored dimensions.

    Raises:
        FormatError if the magic is wrong or the payload is truncated or has
        trailing bytes.
    """
    if len(data) < HEADER_SIZE:
        raise FormatError(f"T3B header truncated ({len(data)} bytes)")
    if data[: len(MAGIC)] != MAGIC:
        raise FormatError(f"Bad T3B magic {data[:len(MAGIC)]!r}")

    shape = tuple(int(n) for n in np.frombuffer(data, dtype="<u4", count=3, offset=4))
    if min(shape) < 1:
        raise FormatError(f"T3B dimensions must be positive, got {shape}")

    expected = HEADER_SIZE + 8 * math.prod(shape)
    if len(data) != expected:
        raise FormatError(
            f"T3B payload for shape {shape} should be {expected} bytes, got {len(data)}"
        )

    values = np.frombuffer(data, dtype="<f8", offset=HEADER_SIZE)
    try:
        return as_tensor3(values.reshape(shape, order="F").astype(np.float64))
    except ValueError as e:
        raise FormatError(f"Invalid T3B tensor: {e}") from e


def read_t3b(path: str) -> Tensor3:
    """Load a T3B tensor from disk.

    Args:
        path - File to read

    Returns:
        Parsed tensor.
    """
    with open(path, "rb") as fh:
        return decode_t3b(fh.read())


def write_t3b(path: str, b: Tensor3):
    """Write a tensor to disk in T3B format.

    Args:
        path - Destination file
        b - Tensor to write
    """
    tmp = f"{path}.tmp"
    with open(tmp, "wb") as fh:
        fh.write(encode_t3b(b))
    os.replace(tmp, path)
