"""Common types used in the package."""
from typing import Tuple

import numpy as np
import numpy.typing as npt

# Dense real third-order tensor of shape (n1, n2, n3). Frontal slice k is
# `b[:, :, k]` and the tube at (i, j) is `b[i, j, :]`. Serialized in Fortran
# order: slice-major, each slice column-major.
Tensor3 = npt.NDArray[np.float64]

# Dense real matrix
Matrix = npt.NDArray[np.float64]

# Tensor dimensions as (n1, n2, n3)
Dims = Tuple[int, int, int]

# Cluster assignments, one integer per sample. Labels read from and written
# to disk are 1-based.
Labels = npt.NDArray[np.int64]
