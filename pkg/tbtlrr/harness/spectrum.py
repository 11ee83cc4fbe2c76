from typing import Iterable, Optional

import pandas as pd

from tbtlrr.common.types import Tensor3
from tbtlrr.tensor import TransformKind, energy_concentration, make_transform, transform_spectrum


def spectrum_table(x: Tensor3, kinds: Optional[Iterable[TransformKind]] = None) -> pd.DataFrame:
    """Transform-domain singular values of every slice, per transform kind.

    Args:
        x - Data tensor
        kinds - Transforms to compare; all kinds by default

    Returns:
        Long table with columns transform, slice, index, sigma.
    """
    rows = []
    for kind in kinds or list(TransformKind):
        kind = TransformKind(kind)
        sv = transform_spectrum(x, make_transform(kind, x))
        for k, slice_sv in enumerate(sv):
            rows.extend(
                {"transform": kind.value, "slice": k, "index": i, "sigma": float(s)}
                for i, s in enumerate(slice_sv)
            )
    return pd.DataFrame(rows, columns=["transform", "slice", "index", "sigma"])


def concentration_table(
    x: Tensor3,
    leading: int,
    kinds: Optional[Iterable[TransformKind]] = None,
) -> pd.DataFrame:
    """Share of squared singular-value mass in the leading values, per kind.

    Args:
        x - Data tensor
        leading - How many of the largest singular values to count
        kinds - Transforms to compare; all kinds by default

    Returns:
        Table with columns transform, leading, concentration.
    """
    rows = []
    for kind in kinds or list(TransformKind):
        kind = TransformKind(kind)
        share = energy_concentration(x, make_transform(kind, x), leading)
        rows.append({"transform": kind.value, "leading": leading, "concentration": share})
    return pd.DataFrame(rows, columns=["transform", "leading", "concentration"])
