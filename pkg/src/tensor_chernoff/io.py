"""Tensor serialization.

A tensor record is a self-describing JSON document::

    {
      "format": "tensor/1",
      "row_dims": [2, 3],
      "col_dims": [2, 3],
      "entries": [re_0, im_0, re_1, im_1, ...]
    }

``entries`` interleaves real and imaginary parts, row-major over the combined
index ``(i_1..i_M, j_1..j_N)``, which is exactly the row-major raveling of the
matrix unfolding.  JSON floats are written with full ``repr`` precision, so a
round trip reproduces every entry bit for bit.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .errors import ArgumentError
from .tensors import Tensor, TensorShape

TENSOR_FORMAT = "tensor/1"


def tensor_to_record(x: Tensor) -> dict:
    flat = x.matrix.ravel()
    interleaved = np.empty(2 * flat.size, dtype=np.float64)
    interleaved[0::2] = flat.real
    interleaved[1::2] = flat.imag
    return {
        "format": TENSOR_FORMAT,
        "row_dims": list(x.shape.row_dims),
        "col_dims": list(x.shape.col_dims),
        "entries": interleaved.tolist(),
    }


def tensor_from_record(record: dict) -> Tensor:
    if record.get("format") != TENSOR_FORMAT:
        raise ArgumentError(f"unsupported tensor record format: {record.get('format')!r}")
    shape = TensorShape(record["row_dims"], record["col_dims"])
    raw = np.asarray(record["entries"], dtype=np.float64)
    if raw.size != 2 * shape.unfold_rows * shape.unfold_cols:
        raise ArgumentError(
            f"expected {2 * shape.unfold_rows * shape.unfold_cols} interleaved values, got {raw.size}"
        )
    flat = raw[0::2] + 1j * raw[1::2]
    return Tensor.from_entries(shape, flat)


def save_tensor(x: Tensor, path: str | Path) -> None:
    Path(path).write_text(json.dumps(tensor_to_record(x)))


def load_tensor(path: str | Path) -> Tensor:
    return tensor_from_record(json.loads(Path(path).read_text()))
