"""Vector majorization predicates and the Ky Fan sum-inequality verifier.

Predicates compare descending-sorted vectors by partial sums (or partial
products, via sums of logs).  Each returns a :class:`MajorizationResult`
carrying the verdict plus the first failing prefix length, which makes
violations debuggable; the result is truthy iff the relation holds.

The default tolerance is ``1e-9 * (1 + max_abs_entry)``, a relative-absolute
hybrid chosen because partial sums accumulate round-off.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import ArgumentError, DomainError, ShapeError
from .norms import ky_fan_norm
from .tensors import Tensor, abs_tensor, spectral_map


@dataclass(frozen=True)
class SortedVec:
    """Real vector sorted descending; ``positive`` marks an all-positive spectrum."""

    entries: tuple[float, ...]
    positive: bool

    def __init__(self, entries: Sequence[float]):
        vals = tuple(float(v) for v in entries)
        if not vals:
            raise ArgumentError("SortedVec needs at least one entry")
        if any(a < b for a, b in zip(vals, vals[1:])):
            raise ArgumentError(f"entries must be sorted descending, got {vals}")
        object.__setattr__(self, "entries", vals)
        object.__setattr__(self, "positive", all(v > 0 for v in vals))

    def __len__(self) -> int:
        return len(self.entries)

    @property
    def array(self) -> np.ndarray:
        return np.asarray(self.entries)


@dataclass(frozen=True)
class MajorizationResult:
    holds: bool
    first_failure: int | None  # smallest prefix length k at which the relation fails

    def __bool__(self) -> bool:
        return self.holds


def default_tol(*vecs: SortedVec) -> float:
    top = max(max(abs(v) for v in vec.entries) for vec in vecs)
    return 1e-9 * (1.0 + top)


def _coerce(v) -> SortedVec:
    return v if isinstance(v, SortedVec) else SortedVec(v)


def _prefix_compare(x: np.ndarray, y: np.ndarray, tol: float) -> MajorizationResult:
    cx, cy = np.cumsum(x), np.cumsum(y)
    bad = np.nonzero(cx > cy + tol)[0]
    if bad.size:
        return MajorizationResult(False, int(bad[0]) + 1)
    return MajorizationResult(True, None)


def weak_majorizes(y, x, tol: float | None = None) -> MajorizationResult:
    """True iff every prefix sum of ``x`` is at most the prefix sum of ``y``."""
    y, x = _coerce(y), _coerce(x)
    if len(x) != len(y):
        raise ArgumentError(f"length mismatch: {len(x)} vs {len(y)}")
    if tol is None:
        tol = default_tol(x, y)
    return _prefix_compare(x.array, y.array, tol)


def majorizes(y, x, tol: float | None = None) -> MajorizationResult:
    """Weak majorization plus equality of the total sums."""
    y, x = _coerce(y), _coerce(x)
    weak = weak_majorizes(y, x, tol)
    if not weak:
        return weak
    if tol is None:
        tol = default_tol(x, y)
    if abs(float(np.sum(x.array) - np.sum(y.array))) > tol:
        return MajorizationResult(False, len(x))
    return MajorizationResult(True, None)


def _require_positive(v: SortedVec, name: str) -> None:
    if not v.positive:
        raise DomainError(f"log majorization needs positive entries in {name}, got {v.entries}")


def weak_log_majorizes(y, x, tol: float | None = None) -> MajorizationResult:
    """Prefix products of ``x`` at most those of ``y``, compared as sums of logs."""
    y, x = _coerce(y), _coerce(x)
    if len(x) != len(y):
        raise ArgumentError(f"length mismatch: {len(x)} vs {len(y)}")
    _require_positive(x, "x")
    _require_positive(y, "y")
    if tol is None:
        tol = _log_tol(x, y)
    return _prefix_compare(np.log(x.array), np.log(y.array), tol)


def _log_tol(x: SortedVec, y: SortedVec) -> float:
    spread = float(np.max(np.abs(np.log(x.array))) + np.max(np.abs(np.log(y.array))))
    return 1e-9 * (1.0 + spread)


def log_majorizes(y, x, tol: float | None = None) -> MajorizationResult:
    """Weak log majorization plus equality of the total products."""
    y, x = _coerce(y), _coerce(x)
    weak = weak_log_majorizes(y, x, tol)
    if not weak:
        return weak
    if tol is None:
        tol = _log_tol(x, y)
    if abs(float(np.sum(np.log(x.array)) - np.sum(np.log(y.array)))) > tol:
        return MajorizationResult(False, len(x))
    return MajorizationResult(True, None)


@dataclass(frozen=True)
class SumInequalityReport:
    """Both sides of the Ky Fan sum inequality and whether it held."""

    lhs: float
    rhs: float
    holds: bool
    m: int
    s: float
    k: int


def check_kyfan_sum_inequality(
    tensors: Sequence[Tensor], s: float, k: int, tol: float | None = None
) -> SumInequalityReport:
    """Verify ``|| |sum C_i|^s ||_(k) <= m^(s-1) sum || |C_i|^s ||_(k)``."""
    if not tensors:
        raise ArgumentError("need at least one tensor")
    if s < 1:
        raise ArgumentError(f"s must be >= 1, got {s}")
    shape = tensors[0].shape
    shape.require_square("check_kyfan_sum_inequality")
    for t in tensors[1:]:
        if t.shape != shape:
            raise ShapeError("all tensors must share one shape")
    m = len(tensors)
    total = tensors[0]
    for t in tensors[1:]:
        total = total + t
    lhs = ky_fan_norm(spectral_map(abs_tensor(total), lambda x: x**s), k)
    rhs = m ** (s - 1.0) * sum(
        ky_fan_norm(spectral_map(abs_tensor(t), lambda x: x**s), k) for t in tensors
    )
    if tol is None:
        tol = 1e-9 * (1.0 + abs(lhs) + abs(rhs))
    return SumInequalityReport(lhs=lhs, rhs=rhs, holds=lhs <= rhs + tol, m=m, s=s, k=k)
