"""Random test tensors, deterministic in the supplied generator."""

from __future__ import annotations

import numpy as np

from .tensors import HermitianTensor, Tensor, TensorShape


def random_tensor(shape: TensorShape, rng: np.random.Generator, scale: float = 1.0) -> Tensor:
    mat = rng.standard_normal((shape.unfold_rows, shape.unfold_cols))
    mat = mat + 1j * rng.standard_normal((shape.unfold_rows, shape.unfold_cols))
    return Tensor(shape, scale * mat / np.sqrt(2.0))


def random_hermitian(shape: TensorShape, rng: np.random.Generator, scale: float = 1.0) -> HermitianTensor:
    x = random_tensor(shape, rng, scale)
    return HermitianTensor(shape, (x.matrix + x.matrix.conj().T) / 2.0)


def random_positive(
    shape: TensorShape,
    rng: np.random.Generator,
    eig_low: float = 0.2,
    eig_high: float = 3.0,
) -> HermitianTensor:
    """Random Hermitian tensor with eigenvalues uniform in ``[eig_low, eig_high]``."""
    shape.require_square("random_positive")
    n = shape.unfold_rows
    u = random_unitary(shape, rng)
    vals = rng.uniform(eig_low, eig_high, size=n)
    return HermitianTensor(shape, (u.matrix * vals) @ u.matrix.conj().T)


def random_unitary(shape: TensorShape, rng: np.random.Generator) -> Tensor:
    """Haar-ish random unitary tensor via QR with phase-fixed diagonal."""
    shape.require_square("random_unitary")
    n = shape.unfold_rows
    z = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    q, r = np.linalg.qr(z)
    d = np.diagonal(r)
    q = q * (d / np.abs(d))
    return Tensor(shape, q)


def random_bounded_hermitian(
    shape: TensorShape, rng: np.random.Generator, radius: float
) -> HermitianTensor:
    """Random Hermitian tensor rescaled to spectral norm exactly ``radius``."""
    h = random_hermitian(shape, rng)
    top = float(np.max(np.abs(np.linalg.eigvalsh(h.matrix))))
    if top == 0.0:
        return h
    return HermitianTensor(shape, h.matrix * (radius / top))
