"""Norm definitions against SVD and subset-enumeration oracles."""

import numpy as np
import pytest

from tensor_chernoff import HermitianTensor, TensorShape, make_identity
from tensor_chernoff.errors import ArgumentError, DomainError
from tensor_chernoff.norms import (
    NormKind,
    gauge_rho,
    k_trace,
    ky_fan_norm,
    schatten_norm,
    singular_values,
    spectral_norm,
)
from tensor_chernoff.sampling import random_tensor, random_unitary

from oracles import elementary_symmetric

RNG = np.random.default_rng(20240812)
S22 = TensorShape.square((2, 2))


def test_singular_values_examples():
    ident = make_identity(S22)
    assert np.allclose(singular_values(ident), 1.0)
    assert np.allclose(singular_values(-1.0 * ident), 1.0)
    x = random_tensor(S22, RNG)
    sv = np.linalg.svd(x.matrix, compute_uv=False)  # SVD oracle
    assert np.allclose(singular_values(x), sv, atol=1e-9)
    assert singular_values(x).size == 4


def test_ky_fan_examples():
    ident = make_identity(S22)
    assert ky_fan_norm(ident, 3) == pytest.approx(3.0)
    d = HermitianTensor(TensorShape.square((3,)), np.diag([5.0, -7.0, 1.0]))
    assert ky_fan_norm(d, 1) == pytest.approx(7.0)
    assert spectral_norm(d) == pytest.approx(7.0)
    with pytest.raises(ArgumentError):
        ky_fan_norm(ident, 0)
    with pytest.raises(ArgumentError):
        ky_fan_norm(ident, 5)


def test_ky_fan_triangle_inequality():
    for _ in range(100):
        x, y = random_tensor(S22, RNG), random_tensor(S22, RNG)
        for k in (1, 2, 4):
            assert ky_fan_norm(x + y, k) <= ky_fan_norm(x, k) + ky_fan_norm(y, k) + 1e-9


def test_ky_fan_monotone_in_k_and_unitary_invariance():
    x = random_tensor(S22, RNG)
    vals = [ky_fan_norm(x, k) for k in range(1, 5)]
    assert all(b >= a - 1e-12 for a, b in zip(vals, vals[1:]))
    assert vals[0] == pytest.approx(singular_values(x)[0])

    u = random_unitary(S22, RNG)
    for k in (1, 2, 3):
        assert abs(ky_fan_norm(u @ x, k) - ky_fan_norm(x, k)) <= 1e-9
        assert abs(ky_fan_norm(x @ u, k) - ky_fan_norm(x, k)) <= 1e-9


def test_schatten_examples():
    ident = make_identity(S22)
    assert schatten_norm(ident, 1) == pytest.approx(4.0)
    x = random_tensor(S22, RNG)
    # large p approaches the spectral norm
    assert schatten_norm(x, 64) == pytest.approx(spectral_norm(x), rel=0.02)
    sv = singular_values(x)
    assert schatten_norm(x, 2.5) == pytest.approx(float(np.sum(sv**2.5)) ** (1 / 2.5))
    with pytest.raises(ArgumentError):
        schatten_norm(x, 0.5)


def test_k_trace_examples():
    d = HermitianTensor(TensorShape.square((3,)), np.diag([3.0, 2.0, 1.0]))
    assert k_trace(d, 2) == pytest.approx(11.0)  # 3*2 + 3*1 + 2*1, frozen from enumeration
    assert k_trace(d, 1) == pytest.approx(6.0)
    assert k_trace(d, 3) == pytest.approx(6.0)

    rng = np.random.default_rng(5)
    vals = rng.uniform(0.5, 2.0, size=6)
    h = HermitianTensor(TensorShape.square((6,)), np.diag(vals))
    for k in (1, 2, 3, 6):
        assert k_trace(h, k) == pytest.approx(elementary_symmetric(sorted(vals, reverse=True), k))

    with pytest.raises(DomainError):
        k_trace(HermitianTensor(TensorShape.square((2,)), np.diag([1.0, -0.5])), 1)
    with pytest.raises(ArgumentError):
        k_trace(d, 4)


def test_gauge_rho():
    assert gauge_rho(np.array([3.0, 2.0, 1.0]), 2) == pytest.approx(5.0)
    assert gauge_rho(np.zeros(4), 3) == 0.0
    with pytest.raises(ArgumentError):
        gauge_rho(np.array([1.0, 2.0]), 1)  # unsorted
    with pytest.raises(ArgumentError):
        gauge_rho(np.array([1.0, -2.0]), 1)  # negative
    x = random_tensor(S22, RNG)
    assert ky_fan_norm(x, 2) == pytest.approx(gauge_rho(singular_values(x), 2))


def test_gauge_consistency_with_abs():
    from tensor_chernoff import abs_tensor

    x = random_tensor(S22, RNG)
    for k in (1, 2, 3):
        assert ky_fan_norm(x, k) == pytest.approx(ky_fan_norm(abs_tensor(x), k), abs=1e-9)


def test_holder_gauge_inequality():
    rng = np.random.default_rng(17)
    for _ in range(300):
        n = rng.integers(2, 5)
        r = rng.integers(2, 7)
        vecs = [np.sort(rng.uniform(0.0, 4.0, size=r))[::-1] for _ in range(n)]
        alphas = rng.dirichlet(np.ones(n))
        prod = np.ones(r)
        for v, a in zip(vecs, alphas):
            prod = prod * v**a
        for k in (1, int(r) // 2 + 1, int(r)):
            lhs = gauge_rho(prod, k)
            rhs = float(np.prod([gauge_rho(v, k) ** a for v, a in zip(vecs, alphas)]))
            assert lhs <= rhs + 1e-9 * (1 + rhs)


def test_norm_kind_validation():
    NormKind("ky_fan", k=2)
    NormKind("schatten", p=2.0)
    with pytest.raises(ArgumentError):
        NormKind("nuclear")
    with pytest.raises(ArgumentError):
        NormKind("ky_fan", k=0)
    with pytest.raises(ArgumentError):
        NormKind("schatten", p=0.3)
