"""Contraction bounds, transfer-operator expectations, and tail bounds."""

import math
import pickle

import numpy as np
import pytest

from tensor_chernoff import TensorShape, make_zero
from tensor_chernoff.chernoff import (
    ChernoffParams,
    PolynomialSpec,
    VertexTensorAssignment,
    assumption3_margins,
    contraction_certificate,
    corollary_bound,
    empirical_tail,
    empirical_tail_sweep,
    expectation_bound,
    fit_gaussian_domination,
    gamma_bounds,
    load_assignment,
    random_assignment,
    save_assignment,
    theorem_bound,
    transfer_expectation,
)
from tensor_chernoff.errors import (
    ArgumentError,
    CapacityError,
    DomainError,
    PreconditionError,
)
from tensor_chernoff.graphs import gen_complete, gen_cycle, gen_hypercube, sample_walks_array
from tensor_chernoff.inequalities import beta0_density

S2 = TensorShape.square((2,))
S22 = TensorShape.square((2, 2))


# ---------------------------------------------------------------------------
# gamma bounds
# ---------------------------------------------------------------------------

def test_gamma_bounds_zero_exponent():
    assert gamma_bounds(0.0, 1.0, 1.0, 0.0, 0.5) == (1.0, 0.0, 0.0, 0.5)


def test_gamma_bounds_numeric_example():
    g1, g2, g3, g4 = gamma_bounds(0.1, 1.0, 1.0, 0.0, 0.5)
    e = math.exp(0.1)
    assert g1 == pytest.approx(e)
    assert g2 == pytest.approx(0.5 * (e - 1))
    assert g3 == pytest.approx(e - 1)
    assert g4 == pytest.approx(0.5 * e)


def test_gamma_algebraic_identities():
    for t, r, a, b, lam in ((0.3, 2.0, 1.0, 0.7, 0.4), (0.05, 1.0, 0.0, 1.0, 0.9)):
        g1, g2, g3, g4 = gamma_bounds(t, r, a, b, lam)
        assert g2 == pytest.approx(lam * g3)
        assert g4 == pytest.approx(lam * g1)


# ---------------------------------------------------------------------------
# Polynomial spec
# ---------------------------------------------------------------------------

def test_polynomial_spec():
    p = PolynomialSpec((1.0, 0.0, 2.0), power=2.0)
    assert p.degree == 2
    assert p(1.0) == pytest.approx((1 + 2) ** 2)
    assert np.allclose(p(np.array([0.0, 2.0])), [(1.0) ** 2, (1 + 8) ** 2])
    assert PolynomialSpec.identity().is_identity
    with pytest.raises(ArgumentError):
        PolynomialSpec((1.0, -0.5))
    with pytest.raises(ArgumentError):
        PolynomialSpec((1.0,), power=0.5)
    with pytest.raises(DomainError):
        PolynomialSpec((0.0, 1.0), power=1.5)(np.array([-1.0]))


# ---------------------------------------------------------------------------
# Contraction certificate and transfer expectation
# ---------------------------------------------------------------------------

def test_zero_assignment_certificate():
    g = gen_complete(4)
    zeros = [make_zero(S2) for _ in range(g.n)]
    with pytest.raises(ArgumentError):
        # radius 0 is rejected by ChernoffParams, but the certificate works
        ChernoffParams(kappa=1, k=1, theta=1.0, lam_bar=0.5, dim=2, radius=0.0)
    rep = contraction_certificate(VertexTensorAssignment(g, zeros), t=0.7, a=1.0, b=0.3)
    # F is the identity: parts 2 and 3 are exactly zero, parts 1 and 4 contract
    assert rep.worst_ratios[1] <= 1e-9
    assert rep.worst_ratios[2] <= 1e-9
    assert rep.holds


def test_certificate_on_small_graphs():
    rng_seed = 3
    for graph in (gen_complete(4), gen_cycle(4)):
        assignment = random_assignment(graph, S2, radius=1.0, seed=rng_seed)
        rep = contraction_certificate(assignment, t=0.4, a=1.0, b=0.5, num_probes=50)
        assert rep.holds, rep


def test_capacity_guard():
    g = gen_complete(20)
    assignment = random_assignment(g, TensorShape.square((4, 4)), 1.0, seed=0)
    with pytest.raises(CapacityError):
        transfer_expectation(assignment, 0.1, 1.0, 0.0, 2)


def test_transfer_identity_case():
    g = gen_complete(4)
    zeros = [make_zero(S22) for _ in range(g.n)]
    assignment = VertexTensorAssignment(g, zeros)
    assert transfer_expectation(assignment, 0.5, 1.0, 0.7, 1) == pytest.approx(4.0)
    assert transfer_expectation(assignment, 0.5, 1.0, 0.7, 5) == pytest.approx(4.0)


def test_transfer_constant_assignment_closed_form():
    # every vertex carries the same tensor, so the trace has a closed form
    g = gen_complete(2)
    rng = np.random.default_rng(8)
    from tensor_chernoff.sampling import random_hermitian

    h = random_hermitian(S2, rng)
    assignment = VertexTensorAssignment(g, [h, h])
    t, a, b, kappa = 0.3, 1.0, 0.6, 4
    mu = np.linalg.eigvalsh(h.matrix)
    expected = float(np.sum(np.exp(t * kappa * a * mu)))
    assert transfer_expectation(assignment, t, a, b, kappa) == pytest.approx(expected, rel=1e-9)


def test_transfer_matches_monte_carlo():
    g = gen_complete(4)
    assignment = random_assignment(g, S2, radius=1.0, seed=5)
    t, a, b, kappa = 0.25, 1.0, 0.4, 4
    exact = transfer_expectation(assignment, t, a, b, kappa)

    n_walks = 60000
    walks = sample_walks_array(g, kappa, n_walks, seed=77)
    mats = []
    for v in range(g.n):
        vals, vecs = np.linalg.eigh(assignment.tensors[v].matrix)
        mats.append((vecs * np.exp(t * (a + 1j * b) / 2.0 * vals)) @ vecs.conj().T)
    mats = np.stack(mats)
    prod = mats[walks[:, 0]]
    for j in range(1, kappa):
        prod = prod @ mats[walks[:, j]]
    traces = np.sum(np.abs(prod) ** 2, axis=(1, 2))  # Tr(P P^H) = ||P||_F^2
    mean, se = float(traces.mean()), float(traces.std(ddof=1) / math.sqrt(n_walks))
    assert abs(exact - mean) <= 3 * se, (exact, mean, se)


def test_expectation_bound():
    params = ChernoffParams(kappa=3, k=1, theta=1.0, lam_bar=0.5, dim=4, radius=1.0)
    lam = 0.5
    # t -> 0 limit
    assert expectation_bound(params, 1e-12, 1.0, 0.0, lam) == pytest.approx(
        4.0 * math.exp(3 * 8.0 / 0.5), rel=1e-6
    )
    # monotone nondecreasing in t on the admissible range
    ts = np.linspace(1e-4, 0.3, 20)
    vals = [expectation_bound(params, t, 1.0, 0.0, lam) for t in ts]
    assert all(b >= a for a, b in zip(vals, vals[1:]))
    with pytest.raises(PreconditionError):
        expectation_bound(params, 2.0, 1.0, 0.0, lam)  # t r > 1
    with pytest.raises(PreconditionError):
        expectation_bound(params, 0.9, 1.0, 0.0, 0.99)  # lam condition


def test_transfer_below_expectation_bound():
    for graph in (gen_complete(4), gen_cycle(5)):
        from tensor_chernoff.graphs import spectral_expansion

        lam = spectral_expansion(graph)
        assignment = random_assignment(graph, S2, radius=1.0, seed=2)
        params = ChernoffParams(
            kappa=3, k=1, theta=1.0, lam_bar=1 - lam, dim=2, radius=assignment.radius
        )
        for t in (0.05, 0.2):
            if lam * (2 * math.exp(t) - 1) > 1:
                continue
            exact = transfer_expectation(assignment, t, 1.0, 0.0, 3)
            bound = expectation_bound(params, t, 1.0, 0.0, lam)
            assert exact <= bound


# ---------------------------------------------------------------------------
# Domination fit
# ---------------------------------------------------------------------------

def test_domination_fit_sigma_one():
    fit = fit_gaussian_domination(6.0, [1.0])
    assert fit.verified and fit.sigma == 1.0
    assert fit.c >= beta0_density(0.0) * math.sqrt(2 * math.pi)
    taus = np.linspace(-6, 6, 10000)
    grid_max = float(np.max(beta0_density(taus) * math.sqrt(2 * math.pi) * np.exp(taus**2 / 2)))
    assert fit.c == pytest.approx(grid_max, rel=0.01)


def test_domination_randomized_audit():
    fit = fit_gaussian_domination(6.0, [0.8, 1.0, 1.5, 2.0])
    rng = np.random.default_rng(1)
    taus = rng.uniform(-6, 6, size=100000)
    gauss = fit.c * np.exp(-(taus**2) / (2 * fit.sigma**2)) / (fit.sigma * math.sqrt(2 * math.pi))
    assert np.all(beta0_density(taus) <= gauss * (1 + 1e-9))


def test_domination_window_required():
    with pytest.raises(ArgumentError):
        fit_gaussian_domination(-1.0, [1.0])
    with pytest.raises(ArgumentError):
        fit_gaussian_domination(6.0, [0.0])


def test_domination_sigma_monotonicity():
    # while the window boundary dominates the ratio, widening the Gaussian
    # can only lower the required C
    from tensor_chernoff.chernoff import _max_domination_ratio

    cs = [_max_domination_ratio(6.0, s, 10000) for s in (0.5, 0.7, 0.9, 1.1)]
    assert all(b <= a for a, b in zip(cs, cs[1:]))
    # the grid minimizer is an interior sigma for a wide grid
    fit = fit_gaussian_domination(6.0, [0.5, 0.9, 1.2, 2.0, 4.0])
    assert fit.sigma == 1.2


# ---------------------------------------------------------------------------
# Theorem and corollary bounds
# ---------------------------------------------------------------------------

FIT = fit_gaussian_domination(6.0, [1.0])


def _params(theta, kappa=4, k=1, lam_bar=2 / 3, dim=2, radius=1.0):
    return ChernoffParams(kappa=kappa, k=k, theta=theta, lam_bar=lam_bar, dim=dim, radius=radius)


def test_theorem_bound_decreases_with_theta_factor():
    poly = PolynomialSpec.identity()
    params = _params(theta=30.0)
    res = theorem_bound(params, poly, FIT)
    bigger = theorem_bound(_params(theta=60.0), poly, FIT)
    assert bigger.value < res.value  # e^{-theta t} factor


def test_corollary_matches_substitution():
    # substituting the closed-form t into the one-term objective reproduces
    # the corollary value exactly
    params = _params(theta=40.0, kappa=4)
    res = corollary_bound(params, FIT)
    kb = params.kappa + 8 * params.lam_bar
    t = res.t_opt
    assert t == pytest.approx((params.theta - 2 * kb) / (4 * FIT.sigma**2 * kb**2))
    pref = FIT.c * (params.k + math.sqrt((params.dim - params.k) / params.k))
    objective = (
        pref
        * math.exp(-params.theta * t)
        * math.exp(8 * params.kappa * params.lam_bar + 2 * kb * t + 2 * (FIT.sigma * kb) ** 2 * t**2)
    )
    assert res.value == pytest.approx(objective, rel=1e-9)


def test_corollary_equals_theorem_minimum():
    poly = PolynomialSpec.identity()
    for theta in (30.0, 45.0, 80.0):
        for kappa, lam_bar in ((4, 2 / 3), (8, 2 / 3), (4, 0.0)):
            params = _params(theta=theta, kappa=kappa, lam_bar=lam_bar)
            try:
                cor = corollary_bound(params, FIT)
            except PreconditionError:
                continue
            thm = theorem_bound(params, poly, FIT)
            assert thm.value == pytest.approx(cor.value, rel=1e-6)


def test_theorem_grid_minimum_matches_analytic_vertex():
    # single dominating term: the exponent is quadratic, vertex at
    # -theta + 2(kappa+8lb)lsr + 4(sigma(kappa+8lb)lsr)^2 t = 0
    params = _params(theta=50.0, kappa=4)
    poly = PolynomialSpec((0.0, 1.0))
    res = theorem_bound(params, poly, FIT)
    kb = params.kappa + 8 * params.lam_bar
    t_vertex = (params.theta - 2 * kb) / (4 * (FIT.sigma * kb) ** 2)
    assert res.t_opt == pytest.approx(t_vertex, rel=1e-6)


def test_corollary_monotone_decreasing_past_vertex():
    vals = []
    for theta in (40.0, 50.0, 60.0, 80.0):
        vals.append(corollary_bound(_params(theta=theta), FIT).value)
    assert all(b < a for a, b in zip(vals, vals[1:]))


def test_corollary_precondition():
    with pytest.raises(PreconditionError):
        corollary_bound(_params(theta=1.0), FIT)


def test_theta_to_infinity_limit():
    poly = PolynomialSpec.identity()
    res = theorem_bound(_params(theta=500.0), poly, FIT)
    assert res.value < 1e-100
    assert not res.vacuous


# ---------------------------------------------------------------------------
# Monte Carlo tail
# ---------------------------------------------------------------------------

def test_tail_trivial_cases():
    g = gen_complete(4)
    assignment = random_assignment(g, S2, radius=1.0, seed=1)
    est = empirical_tail(assignment, PolynomialSpec((1.0,)), 1, 1e-12, 500, 3, seed=0)
    assert est.p_hat == 1.0  # nonnegative f against theta ~ 0

    zeros = VertexTensorAssignment(g, [make_zero(S2) for _ in range(4)])
    est = empirical_tail(zeros, PolynomialSpec.identity(), 1, 0.5, 500, 3, seed=0)
    assert est.p_hat == 0.0


def test_tail_identity_assumption3_never_violated():
    g = gen_complete(4)
    assignment = random_assignment(g, S2, radius=1.0, seed=4)
    est = empirical_tail(
        assignment, PolynomialSpec.identity(), 1, 2.0, 2000, 6, seed=9, t_check=0.7
    )
    assert est.assumption3_violations == 0


def test_assumption3_margins_identity_zero():
    mu = np.array([[-1.0, 0.3, 2.0]])
    m = assumption3_margins(PolynomialSpec.identity(), mu, t=0.9)
    assert np.allclose(m, 0.0)


def test_tail_sweep_matches_direct_counting():
    g = gen_cycle(5)
    assignment = random_assignment(g, S2, radius=1.0, seed=11)
    poly = PolynomialSpec.identity()
    kappa, num = 5, 4000
    thetas = [0.5, 1.5, 2.5]
    sweep = empirical_tail_sweep(assignment, poly, 1, thetas, num, kappa, seed=21)

    walks = sample_walks_array(g, kappa, num, seed=21)
    sums = assignment.stack()[walks].sum(axis=1)
    norms = np.max(np.abs(np.linalg.eigvalsh(sums)), axis=1)
    for est, th in zip(sweep, thetas):
        assert est.p_hat == pytest.approx(float(np.mean(norms >= th)))
    # monotone in theta
    assert sweep[0].p_hat >= sweep[1].p_hat >= sweep[2].p_hat


def test_tail_chunking_and_workers_invariance():
    g = gen_complete(4)
    assignment = random_assignment(g, S2, radius=1.0, seed=6)
    poly = PolynomialSpec.identity()
    a = empirical_tail_sweep(assignment, poly, 1, [1.0], 3000, 4, seed=3, chunk_size=701)
    b = empirical_tail_sweep(assignment, poly, 1, [1.0], 3000, 4, seed=3, chunk_size=3000)
    c = empirical_tail_sweep(assignment, poly, 1, [1.0], 3000, 4, seed=3, chunk_size=512, workers=2)
    assert a[0] == b[0] == c[0]


# ---------------------------------------------------------------------------
# Assignment round trip
# ---------------------------------------------------------------------------

def test_assignment_roundtrip(tmp_path):
    g = gen_hypercube(2)
    assignment = random_assignment(g, S2, radius=1.5, seed=13)
    manifest = save_assignment(assignment, tmp_path / "assign")
    back = load_assignment(manifest)
    assert back.radius == pytest.approx(assignment.radius)
    for x, y in zip(back.tensors, assignment.tensors):
        assert x == y
    assert np.array_equal(back.graph.adjacency, g.adjacency)


def test_assignment_pickles():
    g = gen_complete(4)
    assignment = random_assignment(g, S2, radius=1.0, seed=2)
    again = pickle.loads(pickle.dumps(assignment))
    assert again.tensors == assignment.tensors


def test_assignment_validation():
    g = gen_complete(4)
    with pytest.raises(ArgumentError):
        VertexTensorAssignment(g, [make_zero(S2)] * 3)
    mixed = [make_zero(S2)] * 3 + [make_zero(TensorShape.square((3,)))]
    with pytest.raises(ArgumentError):
        VertexTensorAssignment(g, mixed)
