"""Expander-walk tail machinery: contraction bounds, exact transfer-operator
expectations, the main tail bound with its minimization over t, and Monte
Carlo tail estimates.

The exact expectation of the walk's tensor-exponential trace is computed by
powering the block operator ``F (A kron I)`` against ``u0 = 1/sqrt(n) kron
vec(I)``.  The diagonal blocks are ``T_v = E_v kron conj(E_v)`` with ``E_v =
exp(t g(v) (a + i b) / 2)``: conjugating the second factor makes the
vec-trace identity exact for complex Hermitian ``g`` (for real symmetric
``g`` it reduces to the usual ``E_v kron exp(t g (a - i b) / 2)`` form), and
it changes none of the norm bounds since ``||conj(g)|| = ||g||``.

Monte Carlo tail estimates draw walk ``i`` from the stream keyed
``(seed, DOMAIN_WALK, i)``, so estimates are reproducible for a fixed
``(seed, num_walks)`` no matter how the walks are chunked across workers.
"""

from __future__ import annotations

import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from .errors import (
    ArgumentError,
    CapacityError,
    DomainError,
    NumericalError,
    PreconditionError,
)
from .graphs import RegularGraph, load_edge_list, normalized_adjacency, sample_walks_array, save_edge_list
from .inequalities import beta0_density
from .io import load_tensor, save_tensor
from .rng import DOMAIN_PROBE, DOMAIN_TENSORS, stream
from .sampling import random_bounded_hermitian
from .tensors import HermitianTensor, TensorShape, as_hermitian

TRANSFER_CAPACITY_CAP = 4096  # max n * dim^2 for the dense block operator
DEFAULT_TAIL_CHUNK = 8192


# ---------------------------------------------------------------------------
# Data types
# ---------------------------------------------------------------------------

class VertexTensorAssignment:
    """One Hermitian tensor per vertex, with the radius recomputed on entry."""

    __slots__ = ("graph", "tensors", "radius")

    def __init__(self, graph: RegularGraph, tensors: Sequence[HermitianTensor]):
        tensors = tuple(as_hermitian(t) for t in tensors)
        if len(tensors) != graph.n:
            raise ArgumentError(f"need one tensor per vertex: {len(tensors)} != {graph.n}")
        shape = tensors[0].shape
        for t in tensors[1:]:
            if t.shape != shape:
                raise ArgumentError("all vertex tensors must share one square shape")
        radius = max(
            float(np.max(np.abs(np.linalg.eigvalsh(t.matrix)))) for t in tensors
        )
        object.__setattr__(self, "graph", graph)
        object.__setattr__(self, "tensors", tensors)
        object.__setattr__(self, "radius", radius)

    def __setattr__(self, name, value):
        raise AttributeError("VertexTensorAssignment is immutable")

    @property
    def shape(self) -> TensorShape:
        return self.tensors[0].shape

    @property
    def dim(self) -> int:
        return self.tensors[0].shape.unfold_rows

    def stack(self) -> np.ndarray:
        return np.stack([t.matrix for t in self.tensors])

    def __reduce__(self):
        return (VertexTensorAssignment, (self.graph, self.tensors))


def random_assignment(
    graph: RegularGraph, shape: TensorShape, radius: float, seed: int
) -> VertexTensorAssignment:
    """Per-vertex random Hermitian tensors with spectral norm exactly ``radius``."""
    tensors = [
        random_bounded_hermitian(shape, stream(seed, DOMAIN_TENSORS, v), radius)
        for v in range(graph.n)
    ]
    return VertexTensorAssignment(graph, tensors)


@dataclass(frozen=True)
class PolynomialSpec:
    """Map ``x -> (a_0 + a_1 x + ... + a_n x^n)^s`` with nonnegative coefficients."""

    coefficients: tuple[float, ...]
    power: float = 1.0

    def __post_init__(self):
        coeffs = tuple(float(c) for c in self.coefficients)
        if not coeffs:
            raise ArgumentError("polynomial needs at least one coefficient")
        if any(c < 0 for c in coeffs):
            raise ArgumentError(f"coefficients must be nonnegative, got {coeffs}")
        if self.power < 1:
            raise ArgumentError(f"power must be >= 1, got {self.power}")
        object.__setattr__(self, "coefficients", coeffs)
        object.__setattr__(self, "power", float(self.power))

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    @classmethod
    def identity(cls) -> "PolynomialSpec":
        return cls((0.0, 1.0), 1.0)

    @property
    def is_identity(self) -> bool:
        return self.coefficients == (0.0, 1.0) and self.power == 1.0

    def __call__(self, x):
        base = np.polynomial.polynomial.polyval(np.asarray(x, dtype=np.float64), self.coefficients)
        if self.power == 1.0:
            return base
        if float(self.power).is_integer():
            return base ** int(self.power)
        if np.any(base < 0):
            raise DomainError("non-integer power of a negative polynomial value")
        return base ** self.power


@dataclass(frozen=True)
class DominationFit:
    """Constants with ``beta0(tau) <= C exp(-tau^2 / 2 sigma^2) / (sigma sqrt(2 pi))``
    on ``[-window, window]``."""

    c: float
    sigma: float
    window: float
    verified: bool


@dataclass(frozen=True)
class ChernoffParams:
    """Everything the tail-bound formulas consume.

    ``lam_bar`` is one minus the spectral expansion.  Bipartite graphs reach
    ``lam_bar = 0`` under the absolute-value expansion definition; the bound
    formulas remain well defined there, so 0 is allowed and surfaced via
    ``expanding``.
    """

    kappa: int
    k: int
    theta: float
    lam_bar: float
    dim: int
    radius: float

    def __post_init__(self):
        if self.kappa < 1:
            raise ArgumentError(f"kappa must be >= 1, got {self.kappa}")
        if not 1 <= self.k <= self.dim:
            raise ArgumentError(f"k must be in [1, {self.dim}], got {self.k}")
        if self.theta <= 0:
            raise ArgumentError(f"theta must be positive, got {self.theta}")
        if not 0.0 <= self.lam_bar <= 1.0:
            raise ArgumentError(f"lam_bar must be in [0, 1], got {self.lam_bar}")
        if self.radius <= 0:
            raise ArgumentError(f"radius must be positive, got {self.radius}")

    @property
    def expanding(self) -> bool:
        return self.lam_bar > 0.0


# ---------------------------------------------------------------------------
# Contraction machinery (block operator)
# ---------------------------------------------------------------------------

def gamma_bounds(t: float, r: float, a: float, b: float, lam: float) -> tuple[float, float, float, float]:
    """Contraction factors of the block operator on the parallel/orthogonal split."""
    e = math.exp(t * r * math.hypot(a, b))
    return e, lam * (e - 1.0), e - 1.0, lam * e


def _vertex_block(g_matrix: np.ndarray, t: float, a: float, b: float) -> np.ndarray:
    vals, vecs = np.linalg.eigh(g_matrix)
    e = (vecs * np.exp(t * (a + 1j * b) / 2.0 * vals)) @ vecs.conj().T
    return np.kron(e, e.conj())


def _block_operator(assignment: VertexTensorAssignment, t: float, a: float, b: float):
    """Dense ``F (A kron I)`` matrix plus ``u0``; guarded by the capacity cap."""
    n, d2 = assignment.graph.n, assignment.dim ** 2
    size = n * d2
    if size > TRANSFER_CAPACITY_CAP:
        raise CapacityError(
            f"block operator size n * dim^2 = {size} exceeds cap {TRANSFER_CAPACITY_CAP}"
        )
    blocks = [_vertex_block(g.matrix, t, a, b) for g in assignment.tensors]
    a_norm = normalized_adjacency(assignment.graph)
    op = np.zeros((size, size), dtype=np.complex128)
    # F is block diagonal, so F (A kron I) has (u, v) block A_uv * T_u
    for u in range(n):
        for v in range(n):
            if a_norm[u, v] != 0.0:
                op[u * d2:(u + 1) * d2, v * d2:(v + 1) * d2] = a_norm[u, v] * blocks[u]
    ident = np.eye(assignment.dim, dtype=np.complex128)
    u0 = np.kron(np.ones(n) / math.sqrt(n), ident.ravel()).astype(np.complex128)
    return op, u0


def _split_parallel(vec: np.ndarray, n: int, d2: int) -> tuple[np.ndarray, np.ndarray]:
    mat = vec.reshape(n, d2)
    par = np.broadcast_to(mat.mean(axis=0), (n, d2))
    return par.ravel(), (mat - par).ravel()


@dataclass(frozen=True)
class ContractionReport:
    """Worst observed ratio per part of the contraction lemma, against its gamma."""

    gammas: tuple[float, float, float, float]
    worst_ratios: tuple[float, float, float, float]
    holds: bool
    num_probes: int


def contraction_certificate(
    assignment: VertexTensorAssignment,
    t: float,
    a: float,
    b: float,
    num_probes: int = 100,
    seed: int = 0,
    tol: float = 1e-9,
) -> ContractionReport:
    """Check the four norm-contraction bounds on random probe tensors."""
    from .graphs import spectral_expansion

    lam = spectral_expansion(assignment.graph)
    gammas = gamma_bounds(t, assignment.radius, a, b, lam)
    op, _ = _block_operator(assignment, t, a, b)
    n, d2 = assignment.graph.n, assignment.dim ** 2
    rng = stream(seed, DOMAIN_PROBE)
    worst = [0.0, 0.0, 0.0, 0.0]
    for _ in range(num_probes):
        u = rng.standard_normal(n * d2) + 1j * rng.standard_normal(n * d2)
        par, perp = _split_parallel(u, n, d2)
        for idx, comp in ((0, par), (1, perp)):
            nrm = np.linalg.norm(comp)
            if nrm < 1e-12:
                continue
            out_par, out_perp = _split_parallel(op @ comp, n, d2)
            if idx == 0:  # parallel input: parts 1 and 3
                worst[0] = max(worst[0], np.linalg.norm(out_par) / nrm)
                worst[2] = max(worst[2], np.linalg.norm(out_perp) / nrm)
            else:  # orthogonal input: parts 2 and 4
                worst[1] = max(worst[1], np.linalg.norm(out_par) / nrm)
                worst[3] = max(worst[3], np.linalg.norm(out_perp) / nrm)
    holds = all(w <= g + tol for w, g in zip(worst, gammas))
    return ContractionReport(
        gammas=gammas, worst_ratios=tuple(worst), holds=holds, num_probes=num_probes
    )


def transfer_expectation(
    assignment: VertexTensorAssignment, t: float, a: float, b: float, kappa: int
) -> float:
    """Exact ``E[Tr(prod exp(t g(v_i)(a+ib)/2) prod exp(t g(v_i)(a-ib)/2))]``
    under the stationary walk, via ``kappa`` applications of the block operator."""
    if kappa < 1:
        raise ArgumentError(f"kappa must be >= 1, got {kappa}")
    op, u0 = _block_operator(assignment, t, a, b)
    w = u0.astype(np.complex128)
    for _ in range(kappa):
        w = op @ w
    val = complex(np.vdot(u0, w))
    scale = max(1.0, abs(val.real))
    if abs(val.imag) > 1e-9 * scale:
        raise NumericalError(f"transfer expectation has imaginary residue {val.imag:.3e}")
    return float(val.real)


def expectation_bound(
    params: ChernoffParams, t: float, a: float, b: float, lam: float
) -> float:
    """Displayed expectation bound; raises unless the lemma's hypotheses hold."""
    s = t * params.radius * math.hypot(a, b)
    if not s < 1.0:
        raise PreconditionError(f"need t * r * sqrt(a^2+b^2) < 1, got {s}")
    if not lam * (2.0 * math.exp(s) - 1.0) <= 1.0:
        raise PreconditionError(
            f"need lam (2 exp(t r sqrt(a^2+b^2)) - 1) <= 1, got {lam * (2.0 * math.exp(s) - 1.0)}"
        )
    exponent = params.kappa * (2.0 * s + 8.0 / (1.0 - lam) + 16.0 * s / (1.0 - lam))
    return params.dim * math.exp(exponent)


# ---------------------------------------------------------------------------
# Gaussian domination of beta0
# ---------------------------------------------------------------------------

def _max_domination_ratio(window: float, sigma: float, grid_points: int) -> float:
    """Supremum of ``beta0(tau) sigma sqrt(2 pi) exp(tau^2 / 2 sigma^2)`` over the window.

    Grid scan plus golden-section refinement around the best grid point: the
    grid alone can undershoot the continuous supremum by the inter-node growth
    of the ratio, which a randomized audit would catch.
    """

    def ratio(tau: float | np.ndarray):
        with np.errstate(over="ignore"):
            return beta0_density(tau) * sigma * math.sqrt(2.0 * math.pi) * np.exp(
                np.asarray(tau, dtype=np.float64) ** 2 / (2.0 * sigma**2)
            )

    taus = np.linspace(-window, window, grid_points)
    vals = ratio(taus)
    i = int(np.argmax(vals))
    a = float(taus[max(i - 1, 0)])
    b = float(taus[min(i + 1, grid_points - 1)])
    phi = (math.sqrt(5.0) - 1.0) / 2.0
    c = b - phi * (b - a)
    d = a + phi * (b - a)
    fc, fd = float(ratio(c)), float(ratio(d))
    while (b - a) > 1e-12 * max(1.0, abs(b)):
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - phi * (b - a)
            fc = float(ratio(c))
        else:
            a, c, fc = c, d, fd
            d = a + phi * (b - a)
            fd = float(ratio(d))
    return max(float(np.max(vals)), fc, fd)


def fit_gaussian_domination(
    window: float, sigma_grid: Sequence[float], grid_points: int = 10000
) -> DominationFit:
    """Smallest C over the sigma grid dominating beta0 on ``[-window, window]``."""
    if window <= 0:
        raise ArgumentError(f"window must be positive, got {window}")
    best_c, best_sigma = math.inf, None
    for sigma in sigma_grid:
        if sigma <= 0:
            raise ArgumentError(f"sigma values must be positive, got {sigma}")
        c = _max_domination_ratio(window, float(sigma), grid_points)
        if c < best_c:
            best_c, best_sigma = c, float(sigma)
    best_c *= 1.0 + 1e-9  # cushion so the inequality holds strictly at the argmax
    taus = np.linspace(-window, window, grid_points)
    gauss = best_c * np.exp(-(taus**2) / (2.0 * best_sigma**2)) / (best_sigma * math.sqrt(2.0 * math.pi))
    verified = bool(np.all(beta0_density(taus) <= gauss))
    return DominationFit(c=best_c, sigma=best_sigma, window=float(window), verified=verified)


# ---------------------------------------------------------------------------
# Tail bounds
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BoundResult:
    """Evaluated tail bound with its minimizer.

    ``vacuous`` marks values above 1 (no information).  ``lemma_preconditions``
    reports whether the expectation lemma's dropped hypotheses hold at the
    minimizer for the largest polynomial term (checked at ``a=1, b=0``).
    """

    value: float
    t_opt: float
    vacuous: bool
    lemma_preconditions: bool


def _theorem_objective(params: ChernoffParams, poly: PolynomialSpec, fit: DominationFit):
    n_deg = poly.degree
    s = poly.power
    kb = params.lam_bar
    pref = fit.c * (params.k + math.sqrt((params.dim - params.k) / params.k))
    coeff = (n_deg + 1) ** (s - 1.0)
    a_l = [2.0 * (params.kappa + 8.0 * kb) * l * s * params.radius for l in range(n_deg + 1)]
    b_l = [2.0 * (fit.sigma * (params.kappa + 8.0 * kb) * l * s * params.radius) ** 2 for l in range(n_deg + 1)]
    base = 8.0 * params.kappa * kb

    def objective(t: np.ndarray | float):
        t = np.asarray(t, dtype=np.float64)
        with np.errstate(over="ignore"):
            # e^{-theta t} is folded into every exponent so huge theta cannot
            # produce 0 * inf
            total = np.zeros_like(t)
            for l in range(1, n_deg + 1):
                al = poly.coefficients[l]
                if al == 0.0:
                    continue
                total = total + al * np.exp(base + (a_l[l] - params.theta) * t + b_l[l] * t**2)
            vals = coeff * (
                poly.coefficients[0] * params.k * np.exp(-params.theta * t) + pref * total
            )
        return vals if vals.ndim else float(vals)

    return objective


def theorem_bound(
    params: ChernoffParams,
    poly: PolynomialSpec,
    fit: DominationFit,
    t_search: tuple[float, float] | None = None,
) -> BoundResult:
    """Minimize the displayed tail-bound expression over ``t > 0``.

    Coarse log-spaced grid, then golden-section refinement to 1e-8 relative.
    """
    if not fit.verified:
        raise ArgumentError("domination fit must be verified")
    objective = _theorem_objective(params, poly, fit)
    if t_search is None:
        vertices = [
            (params.theta - 2.0 * (params.kappa + 8.0 * params.lam_bar) * l * poly.power * params.radius)
            / (4.0 * (fit.sigma * (params.kappa + 8.0 * params.lam_bar) * l * poly.power * params.radius) ** 2)
            for l in range(1, poly.degree + 1)
            if poly.coefficients[l] != 0.0
        ]
        hi = max([1.0] + [4.0 * v for v in vertices if v > 0])
        t_search = (1e-8, hi)
    lo, hi = t_search
    if not (0 < lo < hi):
        raise ArgumentError(f"t_search must satisfy 0 < lo < hi, got {t_search}")

    grid = np.geomspace(lo, hi, 200)
    vals = objective(grid)
    i = int(np.argmin(vals))
    left = grid[max(i - 1, 0)]
    right = grid[min(i + 1, grid.size - 1)]

    phi = (math.sqrt(5.0) - 1.0) / 2.0
    a_t, b_t = left, right
    c_t = b_t - phi * (b_t - a_t)
    d_t = a_t + phi * (b_t - a_t)
    fc, fd = objective(c_t), objective(d_t)
    while (b_t - a_t) > 1e-8 * max(a_t, 1e-12):
        if fc <= fd:
            b_t, d_t, fd = d_t, c_t, fc
            c_t = b_t - phi * (b_t - a_t)
            fc = objective(c_t)
        else:
            a_t, c_t, fc = c_t, d_t, fd
            d_t = a_t + phi * (b_t - a_t)
            fd = objective(d_t)
    t_opt = (a_t + b_t) / 2.0
    value = float(objective(t_opt))
    return BoundResult(
        value=value,
        t_opt=float(t_opt),
        vacuous=value > 1.0,
        lemma_preconditions=_lemma_preconditions(params, poly, t_opt),
    )


def _lemma_preconditions(params: ChernoffParams, poly: PolynomialSpec, t: float) -> bool:
    l_max = max((l for l in range(1, poly.degree + 1) if poly.coefficients[l] != 0.0), default=0)
    if l_max == 0:
        return True
    s_eff = t * l_max * poly.power * params.radius
    lam = 1.0 - params.lam_bar
    return s_eff < 1.0 and lam * (2.0 * math.exp(s_eff) - 1.0) <= 1.0


def corollary_bound(params: ChernoffParams, fit: DominationFit) -> BoundResult:
    """Closed-form bound for the identity map, at the exact quadratic vertex.

    Substitutes ``t = (theta - 2 (kappa + 8 lam_bar) r) / (4 sigma^2 r^2
    (kappa + 8 lam_bar)^2)`` into the one-term objective, keeping the
    ``kappa + 8 lam_bar`` factors the substitution produces, so this agrees
    with ``theorem_bound`` for the identity polynomial.
    """
    if not fit.verified:
        raise ArgumentError("domination fit must be verified")
    kb = params.kappa + 8.0 * params.lam_bar
    r = params.radius
    sigma = fit.sigma
    t_opt = (params.theta - 2.0 * kb * r) / (4.0 * sigma**2 * r**2 * kb**2)
    if t_opt <= 0:
        raise PreconditionError(
            f"closed-form t = {t_opt:.3e} is not positive: theta below the vacuous threshold"
        )
    exponent = (
        8.0 * params.kappa * params.lam_bar
        - params.theta**2 / (8.0 * sigma**2 * r**2 * kb**2)
        + params.theta / (2.0 * sigma**2 * r**2 * kb)
        - 1.0 / (2.0 * sigma**2)
    )
    pref = fit.c * (params.k + math.sqrt((params.dim - params.k) / params.k))
    value = pref * math.exp(exponent)
    return BoundResult(
        value=value,
        t_opt=float(t_opt),
        vacuous=value > 1.0,
        lemma_preconditions=_lemma_preconditions(params, PolynomialSpec.identity(), t_opt),
    )


# ---------------------------------------------------------------------------
# Monte Carlo tail estimation
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TailEstimate:
    theta: float
    p_hat: float
    stderr: float
    assumption3_violations: int
    num_walks: int


def assumption3_margins(poly: PolynomialSpec, eigenvalues: np.ndarray, t: float) -> np.ndarray:
    """Per-row minimum of ``f(exp(t mu)) - exp(t f(mu))`` over the spectrum.

    Both sides are spectral functions of the same tensor, so they commute and
    positive semidefiniteness of the difference reduces exactly to these
    scalar margins.
    """
    with np.errstate(over="ignore"):
        lhs = poly(np.exp(t * eigenvalues))
        rhs = np.exp(t * poly(eigenvalues))
        return np.min(lhs - rhs, axis=-1)


def _tail_chunk(
    graph: RegularGraph,
    g_stack: np.ndarray,
    poly: PolynomialSpec,
    k: int,
    thetas: np.ndarray,
    kappa: int,
    seed: int,
    start: int,
    count: int,
    t_checks: np.ndarray,
) -> tuple[np.ndarray, np.ndarray]:
    walks = sample_walks_array(graph, kappa, count, seed, start_index=start)
    sums = g_stack[walks].sum(axis=1)
    mu = np.linalg.eigvalsh(sums)
    fmu = poly(mu)
    sv = np.sort(np.abs(fmu), axis=1)[:, ::-1]
    norms = np.sum(sv[:, :k], axis=1)
    hits = np.array([(norms >= th).sum() for th in thetas], dtype=np.int64)
    violations = np.zeros(thetas.size, dtype=np.int64)
    scale = 1e-9 * (1.0 + np.max(np.abs(fmu), axis=1))
    for i, t in enumerate(t_checks):
        if not np.isnan(t):
            margins = assumption3_margins(poly, mu, float(t))
            violations[i] = int(np.count_nonzero(margins < -scale))
    return hits, violations


def empirical_tail_sweep(
    assignment: VertexTensorAssignment,
    poly: PolynomialSpec,
    k: int,
    thetas: Sequence[float],
    num_walks: int,
    kappa: int,
    seed: int,
    t_check: float | Sequence[float] | None = None,
    workers: int = 1,
    chunk_size: int = DEFAULT_TAIL_CHUNK,
) -> list[TailEstimate]:
    """Monte Carlo tail probabilities for a grid of thresholds in one pass.

    ``t_check`` is the exponent at which each row's assumption-3 margin is
    audited: a scalar applies to every threshold, a sequence pairs with
    ``thetas`` (NaN skips the audit for that row).  Per-walk seed streams make
    the result identical for any ``workers`` and ``chunk_size``; chunks are
    reduced in index order.
    """
    if num_walks < 1:
        raise ArgumentError(f"num_walks must be >= 1, got {num_walks}")
    if not 1 <= k <= assignment.dim:
        raise ArgumentError(f"k must be in [1, {assignment.dim}], got {k}")
    thetas = np.asarray(list(thetas), dtype=np.float64)
    if t_check is None:
        t_checks = np.full(thetas.size, np.nan)
    else:
        t_checks = np.broadcast_to(
            np.asarray(t_check, dtype=np.float64), (thetas.size,)
        ).copy()
    g_stack = assignment.stack()
    chunks = [
        (start, min(chunk_size, num_walks - start))
        for start in range(0, num_walks, chunk_size)
    ]
    args = [
        (assignment.graph, g_stack, poly, k, thetas, kappa, seed, start, count, t_checks)
        for start, count in chunks
    ]
    if workers > 1 and len(args) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_tail_chunk_star, args))
    else:
        results = [_tail_chunk(*a) for a in args]
    hits = np.zeros(thetas.size, dtype=np.int64)
    violations = np.zeros(thetas.size, dtype=np.int64)
    for h, v in results:  # fixed chunk order; integer sums are order-independent anyway
        hits += h
        violations += v
    out = []
    for th, h, v in zip(thetas, hits, violations):
        p = h / num_walks
        out.append(
            TailEstimate(
                theta=float(th),
                p_hat=float(p),
                stderr=float(math.sqrt(p * (1.0 - p) / num_walks)),
                assumption3_violations=int(v),
                num_walks=num_walks,
            )
        )
    return out


def _tail_chunk_star(args):
    return _tail_chunk(*args)


def empirical_tail(
    assignment: VertexTensorAssignment,
    poly: PolynomialSpec,
    k: int,
    theta: float,
    num_walks: int,
    kappa: int,
    seed: int,
    t_check: float | None = None,
    workers: int = 1,
) -> TailEstimate:
    """Tail probability ``Pr(|| f(sum_j g(v_j)) ||_(k) >= theta)`` by Monte Carlo."""
    return empirical_tail_sweep(
        assignment, poly, k, [theta], num_walks, kappa, seed, t_check, workers
    )[0]


# ---------------------------------------------------------------------------
# Assignment serialization (manifest + tensor files)
# ---------------------------------------------------------------------------

ASSIGNMENT_FORMAT = "assignment/1"


def save_assignment(assignment: VertexTensorAssignment, directory: str | Path) -> Path:
    """Write the graph, one tensor file per vertex, and the manifest; returns
    the manifest path."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    save_edge_list(assignment.graph, directory / "graph.txt")
    vertices = {}
    for v, tensor in enumerate(assignment.tensors):
        name = f"vertex_{v:04d}.json"
        save_tensor(tensor, directory / name)
        vertices[str(v)] = name
    manifest = {"format": ASSIGNMENT_FORMAT, "graph": "graph.txt", "vertices": vertices}
    path = directory / "manifest.json"
    path.write_text(json.dumps(manifest, indent=2, sort_keys=True))
    return path


def load_assignment(manifest_path: str | Path, graph: RegularGraph | None = None) -> VertexTensorAssignment:
    """Load an assignment from its manifest; the graph comes from the manifest's
    edge-list entry unless one is supplied."""
    manifest_path = Path(manifest_path)
    manifest = json.loads(manifest_path.read_text())
    if manifest.get("format") != ASSIGNMENT_FORMAT:
        raise ArgumentError(f"unsupported manifest format: {manifest.get('format')!r}")
    base = manifest_path.parent
    if graph is None:
        if "graph" not in manifest:
            raise ArgumentError("manifest has no graph entry and no graph was supplied")
        graph = load_edge_list(base / manifest["graph"])
    entries = manifest["vertices"]
    tensors = []
    for v in range(graph.n):
        key = str(v)
        if key not in entries:
            raise ArgumentError(f"manifest missing tensor for vertex {v}")
        tensors.append(as_hermitian(load_tensor(base / entries[key])))
    return VertexTensorAssignment(graph, tensors)
