"""Independent checks of the Gaussian forms of both inequalities.

Everything in this module treats the solver's output as a claim to be
falsified: random SPD inputs are thrown at the determinant inequalities
that the constant is supposed to dominate, and a random-restart ascent
recomputes a lower bound for the constant without ever touching the
fixed-point iteration.

Specialized to centered Gaussians, the two inequalities read

    direct    prod_i det(A_i)^{c_i}  <=  C^2 det(sum_i c_i B_i^T A_i B_i)
    reversed  det(harmonic_combine(A_1..A_m))  <=  C^2 prod_i det(A_i)^{c_i}

and the dual form bounds det(A) <= C^2 prod_i det(B_i A B_i^T)^{c_i} for
every SPD A on the ambient space. All ratios are formed in the log domain.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from ._linalg import check_spd, chol_logdet, dexp_adjoint, expm_sym, spd_inverse, sym
from .datum import BLDatum, DatumError, validate
from .gaussian_solver import HOMOGENEITY_TOL, grad_logdet, logdet_objective
from .quadform import check_tuple, harmonic_combine
from .report import VerificationReport

DEFAULT_SEED = 1729
DEFAULT_SAMPLES = 1000

# A sampled ratio above this counts as a violation; everything below is
# quadrature-free exact arithmetic, so the slack only absorbs roundoff.
VIOLATION_RTOL = 1e-9

# Sample sweeps always split into this many RNG blocks so results do not
# depend on how many worker threads execute them.
_BLOCKS = 16


def sample_spd(n: int, rng: np.random.Generator, spread: bool = True) -> np.ndarray:
    """Random SPD matrix G G^T + 1e-6 I, optionally rescaled log-uniformly
    over [1e-2, 1e2] so sweeps exercise more than one scale."""
    G = rng.standard_normal((n, n))
    M = G @ G.T + 1e-6 * np.eye(n)
    if spread:
        M = M * math.exp(rng.uniform(math.log(1e-2), math.log(1e2)))
    return sym(M)


def sample_tuple(datum: BLDatum, rng: np.random.Generator, spread: bool = True) -> list[np.ndarray]:
    """One random SPD matrix per non-zero factor."""
    return [sample_spd(datum.factors[i].target_dim, rng, spread) for i in datum.active_indices()]


def direct_gaussian_check(datum: BLDatum, constant: float, tuple_) -> float:
    """Ratio of the Gaussian direct inequality; at most 1 when `constant`
    really dominates the datum, exactly 1 at the direct extremizers."""
    mats = check_tuple(datum, tuple_)
    log_num = 0.0
    S = np.zeros((datum.n, datum.n))
    for i, Ai in zip(datum.active_indices(), mats):
        f = datum.factors[i]
        log_num += f.c * chol_logdet(Ai, name=f"tuple entry {i}")[1]
        S += f.c * (f.B.T @ Ai @ f.B)
    _, log_den = chol_logdet(sym(S), name="combined precision")
    return math.exp(log_num - 2.0 * math.log(constant) - log_den)


def reverse_gaussian_check(datum: BLDatum, constant: float, tuple_) -> float:
    """Ratio of the Gaussian reversed inequality; at most 1 when `constant`
    dominates, exactly 1 at the reversed extremizers."""
    mats = check_tuple(datum, tuple_)
    M = harmonic_combine(datum, mats)
    _, log_num = chol_logdet(M, name="harmonic combination")
    log_den = sum(
        datum.factors[i].c * chol_logdet(Ai, name=f"tuple entry {i}")[1]
        for i, Ai in zip(datum.active_indices(), mats)
    )
    return math.exp(log_num - 2.0 * math.log(constant) - log_den)


def dual_check(datum: BLDatum, constant: float, A: np.ndarray) -> float:
    """Ratio det(A) / (C^2 prod_i det(B_i A B_i^T)^{c_i}); at most 1 for every
    ambient SPD A, exactly 1 at the fixed point. Invariant under A -> t A."""
    A = check_spd(A, "A")
    _, log_num = chol_logdet(A, name="A")
    log_den = 0.0
    for i in datum.active_indices():
        f = datum.factors[i]
        log_den += f.c * chol_logdet(sym(f.B @ A @ f.B.T), name=f"B_{i} A B_{i}^T")[1]
    return math.exp(log_num - 2.0 * math.log(constant) - log_den)


def logdet_duality_check(A: np.ndarray, B: np.ndarray) -> float:
    """Gap of the concave-duality bound logdet(A) <= tr(A B) - n - logdet(inv(B)).

    Written with B as the dual variable: gap = tr(A B) - n - logdet(B) - logdet(A),
    nonnegative for all SPD pairs and zero exactly at B = inv(A)."""
    A = check_spd(A, "A")
    B = check_spd(B, "B")
    n = A.shape[0]
    _, ld_A = chol_logdet(A, "A")
    _, ld_B = chol_logdet(B, "B")
    return float(np.trace(A @ B)) - n - ld_B - ld_A


# -- randomized sweeps ---------------------------------------------------------

def _block_sizes(samples: int) -> list[int]:
    base, extra = divmod(samples, _BLOCKS)
    return [base + (1 if b < extra else 0) for b in range(_BLOCKS)]


def _sweep(kernel, samples: int, seed: int, threads: int) -> np.ndarray:
    """Run `kernel(rng, count) -> ratios` over fixed RNG blocks. The block
    layout never depends on `threads`, so reports are reproducible."""
    sizes = _block_sizes(samples)

    def run(b: int) -> np.ndarray:
        rng = np.random.default_rng(np.random.SeedSequence((seed, b)))
        return kernel(rng, sizes[b])

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            chunks = list(pool.map(run, range(_BLOCKS)))
    else:
        chunks = [run(b) for b in range(_BLOCKS)]
    return np.concatenate(chunks)


def _report(ratios: np.ndarray, seed: int, equality_gap: float | None) -> VerificationReport:
    return VerificationReport(
        samples=int(ratios.size),
        violations=int(np.sum(ratios > 1.0 + VIOLATION_RTOL)),
        worst_ratio=float(ratios.max()) if ratios.size else 1.0,
        equality_gap=equality_gap,
        seed=seed,
    )


def sweep_direct(
    datum: BLDatum,
    constant: float,
    samples: int = DEFAULT_SAMPLES,
    seed: int = DEFAULT_SEED,
    threads: int = 1,
    extremizer=None,
) -> tuple[VerificationReport, np.ndarray]:
    """Throw random SPD tuples at the direct Gaussian inequality."""

    def kernel(rng, count):
        return np.array(
            [direct_gaussian_check(datum, constant, sample_tuple(datum, rng)) for _ in range(count)]
        )

    ratios = _sweep(kernel, samples, seed, threads)
    gap = None
    if extremizer is not None:
        gap = abs(1.0 - direct_gaussian_check(datum, constant, extremizer))
    return _report(ratios, seed, gap), ratios


def sweep_reverse(
    datum: BLDatum,
    constant: float,
    samples: int = DEFAULT_SAMPLES,
    seed: int = DEFAULT_SEED,
    threads: int = 1,
    extremizer=None,
) -> tuple[VerificationReport, np.ndarray]:
    """Throw random SPD tuples at the reversed Gaussian inequality."""

    def kernel(rng, count):
        return np.array(
            [reverse_gaussian_check(datum, constant, sample_tuple(datum, rng)) for _ in range(count)]
        )

    ratios = _sweep(kernel, samples, seed, threads)
    gap = None
    if extremizer is not None:
        gap = abs(1.0 - reverse_gaussian_check(datum, constant, extremizer))
    return _report(ratios, seed, gap), ratios


def sweep_dual(
    datum: BLDatum,
    constant: float,
    samples: int = DEFAULT_SAMPLES,
    seed: int = DEFAULT_SEED,
    threads: int = 1,
    extremizer: np.ndarray | None = None,
) -> tuple[VerificationReport, np.ndarray]:
    """Throw random ambient SPD matrices at the dual determinant bound."""

    def kernel(rng, count):
        return np.array(
            [dual_check(datum, constant, sample_spd(datum.n, rng)) for _ in range(count)]
        )

    ratios = _sweep(kernel, samples, seed, threads)
    gap = None
    if extremizer is not None:
        gap = abs(1.0 - dual_check(datum, constant, extremizer))
    return _report(ratios, seed, gap), ratios


# -- independent lower bound for the constant ----------------------------------

def gaussian_constant_search(
    datum: BLDatum,
    iters: int = 400,
    seed: int = DEFAULT_SEED,
    restarts: int = 4,
) -> float:
    """Best constant found by plain gradient ascent of the log-det objective
    over SPD matrices, parameterized as A = exp(S) with S symmetric.

    Deliberately ignorant of the fixed-point iteration: this is the sanity
    bound the solver's constant is compared against. The first restart
    starts at the identity, the rest at random symmetric S.
    """
    diag = validate(datum)
    if diag.degenerate:
        raise DatumError("degenerate datum: constant is +inf")
    if abs(diag.homogeneity_defect) > HOMOGENEITY_TOL:
        raise DatumError("inhomogeneous datum: no finite positive constant")

    n = datum.n
    rng = np.random.default_rng(seed)
    best = -math.inf
    for r in range(restarts):
        if r == 0:
            S = np.zeros((n, n))
        else:
            S = 0.5 * sym(rng.standard_normal((n, n)))
            S -= np.trace(S) / n * np.eye(n)
        best = max(best, _ascend_once(datum, S, iters))
    return math.exp(0.5 * best)


def _ascend_once(datum: BLDatum, S: np.ndarray, iters: int, gtol: float = 1e-9) -> float:
    n = datum.n
    step = 1.0
    obj = -math.inf
    for _ in range(iters):
        A, w, U = expm_sym(S)
        try:
            obj = logdet_objective(datum, A)
            G = grad_logdet(datum, A)
        except np.linalg.LinAlgError:
            return obj
        if np.linalg.norm(G) <= gtol * np.linalg.norm(spd_inverse(A, "A")):
            return obj
        GS = dexp_adjoint(w, U, G)
        g2 = float(np.sum(GS * GS))
        while step >= 1e-14:
            S_try = sym(S + step * GS)
            S_try -= np.trace(S_try) / n * np.eye(n)
            try:
                obj_try = logdet_objective(datum, expm_sym(S_try)[0])
            except np.linalg.LinAlgError:
                step *= 0.5
                continue
            if obj_try >= obj + 1e-4 * step * g2:
                S = S_try
                step = min(2.0 * step, 1e2)
                break
            step *= 0.5
        else:
            return obj
    return obj
