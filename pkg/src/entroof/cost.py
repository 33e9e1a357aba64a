"""One-shot entanglement cost of pure states and related bounds.

The one-shot cost of |psi> is log2 of the least r such that the rank-r
maximally entangled state converts to |psi> by deterministic LOCC, i.e.
the uniform vector of length r is majorized by the Schmidt vector.  Two
independent routes compute r: a brute-force search over r using the
majorization predicate, and the closed form max_k ceil(k / S_k) over the
leading partial sums; the public op insists they agree.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .majorization import MAJORIZATION_SLACK, SchmidtVector, as_schmidt_vector, majorizes
from .states import PureState


@dataclass(frozen=True)
class CostResult:
    r_min: int
    log_cost: float


def max_entangled(r: int, dim_a: int, dim_b: int) -> PureState:
    """(1/sqrt(r)) sum_{i<r} |ii> embedded in a dim_a x dim_b system."""
    if not 1 <= r <= min(dim_a, dim_b):
        raise ValueError(f"r = {r} exceeds the local dimension bound {min(dim_a, dim_b)}")
    amps = np.zeros(dim_a * dim_b, dtype=complex)
    for i in range(r):
        amps[i * dim_b + i] = 1.0 / np.sqrt(r)
    return PureState(dim_a, dim_b, amps)


def _r_min_search(mu: SchmidtVector) -> int:
    limit = 10 * len(mu) + 10
    for r in range(1, limit + 1):
        uniform = SchmidtVector(np.full(r, 1.0 / r))
        if majorizes(uniform, mu):
            return r
    raise ArithmeticError("one-shot cost search exceeded its bound")


def _r_min_formula(mu: SchmidtVector) -> int:
    partial = np.cumsum(mu.entries)
    best = 1
    for k, s in enumerate(partial, start=1):
        need = math.ceil(k / (s + MAJORIZATION_SLACK) - 1e-12)
        best = max(best, need)
    return best


def one_shot_cost_pure(psi: PureState) -> CostResult:
    """Least maximally entangled rank converting to ``psi``, as a CostResult.

    Both the incremental majorization search and the partial-sum closed
    form are evaluated; disagreement raises (it would mean the two
    implementations drifted apart numerically).
    """
    mu = SchmidtVector(psi.schmidt_vector())
    r_search = _r_min_search(mu)
    r_formula = _r_min_formula(mu)
    if r_search != r_formula:
        raise ArithmeticError(
            f"one-shot cost routes disagree: search {r_search}, formula {r_formula}"
        )
    return CostResult(r_min=r_search, log_cost=float(np.log2(r_search)))


def _pure_trace_distance_from_vectors(mu: np.ndarray, w: np.ndarray) -> float:
    """Trace distance between the canonical states of two Schmidt vectors."""
    n = max(len(mu), len(w))
    a = np.zeros(n)
    b = np.zeros(n)
    a[: len(mu)] = mu
    b[: len(w)] = w
    fid = float(np.sqrt(a * b).sum())
    return float(np.sqrt(max(1.0 - fid * fid, 0.0)))


def _candidate_vectors(mu: np.ndarray, grid: int, seed: int):
    """Perturbed Schmidt vectors: truncations, uniforms, axis moves, Dirichlet."""
    d = len(mu)
    cands = [mu]
    for k in range(1, d + 1):
        head = mu[:k]
        cands.append(head / head.sum())
        cands.append(np.full(k, 1.0 / k))
    for delta in (0.01, 0.05, 0.1, 0.2):
        for axis in range(d):
            v = mu.copy()
            v[axis] += delta
            cands.append(np.sort(v / v.sum())[::-1])
            v = mu.copy()
            v[axis] = max(v[axis] - delta, 0.0)
            s = v.sum()
            if s > 0:
                cands.append(np.sort(v / s)[::-1])
    rng = np.random.default_rng(seed)
    if grid > 0:
        # Dirichlet-like cloud centered on mu
        conc = np.maximum(mu, 1e-3) * 50.0
        cloud = rng.dirichlet(conc, size=grid)
        cands.extend(np.sort(cloud, axis=1)[:, ::-1])
    return cands


def smoothed_cost_pure_upper(psi: PureState, eps: float, grid: int = 2000, seed: int = 0) -> float:
    """Upper bound on the eps-smoothed one-shot cost of a pure state.

    Minimizes the one-shot cost over a seeded grid of pure states whose
    canonical trace distance to ``psi`` is at most ``eps``.  Only pure
    perturbations are searched, so this upper-bounds the smoothed cost
    (the eps-ball also contains mixed states).  The candidate grid does
    not depend on eps, which makes the bound nonincreasing in eps.
    """
    if not 0.0 <= eps < 1.0:
        raise ValueError(f"eps must lie in [0, 1), got {eps}")
    mu = psi.schmidt_vector()
    best = one_shot_cost_pure(psi).log_cost
    for cand in _candidate_vectors(mu, grid, seed):
        if _pure_trace_distance_from_vectors(mu, cand) > eps:
            continue
        sv = SchmidtVector(cand)
        r = _r_min_formula(sv)
        if _r_min_search(sv) != r:
            raise ArithmeticError("one-shot cost routes disagree on a grid point")
        best = min(best, float(np.log2(r)))
    return best


def binary_entropy(x: float) -> float:
    """h(x) = -x log2 x - (1-x) log2 (1-x), with h(0) = h(1) = 0."""
    if x <= 0.0 or x >= 1.0:
        return 0.0
    return float(-x * np.log2(x) - (1.0 - x) * np.log2(1.0 - x))


def eof_continuity_bound(eps: float, d: int) -> float:
    """Continuity bound delta log2 d + (1 + delta) h(delta / (1 + delta))
    with delta = sqrt(eps (2 - eps)), valid for states eps-close in trace
    distance on a d-dimensional smaller subsystem."""
    if not 0.0 < eps <= 1.0:
        raise ValueError(f"eps must lie in (0, 1], got {eps}")
    if d < 2:
        raise ValueError(f"d must be >= 2, got {d}")
    delta = float(np.sqrt(eps * (2.0 - eps)))
    return delta * float(np.log2(d)) + (1.0 + delta) * binary_entropy(delta / (1.0 + delta))
