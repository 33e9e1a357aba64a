"""Registry of pure-state entanglement measures as Schmidt-vector functions.

Every measure here consumes only the Schmidt vector, which makes
local-unitary invariance structural.  Each measure carries capability
flags that gate which theorem-level property suites may run against it:

``concave_f``
    the underlying spectral function is concave on probability vectors
    (the roof-construction hypothesis, and the reason the extension
    value dominates the roof value pointwise),
``convex_on_spectra``
    mixing aligned spectra is linear/convex for this measure (the
    block-diagonal bound hypothesis; only the tail sums qualify here),
``subadditive``
    additive/subadditive on pure tensor products (entropy).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .majorization import as_schmidt_vector
from .states import RANK_CUTOFF


@dataclass(frozen=True)
class PureMeasure:
    """A named function SchmidtVector -> nonnegative real, plus capability flags.

    ``batch`` evaluates rows of an (N, d) array of normalized, nonincreasing
    probability vectors; ``contrib`` maps rows of unnormalized spectra to
    weighted contributions p * f(spec / p) (the convex-roof summand), which
    several measures admit in closed form without the division.
    """

    id: str
    evaluate_fn: Callable[[np.ndarray], float] = field(repr=False)
    batch: Callable[[np.ndarray], np.ndarray] = field(repr=False)
    concave_f: bool = False
    convex_on_spectra: bool = False
    subadditive: bool = False
    separable_value: float = 0.0
    contrib: Callable[[np.ndarray], np.ndarray] = field(default=None, repr=False)

    def __post_init__(self):
        if self.contrib is None:
            object.__setattr__(self, "contrib", _generic_contrib(self.batch))

    def evaluate(self, v) -> float:
        return float(self.evaluate_fn(as_schmidt_vector(v).entries))


def _generic_contrib(batch):
    def contrib(spec):
        spec = np.atleast_2d(spec)
        p = spec.sum(axis=-1)
        safe = np.maximum(p, 1e-300)
        vals = batch(spec / safe[..., None])
        return np.where(p > 1e-14, p * vals, 0.0)

    return contrib


# --- the individual measures -------------------------------------------------

def e_k(v, k: int) -> float:
    """Tail sum sum_{i >= k-1} of the nonincreasing Schmidt vector (1-based k).

    ``k`` must lie in [1, len(v)] after the caller pads the vector to the
    system dimension; k = 1 gives the full sum (identically 1).
    """
    vec = as_schmidt_vector(v).entries
    if not 1 <= k <= len(vec):
        raise ValueError(f"k = {k} out of range [1, {len(vec)}]")
    return float(vec[k - 1 :].sum())


def entropy_of_entanglement(v) -> float:
    """Entanglement entropy -sum lam log2 lam of the Schmidt vector (ebits)."""
    vec = as_schmidt_vector(v).entries
    nz = vec[vec > 0]
    return float(-(nz * np.log2(nz)).sum())


def concurrence_pure(v) -> float:
    """Pure-state concurrence sqrt(2 (1 - sum lam^2))."""
    vec = as_schmidt_vector(v).entries
    return float(np.sqrt(max(2.0 * (1.0 - vec @ vec), 0.0)))


def geometric_pure(v) -> float:
    """Geometric measure 1 - lam_max (one minus the best product overlap)."""
    vec = as_schmidt_vector(v).entries
    return float(1.0 - vec.max())


def robustness_pure(v) -> float:
    """Robustness of entanglement (sum_i sqrt(lam_i))^2 - 1."""
    vec = as_schmidt_vector(v).entries
    return float(np.sqrt(vec).sum() ** 2 - 1.0)


def schmidt_rank(v, cutoff: float = RANK_CUTOFF) -> int:
    """Number of Schmidt coefficients above the rank cutoff."""
    vec = as_schmidt_vector(v).entries
    return int((vec > cutoff).sum())


# --- batch kernels (rows: normalized nonincreasing vectors) -------------------

def _b_entropy(V):
    V = np.atleast_2d(V)
    out = np.where(V > 0, -V * np.log2(np.where(V > 0, V, 1.0)), 0.0)
    return out.sum(axis=-1)


def _b_concurrence(V):
    V = np.atleast_2d(V)
    return np.sqrt(np.maximum(2.0 * (1.0 - (V * V).sum(axis=-1)), 0.0))


def _b_geometric(V):
    V = np.atleast_2d(V)
    return 1.0 - V.max(axis=-1)


def _b_robustness(V):
    V = np.atleast_2d(V)
    return np.sqrt(np.maximum(V, 0.0)).sum(axis=-1) ** 2 - 1.0


def _b_e_k(k):
    def kernel(V):
        V = np.atleast_2d(V)
        if k - 1 >= V.shape[-1]:
            return np.zeros(V.shape[:-1])
        return V[..., k - 1 :].sum(axis=-1)

    return kernel


def _b_schmidt_rank(V):
    V = np.atleast_2d(V)
    return (V > RANK_CUTOFF).sum(axis=-1).astype(float)


# closed-form roof contributions p * f(spec/p) on unnormalized spectra

def _c_concurrence(spec):
    spec = np.atleast_2d(spec)
    p = spec.sum(axis=-1)
    return np.sqrt(np.maximum(2.0 * (p * p - (spec * spec).sum(axis=-1)), 0.0))


def _c_entropy(spec):
    spec = np.atleast_2d(spec)
    p = spec.sum(axis=-1)
    s = np.where(spec > 0, -spec * np.log2(np.where(spec > 0, spec, 1.0)), 0.0).sum(axis=-1)
    return np.where(p > 1e-300, s + p * np.log2(np.maximum(p, 1e-300)), 0.0)


def _c_geometric(spec):
    spec = np.atleast_2d(spec)
    return spec.sum(axis=-1) - spec.max(axis=-1)


def _c_e_k(k):
    def contrib(spec):
        spec = np.atleast_2d(spec)
        srt = np.sort(spec, axis=-1)[..., ::-1]
        if k - 1 >= srt.shape[-1]:
            return np.zeros(srt.shape[:-1])
        return srt[..., k - 1 :].sum(axis=-1)

    return contrib


_BASE_REGISTRY = {
    "entropy": PureMeasure(
        id="entropy",
        evaluate_fn=lambda v: entropy_of_entanglement(v),
        batch=_b_entropy,
        concave_f=True,
        subadditive=True,
        contrib=_c_entropy,
    ),
    "concurrence": PureMeasure(
        id="concurrence",
        evaluate_fn=lambda v: concurrence_pure(v),
        batch=_b_concurrence,
        concave_f=True,
        contrib=_c_concurrence,
    ),
    "geometric": PureMeasure(
        id="geometric",
        evaluate_fn=lambda v: geometric_pure(v),
        batch=_b_geometric,
        concave_f=True,
        contrib=_c_geometric,
    ),
    "robustness": PureMeasure(
        id="robustness",
        evaluate_fn=lambda v: robustness_pure(v),
        batch=_b_robustness,
        concave_f=False,
    ),
    "schmidt_rank": PureMeasure(
        id="schmidt_rank",
        evaluate_fn=lambda v: float(schmidt_rank(v)),
        batch=_b_schmidt_rank,
        concave_f=False,
        separable_value=1.0,
    ),
}


def get_measure(measure_id: str) -> PureMeasure:
    """Look up a measure by its stable string id.

    Tail-sum measures are addressed as ``e_k:<k>`` (``e_k:1`` is the
    constant 1 on every state and is flagged non-vanishing on separables).
    """
    if measure_id in _BASE_REGISTRY:
        return _BASE_REGISTRY[measure_id]
    if measure_id.startswith("e_k:"):
        try:
            k = int(measure_id.split(":", 1)[1])
        except ValueError:
            raise KeyError(f"malformed e_k measure id {measure_id!r}") from None
        if k < 1:
            raise KeyError(f"e_k index must be >= 1, got {k}")
        return PureMeasure(
            id=measure_id,
            evaluate_fn=lambda v, k=k: _ek_padded(v, k),
            batch=_b_e_k(k),
            concave_f=True,
            convex_on_spectra=True,
            separable_value=1.0 if k == 1 else 0.0,
            contrib=_c_e_k(k),
        )
    raise KeyError(f"unknown measure id {measure_id!r}")


def _ek_padded(v, k):
    vec = as_schmidt_vector(v).entries
    if k - 1 >= len(vec):
        return 0.0
    return float(vec[k - 1 :].sum())


def registered_ids():
    return sorted(_BASE_REGISTRY) + ["e_k:1", "e_k:2", "e_k:3", "e_k:4"]
