"""Schmidt-vector arithmetic and LOCC convertibility criteria.

The Schmidt vector (squared Schmidt coefficients, sorted nonincreasing) is
the single currency of pure-state entanglement: majorization between
Schmidt vectors decides deterministic LOCC conversion (Nielsen), and
majorization against an ensemble-averaged Schmidt vector decides
conversion into an ensemble (Jonathan-Plenio).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .states import PureState, StateValidationError

#: Additive slack for partial-sum comparisons.
MAJORIZATION_SLACK = 1e-9


@dataclass(frozen=True)
class SchmidtVector:
    """Probability vector sorted nonincreasing (sum 1 within 1e-9)."""

    entries: np.ndarray = field(repr=True)

    def __post_init__(self):
        vec = np.asarray(self.entries, dtype=float).reshape(-1)
        if vec.size == 0:
            raise StateValidationError("Schmidt vector must be nonempty")
        if vec.min() < -MAJORIZATION_SLACK or vec.max() > 1.0 + MAJORIZATION_SLACK:
            raise StateValidationError(
                f"entries outside [0, 1]: min {vec.min():.3e}, max {vec.max():.3e}"
            )
        total = float(vec.sum())
        if abs(total - 1.0) > MAJORIZATION_SLACK:
            raise StateValidationError(
                f"entries sum deviates from 1 by {abs(total - 1.0):.3e}"
            )
        vec = np.sort(np.clip(vec, 0.0, 1.0))[::-1].copy()
        vec.setflags(write=False)
        object.__setattr__(self, "entries", vec)

    def __len__(self):
        return self.entries.shape[0]

    def padded(self, length: int) -> np.ndarray:
        out = np.zeros(length)
        out[: len(self)] = self.entries
        return out


def as_schmidt_vector(v) -> SchmidtVector:
    if isinstance(v, SchmidtVector):
        return v
    return SchmidtVector(np.asarray(v, dtype=float))


def schmidt_vector(psi: PureState) -> SchmidtVector:
    return SchmidtVector(psi.schmidt_vector())


def majorizes(x, y, slack: float = MAJORIZATION_SLACK) -> bool:
    """True iff x is majorized by y (x < y): every leading partial sum of
    x is at most the corresponding partial sum of y, within ``slack``.

    The shorter vector is zero-padded to the longer length.
    """
    xv = as_schmidt_vector(x).entries
    yv = as_schmidt_vector(y).entries
    n = max(len(xv), len(yv))
    cx = np.cumsum(np.pad(xv, (0, n - len(xv))))
    cy = np.cumsum(np.pad(yv, (0, n - len(yv))))
    return bool(np.all(cx <= cy + slack))


def nielsen_convertible(psi: PureState, phi: PureState) -> bool:
    """Deterministic LOCC conversion psi -> phi exists iff mu(psi) < mu(phi)."""
    return majorizes(psi.schmidt_vector(), phi.schmidt_vector())


def average_schmidt(ens) -> SchmidtVector:
    """Convex combination of the members' Schmidt vectors.

    Members' vectors are zero-padded to a common length before averaging;
    the average of nonincreasing vectors is itself nonincreasing.
    """
    members = list(ens.members) if hasattr(ens, "members") else list(ens)
    if not members:
        raise ValueError("ensemble is empty")
    vecs = [(w, psi.schmidt_vector()) for (w, psi) in members]
    n = max(v.shape[0] for _, v in vecs)
    avg = np.zeros(n)
    for w, v in vecs:
        avg[: v.shape[0]] += w * v
    return SchmidtVector(avg)


def ensemble_convertible(psi: PureState, ens) -> bool:
    """True iff psi converts by LOCC into the pure-state ensemble ``ens``,
    i.e. mu(psi) < sum_i p_i mu(phi_i)."""
    return majorizes(psi.schmidt_vector(), average_schmidt(ens))


def pure_from_schmidt(v, dim_a: int, dim_b: int) -> PureState:
    """Canonical embedding sum_i sqrt(v_i) |ii> of a Schmidt vector."""
    sv = as_schmidt_vector(v)
    if len(sv) > min(dim_a, dim_b):
        raise ValueError(
            f"Schmidt vector of length {len(sv)} does not fit in "
            f"{dim_a}x{dim_b} (min local dimension {min(dim_a, dim_b)})"
        )
    amps = np.zeros(dim_a * dim_b, dtype=complex)
    for i, lam in enumerate(sv.entries):
        amps[i * dim_b + i] = np.sqrt(lam)
    # guard against rounding in the clip/sort normalization
    amps /= np.linalg.norm(amps)
    return PureState(dim_a, dim_b, amps)
