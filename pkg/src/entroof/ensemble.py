"""Pure-state ensembles and the isometry parameterization of decompositions.

Every decomposition of a rank-n density matrix into m >= n pure members
corresponds to an m x n column-orthonormal matrix U acting on the
subnormalized eigenvectors: member i is sum_j conj(U_ij) sqrt(q_j) |e_j>,
with its squared norm as the weight.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .states import DensityMatrix, PureState, StateValidationError

ORTHONORMALITY_TOL = 1e-9


@dataclass(frozen=True)
class Ensemble:
    """Finite list of (weight, PureState) realizing a density matrix."""

    members: tuple

    def __post_init__(self):
        members = tuple((float(w), psi) for (w, psi) in self.members)
        if not members:
            raise StateValidationError("ensemble must have at least one member")
        if any(w <= 0 for w, _ in members):
            raise StateValidationError("ensemble weights must be positive")
        total = sum(w for w, _ in members)
        if abs(total - 1.0) > 1e-9:
            raise StateValidationError(
                f"ensemble weights sum deviates from 1 by {abs(total - 1.0):.3e}"
            )
        object.__setattr__(self, "members", members)

    def __len__(self):
        return len(self.members)

    def average_state(self) -> DensityMatrix:
        w0, psi0 = self.members[0]
        rho = np.zeros((psi0.amplitudes.size,) * 2, dtype=complex)
        for w, psi in self.members:
            rho += w * np.outer(psi.amplitudes, psi.amplitudes.conj())
        rho = 0.5 * (rho + rho.conj().T)
        return DensityMatrix(psi0.dim_a, psi0.dim_b, rho)


def ensemble_from_pairs(pairs) -> Ensemble:
    return Ensemble(tuple(pairs))


@dataclass(frozen=True)
class DecompositionParam:
    """Complex m x n matrix with orthonormal columns (m members, n = rank)."""

    columns: np.ndarray = field(repr=False)

    def __post_init__(self):
        mat = np.asarray(self.columns, dtype=complex)
        if mat.ndim != 2 or mat.shape[0] < mat.shape[1]:
            raise StateValidationError(
                f"parameter must be m x n with m >= n, got shape {mat.shape}"
            )
        gram = mat.conj().T @ mat
        dev = float(np.abs(gram - np.eye(mat.shape[1])).max())
        if dev > ORTHONORMALITY_TOL:
            raise StateValidationError(
                f"columns deviate from orthonormal by {dev:.3e} "
                f"(tolerance {ORTHONORMALITY_TOL:.0e})"
            )
        mat = mat.copy()
        mat.setflags(write=False)
        object.__setattr__(self, "columns", mat)

    @property
    def n_members(self) -> int:
        return self.columns.shape[0]


def identity_param(rank: int, size: int = None) -> DecompositionParam:
    """The trivial parameter reproducing the eigendecomposition ensemble."""
    size = rank if size is None else size
    mat = np.zeros((size, rank), dtype=complex)
    mat[:rank, :rank] = np.eye(rank)
    return DecompositionParam(mat)


def random_isometry(m: int, n: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-ish random m x n column-orthonormal matrix via QR."""
    g = rng.standard_normal((m, n)) + 1j * rng.standard_normal((m, n))
    q, _ = np.linalg.qr(g)
    return q


def member_matrix(rho: DensityMatrix, param: DecompositionParam, cutoff: float = 1e-10):
    """Unnormalized member vectors as rows of an (m, dim) array.

    Row i is sum_j conj(U_ij) sqrt(q_j) e_j over the eigenpairs of rho.
    """
    q, e = rho.eigensystem(cutoff)
    n = len(q)
    if param.columns.shape[1] != n:
        raise StateValidationError(
            f"parameter has {param.columns.shape[1]} columns but rank(rho) = {n}"
        )
    return ((e * np.sqrt(q)) @ param.columns.conj().T).T


def decompose(rho: DensityMatrix, param: DecompositionParam) -> Ensemble:
    """Realize the ensemble selected by ``param`` from the eigenpairs of rho.

    Members with weight below 1e-14 are dropped (they carry no probability);
    the survivors reconstruct rho exactly.
    """
    rows = member_matrix(rho, param)
    weights = (rows.real**2 + rows.imag**2).sum(axis=1)
    pairs = []
    for w, row in zip(weights, rows):
        if w <= 1e-14:
            continue
        pairs.append((float(w), PureState(rho.dim_a, rho.dim_b, row / np.sqrt(w))))
    total = sum(w for w, _ in pairs)
    pairs = [(w / total, psi) for w, psi in pairs]
    return Ensemble(tuple(pairs))
