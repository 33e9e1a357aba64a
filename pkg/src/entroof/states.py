"""Dense linear algebra for small bipartite quantum systems.

States are immutable value objects: a ``PureState`` wraps a normalized
amplitude vector with explicit local dimensions (row-major over the
``(i_A, i_B)`` index pair), a ``DensityMatrix`` wraps a Hermitian, PSD,
unit-trace operator.  Everything downstream (Schmidt decomposition,
partial traces, tensor products, distances, Haar sampling) lives here.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

#: Hermiticity / positivity / normalization tolerance for input validation.
VALIDATION_TOL = 1e-10

#: Coefficients with squared singular value below this are treated as zero.
RANK_CUTOFF = 1e-12


class StateValidationError(ValueError):
    """Raised when a state violates one of its defining invariants."""


def _as_complex_vector(values) -> np.ndarray:
    vec = np.asarray(values, dtype=complex).reshape(-1)
    vec.setflags(write=False)
    return vec


def _as_complex_matrix(values) -> np.ndarray:
    mat = np.asarray(values, dtype=complex)
    if mat.ndim != 2 or mat.shape[0] != mat.shape[1]:
        raise StateValidationError(f"expected a square matrix, got shape {mat.shape}")
    mat.setflags(write=False)
    return mat


@dataclass(frozen=True)
class PureState:
    """Normalized bipartite state vector with local dimensions (dim_a, dim_b).

    Amplitudes are stored row-major over ``(i_A, i_B)``: the entry for
    basis ket ``|i_A, i_B>`` sits at flat index ``i_A * dim_b + i_B``.
    """

    dim_a: int
    dim_b: int
    amplitudes: np.ndarray = field(repr=False)

    def __post_init__(self):
        object.__setattr__(self, "amplitudes", _as_complex_vector(self.amplitudes))
        if self.dim_a < 1 or self.dim_b < 1:
            raise StateValidationError("local dimensions must be positive integers")
        n = self.dim_a * self.dim_b
        if self.amplitudes.shape[0] != n:
            raise StateValidationError(
                f"amplitude length {self.amplitudes.shape[0]} does not equal "
                f"dim_a*dim_b = {n}"
            )
        norm = float(np.linalg.norm(self.amplitudes))
        if abs(norm - 1.0) > VALIDATION_TOL:
            raise StateValidationError(
                f"state norm deviates from 1 by {abs(norm - 1.0):.3e} "
                f"(tolerance {VALIDATION_TOL:.0e})"
            )

    @property
    def matrix(self) -> np.ndarray:
        """Amplitudes reshaped to the (dim_a, dim_b) coefficient matrix."""
        return self.amplitudes.reshape(self.dim_a, self.dim_b)

    def density(self) -> "DensityMatrix":
        """Rank-1 projector |psi><psi| as a DensityMatrix."""
        mat = np.outer(self.amplitudes, self.amplitudes.conj())
        return DensityMatrix(self.dim_a, self.dim_b, mat)

    def schmidt_vector(self, rank_cutoff: float = RANK_CUTOFF) -> np.ndarray:
        """Nonincreasing squared Schmidt coefficients (tail below cutoff dropped)."""
        return schmidt_decompose(self, rank_cutoff).coefficients

    def overlap(self, other: "PureState") -> complex:
        return complex(self.amplitudes.conj() @ other.amplitudes)


@dataclass(frozen=True)
class DensityMatrix:
    """Hermitian, positive-semidefinite, unit-trace operator on H_A (x) H_B."""

    dim_a: int
    dim_b: int
    matrix: np.ndarray = field(repr=False)

    def __post_init__(self):
        object.__setattr__(self, "matrix", _as_complex_matrix(self.matrix))
        if self.dim_a < 1 or self.dim_b < 1:
            raise StateValidationError("local dimensions must be positive integers")
        n = self.dim_a * self.dim_b
        if self.matrix.shape != (n, n):
            raise StateValidationError(
                f"matrix order {self.matrix.shape[0]} does not equal dim_a*dim_b = {n}"
            )
        herm = float(np.abs(self.matrix - self.matrix.conj().T).max())
        if herm > VALIDATION_TOL:
            raise StateValidationError(
                f"matrix deviates from Hermitian by {herm:.3e} entrywise "
                f"(tolerance {VALIDATION_TOL:.0e})"
            )
        evals = np.linalg.eigvalsh(self.matrix)
        if evals.min() < -VALIDATION_TOL:
            raise StateValidationError(
                f"matrix has negative eigenvalue {evals.min():.3e} "
                f"(tolerance -{VALIDATION_TOL:.0e})"
            )
        tr = float(self.matrix.trace().real)
        if abs(tr - 1.0) > VALIDATION_TOL:
            raise StateValidationError(
                f"trace deviates from 1 by {abs(tr - 1.0):.3e} "
                f"(tolerance {VALIDATION_TOL:.0e})"
            )

    @property
    def dim(self) -> int:
        return self.dim_a * self.dim_b

    def eigensystem(self, cutoff: float = 1e-10):
        """Eigenpairs above ``cutoff``, eigenvalues sorted nonincreasing."""
        evals, evecs = np.linalg.eigh(self.matrix)
        keep = evals > cutoff
        evals, evecs = evals[keep][::-1], evecs[:, keep][:, ::-1]
        return evals, evecs

    def rank(self, cutoff: float = 1e-10) -> int:
        return int((np.linalg.eigvalsh(self.matrix) > cutoff).sum())

    def purity(self) -> float:
        return float((self.matrix @ self.matrix).trace().real)

    def as_pure(self, tol: float = 1e-8) -> PureState:
        """Extract the state vector of a (numerically) rank-1 density matrix."""
        evals, evecs = np.linalg.eigh(self.matrix)
        if evals[-2] > tol:
            raise StateValidationError(
                f"density matrix is not pure: second eigenvalue {evals[-2]:.3e}"
            )
        vec = evecs[:, -1] * np.sqrt(evals[-1])
        return PureState(self.dim_a, self.dim_b, vec / np.linalg.norm(vec))


@dataclass(frozen=True)
class TripartiteState:
    """Pure state on A (x) B (x) C with dims (2, 2, d), row-major amplitudes."""

    dims: tuple
    amplitudes: np.ndarray = field(repr=False)

    def __post_init__(self):
        object.__setattr__(self, "dims", tuple(int(d) for d in self.dims))
        object.__setattr__(self, "amplitudes", _as_complex_vector(self.amplitudes))
        if len(self.dims) != 3 or any(d < 1 for d in self.dims):
            raise StateValidationError("dims must be three positive integers")
        n = int(np.prod(self.dims))
        if self.amplitudes.shape[0] != n:
            raise StateValidationError(
                f"amplitude length {self.amplitudes.shape[0]} does not equal "
                f"prod(dims) = {n}"
            )
        norm = float(np.linalg.norm(self.amplitudes))
        if abs(norm - 1.0) > VALIDATION_TOL:
            raise StateValidationError(
                f"state norm deviates from 1 by {abs(norm - 1.0):.3e} "
                f"(tolerance {VALIDATION_TOL:.0e})"
            )

    def tensor(self) -> np.ndarray:
        return self.amplitudes.reshape(self.dims)

    def as_bipartite(self, cut: str = "A|BC") -> PureState:
        """View the tripartite state across a bipartite cut."""
        da, db, dc = self.dims
        if cut == "A|BC":
            return PureState(da, db * dc, self.amplitudes)
        if cut == "AB|C":
            return PureState(da * db, dc, self.amplitudes)
        raise ValueError(f"unsupported cut {cut!r}")

    def marginal_ab(self) -> DensityMatrix:
        t = self.tensor()
        rho = np.einsum("abc,xyc->abxy", t, t.conj())
        n = self.dims[0] * self.dims[1]
        return DensityMatrix(self.dims[0], self.dims[1], rho.reshape(n, n))

    def marginal_ac(self) -> DensityMatrix:
        t = self.tensor()
        rho = np.einsum("abc,xbz->acxz", t, t.conj())
        n = self.dims[0] * self.dims[2]
        return DensityMatrix(self.dims[0], self.dims[2], rho.reshape(n, n))


@dataclass(frozen=True)
class SchmidtDecomposition:
    """Result of a Schmidt decomposition: |psi> = sum_i sqrt(lam_i) |u_i>|v_i>."""

    coefficients: np.ndarray   # squared singular values, nonincreasing
    left_basis: np.ndarray     # (dim_a, r), orthonormal columns
    right_basis: np.ndarray    # (dim_b, r), orthonormal columns
    rank: int

    def reconstruct(self) -> np.ndarray:
        """Amplitude vector sum_i sqrt(lam_i) (u_i tensor v_i)."""
        amps = np.sqrt(self.coefficients)
        mat = (self.left_basis * amps) @ self.right_basis.T
        return mat.reshape(-1)


def schmidt_decompose(psi: PureState, rank_cutoff: float = RANK_CUTOFF) -> SchmidtDecomposition:
    """Schmidt-decompose a bipartite pure state.

    Parameters
    ----------
    psi : PureState
        The state to decompose.
    rank_cutoff : float
        Squared singular values at or below this are dropped.

    Returns
    -------
    SchmidtDecomposition
        Coefficients sorted nonincreasing; bases restricted to the kept rank.
    """
    u, s, vh = np.linalg.svd(psi.matrix, full_matrices=False)
    lam = s * s
    keep = lam > rank_cutoff
    r = int(keep.sum())
    if r == 0:
        raise StateValidationError("state has no Schmidt coefficient above the cutoff")
    return SchmidtDecomposition(
        coefficients=lam[:r].copy(),
        left_basis=u[:, :r].copy(),
        right_basis=vh[:r].T.copy(),
        rank=r,
    )


def partial_trace(rho: DensityMatrix, keep: str) -> np.ndarray:
    """Reduced operator of ``rho`` on the kept side ('A' or 'B')."""
    t = rho.matrix.reshape(rho.dim_a, rho.dim_b, rho.dim_a, rho.dim_b)
    if keep == "A":
        return np.einsum("ajbj->ab", t)
    if keep == "B":
        return np.einsum("iaib->ab", t)
    raise ValueError(f"keep must be 'A' or 'B', got {keep!r}")


def _tensor_perm(da1, db1, da2, db2):
    """Flat index permutation taking (A,B,A',B') ordering to (AA'|BB')."""
    idx = np.arange(da1 * db1 * da2 * db2)
    idx = idx.reshape(da1, db1, da2, db2).transpose(0, 2, 1, 3).reshape(-1)
    return idx


def tensor_product(x, y):
    """Tensor product with bipartition (AA'|BB').

    The plain Kronecker product of two bipartite objects orders indices as
    (A, B, A', B'); this reorders so the result is again row-major over its
    declared bipartition (A A' | B B').
    """
    if isinstance(x, PureState) and isinstance(y, PureState):
        raw = np.kron(x.amplitudes, y.amplitudes)
        perm = _tensor_perm(x.dim_a, x.dim_b, y.dim_a, y.dim_b)
        return PureState(x.dim_a * y.dim_a, x.dim_b * y.dim_b, raw[perm])
    if isinstance(x, DensityMatrix) and isinstance(y, DensityMatrix):
        raw = np.kron(x.matrix, y.matrix)
        perm = _tensor_perm(x.dim_a, x.dim_b, y.dim_a, y.dim_b)
        return DensityMatrix(x.dim_a * y.dim_a, x.dim_b * y.dim_b, raw[np.ix_(perm, perm)])
    raise TypeError("tensor_product expects two PureStates or two DensityMatrices")


def trace_distance(rho: DensityMatrix, sigma: DensityMatrix) -> float:
    """Half the trace norm of ``rho - sigma``; lies in [0, 1]."""
    if (rho.dim_a, rho.dim_b) != (sigma.dim_a, sigma.dim_b):
        raise ValueError(
            f"dimension mismatch: {(rho.dim_a, rho.dim_b)} vs {(sigma.dim_a, sigma.dim_b)}"
        )
    evals = np.linalg.eigvalsh(rho.matrix - sigma.matrix)
    return float(0.5 * np.abs(evals).sum())


def random_pure(dim_a: int, dim_b: int, seed) -> PureState:
    """Haar-random pure state from a normalized complex Gaussian vector."""
    rng = np.random.default_rng(seed)
    n = dim_a * dim_b
    z = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    return PureState(dim_a, dim_b, z / np.linalg.norm(z))


def random_density(dim_a: int, dim_b: int, rank: int, seed) -> DensityMatrix:
    """Random mixed state: partial trace of a Haar pure state over a rank-dim ancilla."""
    n = dim_a * dim_b
    if not 1 <= rank <= n:
        raise ValueError(f"rank must lie in [1, {n}], got {rank}")
    rng = np.random.default_rng(seed)
    g = rng.standard_normal((n, rank)) + 1j * rng.standard_normal((n, rank))
    rho = g @ g.conj().T
    rho /= rho.trace().real
    return DensityMatrix(dim_a, dim_b, rho)


def random_tripartite(dims, seed) -> TripartiteState:
    """Haar-random pure state on a tripartite system."""
    rng = np.random.default_rng(seed)
    n = int(np.prod(dims))
    z = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    return TripartiteState(tuple(dims), z / np.linalg.norm(z))
