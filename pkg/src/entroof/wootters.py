"""Closed-form two-qubit concurrence and its optimal flat decompositions.

The concurrence of a 2x2 mixed state is max(0, nu1 - nu2 - nu3 - nu4)
over the decreasing square-rooted eigenvalues of rho (sy x sy) rho* (sy x sy).
The same nu's arise as the Takagi values of the symmetric "tilde overlap"
matrix of the subnormalized eigenvectors, which is what the constructive
optimal-decomposition route below uses: every member of the returned
ensemble has pure-state concurrence exactly equal to the mixed value.
"""

from __future__ import annotations

import numpy as np

from .ensemble import Ensemble
from .states import DensityMatrix, PureState

_SY = np.array([[0.0, -1.0j], [1.0j, 0.0]])
_YY = np.kron(_SY, _SY).real  # real symmetric spin-flip kernel


def takagi(sym: np.ndarray, tol: float = 1e-8):
    """Takagi factorization sym = U diag(v) U^T, v >= 0 nonincreasing, U unitary.

    Works through the real doubling [[Re, Im], [Im, -Re]], whose +v
    eigenvectors (x; y) give Takagi vectors u = x + iy.  The zero
    eigenspace needs a complex Gram-Schmidt cleanup because there the
    +v / -v pairing degenerates.
    """
    sym = np.asarray(sym, dtype=complex)
    n = sym.shape[0]
    if sym.shape != (n, n) or np.abs(sym - sym.T).max() > 1e-8:
        raise ValueError("takagi expects a complex symmetric square matrix")
    m = np.block([[sym.real, sym.imag], [sym.imag, -sym.real]])
    evals, evecs = np.linalg.eigh(m)
    order = np.argsort(evals)[::-1]
    vals = evals[order][:n]
    u = evecs[:n, order[:n]] + 1j * evecs[n:, order[:n]]
    cols = []
    for j in range(n):
        cand = u[:, j].copy()
        for c in cols:
            cand -= c * (c.conj() @ cand)
        nrm = np.linalg.norm(cand)
        if nrm < 1e-8:
            # zero block: the i-rotated partners span the missing directions
            for k in range(n):
                alt = 1j * u[:, k]
                for c in cols:
                    alt = alt - c * (c.conj() @ alt)
                if np.linalg.norm(alt) > 1e-8:
                    cand, nrm = alt, np.linalg.norm(alt)
                    break
        cols.append(cand / nrm)
    umat = np.array(cols).T
    vals = np.maximum(vals, 0.0)
    if np.abs(umat @ np.diag(vals) @ umat.T - sym).max() > tol * max(1.0, np.abs(sym).max()):
        raise ArithmeticError("takagi reconstruction failed beyond tolerance")
    return vals, umat


def _require_two_qubits(rho: DensityMatrix):
    if (rho.dim_a, rho.dim_b) != (2, 2):
        raise ValueError(
            f"Wootters concurrence needs a 2x2 system, got {rho.dim_a}x{rho.dim_b}"
        )


def concurrence_spectrum(rho: DensityMatrix) -> np.ndarray:
    """The nonincreasing nu_i entering the concurrence formula.

    Computed Hermitianly as the square-rooted eigenvalues of
    sqrt(rho) rho~ sqrt(rho) with rho~ = (sy x sy) rho* (sy x sy),
    restricted to the support of rho: the product has rank at most
    rank(rho), and working in the support basis keeps the mathematically
    zero nu's exactly zero (a square root would otherwise amplify
    1e-16 eigensolver noise to 1e-8 in the subtracted terms).
    """
    _require_two_qubits(rho)
    w, v = np.linalg.eigh(rho.matrix)
    keep = w > 1e-13
    w, v = w[keep], v[:, keep]
    tilde = _YY @ rho.matrix.conj() @ _YY
    sq = np.sqrt(w)
    h = (sq[:, None] * (v.conj().T @ tilde @ v)) * sq[None, :]
    ev = np.sort(np.maximum(np.linalg.eigvalsh(h), 0.0))[::-1]
    nu = np.zeros(4)
    nu[: len(ev)] = np.sqrt(ev)
    return nu


def pure_concurrence_from_vector(vec: np.ndarray) -> float:
    """|<psi| sy x sy |psi*>| for a two-qubit amplitude vector."""
    return float(abs(vec.conj() @ _YY @ vec.conj()))


def _preconcurrence(z: np.ndarray) -> np.ndarray:
    """Symmetric bilinear form matrix sigma_jk = (z_j^*)^T YY (z_k^*)."""
    return z.conj().T @ _YY @ z.conj()


def _polygon_angles(lengths: np.ndarray) -> np.ndarray:
    """Directions phi_j with sum_j L_j exp(i phi_j) = 0.

    Feasible iff the largest side is at most the sum of the rest; sides
    are greedily packed into three groups that close as a triangle.
    """
    lengths = np.asarray(lengths, dtype=float)
    order = np.argsort(lengths)[::-1]
    groups = [[], [], []]
    sums = np.zeros(3)
    for idx in order:
        g = int(np.argmin(sums))
        groups[g].append(idx)
        sums[g] += lengths[idx]
    a, b, c = sums
    if a > b + c + 1e-12:
        raise ArithmeticError("polygon closing infeasible: dominant side too long")
    if a <= 1e-300:
        return np.zeros(len(lengths))
    cos_g = np.clip((a * a + b * b - c * c) / (2 * a * b), -1.0, 1.0) if b > 0 else 1.0
    beta = np.pi - np.arccos(cos_g)
    resultant = a + b * np.exp(1j * beta)
    gamma = float(np.angle(-resultant)) if c > 0 else 0.0
    directions = [0.0, beta, gamma]
    phis = np.zeros(len(lengths))
    for g, idxs in enumerate(groups):
        for idx in idxs:
            phis[idx] = directions[g]
    return phis


def _equalize_ratios(z: np.ndarray, c_target: float) -> np.ndarray:
    """Pairwise real rotations until every member has preconcurrence
    equal to c_target times its weight (entangled branch, sigma real)."""
    z = z.copy()
    r = z.shape[1]
    active = list(range(r))
    for _ in range(r - 1):
        sigma = _preconcurrence(z).real
        weights = (z.real**2 + z.imag**2).sum(axis=0)
        g = sigma.diagonal() - c_target * weights
        hi = max(active, key=lambda l: g[l])
        lo = min(active, key=lambda l: g[l])
        if g[hi] < 1e-13 and g[lo] > -1e-13:
            break
        gram = (z[:, hi].conj() @ z[:, lo]).real
        g_ab = sigma[hi, lo] - c_target * gram
        half_diff = 0.5 * (g[hi] - g[lo])
        half_sum = 0.5 * (g[hi] + g[lo])
        radius = float(np.hypot(half_diff, g_ab))
        phase = float(np.arctan2(g_ab, half_diff))
        theta = 0.5 * (phase + np.arccos(np.clip(-half_sum / radius, -1.0, 1.0)))
        cth, sth = np.cos(theta), np.sin(theta)
        za = cth * z[:, hi] + sth * z[:, lo]
        zb = -sth * z[:, hi] + cth * z[:, lo]
        z[:, hi], z[:, lo] = za, zb
        active.remove(hi)
    return z


def _zero_preconcurrence_members(x: np.ndarray, nu: np.ndarray) -> np.ndarray:
    """Separable branch: phases closing the preconcurrence polygon, then a
    Householder mix into four members with identically zero preconcurrence."""
    r = x.shape[1]
    if r == 1:
        return x
    phis = _polygon_angles(nu)
    y = x * np.exp(0.5j * phis)[None, :]
    house = np.eye(4) - 0.5 * np.ones((4, 4))
    return y @ house[:r, :]


def wootters_concurrence(rho: DensityMatrix, return_ensemble: bool = False):
    """Exact concurrence of a two-qubit state, optionally with an optimal
    decomposition whose members all have pure concurrence C(rho).

    Returns the float value, or ``(value, Ensemble)`` when
    ``return_ensemble`` is true.
    """
    _require_two_qubits(rho)
    nu = concurrence_spectrum(rho)
    value = float(max(0.0, nu[0] - nu[1:].sum()))
    if not return_ensemble:
        return value

    q, e = rho.eigensystem(cutoff=1e-10)
    sub = e * np.sqrt(q)                      # subnormalized eigenvectors, columns
    tau = sub.conj().T @ _YY @ sub.conj()
    nu_t, w = takagi(tau)
    x = sub @ w                               # preconcurrence diag(nu_t)
    r = x.shape[1]
    if value > 1e-10:
        y = x.copy()
        if r > 1:
            y[:, 1:] *= 1j                    # diag -> (nu1, -nu2, ..., -nur)
        z = _equalize_ratios(y, value)
    else:
        z = _zero_preconcurrence_members(x, nu_t)
    weights = (z.real**2 + z.imag**2).sum(axis=0)
    keep = weights > 1e-12
    z, weights = z[:, keep], weights[keep]
    weights = weights / weights.sum()
    members = tuple(
        (float(p), PureState(2, 2, z[:, l] / np.linalg.norm(z[:, l])))
        for l, p in enumerate(weights)
    )
    ens = Ensemble(members)
    for p, psi in ens.members:
        got = pure_concurrence_from_vector(psi.amplitudes)
        if abs(got - value) > 1e-7:
            raise ArithmeticError(
                f"flat decomposition member concurrence {got:.3e} deviates from "
                f"C(rho) = {value:.3e}"
            )
    return value, ens
