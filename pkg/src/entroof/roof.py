"""Optimizers over pure-state decompositions, and theorem-level checks.

Two quantities are estimated over the same search space (all ensembles
of a density matrix, parameterized by column-orthonormal matrices over
its eigenvectors):

* the extension value: minimize f(average Schmidt vector of the ensemble),
* the convex roof:    minimize the ensemble average of f(member vector).

Both searches are gradient-free coordinate descent over two-member Givens
rotations with phases.  A sweep screens every member pair with a batched
multi-scale angle grid, refines the improving pairs with shrinking zoom
grids, and applies non-conflicting rotations greedily; once sweeps stall,
a fine phase re-runs them with deeper zooms.  Restarts are seeded and the
whole estimate is a deterministic function of (state, measure, config).

Search budget: the base ensemble size (the rank n) gets cfg.restarts
seeded starts (the first is always the eigendecomposition); each larger
size in the ladder n..max_ensemble_size gets a harmonically decaying
share, never below one.  Budget increases only ever add runs, so the
reported minimum is nonincreasing in both restarts and the size cap.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .ensemble import Ensemble, random_isometry
from .majorization import average_schmidt
from .measures import PureMeasure
from .states import DensityMatrix, PureState, StateValidationError

RANK_DETECTION_CUTOFF = 1e-10
BRANCH_PRUNE = 1e-12

#: slack for inequality suites comparing two estimates (both upper bounds)
SOFT_SLACK = 5e-2


@dataclass(frozen=True)
class OptimizerConfig:
    restarts: int = 10
    max_ensemble_size: int = None   # default: rank(rho)**2
    max_iterations: int = 40        # coarse sweeps per run
    step_tolerance: float = 1e-9
    seed: int = 0

    def __post_init__(self):
        if self.restarts < 1:
            raise ValueError("restarts must be >= 1")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be >= 1")
        if self.seed < 0:
            raise ValueError("seed must be a nonnegative integer")


@dataclass(frozen=True)
class EstimateResult:
    value: float
    best_ensemble: Ensemble
    converged: bool
    evaluations: int
    seed: int
    best_size: int
    best_restart: int


# --- batched spectra of rotated member pairs ---------------------------------

def _angle_grid(thetas):
    phis = 2 * np.pi * np.arange(8) / 8.0
    t, p = np.meshgrid(thetas, phis, indexing="ij")
    return t.ravel(), p.ravel()


BASE_T, BASE_P = _angle_grid((np.pi / 2) * np.geomspace(1.0 / 64, 1.0, 8))
FINE_T, FINE_P = _angle_grid((np.pi / 2) * np.geomspace(1.0 / 8192, 1.0, 14))
_ZOOM_OFF = np.array([-2.0, -1.0, -0.5, 0.0, 0.5, 1.0, 2.0])
_ZOOM_T0 = np.pi / 24
_ZOOM_P0 = np.pi / 3


class _SpectraEngine:
    """Unnormalized squared-singular-value spectra of member rows.

    For systems with a 2-dimensional smaller side, candidate pair spectra
    come from a closed-form eigenvalue expansion of 2x2 Gram combinations;
    otherwise from batched Hermitian diagonalization.
    """

    def __init__(self, dim_a, dim_b):
        self.dim_a, self.dim_b = dim_a, dim_b
        self.dmin = min(dim_a, dim_b)
        self.flip = dim_a > dim_b   # orient members as (dmin, dmax)
        self.fast2 = self.dmin == 2

    def _mats(self, rows):
        m = rows.reshape(-1, self.dim_a, self.dim_b)
        return m.transpose(0, 2, 1) if self.flip else m

    def rows(self, w):
        """Spectra matrix (m, dmin), each row sorted nonincreasing."""
        mats = self._mats(w)
        gram = np.einsum("mij,mkj->mik", mats, mats.conj())
        ev = np.linalg.eigvalsh(gram)[:, ::-1]
        return np.maximum(ev.real, 0.0)

    def pair_invariants(self, w, idx_i, idx_k):
        """Per-pair Gram invariants reused across candidate stages (fast path)."""
        mats = self._mats(w)
        ai, ak = mats[idx_i], mats[idx_k]
        ha = np.einsum("qij,qkj->qik", ai, ai.conj())
        hb = np.einsum("qij,qkj->qik", ak, ak.conj())
        x = np.einsum("qij,qkj->qik", ai, ak.conj())
        ta = ha[:, 0, 0].real + ha[:, 1, 1].real
        tb = hb[:, 0, 0].real + hb[:, 1, 1].real
        ha2 = ha[:, 0, 0].real ** 2 + ha[:, 1, 1].real ** 2 + 2 * np.abs(ha[:, 0, 1]) ** 2
        hb2 = hb[:, 0, 0].real ** 2 + hb[:, 1, 1].real ** 2 + 2 * np.abs(hb[:, 0, 1]) ** 2
        hab = (
            ha[:, 0, 0].real * hb[:, 0, 0].real
            + ha[:, 1, 1].real * hb[:, 1, 1].real
            + 2 * (ha[:, 0, 1] * hb[:, 0, 1].conj()).real
        )
        tx = x[:, 0, 0] + x[:, 1, 1]
        hax = (
            ha[:, 0, 0] * x[:, 0, 0]
            + ha[:, 0, 1] * x[:, 1, 0]
            + ha[:, 0, 1].conj() * x[:, 0, 1]
            + ha[:, 1, 1] * x[:, 1, 1]
        )
        hbx = (
            hb[:, 0, 0] * x[:, 0, 0]
            + hb[:, 0, 1] * x[:, 1, 0]
            + hb[:, 0, 1].conj() * x[:, 0, 1]
            + hb[:, 1, 1] * x[:, 1, 1]
        )
        x2 = x[:, 0, 0] ** 2 + x[:, 1, 1] ** 2 + 2 * x[:, 0, 1] * x[:, 1, 0]
        xxd = (np.abs(x) ** 2).sum(axis=(1, 2))
        return (ta, tb, ha2, hb2, hab, tx, hax, hbx, x2, xxd)

    @staticmethod
    def _spec_from_inv(inv, a, b, gam):
        """Spectra of a H_A + b H_B + gam X + conj(gam) X^dag (2x2 Hermitian)."""
        ta, tb, ha2, hb2, hab, tx, hax, hbx, x2, xxd = inv
        tr = a * ta + b * tb + 2.0 * (gam * tx).real
        tr2 = (
            a * a * ha2
            + b * b * hb2
            + 2.0 * a * b * hab
            + 4.0 * a * (gam * hax).real
            + 4.0 * b * (gam * hbx).real
            + 2.0 * (gam * gam * x2).real
            + 2.0 * (gam.real**2 + gam.imag**2) * xxd
        )
        disc = np.sqrt(np.maximum(2.0 * tr2 - tr * tr, 0.0))
        hi = 0.5 * (tr + disc)
        lo = np.maximum(0.5 * (tr - disc), 0.0)
        return np.stack([hi, lo], axis=-1)

    def pair_candidates(self, w, idx_i, idx_k, cth, sphi, inv=None):
        """Spectra of both rotated members for every (pair, candidate).

        ``cth``/``sphi`` hold cos(theta) and sin(theta) e^{-i phi} with
        shape (Q, C) or (C,); returns (Si, Sk) of shape (Q, C, dmin).
        New members are w_i' = c w_i - s w_k and w_k' = conj(s) w_i + c w_k.
        """
        if cth.ndim == 1:
            cth = np.broadcast_to(cth, (len(idx_i), cth.shape[0]))
            sphi = np.broadcast_to(sphi, cth.shape)
        if self.fast2:
            if inv is None:
                inv = self.pair_invariants(w, idx_i, idx_k)
            inv = tuple(t[:, None] for t in inv)
            c2 = cth * cth
            s2 = sphi.real**2 + sphi.imag**2
            cs = cth * np.conj(sphi)
            si = self._spec_from_inv(inv, c2, s2, -cs)
            sk = self._spec_from_inv(inv, s2, c2, cs)
            return si, sk
        wi = cth[..., None] * w[idx_i][:, None, :] - sphi[..., None] * w[idx_k][:, None, :]
        wk = np.conj(sphi)[..., None] * w[idx_i][:, None, :] + cth[..., None] * w[idx_k][:, None, :]
        q, c = cth.shape
        si = self.rows(wi.reshape(q * c, -1)).reshape(q, c, self.dmin)
        sk = self.rows(wk.reshape(q * c, -1)).reshape(q, c, self.dmin)
        return si, sk


class _Objective:
    """Maps unnormalized spectra to the optimization target."""

    def __init__(self, measure: PureMeasure, kind: str):
        self.measure = measure
        self.kind = kind   # 'extension' | 'roof'

    def total(self, spectra) -> float:
        if self.kind == "extension":
            v = np.sort(spectra.sum(axis=0))[::-1]
            return float(self.measure.batch(v[None, :])[0])
        return float(self.measure.contrib(spectra).sum())

    def candidate_values(self, spectra, idx_i, idx_k, si, sk):
        """Objective for every (pair, candidate), given current spectra."""
        if self.kind == "extension":
            tot = spectra.sum(axis=0)
            rest = tot[None, :] - spectra[idx_i] - spectra[idx_k]
            return self.measure.batch(rest[:, None, :] + si + sk)
        contrib = self.measure.contrib(spectra)
        rest = contrib.sum() - contrib[idx_i] - contrib[idx_k]
        return rest[:, None] + self.measure.contrib(si) + self.measure.contrib(sk)

    def verify_pair(self, spectra, i, k, si, sk) -> float:
        """Objective after replacing members i, k (against the live state)."""
        if self.kind == "extension":
            v = spectra.sum(axis=0) - spectra[i] - spectra[k] + si + sk
            return float(self.measure.batch(np.sort(v)[::-1][None, :])[0])
        contrib = self.measure.contrib(spectra)
        rest = contrib.sum() - contrib[i] - contrib[k]
        return float(rest + self.measure.contrib(si[None, :])[0] + self.measure.contrib(sk[None, :])[0])


def _descend(w, engine, objective, cfg):
    """Coordinate descent on member-pair rotations; mutates and returns w."""
    m = w.shape[0]
    evals = 0
    spectra = engine.rows(w)
    value = objective.total(spectra)
    if m < 2:
        return value, w, evals
    iu, ku = np.triu_indices(m, k=1)
    fine = False
    stall = 0
    coarse_left = cfg.max_iterations
    fine_left = 16
    while True:
        spectra = engine.rows(w)
        value = objective.total(spectra)
        start = value

        grid_t, grid_p = (FINE_T, FINE_P) if fine else (BASE_T, BASE_P)
        inv = engine.pair_invariants(w, iu, ku) if engine.fast2 else None
        si, sk = engine.pair_candidates(
            w, iu, ku, np.cos(grid_t), np.sin(grid_t) * np.exp(-1j * grid_p), inv=inv
        )
        vals = objective.candidate_values(spectra, iu, ku, si, sk)
        evals += vals.size
        jbest = np.argmin(vals, axis=1)
        ar = np.arange(len(iu))
        best_vals = vals[ar, jbest]
        improving = np.nonzero(best_vals < value - 1e-15)[0]
        if improving.size:
            sub_i, sub_k = iu[improving], ku[improving]
            sub_inv = tuple(t[improving] for t in inv) if inv is not None else None
            cur_t = grid_t[jbest[improving]].copy()
            cur_p = grid_p[jbest[improving]].copy()
            cur_v = best_vals[improving].copy()
            cur_si = si[improving, jbest[improving]].copy()
            cur_sk = sk[improving, jbest[improving]].copy()
            n_zoom = 6 if fine else 1
            for stage in range(n_zoom):
                dth = _ZOOM_T0 / (4.0**stage)
                dph = _ZOOM_P0 / (4.0**stage)
                th = cur_t[:, None, None] + _ZOOM_OFF[None, :, None] * dth
                ph = cur_p[:, None, None] + _ZOOM_OFF[None, None, :] * dph
                th = np.broadcast_to(th, (len(sub_i), 7, 7)).reshape(len(sub_i), 49)
                ph = np.broadcast_to(ph, (len(sub_i), 7, 7)).reshape(len(sub_i), 49)
                zi, zk = engine.pair_candidates(
                    w, sub_i, sub_k, np.cos(th), np.sin(th) * np.exp(-1j * ph), inv=sub_inv
                )
                zvals = objective.candidate_values(spectra, sub_i, sub_k, zi, zk)
                evals += zvals.size
                zj = np.argmin(zvals, axis=1)
                arz = np.arange(len(sub_i))
                better = zvals[arz, zj] < cur_v - 1e-16
                cur_t = np.where(better, th[arz, zj], cur_t)
                cur_p = np.where(better, ph[arz, zj], cur_p)
                cur_v = np.where(better, zvals[arz, zj], cur_v)
                cur_si[better] = zi[arz[better], zj[better]]
                cur_sk[better] = zk[arz[better], zj[better]]
            # greedy non-conflicting application, re-verified against live state
            order = np.argsort(cur_v, kind="stable")
            touched = np.zeros(m, dtype=bool)
            for q in order:
                i, k = sub_i[q], sub_k[q]
                if touched[i] or touched[k]:
                    continue
                live = objective.verify_pair(spectra, i, k, cur_si[q], cur_sk[q])
                if live >= value - 1e-15:
                    continue
                c0 = np.cos(cur_t[q])
                s0 = np.sin(cur_t[q]) * np.exp(-1j * cur_p[q])
                wi = c0 * w[i] - s0 * w[k]
                wk = np.conj(s0) * w[i] + c0 * w[k]
                w[i], w[k] = wi, wk
                spectra[i], spectra[k] = cur_si[q], cur_sk[q]
                touched[i] = touched[k] = True
                value = live

        gain = start - value
        if fine:
            fine_left -= 1
            if gain <= cfg.step_tolerance:
                stall += 1
                if stall >= 2:
                    break
            else:
                stall = 0
            if fine_left <= 0:
                break
        else:
            coarse_left -= 1
            if gain <= max(1e-8, cfg.step_tolerance) or coarse_left <= 0:
                fine = True
    spectra = engine.rows(w)
    return objective.total(spectra), w, evals


def _size_ladder(rank: int, cfg: OptimizerConfig):
    cap = rank * rank if cfg.max_ensemble_size is None else cfg.max_ensemble_size
    if cap < rank:
        raise ValueError(f"max_ensemble_size = {cap} is below rank(rho) = {rank}")
    return list(range(rank, cap + 1))


def _run_starts(rank, cfg):
    """Deterministic (size, restart, W0-factory) schedule.

    Budget decays harmonically along the size ladder so that enlarging
    either budget knob only appends runs (keeps the minimum monotone).
    """
    for idx, size in enumerate(_size_ladder(rank, cfg)):
        n_starts = max(1, cfg.restarts // (idx + 1))
        for k in range(n_starts):
            yield size, k


def _initial_members(rho, size, k, cfg, q, e):
    n = len(q)
    if size == n and k == 0:
        u = np.zeros((size, n), dtype=complex)
        u[:n, :n] = np.eye(n)
    else:
        rng = np.random.default_rng(np.random.SeedSequence([cfg.seed, size, k]))
        u = random_isometry(size, n, rng)
    return ((e * np.sqrt(q)) @ u.conj().T).T.copy()


def _public_value(objective, ens: Ensemble) -> float:
    if objective.kind == "extension":
        return objective.measure.evaluate(average_schmidt(ens))
    return float(sum(p * objective.measure.evaluate(psi.schmidt_vector()) for p, psi in ens.members))


def _ensemble_from_rows(rho, w) -> Ensemble:
    weights = (w.real**2 + w.imag**2).sum(axis=1)
    pairs = []
    for wt, row in zip(weights, w):
        if wt <= 1e-14:
            continue
        pairs.append((float(wt), PureState(rho.dim_a, rho.dim_b, row / np.sqrt(wt))))
    total = sum(p for p, _ in pairs)
    return Ensemble(tuple((p / total, psi) for p, psi in pairs))


def _optimize(rho: DensityMatrix, measure: PureMeasure, cfg: OptimizerConfig, kind: str) -> EstimateResult:
    q, e = rho.eigensystem(RANK_DETECTION_CUTOFF)
    rank = len(q)
    engine = _SpectraEngine(rho.dim_a, rho.dim_b)
    objective = _Objective(measure, kind)
    best = None
    evals = 0
    last_improved = False
    for size, k in _run_starts(rank, cfg):
        w0 = _initial_members(rho, size, k, cfg, q, e)
        _, w, ev = _descend(w0, engine, objective, cfg)
        evals += ev
        ens = _ensemble_from_rows(rho, w)
        value = _public_value(objective, ens)
        if best is None or value < best[0]:
            last_improved = best is not None and best[0] - value > cfg.step_tolerance
            best = (value, ens, size, k)
        else:
            last_improved = False
    value, ens, size, k = best
    return EstimateResult(
        value=value,
        best_ensemble=ens,
        converged=not last_improved,
        evaluations=evals,
        seed=cfg.seed,
        best_size=size,
        best_restart=k,
    )


def extension_measure(rho: DensityMatrix, measure: PureMeasure, cfg: OptimizerConfig = None) -> EstimateResult:
    """Upper-bound estimate of the pre-image extension value of ``measure``.

    Minimizes f(ensemble-averaged Schmidt vector) over parameterized
    decompositions of rho; the infimum is approached from above, so the
    reported value is an upper bound.
    """
    cfg = cfg or OptimizerConfig()
    return _optimize(rho, measure, cfg, "extension")


def convex_roof(rho: DensityMatrix, measure: PureMeasure, cfg: OptimizerConfig = None) -> EstimateResult:
    """Upper-bound estimate of the convex roof of ``measure`` over decompositions."""
    cfg = cfg or OptimizerConfig()
    return _optimize(rho, measure, cfg, "roof")


# --- unilocal channels and theorem-level checks ------------------------------

@dataclass(frozen=True)
class KrausChannel:
    """Kraus operators acting on one local factor ('A' or 'B')."""

    operators: tuple
    side: str = "B"

    def __post_init__(self):
        ops = tuple(np.asarray(op, dtype=complex) for op in self.operators)
        if not ops:
            raise StateValidationError("channel needs at least one Kraus operator")
        d = ops[0].shape[0]
        if any(op.shape != (d, d) for op in ops):
            raise StateValidationError("Kraus operators must be square and same-sized")
        total = sum(op.conj().T @ op for op in ops)
        dev = float(np.abs(total - np.eye(d)).max())
        if dev > 1e-9:
            raise StateValidationError(
                f"Kraus completeness violated by {dev:.3e} (tolerance 1e-9)"
            )
        if self.side not in ("A", "B"):
            raise StateValidationError("side must be 'A' or 'B'")
        object.__setattr__(self, "operators", ops)

    @property
    def local_dim(self) -> int:
        return self.operators[0].shape[0]


def apply_unilocal_channel(rho: DensityMatrix, ch: KrausChannel):
    """Branch states of a unilocal operation: [(q_j, rho_j)] with q_j > 1e-12."""
    expected = rho.dim_a if ch.side == "A" else rho.dim_b
    if ch.local_dim != expected:
        raise StateValidationError(
            f"channel dimension {ch.local_dim} does not match side {ch.side} "
            f"dimension {expected}"
        )
    branches = []
    for op in ch.operators:
        full = np.kron(op, np.eye(rho.dim_b)) if ch.side == "A" else np.kron(np.eye(rho.dim_a), op)
        out = full @ rho.matrix @ full.conj().T
        prob = float(out.trace().real)
        if prob < BRANCH_PRUNE:
            continue
        out = 0.5 * (out + out.conj().T) / prob
        branches.append((prob, DensityMatrix(rho.dim_a, rho.dim_b, out)))
    total = sum(p for p, _ in branches)
    if abs(total - 1.0) > 1e-9:
        raise StateValidationError(
            f"branch probabilities sum deviates from 1 by {abs(total - 1.0):.3e}"
        )
    return branches


def check_monotonicity_iii(rho, measure, ch, cfg=None) -> float:
    """Estimated extension value of rho minus its branch average.

    Both sides are upper-bound estimates, so the property suite accepts
    values down to -SOFT_SLACK; exact inputs should sit near >= 0.
    """
    if not measure.concave_f:
        raise ValueError(f"measure {measure.id!r} is not flagged concave_f")
    cfg = cfg or OptimizerConfig()
    lhs = extension_measure(rho, measure, cfg).value
    rhs = 0.0
    for prob, branch in apply_unilocal_channel(rho, ch):
        rhs += prob * extension_measure(branch, measure, cfg).value
    return lhs - rhs


def _support_projector(rho: DensityMatrix, cutoff=RANK_DETECTION_CUTOFF):
    q, e = rho.eigensystem(cutoff)
    return e @ e.conj().T


def check_block_diagonal(sigma1, sigma2, p1, measure, cfg=None) -> float:
    """p1 E(sigma1) + p2 E(sigma2) - E(p1 sigma1 + p2 sigma2) on disjoint supports."""
    if not measure.convex_on_spectra:
        raise ValueError(f"measure {measure.id!r} is not flagged convex_on_spectra")
    if not 0.0 <= p1 <= 1.0:
        raise ValueError("p1 must be a probability")
    if (sigma1.dim_a, sigma1.dim_b) != (sigma2.dim_a, sigma2.dim_b):
        raise ValueError("blocks must share dimensions")
    overlap = float(np.abs(_support_projector(sigma1) @ _support_projector(sigma2)).max())
    if overlap > 1e-10:
        raise StateValidationError(
            f"supports overlap: projector product magnitude {overlap:.3e}"
        )
    cfg = cfg or OptimizerConfig()
    p2 = 1.0 - p1
    mixed = DensityMatrix(sigma1.dim_a, sigma1.dim_b, p1 * sigma1.matrix + p2 * sigma2.matrix)
    lhs = p1 * extension_measure(sigma1, measure, cfg).value
    lhs += p2 * extension_measure(sigma2, measure, cfg).value
    return lhs - extension_measure(mixed, measure, cfg).value


def check_subadditivity(rho, measure, cfg=None) -> float:
    """2 E(rho) - E(rho x rho); inputs restricted to rank <= 2."""
    from .states import tensor_product

    if not measure.subadditive:
        raise ValueError(f"measure {measure.id!r} is not flagged subadditive")
    if rho.rank(RANK_DETECTION_CUTOFF) > 2:
        raise ValueError("input rank too large for the configured budget (need rank <= 2)")
    cfg = cfg or OptimizerConfig()
    single = extension_measure(rho, measure, cfg).value
    double = extension_measure(tensor_product(rho, rho), measure, cfg).value
    return 2.0 * single - double
