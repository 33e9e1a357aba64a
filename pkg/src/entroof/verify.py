"""Cross-module property suites behind the CLI ``verify`` command.

Each check returns a row (name, passed, measured slack, detail); a hard
failure anywhere flips the process exit code.  Checks are seeded and
sized for desk-scale runtimes; the acceptance test suite runs the same
properties at their full sample sizes.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .applications import (
    concurrence_bipartition,
    demo_states,
    monogamy_check,
    sepp_feasible,
)
from .cost import max_entangled, one_shot_cost_pure, smoothed_cost_pure_upper
from .ensemble import DecompositionParam, Ensemble, decompose, random_isometry
from .majorization import (
    SchmidtVector,
    average_schmidt,
    majorizes,
    nielsen_convertible,
    pure_from_schmidt,
)
from .measures import entropy_of_entanglement, get_measure
from .roof import (
    SOFT_SLACK,
    KrausChannel,
    OptimizerConfig,
    apply_unilocal_channel,
    check_block_diagonal,
    check_subadditivity,
    convex_roof,
    extension_measure,
)
from .states import (
    DensityMatrix,
    PureState,
    TripartiteState,
    partial_trace,
    random_density,
    random_pure,
    random_tripartite,
    schmidt_decompose,
    tensor_product,
    trace_distance,
)
from .wootters import pure_concurrence_from_vector, wootters_concurrence


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    slack: float
    detail: str


def _brute_force_majorizes(x, y, slack=1e-9):
    """Independent partial-sum comparison in plain Python."""
    xs = sorted(list(x), reverse=True)
    ys = sorted(list(y), reverse=True)
    n = max(len(xs), len(ys))
    xs = xs + [0.0] * (n - len(xs))
    ys = ys + [0.0] * (n - len(ys))
    sx = sy = 0.0
    for i in range(n):
        sx += xs[i]
        sy += ys[i]
        if sx > sy + slack:
            return False
    return True


def _random_prob_vector(rng, d):
    v = rng.dirichlet(np.ones(d))
    return np.sort(v)[::-1]


def _mixed_toward(rng, y):
    """A vector majorized by y: average of random permutations of y."""
    d = len(y)
    perms = [rng.permutation(d) for _ in range(3)]
    weights = rng.dirichlet(np.ones(3))
    x = sum(w * y[p] for w, p in zip(weights, perms))
    return np.sort(x)[::-1]


def _check(name, passed, slack, detail=""):
    return CheckResult(name, bool(passed), float(slack), detail)


# --- individual suites --------------------------------------------------------

def suite_states(seed, quick):
    rng = np.random.default_rng(seed)
    out = []
    n_states = 8 if quick else 20
    worst = 0.0
    for i in range(n_states):
        da, db = int(rng.integers(2, 5)), int(rng.integers(2, 5))
        psi = random_pure(da, db, int(rng.integers(0, 2**31)))
        sd = schmidt_decompose(psi)
        err = float(np.linalg.norm(sd.reconstruct() - psi.amplitudes))
        worst = max(worst, err)
    out.append(_check("states/schmidt-reconstruct", worst <= 1e-9, worst, f"{n_states} states"))

    worst = 0.0
    for i in range(n_states):
        da, db = int(rng.integers(2, 5)), int(rng.integers(2, 5))
        psi = random_pure(da, db, int(rng.integers(0, 2**31)))
        rho = psi.density()
        ev_a = np.sort(np.linalg.eigvalsh(partial_trace(rho, "A")))[::-1]
        ev_b = np.sort(np.linalg.eigvalsh(partial_trace(rho, "B")))[::-1]
        r = min(len(ev_a), len(ev_b))
        err = float(np.abs(ev_a[:r] - ev_b[:r]).max())
        tail = max(
            float(np.abs(ev_a[r:]).max()) if len(ev_a) > r else 0.0,
            float(np.abs(ev_b[r:]).max()) if len(ev_b) > r else 0.0,
        )
        worst = max(worst, err, tail)
    out.append(_check("states/marginal-spectra-match", worst <= 1e-9, worst))

    worst = -1.0
    for i in range(10 if quick else 25):
        states = [random_density(2, 3, int(rng.integers(1, 7)), int(rng.integers(0, 2**31))) for _ in range(3)]
        a, b, c = states
        gap = trace_distance(a, b) + trace_distance(b, c) - trace_distance(a, c)
        worst = max(worst, -gap)
    out.append(_check("states/trace-distance-triangle", worst <= 1e-9, worst))

    worst = 0.0
    for i in range(n_states):
        psi = random_pure(2, 3, int(rng.integers(0, 2**31)))
        phi = random_pure(3, 2, int(rng.integers(0, 2**31)))
        both = tensor_product(psi, phi)
        mu = both.schmidt_vector(rank_cutoff=0.0)
        outer = np.sort(np.outer(psi.schmidt_vector(0.0), phi.schmidt_vector(0.0)).ravel())[::-1]
        n = max(len(mu), len(outer))
        err = float(np.abs(np.pad(mu, (0, n - len(mu))) - np.pad(outer, (0, n - len(outer)))).max())
        worst = max(worst, err)
    out.append(_check("states/tensor-schmidt-outer-product", worst <= 1e-10, worst))

    a = random_pure(2, 2, 42)
    b = random_pure(2, 2, 42)
    det = bool(np.array_equal(a.amplitudes, b.amplitudes))
    rho1 = random_density(2, 2, 2, 42)
    rho2 = random_density(2, 2, 2, 42)
    det = det and bool(np.array_equal(rho1.matrix, rho2.matrix))
    out.append(_check("states/seeded-determinism", det, 0.0))
    return out


def suite_majorization(seed, quick):
    rng = np.random.default_rng(seed + 1)
    out = []
    n_pairs = 300 if quick else 1000
    agree = True
    for i in range(n_pairs):
        d = int(rng.integers(1, 7))
        x = _random_prob_vector(rng, d)
        y = _random_prob_vector(rng, int(rng.integers(1, 7)))
        if majorizes(x, y) != _brute_force_majorizes(x, y):
            agree = False
            break
    out.append(_check("majorization/brute-force-agreement", agree, 0.0, f"{n_pairs} pairs"))

    ok = True
    for i in range(60):
        d = int(rng.integers(2, 6))
        z = _random_prob_vector(rng, d)
        y = _mixed_toward(rng, z)
        x = _mixed_toward(rng, y)
        ok &= majorizes(z, z)
        ok &= majorizes(y, z) and majorizes(x, y) and majorizes(x, z)
    out.append(_check("majorization/reflexive-transitive", ok, 0.0))

    ok = True
    for i in range(60):
        d = int(rng.integers(1, 8))
        ok &= majorizes(np.full(d, 1.0 / d), _random_prob_vector(rng, d))
    out.append(_check("majorization/uniform-is-bottom", ok, 0.0))

    ok = True
    for i in range(60):
        members = []
        n = int(rng.integers(1, 5))
        weights = rng.dirichlet(np.ones(n))
        for w in weights:
            psi = random_pure(int(rng.integers(2, 4)), 3, int(rng.integers(0, 2**31)))
            members.append((float(w), psi))
        avg = average_schmidt(Ensemble(tuple(members)))
        ok &= bool(np.all(np.diff(avg.entries) <= 1e-15))
        ok &= abs(avg.entries.sum() - 1.0) < 1e-9
    out.append(_check("majorization/average-sorted-normalized", ok, 0.0))

    worst = -1.0
    for i in range(100):
        d = int(rng.integers(2, 6))
        y = _random_prob_vector(rng, d)
        x = _mixed_toward(rng, y)
        for k in range(1, d + 1):
            gap = float(x[k - 1 :].sum() - y[k - 1 :].sum())
            worst = max(worst, -gap)
    out.append(_check("majorization/tail-sum-bridge", worst <= 1e-9, worst, "x < y  =>  tails(x) >= tails(y)"))
    return out


def suite_measures(seed, quick):
    rng = np.random.default_rng(seed + 2)
    out = []
    ids = ["entropy", "concurrence", "geometric", "robustness", "e_k:2", "e_k:3"]
    worst = -1.0
    for i in range(60 if quick else 200):
        d = int(rng.integers(2, 6))
        y = _random_prob_vector(rng, d)
        x = _mixed_toward(rng, y)
        for mid in ids:
            m = get_measure(mid)
            gap = m.evaluate(x) - m.evaluate(y)
            worst = max(worst, -gap)
    out.append(_check("measures/schur-concavity", worst <= 1e-9, worst, ",".join(ids)))

    worst = -1.0
    for i in range(100):
        d = int(rng.integers(2, 6))
        v = _random_prob_vector(rng, d)
        uni = np.full(d, 1.0 / d)
        for mid in ("entropy", "concurrence"):
            m = get_measure(mid)
            gap = m.evaluate(uni) - m.evaluate(v)
            worst = max(worst, -gap)
    out.append(_check("measures/uniform-maximizes", worst <= 1e-9, worst))

    sep = SchmidtVector(np.array([1.0]))
    ok = True
    for mid in ("entropy", "concurrence", "geometric", "robustness"):
        ok &= abs(get_measure(mid).evaluate(sep)) < 1e-12
    ok &= abs(get_measure("schmidt_rank").evaluate(sep) - 1.0) < 1e-12
    ok &= abs(get_measure("e_k:1").evaluate(sep) - 1.0) < 1e-12
    out.append(_check("measures/separable-values", ok, 0.0))

    psi1 = pure_from_schmidt([0.7, 0.3], 2, 2)
    psi2 = pure_from_schmidt([0.7, 0.3], 3, 4)
    same = all(
        abs(get_measure(mid).evaluate(psi1.schmidt_vector()) - get_measure(mid).evaluate(psi2.schmidt_vector())) < 1e-12
        for mid in ids
    )
    out.append(_check("measures/spectrum-only-invariance", same, 0.0))
    return out


def suite_roof(seed, quick):
    rng = np.random.default_rng(seed + 3)
    out = []

    worst = 0.0
    for i in range(8 if quick else 16):
        rho = random_density(2, 2, int(rng.integers(1, 5)), int(rng.integers(0, 2**31)))
        n = rho.rank()
        m = int(rng.integers(n, 2 * n + 1))
        param = DecompositionParam(random_isometry(m, n, rng))
        ens = decompose(rho, param)
        worst = max(worst, trace_distance(ens.average_state(), rho))
        dup = np.vstack([np.eye(n), np.eye(n)]) / np.sqrt(2)
        ens2 = decompose(rho, DecompositionParam(dup.astype(complex)))
        worst = max(worst, trace_distance(ens2.average_state(), rho))
    out.append(_check("roof/decompose-reconstruction", worst <= 1e-8, worst))

    worst = 0.0
    for i in range(20):
        psi = random_pure(2, 2, int(rng.integers(0, 2**31)))
        cw = wootters_concurrence(psi.density())
        cp = get_measure("concurrence").evaluate(psi.schmidt_vector())
        worst = max(worst, abs(cw - cp))
    out.append(_check("roof/wootters-pure-agreement", worst <= 1e-10, worst))

    bell = pure_from_schmidt([0.5, 0.5], 2, 2)
    p = 0.8
    werner = DensityMatrix(2, 2, p * bell.density().matrix + (1 - p) * np.eye(4) / 4)
    err = abs(wootters_concurrence(werner) - (3 * p - 1) / 2)
    out.append(_check("roof/werner-analytic", err <= 1e-10, err))

    worst = 0.0
    for i in range(10):
        rho = random_density(2, 2, int(rng.integers(2, 5)), int(rng.integers(0, 2**31)))
        c, ens = wootters_concurrence(rho, return_ensemble=True)
        worst = max(worst, trace_distance(ens.average_state(), rho))
        for _, member in ens.members:
            worst = max(worst, abs(pure_concurrence_from_vector(member.amplitudes) - c))
    out.append(_check("roof/wootters-flat-ensemble", worst <= 1e-7, worst))

    cfg = OptimizerConfig(restarts=6, max_ensemble_size=8, seed=seed)
    worst = 1.0
    for i in range(3 if quick else 5):
        rho = random_density(2, 2, 2 + i % 3, 7000 + i)
        for mid in ("concurrence", "geometric", "entropy"):
            m = get_measure(mid)
            ext = extension_measure(rho, m, cfg).value
            roof = convex_roof(rho, m, cfg).value
            worst = min(worst, ext - roof)
    out.append(_check("roof/extension-dominates-roof", worst >= -1e-6, worst, "hard ordering invariant"))

    rho = random_density(2, 2, 3, 555)
    m = get_measure("concurrence")
    r1 = extension_measure(rho, m, cfg)
    r2 = extension_measure(rho, m, cfg)
    same = (
        r1.value == r2.value
        and r1.evaluations == r2.evaluations
        and all(
            np.array_equal(a[1].amplitudes, b[1].amplitudes) and a[0] == b[0]
            for a, b in zip(r1.best_ensemble.members, r2.best_ensemble.members)
        )
    )
    out.append(_check("roof/determinism", same, 0.0, "bit-identical repeated estimate"))

    vals = []
    for restarts, cap in ((2, 4), (4, 4), (4, 6), (8, 6)):
        c = OptimizerConfig(restarts=restarts, max_ensemble_size=cap, seed=seed)
        vals.append(extension_measure(rho, m, c).value)
    mono = vals[1] <= vals[0] and vals[2] <= vals[1] and vals[3] <= vals[2]
    out.append(_check("roof/budget-monotonicity", mono, 0.0, f"values {['%.6f' % v for v in vals]}"))

    worst = 0.0
    for i in range(5):
        psi = random_pure(2, 3, 900 + i)
        ext = extension_measure(psi.density(), m, cfg).value
        exact = m.evaluate(psi.schmidt_vector())
        worst = max(worst, abs(ext - exact))
    out.append(_check("roof/pure-state-exactness", worst <= 1e-9, worst))

    # unilocal channels: completeness and the monotonicity check
    worst = 0.0
    for i in range(10):
        ch = _random_measurement_channel(rng, 2)
        rho = random_density(2, 2, int(rng.integers(2, 5)), int(rng.integers(0, 2**31)))
        branches = apply_unilocal_channel(rho, ch)
        worst = max(worst, abs(sum(p for p, _ in branches) - 1.0))
    out.append(_check("roof/channel-branch-probabilities", worst <= 1e-9, worst))

    worst = 0.0
    for i in range(10 if quick else 20):
        rho = random_density(2, 2, int(rng.integers(2, 5)), int(rng.integers(0, 2**31)))
        ch = _random_measurement_channel(rng, 2)
        lhs = wootters_concurrence(rho)
        rhs = sum(p * wootters_concurrence(b) for p, b in apply_unilocal_channel(rho, ch))
        worst = max(worst, rhs - lhs)
    out.append(_check("roof/unilocal-monotonicity-exact", worst <= 1e-9, worst, "closed-form concurrence"))

    ek2 = get_measure("e_k:2")
    worst = -1.0
    for i in range(3):
        s1, s2 = _disjoint_pure_blocks(rng)
        gap = check_block_diagonal(s1, s2, 0.3 + 0.2 * i, ek2, cfg)
        worst = max(worst, -gap)
    out.append(_check("roof/block-diagonal-pure", worst <= 1e-9, worst))

    ent = get_measure("entropy")
    rho = random_density(2, 2, 2, 808)
    gap = check_subadditivity(rho, ent, OptimizerConfig(restarts=4, seed=seed))
    out.append(_check("roof/subadditivity-sample", gap >= -SOFT_SLACK, gap))
    return out


def _random_measurement_channel(rng, d):
    x = rng.uniform(0.2, 0.8)
    u1 = random_isometry(d, d, rng)
    u2 = random_isometry(d, d, rng)
    base = random_isometry(d, d, rng)
    diag = np.diag(rng.uniform(0.1, 0.9, size=d))
    k1sq = base @ diag @ base.conj().T
    k1 = u1 @ _psd_sqrt(k1sq)
    k2 = u2 @ _psd_sqrt(np.eye(d) - k1sq)
    return KrausChannel((k1, k2), side="B")


def _psd_sqrt(mat):
    w, v = np.linalg.eigh(mat)
    return (v * np.sqrt(np.maximum(w, 0.0))) @ v.conj().T


def _disjoint_pure_blocks(rng):
    psi1 = random_pure(2, 2, int(rng.integers(0, 2**31)))
    psi2 = random_pure(2, 2, int(rng.integers(0, 2**31)))
    big1 = np.zeros((4, 4), dtype=complex)
    big1[:2, :2] = psi1.matrix
    big2 = np.zeros((4, 4), dtype=complex)
    big2[2:, 2:] = psi2.matrix
    s1 = PureState(4, 4, big1.reshape(-1)).density()
    s2 = PureState(4, 4, big2.reshape(-1)).density()
    return s1, s2


def suite_cost(seed, quick):
    rng = np.random.default_rng(seed + 4)
    out = []

    ok = True
    for r in range(2, 9):
        res = one_shot_cost_pure(max_entangled(r, 8, 8))
        ok &= res.r_min == r and abs(res.log_cost - np.log2(r)) < 1e-12
    out.append(_check("cost/self-cost", ok, 0.0, "r = 2..8"))

    ok = True
    n = 300 if quick else 1000
    for i in range(n):
        d = int(rng.integers(1, 8))
        v = _random_prob_vector(rng, d)
        psi = pure_from_schmidt(v / v.sum(), d, d)
        one_shot_cost_pure(psi)  # raises if the two routes disagree
    out.append(_check("cost/route-agreement", ok, 0.0, f"{n} random vectors"))

    psi = pure_from_schmidt([0.55, 0.45], 2, 2)
    base = one_shot_cost_pure(psi).log_cost
    vals = [smoothed_cost_pure_upper(psi, eps, grid=200, seed=seed) for eps in (0.01, 0.3, 0.68, 0.9)]
    mono = all(vals[i + 1] <= vals[i] + 1e-12 for i in range(len(vals) - 1))
    ok = vals[0] <= base + 1e-12 and mono and vals[2] == 0.0
    out.append(_check("cost/smoothed-upper-monotone", ok, 0.0, f"values {vals}"))

    worst = -1.0
    for i in range(100):
        d = int(rng.integers(1, 7))
        psi = pure_from_schmidt(_random_prob_vector(rng, d), d, d)
        gap = one_shot_cost_pure(psi).log_cost - entropy_of_entanglement(psi.schmidt_vector())
        worst = max(worst, -gap)
    out.append(_check("cost/cost-dominates-entropy", worst <= 1e-9, worst))

    ok = True
    for i in range(60):
        d = int(rng.integers(2, 7))
        psi = pure_from_schmidt(_random_prob_vector(rng, d), d, d)
        r = one_shot_cost_pure(psi).r_min
        ok &= nielsen_convertible(max_entangled(r, d, d), psi)
        if r > 1 and r - 1 <= d:
            ok &= not nielsen_convertible(max_entangled(r - 1, d, d), psi)
    out.append(_check("cost/nielsen-consistency", ok, 0.0))
    return out


def suite_applications(seed, quick):
    rng = np.random.default_rng(seed + 5)
    out = []

    source, p1, p2, mixture = demo_states()
    r_psi = get_measure("robustness").evaluate(source.schmidt_vector())
    r_p1 = get_measure("robustness").evaluate(p1.schmidt_vector())
    r_p2 = get_measure("robustness").evaluate(p2.schmidt_vector())
    ok = abs(r_psi - 2.0) < 1e-9 and abs(r_p1 - 16.0 / 9.0) < 1e-9 and abs(r_p2 - 1.5529) < 1e-3
    report = sepp_feasible(3, mixture)
    ok &= report.sepp_feasible and report.schmidt_source == 3 and report.schmidt_target == 4
    ok &= report.margin > 1e-3
    out.append(
        _check(
            "applications/sepp-demo",
            ok,
            report.margin,
            f"R = ({r_psi:.4f}, {r_p1:.4f}, {r_p2:.4f}), margin {report.margin:.2e}",
        )
    )

    stable = True
    for grid in (100, 1000, 10000):
        rep = sepp_feasible(3, mixture, grid=grid)
        stable &= rep.sepp_feasible and rep.schmidt_target == 4 and rep.margin > 1e-3
    out.append(_check("applications/sepp-grid-stability", stable, 0.0, "grids 1e2, 1e3, 1e4"))

    bell = pure_from_schmidt([0.5, 0.5], 2, 2)
    prod = TripartiteState((2, 2, 2), np.kron(bell.amplitudes, np.array([1.0, 0.0])))
    ghz = np.zeros(8, dtype=complex)
    ghz[0] = ghz[7] = 1 / np.sqrt(2)
    ghz = TripartiteState((2, 2, 2), ghz)
    wst = np.zeros(8, dtype=complex)
    wst[1] = wst[2] = wst[4] = 1 / np.sqrt(3)
    wst = TripartiteState((2, 2, 2), wst)
    verdicts = [monogamy_check(s).verdict for s in (prod, ghz, wst)]
    ok = verdicts == ["PASS", "VACUOUS", "VACUOUS"]
    out.append(_check("applications/monogamy-fixtures", ok, 0.0, str(verdicts)))

    n = 100 if quick else 200
    violations = 0
    worst = -1.0
    for i in range(n):
        state = random_tripartite((2, 2, 2), int(rng.integers(0, 2**31)))
        v = monogamy_check(state)
        if v.verdict == "VIOLATION":
            violations += 1
        cabc = concurrence_bipartition(state)
        cab = wootters_concurrence(state.marginal_ab())
        cac = wootters_concurrence(state.marginal_ac())
        worst = max(worst, cab * cab + cac * cac - cabc * cabc)
    out.append(_check("applications/monogamy-random", violations == 0, violations, f"{n} states"))
    out.append(_check("applications/ckw-sanity", worst <= 1e-9, worst, "known tangle inequality, cross-check only"))
    return out


def run_all(seed: int = 0, quick: bool = False):
    rows = []
    for suite in (suite_states, suite_majorization, suite_measures, suite_roof, suite_cost, suite_applications):
        rows.extend(suite(seed, quick))
    return rows
