import numpy as np
import pytest

import entroof as er
from entroof.measures import get_measure
from entroof.roof import KrausChannel, OptimizerConfig
from entroof.states import StateValidationError

CONC = get_measure("concurrence")
GEO = get_measure("geometric")
ENT = get_measure("entropy")
EK2 = get_measure("e_k:2")

SMALL = OptimizerConfig(restarts=6, max_ensemble_size=8, seed=3)


def bell():
    return er.pure_from_schmidt([0.5, 0.5], 2, 2)


def geometric_roof_oracle(c):
    """Two-qubit geometric roof from the concurrence: (1 - sqrt(1 - C^2)) / 2."""
    return 0.5 * (1.0 - np.sqrt(max(1.0 - c * c, 0.0)))


class TestExtensionMeasure:
    def test_pure_state_exact(self):
        for seed in range(5):
            psi = er.random_pure(2, 3, seed)
            res = er.extension_measure(psi.density(), CONC, SMALL)
            assert res.value == pytest.approx(CONC.evaluate(psi.schmidt_vector()), abs=1e-9)
            assert res.converged

    def test_separable_diagonal_scores_zero(self):
        rho = er.DensityMatrix(2, 2, np.diag([0.5, 0, 0, 0.5]).astype(complex))
        res = er.extension_measure(rho, CONC, SMALL)
        assert res.value == pytest.approx(0.0, abs=1e-9)

    def test_matches_wootters_on_two_qubits(self):
        cfg = OptimizerConfig(restarts=12, max_ensemble_size=8, seed=5)
        for seed in range(3):
            rho = er.random_density(2, 2, 2 + seed, 300 + seed)
            c = er.wootters_concurrence(rho)
            res = er.extension_measure(rho, CONC, cfg)
            assert -1e-9 <= res.value - c <= 2e-2

    def test_value_matches_reported_ensemble(self):
        rho = er.random_density(2, 2, 3, 77)
        res = er.extension_measure(rho, CONC, SMALL)
        recomputed = CONC.evaluate(er.average_schmidt(res.best_ensemble))
        assert abs(res.value - recomputed) <= 1e-12
        assert er.trace_distance(res.best_ensemble.average_state(), rho) <= 1e-8

    def test_bad_budget_rejected(self):
        rho = er.random_density(2, 2, 3, 1)
        with pytest.raises(ValueError, match="below rank"):
            er.extension_measure(rho, CONC, OptimizerConfig(restarts=2, max_ensemble_size=2))


class TestConvexRoof:
    def test_pure_state_exact(self):
        psi = er.random_pure(2, 2, 9)
        res = er.convex_roof(psi.density(), ENT, SMALL)
        assert res.value == pytest.approx(ENT.evaluate(psi.schmidt_vector()), abs=1e-9)

    def test_concurrence_matches_wootters(self):
        cfg = OptimizerConfig(restarts=12, max_ensemble_size=8, seed=5)
        for seed in range(3):
            rho = er.random_density(2, 2, 2 + seed, 400 + seed)
            c = er.wootters_concurrence(rho)
            res = er.convex_roof(rho, CONC, cfg)
            assert -1e-9 <= res.value - c <= 2e-2

    def test_geometric_matches_derived_oracle(self):
        cfg = OptimizerConfig(restarts=12, max_ensemble_size=8, seed=5)
        for seed in range(3):
            rho = er.random_density(2, 2, 2 + seed, 500 + seed)
            oracle = geometric_roof_oracle(er.wootters_concurrence(rho))
            res = er.convex_roof(rho, GEO, cfg)
            assert -1e-9 <= res.value - oracle <= 2e-2

    def test_value_matches_reported_ensemble(self):
        rho = er.random_density(2, 2, 2, 88)
        res = er.convex_roof(rho, ENT, SMALL)
        recomputed = sum(p * ENT.evaluate(psi.schmidt_vector()) for p, psi in res.best_ensemble.members)
        assert abs(res.value - recomputed) <= 1e-12


class TestEstimatorInvariants:
    def test_extension_dominates_roof(self):
        for seed in range(3):
            rho = er.random_density(2, 2, 2 + seed, 600 + seed)
            for m in (CONC, GEO, ENT):
                ext = er.extension_measure(rho, m, SMALL).value
                roof = er.convex_roof(rho, m, SMALL).value
                assert ext >= roof - 1e-6

    def test_bit_identical_determinism(self):
        rho = er.random_density(2, 2, 3, 555)
        r1 = er.extension_measure(rho, CONC, SMALL)
        r2 = er.extension_measure(rho, CONC, SMALL)
        assert r1.value == r2.value
        assert r1.evaluations == r2.evaluations
        assert len(r1.best_ensemble) == len(r2.best_ensemble)
        for (w1, p1), (w2, p2) in zip(r1.best_ensemble.members, r2.best_ensemble.members):
            assert w1 == w2
            assert np.array_equal(p1.amplitudes, p2.amplitudes)

    def test_monotone_in_budgets(self):
        rho = er.random_density(2, 2, 3, 666)
        values = {}
        for restarts in (2, 4, 8):
            for cap in (3, 5, 7):
                cfg = OptimizerConfig(restarts=restarts, max_ensemble_size=cap, seed=1)
                values[(restarts, cap)] = er.extension_measure(rho, CONC, cfg).value
        for restarts in (2, 4, 8):
            assert values[(restarts, 5)] <= values[(restarts, 3)]
            assert values[(restarts, 7)] <= values[(restarts, 5)]
        for cap in (3, 5, 7):
            assert values[(4, cap)] <= values[(2, cap)]
            assert values[(8, cap)] <= values[(4, cap)]

    def test_seed_recorded(self):
        rho = er.random_density(2, 2, 2, 777)
        res = er.extension_measure(rho, CONC, SMALL)
        assert res.seed == SMALL.seed
        assert res.best_size >= 2


class TestUnilocalChannels:
    def test_completeness_enforced(self):
        with pytest.raises(StateValidationError, match="completeness"):
            KrausChannel((np.eye(2) * 0.5,), side="B")

    def test_identity_channel_single_branch(self):
        rho = er.random_density(2, 2, 3, 4)
        branches = er.apply_unilocal_channel(rho, KrausChannel((np.eye(2),), side="B"))
        assert len(branches) == 1
        prob, out = branches[0]
        assert prob == pytest.approx(1.0, abs=1e-12)
        assert er.trace_distance(out, rho) <= 1e-12

    def test_measurement_on_bell(self):
        proj0 = np.diag([1.0, 0.0]).astype(complex)
        proj1 = np.diag([0.0, 1.0]).astype(complex)
        branches = er.apply_unilocal_channel(bell().density(), KrausChannel((proj0, proj1), side="B"))
        assert len(branches) == 2
        for prob, out in branches:
            assert prob == pytest.approx(0.5, abs=1e-12)
            assert out.purity() == pytest.approx(1.0, abs=1e-10)
            assert er.wootters_concurrence(out) <= 1e-10

    def test_random_kraus_probabilities(self):
        rng = np.random.default_rng(5)
        for _ in range(10):
            x = rng.uniform(0.2, 0.8)
            k1 = np.diag([np.sqrt(x), np.sqrt(1 - x)]).astype(complex)
            k2 = np.diag([np.sqrt(1 - x), np.sqrt(x)]).astype(complex)
            u = np.linalg.qr(rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2)))[0]
            ch = KrausChannel((u @ k1, k2), side="A")
            rho = er.random_density(2, 2, int(rng.integers(2, 5)), int(rng.integers(0, 2**31)))
            branches = er.apply_unilocal_channel(rho, ch)
            assert abs(sum(p for p, _ in branches) - 1.0) <= 1e-9

    def test_side_dimension_checked(self):
        rho = er.random_density(2, 3, 2, 0)
        with pytest.raises(StateValidationError, match="does not match"):
            er.apply_unilocal_channel(rho, KrausChannel((np.eye(2),), side="B"))


class TestMonotonicityCheck:
    def test_identity_channel_zero(self):
        rho = er.random_density(2, 2, 2, 10)
        diff = er.check_monotonicity_iii(rho, CONC, KrausChannel((np.eye(2),), side="B"), SMALL)
        assert diff == 0.0

    def test_pure_projective_nonnegative(self):
        psi = er.random_pure(2, 2, 20)
        proj0 = np.diag([1.0, 0.0]).astype(complex)
        proj1 = np.diag([0.0, 1.0]).astype(complex)
        diff = er.check_monotonicity_iii(psi.density(), CONC, KrausChannel((proj0, proj1), side="B"), SMALL)
        assert diff >= -1e-9

    def test_flag_gate(self):
        rho = er.random_density(2, 2, 2, 11)
        with pytest.raises(ValueError, match="concave_f"):
            er.check_monotonicity_iii(rho, get_measure("robustness"), KrausChannel((np.eye(2),), side="B"), SMALL)


def _embedded_pure_block(psi, corner):
    mat = np.zeros((4, 4), dtype=complex)
    if corner == 0:
        mat[:2, :2] = psi.matrix
    else:
        mat[2:, 2:] = psi.matrix
    return er.PureState(4, 4, mat.reshape(-1)).density()


class TestBlockDiagonal:
    def test_symmetric_blocks(self):
        psi = er.random_pure(2, 2, 30)
        s1 = _embedded_pure_block(psi, 0)
        s2 = _embedded_pure_block(psi, 1)
        gap = er.check_block_diagonal(s1, s2, 0.5, EK2, SMALL)
        assert gap >= -1e-9

    def test_degenerate_weight(self):
        psi1 = er.random_pure(2, 2, 31)
        psi2 = er.random_pure(2, 2, 32)
        gap = er.check_block_diagonal(
            _embedded_pure_block(psi1, 0), _embedded_pure_block(psi2, 1), 1.0, EK2, SMALL
        )
        assert gap == pytest.approx(0.0, abs=1e-12)

    def test_pure_blocks_exact(self):
        rng = np.random.default_rng(33)
        for _ in range(3):
            psi1 = er.random_pure(2, 2, int(rng.integers(0, 2**31)))
            psi2 = er.random_pure(2, 2, int(rng.integers(0, 2**31)))
            gap = er.check_block_diagonal(
                _embedded_pure_block(psi1, 0),
                _embedded_pure_block(psi2, 1),
                float(rng.uniform(0.2, 0.8)),
                EK2,
                SMALL,
            )
            assert gap >= -1e-9

    def test_overlapping_supports_rejected(self):
        psi = er.random_pure(2, 2, 34)
        s1 = _embedded_pure_block(psi, 0)
        with pytest.raises(StateValidationError, match="overlap"):
            er.check_block_diagonal(s1, s1, 0.5, EK2, SMALL)

    def test_flag_gate(self):
        psi = er.random_pure(2, 2, 35)
        s1 = _embedded_pure_block(psi, 0)
        s2 = _embedded_pure_block(psi, 1)
        with pytest.raises(ValueError, match="convex_on_spectra"):
            er.check_block_diagonal(s1, s2, 0.5, CONC, SMALL)


class TestSubadditivity:
    def test_pure_input_additive(self):
        psi = er.random_pure(2, 2, 40)
        gap = er.check_subadditivity(psi.density(), ENT, OptimizerConfig(restarts=3, seed=2))
        assert abs(gap) <= 1e-6

    def test_separable_diagonal(self):
        rho = er.DensityMatrix(2, 2, np.diag([0.6, 0, 0, 0.4]).astype(complex))
        gap = er.check_subadditivity(rho, ENT, OptimizerConfig(restarts=3, seed=2))
        assert abs(gap) <= 5e-2

    def test_rank_gate(self):
        rho = er.random_density(2, 2, 3, 41)
        with pytest.raises(ValueError, match="rank"):
            er.check_subadditivity(rho, ENT, SMALL)

    def test_flag_gate(self):
        rho = er.random_density(2, 2, 2, 42)
        with pytest.raises(ValueError, match="subadditive"):
            er.check_subadditivity(rho, CONC, SMALL)
