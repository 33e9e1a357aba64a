import numpy as np
import pytest

import entroof as er
from entroof.ensemble import DecompositionParam, decompose, identity_param, random_isometry
from entroof.states import StateValidationError


class TestDecompositionParam:
    def test_orthonormality_enforced(self):
        with pytest.raises(StateValidationError, match="orthonormal"):
            DecompositionParam(np.ones((3, 2)))

    def test_shape_enforced(self):
        with pytest.raises(StateValidationError, match="m >= n"):
            DecompositionParam(np.eye(3)[:2])

    def test_random_isometry_is_valid(self):
        rng = np.random.default_rng(0)
        for _ in range(10):
            m, n = int(rng.integers(2, 8)), int(rng.integers(1, 4))
            if m < n:
                m, n = n, m
            DecompositionParam(random_isometry(m, n, rng))


class TestDecompose:
    def test_identity_gives_eigendecomposition(self):
        rho = er.random_density(2, 2, 3, 5)
        q, e = rho.eigensystem()
        ens = decompose(rho, identity_param(3))
        assert len(ens) == 3
        for (w, psi), qi in zip(ens.members, q):
            assert w == pytest.approx(qi, abs=1e-12)
        assert er.trace_distance(ens.average_state(), rho) <= 1e-10

    def test_duplicated_rows(self):
        rho = er.random_density(2, 2, 2, 6)
        dup = np.vstack([np.eye(2), np.eye(2)]).astype(complex) / np.sqrt(2)
        ens = decompose(rho, DecompositionParam(dup))
        assert len(ens) == 4
        assert er.trace_distance(ens.average_state(), rho) <= 1e-10

    def test_random_param_reconstructs(self):
        rng = np.random.default_rng(7)
        prod = er.pure_from_schmidt([1.0], 2, 2)
        bell = er.pure_from_schmidt([0.5, 0.5], 2, 2)
        rho = er.Ensemble(((0.5, prod), (0.5, bell))).average_state()
        n = rho.rank()
        for _ in range(10):
            m = int(rng.integers(n, 2 * n + 2))
            ens = decompose(rho, DecompositionParam(random_isometry(m, n, rng)))
            assert er.trace_distance(ens.average_state(), rho) <= 1e-10

    def test_rank_mismatch_rejected(self):
        rho = er.random_density(2, 2, 2, 8)
        with pytest.raises(StateValidationError, match="rank"):
            decompose(rho, identity_param(3))


class TestEnsembleType:
    def test_weights_must_sum_to_one(self):
        psi = er.random_pure(2, 2, 0)
        with pytest.raises(StateValidationError, match="sum deviates"):
            er.Ensemble(((0.5, psi), (0.4, psi)))

    def test_weights_positive(self):
        psi = er.random_pure(2, 2, 0)
        with pytest.raises(StateValidationError, match="positive"):
            er.Ensemble(((1.5, psi), (-0.5, psi)))
