import numpy as np
import pytest

import entroof as er
from entroof.measures import concurrence_pure
from entroof.wootters import pure_concurrence_from_vector, takagi, wootters_concurrence


def bell_density():
    return er.pure_from_schmidt([0.5, 0.5], 2, 2).density()


def werner(p):
    mat = p * bell_density().matrix + (1 - p) * np.eye(4) / 4
    return er.DensityMatrix(2, 2, mat)


def random_separable(seed):
    rng = np.random.default_rng(seed)
    mat = np.zeros((4, 4), dtype=complex)
    for _ in range(4):
        a = rng.standard_normal(2) + 1j * rng.standard_normal(2)
        b = rng.standard_normal(2) + 1j * rng.standard_normal(2)
        v = np.kron(a / np.linalg.norm(a), b / np.linalg.norm(b))
        mat += rng.uniform(0.1, 1.0) * np.outer(v, v.conj())
    mat /= mat.trace().real
    return er.DensityMatrix(2, 2, mat)


class TestTakagi:
    def test_random_symmetric(self):
        rng = np.random.default_rng(0)
        for trial in range(100):
            n = int(rng.integers(1, 6))
            a = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
            if trial % 3 == 0:
                r = max(1, n - 1)
                b = rng.standard_normal((n, r)) + 1j * rng.standard_normal((n, r))
                a = b @ b.T
            sym = 0.5 * (a + a.T)
            vals, u = takagi(sym)
            assert np.abs(u @ np.diag(vals) @ u.T - sym).max() < 1e-8
            assert np.abs(u.conj().T @ u - np.eye(n)).max() < 1e-8
            assert np.all(vals >= 0) and np.all(np.diff(vals) <= 1e-12)

    def test_rejects_nonsymmetric(self):
        with pytest.raises(ValueError):
            takagi(np.array([[0.0, 1.0], [0.0, 0.0]]))


class TestWoottersValue:
    def test_bell(self):
        assert wootters_concurrence(bell_density()) == pytest.approx(1.0, abs=1e-10)

    def test_maximally_mixed(self):
        rho = er.DensityMatrix(2, 2, np.eye(4) / 4)
        assert wootters_concurrence(rho) == 0.0

    def test_werner_family(self):
        for p in (0.1, 1 / 3, 0.5, 0.8, 1.0):
            expect = max(0.0, (3 * p - 1) / 2)
            assert wootters_concurrence(werner(p)) == pytest.approx(expect, abs=1e-10)

    def test_pure_agreement(self):
        for seed in range(50):
            psi = er.random_pure(2, 2, seed)
            cw = wootters_concurrence(psi.density())
            assert cw == pytest.approx(concurrence_pure(psi.schmidt_vector()), abs=1e-10)

    def test_wrong_dims(self):
        with pytest.raises(ValueError, match="2x2"):
            wootters_concurrence(er.random_density(2, 3, 2, 0))


class TestWoottersEnsemble:
    def test_entangled_flat(self):
        for seed in range(30):
            rho = er.random_density(2, 2, 2 + seed % 3, seed)
            c, ens = wootters_concurrence(rho, return_ensemble=True)
            assert er.trace_distance(ens.average_state(), rho) <= 1e-9
            for _, psi in ens.members:
                assert pure_concurrence_from_vector(psi.amplitudes) == pytest.approx(c, abs=1e-7)

    def test_separable_members_are_product(self):
        for seed in range(25):
            rho = random_separable(seed)
            c, ens = wootters_concurrence(rho, return_ensemble=True)
            assert c == 0.0
            assert er.trace_distance(ens.average_state(), rho) <= 1e-9
            for _, psi in ens.members:
                assert pure_concurrence_from_vector(psi.amplitudes) <= 1e-7

    def test_separable_diagonal(self):
        rho = er.DensityMatrix(2, 2, np.diag([0.5, 0, 0, 0.5]).astype(complex))
        c, ens = wootters_concurrence(rho, return_ensemble=True)
        assert c == 0.0
        for _, psi in ens.members:
            assert pure_concurrence_from_vector(psi.amplitudes) <= 1e-10
