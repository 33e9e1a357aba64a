import numpy as np
import pytest

import entroof as er
from entroof.states import StateValidationError


def brute_force_majorizes(x, y, slack=1e-9):
    """Independent plain-Python partial-sum oracle."""
    xs = sorted(list(x), reverse=True)
    ys = sorted(list(y), reverse=True)
    n = max(len(xs), len(ys))
    xs += [0.0] * (n - len(xs))
    ys += [0.0] * (n - len(ys))
    sx = sy = 0.0
    for i in range(n):
        sx += xs[i]
        sy += ys[i]
        if sx > sy + slack:
            return False
    return True


def bell():
    return er.pure_from_schmidt([0.5, 0.5], 2, 2)


class TestSchmidtVector:
    def test_sorted_on_construction(self):
        sv = er.SchmidtVector(np.array([0.2, 0.5, 0.3]))
        np.testing.assert_allclose(sv.entries, [0.5, 0.3, 0.2])

    def test_sum_enforced(self):
        with pytest.raises(StateValidationError, match="sum deviates"):
            er.SchmidtVector(np.array([0.5, 0.4]))

    def test_range_enforced(self):
        with pytest.raises(StateValidationError, match="outside"):
            er.SchmidtVector(np.array([1.2, -0.2]))


class TestMajorizes:
    def test_uniform_below_spread(self):
        assert er.majorizes([0.5, 0.5], [0.7, 0.3])

    def test_spread_not_below_uniform(self):
        assert not er.majorizes([0.7, 0.3], [0.5, 0.5])

    def test_partial_sum_example(self):
        assert er.majorizes([0.4, 0.3, 0.3], [0.5, 0.25, 0.25])

    def test_brute_force_agreement(self):
        rng = np.random.default_rng(11)
        for _ in range(1000):
            x = np.sort(rng.dirichlet(np.ones(int(rng.integers(1, 7)))))[::-1]
            y = np.sort(rng.dirichlet(np.ones(int(rng.integers(1, 7)))))[::-1]
            assert er.majorizes(x, y) == brute_force_majorizes(x, y)

    def test_reflexive_transitive(self):
        rng = np.random.default_rng(12)
        for _ in range(100):
            d = int(rng.integers(2, 6))
            z = np.sort(rng.dirichlet(np.ones(d)))[::-1]
            perms = [rng.permutation(d) for _ in range(3)]
            wts = rng.dirichlet(np.ones(3))
            y = np.sort(sum(w * z[p] for w, p in zip(wts, perms)))[::-1]
            perms = [rng.permutation(d) for _ in range(3)]
            wts = rng.dirichlet(np.ones(3))
            x = np.sort(sum(w * y[p] for w, p in zip(wts, perms)))[::-1]
            assert er.majorizes(z, z)
            assert er.majorizes(y, z) and er.majorizes(x, y) and er.majorizes(x, z)

    def test_uniform_is_bottom(self):
        rng = np.random.default_rng(13)
        for _ in range(100):
            d = int(rng.integers(1, 9))
            v = np.sort(rng.dirichlet(np.ones(d)))[::-1]
            assert er.majorizes(np.full(d, 1.0 / d), v)

    def test_tail_sum_bridge(self):
        rng = np.random.default_rng(14)
        for _ in range(200):
            d = int(rng.integers(2, 6))
            y = np.sort(rng.dirichlet(np.ones(d)))[::-1]
            perms = [rng.permutation(d) for _ in range(3)]
            wts = rng.dirichlet(np.ones(3))
            x = np.sort(sum(w * y[p] for w, p in zip(wts, perms)))[::-1]
            assert er.majorizes(x, y)
            for k in range(1, d + 1):
                assert x[k - 1 :].sum() >= y[k - 1 :].sum() - 1e-9


class TestNielsenConvertible:
    def test_bell_reaches_everything(self):
        rng = np.random.default_rng(15)
        for _ in range(20):
            phi = er.random_pure(2, 2, int(rng.integers(0, 2**31)))
            assert er.nielsen_convertible(bell(), phi)

    def test_product_cannot_reach_bell(self):
        prod = er.pure_from_schmidt([1.0], 2, 2)
        assert not er.nielsen_convertible(prod, bell())

    def test_ordered_pair(self):
        src = er.pure_from_schmidt([0.6, 0.4], 2, 2)
        dst = er.pure_from_schmidt([0.8, 0.2], 2, 2)
        assert er.nielsen_convertible(src, dst)
        assert not er.nielsen_convertible(dst, src)


class TestAverageSchmidt:
    def test_singleton(self):
        psi = er.random_pure(2, 3, 7)
        avg = er.average_schmidt(er.Ensemble(((1.0, psi),)))
        np.testing.assert_allclose(avg.entries, np.sort(psi.schmidt_vector())[::-1], atol=1e-12)

    def test_half_product_half_bell(self):
        prod = er.pure_from_schmidt([1.0], 2, 2)
        ens = er.Ensemble(((0.5, prod), (0.5, bell())))
        np.testing.assert_allclose(er.average_schmidt(ens).entries, [0.75, 0.25], atol=1e-12)

    def test_demo_mixture_weights(self):
        _, p1, p2, mixture = er.demo_states()
        avg = er.average_schmidt(mixture)
        expect = 0.25 * np.sort(p1.schmidt_vector())[::-1] + 0.75 * np.sort(p2.schmidt_vector())[::-1]
        np.testing.assert_allclose(avg.entries, np.sort(expect)[::-1], atol=1e-12)

    def test_sorted_output(self):
        rng = np.random.default_rng(16)
        for _ in range(50):
            members = []
            n = int(rng.integers(1, 5))
            for w in rng.dirichlet(np.ones(n)):
                members.append((float(w), er.random_pure(3, 3, int(rng.integers(0, 2**31)))))
            avg = er.average_schmidt(er.Ensemble(tuple(members)))
            assert np.all(np.diff(avg.entries) <= 1e-15)

    def test_empty_rejected(self):
        with pytest.raises(StateValidationError):
            er.Ensemble(())


class TestEnsembleConvertible:
    def test_bell_into_mixture(self):
        prod = er.pure_from_schmidt([1.0], 2, 2)
        ens = er.Ensemble(((0.5, prod), (0.5, bell())))
        assert er.ensemble_convertible(bell(), ens)

    def test_reflexive(self):
        psi = er.random_pure(2, 2, 21)
        assert er.ensemble_convertible(psi, er.Ensemble(((1.0, psi),)))

    def test_cannot_gain_entanglement(self):
        src = er.pure_from_schmidt([0.9, 0.1], 2, 2)
        assert not er.ensemble_convertible(src, er.Ensemble(((1.0, bell()),)))

    def test_matches_majorizes_composition(self):
        rng = np.random.default_rng(17)
        for _ in range(50):
            psi = er.random_pure(2, 3, int(rng.integers(0, 2**31)))
            members = []
            n = int(rng.integers(1, 4))
            for w in rng.dirichlet(np.ones(n)):
                members.append((float(w), er.random_pure(2, 3, int(rng.integers(0, 2**31)))))
            ens = er.Ensemble(tuple(members))
            direct = er.ensemble_convertible(psi, ens)
            composed = er.majorizes(psi.schmidt_vector(), er.average_schmidt(ens))
            oracle = brute_force_majorizes(psi.schmidt_vector(), er.average_schmidt(ens).entries)
            assert direct == composed == oracle


class TestPureFromSchmidt:
    def test_single_coefficient(self):
        psi = er.pure_from_schmidt([1.0], 2, 2)
        np.testing.assert_allclose(psi.amplitudes, [1, 0, 0, 0], atol=1e-12)

    def test_bell(self):
        np.testing.assert_allclose(
            er.pure_from_schmidt([0.5, 0.5], 2, 2).amplitudes,
            np.array([1, 0, 0, 1]) / np.sqrt(2),
            atol=1e-12,
        )

    def test_round_trip(self):
        psi = er.pure_from_schmidt([0.75, 0.25], 2, 2)
        np.testing.assert_allclose(psi.schmidt_vector(), [0.75, 0.25], atol=1e-12)

    def test_too_long_rejected(self):
        with pytest.raises(ValueError, match="does not fit"):
            er.pure_from_schmidt([0.5, 0.3, 0.2], 2, 4)
