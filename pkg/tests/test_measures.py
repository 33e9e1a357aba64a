import numpy as np
import pytest

import entroof as er
from entroof.measures import get_measure


PHI1_VEC = np.array([25, 9, 1, 1]) / 36.0


class TestTailSums:
    def test_bell_k2(self):
        assert er.e_k([0.5, 0.5], 2) == pytest.approx(0.5, abs=1e-12)

    def test_full_sum_is_one(self):
        rng = np.random.default_rng(0)
        for _ in range(20):
            v = np.sort(rng.dirichlet(np.ones(4)))[::-1]
            assert er.e_k(v, 1) == pytest.approx(1.0, abs=1e-9)

    def test_rank4_tail(self):
        assert er.e_k(PHI1_VEC, 3) == pytest.approx(2 / 36, abs=1e-12)

    def test_out_of_range(self):
        with pytest.raises(ValueError, match="out of range"):
            er.e_k([0.5, 0.5], 3)
        with pytest.raises(ValueError, match="out of range"):
            er.e_k([0.5, 0.5], 0)


class TestEntropy:
    def test_bell(self):
        assert er.entropy_of_entanglement([0.5, 0.5]) == pytest.approx(1.0, abs=1e-12)

    def test_product(self):
        assert er.entropy_of_entanglement([1.0]) == 0.0

    def test_binary(self):
        expect = -(0.75 * np.log2(0.75) + 0.25 * np.log2(0.25))
        got = er.entropy_of_entanglement([0.75, 0.25])
        assert got == pytest.approx(expect, abs=1e-12)
        assert got == pytest.approx(0.811278, abs=1e-6)


class TestConcurrence:
    def test_bell(self):
        assert er.concurrence_pure([0.5, 0.5]) == pytest.approx(1.0, abs=1e-12)

    def test_product(self):
        assert er.concurrence_pure([1.0]) == 0.0

    def test_uneven(self):
        assert er.concurrence_pure([0.75, 0.25]) == pytest.approx(np.sqrt(0.75), abs=1e-12)


class TestGeometric:
    def test_bell(self):
        assert er.geometric_pure([0.5, 0.5]) == pytest.approx(0.5, abs=1e-12)

    def test_product(self):
        assert er.geometric_pure([1.0]) == 0.0

    def test_rank4(self):
        assert er.geometric_pure(PHI1_VEC) == pytest.approx(11 / 36, abs=1e-12)


class TestRobustness:
    def test_rank3_max_entangled(self):
        assert er.robustness_pure([1 / 3] * 3) == pytest.approx(2.0, abs=1e-12)

    def test_demo_members(self):
        _, p1, p2, _ = er.demo_states()
        assert er.robustness_pure(p1.schmidt_vector()) == pytest.approx(16 / 9, abs=1e-9)
        assert er.robustness_pure(p2.schmidt_vector()) == pytest.approx(1.5529, abs=1e-3)


class TestSchmidtRank:
    def test_bell(self):
        assert er.schmidt_rank([0.5, 0.5]) == 2

    def test_product(self):
        assert er.schmidt_rank([1.0]) == 1

    def test_demo_member(self):
        _, _, p2, _ = er.demo_states()
        assert er.schmidt_rank(p2.schmidt_vector()) == 4


class TestRegistry:
    def test_ids_resolve(self):
        for mid in er.registered_ids():
            m = get_measure(mid)
            assert m.id == mid

    def test_unknown_id(self):
        with pytest.raises(KeyError):
            get_measure("negativity")
        with pytest.raises(KeyError):
            get_measure("e_k:zero")

    def test_capability_flags(self):
        assert get_measure("entropy").concave_f and get_measure("entropy").subadditive
        assert get_measure("concurrence").concave_f
        assert get_measure("geometric").concave_f
        assert get_measure("e_k:2").concave_f and get_measure("e_k:2").convex_on_spectra
        assert not get_measure("robustness").concave_f

    def test_separable_values(self):
        sep = [1.0]
        for mid in ("entropy", "concurrence", "geometric", "robustness"):
            assert get_measure(mid).evaluate(sep) == pytest.approx(0.0, abs=1e-12)
        assert get_measure("schmidt_rank").evaluate(sep) == 1.0
        assert get_measure("e_k:1").evaluate(sep) == 1.0

    def test_batch_matches_scalar(self):
        rng = np.random.default_rng(1)
        V = np.sort(rng.dirichlet(np.ones(4), size=32), axis=1)[:, ::-1]
        for mid in ("entropy", "concurrence", "geometric", "robustness", "e_k:2", "e_k:3"):
            m = get_measure(mid)
            batch = m.batch(V)
            scalars = np.array([m.evaluate(v) for v in V])
            np.testing.assert_allclose(batch, scalars, atol=1e-12)

    def test_contrib_matches_weighted_scalar(self):
        rng = np.random.default_rng(2)
        spec = rng.dirichlet(np.ones(4), size=16) * rng.uniform(0.1, 1.0, size=(16, 1))
        spec = np.sort(spec, axis=1)[:, ::-1]
        for mid in ("entropy", "concurrence", "geometric", "e_k:2"):
            m = get_measure(mid)
            got = m.contrib(spec)
            expect = np.array([row.sum() * m.evaluate(row / row.sum()) for row in spec])
            np.testing.assert_allclose(got, expect, atol=1e-10)


class TestSchurConcavity:
    def test_mixing_cannot_decrease(self):
        rng = np.random.default_rng(3)
        ids = ["entropy", "concurrence", "geometric", "robustness", "e_k:2", "e_k:3"]
        for _ in range(200):
            d = int(rng.integers(2, 6))
            y = np.sort(rng.dirichlet(np.ones(d)))[::-1]
            perms = [rng.permutation(d) for _ in range(3)]
            wts = rng.dirichlet(np.ones(3))
            x = np.sort(sum(w * y[p] for w, p in zip(wts, perms)))[::-1]
            for mid in ids:
                m = get_measure(mid)
                assert m.evaluate(x) >= m.evaluate(y) - 1e-9

    def test_uniform_maximizes(self):
        rng = np.random.default_rng(4)
        for _ in range(100):
            d = int(rng.integers(2, 6))
            v = np.sort(rng.dirichlet(np.ones(d)))[::-1]
            uni = np.full(d, 1.0 / d)
            assert er.entropy_of_entanglement(uni) >= er.entropy_of_entanglement(v) - 1e-12
            assert er.concurrence_pure(uni) >= er.concurrence_pure(v) - 1e-12

    def test_spectrum_only_scoring(self):
        a = er.pure_from_schmidt([0.7, 0.3], 2, 2)
        b = er.pure_from_schmidt([0.7, 0.3], 4, 5)
        for mid in er.registered_ids():
            m = get_measure(mid)
            assert m.evaluate(a.schmidt_vector()) == pytest.approx(
                m.evaluate(b.schmidt_vector()), abs=1e-12
            )
