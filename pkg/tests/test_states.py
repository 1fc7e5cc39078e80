import math

import numpy as np
import pytest

from typmix.states import (
    EnsembleSpec,
    check_density_matrix,
    check_pure_state,
    haar_moment_mean,
    haar_moment_var,
    induced_moment_var,
    logical_overlap,
    logical_purity,
    sample_haar_pure,
    sample_haar_pure_batch,
    sample_induced,
    substream,
)


class TestSampling:
    def test_haar_vector_normalized(self, rng):
        psi = sample_haar_pure(16, rng)
        assert np.linalg.norm(psi) == pytest.approx(1.0, abs=1e-12)
        check_pure_state(psi)

    def test_substreams_reproducible_and_distinct(self):
        a = sample_haar_pure(8, substream(3, 5))
        b = sample_haar_pure(8, substream(3, 5))
        c = sample_haar_pure(8, substream(3, 6))
        assert np.array_equal(a, b)
        assert not np.allclose(a, c)

    def test_induced_is_density(self, rng):
        check_density_matrix(sample_induced(4, 3, rng))

    def test_induced_size_guard(self, rng):
        with pytest.raises(ValueError, match="exceeds"):
            sample_induced(128, 64, rng)

    def test_dimension_guard(self, rng):
        with pytest.raises(ValueError):
            sample_haar_pure(1, rng)

    def test_invalid_density_rejected(self):
        with pytest.raises(ValueError, match="negative"):
            check_density_matrix(np.diag([1.5, -0.5]))
        with pytest.raises(ValueError, match="trace"):
            check_density_matrix(np.diag([0.5, 0.4]))


class TestMoments:
    def test_projector_moments(self):
        # O = |0><0| on C^4: mean 1/4, variance (1 - 1/4)/20
        o = np.diag([1.0, 0, 0, 0])
        assert haar_moment_mean(o) == pytest.approx(0.25)
        assert haar_moment_var(o) == pytest.approx(0.75 / 20)

    def test_induced_reduces_to_haar_at_db_one(self, rng):
        a = rng.standard_normal((5, 5))
        o = a + a.T
        assert induced_moment_var(o, 1) == pytest.approx(haar_moment_var(o))

    def test_haar_mean_monte_carlo(self):
        rng = substream(11, 0)
        o = np.diag(np.arange(6.0))
        psi = sample_haar_pure_batch(6, 40000, rng)
        a = np.abs(psi) ** 2 @ np.diag(o)
        se = a.std(ddof=1) / math.sqrt(len(a))
        assert abs(a.mean() - haar_moment_mean(o)) <= 4 * se
        assert abs(a.var(ddof=1) - haar_moment_var(o)) <= 4 * ((a - a.mean()) ** 2).std() / math.sqrt(len(a))


class TestLogical:
    def test_product_state_overlap(self):
        psi = np.kron([1, 0], np.ones(4) / 2).astype(complex)
        assert logical_overlap(psi, (2, 4)) == pytest.approx(1.0)
        assert logical_purity(psi, (2, 4)) == pytest.approx(1.0)

    def test_maximally_entangled_is_mixed(self):
        psi = np.zeros(8, dtype=complex)
        psi[0] = psi[5] = 1 / math.sqrt(2)
        assert logical_overlap(psi, (2, 4)) == pytest.approx(0.0, abs=1e-14)
        assert logical_purity(psi, (2, 4)) == pytest.approx(0.5)

    def test_purity_mean(self):
        rng = substream(5, 0)
        pur = logical_purity(sample_haar_pure_batch(16, 20000, rng), (2, 8))
        se = pur.std(ddof=1) / math.sqrt(len(pur))
        assert abs(pur.mean() - (2 + 8) / (2 * 8 + 1)) <= 4 * se

    def test_dims_checked(self):
        with pytest.raises(ValueError):
            logical_overlap(np.ones(6) / math.sqrt(6), (2, 4))


class TestEnsembleSpec:
    def test_basis_members(self):
        spec = EnsembleSpec("basis", 4)
        assert np.array_equal(spec.sample(2), np.eye(4)[2])

    def test_member_independent_of_order(self):
        spec = EnsembleSpec("haar_pure", 8, seed=9)
        late = spec.sample(7)
        _ = [spec.sample(i) for i in range(7)]
        assert np.array_equal(spec.sample(7), late)

    def test_induced_kind_returns_matrix(self):
        assert EnsembleSpec("induced", 4, d_b=2, seed=1).sample(0).shape == (4, 4)

    def test_unknown_kind(self):
        with pytest.raises(ValueError):
            EnsembleSpec("clifford", 4)

    def test_barycenter(self):
        assert np.allclose(EnsembleSpec("haar_pure", 4).barycenter, np.eye(4) / 4)
