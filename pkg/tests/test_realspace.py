import warnings

import numpy as np
import pytest
import scipy.linalg as sla
from hypothesis import given, settings
from hypothesis import strategies as st

from mipt_qfi import ed
from mipt_qfi.errors import NumericalFault
from mipt_qfi.pfaffian import pfaffian
from mipt_qfi.realspace import (
    GaussianState,
    _kernel,
    energy_expectation,
    entanglement_depth,
    evolve,
    init_state,
    majorana_correlations,
    witness_qfi,
    xx_correlator,
)
from mipt_qfi.spectral import ModelParams


def evolved(n, gamma, t, dt=0.05, kind="vacuum", h0=0.0):
    p = ModelParams(n, 0.0, gamma, "open")
    return evolve(init_state(n, kind, h=h0), p, dt, int(round(t / dt)))


class TestPfaffian:
    def test_two_by_two(self):
        assert pfaffian(np.array([[0.0, 2.5], [-2.5, 0.0]])) == pytest.approx(2.5)

    def test_block_multiplicativity(self):
        m = np.zeros((4, 4))
        m[0, 1], m[1, 0] = 2.0, -2.0
        m[2, 3], m[3, 2] = 3.0, -3.0
        assert pfaffian(m) == pytest.approx(6.0)

    def test_squares_to_determinant(self):
        rng = np.random.default_rng(11)
        x = rng.normal(size=(8, 8)) + 1j * rng.normal(size=(8, 8))
        a = x - x.T
        assert pfaffian(a) ** 2 == pytest.approx(np.linalg.det(a), rel=1e-10)

    @given(st.integers(min_value=1, max_value=6), st.integers(min_value=0, max_value=2**31 - 1))
    @settings(max_examples=30, deadline=None)
    def test_squares_to_determinant_random(self, half, seed):
        rng = np.random.default_rng(seed)
        n = 2 * half
        x = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
        a = x - x.T
        det = np.linalg.det(a)
        assert pfaffian(a) ** 2 == pytest.approx(det, rel=1e-8)

    def test_rejects_odd_dimension(self):
        with pytest.raises(ValueError):
            pfaffian(np.zeros((3, 3)))

    def test_rejects_asymmetric(self):
        with pytest.raises(ValueError):
            pfaffian(np.array([[0.0, 1.0], [1.0, 0.0]]))

    def test_singular_matrix_gives_zero(self):
        assert pfaffian(np.zeros((4, 4))) == 0


class TestInitState:
    def test_vacuum_has_no_occupation(self):
        st_ = init_state(6)
        np.testing.assert_allclose(np.diag(st_.V @ st_.V.conj().T), 0.0, atol=1e-14)

    def test_vacuum_witness_is_separable_bound(self):
        assert witness_qfi(init_state(4)) == pytest.approx(4.0, abs=1e-12)

    def test_ground_energy_matches_dense(self):
        st_ = init_state(8, "hermitian-ground", h=0.5)
        p = ModelParams(8, 0.5, 0.0, "open")
        _, e_dense = ed.dense_ground_state(p)
        assert energy_expectation(st_, p) == pytest.approx(e_dense, abs=1e-8)

    def test_degenerate_ground_is_signaled(self):
        with pytest.warns(UserWarning):
            init_state(8, "hermitian-ground", h=0.0)

    def test_rejects_unknown_kind(self):
        with pytest.raises(ValueError):
            init_state(8, "thermal")

    def test_frame_is_orthonormal(self):
        st_ = init_state(10, "hermitian-ground", h=0.7)
        assert st_.orthonormality_defect() < 1e-12


class TestEvolve:
    def test_unitary_step_before_renormalization(self):
        p = ModelParams(8, 0.0, 0.0, "open")
        step = sla.expm(-1j * 0.05 * _kernel(p))
        w = init_state(8, "hermitian-ground", h=0.5).frame()
        for _ in range(40):
            w = step @ w
        defect = np.max(np.abs(w.conj().T @ w - np.eye(8)))
        assert defect < 1e-10

    def test_occupations_match_dense(self):
        st_ = evolved(6, 1.5, 2.0)
        n_gauss = np.real(np.diag(st_.V @ st_.V.conj().T))
        p = ModelParams(6, 0.0, 1.5, "open")
        n_dense = ed.occupation_profile(ed.evolve_dense(p, 2.0, ed.dense_vacuum(6)))
        np.testing.assert_allclose(n_gauss, n_dense, atol=1e-7)

    def test_invariants_hold_after_every_step(self):
        p = ModelParams(6, 2.0, 3.0, "open")
        state = init_state(6)
        for _ in range(25):
            state = evolve(state, p, 0.1, 1)
            assert state.orthonormality_defect() < 1e-10
            z = state.pairing_matrix()
            assert np.max(np.abs(z + z.T)) < 1e-10

    def test_step_size_only_sets_renormalization_cadence(self):
        a = evolved(8, 1.5, 2.0, dt=0.05)
        b = evolved(8, 1.5, 2.0, dt=0.025)
        fa, fb = witness_qfi(a), witness_qfi(b)
        assert abs(fa - fb) < 1e-10
        na = np.diag(a.V @ a.V.conj().T)
        nb = np.diag(b.V @ b.V.conj().T)
        assert np.max(np.abs(na - nb)) < 1e-10

    def test_rejects_periodic_boundary_and_bad_dt(self):
        state = init_state(6)
        with pytest.raises(ValueError):
            evolve(state, ModelParams(6, 0.0, 1.0, "periodic"), 0.05, 10)
        with pytest.raises(ValueError):
            evolve(state, ModelParams(6, 0.0, 1.0, "open"), -0.1, 10)
        with pytest.raises(ValueError):
            evolve(init_state(8), ModelParams(6, 0.0, 1.0, "open"), 0.05, 10)


class TestCorrelators:
    def test_vacuum_xx_vanishes(self):
        st_ = init_state(6)
        for i in range(5):
            for j in range(i + 1, 6):
                assert abs(xx_correlator(st_, i, j)) < 1e-14

    def test_near_critical_ground_nearest_neighbor_matches_dense(self):
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            st_ = init_state(8, "hermitian-ground", h=1e-3)
        p = ModelParams(8, 1e-3, 0.0, "open")
        dst, _ = ed.dense_ground_state(p)
        for i in range(7):
            a = xx_correlator(st_, i, i + 1)
            b = ed.xx_correlator_dense(dst, i, i + 1)
            assert abs(a - b) < 1e-7

    def test_reflection_symmetry(self):
        st_ = evolved(8, 1.2, 1.5)
        n = 8
        for i, j in [(0, 3), (1, 5), (2, 6)]:
            a = xx_correlator(st_, i, j)
            b = xx_correlator(st_, n - 1 - j, n - 1 - i)
            assert a == pytest.approx(b, abs=1e-10)

    def test_values_are_physical(self):
        st_ = evolved(8, 0.75, 3.0)
        for i in range(7):
            for j in range(i + 1, 8):
                val = xx_correlator(st_, i, j)
                assert abs(val.imag) <= 1e-8
                assert abs(val.real) <= 1 + 1e-8

    def test_index_validation(self):
        st_ = init_state(6)
        for i, j in [(3, 3), (4, 2), (-1, 2), (0, 6)]:
            with pytest.raises(ValueError):
                xx_correlator(st_, i, j)

    def test_majorana_matrix_antisymmetric_with_pfaffian_determinant_pairs(self):
        st_ = evolved(6, 2.0, 1.0)
        g = majorana_correlations(st_)
        assert np.max(np.abs(g + g.T)) < 1e-10
        rng = np.random.default_rng(3)
        for _ in range(4):
            sub = np.sort(rng.choice(12, size=6, replace=False))
            block = g[np.ix_(sub, sub)]
            det = np.linalg.det(block)
            assert pfaffian(block) ** 2 == pytest.approx(det, rel=1e-8, abs=1e-12)


class TestWitnessQfi:
    @pytest.mark.parametrize("gamma", [0.75, 4.5])
    def test_matches_dense_variance(self, gamma):
        p = ModelParams(8, 0.0, gamma, "open")
        st_ = evolved(8, gamma, 2.0)
        dense = 4.0 * ed.sx_variance_dense(ed.evolve_dense(p, 2.0, ed.dense_vacuum(8)))
        assert witness_qfi(st_) == pytest.approx(dense, rel=1e-6)

    def test_bounded_by_heisenberg_ceiling(self):
        for gamma, t in [(0.75, 1.0), (4.5, 3.0)]:
            st_ = evolved(8, gamma, t)
            f = witness_qfi(st_)
            assert 0.0 <= f <= 64.0 + 1e-9

    def test_ground_start_is_ghz_ceiling(self):
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            st_ = init_state(8, "hermitian-ground", h=0.0)
        assert witness_qfi(st_) == pytest.approx(64.0, rel=1e-10)


class TestCostEnvelope:
    def test_large_chain_witness_fits_single_core_budget(self):
        import time

        # warm any jit compilation on a small case first
        witness_qfi(init_state(4))
        p = ModelParams(128, 0.0, 0.75, "open")
        state = evolve(init_state(128), p, 0.05, 20)
        start = time.perf_counter()
        f = witness_qfi(state)
        elapsed = time.perf_counter() - start
        assert f > 0
        assert elapsed < 60.0


class TestEntanglementDepth:
    def test_separable_bound_certifies_nothing(self):
        assert entanglement_depth(16.0, 16) == 1

    def test_fractional_ratio(self):
        assert entanglement_depth(3.5 * 16, 16) == 4

    def test_ghz_ceiling_certifies_full_depth(self):
        assert entanglement_depth(16.0**2, 16) == 16

    def test_integer_ratio_boundary(self):
        assert entanglement_depth(2.0 * 16, 16) == 2

    def test_rejects_negative(self):
        with pytest.raises(ValueError):
            entanglement_depth(-1.0, 8)

    @given(st.floats(min_value=0.0, max_value=1e4), st.integers(min_value=2, max_value=64).map(lambda x: 2 * x))
    @settings(max_examples=60, deadline=None)
    def test_certified_bound_always_consistent(self, f, n):
        depth = entanglement_depth(f, n)
        m = depth - 1
        assert 1 <= depth <= n
        if m >= 1:
            assert f / n > m - 1e-9
