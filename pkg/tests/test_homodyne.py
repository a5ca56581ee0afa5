"""Weak simulation of encoded Clifford circuits by homodyne sampling."""

import math

import numpy as np
import pytest
from scipy import stats

from quditphase import (
    Domain,
    GateKind,
    GaussianCircuit,
    QuditSystem,
    ValidationError,
    computational_state,
    haar_random_state,
    logical_clifford_symplectic,
    lp_norm,
    plus_state,
    pseudo_probability_report,
    simulate_homodyne,
    simulate_homodyne_batch,
    t_state,
    x_distribution,
)


def spacing(d):
    return math.sqrt(math.pi / (2 * d))


def test_fourier_symplectic_is_rotation():
    s = QuditSystem(2, 1)
    g = logical_clifford_symplectic(s, GateKind.FOURIER)
    assert np.array_equal(g.s_matrix, np.array([[0.0, 1.0], [-1.0, 0.0]]))
    assert not np.any(g.displacement)
    assert g.integer_map is not None


def test_shift_displacement():
    for d in (2, 3):
        s = QuditSystem(d, 1)
        g = logical_clifford_symplectic(s, GateKind.SHIFT)
        assert np.array_equal(g.s_matrix, np.eye(2))
        assert abs(g.displacement[0] - 2 * spacing(d)) < 1e-12
        assert g.displacement[1] == 0.0


def test_phase_gate_shear():
    s = QuditSystem(3, 1)
    g = logical_clifford_symplectic(s, GateKind.PHASE)
    assert np.array_equal(g.s_matrix, np.array([[1.0, 0.0], [-1.0, 1.0]]))
    # odd d carries the half-shift correction on the momentum leg
    assert abs(g.displacement[1] - spacing(3)) < 1e-12


def test_sum_gate_four_by_four():
    s = QuditSystem(2, 2)
    g = logical_clifford_symplectic(s, GateKind.SUM, (0, 1))
    om = np.block([[np.zeros((2, 2)), -np.eye(2)], [np.eye(2), np.zeros((2, 2))]])
    assert np.max(np.abs(g.s_matrix.T @ om @ g.s_matrix - om)) < 1e-12
    assert np.array_equal(g.integer_s, g.s_matrix.astype(int))


def test_non_symplectic_rejected():
    s = QuditSystem(2, 1)
    with pytest.raises(ValidationError):
        GaussianCircuit(s, np.diag([1.0, 2.0]), np.zeros(2))


def test_samples_land_on_the_lattice():
    s = QuditSystem(2, 1)
    g = logical_clifford_symplectic(s, GateKind.FOURIER)
    c = spacing(2)
    for smp in simulate_homodyne_batch(plus_state(s), g, 50, seed=3):
        assert smp.lattice_index is not None
        for xi, ki in zip(smp.x, smp.lattice_index):
            assert xi == c * ki
        assert smp.branch == (0, 0)
        assert smp.sign in (-1, 1)


def test_sample_weight_is_norm_times_prefactor():
    s = QuditSystem(2, 1)
    rho = computational_state(s, 0)
    g = GaussianCircuit.identity(s)
    full_norm = lp_norm(x_distribution(rho, Domain.FULL), 1.0)
    want = full_norm * math.sqrt(2 / (8 * math.pi))
    smp = simulate_homodyne(rho, g, seed=0)
    assert abs(smp.weight - want) < 1e-12
    assert abs(smp.weight - 1.1283791670955123) < 1e-12


def test_signs_track_the_coefficient():
    s = QuditSystem(2, 1)
    rho = t_state()
    dist = x_distribution(rho, Domain.FULL)
    g = GaussianCircuit.identity(s)
    for smp in simulate_homodyne_batch(rho, g, 40, seed=8):
        v = dist.value(smp.sampled_point)
        assert abs(v) > 1e-12
        assert smp.sign == (1 if v > 0 else -1)


def test_batch_reproducibility():
    s = QuditSystem(3, 1)
    g = logical_clifford_symplectic(s, GateKind.PHASE)
    rho = plus_state(s)
    a = simulate_homodyne_batch(rho, g, 10, seed=4)
    b = simulate_homodyne_batch(rho, g, 10, seed=4)
    assert a == b
    c = simulate_homodyne_batch(rho, g, 10, seed=5)
    assert a != c
    assert simulate_homodyne(rho, g, seed=4) == a[0]


def test_sampled_points_follow_the_coefficient_magnitudes():
    s = QuditSystem(2, 1)
    rho = haar_random_state(s, np.random.default_rng(21))
    dist = x_distribution(rho, Domain.FULL)
    mags = np.abs(dist.values.ravel())
    q = mags / mags.sum()
    samples = simulate_homodyne_batch(rho, GaussianCircuit.identity(s), 4000, seed=1)
    counts = np.zeros_like(q)
    for smp in samples:
        flat = int(np.ravel_multi_index(tuple(smp.sampled_point.vector()), dist.values.shape))
        counts[flat] += 1
    keep = q > 1e-12
    assert counts[~keep].sum() == 0  # never samples off the support
    chi2 = float(np.sum((counts[keep] - 4000 * q[keep]) ** 2 / (4000 * q[keep])))
    p = 1 - stats.chi2.cdf(chi2, keep.sum() - 1)
    assert p > 0.01


def test_generic_s_matrix_has_no_lattice_index():
    s = QuditSystem(2, 1)
    shear = GaussianCircuit(s, np.array([[1.0, 0.0], [0.5, 1.0]]), np.zeros(2))
    smp = simulate_homodyne(computational_state(s, 0), shear, seed=0)
    assert smp.lattice_index is None


def test_pseudo_probability_report_shape():
    s = QuditSystem(2, 1)
    rho = computational_state(s, 0)
    g = GaussianCircuit.identity(s)
    report = pseudo_probability_report(rho, g, 500, seed=2)
    assert report.not_normalizable
    assert report.num_samples == 500
    assert sum(e.count for e in report.entries) == 500
    # the 0 codeword only ever reads out on the even position sublattice
    for e in report.entries:
        assert e.lattice_index is not None
        assert e.lattice_index[0] % 2 == 0


def test_report_with_zero_samples():
    s = QuditSystem(2, 1)
    report = pseudo_probability_report(
        plus_state(s), GaussianCircuit.identity(s), 0, seed=0
    )
    assert report.entries == ()
    assert report.num_samples == 0
