"""Stabilizer groups: construction, enumeration, sparse coefficients."""

import numpy as np
import pytest

from quditphase import (
    Domain,
    QuditSystem,
    StabilizerGroup,
    ValidationError,
    enumerate_single_qudit_groups,
    enumerate_single_qudit_stabilizers,
    format_generator_lines,
    lp_norm,
    parse_generator_lines,
    stabilizer_state,
    stabilizer_x_sparse,
    x_distribution,
)
from quditphase.stabilizer import DependentGenerators, NonCommutingGenerators

ENUM_COUNTS = {2: 6, 3: 12, 4: 24, 5: 30}


@pytest.mark.parametrize("d", [2, 3, 4, 5])
def test_enumeration_count(d):
    states = enumerate_single_qudit_stabilizers(d)
    assert len(states) == ENUM_COUNTS[d]
    # all pure, pairwise distinct
    for rho in states:
        assert abs(rho.purity() - 1) < 1e-9
    for i, a in enumerate(states):
        for b in states[i + 1 :]:
            assert np.max(np.abs(a.matrix - b.matrix)) > 1e-6


@pytest.mark.parametrize("d", [2, 3, 4, 5])
def test_sparse_matches_dense_on_all_enumerated(d):
    for group in enumerate_single_qudit_groups(d):
        for shift in range(d):
            g = StabilizerGroup(
                group.system, group.generators, ((shift,) + (0,) * (2 * group.system.n - 1))
            )
            sparse = stabilizer_x_sparse(g)
            dense = x_distribution(stabilizer_state(g), Domain.FULL)
            assert np.max(np.abs(sparse.values - dense.values)) < 1e-10


@pytest.mark.parametrize("d", [2, 3, 4, 5])
def test_sparse_support_structure(d):
    for group in enumerate_single_qudit_groups(d):
        vals = stabilizer_x_sparse(group).values
        mags = np.abs(vals.ravel())
        nz = mags[mags > 1e-12]
        assert len(nz) == 4 * d  # (4d)^n on the doubled domain, n = 1
        assert np.allclose(nz, 1.0 / d, atol=1e-12)
        restr = stabilizer_x_sparse(group).restricted_view()
        rn = np.abs(restr.ravel())
        assert (rn > 1e-12).sum() == d  # d^n restricted points
        assert abs(lp_norm(restr, 1.0) - 1.0) < 1e-12


def test_bell_pair_sparse_and_dense():
    s = QuditSystem(2, 2)
    group = StabilizerGroup(s, ((1, 1, 0, 0), (0, 0, 1, 1)), (0, 0, 0, 0))
    rho = stabilizer_state(group)
    vec = np.zeros(4)
    vec[0] = vec[3] = 1 / np.sqrt(2)
    assert np.allclose(rho.matrix, np.outer(vec, vec), atol=1e-12)
    sparse = stabilizer_x_sparse(group)
    dense = x_distribution(rho, Domain.FULL)
    assert np.max(np.abs(sparse.values - dense.values)) < 1e-10


def test_qutrit_pair_sparse_and_dense():
    s = QuditSystem(3, 2)
    group = StabilizerGroup(s, ((1, 2, 0, 0), (0, 0, 1, 1)), (0, 2, 1, 0))
    sparse = stabilizer_x_sparse(group)
    dense = x_distribution(stabilizer_state(group), Domain.FULL)
    assert np.max(np.abs(sparse.values - dense.values)) < 1e-10


def test_composite_dimension_single_generator():
    s = QuditSystem(6, 1)
    group = StabilizerGroup(s, ((1, 1),), (0, 0))
    sparse = stabilizer_x_sparse(group)
    dense = x_distribution(stabilizer_state(group), Domain.FULL)
    assert np.max(np.abs(sparse.values - dense.values)) < 1e-10


def test_phase_vectors_resolve_orthogonal_states():
    s = QuditSystem(3, 1)
    group = StabilizerGroup(s, ((0, 1),), (0, 0))
    total = np.zeros((3, 3), dtype=complex)
    states = []
    for shift in range(3):
        g = StabilizerGroup(s, group.generators, (shift, 0))
        states.append(stabilizer_state(g).matrix)
        total += states[-1]
    assert np.allclose(total, np.eye(3), atol=1e-10)
    for i in range(3):
        for j in range(i + 1, 3):
            assert abs(np.trace(states[i] @ states[j])) < 1e-10


def test_noncommuting_generators_rejected():
    # X and Z on the first qubit anticommute
    with pytest.raises(NonCommutingGenerators):
        StabilizerGroup(QuditSystem(2, 2), ((1, 0, 0, 0), (0, 0, 1, 0)), (0,) * 4)
    # wrong generator count
    with pytest.raises(ValidationError):
        StabilizerGroup(QuditSystem(2, 1), ((1, 0), (0, 1)), (0, 0))


def test_dependent_generators_rejected():
    s = QuditSystem(3, 2)
    with pytest.raises(DependentGenerators):
        StabilizerGroup(s, ((1, 0, 0, 0), (2, 0, 0, 0)), (0,) * 4)


def test_generator_text_roundtrip():
    s = QuditSystem(4, 2)
    group = StabilizerGroup(s, ((1, 0, 0, 1), (0, 1, 1, 0)), (1, 0, 3, 0))
    text = format_generator_lines(group)
    back = parse_generator_lines(s, text)
    assert back.generators == group.generators
    # the text stores eigenvalue exponents, not the raw phase vector
    assert np.max(np.abs(stabilizer_state(back).matrix - stabilizer_state(group).matrix)) < 1e-9


def test_parse_skips_comments_and_blanks():
    s = QuditSystem(2, 1)
    group = parse_generator_lines(s, "# plus state\n\n1|0|0\n")
    assert group.generators == ((1, 0),)
    rho = stabilizer_state(group)
    assert abs(rho.matrix[0, 1] - 0.5) < 1e-12


def test_parse_rejects_malformed_lines():
    s = QuditSystem(2, 1)
    with pytest.raises(ValidationError):
        parse_generator_lines(s, "1|0\n")
    with pytest.raises(ValidationError):
        parse_generator_lines(s, "1,1|0|0\n")
