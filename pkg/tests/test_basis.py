"""Input-basis family: ordering, labels, and the spanning certificate."""

import numpy as np
import pytest

from conftest import random_density
from qmeq.basis import InputBasis, pure_state_basis
from qmeq.errors import MachineValidationError
from qmeq.linalg import hermitian_vectorize
from qmeq.mealy import InputState


def test_qubit_basis_labels_and_order():
    basis = pure_state_basis(2)
    assert basis.labels == ("0", "1", "+", "phi")
    np.testing.assert_allclose(basis.states[0].matrix, np.diag([1.0, 0.0]))
    np.testing.assert_allclose(basis.states[1].matrix, np.diag([0.0, 1.0]))
    np.testing.assert_allclose(basis.states[2].matrix, np.full((2, 2), 0.5))
    np.testing.assert_allclose(
        basis.states[3].matrix, np.array([[0.5, -0.5j], [0.5j, 0.5]])
    )


def test_basis_size_is_dim_squared():
    for d in (1, 2, 3, 5):
        assert len(pure_state_basis(d)) == d * d


def test_larger_basis_labels():
    basis = pure_state_basis(3)
    assert basis.labels[:3] == ("e0", "e1", "e2")
    assert basis.labels[3:5] == ("+01", "phi01")
    assert basis.labels[-2:] == ("+12", "phi12")


def test_every_state_is_a_pure_density():
    for state in pure_state_basis(4).states:
        m = state.matrix
        np.testing.assert_allclose(m, m.conj().T)
        np.testing.assert_allclose(np.trace(m), 1.0)
        np.testing.assert_allclose(m @ m, m, atol=1e-14)  # projector = pure


def test_basis_spans_all_densities():
    # any density is a real combination of the basis densities
    for d in (2, 3, 4):
        basis = pure_state_basis(d)
        rows = np.stack([hermitian_vectorize(s.matrix) for s in basis.states])
        rng = np.random.default_rng(d)
        for _ in range(10):
            target = hermitian_vectorize(random_density(rng, d))
            coeffs, *_ = np.linalg.lstsq(rows.T, target, rcond=None)
            np.testing.assert_allclose(rows.T @ coeffs, target, atol=1e-10)


def test_rank_certificate_rejects_degenerate_family():
    zero = np.diag([1.0, 0.0]).astype(complex)
    states = tuple(InputState(f"s{i}", zero.copy()) for i in range(4))
    with pytest.raises(MachineValidationError):
        InputBasis(2, states)
