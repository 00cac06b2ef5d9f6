"""Shared helpers: seeded random machines, states, and unitaries."""

from __future__ import annotations

import numpy as np
import pytest

from qmeq.mealy import make_machine


def random_unitary(rng, n: int) -> np.ndarray:
    """Haar-ish random unitary (QR of a complex Gaussian, phases fixed)."""
    z = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    q, r = np.linalg.qr(z)
    d = np.diagonal(r)
    return q * (d / np.abs(d))


def random_hermitian(rng, n: int) -> np.ndarray:
    z = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    return (z + z.conj().T) / 2


def random_pure_density(rng, n: int) -> np.ndarray:
    v = rng.normal(size=n) + 1j * rng.normal(size=n)
    v /= np.linalg.norm(v)
    return np.outer(v, v.conj())


def random_density(rng, n: int) -> np.ndarray:
    """Full-rank random density matrix."""
    z = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    rho = z @ z.conj().T
    return rho / np.trace(rho).real


def random_projective_measurement(rng) -> dict[str, np.ndarray]:
    """Random 2-outcome projective measurement on a qubit input register."""
    v = random_unitary(rng, 2)
    p0 = v @ np.diag([1.0, 0.0]).astype(complex) @ v.conj().T
    p1 = v @ np.diag([0.0, 1.0]).astype(complex) @ v.conj().T
    return {"0": p0, "1": p1}


def random_machine(rng, state_dim: int, measurements=None):
    """Random qubit-input machine; pass measurements to share them in a pair."""
    if measurements is None:
        measurements = random_projective_measurement(rng)
    u = random_unitary(rng, 2 * state_dim)
    return make_machine(2, state_dim, u, ("0", "1"), measurements)


@pytest.fixture(scope="session")
def walk4_h():
    from qmeq import build_walk_machine

    return build_walk_machine(4, "H")


@pytest.fixture(scope="session")
def walk4_y():
    from qmeq import build_walk_machine

    return build_walk_machine(4, "Y")


@pytest.fixture(scope="session")
def walk8_h():
    from qmeq import build_walk_machine

    return build_walk_machine(8, "H")
