"""Brute-force oracle: direct distribution comparison and span profiles."""

import numpy as np
import pytest

from conftest import random_machine, random_projective_measurement, random_pure_density
from qmeq.basis import pure_state_basis
from qmeq.errors import ResourceLimitError
from qmeq.linalg import pure_density
from qmeq.mealy import experiment_distribution
from qmeq.oracle import k_equivalent_bruteforce, span_dimension_profile


def test_oracle_finds_walk_witness(walk4_h):
    machine, states = walk4_h
    report = k_equivalent_bruteforce(
        machine, machine,
        pure_density(states["0c0p"]), pure_density(states["0c2p"]),
        max_len=3,
    )
    assert not report.equivalent
    assert report.witness.inputs == ("+", "0", "0")
    assert report.witness.outputs == ("0", "0", "0")
    assert abs(report.p1 - 0.5) < 1e-10
    assert abs(report.p2) < 1e-10
    assert report.nodes_examined == 8 + 64 + 512


def test_oracle_zero_length_is_vacuously_equivalent(walk4_h):
    machine, states = walk4_h
    report = k_equivalent_bruteforce(
        machine, machine,
        pure_density(states["0c0p"]), pure_density(states["0c2p"]),
        max_len=0,
    )
    assert report.equivalent
    assert report.nodes_examined == 0


def test_oracle_witness_matches_truth_distribution(walk4_h):
    # the claimed probabilities must come from the actual experiments
    machine, states = walk4_h
    rho1 = pure_density(states["0c0p"])
    rho2 = pure_density(states["0c2p"])
    report = k_equivalent_bruteforce(machine, machine, rho1, rho2, max_len=3)
    basis = pure_state_basis(2)
    by_label = {s.label: s for s in basis.states}
    pi = [by_label[lab] for lab in report.witness.inputs]
    d1 = experiment_distribution(machine, rho1, pi)
    d2 = experiment_distribution(machine, rho2, pi)
    np.testing.assert_allclose(d1[report.witness.outputs], report.p1, atol=1e-10)
    np.testing.assert_allclose(d2[report.witness.outputs], report.p2, atol=1e-10)


def test_oracle_node_cap_refuses_large_runs(walk4_h):
    machine, states = walk4_h
    with pytest.raises(ResourceLimitError):
        k_equivalent_bruteforce(
            machine, machine,
            pure_density(states["0c0p"]), pure_density(states["0c2p"]),
            max_len=8, node_cap=10_000,
        )


def test_oracle_equivalent_on_identical_pair():
    rng = np.random.default_rng(14)
    m = random_machine(rng, 2)
    rho = random_pure_density(rng, 2)
    report = k_equivalent_bruteforce(m, m, rho, rho, max_len=3)
    assert report.equivalent
    assert report.witness is None


def test_span_profile_is_monotone_and_freezes():
    rng = np.random.default_rng(15)
    for _ in range(5):
        meas = random_projective_measurement(rng)
        m1 = random_machine(rng, 2, meas)
        m2 = random_machine(rng, 2, meas)
        profile = span_dimension_profile(
            m1, m2, random_pure_density(rng, 2), random_pure_density(rng, 2),
            max_len=4,
        )
        assert profile == sorted(profile)
        assert profile[-1] <= 2 * 2 * 2
        frozen = False
        for a, b in zip(profile, profile[1:]):
            if frozen:
                assert a == b
            elif a == b:
                frozen = True


def test_span_profile_walk_case(walk4_h):
    machine, states = walk4_h
    profile = span_dimension_profile(
        machine, machine,
        pure_density(states["0c0p"]), pure_density(states["0c2p"]),
        max_len=2,
    )
    assert profile[0] == 1  # just the difference operator
    assert profile == sorted(profile)
