"""Acceptance gate: the seven headline guarantees of the package.

Each test covers one numbered criterion and prints a single
``[criterion N] PASS/FAIL`` line to the terminal (bypassing capture), so a
plain ``pytest tests/test_acceptance.py`` run yields one line per criterion.
"""

from __future__ import annotations

import time
from contextlib import contextmanager

import numpy as np
import pytest

from conftest import (
    random_machine,
    random_projective_measurement,
    random_pure_density,
    random_unitary,
)
from qmeq.basis import pure_state_basis
from qmeq.checker import check_equivalence
from qmeq.circuits import (
    GateApplication,
    SequentialCircuit,
    build_walk_machine,
    compile_circuit,
    gate,
    inline_gate,
    sequential_to_mealy,
    walk_circuit,
)
from qmeq.linalg import pure_density
from qmeq.machine_sum import split_blocks, sum_machines
from qmeq.mealy import apply_superoperator, make_machine, sample_counts, step
from qmeq.oracle import k_equivalent_bruteforce, span_dimension_profile
from qmeq.selftest import WALK_CASES, run_case


@contextmanager
def criterion(capsys, number: int, description: str):
    ok = False
    try:
        yield
        ok = True
    finally:
        with capsys.disabled():
            print(f"\n[criterion {number}] {'PASS' if ok else 'FAIL'}: {description}")


def test_criterion_1_walk_size4_verdicts(capsys):
    with criterion(capsys, 1, "size-4 walk suite verdicts, < 5 s per case"):
        for case in WALK_CASES[:6]:
            t0 = time.perf_counter()
            report = run_case(case)
            elapsed = time.perf_counter() - t0
            assert report.verdict == case.expected, f"case {case.index}"
            assert elapsed < 5.0, f"case {case.index} took {elapsed:.2f} s"


def test_criterion_2_walk_size8_verdicts(capsys):
    with criterion(capsys, 2, "size-8 walk suite verdicts, < 30 min per case"):
        for case in WALK_CASES[6:]:
            t0 = time.perf_counter()
            report = run_case(case)
            elapsed = time.perf_counter() - t0
            assert report.verdict == "equivalent", f"case {case.index}"
            assert elapsed < 1800.0, f"case {case.index} took {elapsed:.2f} s"


def test_criterion_3_case1_witness_values(capsys):
    with criterion(capsys, 3, "case-1 witness (+00, 000) with p = 0.5 vs 0"):
        report = run_case(WALK_CASES[0])
        assert report.verdict == "not-equivalent"
        assert report.witness is not None
        assert tuple(report.witness.inputs) == ("+", "0", "0")
        assert tuple(report.witness.outputs) == ("0", "0", "0")
        assert report.p1 == pytest.approx(0.5, abs=1e-8)
        assert report.p2 == pytest.approx(0.0, abs=1e-8)


def _random_pair(rng):
    """Random machine pair with a shared measurement and random pure states."""
    meas = random_projective_measurement(rng)
    s1, s2 = rng.choice([2, 3, 4], size=2)
    m1 = random_machine(rng, int(s1), meas)
    m2 = random_machine(rng, int(s2), meas)
    return m1, m2, random_pure_density(rng, int(s1)), random_pure_density(rng, int(s2))


def _equivalent_pair(rng):
    """Pair equal up to a change of basis on the internal state space."""
    meas = random_projective_measurement(rng)
    s = int(rng.choice([2, 3, 4]))
    m1 = random_machine(rng, s, meas)
    v = random_unitary(rng, s)
    iv = np.kron(np.eye(2), v)
    m2 = make_machine(2, s, iv @ m1.unitary @ iv.conj().T, ("0", "1"), meas)
    rho1 = random_pure_density(rng, s)
    return m1, m2, rho1, v @ rho1 @ v.conj().T


def test_criterion_4_checker_oracle_agreement(capsys):
    with criterion(capsys, 4, "checker agrees with brute force on 200 random pairs"):
        rng = np.random.default_rng(20260814)
        disagreements = 0
        for i in range(200):
            constructed = i < 50
            if constructed:
                m1, m2, rho1, rho2 = _equivalent_pair(rng)
            else:
                m1, m2, rho1, rho2 = _random_pair(rng)
            report = check_equivalence(m1, m2, rho1, rho2)
            oracle = k_equivalent_bruteforce(m1, m2, rho1, rho2, max_len=4)
            if constructed:
                assert report.equivalent, f"pair {i}: constructed-equivalent rejected"
            if report.equivalent:
                # sound verdicts: the oracle must find no short witness
                if not oracle.equivalent:
                    disagreements += 1
            elif len(report.witness.inputs) <= 4:
                if oracle.equivalent:
                    disagreements += 1
        assert disagreements == 0


def test_criterion_5_invariants(capsys):
    with criterion(capsys, 5, "probability/positivity/block/span invariants"):
        rng = np.random.default_rng(5)
        sigmas = pure_state_basis(2).states

        # probability conservation on 1000 random (machine, input) pairs
        for _ in range(1000):
            m = random_machine(rng, int(rng.choice([2, 3, 4])))
            rho = random_pure_density(rng, m.state_dim)
            sigma = sigmas[rng.integers(len(sigmas))]
            total = sum(
                np.trace(apply_superoperator(m, a, sigma, rho)).real
                for a in m.outcomes
            )
            assert total == pytest.approx(1.0, abs=1e-8)

        # linearity and positivity preservation
        for _ in range(20):
            m = random_machine(rng, 3)
            sigma = sigmas[rng.integers(len(sigmas))]
            r1 = random_pure_density(rng, 3)
            r2 = random_pure_density(rng, 3)
            lhs = apply_superoperator(m, "0", sigma, 0.3 * r1 - 1.7 * r2)
            rhs = 0.3 * apply_superoperator(m, "0", sigma, r1) - 1.7 * apply_superoperator(
                m, "0", sigma, r2
            )
            np.testing.assert_allclose(lhs, rhs, atol=1e-10)
            image = apply_superoperator(m, "1", sigma, r1)
            assert np.linalg.eigvalsh(image).min() >= -1e-10

        # block-diagonal structure survives superoperator application
        for _ in range(10):
            meas = random_projective_measurement(rng)
            m1 = random_machine(rng, 2, meas)
            m2 = random_machine(rng, 3, meas)
            joint = sum_machines(m1, m2)
            mat = np.zeros((5, 5), dtype=complex)
            mat[:2, :2] = random_pure_density(rng, 2)
            mat[2:, 2:] = -random_pure_density(rng, 3)
            for k in range(3):
                mat = apply_superoperator(joint, "01"[k % 2], sigmas[k], mat)
                _, off_mass = split_blocks(mat, 2, 3)
                assert off_mass < 1e-10

        # hard size bound on the span basis, with and without early abort
        for _ in range(20):
            m1, m2, rho1, rho2 = _random_pair(rng)
            bound = m1.state_dim**2 + m2.state_dim**2
            for early in (True, False):
                report = check_equivalence(m1, m2, rho1, rho2, early_abort=early)
                assert report.basis_size <= bound

        # span dimension profile is monotone and freezes at the first repeat
        for _ in range(10):
            m1, m2, rho1, rho2 = _random_pair(rng)
            profile = span_dimension_profile(m1, m2, rho1, rho2, max_len=5)
            assert all(a <= b for a, b in zip(profile, profile[1:]))
            for k in range(len(profile) - 1):
                if profile[k + 1] == profile[k]:
                    assert all(d == profile[k] for d in profile[k + 1 :])
                    break


def _apply_gate_by_index(vec, g: GateApplication):
    """Bit-twiddling gate application, independent of the compiler's embedding."""
    bits = [q - 1 for q in g.qubits]
    k = len(bits)
    mask = sum(1 << b for b in bits)
    out = np.zeros_like(vec)

    def spread(local):
        return sum(((local >> j) & 1) << bits[j] for j in range(k))

    for base in range(len(vec)):
        if base & mask:
            continue
        for col in range(1 << k):
            amp = vec[base | spread(col)]
            if amp == 0:
                continue
            for row in range(1 << k):
                out[base | spread(row)] += g.matrix[row, col] * amp
    return out


def _random_circuit(rng):
    width = int(rng.choice([2, 3]))
    inputs = int(rng.integers(1, width + 1))
    gates = []
    for _ in range(int(rng.integers(3, 7))):
        kind = rng.integers(4)
        if kind == 0:
            name = ["H", "X", "S", "T"][rng.integers(4)]
            gates.append(gate(name, int(rng.integers(1, width + 1))))
        elif kind == 1 and width >= 2:
            a, b = rng.choice(width, size=2, replace=False) + 1
            gates.append(gate("CNOT", int(a), int(b)))
        elif kind == 2:
            gates.append(inline_gate(random_unitary(rng, 2), int(rng.integers(1, width + 1))))
        else:
            if width >= 2:
                a, b = rng.choice(width, size=2, replace=False) + 1
                gates.append(inline_gate(random_unitary(rng, 4), int(a), int(b)))
            else:
                gates.append(gate("Z", 1))
    return SequentialCircuit(inputs, width - inputs, tuple(gates))


def test_criterion_6_circuit_semantics(capsys):
    with criterion(capsys, 6, "gate semantics: SWAP identity, walk circuit, step law"):
        swap = compile_circuit(2, [gate("SWAP", 1, 2)])
        three_cnots = compile_circuit(
            2, [gate("CNOT", 1, 2), gate("CNOT", 2, 1), gate("CNOT", 1, 2)]
        )
        np.testing.assert_allclose(swap, three_cnots, atol=1e-12)

        machine, _ = build_walk_machine(4, "H")
        from_gates = sequential_to_mealy(walk_circuit(4, "H"))
        np.testing.assert_allclose(from_gates.unitary, machine.unitary, atol=1e-12)
        assert from_gates.outcomes == machine.outcomes
        for a in machine.outcomes:
            np.testing.assert_allclose(
                from_gates.measurements[a], machine.measurements[a], atol=1e-12
            )

        rng = np.random.default_rng(6)
        for _ in range(20):
            circ = _random_circuit(rng)
            din, ds = 2**circ.input_count, 2**circ.memory_count
            psi = rng.normal(size=din) + 1j * rng.normal(size=din)
            psi /= np.linalg.norm(psi)
            phi = rng.normal(size=ds) + 1j * rng.normal(size=ds)
            phi /= np.linalg.norm(phi)

            # direct route: evolve the joint ket and sum amplitude weights
            # per measured input value (circuit index = input + din * memory)
            vec = np.zeros(din * ds, dtype=complex)
            for x in range(din):
                for y in range(ds):
                    vec[x + din * y] = psi[x] * phi[y]
            for g in circ.gates:
                vec = _apply_gate_by_index(vec, g)
            direct = np.linalg.norm(vec.reshape(ds, din), axis=0) ** 2

            m = sequential_to_mealy(circ)
            branches = step(m, np.outer(psi, psi.conj()), np.outer(phi, phi.conj()))
            for x in range(din):
                label = m.outcomes[x]
                assert branches[label].probability == pytest.approx(
                    direct[x], abs=1e-10
                )


def test_criterion_7_sampling_frequency(capsys, walk4_h):
    with criterion(capsys, 7, "100k-shot frequency of 000 given +00 is 0.5 +/- 0.01"):
        machine, kets = walk4_h
        by_label = {s.label: s for s in pure_state_basis(2).states}
        inputs = [by_label["+"], by_label["0"], by_label["0"]]
        counts = sample_counts(
            machine, pure_density(kets["0c0p"]), inputs, 100_000, seed=7
        )
        freq = counts.get(("0", "0", "0"), 0) / 100_000
        assert freq == pytest.approx(0.5, abs=0.01)
