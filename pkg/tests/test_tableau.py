from __future__ import annotations


import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from oracles import dense_gate, dense_measure_probs, dense_pauli
from qecforge.codes import build_five_qubit, build_surface_rotated
from qecforge.pauli import PauliOperator
from qecforge.stabilizer import symplectic_rank
from qecforge.tableau import (
    Membership,
    NonHermitianMeasurement,
    Tableau,
    code_space_tableau,
    conjugate_pauli_through,
    contains,
    format_circuit,
    init_code_state,
    measure_pauli,
    parse_circuit,
)

P = PauliOperator.from_str


def test_init_code_states():
    t = init_code_state(build_five_qubit())
    assert [str(g) for g in t.generators] == ["XZZXI", "IXZZX", "XIXZZ", "ZXIXZ", "ZZZZZ"]
    from qecforge.stabilizer import trivial_code

    t1 = init_code_state(trivial_code(1))
    assert [str(g) for g in t1.generators] == ["Z"]
    t4 = init_code_state(build_surface_rotated(2))
    assert {str(g) for g in t4.generators} == {"XIXI", "IXIX", "ZZZZ", "ZIZI"}


def test_cnot_conjugation():
    assert str(conjugate_pauli_through([("CNOT", 0, 1)], "XI")) == "XX"
    assert str(conjugate_pauli_through([("CNOT", 0, 1)], "IZ")) == "ZZ"
    assert str(conjugate_pauli_through([("H", 0)], "Z")) == "X"
    assert str(conjugate_pauli_through([("H", 0), ("H", 0)], "Y")) == "Y"
    assert str(conjugate_pauli_through([("H", 0)], "Y")) == "-Y"


GATE_POOL = [("H", 1), ("S", 1), ("S_DAG", 1), ("X", 1), ("Y", 1), ("Z", 1), ("CNOT", 2), ("SWAP", 2), ("CZ", 2)]


def _random_circuit(g, n, length):
    circ = []
    pool = [gp for gp in GATE_POOL if gp[1] <= n]
    for _ in range(length):
        name, arity = pool[int(g.integers(len(pool)))]
        qs = g.choice(n, size=arity, replace=False)
        circ.append((name, *map(int, qs)))
    return circ


def _random_pauli_string(g, n):
    while True:
        s = "".join("IXYZ"[int(v)] for v in g.integers(0, 4, size=n))
        if set(s) != {"I"}:
            return s


@settings(max_examples=80, deadline=None)
@given(st.integers(1, 3), st.integers(0, 2**32 - 1))
def test_conjugation_matches_dense(n, seed):
    """U P U^dagger from the gate tables equals dense conjugation (6-gate circuits)."""
    g = np.random.default_rng(seed)
    circ = _random_circuit(g, n, 6)
    s = _random_pauli_string(g, n)
    U = np.eye(1 << n, dtype=complex)
    for name, *qs in circ:
        U = dense_gate(n, name, qs) @ U
    got = conjugate_pauli_through(circ, s)
    assert np.allclose(got.to_matrix(), U @ dense_pauli(s) @ U.conj().T)


def test_conjugation_distributes_over_concatenation():
    g = np.random.default_rng(5)
    for _ in range(30):
        a, b = _random_circuit(g, 3, 4), _random_circuit(g, 3, 4)
        s = _random_pauli_string(g, 3)
        assert conjugate_pauli_through(a + b, s) == conjugate_pauli_through(b, conjugate_pauli_through(a, s))


def test_measure_rule1_and_repeat():
    t = Tableau.zero_state(1)
    out, _ = measure_pauli(t, "Z")
    assert out == 1 and t.record[-1].deterministic
    t = Tableau.zero_state(2)
    rng = np.random.default_rng(0)
    first = t.measure("XX", rng)
    second = t.measure("XX", rng)
    assert not first.deterministic and second.deterministic and second.outcome == first.outcome
    assert second.rule == 1


def test_nonhermitian_rejected():
    with pytest.raises(NonHermitianMeasurement):
        Tableau.zero_state(1).measure(P("iZ"))


def test_four_qubit_rule3_example():
    """From S0 with pivot IX;IX first, measuring IZ;ZI then ZI;IZ gives S1 and Xbar' = XI;IX."""
    t = Tableau(4, ["IX;IX", "XI;XI", "ZZ;ZZ"], ["XX;II", "ZI;ZI"])
    rng = np.random.default_rng(1)
    r1 = t.measure("IZ;ZI", rng)
    assert r1.rule == 3 and t.rank == 3
    assert t.logicals[0].equal_up_to_phase(P("XI;IX"))
    assert t.logicals[1] == P("ZI;ZI")
    r2 = t.measure("ZI;IZ", rng)
    assert r2.deterministic and r2.outcome == r1.outcome
    target = Tableau(4, ["XX;XX", "ZI;IZ", "IZ;ZI"])
    assert t.same_group(target)


def test_logical_measurement_flagged():
    code = build_five_qubit()
    t = code_space_tableau(code)
    res = t.measure(code.logical_z[0], np.random.default_rng(2))
    assert res.rule == 2 and res.is_logical_measurement
    kinds = {e.index: e.kind for e in res.logical_events}
    assert kinds[1] == "measured" and kinds[0] == "consumed"


def test_contains_classification():
    code = build_five_qubit()
    t = code_space_tableau(code)
    g = code.stabilizers
    c = contains(t, g[0] * g[2])
    assert c.kind is Membership.IN_GROUP and c.sign == 1
    assert contains(t, -(g[0] * g[2])).sign == -1
    assert contains(t, "XXXXX").kind is Membership.COMMUTES
    assert contains(t, "XIIII").kind is Membership.ANTICOMMUTES


def test_invariants_after_random_sequences():
    g = np.random.default_rng(9)
    for _ in range(40):
        n = int(g.integers(2, 5))
        t = Tableau.zero_state(n)
        for _ in range(12):
            if g.random() < 0.5:
                name, *qs = _random_circuit(g, n, 1)[0]
                t.apply(name, *qs)
            else:
                before = t.rank
                r = t.measure(_random_pauli_string(g, n), g)
                if r.rule == 3:
                    assert t.rank == before
        t.check()
        assert symplectic_rank(t.generators) == t.rank == n


def test_circuit_text_roundtrip():
    text = "H 0\nS 1\nCNOT 0 1\nMPP -ZZ\nNOISE_DEPOL 0.01 0 1\n"
    circ = parse_circuit(text, n=2)
    assert format_circuit(circ) == text
    t = Tableau.zero_state(2)
    res = t.run(circ, np.random.default_rng(0))
    assert len(res) == 1
    with pytest.raises(ValueError):
        parse_circuit("FOO 1")
    with pytest.raises(ValueError):
        parse_circuit("CNOT 0 5", n=2)


def _exact_sequence_probs(n, circ, meas):
    """Exhaustive branch over outcomes with the dense simulator."""
    psi = np.zeros(1 << n, dtype=complex)
    psi[0] = 1
    U = np.eye(1 << n, dtype=complex)
    for name, *qs in circ:
        U = dense_gate(n, name, qs) @ U
    psi = U @ psi
    branches = {(): (1.0, psi)}
    for s in meas:
        Pm = dense_pauli(s)
        nxt = {}
        for seq, (p, v) in branches.items():
            for o, (q, w) in dense_measure_probs(v, Pm).items():
                if q > 1e-12:
                    nxt[seq + (o,)] = (p * q, w)
        branches = nxt
    return branches


def test_against_dense_oracle_small():
    """Outcome-sequence frequencies within 5 sigma and post-measurement states stabilized."""
    g = np.random.default_rng(13)
    for trial in range(6):
        n = 1 + trial % 3
        circ = _random_circuit(g, n, 5)
        meas = [_random_pauli_string(g, n) for _ in range(3)]
        exact = _exact_sequence_probs(n, circ, meas)
        counts = {}
        shots = 800
        for shot in range(shots):
            rng = np.random.default_rng([13, trial, shot])
            t = Tableau.zero_state(n)
            for name, *qs in circ:
                t.apply(name, *qs)
            seq = tuple(t.measure(s, rng).outcome for s in meas)
            counts[seq] = counts.get(seq, 0) + 1
            if shot < 20:
                p, v = exact[seq]
                for gen in t.generators:
                    assert np.allclose(gen.to_matrix() @ v, v)
        for seq, (p, _) in exact.items():
            sigma = np.sqrt(shots * p * (1 - p)) + 1e-9
            assert abs(counts.get(seq, 0) - shots * p) <= 5 * sigma + 1e-9
        assert set(counts) <= set(exact)
