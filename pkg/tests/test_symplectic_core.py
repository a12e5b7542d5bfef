from __future__ import annotations

import itertools
import json

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from oracles import brute_min_weight, dense_pauli, dense_rank_gf2, is_rref
from qecforge.codes import build_five_qubit, build_repetition, build_steane, build_toric, toric_checks
from qecforge.formats import code_to_descriptor, descriptor_to_code, format_pcm, parse_pcm
from qecforge.gf2 import BitMatrix, kernel_basis, rank, rref, solve
from qecforge.pauli import PauliOperator, pauli_mul, symplectic_product
from qecforge.stabilizer import (
    MinusIdentityGenerated,
    NonCommuting,
    NotCSS,
    all_paulis_up_to_weight,
    build_stabilizer_group,
    classical_analyze,
    css_distances,
    distance_bruteforce,
    kl_check,
    logical_operators,
    subsystem_analyze,
    symplectic_rank,
)

HAMMING = BitMatrix.from_strings(["0001111", "0110011", "1010101"])
REP3 = BitMatrix.from_strings(["110", "101"])

pauli_text = st.integers(1, 3).flatmap(lambda n: st.text("IXYZ", min_size=n, max_size=n))


# --- GF(2) linear algebra ---------------------------------------------------

def test_rref_steane_rank():
    """Hamming checks have rank 3 and the reduced form is in RREF."""
    reduced, pivots, r = rref(HAMMING)
    assert r == 3 and len(pivots) == 3
    assert is_rref(reduced.array)


def test_rref_identity():
    R = rref(BitMatrix.identity(4))
    assert R.reduced == BitMatrix.identity(4)
    assert R.rank == 4


def test_rref_random_against_dense_oracle(rng):
    for _ in range(50):
        M = rng.integers(0, 2, size=(10, 20))
        res = rref(BitMatrix(M))
        assert res.rank == dense_rank_gf2(M)
        assert is_rref(res.reduced.array)
        # row space is preserved
        assert rank(BitMatrix(np.vstack([M, res.reduced.array]))) == res.rank


def test_kernel_repetition():
    K = kernel_basis(REP3)
    assert K.rows == 1 and list(K.array[0]) == [1, 1, 1]


def test_kernel_full_rank_and_steane():
    assert kernel_basis(BitMatrix.identity(5)).rows == 0
    K = kernel_basis(HAMMING)
    assert K.rows == 4
    assert (HAMMING @ K.T).is_zero()


def test_solve_cases():
    x = solve(REP3, [1, 1])
    assert list(REP3 @ x) == [1, 1]
    assert list(x) == [1, 0, 0]
    assert not solve(REP3, [0, 0]).any()
    assert solve(BitMatrix.zeros(2, 3), [1, 0]) is None
    with pytest.raises(ValueError):
        solve(REP3, [1, 0, 1])


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 8), st.integers(1, 12), st.integers(0, 2**32 - 1))
def test_kernel_and_solve_properties(rows, cols, seed):
    """M . kernel = 0, kernel size = cols - rank, and solve reproduces s."""
    g = np.random.default_rng(seed)
    M = BitMatrix(g.integers(0, 2, size=(rows, cols)))
    K = kernel_basis(M)
    assert K.rows == cols - M.rank()
    if K.rows:
        assert (M @ K.T).is_zero()
    x0 = g.integers(0, 2, size=cols)
    s = M @ x0
    x = solve(M, s)
    assert x is not None and np.array_equal(M @ x, s)


# --- Pauli algebra ------------------------------------------------------------

def test_xz_phase():
    """X.Z = -iY, stored as phase exponent 3 on Y."""
    P = pauli_mul(PauliOperator.from_str("X"), PauliOperator.from_str("Z"))
    assert P.body() == "Y" and P.phase == 3
    assert np.allclose(P.to_matrix(), dense_pauli("X") @ dense_pauli("Z"))


def test_involution():
    for s in "XYZ":
        P = PauliOperator.from_str(s)
        Q = P * P
        assert Q.is_identity and Q.phase == 0


def test_symplectic_examples():
    X, Z = PauliOperator.from_str("X"), PauliOperator.from_str("Z")
    assert symplectic_product(X, Z) == 1
    gens = build_five_qubit().stabilizers
    for a, b in itertools.combinations(gens, 2):
        assert symplectic_product(a, b) == 0
    with pytest.raises(ValueError):
        symplectic_product(X, PauliOperator.from_str("XX"))


def test_commutation_exhaustive_small_n():
    """Symplectic product agrees with dense commutators for every pair with n <= 2,
    and a sample at n = 3."""
    for n in (1, 2):
        ops = ["".join(t) for t in itertools.product("IXYZ", repeat=n)]
        for a in ops:
            for b in ops:
                A, B = dense_pauli(a), dense_pauli(b)
                commute = np.allclose(A @ B, B @ A)
                assert (symplectic_product(PauliOperator.from_str(a), PauliOperator.from_str(b)) == 0) == commute
    ops3 = ["".join(t) for t in itertools.product("IXYZ", repeat=3)]
    for a in ops3:
        for b in ops3[::7]:
            A, B = dense_pauli(a), dense_pauli(b)
            assert (symplectic_product(PauliOperator.from_str(a), PauliOperator.from_str(b)) == 0) == np.allclose(A @ B, B @ A)


@settings(max_examples=300, deadline=None)
@given(st.integers(1, 3).flatmap(lambda n: st.tuples(*[st.text("IXYZ", min_size=n, max_size=n)] * 3)),
       st.integers(0, 3), st.integers(0, 3))
def test_product_matches_dense(triple, pa, pb):
    """Exact phases: products and associativity against 2^n x 2^n matrices."""
    a, b, c = (PauliOperator.from_str(s) for s in triple)
    a, b = a.with_phase(pa), b.with_phase(pb)
    for P, Q in ((a, b), (b, c), (a, c)):
        assert np.allclose((P * Q).to_matrix(), P.to_matrix() @ Q.to_matrix())
    left = (a * b) * c
    right = a * (b * c)
    assert left == right
    assert np.allclose(left.to_matrix(), a.to_matrix() @ b.to_matrix() @ c.to_matrix())


def test_parse_and_print_roundtrip():
    for s in ["XZZXI", "-ZZ", "iXY", "-iYYZ", "I"]:
        assert str(PauliOperator.from_str(s)) == s
    assert PauliOperator.from_str("XX;II") == PauliOperator.from_str("XXII")
    assert PauliOperator.from_str("XIYZ").weight == 3


# --- stabilizer groups ----------------------------------------------------------

def test_five_qubit_group():
    code = build_five_qubit()
    assert code.k == 1 and code.m == 4
    (X, Z), = logical_operators(code)
    # logical classes, not representatives
    assert code.in_stabilizer_group(X * PauliOperator.from_str("XXXXX").unsigned()) or \
        code.in_stabilizer_group((X * PauliOperator.from_str("XXXXX")).unsigned())
    assert code.in_stabilizer_group((Z * PauliOperator.from_str("ZZZZZ")).unsigned())


def test_toric_all_checks_reduce():
    plaq, vert = toric_checks(3)
    code = build_stabilizer_group(plaq + vert)
    assert code.m == 16 and code.k == 2


def test_dependent_generator_dropped():
    gens = list(build_five_qubit().stabilizers)
    gens.append(gens[0] * gens[1])
    code = build_stabilizer_group(gens)
    assert code.k == 1 and code.m == 4
    assert code.stabilizers == tuple(gens[:4])


def test_group_errors():
    with pytest.raises(NonCommuting) as exc:
        build_stabilizer_group(["ZZ", "XI"])
    assert (exc.value.i, exc.value.j) == (0, 1)
    # ZZ . XX = -YY, so adding +YY generates -I
    with pytest.raises(MinusIdentityGenerated):
        build_stabilizer_group(["ZZ", "XX", "YY"])
    assert build_stabilizer_group(["ZZ", "XX", "-YY"]).m == 2
    with pytest.raises(MinusIdentityGenerated):
        build_stabilizer_group(["ZZ", "-ZZ"])


def _gram(code):
    return np.array([[symplectic_product(a, b) for b in code.logical_z] for a in code.logical_x])


@pytest.mark.parametrize("maker", [build_five_qubit, build_steane, lambda: build_toric(3),
                                   lambda: build_repetition(4)])
def test_code_invariants(maker):
    """Generators commute and are independent; the logical Gram matrix is standard."""
    code = maker()
    for a, b in itertools.combinations(code.stabilizers, 2):
        assert a.commutes(b)
    assert symplectic_rank(code.stabilizers) == code.m
    assert code.k == code.n - code.m
    for L in code.logical_x + code.logical_z:
        assert all(L.commutes(g) for g in code.stabilizers)
    assert np.array_equal(_gram(code), np.eye(code.k, dtype=int))
    for a, b in itertools.combinations(code.logical_x, 2):
        assert a.commutes(b)
    for a, b in itertools.combinations(code.logical_z, 2):
        assert a.commutes(b)


def test_repetition_weight_one_z_logical():
    code = build_repetition(3)
    assert code.is_nontrivial_logical(PauliOperator.from_str("ZII"))


def test_toric_logicals_reduce_to_loops():
    code = build_toric(3)
    assert len(logical_operators(code)) == 2
    for L in code.logical_x + code.logical_z:
        assert L.weight == 3


# --- distances --------------------------------------------------------------

def test_distances_known():
    for code, d in ((build_steane(), 3), (build_five_qubit(), 3), (build_repetition(3), 1)):
        res = distance_bruteforce(code)
        assert res.d == d and res.exact
        assert code.is_nontrivial_logical(res.witness) and res.witness.weight == d


def test_distance_lower_bound_flag():
    res = distance_bruteforce(build_toric(4), w_max=3)
    assert res.d == 4 and res.lower_bound and res.witness is None


def test_css_distances():
    assert css_distances(build_steane()) == (3, 3)
    assert css_distances(build_toric(3)) == (3, 3)
    dx, dz = css_distances(build_repetition(3))
    assert (dx, dz) == (3, 1)
    with pytest.raises(NotCSS):
        css_distances(build_five_qubit())


@pytest.mark.parametrize("maker", [build_steane, lambda: build_toric(2), build_five_qubit, lambda: build_repetition(3)])
def test_distance_vs_plain_enumeration(maker):
    """The signature-table search agrees with naive enumeration over all Paulis."""
    code = maker()
    d = brute_min_weight(code.n, code.in_normalizer, code.in_stabilizer_group)
    assert distance_bruteforce(code).d == d


# --- subsystem and classical ----------------------------------------------------

def test_subsystem_commuting_gauge_reduces_to_stabilizer():
    gens = build_five_qubit().stabilizers
    sub = subsystem_analyze(gens)
    assert sub.g == 0 and sub.k == 1 and sub.r == 4


def test_four_qubit_floquet_gauge():
    """All twelve checks of the period-6 schedule generate a gauge group with k = 0."""
    gauge = ["IZ;ZI", "ZI;IZ", "XX;II", "II;XX", "ZI;ZI", "IZ;IZ",
             "XI;IX", "IX;XI", "ZZ;II", "II;ZZ", "XI;XI", "IX;IX"]
    sub = subsystem_analyze(gauge)
    assert sub.k == 0


def test_classical_analyze():
    c = classical_analyze(HAMMING)
    assert (c.n, c.k, c.d) == (7, 4, 3)
    c = classical_analyze(REP3)
    assert (c.n, c.k, c.d) == (3, 1, 3)
    c = classical_analyze(BitMatrix.zeros(0, 5))
    assert (c.n, c.k, c.d) == (5, 5, 1)


def test_kl_check():
    five = build_five_qubit()
    errs = [PauliOperator.identity(5)] + all_paulis_up_to_weight(5, 1)
    assert kl_check(five, errs).correctable
    rep = build_repetition(3)
    res = kl_check(rep, [PauliOperator.identity(3), PauliOperator.from_str("ZII")])
    assert not res.correctable and res.violating_pair is not None
    assert kl_check(rep, [PauliOperator.identity(3)]).correctable


# --- file formats ------------------------------------------------------------

def test_pcm_roundtrip():
    text = "3 7\n4 5 6 7\n2 3 6 7\n1 3 5 7\n"
    M = parse_pcm(text)
    assert M == HAMMING
    assert format_pcm(M) == text
    Z = parse_pcm("2 4\n1 2\n\n")
    assert Z.array.tolist() == [[1, 1, 0, 0], [0, 0, 0, 0]]


def test_descriptor_roundtrip():
    code = build_five_qubit()
    d = code_to_descriptor(code)
    back = descriptor_to_code(json.loads(json.dumps(d)))
    assert [str(g) for g in back.stabilizers] == d["stabilizers"]
    assert back.k == 1
