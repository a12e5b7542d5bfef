from __future__ import annotations

import json

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from qecforge.codes import (
    CodeSpec,
    CssConditionViolated,
    DuplicateTerm,
    FAMILIES,
    bb_k_formula,
    bb_polynomial,
    build_bacon_shor,
    build_bb,
    build_css,
    build_five_qubit,
    build_hgp,
    build_lifted_product,
    build_repetition,
    build_shor9,
    build_steane,
    build_subsystem_surface,
    build_subsystem_toric,
    build_surface_rotated,
    build_surface_unrotated,
    build_toric,
    euler_check,
    hgp_k_formula,
    hgp_matrices,
    lift,
    lift_permutation,
    lifted_product_matrices,
    repetition_parity_check,
    toric_checks,
)
from qecforge.formats import dumps_descriptor
from qecforge.gf2 import BitMatrix, rank
from qecforge.pauli import product, single, weight_one_paulis
from qecforge.stabilizer import css_distances, distance_bruteforce

HAMMING = BitMatrix.from_strings(["0001111", "0110011", "1010101"])


def _dressed_distance(code, w_max):
    return distance_bruteforce(code, w_max=w_max)


def test_repetition():
    c = build_repetition(3)
    assert [str(g) for g in c.stabilizers] == ["ZZI", "IZZ"]
    assert css_distances(c) == (3, 1)
    c2 = build_repetition(2)
    assert [str(g) for g in c2.stabilizers] == ["ZZ"] and c2.k == 1
    assert distance_bruteforce(c2).d == 1
    cx = build_repetition(3, basis="X")
    assert [str(g) for g in cx.stabilizers] == ["XXI", "IXX"]


def test_shor9():
    c = build_shor9()
    zs = [g for g in c.stabilizers if g.x == 0]
    xs = [g for g in c.stabilizers if g.z == 0]
    assert len(zs) == 6 and all(g.weight == 2 for g in zs)
    assert len(xs) == 2 and all(g.weight == 6 for g in xs)
    assert distance_bruteforce(c).d == 3 and c.k == 1


def test_shor9_x_check_from_bacon_shor_pairs():
    """Each weight-6 X check is the product of three X-type gauge pairs."""
    bs = build_bacon_shor(3, 3)
    xpairs = [g for g in bs.gauge_generators if g.z == 0]
    shor = build_shor9()
    for check in (g for g in shor.stabilizers if g.z == 0):
        hits = [p for p in xpairs if (p.x & check.x) == p.x]
        assert len(hits) == 3
        assert product(hits) == check


def test_shor9_single_z_detected():
    c = build_shor9()
    E = single(9, 1, "Z")
    xs = [g for g in c.stabilizers if g.z == 0]
    assert any(not E.commutes(g) for g in xs)


def test_steane_and_five_qubit():
    s = build_steane()
    assert s.k == 1 and distance_bruteforce(s).d == 3
    f = build_five_qubit()
    assert f.k == 1 and distance_bruteforce(f).d == 3
    syn = [f.syndrome_int(E) for E in weight_one_paulis(5)]
    assert len(set(syn)) == 15 and 0 not in syn


FIVE_TABLE = {
    "X1": "+++-", "Z1": "-+-+", "Y1": "-+--",
    "X2": "-+++", "Z2": "+-+-", "Y2": "--+-",
    "X3": "--++", "Z3": "++-+", "Y3": "---+",
    "X4": "+--+", "Z4": "-++-", "Y4": "----",
    "X5": "++--", "Z5": "+-++", "Y5": "+---",
}


def test_five_qubit_syndrome_table():
    """Rows derived by hand from the generators XZZXI, IXZZX, XIXZZ, ZXIXZ."""
    f = build_five_qubit()
    for label, signs in FIVE_TABLE.items():
        E = single(5, int(label[1]) - 1, label[0])
        got = "".join("-" if b else "+" for b in f.syndrome(E))
        assert got == signs, label


def test_five_qubit_table_is_consistent():
    """Each Y row is the XOR of the X and Z rows on the same qubit."""
    flip = lambda a, b: "".join("+" if x == y else "-" for x, y in zip(a, b))  # noqa: E731
    for q in range(1, 6):
        assert FIVE_TABLE[f"Y{q}"] == flip(FIVE_TABLE[f"X{q}"], FIVE_TABLE[f"Z{q}"])
    assert len(set(FIVE_TABLE.values())) == 15


def test_build_css_cases():
    c = build_css(HAMMING, HAMMING)
    assert c.k == 1
    rep = repetition_parity_check(3)
    q = build_css(rep, BitMatrix.zeros(0, 3))
    assert q.k == 1 and [str(g) for g in q.stabilizers] == ["XXI", "IXX"]
    with pytest.raises(CssConditionViolated):
        build_css(BitMatrix([[1, 1]]), BitMatrix([[1, 0]]))
    with pytest.raises(CssConditionViolated):
        build_css(BitMatrix([[1, 0]]), BitMatrix([[1, 0]]))


@pytest.mark.parametrize("L", [2, 3, 4])
def test_toric_parameters(L):
    c = build_toric(L)
    assert (c.n, c.k) == (2 * L * L, 2)
    if L <= 3:
        assert distance_bruteforce(c).d == L


def test_toric_check_products_and_euler():
    L = 3
    plaq, vert = toric_checks(L)
    assert len(plaq) == L * L and len(vert) == L * L
    assert product(plaq).is_identity and product(vert).is_identity
    chi, k = euler_check(L * L, 2 * L * L, L * L)
    assert chi == 0 and k == build_toric(L).k


def test_euler_examples():
    assert euler_check(4, 6, 4) == (2, 0)
    assert euler_check(1, 4, 1)[1] == 4


def test_surface_codes():
    u = build_surface_unrotated(4)
    assert (u.n, u.k) == (25, 1)
    assert css_distances(u) == (4, 4)
    assert max(g.weight for g in u.stabilizers) == 4 and min(g.weight for g in u.stabilizers) == 3
    r = build_surface_rotated(5)
    assert (r.n, r.k) == (25, 1)
    assert css_distances(r) == (5, 5)
    r2 = build_surface_rotated(2)
    assert [str(g) for g in r2.stabilizers] == ["XIXI", "IXIX", "ZZZZ"]


def test_rotated_surface_check_weights():
    d = 5
    c = build_surface_rotated(d)
    w = sorted(g.weight for g in c.stabilizers)
    assert w.count(2) == 2 * (d - 1) and w.count(4) == (d - 1) ** 2


@pytest.mark.parametrize("M,N", [(2, 2), (2, 3), (3, 3)])
def test_bacon_shor(M, N):
    c = build_bacon_shor(M, N)
    assert (c.n, c.k, c.g) == (M * N, 1, (M - 1) * (N - 1))
    assert _dressed_distance(c, 4).d == min(M, N)


def test_subsystem_toric():
    c = build_subsystem_toric(2)
    assert (c.n, c.k, c.g) == (12, 2, 4)
    assert _dressed_distance(c, 3).d == 2
    c3 = build_subsystem_toric(3)
    assert (c3.n, c3.k, c3.g) == (27, 2, 9)


@pytest.mark.parametrize("M", [2, 3, 4])
def test_subsystem_surface(M):
    c = build_subsystem_surface(M)
    assert (c.n, c.k, c.g) == (3 * M * M - 2 * M, 1, (M - 1) ** 2)
    if M <= 3:
        assert _dressed_distance(c, M).d == M


@pytest.mark.parametrize("L", [3, 4, 5])
def test_hgp_periodic_repetition_is_toric(L):
    H = repetition_parity_check(L, periodic=True)
    c = build_hgp(H, H)
    assert (c.n, c.k) == (2 * L * L, 2)
    if L == 3:
        assert css_distances(c) == (3, 3)


def test_hgp_hamming():
    c = build_hgp(HAMMING, HAMMING)
    assert (c.n, c.k) == (58, 16)
    assert hgp_k_formula(HAMMING, HAMMING) == 16


def _random_sparse(g, r, n, p=0.35):
    return BitMatrix((g.random((r, n)) < p).astype(np.uint8))


def test_hgp_k_formula_random():
    g = np.random.default_rng(7)
    for _ in range(20):
        H1 = _random_sparse(g, int(g.integers(1, 5)), int(g.integers(2, 6)))
        H2 = _random_sparse(g, int(g.integers(1, 5)), int(g.integers(2, 6)))
        HX, HZ = hgp_matrices(H1, H2)
        direct = HX.cols - rank(HX) - rank(HZ)
        assert direct == hgp_k_formula(H1, H2)


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_hgp_css_condition(seed):
    g = np.random.default_rng(seed)
    H1 = _random_sparse(g, int(g.integers(1, 6)), int(g.integers(1, 7)))
    H2 = _random_sparse(g, int(g.integers(1, 6)), int(g.integers(1, 7)))
    HX, HZ = hgp_matrices(H1, H2)
    assert (HX @ HZ.T).is_zero()


def _random_terms(g, l, m, count):
    pool = [(i, j) for i in range(l) for j in range(m)]
    idx = g.choice(len(pool), size=min(count, len(pool)), replace=False)
    return [pool[t] for t in idx]


def test_bb_random_instances():
    g = np.random.default_rng(11)
    for _ in range(10):
        l, m = int(g.integers(2, 7)), int(g.integers(2, 7))
        A = _random_terms(g, l, m, 3)
        B = _random_terms(g, l, m, 3)
        Am = bb_polynomial(l, m, A)
        Bm = bb_polynomial(l, m, B)
        HX = BitMatrix(np.hstack([Am, Bm]))
        HZ = BitMatrix(np.hstack([Bm.T, Am.T]))
        assert (HX @ HZ.T).is_zero()
        code = build_bb(l, m, A, B)
        assert code.n == 2 * l * m
        assert code.k == bb_k_formula(l, m, A, B)


def test_bb_gross_code():
    A = [(3, 0), (0, 1), (0, 2)]
    B = [(0, 3), (1, 0), (2, 0)]
    c = build_bb(6, 6, A, B)
    assert (c.n, c.k) == (72, 12)


def test_bb_shift_algebra():
    l, m = 3, 4
    x = bb_polynomial(l, m, [(1, 0)])
    y = bb_polynomial(l, m, [(0, 1)])
    assert np.array_equal(x @ y % 2, y @ x % 2)
    assert np.array_equal(np.linalg.matrix_power(x, l) % 2, np.eye(l * m))
    assert np.array_equal(np.linalg.matrix_power(y, m) % 2, np.eye(l * m))


def test_bb_duplicates_and_trivial():
    with pytest.raises(DuplicateTerm):
        build_bb(3, 3, [(0, 0), (0, 0), (1, 0)], [(0, 1)])
    c = build_bb(1, 1, [(0, 0)] * 3, [(0, 0)] * 3, strict=False)
    assert c.n == 2 and c.k == 0


def test_lift_example():
    C = [[[0], [1], []], [[], [0], [2]]]
    Cp = lift(C, 3)
    P = lift_permutation(3)
    assert P.tolist() == [[0, 0, 1], [1, 0, 0], [0, 1, 0]]
    assert Cp.shape == (6, 9)
    I = np.eye(3, dtype=np.uint8)
    expect = np.block([[I, P, 0 * I], [0 * I, I, P @ P % 2]])
    assert np.array_equal(Cp.array, expect)
    assert list(Cp.row_weights()) == [2] * 6
    assert list(Cp.col_weights()) == [1] * 3 + [2] * 3 + [1] * 3


def test_lifted_product_l1_matches_hgp():
    g = np.random.default_rng(3)
    for _ in range(5):
        H1 = _random_sparse(g, 3, 4, 0.5)
        H2 = _random_sparse(g, 2, 5, 0.5)
        ring = lambda H: [[[0] if b else [] for b in row] for row in H.array]  # noqa: E731
        LX, LZ = lifted_product_matrices(1, ring(H1), ring(H2))
        HX, HZ = hgp_matrices(H1, H2)
        assert LX == HX and LZ == HZ


def test_lifted_product_css():
    H = [[[0], [1], [0, 2]], [[1], [0], [2]]]
    c = build_lifted_product(5, H, H)
    HX, HZ = lifted_product_matrices(5, H, H)
    assert (HX @ HZ.T).is_zero()
    assert c.n == HX.cols


def test_registry_names_and_determinism():
    expected = {"repetition", "shor9", "steane", "five_qubit", "toric", "surface", "rotated_surface",
                "bacon_shor", "subsystem_toric", "subsystem_surface", "hgp", "bb", "lifted_product"}
    assert set(FAMILIES) == expected
    specs = [CodeSpec("toric", {"L": 3}), CodeSpec("rotated_surface", {"d": 3}),
             CodeSpec("bb", {"l": 3, "m": 3, "a": "1,0;0,1", "b": "0,0;2,2"}),
             CodeSpec("bacon_shor", {"M": 2, "N": 3}),
             CodeSpec("hgp", {"h1": [[1, 1, 0], [0, 1, 1]]})]
    for spec in specs:
        a, b = dumps_descriptor(spec.build()), dumps_descriptor(spec.build())
        assert a == b
        json.loads(a)


@pytest.mark.parametrize("maker", [lambda: build_toric(2), lambda: build_surface_unrotated(3),
                                   lambda: build_surface_rotated(3)])
def test_small_distance_equals_closed_form(maker):
    c = maker()
    assert distance_bruteforce(c).d == c.known_distance
