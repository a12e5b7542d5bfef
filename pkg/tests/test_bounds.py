from __future__ import annotations

import itertools
import math
from fractions import Fraction

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qecforge.bounds import (
    BoundReport,
    Status,
    ThresholdParams,
    bpt_diagnostic,
    bpt_trend,
    cluster_count_bound,
    code_adjacency_stats,
    gv_asymptotic_rate,
    gv_check,
    gv_rate_root,
    hamming_check,
    local_stochastic_prob,
    macwilliams_check,
    msd_yield,
    overhead,
    qldpc_logical_bound,
    qldpc_noisy_bounds,
    qldpc_threshold,
    required_levels,
    singleton_check,
    threshold_recursion,
    weight_enumerators,
)
from qecforge.codes import (
    build_five_qubit,
    build_repetition,
    build_shor9,
    build_steane,
    build_surface_rotated,
    build_toric,
)
from qecforge.stabilizer import trivial_code

from oracles import dense_pauli


# --- exact bound checks -----------------------------------------------------

def test_hamming_examples():
    r = hamming_check(5, 1, 3)
    assert (r.lhs, r.rhs, r.status) == (32, 32, Status.SATURATED)
    r = hamming_check(7, 1, 3)
    assert (r.lhs, r.rhs, r.status) == (44, 128, Status.SATISFIED)
    assert hamming_check(1, 1, 1).status is Status.SATURATED


def test_singleton_examples():
    assert singleton_check(5, 1, 3).status is Status.SATURATED
    assert singleton_check(4, 2, 2).status is Status.SATURATED
    assert singleton_check(9, 1, 3).status is Status.SATISFIED
    assert singleton_check(6, 0, 4).status is Status.NOT_APPLICABLE
    assert singleton_check(5, 1, 4).status is Status.VIOLATED


def test_gv_five_qubit_not_guaranteed():
    """The integer sum exceeds the budget even though the code exists."""
    r = gv_check(5, 1, 3)
    assert (r.lhs, r.rhs) == (1 + 15 + 90, 16)
    assert r.status is Status.VIOLATED
    assert gv_check(20, 1, 2).status is Status.SATISFIED


def test_gv_asymptotic_rate_and_root():
    assert gv_asymptotic_rate(0.0) == 1.0
    root = gv_rate_root()
    assert 0.18 < root < 0.19
    assert abs(gv_asymptotic_rate(root)) < 1e-5
    with pytest.raises(ValueError):
        gv_asymptotic_rate(1.5)


def test_saturated_requires_equality():
    with pytest.raises(ValueError):
        BoundReport("x", 3, 4, Status.SATURATED)


@given(st.integers(1, 40), st.integers(0, 40), st.integers(1, 12))
@settings(max_examples=200, deadline=None)
def test_hamming_matches_float_sum(n, k, d):
    """Exact integer lhs agrees with a float log-domain evaluation of the same sum."""
    k = min(k, n)
    r = hamming_check(n, k, d)
    t = (d - 1) // 2
    s = sum(math.comb(n, j) * 3.0 ** j for j in range(t + 1))
    assert math.isclose(float(r.lhs), 2.0 ** k * s, rel_tol=1e-12)
    assert (r.status is Status.VIOLATED) == (r.lhs > 2 ** n)


def test_singleton_holds_for_constructed_codes():
    for code, d in [(build_five_qubit(), 3), (build_steane(), 3), (build_shor9(), 3),
                    (build_toric(3), 3), (build_surface_rotated(5), 5)]:
        assert singleton_check(code.n, code.k, d).status in (Status.SATISFIED, Status.SATURATED)


def test_bpt_surface_constant_and_linear_flagged():
    pts = [(L * L, 1, L) for L in (3, 5, 7, 9)]
    ratios, flagged = bpt_trend(pts, 2)
    assert max(ratios) == pytest.approx(min(ratios))
    assert not flagged
    _, flagged = bpt_trend([(n, n // 10, n // 10) for n in (100, 200, 400)], 2)
    assert flagged
    assert bpt_diagnostic(10, 3, 1, 2) == pytest.approx(0.3)


# --- weight enumerators -----------------------------------------------------

def _dense_enumerators(code):
    """A_j = |tr(E P)|^2 / K^2 and B_j = tr(E P E^dag P) / K from the dense projector."""
    n, K = code.n, 2 ** code.k
    dim = 2 ** n
    P = np.eye(dim, dtype=complex)
    for g in code.stabilizers:
        P = P @ (np.eye(dim) + dense_pauli(str(g))) / 2
    A = np.zeros(n + 1)
    B = np.zeros(n + 1)
    for word in itertools.product("IXYZ", repeat=n):
        E = dense_pauli("".join(word))
        w = sum(ch != "I" for ch in word)
        A[w] += abs(np.trace(E @ P)) ** 2 / K ** 2
        B[w] += np.trace(E @ P @ E.conj().T @ P).real / K
    return np.rint(A).astype(int), np.rint(B).astype(int)


def test_five_qubit_enumerators_match_dense_traces():
    code = build_five_qubit()
    W = weight_enumerators(code)
    A, B = _dense_enumerators(code)
    assert W.A == tuple(A) == (1, 0, 0, 0, 15, 0)
    assert W.B == tuple(B)
    assert W.B[3] == 30
    assert W.constraints_hold(3)
    assert macwilliams_check(W)


def test_steane_enumerators():
    W = weight_enumerators(build_steane())
    assert W.constraints_hold(3)
    assert W.B[3] > W.A[3]
    assert sum(W.A) == 2 ** 6 and sum(W.B) == 2 ** 8
    assert macwilliams_check(W)
    assert W.min_distance() == 3


def test_trivial_code_counts_all_paulis():
    W = weight_enumerators(trivial_code(3))
    assert W.A == (1, 0, 0, 0)
    assert W.B == tuple(math.comb(3, j) * 3 ** j for j in range(4))
    assert macwilliams_check(W)


def test_macwilliams_rejects_tampered_enumerator():
    W = weight_enumerators(build_five_qubit())
    bad = type(W)(W.A, W.B[:3] + (W.B[3] + 1,) + W.B[4:], W.n, W.k)
    assert not macwilliams_check(bad)


@pytest.mark.parametrize("code", [build_repetition(5), build_shor9(), build_toric(2)])
def test_enumerator_invariants(code):
    W = weight_enumerators(code)
    assert W.constraints_hold()
    assert macwilliams_check(W)
    assert sum(W.A) == 2 ** code.m


# --- threshold recursion ----------------------------------------------------

def test_t1_closed_form_example():
    res = threshold_recursion(ThresholdParams(1e4, 1, 1e-5), 3)
    assert float(res.levels[3]) == pytest.approx(1e-12, rel=1e-12)
    assert not res.diverged


@given(st.floats(1.0, 1e6), st.floats(1e-9, 1.0))
@settings(max_examples=100, deadline=None)
def test_t1_iterate_equals_closed_form(A, frac):
    """For t = 1 the iteration and lambda^(2^l) / A agree to relative 1e-12."""
    p = frac / A
    params = ThresholdParams(A, 1, p)
    res = threshold_recursion(params, 10)
    lam = mpmath.mpf(A) * mpmath.mpf(p)
    for l, v in enumerate(res.levels):
        ref = lam ** (2 ** l) / mpmath.mpf(A)
        if ref == 0:
            continue
        assert abs(v - ref) / ref < 1e-12


def test_general_t_closed_form():
    params = ThresholdParams(250.0, 2, 1e-3)
    res = threshold_recursion(params, 6)
    for it, cf in zip(res.levels, res.closed_form):
        assert abs(it - cf) / cf < mpmath.mpf(10) ** -30


def test_boundary_and_level_zero():
    params = ThresholdParams(100.0, 1, 0.01)
    res = threshold_recursion(params, 5)
    assert res.diverged
    assert all(abs(v - mpmath.mpf(0.01)) < 1e-15 for v in res.levels)
    assert float(res.threshold) == pytest.approx(0.01)
    assert threshold_recursion(ThresholdParams(5.0, 2, 0.3), 0).levels == (mpmath.mpf(0.3),)


def test_required_levels_and_overhead():
    params = ThresholdParams(1e4, 1, 1e-5)
    l = required_levels(1e6, 1e-3, params)
    res = threshold_recursion(params, l)
    assert 1e6 * res.levels[l] <= 1e-3 < 1e6 * res.levels[l - 1]
    assert required_levels(1e6, 1e-3, ThresholdParams(1e4, 1, 2e-4)) is None
    assert overhead(7, 3) == 343


def test_threshold_params_validation():
    with pytest.raises(ValueError):
        ThresholdParams(0.0, 1, 0.1)
    with pytest.raises(ValueError):
        ThresholdParams(1.0, 1, 1.5)


# --- qLDPC bounds -----------------------------------------------------------

def test_qldpc_threshold_value():
    expected = (2 * 3 * 4 * math.e) ** -2
    assert float(qldpc_threshold(4, 4)) == pytest.approx(expected, rel=1e-12)


def test_qldpc_bound_quarter_threshold():
    """At p = p0/4 the power factor is exactly 2^-d."""
    r, c, n = 4, 4, 100
    p0 = qldpc_threshold(r, c)
    alpha = (r - 1) * c * mpmath.e
    for d in (3, 5, 8):
        b = qldpc_logical_bound(n, d, p0 / 4, r, c)
        pref = n / (alpha * (1 - 2 * alpha * mpmath.sqrt(p0 / 4)))
        assert abs(b.value / pref - mpmath.mpf(2) ** -d) < mpmath.mpf(10) ** -40


def test_qldpc_bound_monotone_and_divergence():
    p0 = qldpc_threshold(3, 3)
    vals = [qldpc_logical_bound(50, d, p0 / 10, 3, 3).value for d in range(2, 10)]
    assert all(a > b for a, b in zip(vals, vals[1:]))
    assert qldpc_logical_bound(50, 5, p0, 3, 3).diverged
    with pytest.raises(ValueError):
        qldpc_threshold(1, 3)


def test_noisy_bounds_formulas():
    n, d, z = 40, 6, 3
    ze = z * mpmath.e
    p_i, p_f = (2 * ze) ** -2, (2 * ze) ** -4
    p1, p2 = p_f / 16, p_f / 81
    nb = qldpc_noisy_bounds(n, d, z, p1, p2)
    assert nb.T == d
    assert nb.p_i == p_i and nb.p_f == p_f
    exp1 = n * d / (ze * (1 - 2 * ze * mpmath.sqrt(p1))) * (p1 / p_i) ** 3
    exp2 = n / (ze * (1 - 2 * ze * p1 ** 0.25)) * mpmath.mpf(2) ** -d
    exp3 = n / (ze * (1 - 2 * ze * mpmath.sqrt(p2))) * (p2 / p_i) ** 3
    exp4 = n / (ze * (1 - 2 * ze * p2 ** 0.25)) * mpmath.mpf(3) ** -1 * (p2 / p_f) ** (mpmath.mpf(d) / 2)
    for got, exp in zip(nb.as_list(), (exp1, exp2, exp3, exp4)):
        assert not got.diverged
        assert abs(got.value - exp) / exp < mpmath.mpf(10) ** -40


def test_noisy_bounds_general_T_and_zero():
    n, d, z = 40, 6, 3
    p = qldpc_noisy_bounds(n, d, z, 1e-9).p_f / 100
    a = qldpc_noisy_bounds(n, d, z, p, T=4).type4.value
    b = qldpc_noisy_bounds(n, d, z, p, T=6).type4.value
    assert abs(b / a - (p / qldpc_noisy_bounds(n, d, z, p).p_f)) < 1e-30
    assert all(bv.value == 0 for bv in qldpc_noisy_bounds(n, d, z, 0.0).as_list())


def test_noisy_bounds_divergence_flags():
    nb = qldpc_noisy_bounds(10, 3, 2, 0.5)
    assert all(bv.diverged for bv in nb.as_list())
    mid = qldpc_noisy_bounds(10, 3, 2, qldpc_noisy_bounds(10, 3, 2, 0).p_f * 2)
    assert not mid.type1.diverged and mid.type2.diverged


# --- magic state distillation -----------------------------------------------

def test_msd_identity_sampled():
    rng = np.random.default_rng(5)
    for p in rng.random(100):
        y = msd_yield(float(p))
        assert y.accept == pytest.approx(1 - 10 * p * (1 - p) ** 9, abs=1e-15)
        assert 0 <= y.output_error <= 1


def test_msd_exact_rational():
    p = Fraction(1, 7)
    y = msd_yield(p)
    assert y.accept == 1 - 10 * p * (1 - p) ** 9
    assert y.reject == 10 * p * (1 - p) ** 9
    assert msd_yield(0.0).accept == 1 and msd_yield(0.0).output_error == 0


def test_msd_quadratic_suppression():
    ratios = [msd_yield(p).output_error / p ** 2 for p in (1e-2, 1e-3, 1e-4)]
    assert (max(ratios) - min(ratios)) / min(ratios) < 0.05
    assert ratios[-1] == pytest.approx(45, rel=1e-3)


# --- adjacency and local stochastic helpers ----------------------------------

def test_adjacency_stats_examples():
    toric = code_adjacency_stats(build_toric(4))
    assert (toric.r, toric.c) == (4, 4)
    assert toric.degree_bound == 12 and toric.bound_holds
    rep = code_adjacency_stats(build_repetition(3))
    assert (rep.r, rep.c, rep.degree_bound, rep.max_degree) == (2, 2, 2, 2)
    steane = code_adjacency_stats(build_steane())
    assert steane.r == 4 and steane.bound_holds


def test_adjacency_degree_brute_force():
    """Degree counted from pairwise shared supports."""
    code = build_surface_rotated(3)
    stats = code_adjacency_stats(code)
    supports = [set(g.support) for g in code.measured_checks]
    deg = [len({b for s in supports if a in s for b in s} - {a}) for a in range(code.n)]
    assert stats.max_degree == max(deg)


def test_local_stochastic_helpers():
    assert local_stochastic_prob(0.3, 1) == 0.3
    assert local_stochastic_prob(0.01, 3) == pytest.approx(1e-6)
    assert cluster_count_bound(4, 1, 17) == 17
    assert float(cluster_count_bound(2, 3, 5)) == pytest.approx(5 * (2 * math.e) ** 2)
