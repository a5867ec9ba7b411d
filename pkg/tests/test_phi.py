import random
from fractions import Fraction

import numpy as np
import pytest

from thetarecon import linalg as la
from thetarecon.errors import DimensionMismatch, SpanDeficient
from thetarecon.phi import (
    GaugeWitness,
    PhiMap,
    compare_up_to_gl,
    expected_dim_i2,
    recover_phi,
    sym_square_matrix,
    verify_rank_one_preimages,
)
from thetarecon.steiner import CurveContext, SteinerInput, ThetaPair, wedge_points

from conftest import oracle_input


def X(v):
    return la.exact_array(v)


def recovered(inp, seed=0):
    return recover_phi(wedge_points(inp), inp.ctx, seed)


def test_expected_dims():
    assert [expected_dim_i2(g) for g in (3, 4, 5)] == [1, 6, 20]


def test_recover_hand_instance(hand):
    phi, diag = recovered(hand)
    assert diag.dim_I2 == 1
    report = verify_rank_one_preimages(phi, wedge_points(hand))
    assert report.all_ok and len(report.ok) == 6
    assert set(diag.tangent_dims.values()) == {2}
    assert set(diag.intersection_dims.values()) == {1}


def test_recover_genus_four():
    inp = oracle_input(4, 0)
    phi, diag = recovered(inp)
    assert diag.dim_I2 == 6
    report = verify_rank_one_preimages(phi, wedge_points(inp))
    assert sum(report.ok.values()) == 28
    assert set(diag.tangent_dims.values()) == {3}


def test_normalizing_point_maps_to_all_ones(hand):
    phi, diag = recovered(hand)
    q0 = dict(wedge_points(hand))[diag.normalizing_id]
    assert (phi.apply(q0) == 1).all()


def test_copies_of_one_point_are_span_deficient(hand):
    q = wedge_points(hand)[0][1]
    with pytest.raises(SpanDeficient):
        recover_phi([(k, q) for k in range(3)], hand.ctx)


def test_points_off_any_veronese_surface():
    rng = random.Random(3)
    pts = [(k, X([rng.randint(-9, 9) for _ in range(3)])) for k in range(6)]
    with pytest.raises(DimensionMismatch):
        recover_phi(pts, CurveContext(3))


def test_truth_passes_rank_one_check(hand):
    truth = PhiMap(3, hand.ground_truth.phi)
    assert verify_rank_one_preimages(truth, wedge_points(hand)).all_ok


def test_perturbed_phi_fails(hand):
    m = hand.ground_truth.phi.copy()
    m[0, 0] += 1
    report = verify_rank_one_preimages(PhiMap(3, m), wedge_points(hand))
    assert not report.all_ok


def test_identity_on_non_veronese_points_reports_failures():
    # (1, 0, 1) is the identity matrix of S²W: rank 2
    pts = [(0, X([1, 0, 1])), (1, X([1, 0, 0])), (2, X([0, 1, 3]))]
    report = verify_rank_one_preimages(PhiMap(3, la.identity(3, True)), pts)
    assert report.failures == [0, 2]
    assert report.ok[1]


# -- gauge comparison ---------------------------------------------------------------


def test_compare_diagonal_basis_change():
    phi_a = PhiMap(4, oracle_input(4, 0).ground_truth.phi)
    h = np.diag(X([1, 2, 3]))
    phi_b = PhiMap(4, sym_square_matrix(h) @ phi_a.matrix)
    w = compare_up_to_gl(phi_a, phi_b, CurveContext(4))
    assert isinstance(w, GaugeWitness)
    # h up to scale
    assert la.rank(np.array([la.sym_coords(w.h), la.sym_coords(h)])) == 1
    assert (w.scale * sym_square_matrix(w.h) == sym_square_matrix(h)).all()


def test_compare_identity():
    phi = PhiMap(3, oracle_input(3, 1).ground_truth.phi)
    w = compare_up_to_gl(phi, phi, CurveContext(3))
    assert w and (w.h == la.identity(2, True)).all() and w.scale == 1


@pytest.mark.parametrize("seed", range(5))
def test_compare_rejects_non_square_maps(seed):
    rng = random.Random(seed)
    phi = PhiMap(4, oracle_input(4, 0).ground_truth.phi)
    while True:
        r = X([[rng.randint(-5, 5) for _ in range(6)] for _ in range(6)])
        if la.rank(r) == 6:
            break
    w = compare_up_to_gl(phi, PhiMap(4, r @ phi.matrix), CurveContext(4))
    assert not w and w.reason


@pytest.mark.parametrize("g", [3, 4])
def test_two_seeds_give_equivalent_maps(g):
    inp = oracle_input(g, 5)
    a, _ = recovered(inp, 0)
    b, _ = recovered(inp, 12345)
    assert compare_up_to_gl(a, b, inp.ctx)


@pytest.mark.parametrize("g", [3, 4])
def test_rescaled_input_keeps_gauge_class(g):
    inp = oracle_input(g, 6)
    rng = random.Random(g)
    pairs = [
        ThetaPair(p.id, p.L * Fraction(rng.choice([-3, 2, 5, 7]), rng.randint(1, 4)), p.Lp * rng.choice([-1, 3, 11]))
        for p in inp.pairs
    ]
    other = SteinerInput(inp.ctx, pairs, [])
    phi, _ = recovered(other)
    assert verify_rank_one_preimages(phi, wedge_points(other)).all_ok
    assert compare_up_to_gl(PhiMap(g, inp.ground_truth.phi), phi, inp.ctx)


def test_pull_back_phi_recovers_truth_up_to_sign():
    inp = oracle_input(4, 2)
    truth = PhiMap(4, inp.ground_truth.phi)
    phi, _ = recovered(inp)
    w = compare_up_to_gl(truth, phi, inp.ctx)
    back = w.pull_back_phi(phi).matrix
    assert (back == truth.matrix).all() or (back == -truth.matrix).all()


def test_float_recovery_matches_exact():
    inp = oracle_input(3, 0, height=20)
    phi, diag = recover_phi(wedge_points(inp.to_float()), inp.ctx)
    assert not phi.exact and diag.dim_I2 == 1
    assert compare_up_to_gl(PhiMap(3, inp.ground_truth.phi), phi, inp.ctx)
