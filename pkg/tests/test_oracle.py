from fractions import Fraction
from itertools import combinations
from math import comb

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from thetarecon import linalg as la
from thetarecon.errors import (
    BadParameter,
    DegeneratePair,
    DuplicateBranchPoint,
    MalformedInput,
    SpanDeficient,
)
from thetarecon.oracle import (
    HyperellipticConfig,
    canonical_points,
    ground_truth_phi,
    hyperplane_through,
    prym_points,
    witness_point,
)
from thetarecon.steiner import SteinerInput, ThetaPair, validate_input, validate_spanning, wedge_points

from conftest import HAND_BRANCH, HAND_WITNESS, oracle_input

F = Fraction


def X(v):
    return la.exact_array(v)


# -- oracle ------------------------------------------------------------------------


def test_canonical_points():
    cfg = HyperellipticConfig(3, HAND_BRANCH)
    xs = canonical_points(cfg)
    assert list(xs[0]) == [1, 1, 1]
    assert list(xs[6]) == [1, 5, 25]
    cfg4 = HyperellipticConfig(4, (2, 1, 3, 4, 5, 6, 7, 8, 9, 10))
    assert list(canonical_points(cfg4)[0]) == [1, 2, 4, 8]


def test_duplicate_branch_points():
    with pytest.raises(DuplicateBranchPoint):
        HyperellipticConfig(3, (1, 1, 2, 3, 4, 5, 6, 7))


def test_hyperplane_examples():
    x1, x5, x6 = X([1, 1, 1]), X([1, 5, 25]), X([1, 6, 36])
    assert list(hyperplane_through([x1, x5])) == [5, -6, 1]
    assert list(hyperplane_through([x1, x6])) == [6, -7, 1]
    assert list(hyperplane_through([X([1, 1])])) == [-1, 1]


def test_hand_instance(hand):
    pair = hand.pair(0)
    assert hand.ground_truth.subsets[0] == (1,)
    assert list(pair.L) == [5, -6, 1] and list(pair.Lp) == [6, -7, 1]
    assert list(hand.ground_truth.prym[0]) == [-1, 1]
    q = la.wedge_coords(pair.L, pair.Lp)
    assert list(q) == [1, -1, 1]
    assert list(hand.ground_truth.phi @ q) == list(la.veronese_coords(X([-1, 1])))


@pytest.mark.parametrize("g, count", [(3, 6), (4, 28), (5, 120)])
def test_pair_counts(g, count):
    inp = oracle_input(g, 0)
    assert len(inp.pairs) == count == comb(2 * g, g - 2)
    assert all(p.L[-1] == 1 and p.Lp[-1] == 1 for p in inp.pairs)
    assert all(m[-1] == 1 for m in inp.ground_truth.prym.values())


def test_witness_examples():
    cfg = HyperellipticConfig(3, HAND_BRANCH)
    assert list(witness_point(cfg, 2)) == HAND_WITNESS
    p = witness_point(cfg, 0)
    assert p[1] == 6 and p[3] == 0
    with pytest.raises(BadParameter):
        witness_point(cfg, 1)
    with pytest.raises(BadParameter):
        witness_point(cfg, -1)


@pytest.mark.parametrize("g", [3, 4])
def test_truth_phi_invertible_and_non_steiner_not_square(g):
    inp = oracle_input(g, 2)
    phi = inp.ground_truth.phi
    assert la.rank(phi) == len(phi)
    # L from one pair against L' from another is not a Steiner pair
    a, b = inp.pairs[0], inp.pairs[-1]
    s = la.sym_from_coords(phi @ la.wedge_coords(a.L, b.Lp))
    # not a square; for g = 3 that means rank exactly 2
    assert la.rank(s) >= 2


@pytest.mark.parametrize("g", [3, 4])
def test_truth_phi_independent_of_solve_subset(g):
    inp = oracle_input(g, 4)
    pairs = list(reversed(inp.pairs))
    assert (ground_truth_phi(pairs, inp.ground_truth.prym) == inp.ground_truth.phi).all()


@pytest.mark.parametrize("g", [3, 4, 5])
def test_prym_squares_span(g):
    inp = oracle_input(g, 1)
    squares = [la.veronese_coords(m) for m in inp.ground_truth.prym.values()]
    assert la.rank(np.array(squares)) == g * (g - 1) // 2


@settings(max_examples=25, deadline=None)
@given(
    g=st.integers(3, 5),
    branch=st.lists(st.integers(-40, 40), min_size=12, max_size=12, unique=True),
    s=st.fractions(min_value=-20, max_value=20, max_denominator=9),
)
def test_defining_identity_holds_for_every_pair(g, branch, s):
    cfg = HyperellipticConfig(g, tuple(branch[: 2 * g + 2]))
    try:
        p = witness_point(cfg, s)
    except BadParameter:
        return
    v, w = p[:g], p[g:]
    xs, ys = canonical_points(cfg), prym_points(cfg)
    for sub in combinations(range(2 * g), g - 2):
        l = hyperplane_through([xs[i] for i in sub] + [xs[2 * g]])
        lp = hyperplane_through([xs[i] for i in sub] + [xs[2 * g + 1]])
        m = hyperplane_through([ys[i] for i in sub])
        assert (l @ v) * (lp @ v) - (m @ w) ** 2 == 0


# -- steiner model -----------------------------------------------------------------


def test_validate_oracle_input(hand):
    ctx = validate_input(hand)
    assert (ctx.g, ctx.m) == (3, 3)


def test_validate_rejects_proportional_pair(hand):
    bad = SteinerInput(hand.ctx, [ThetaPair(0, X([1, 2, 3]), X([2, 4, 6]))] + hand.pairs[1:], [])
    with pytest.raises(MalformedInput):
        validate_input(bad)
    with pytest.raises(DegeneratePair):
        wedge_points(bad)


def test_validate_rejects_wrong_length(hand):
    bad = SteinerInput(hand.ctx, [ThetaPair(0, X([1, 2]), X([2, 5]))] + hand.pairs[1:], [])
    with pytest.raises(MalformedInput) as exc:
        validate_input(bad)
    assert "pairs[0]" in str(exc.value)


def test_validate_rejects_duplicate_ids(hand):
    bad = SteinerInput(hand.ctx, hand.pairs + [hand.pairs[0]], [])
    with pytest.raises(MalformedInput):
        validate_input(bad)


def test_wedge_points_of_hand_instance(hand):
    pts = wedge_points(hand)
    assert pts[0][0] == 0 and list(pts[0][1]) == [1, -1, 1]
    prim = {tuple(la.primitive(q)) for _, q in pts}
    assert len(prim) == 6


@pytest.mark.parametrize("g, rank", [(3, 3), (4, 6)])
def test_spanning(g, rank):
    pts = wedge_points(oracle_input(g, 0))
    validate_spanning(pts, oracle_input(g, 0).ctx)
    assert la.rank(np.array([q for _, q in pts])) == rank


def test_duplicated_pair_is_span_deficient(hand):
    pts = wedge_points(hand)
    copies = [(k, pts[0][1]) for k in range(6)]
    with pytest.raises(SpanDeficient) as exc:
        validate_spanning(copies, hand.ctx)
    assert exc.value.rank == 1


def test_too_few_pairs_fails_fast(hand):
    with pytest.raises(SpanDeficient):
        validate_spanning(wedge_points(hand)[:2], hand.ctx)


@settings(max_examples=30, deadline=None)
@given(st.lists(st.fractions(min_value=-9, max_value=9, max_denominator=5).filter(bool), min_size=12, max_size=12))
def test_rescaling_and_swapping_keep_projective_points(scales):
    inp = oracle_input(3, 0)
    new = []
    for k, p in enumerate(inp.pairs):
        l, lp = p.L * scales[2 * k], p.Lp * scales[2 * k + 1]
        new.append(ThetaPair(p.id, lp, l) if k % 2 else ThetaPair(p.id, l, lp))
    other = SteinerInput(inp.ctx, new, [])
    validate_spanning(wedge_points(other), inp.ctx)
    for (_, a), (_, b) in zip(wedge_points(inp), wedge_points(other)):
        assert la.rank(np.array([a, b])) == 1
