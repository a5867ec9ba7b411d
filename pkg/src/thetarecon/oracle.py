"""Ground-truth instances from the hyperelliptic model.

C is the hyperelliptic curve branched over a_1..a_{2g+2}; its canonical
image is the rational normal curve t -> (1, t, ..., t^{g-1}).  The 2-torsion
point is α = w_{2g+1} - w_{2g+2}, the Prym is the Jacobian of the curve
branched over a_1..a_{2g}, and the Steiner pairs are indexed by subsets
I ⊂ {1..2g} of size g-2:

    L_I  vanishes on x_i (i ∈ I) and x_{2g+1},
    L'_I vanishes on x_i (i ∈ I) and x_{2g+2},
    M_I  vanishes on y_i (i ∈ I), y_i = (1, a_i, ..., a_i^{g-2}).

With every covector monic, L_I L'_I - M_I² vanishes on the canonical image
of the double cover z² = (t - a_{2g+1})(t - a_{2g+2}).
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

import numpy as np

from . import linalg as la
from .errors import (
    BadParameter,
    DegenerateConfiguration,
    DuplicateBranchPoint,
    GroundTruthInconsistent,
    NotMonicNormalizable,
)
from .steiner import CurveContext, GroundTruth, SteinerInput, ThetaPair


@dataclass(frozen=True)
class HyperellipticConfig:
    g: int
    branch: tuple[Fraction, ...]

    def __post_init__(self):
        if self.g < 3:
            raise ValueError("genus must be at least 3")
        branch = tuple(la.to_fraction(a) for a in self.branch)
        object.__setattr__(self, "branch", branch)
        if len(branch) != 2 * self.g + 2:
            raise ValueError(f"need {2 * self.g + 2} branch points, got {len(branch)}")
        if len(set(branch)) != len(branch):
            raise DuplicateBranchPoint(f"branch points are not distinct: {branch}")

    @property
    def alpha(self) -> tuple[Fraction, Fraction]:
        """Branch values (a_{2g+1}, a_{2g+2}) of the two Weierstrass points defining α."""
        return self.branch[-2], self.branch[-1]


def random_config(g: int, seed: int, height: int = 50) -> HyperellipticConfig:
    rng = random.Random(seed)
    pool = [a for a in range(-height, height + 1)]
    return HyperellipticConfig(g, tuple(rng.sample(pool, 2 * g + 2)))


def _moment_vector(a, n):
    return la.exact_array([a**k for k in range(n)])


def canonical_points(cfg: HyperellipticConfig) -> list[np.ndarray]:
    """Canonical images x_i = (1, a_i, ..., a_i^{g-1}) of the Weierstrass points."""
    if len(set(cfg.branch)) != len(cfg.branch):
        raise DuplicateBranchPoint(str(cfg.branch))
    return [_moment_vector(a, cfg.g) for a in cfg.branch]


def prym_points(cfg: HyperellipticConfig) -> list[np.ndarray]:
    return [_moment_vector(a, cfg.g - 1) for a in cfg.branch[: 2 * cfg.g]]


def hyperplane_through(points) -> np.ndarray:
    """The monic covector (last coefficient 1) annihilating ``points``."""
    points = [la.exact_array(p) for p in points]
    kernel = la.kernel_basis(np.array(points))
    if len(kernel) != 1:
        raise DegenerateConfiguration(f"hyperplane kernel has dimension {len(kernel)}")
    v = kernel[0]
    if v[-1] == 0:
        raise NotMonicNormalizable("annihilating covector has zero last coefficient")
    return v / v[-1]


def ground_truth_phi(pairs, prym) -> np.ndarray:
    """The linear map T with T(L ∧ L') = veronese_coords(M) on every pair.

    Solved on the first spanning subset of pairs, checked on all of them.
    """
    wedges = {p.id: la.wedge_coords(p.L, p.Lp) for p in pairs}
    squares = {p.id: la.veronese_coords(prym[p.id]) for p in pairs}
    ids = [p.id for p in pairs]
    basis_ids = []
    chosen = []
    for i in ids:
        if la.rank(np.array(chosen + [wedges[i]])) > len(chosen):
            chosen.append(wedges[i])
            basis_ids.append(i)
    m = len(wedges[ids[0]])
    if len(basis_ids) != m:
        raise GroundTruthInconsistent(f"wedge points span only {len(basis_ids)} of {m}")
    a = np.array([wedges[i] for i in basis_ids]).T
    b = np.array([squares[i] for i in basis_ids]).T
    phi = b @ la.inverse(a)
    bad = [i for i in ids if not np.all(phi @ wedges[i] == squares[i])]
    if bad:
        raise GroundTruthInconsistent(f"phi fails on pairs {bad}")
    return phi


def witness_point(cfg: HyperellipticConfig, s) -> np.ndarray:
    """Point of the canonical image of the double cover at parameter ``s``.

    t(s) = (b - s² a)/(1 - s²), z(s) = s (t - a) parametrize
    z² = (t - a)(t - b); the point is (1, t, ..., t^{g-1}, z, tz, ..., t^{g-2} z).
    """
    s = la.to_fraction(s)
    if s * s == 1:
        raise BadParameter(f"s = {s} is a pole of the parametrization")
    a, b = cfg.alpha
    t = (b - s * s * a) / (1 - s * s)
    if t in cfg.branch[: 2 * cfg.g]:
        raise BadParameter(f"s = {s} lands on the branch point t = {t}")
    z = s * (t - a)
    assert z * z == (t - a) * (t - b)
    v = [t**k for k in range(cfg.g)]
    w = [z * t**k for k in range(cfg.g - 1)]
    return la.exact_array(v + w)


def sample_witnesses(cfg: HyperellipticConfig, params) -> list[np.ndarray]:
    return [witness_point(cfg, s) for s in params]


def witness_params(cfg: HyperellipticConfig, count: int, seed: int) -> list[Fraction]:
    """``count`` distinct valid parameters from a seeded generator."""
    rng = random.Random(seed)
    out: list[Fraction] = []
    tries = 0
    while len(out) < count:
        tries += 1
        if tries > 100 * count + 1000:
            raise BadParameter("could not find enough valid witness parameters")
        s = Fraction(rng.randint(-30, 30), rng.randint(1, 12))
        if s in out:
            continue
        try:
            witness_point(cfg, s)
        except BadParameter:
            continue
        out.append(s)
    return out


def generate_steiner(cfg: HyperellipticConfig, witness_count: int = 24, seed: int = 0) -> SteinerInput:
    """All C(2g, g-2) Steiner pairs with ground truth and witnesses attached."""
    g = cfg.g
    xs = canonical_points(cfg)
    ys = prym_points(cfg)
    x_a, x_b = xs[2 * g], xs[2 * g + 1]
    pairs, prym, subsets = [], {}, {}
    for ident, sub in enumerate(combinations(range(2 * g), g - 2)):
        base = [xs[i] for i in sub]
        pairs.append(ThetaPair(ident, hyperplane_through(base + [x_a]), hyperplane_through(base + [x_b])))
        prym[ident] = hyperplane_through([ys[i] for i in sub])
        subsets[ident] = tuple(i + 1 for i in sub)
    witnesses = sample_witnesses(cfg, witness_params(cfg, witness_count, seed))
    phi = ground_truth_phi(pairs, prym)
    truth = GroundTruth(
        branch_points=list(cfg.branch),
        alpha_indices=(2 * g + 1, 2 * g + 2),
        phi=phi,
        prym=prym,
        witnesses=witnesses,
        subsets=subsets,
    )
    return SteinerInput(CurveContext(g), pairs, witnesses, truth, "rational")


def true_quadrics(inp: SteinerInput) -> dict[int, np.ndarray]:
    """L L' - M² on V ⊕ W straight from the ground-truth covectors."""
    g = inp.ctx.g
    out = {}
    for p in inp.pairs:
        q = la.zeros((2 * g - 1, 2 * g - 1), True)
        q[:g, :g] = la.sym_outer(p.L, p.Lp)
        m = inp.ground_truth.prym[p.id]
        q[g:, g:] = -np.outer(m, m)
        out[p.id] = q
    return out
