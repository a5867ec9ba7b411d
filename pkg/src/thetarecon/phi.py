"""Recovering Φ: ∧²V -> S²W from the wedge points of a Steiner system.

The wedge points lie on the image of the quadratic Veronese embedding of
P(W) under Φ⁻¹.  We find that embedding from the points alone:

1. I₂ = quadrics through all wedge points (the Veronese ideal in degree 2).
2. The tangent space of that variety at the image of m² is Φ⁻¹(m·W).
3. Two tangent spaces at m_a², m_b² meet in the line Φ⁻¹(m_a m_b).
4. g-1 points with independent m_a give a basis u_a ~ m_a², r_ab ~ m_a m_b
   of ∧²V; one more point q₀ fixes the scales by declaring Φ(q₀) = (Σ f_a)².

Φ is only determined up to a linear change of coordinates on W (and an
overall scalar); :func:`compare_up_to_gl` decides that equivalence.
"""

from __future__ import annotations

import logging
import random
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb

import numpy as np

from . import linalg as la
from .errors import (
    DimensionMismatch,
    MaxRestartsExceeded,
    NoSolution,
    NonUnique,
    PhiVerificationFailed,
    RankOneFactorFailed,
)
from .steiner import CurveContext, validate_spanning

log = logging.getLogger(__name__)


@dataclass
class PhiMap:
    """Matrix of Φ: columns indexed by e_i∧e_j (i<j), rows by S²W coordinates (a<=b)."""

    g: int
    matrix: np.ndarray

    @property
    def exact(self) -> bool:
        return la.is_exact(self.matrix)

    def coords(self, q) -> np.ndarray:
        return self.matrix @ np.asarray(q)

    def apply(self, q) -> np.ndarray:
        """Φ(q) as a symmetric (g-1)×(g-1) matrix."""
        return la.sym_from_coords(self.coords(q))

    def inverse_matrix(self, tol: float = la.DEFAULT_TOL) -> np.ndarray:
        return la.inverse(self.matrix, tol)


@dataclass
class RecoveryDiagnostics:
    dim_I2: int
    chosen_basis_ids: list
    normalizing_id: object
    restarts_used: int
    tangent_dims: dict = field(default_factory=dict)
    intersection_dims: dict = field(default_factory=dict)
    rank1_residuals: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        return {
            "dim_I2": self.dim_I2,
            "chosen_basis_ids": list(self.chosen_basis_ids),
            "normalizing_id": self.normalizing_id,
            "restarts_used": self.restarts_used,
            "tangent_dims": {str(k): v for k, v in self.tangent_dims.items()},
            "intersection_dims": {f"{a},{b}": v for (a, b), v in self.intersection_dims.items()},
            "rank1_residuals": {str(k): v for k, v in self.rank1_residuals.items()},
        }


@dataclass
class RankOneReport:
    ok: dict
    worst_residual: float

    @property
    def all_ok(self) -> bool:
        return all(self.ok.values())

    @property
    def failures(self) -> list:
        return [k for k, v in self.ok.items() if not v]


def expected_dim_i2(g: int) -> int:
    """Quadrics vanishing on the Veronese image of P^{g-2} in P(S²W)."""
    m = g * (g - 1) // 2
    return comb(m + 1, 2) - comb(g + 2, 4)


def _unpack(points):
    ids = [i for i, _ in points]
    vecs = [np.asarray(q) for _, q in points]
    return ids, vecs


def _nonzero(x, scale, tol) -> bool:
    if isinstance(x, Fraction):
        return x != 0
    return abs(x) > np.sqrt(tol) * scale


def tangent_spaces(i2, vecs, indices, tol=la.DEFAULT_TOL) -> dict:
    return {i: la.tangent_space_at(i2, vecs[i], tol) for i in indices}


def _attempt(i2, vecs, idx, ctx, tangents, tol):
    """One trial of steps 2-4 for basis indices idx[:-1] and normalizer idx[-1].

    Returns the Φ matrix and the intersection dimensions, or None when the
    choice is degenerate.
    """
    n = ctx.dim_w
    basis_idx, i0 = idx[:-1], idx[-1]
    for i in idx:
        if i not in tangents:
            tangents[i] = la.tangent_space_at(i2, vecs[i], tol)
        if len(tangents[i]) != n:
            raise DimensionMismatch(
                f"tangent space at point {i} has dimension {len(tangents[i])}, expected {n}"
            )
    cross = {}
    inter_dims = {}
    for a in range(n):
        for b in range(a + 1, n):
            meet = la.subspace_intersection(tangents[basis_idx[a]], tangents[basis_idx[b]], tol)
            inter_dims[(a, b)] = len(meet)
            if len(meet) != 1:
                return None, inter_dims
            cross[(a, b)] = meet[0]
    exact = la.is_exact(vecs[0])
    # columns in S²W coordinate order (a, b), a <= b
    columns = []
    for a, b in la.sym_index(n):
        columns.append(vecs[basis_idx[a]] if a == b else cross[(a, b)])
    basis = np.array(columns).T
    if not exact:
        basis = basis.astype(float)
    try:
        coeffs = la.solve_exact(basis, vecs[i0], tol)
    except (NoSolution, NonUnique):
        return None, inter_dims
    scale = 1.0 if exact else np.linalg.norm(vecs[i0])
    if not all(_nonzero(c, scale, tol) for c in coeffs):
        return None, inter_dims
    # Φ⁻¹ sends the coordinate unit vector (a, b) to coeff·column, so that
    # Φ(q₀) is the all-ones matrix (Σ f_a)².
    phi_inv = basis * coeffs[np.newaxis, :]
    try:
        return la.inverse(phi_inv, tol), inter_dims
    except NonUnique:
        return None, inter_dims


def verify_rank_one_preimages(phi: PhiMap, points, tol: float = la.DEFAULT_TOL) -> RankOneReport:
    """Check that Φ sends every wedge point to a rank-1 form."""
    ok = {}
    worst = 0.0
    for ident, q in points:
        s = phi.apply(q)
        if phi.exact:
            good = la.rank(s) == 1
            res = 0.0 if good else la.rank_one_residual(la.float_array(s))
        else:
            res = la.rank_one_residual(s)
            good = res <= tol and np.linalg.norm(s) > 0
        ok[ident] = bool(good)
        worst = max(worst, res)
    return RankOneReport(ok, worst)


def recover_phi(
    points,
    ctx: CurveContext,
    seed: int = 0,
    max_restarts: int = 64,
    tol: float = la.DEFAULT_TOL,
) -> tuple[PhiMap, RecoveryDiagnostics]:
    """Recover Φ (up to GL(W)) from ``(id, wedge point)`` pairs."""
    validate_spanning(points, ctx, tol)
    ids, vecs = _unpack(points)
    exact = la.is_exact(vecs[0])
    if not exact:
        # unit length but never negated: Φ(q₀) = J must refer to the input's own
        # representative so that signs match the exact backend
        vecs = [np.asarray(v, dtype=float) / np.linalg.norm(np.asarray(v, dtype=float)) for v in vecs]
    i2 = la.quadrics_through_points(vecs, tol)
    want = expected_dim_i2(ctx.g)
    if len(i2) != want:
        raise DimensionMismatch(f"found {len(i2)} quadrics through the wedge points, expected {want}")

    rng = random.Random(seed)
    tangents: dict = {}
    last_failures: list = []
    for attempt in range(max_restarts + 1):
        idx = rng.sample(range(len(vecs)), ctx.dim_w + 1)
        matrix, inter_dims = _attempt(i2, vecs, idx, ctx, tangents, tol)
        if matrix is None:
            log.debug("attempt %d: degenerate index choice %s", attempt, idx)
            continue
        phi = PhiMap(ctx.g, matrix)
        report = verify_rank_one_preimages(phi, list(zip(ids, vecs)), tol)
        if not report.all_ok:
            last_failures = report.failures
            log.debug("attempt %d: rank-1 verification failed on %s", attempt, last_failures)
            continue
        diag = RecoveryDiagnostics(
            dim_I2=len(i2),
            chosen_basis_ids=[ids[i] for i in idx[:-1]],
            normalizing_id=ids[idx[-1]],
            restarts_used=attempt,
            tangent_dims={ids[i]: len(tangents[i]) for i in idx},
            intersection_dims=inter_dims,
        )
        if not exact:
            residuals = {}
            for ident, q in zip(ids, vecs):
                residuals[ident] = la.rank_one_residual(phi.apply(q))
            diag.rank1_residuals = residuals
        return phi, diag
    if last_failures:
        raise PhiVerificationFailed(last_failures)
    raise MaxRestartsExceeded(f"no usable index choice in {max_restarts + 1} attempts")


# -- gauge comparison ---------------------------------------------------------


@dataclass
class GaugeWitness:
    """phi_b = scale · S²h ∘ phi_a, with S²h acting on forms by S -> h S hᵀ."""

    h: np.ndarray
    scale: object

    def __bool__(self) -> bool:
        return True

    def _h_inv(self):
        return la.inverse(self.h)

    def pull_back_form(self, s) -> np.ndarray:
        """A W-form written for phi_b, expressed in phi_a's W-coordinates.

        This is the congruence by h⁻¹ divided by |scale|; over C it is the
        substitution w -> h⁻ᵀ w / sqrt|scale|, so zero sets correspond while
        everything stays rational.
        """
        hi = self._h_inv()
        return hi @ np.asarray(s) @ hi.T / abs(self.scale)

    def pull_back_quadric(self, q, g: int) -> np.ndarray:
        q = np.asarray(q)
        if any(x != 0 for x in q[:g, g:].ravel()) and la.is_exact(q):
            raise ValueError("pull-back needs a block-diagonal quadric")
        out = q.copy()
        out[:g, g:] = 0
        out[g:, :g] = 0
        out[g:, g:] = self.pull_back_form(q[g:, g:])
        return out

    def pull_back_phi(self, phi_b: PhiMap) -> PhiMap:
        """S²(h⁻¹) ∘ phi_b / |scale|, which equals ±phi_a."""
        return PhiMap(phi_b.g, sym_square_matrix(self._h_inv()) @ phi_b.matrix / abs(self.scale))


@dataclass
class Mismatch:
    reason: str

    def __bool__(self) -> bool:
        return False


def _close(x, y, tol) -> bool:
    if la.is_exact(x) or la.is_exact(y):
        return bool(np.all(np.asarray(x) == np.asarray(y)))
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    scale = max(np.linalg.norm(x), np.linalg.norm(y), np.finfo(float).tiny)
    return np.linalg.norm(x - y) <= tol * scale


def sym_square_matrix(h) -> np.ndarray:
    """Matrix of S -> h S hᵀ on symmetric-matrix coordinates."""
    n = h.shape[0]
    exact = la.is_exact(h)
    idx = la.sym_index(n)
    out = la.zeros((len(idx), len(idx)), exact)
    for k, (a, b) in enumerate(idx):
        unit = la.zeros(len(idx), exact)
        unit[k] = Fraction(1) if exact else 1.0
        out[:, k] = la.sym_coords(h @ la.sym_from_coords(unit) @ h.T)
    return out


def compare_up_to_gl(phi_a: PhiMap, phi_b: PhiMap, ctx: CurveContext, tol: float = la.DEFAULT_TOL):
    """Decide whether phi_b = c · S²h ∘ phi_a for some invertible h on W.

    Returns a :class:`GaugeWitness` or a :class:`Mismatch` (never raises on
    mismatch).
    """
    n = ctx.dim_w
    exact = phi_a.exact and phi_b.exact
    a_mat, b_mat = phi_a.matrix, phi_b.matrix
    if not exact:
        a_mat, b_mat = la.float_array(a_mat), la.float_array(b_mat)
    cmp_tol = max(tol, 1e-6)
    try:
        psi = b_mat @ la.inverse(a_mat, tol)
    except NonUnique:
        return Mismatch("phi_a is singular")
    col = {ab: psi[:, k] for k, ab in enumerate(la.sym_index(n))}

    vs, cs = [], []
    for a in range(n):
        try:
            v, c = la.rank_one_factor(la.sym_from_coords(col[(a, a)]), cmp_tol)
        except RankOneFactorFailed as exc:
            return Mismatch(f"image of f_{a}^2 is not a square (rank {exc.rank})")
        vs.append(v)
        cs.append(c)

    rho = {}
    for a in range(n):
        for b in range(a + 1, n):
            x = la.sym_from_coords(col[(a, b)])
            y = np.outer(vs[a], vs[b]) + np.outer(vs[b], vs[a])
            flat = np.abs(la.float_array(y)).ravel()
            k = int(np.argmax(flat))
            r = x.ravel()[k] / y.ravel()[k]
            if not _close(x, r * y, cmp_tol):
                return Mismatch(f"image of f_{a} f_{b} is not proportional to the expected product")
            rho[(a, b)] = r

    kappa = cs[0]
    sigma = [Fraction(1) if exact else 1.0]
    for b in range(1, n):
        sigma.append(rho[(0, b)] / kappa)
    h = np.array([vs[a] * sigma[a] for a in range(n)]).T
    if not exact:
        h = h.astype(float)
    if la.rank(h, tol) < n:
        return Mismatch("basis change is singular")
    if not _close(psi, kappa * sym_square_matrix(h), cmp_tol):
        return Mismatch("psi is not the symmetric square of a linear map")
    return GaugeWitness(h, kappa)
