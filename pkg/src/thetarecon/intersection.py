"""Checks that the assembled quadrics cut out the curve, as far as linear
algebra and point membership can tell."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations_with_replacement

import numpy as np

from . import linalg as la
from .errors import UnsupportedDegree
from .steiner import CurveContext

SUPPORTED_DEGREES = (2, 3, 4)


@dataclass
class VerificationReport:
    n_quadrics: int
    span_dim_total: int
    span_dim_V_block: int
    span_dim_W_block: int
    graded_dims: dict
    witness_results: list = field(default_factory=list)
    all_vanish: bool = True

    @property
    def offending_ids(self) -> list:
        bad = set()
        for row in self.witness_results:
            bad.update(k for k, ok in row["vanishes"].items() if not ok)
        return sorted(bad)

    def as_dict(self) -> dict:
        return {
            "n_quadrics": self.n_quadrics,
            "span_dim_total": self.span_dim_total,
            "span_dim_V_block": self.span_dim_V_block,
            "span_dim_W_block": self.span_dim_W_block,
            "graded_dims": {str(d): v for d, v in sorted(self.graded_dims.items())},
            "witness_results": self.witness_results,
            "all_vanish": self.all_vanish,
        }


def _matrix(q):
    return np.asarray(getattr(q, "matrix", q))


@lru_cache(maxsize=None)
def _monomials(n: int, d: int) -> tuple[tuple[int, ...], ...]:
    out = []
    for combo in combinations_with_replacement(range(n), d):
        e = [0] * n
        for i in combo:
            e[i] += 1
        out.append(tuple(e))
    return tuple(out)


def _polynomial(s) -> dict:
    """Monomial exponent -> coefficient of xᵀ S x."""
    n = s.shape[0]
    poly = {}
    for i, j in la.sym_index(n):
        c = s[i, j] if i == j else 2 * s[i, j]
        if c != 0:
            e = [0] * n
            e[i] += 1
            e[j] += 1
            poly[tuple(e)] = c
    return poly


def _span_basis(mats, tol):
    vecs = [la.sym_coords(m) for m in mats]
    if vecs and not la.is_exact(vecs[0]):
        vecs = [v / np.linalg.norm(v) for v in vecs if np.linalg.norm(v) > 0]
    return [la.sym_from_coords(v) for v in la.column_span_basis(vecs, tol)]


def graded_ideal_dim(quadrics, d: int, tol: float = la.DEFAULT_TOL) -> int:
    """Dimension of the degree-d part of the ideal generated by the quadrics."""
    if d not in SUPPORTED_DEGREES:
        raise UnsupportedDegree(f"degree {d} not in {SUPPORTED_DEGREES}")
    mats = [_matrix(q) for q in quadrics]
    if not mats:
        return 0
    n = mats[0].shape[0]
    exact = la.is_exact(mats[0])
    basis = _span_basis(mats, tol)
    if d == 2:
        return len(basis)
    target = {e: k for k, e in enumerate(_monomials(n, d))}
    rows = []
    for s in basis:
        poly = _polynomial(s)
        for mono in _monomials(n, d - 2):
            row = la.zeros(len(target), exact)
            for e, c in poly.items():
                row[target[tuple(a + b for a, b in zip(e, mono))]] = c
            rows.append(row)
    return la.rank(np.array(rows), tol)


def _residual(s, p):
    val = la.evaluate_form(s, p)
    if la.is_exact(s):
        return abs(val)
    scale = np.linalg.norm(s) * float(np.dot(p, p))
    return abs(val) / scale if scale > 0 else 0.0


def membership(quadrics, p, tol: float = la.DEFAULT_TOL) -> tuple[bool, object]:
    """Whether every quadric vanishes at ``p`` and the largest residual.

    Exact residuals are |Q(p)|; float residuals are |Q(p)| / (‖Q‖ ‖p‖²).
    """
    p = np.asarray(p)
    if not any(x != 0 for x in p):
        raise ValueError("membership of the zero vector is undefined")
    worst = Fraction(0) if la.is_exact(p) else 0.0
    for q in quadrics:
        worst = max(worst, _residual(_matrix(q), p))
    if la.is_exact(p):
        return worst == 0, worst
    return worst <= tol, worst


def _fmt(x) -> str:
    return str(x) if isinstance(x, Fraction) else repr(float(x))


def verify_reconstruction(
    quadrics, witnesses, ctx: CurveContext, degrees=(2, 3), tol: float = la.DEFAULT_TOL, gauge=None
) -> VerificationReport:
    """Span and graded dimensions of the quadrics plus witness membership.

    ``gauge`` (a GaugeWitness from the witnesses' Φ to the quadrics' Φ)
    is applied to each quadric before evaluating it at the witnesses.
    """
    g = ctx.g
    mats = [_matrix(q) for q in quadrics]
    eval_mats = mats if gauge is None else [gauge.pull_back_quadric(m, g) for m in mats]
    if not mats:
        raise ValueError("no quadrics to verify")
    ids = [getattr(q, "id", k) for k, q in enumerate(quadrics)]
    v_blocks = [m[:g, :g] for m in mats]
    w_blocks = [m[g:, g:] for m in mats]
    graded = {d: graded_ideal_dim(mats, d, tol) for d in degrees}
    if 2 not in graded:
        graded[2] = graded_ideal_dim(mats, 2, tol)
    results = []
    all_vanish = True
    for k, p in enumerate(witnesses):
        residuals, vanishes = {}, {}
        for ident, m in zip(ids, eval_mats):
            r = _residual(m, p)
            ok = r == 0 if la.is_exact(m) else r <= tol
            residuals[str(ident)] = _fmt(r)
            vanishes[str(ident)] = bool(ok)
            all_vanish &= bool(ok)
        results.append({"witness": k, "residuals": residuals, "vanishes": vanishes})
    return VerificationReport(
        n_quadrics=len(mats),
        span_dim_total=graded[2],
        span_dim_V_block=len(_span_basis(v_blocks, tol)),
        span_dim_W_block=len(_span_basis(w_blocks, tol)),
        graded_dims=graded,
        witness_results=results,
        all_vanish=all_vanish,
    )
