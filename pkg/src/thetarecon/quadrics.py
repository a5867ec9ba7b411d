"""Prym hyperplanes and the quadrics Q = L L' + ε Φ(L ∧ L') on V ⊕ W.

Coordinates on V ⊕ W are (v_0..v_{g-1}, w_0..w_{g-2}).  Each quadric is
block diagonal: the V block is the symmetric product of the two theta
hyperplanes, the W block is ε times the square M² = Φ(L ∧ L').

The sign ε is needed because L ∧ L' changes sign when the unordered pair
{L, L'} is written in the other order; it is recovered from points known to
lie on the curve.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import linalg as la
from .errors import AmbiguousSign, MissingSign, NoSolution, NonUnique, NoWitnesses, RankOneFactorFailed
from .phi import PhiMap
from .steiner import SteinerInput, ThetaPair


@dataclass
class Quadric:
    id: int
    sign: int
    matrix: np.ndarray

    def blocks(self, g: int):
        m = self.matrix
        return m[:g, :g], m[g:, g:], m[:g, g:]


def prym_hyperplanes(phi: PhiMap, points, tol: float = la.DEFAULT_TOL) -> dict:
    """id -> (M, c) with Φ(L ∧ L') = c M Mᵀ and M primitive."""
    out = {}
    for ident, q in points:
        try:
            out[ident] = la.rank_one_factor(phi.apply(q), tol, ident)
        except RankOneFactorFailed as exc:
            exc.ident = ident
            raise
    return out


def raw_quadric(pair: ThetaPair, phi: PhiMap, sign: int) -> np.ndarray:
    g = len(pair.L)
    exact = la.is_exact(pair.L)
    q = la.zeros((2 * g - 1, 2 * g - 1), exact)
    q[:g, :g] = la.sym_outer(pair.L, pair.Lp)
    w_block = phi.apply(la.wedge_coords(pair.L, pair.Lp))
    q[g:, g:] = w_block * sign
    return q


def normalize_quadric(q, tol: float = la.DEFAULT_TOL) -> np.ndarray:
    """Scale so the first nonzero entry (row-major) is 1."""
    flat = q.ravel()
    if la.is_exact(q):
        lead = next(x for x in flat if x != 0)
    else:
        cut = tol * np.abs(flat).max()
        lead = flat[np.flatnonzero(np.abs(flat) > cut)[0]]
    return q / lead


def assemble_quadrics(inp: SteinerInput, phi: PhiMap, signs: dict, tol: float = la.DEFAULT_TOL) -> list[Quadric]:
    out = []
    for pair in inp.pairs:
        if pair.id not in signs:
            raise MissingSign(f"no sign for pair {pair.id}")
        eps = signs[pair.id]
        out.append(Quadric(pair.id, eps, normalize_quadric(raw_quadric(pair, phi, eps), tol)))
    return out


def _sign_terms(pair: ThetaPair, phi: PhiMap, witnesses):
    """Per witness: (L(v) L'(v), wᵀ Φ(L∧L') w)."""
    g = len(pair.L)
    w_block = phi.apply(la.wedge_coords(pair.L, pair.Lp))
    terms = []
    for p in witnesses:
        v, w = p[:g], p[g:]
        terms.append((np.dot(pair.L, v) * np.dot(pair.Lp, v), la.evaluate_form(w_block, w)))
    return terms


def resolve_signs(inp: SteinerInput, phi: PhiMap, witnesses, tol: float = la.DEFAULT_TOL) -> dict:
    """Pick ε per pair so that L L' + ε M² vanishes on every witness.

    Witnesses must be expressed in the W-coordinates of ``phi``.
    """
    if witnesses is None or len(witnesses) == 0:
        raise NoWitnesses("sign resolution needs at least one point on the curve")
    signs = {}
    for pair in inp.pairs:
        terms = _sign_terms(pair, phi, witnesses)
        if phi.exact:
            ok = [eps for eps in (1, -1) if all(a + eps * b == 0 for a, b in terms)]
        else:
            res = {}
            for eps in (1, -1):
                worst = 0.0
                for a, b in terms:
                    scale = abs(a) + abs(b)
                    if scale > 0:
                        worst = max(worst, abs(a + eps * b) / scale)
                res[eps] = worst
            informative = any(abs(a) + abs(b) > 0 for a, b in terms)
            best = min(res, key=res.get)
            threshold = np.sqrt(tol)
            ok = [best] if informative and res[best] <= threshold < res[-best] else []
        if len(ok) != 1:
            raise AmbiguousSign(pair.id)
        signs[pair.id] = ok[0]
    return signs


def resolve_signs_blind(inp: SteinerInput, phi: PhiMap, tol: float = la.DEFAULT_TOL) -> dict:
    """EXPERIMENTAL sign resolution without witnesses.

    With the right signs the quadrics span a space mapping isomorphically
    onto the span of their V blocks A_i, so some linear T has
    T(A_i) = ε_i B_i, where B_i = Φ(L_i ∧ L'_i).  Writing A_j and B_j over a
    common basis of pairs, A_j = Σ c_jk A_k and B_j = Σ d_jk B_k, forces
    ε_j ε_k = c_jk / d_jk, which must be ±1.  Those parity constraints are
    solved by 2-colouring; ε = -1 on the first basis pair fixes the global
    sign (flipping all signs is a coordinate change on W over C).
    Raises AmbiguousSign when the constraints are inconsistent or leave
    some pair undetermined.
    """
    ids = [p.id for p in inp.pairs]
    a_vecs, b_vecs = {}, {}
    for p in inp.pairs:
        a_vecs[p.id] = la.sym_coords(la.sym_outer(p.L, p.Lp))
        b_vecs[p.id] = la.sym_coords(phi.apply(la.wedge_coords(p.L, p.Lp)))
    exact = la.is_exact(a_vecs[ids[0]])
    basis_vecs = la.column_span_basis([a_vecs[i] for i in ids], tol)
    basis = [i for i in ids if any(a_vecs[i] is v for v in basis_vecs)]
    a_mat = np.array([a_vecs[i] for i in basis]).T
    b_mat = np.array([b_vecs[i] for i in basis]).T
    if not exact:
        a_mat, b_mat = a_mat.astype(float), b_mat.astype(float)

    def unit(x, y):
        if exact:
            return x == y or x == -y
        return abs(abs(x) - abs(y)) <= np.sqrt(tol) * max(abs(x), abs(y))

    edges: dict = {i: [] for i in ids}
    for j in ids:
        if j in basis:
            continue
        try:
            c = la.solve_exact(a_mat, a_vecs[j], tol)
            d = la.solve_exact(b_mat, b_vecs[j], tol)
        except (NoSolution, NonUnique):
            raise AmbiguousSign(j, f"pair {j} is not expressible over the basis pairs") from None
        for k, cjk, djk in zip(basis, c, d):
            small_c = cjk == 0 if exact else abs(cjk) <= np.sqrt(tol)
            small_d = djk == 0 if exact else abs(djk) <= np.sqrt(tol)
            if small_c and small_d:
                continue
            if small_c or small_d or not unit(cjk, djk):
                raise AmbiguousSign(j, f"pair {j} is inconsistent with a linear block map")
            parity = 1 if (cjk > 0) == (djk > 0) else -1
            edges[j].append((k, parity))
            edges[k].append((j, parity))

    signs = {basis[0]: -1}
    queue = [basis[0]]
    while queue:
        i = queue.pop()
        for k, parity in edges[i]:
            want = signs[i] * parity
            if k not in signs:
                signs[k] = want
                queue.append(k)
            elif signs[k] != want:
                raise AmbiguousSign(k, f"contradictory parity constraints at pair {k}")
    missing = [i for i in ids if i not in signs]
    if missing:
        raise AmbiguousSign(missing[0], f"pairs {missing} are not linked to the rest")
    return {i: signs[i] for i in ids}


def flip_signs(signs: dict) -> dict:
    return {k: -v for k, v in signs.items()}


def witness_vanishing(quadrics, witnesses) -> bool:
    return all(la.evaluate_form(q.matrix, p) == 0 for q in quadrics for p in witnesses)
