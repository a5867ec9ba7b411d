"""Dense linear algebra over Q (exact) or float64, plus the multilinear
coordinate conventions used throughout the package.

The backend is carried by the array dtype: ``object`` arrays hold
:class:`fractions.Fraction` entries and are reduced exactly with
fraction-free integer elimination; ``float64`` arrays go through the SVD
with a relative tolerance.

Coordinate conventions
----------------------
* ``∧²F^g`` is indexed by pairs ``(i, j)``, ``i < j``, in lexicographic order.
* A symmetric form is stored as its full matrix.  Its coordinate vector is
  the upper triangle of the *matrix entries* ``(S[i, j])_{i <= j}``, so the
  rank-1 form ``p pᵀ`` has coordinates ``veronese_coords(p)``.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache, reduce
from itertools import combinations, combinations_with_replacement
from math import gcd, lcm

import numpy as np

from .errors import FormNonVanishing, NonUnique, NoSolution, RankOneFactorFailed

DEFAULT_TOL = 1e-8


# -- conversion -------------------------------------------------------------

def to_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        raise TypeError("refusing to coerce a float into the exact backend")
    return Fraction(x)


def exact_array(data) -> np.ndarray:
    """Object array of Fractions from nested sequences of ints/strings/Fractions."""
    arr = np.array(data, dtype=object)
    out = np.empty(arr.shape, dtype=object)
    for idx in np.ndindex(arr.shape):
        out[idx] = to_fraction(arr[idx])
    return out


def float_array(data) -> np.ndarray:
    arr = np.asarray(data)
    if arr.dtype == object:
        return np.vectorize(float, otypes=[float])(arr) if arr.size else arr.astype(float)
    return arr.astype(float)


def is_exact(a) -> bool:
    return np.asarray(a).dtype == object


def like(a, data) -> np.ndarray:
    """Build an array of ``data`` on the same backend as ``a``."""
    return exact_array(data) if is_exact(a) else float_array(data)


def zeros(shape, exact: bool) -> np.ndarray:
    if exact:
        out = np.empty(shape, dtype=object)
        out.fill(Fraction(0))
        return out
    return np.zeros(shape)


def identity(n: int, exact: bool) -> np.ndarray:
    out = zeros((n, n), exact)
    for i in range(n):
        out[i, i] = Fraction(1) if exact else 1.0
    return out


def primitive(v) -> np.ndarray:
    """Integer vector with content 1 and first nonzero entry positive."""
    v = [to_fraction(x) for x in v]
    den = reduce(lcm, (x.denominator for x in v), 1)
    ints = [int(x * den) for x in v]
    content = reduce(gcd, ints, 0)
    if content == 0:
        raise ValueError("zero vector has no primitive representative")
    first = next(x for x in ints if x != 0)
    if first < 0:
        content = -content
    return exact_array([x // content for x in ints])


def normalize_float(v, tol: float = DEFAULT_TOL) -> np.ndarray:
    v = np.asarray(v, dtype=float)
    nrm = np.linalg.norm(v)
    if nrm == 0:
        raise ValueError("zero vector")
    v = v / nrm
    first = np.flatnonzero(np.abs(v) > tol)[0]
    return -v if v[first] < 0 else v


def projective_normalize(v, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Canonical representative of the line through ``v``."""
    return primitive(v) if is_exact(v) else normalize_float(v, tol)


# -- exact elimination ------------------------------------------------------

def _integer_rows(a) -> list[list[int]]:
    rows = []
    for row in a:
        den = reduce(lcm, (to_fraction(x).denominator for x in row), 1)
        rows.append([int(to_fraction(x) * den) for x in row])
    return rows


def _rref_int(rows: list[list[int]], ncols: int, stop: int | None = None):
    """Fraction-free Gauss-Jordan on integer rows.

    Each pivot row is combined into the others by cross multiplication and
    the result divided by its content, so entries stay integral and small.
    Pivots are only searched in the first ``stop`` columns.
    Returns the reduced nonzero rows and their pivot columns.
    """
    rows = [r[:] for r in rows if any(r)]
    stop = ncols if stop is None else stop
    pivots: list[int] = []
    r = 0
    for c in range(stop):
        piv = None
        best = None
        for i in range(r, len(rows)):
            x = rows[i][c]
            if x and (best is None or abs(x) < best):
                piv, best = i, abs(x)
                if best == 1:
                    break
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        prow = rows[r]
        p = prow[c]
        for i in range(len(rows)):
            if i == r:
                continue
            a = rows[i][c]
            if not a:
                continue
            g = gcd(p, a)
            mp, ma = p // g, a // g
            new = [mp * x - ma * y for x, y in zip(rows[i], prow)]
            content = reduce(gcd, new, 0)
            if content > 1:
                new = [x // content for x in new]
            rows[i] = new
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return rows[:r], pivots


def _float_svd(a):
    a = np.asarray(a, dtype=float)
    m, n = a.shape
    if m == 0 or n == 0:
        return np.zeros(0), np.eye(n)
    _, s, vt = np.linalg.svd(a, full_matrices=True)
    return s, vt


def _float_rank(s, tol, ncols: int = 0) -> int:
    """Largest-gap cut among the singular values below ``tol * s_max``.

    Values above the tolerance always count.  Below it, the rank is placed
    at the largest ratio gap s[r-1] / s[r], with s[r] floored at the
    machine noise level so that a clean tail counts as zero.
    """
    if s.size == 0 or s[0] == 0:
        return 0
    r_min = int(np.sum(s > tol * s[0]))
    if r_min == s.size:
        return r_min
    floor = max(s.size, ncols) * np.finfo(float).eps * s[0]
    best, best_gap = r_min, -1.0
    for r in range(max(r_min, 1), s.size + 1):
        below = s[r] if r < s.size else 0.0
        gap = s[r - 1] / max(below, floor)
        if gap > best_gap:
            best, best_gap = r, gap
    if best_gap <= 1.0:
        return r_min
    return best


# -- public operations ------------------------------------------------------

def rank(a, tol: float = DEFAULT_TOL) -> int:
    a = np.asarray(a)
    if a.ndim == 1:
        a = a.reshape(1, -1)
    if a.size == 0:
        return 0
    if is_exact(a):
        _, pivots = _rref_int(_integer_rows(a), a.shape[1])
        return len(pivots)
    s, _ = _float_svd(a)
    return _float_rank(s, tol, a.shape[1])


def kernel_basis(a, tol: float = DEFAULT_TOL) -> list[np.ndarray]:
    """Basis of the right null space of ``a``.

    Exact vectors are primitive integer vectors; float vectors are orthonormal.
    """
    a = np.asarray(a)
    if a.ndim == 1:
        a = a.reshape(1, -1)
    n = a.shape[1]
    if is_exact(a):
        rows, pivots = _rref_int(_integer_rows(a), n)
        free = [c for c in range(n) if c not in set(pivots)]
        basis = []
        for f in free:
            # x_f = 1, x_piv = -row[f] / row[piv]; clear denominators
            den = reduce(lcm, (row[c] for row, c in zip(rows, pivots) if row[f]), 1)
            x = [0] * n
            x[f] = den
            for row, c in zip(rows, pivots):
                if row[f]:
                    x[c] = -row[f] * den // row[c]
            basis.append(primitive(x))
        return basis
    s, vt = _float_svd(a)
    r = _float_rank(s, tol, a.shape[1])
    return [vt[k].copy() for k in range(r, n)]


def solve_exact(a, b, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Unique solution of ``a x = b``; raises NoSolution / NonUnique."""
    a = np.asarray(a)
    b = np.asarray(b)
    m, n = a.shape
    if is_exact(a):
        aug = np.empty((m, n + 1), dtype=object)
        aug[:, :n] = a
        aug[:, n] = exact_array(b)
        rows, pivots = _rref_int(_integer_rows(aug), n + 1)
        if pivots and pivots[-1] == n:
            raise NoSolution("right-hand side is not in the column span")
        if len(pivots) < n:
            raise NonUnique(f"matrix has rank {len(pivots)} < {n} columns")
        x = np.empty(n, dtype=object)
        for row, c in zip(rows, pivots):
            x[c] = Fraction(row[n], row[c])
        return x
    a = a.astype(float)
    b = b.astype(float)
    s, _ = _float_svd(a)
    r = _float_rank(s, tol, a.shape[1])
    x, *_ = np.linalg.lstsq(a, b, rcond=None)
    resid = np.linalg.norm(a @ x - b)
    if resid > tol * max(1.0, s[0] if s.size else 0.0) * max(1.0, np.linalg.norm(x)) * 1e2:
        raise NoSolution(f"least-squares residual {resid:.3g}")
    if r < n:
        raise NonUnique(f"matrix has numerical rank {r} < {n} columns")
    return x


def inverse(a, tol: float = DEFAULT_TOL) -> np.ndarray:
    a = np.asarray(a)
    n = a.shape[0]
    if a.shape != (n, n):
        raise ValueError("inverse of a non-square matrix")
    if not is_exact(a):
        if rank(a, tol) < n:
            raise NonUnique("matrix is singular")
        return np.linalg.inv(a.astype(float))
    aug = np.empty((n, 2 * n), dtype=object)
    aug[:, :n] = a
    aug[:, n:] = identity(n, True)
    rows, pivots = _rref_int(_integer_rows(aug), 2 * n, stop=n)
    if len(pivots) < n:
        raise NonUnique("matrix is singular")
    out = np.empty((n, n), dtype=object)
    for row, c in zip(rows, pivots):
        for k in range(n):
            out[c, k] = Fraction(row[n + k], row[c])
    return out


def column_span_basis(vectors, tol: float = DEFAULT_TOL) -> list[np.ndarray]:
    """A maximal independent subset of ``vectors`` (in order)."""
    vectors = list(vectors)
    if not vectors:
        return []
    a = np.array(vectors).T
    if is_exact(a):
        _, pivots = _rref_int(_integer_rows(a), a.shape[1])
        return [vectors[c] for c in pivots]
    chosen: list[np.ndarray] = []
    for v in vectors:
        if rank(np.array(chosen + [v]), tol) > len(chosen):
            chosen.append(v)
    return chosen


def subspace_intersection(u_basis, w_basis, tol: float = DEFAULT_TOL) -> list[np.ndarray]:
    """Basis of span(u_basis) ∩ span(w_basis)."""
    u = np.array(u_basis).T
    w = np.array(w_basis).T
    stacked = np.hstack([u, -w])
    if not is_exact(stacked):
        stacked = stacked.astype(float)
    out = []
    for coeffs in kernel_basis(stacked, tol):
        v = u @ coeffs[: u.shape[1]]
        if not is_exact(v):
            v = v / np.linalg.norm(v)
        out.append(v)
    return out


# -- multilinear coordinates ------------------------------------------------

@lru_cache(maxsize=None)
def wedge_index(n: int) -> tuple[tuple[int, int], ...]:
    return tuple(combinations(range(n), 2))


@lru_cache(maxsize=None)
def sym_index(n: int) -> tuple[tuple[int, int], ...]:
    return tuple(combinations_with_replacement(range(n), 2))


def sym_dim_to_n(m: int) -> int:
    n = int(round(((8 * m + 1) ** 0.5 - 1) / 2))
    if n * (n + 1) // 2 != m:
        raise ValueError(f"{m} is not a triangular number")
    return n


def _check_lengths(a, b):
    if len(a) != len(b):
        raise ValueError(f"length mismatch: {len(a)} != {len(b)}")


def wedge_coords(l, lp) -> np.ndarray:
    """Plücker coordinates of ``l ∧ lp``: entry (i, j) is l_i lp_j - l_j lp_i."""
    _check_lengths(l, lp)
    vals = [l[i] * lp[j] - l[j] * lp[i] for i, j in wedge_index(len(l))]
    return np.array(vals, dtype=object if is_exact(l) else float)


def sym_outer(l, lp) -> np.ndarray:
    """Matrix of the quadratic form ``p -> l(p) lp(p)``."""
    _check_lengths(l, lp)
    l = np.asarray(l)
    lp = np.asarray(lp)
    half = Fraction(1, 2) if is_exact(l) else 0.5
    return (np.outer(l, lp) + np.outer(lp, l)) * half


def veronese_coords(p) -> np.ndarray:
    """Coordinates ``(p_i p_j)_{i <= j}`` of the rank-1 form ``p pᵀ``."""
    if not any(x != 0 for x in p):
        raise ValueError("Veronese image of the zero vector is undefined")
    vals = [p[i] * p[j] for i, j in sym_index(len(p))]
    return np.array(vals, dtype=object if is_exact(p) else float)


def sym_coords(s) -> np.ndarray:
    """Upper-triangle matrix entries of a symmetric form."""
    s = np.asarray(s)
    return np.array([s[i, j] for i, j in sym_index(s.shape[0])], dtype=s.dtype)


def sym_from_coords(c) -> np.ndarray:
    c = np.asarray(c)
    n = sym_dim_to_n(len(c))
    out = zeros((n, n), is_exact(c))
    for k, (i, j) in enumerate(sym_index(n)):
        out[i, j] = out[j, i] = c[k]
    return out


def evaluate_form(s, p):
    """Value ``pᵀ S p`` of a quadratic form at a point."""
    p = np.asarray(p)
    return p @ np.asarray(s) @ p


def is_symmetric(s, tol: float = DEFAULT_TOL) -> bool:
    s = np.asarray(s)
    if is_exact(s):
        return bool(np.all(s == s.T))
    return bool(np.allclose(s, s.T, atol=tol * max(1.0, np.abs(s).max(initial=0.0))))


def rank_one_factor(a, tol: float = DEFAULT_TOL, ident=None):
    """Write a symmetric form as ``c v vᵀ``.

    Exact: ``v`` is primitive (integer, content 1, first nonzero positive).
    Float: ``v`` has unit norm and first significant entry positive, and the
    form passes when its second singular value is at most ``tol`` times the
    first.  Raises RankOneFactorFailed otherwise.
    """
    a = np.asarray(a)
    if not is_symmetric(a, tol):
        raise ValueError("rank_one_factor needs a symmetric form")
    n = a.shape[0]
    if is_exact(a):
        k = next((i for i in range(n) if a[i, i] != 0), None)
        if k is None:
            raise RankOneFactorFailed(rank(a), ident)
        v = primitive(a[k, :])
        c = a[k, k] / (v[k] * v[k])
        if not np.all(a == c * np.outer(v, v)):
            raise RankOneFactorFailed(rank(a), ident)
        return v, c
    a = a.astype(float)
    w, vecs = np.linalg.eigh(a)
    order = np.argsort(-np.abs(w))
    w, vecs = w[order], vecs[:, order]
    if w.size == 0 or w[0] == 0:
        raise RankOneFactorFailed(0, ident)
    if w.size > 1 and abs(w[1]) > tol * abs(w[0]):
        raise RankOneFactorFailed(rank(a, tol), ident)
    v = normalize_float(vecs[:, 0], tol)
    return v, float(w[0])


def rank_one_residual(a) -> float:
    """Ratio σ₂/σ₁ of a float symmetric form (0 for rank <= 1)."""
    s = np.linalg.svd(np.asarray(a, dtype=float), compute_uv=False)
    if s.size < 2 or s[0] == 0:
        return 0.0
    return float(s[1] / s[0])


def quadric_rows(points) -> np.ndarray:
    """Rows ``(p_i p_j · (1 if i == j else 2))`` so that row · coords(S) = pᵀSp."""
    rows = []
    for p in points:
        n = len(p)
        rows.append([p[i] * p[j] * (1 if i == j else 2) for i, j in sym_index(n)])
    exact = is_exact(points[0])
    return np.array(rows, dtype=object if exact else float)


def quadrics_through_points(points, tol: float = DEFAULT_TOL) -> list[np.ndarray]:
    """Basis (as symmetric matrices) of the quadratic forms vanishing at all points."""
    points = [np.asarray(p) for p in points]
    if not points:
        raise ValueError("need at least one point")
    if not is_exact(points[0]):
        points = [normalize_float(p, tol) for p in points]
    rows = quadric_rows(points)
    return [sym_from_coords(c) for c in kernel_basis(rows, tol)]


def form_vanishes(s, p, tol: float = DEFAULT_TOL) -> bool:
    val = evaluate_form(s, p)
    if is_exact(s):
        return val == 0
    scale = np.linalg.norm(np.asarray(s, dtype=float)) * float(np.dot(p, p))
    return abs(val) <= tol * max(scale, np.finfo(float).tiny)


def tangent_space_at(forms, p, tol: float = DEFAULT_TOL) -> list[np.ndarray]:
    """Basis of the common kernel of the gradients ``2 S p`` of ``forms`` at ``p``."""
    p = np.asarray(p)
    exact = is_exact(p)
    if not exact:
        p = normalize_float(p, tol)
    rows = []
    for k, s in enumerate(forms):
        if not form_vanishes(s, p, tol):
            raise FormNonVanishing(f"form {k} does not vanish at the point")
        g = np.asarray(s) @ p
        if not exact:
            nrm = np.linalg.norm(g)
            g = g / nrm if nrm > 0 else g
        rows.append(g)
    if not rows:
        return [row for row in identity(len(p), exact)]
    return kernel_basis(np.array(rows), tol)
