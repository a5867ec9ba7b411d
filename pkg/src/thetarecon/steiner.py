"""Pipeline input: a Steiner system given as pairs of theta hyperplanes."""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from . import linalg as la
from .errors import DegeneratePair, MalformedInput, SpanDeficient


@dataclass(frozen=True)
class CurveContext:
    """Dimensions attached to a genus: V = H⁰(ω_C) has dim g, W has dim g-1."""

    g: int

    @property
    def dim_v(self) -> int:
        return self.g

    @property
    def dim_w(self) -> int:
        return self.g - 1

    @property
    def m(self) -> int:
        return self.g * (self.g - 1) // 2

    @property
    def ambient(self) -> int:
        return 2 * self.g - 1


@dataclass
class ThetaPair:
    id: int
    L: np.ndarray
    Lp: np.ndarray


@dataclass
class GroundTruth:
    branch_points: list
    alpha_indices: tuple[int, int]
    phi: np.ndarray
    prym: dict[int, np.ndarray]
    witnesses: list[np.ndarray] = field(default_factory=list)
    subsets: dict[int, tuple[int, ...]] = field(default_factory=dict)


@dataclass
class SteinerInput:
    ctx: CurveContext
    pairs: list[ThetaPair]
    witnesses: list[np.ndarray] = field(default_factory=list)
    ground_truth: GroundTruth | None = None
    field: str = "rational"

    @property
    def exact(self) -> bool:
        return self.field == "rational"

    def to_float(self) -> "SteinerInput":
        """The same instance on the float backend."""
        f = la.float_array
        pairs = [ThetaPair(p.id, f(p.L), f(p.Lp)) for p in self.pairs]
        gt = self.ground_truth
        if gt is not None:
            gt = replace(
                gt,
                phi=f(gt.phi),
                prym={k: f(v) for k, v in gt.prym.items()},
                witnesses=[f(w) for w in gt.witnesses],
            )
        return SteinerInput(self.ctx, pairs, [f(w) for w in self.witnesses], gt, "float")

    def pair(self, ident) -> ThetaPair:
        for p in self.pairs:
            if p.id == ident:
                return p
        raise KeyError(ident)


def validate_input(inp: SteinerInput, tol: float = la.DEFAULT_TOL) -> CurveContext:
    """Structural checks; raises MalformedInput naming the offending field."""
    ctx = inp.ctx
    if not isinstance(ctx.g, int) or ctx.g < 3:
        raise MalformedInput("genus", f"genus must be an integer >= 3, got {ctx.g!r}")
    if inp.field not in ("rational", "float"):
        raise MalformedInput("field", f"unknown field {inp.field!r}")
    if not inp.pairs:
        raise MalformedInput("pairs", "no pairs given")
    seen = set()
    for k, pair in enumerate(inp.pairs):
        where = f"pairs[{k}]"
        if pair.id in seen:
            raise MalformedInput(f"{where}.id", f"duplicate id {pair.id}")
        seen.add(pair.id)
        for name in ("L", "Lp"):
            vec = getattr(pair, name)
            if len(vec) != ctx.dim_v:
                raise MalformedInput(f"{where}.{name}", f"length {len(vec)}, expected {ctx.dim_v}")
            if la.is_exact(vec) != inp.exact:
                raise MalformedInput(f"{where}.{name}", "entries do not match the declared field")
            if not any(x != 0 for x in vec) or (not inp.exact and np.linalg.norm(vec) == 0):
                raise MalformedInput(f"{where}.{name}", "zero covector")
        if la.rank(np.array([pair.L, pair.Lp]), tol) < 2:
            raise MalformedInput(where, "L and Lp are proportional")
    for k, w in enumerate(inp.witnesses):
        if len(w) != ctx.ambient:
            raise MalformedInput(f"witnesses[{k}]", f"length {len(w)}, expected {ctx.ambient}")
    return ctx


def wedge_points(inp: SteinerInput, tol: float = la.DEFAULT_TOL) -> list[tuple[int, np.ndarray]]:
    out = []
    for pair in inp.pairs:
        q = la.wedge_coords(pair.L, pair.Lp)
        if la.is_exact(q):
            degenerate = not any(x != 0 for x in q)
        else:
            scale = np.linalg.norm(pair.L) * np.linalg.norm(pair.Lp)
            degenerate = np.linalg.norm(q) <= tol * scale
        if degenerate:
            raise DegeneratePair(f"pair {pair.id} has vanishing wedge")
        out.append((pair.id, q))
    return out


def validate_spanning(points, ctx: CurveContext, tol: float = la.DEFAULT_TOL) -> None:
    """Raise SpanDeficient unless the wedge points span ∧²V."""
    vecs = [q for _, q in points] if points and isinstance(points[0], tuple) else list(points)
    if len(vecs) < ctx.m:
        raise SpanDeficient(
            len(vecs), ctx.m, f"only {len(vecs)} points given, at least {ctx.m} needed to span"
        )
    arr = np.array(vecs)
    if not la.is_exact(arr):
        arr = np.array([la.normalize_float(v, tol) for v in vecs])
    r = la.rank(arr, tol)
    if r != ctx.m:
        raise SpanDeficient(r, ctx.m)
