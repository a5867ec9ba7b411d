"""Orchestration: Steiner input -> Φ -> Prym hyperplanes -> quadrics -> report."""

from __future__ import annotations

import logging
import os
from dataclasses import dataclass, field

from . import linalg as la
from .errors import ThetaReconError
from .intersection import VerificationReport, verify_reconstruction
from .phi import (
    GaugeWitness,
    PhiMap,
    RankOneReport,
    RecoveryDiagnostics,
    compare_up_to_gl,
    recover_phi,
    verify_rank_one_preimages,
)
from .quadrics import Quadric, assemble_quadrics, prym_hyperplanes, resolve_signs, resolve_signs_blind
from .steiner import SteinerInput, validate_input, wedge_points

log = logging.getLogger(__name__)

SEED_ENV = "THETARECON_SEED"


def default_seed() -> int:
    return int(os.environ.get(SEED_ENV, "0"))


class GaugeMismatch(ThetaReconError):
    pass


@dataclass
class RunConfig:
    backend: str = "exact"
    tol: float | None = None
    seed: int = field(default_factory=default_seed)
    max_restarts: int = 64
    witness_count: int = 24
    degrees: tuple = (2, 3)

    def __post_init__(self):
        if self.backend not in ("exact", "float"):
            raise ValueError(f"unknown backend {self.backend!r}")
        if self.backend == "float" and self.tol is None:
            self.tol = la.DEFAULT_TOL
        if self.backend == "exact" and self.tol is not None:
            raise ValueError("tol only applies to the float backend")
        if self.tol is not None and self.tol <= 0:
            raise ValueError("tol must be positive")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")

    @property
    def rank_tol(self) -> float:
        return self.tol if self.tol is not None else la.DEFAULT_TOL


@dataclass
class RunResult:
    inp: SteinerInput
    phi: PhiMap
    recovery: RecoveryDiagnostics
    rank_one: RankOneReport
    prym: dict
    signs: dict
    sign_method: str
    quadrics: list[Quadric]
    report: VerificationReport
    gauge: GaugeWitness | None = None
    witnesses: list = field(default_factory=list)

    def diagnostics(self) -> dict:
        d = self.report.as_dict()
        d["backend"] = "exact" if self.phi.exact else "float"
        d["recovery"] = self.recovery.as_dict()
        d["rank_one_preimages"] = {
            "checked": len(self.rank_one.ok),
            "failures": self.rank_one.failures,
            "worst_residual": self.rank_one.worst_residual,
        }
        d["sign_method"] = self.sign_method
        return d


def ground_truth_gauge(inp: SteinerInput, phi: PhiMap, tol: float) -> GaugeWitness:
    """Basis change on W relating the ground-truth Φ (witness coordinates) to ``phi``."""
    truth = PhiMap(inp.ctx.g, inp.ground_truth.phi)
    gauge = compare_up_to_gl(truth, phi, inp.ctx, tol)
    if not gauge:
        raise GaugeMismatch(f"recovered phi is not GL-equivalent to the ground truth: {gauge.reason}")
    return gauge


def reconstruct(inp: SteinerInput, config: RunConfig | None = None) -> RunResult:
    config = config or RunConfig()
    tol = config.rank_tol
    if config.backend == "float" and inp.exact:
        inp = inp.to_float()
    elif config.backend == "exact" and not inp.exact:
        raise ValueError("the exact backend needs a rational input file")
    validate_input(inp, tol)
    points = wedge_points(inp, tol)
    phi, diag = recover_phi(points, inp.ctx, config.seed, config.max_restarts, tol)
    rank_one = verify_rank_one_preimages(phi, points, tol)
    prym = prym_hyperplanes(phi, points, tol)

    gauge, witnesses = None, []
    if inp.ground_truth is not None and inp.witnesses:
        # witnesses live in ground-truth W-coordinates; signs are unchanged
        # by the positive rescaling inside pull_back_phi
        gauge = ground_truth_gauge(inp, phi, tol)
        witnesses = inp.witnesses
        signs = resolve_signs(inp, gauge.pull_back_phi(phi), witnesses, tol)
        method = "witness"
    else:
        log.warning("no ground-truth gauge available; using experimental witness-free sign resolution")
        signs = resolve_signs_blind(inp, phi, tol)
        method = "blind-experimental"
    quads = assemble_quadrics(inp, phi, signs, tol)
    report = verify_reconstruction(quads, witnesses, inp.ctx, config.degrees, tol, gauge)
    return RunResult(inp, phi, diag, rank_one, prym, signs, method, quads, report, gauge, witnesses)
