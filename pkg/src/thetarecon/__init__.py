"""Reconstruct the canonical image of a Prym double cover from the theta
hyperplanes of a Steiner system."""

from .errors import ThetaReconError
from .intersection import VerificationReport, graded_ideal_dim, membership, verify_reconstruction
from .oracle import HyperellipticConfig, generate_steiner, random_config
from .phi import GaugeWitness, Mismatch, PhiMap, compare_up_to_gl, recover_phi, verify_rank_one_preimages
from .pipeline import RunConfig, RunResult, reconstruct
from .quadrics import Quadric, assemble_quadrics, prym_hyperplanes, resolve_signs, resolve_signs_blind
from .steiner import CurveContext, SteinerInput, ThetaPair, validate_input, validate_spanning, wedge_points

__version__ = "0.1.0"
