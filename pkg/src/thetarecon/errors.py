"""Exception hierarchy shared by every stage of the pipeline."""

from __future__ import annotations


class ThetaReconError(Exception):
    """Base class for validation and recovery failures (CLI exit code 2)."""

    def payload(self) -> dict:
        return {"error": type(self).__name__, "message": str(self)}


class NoSolution(ThetaReconError):
    pass


class NonUnique(ThetaReconError):
    pass


class RankOneFactorFailed(ThetaReconError):
    def __init__(self, rank, ident=None):
        self.rank = rank
        self.ident = ident
        where = "" if ident is None else f" (pair {ident})"
        super().__init__(f"expected a rank-1 form, found rank {rank}{where}")


class FormNonVanishing(ThetaReconError):
    pass


class MalformedInput(ThetaReconError):
    def __init__(self, path: str, message: str):
        self.path = path
        super().__init__(f"{path}: {message}")

    def payload(self) -> dict:
        return {**super().payload(), "path": self.path}


class DegeneratePair(ThetaReconError):
    pass


class SpanDeficient(ThetaReconError):
    def __init__(self, rank: int, expected: int, message: str = ""):
        self.rank = rank
        self.expected = expected
        super().__init__(message or f"points span rank {rank}, need {expected}")

    def payload(self) -> dict:
        return {**super().payload(), "rank": self.rank, "expected": self.expected}


class DuplicateBranchPoint(ThetaReconError):
    pass


class DegenerateConfiguration(ThetaReconError):
    pass


class NotMonicNormalizable(ThetaReconError):
    pass


class GroundTruthInconsistent(ThetaReconError):
    pass


class BadParameter(ThetaReconError):
    pass


class DimensionMismatch(ThetaReconError):
    pass


class MaxRestartsExceeded(ThetaReconError):
    pass


class PhiVerificationFailed(ThetaReconError):
    def __init__(self, ids):
        self.ids = list(ids)
        super().__init__(f"non rank-1 preimages for pairs {self.ids}")

    def payload(self) -> dict:
        return {**super().payload(), "ids": self.ids}


class MissingSign(ThetaReconError):
    pass


class AmbiguousSign(ThetaReconError):
    def __init__(self, ident, message=""):
        self.ident = ident
        super().__init__(message or f"cannot resolve sign of pair {ident}")


class NoWitnesses(ThetaReconError):
    pass


class UnsupportedDegree(ThetaReconError):
    pass


class ParseError(ThetaReconError):
    pass


class IoError(ThetaReconError):
    pass
