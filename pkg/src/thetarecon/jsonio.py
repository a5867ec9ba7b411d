"""JSON documents for Steiner inputs and reconstruction results.

Scalars are strings: ``"p/q"`` or ``"p"`` for rationals, ``repr`` of a
double for floats.  Symmetric matrices are written as their upper triangle
of matrix entries, row-major, ``i <= j``.
"""

from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import linalg as la
from .errors import IoError, ParseError
from .steiner import CurveContext, GroundTruth, SteinerInput, ThetaPair, validate_input


def fmt_scalar(x) -> str:
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return repr(float(x))


def fmt_vector(v) -> list[str]:
    return [fmt_scalar(x) for x in v]


def fmt_matrix(m) -> list[list[str]]:
    return [fmt_vector(row) for row in m]


def parse_scalar(text, field: str, where: str):
    if isinstance(text, bool) or not isinstance(text, (str, int)):
        raise ParseError(f"{where}: expected a string scalar, got {text!r}")
    if field == "float":
        try:
            return float(text)
        except ValueError:
            raise ParseError(f"{where}: invalid float {text!r}") from None
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise ParseError(f"{where}: invalid rational {text!r}") from None


def parse_vector(seq, field: str, where: str) -> np.ndarray:
    if not isinstance(seq, list):
        raise ParseError(f"{where}: expected a list")
    vals = [parse_scalar(x, field, f"{where}[{k}]") for k, x in enumerate(seq)]
    return np.array(vals, dtype=object if field == "rational" else float)


def parse_matrix(rows, field: str, where: str) -> np.ndarray:
    if not isinstance(rows, list):
        raise ParseError(f"{where}: expected a list of rows")
    return np.array([parse_vector(r, field, f"{where}[{k}]") for k, r in enumerate(rows)])


def _require(doc: dict, key: str, where: str = ""):
    if key not in doc:
        raise ParseError(f"{where}{key}: missing field")
    return doc[key]


def steiner_from_dict(doc: dict) -> SteinerInput:
    if not isinstance(doc, dict):
        raise ParseError("document root must be an object")
    g = _require(doc, "genus")
    if not isinstance(g, int) or isinstance(g, bool):
        raise ParseError(f"genus: expected an integer, got {g!r}")
    field = doc.get("field", "rational")
    if field not in ("rational", "float"):
        raise ParseError(f"field: unknown value {field!r}")
    pairs = []
    for k, rec in enumerate(_require(doc, "pairs")):
        where = f"pairs[{k}]"
        ident = _require(rec, "id", where + ".")
        if not isinstance(ident, int):
            raise ParseError(f"{where}.id: expected an integer")
        pairs.append(
            ThetaPair(
                ident,
                parse_vector(_require(rec, "L", where + "."), field, where + ".L"),
                parse_vector(_require(rec, "Lp", where + "."), field, where + ".Lp"),
            )
        )
    witnesses = [
        parse_vector(w, field, f"witnesses[{k}]") for k, w in enumerate(doc.get("witnesses") or [])
    ]
    truth = None
    if doc.get("ground_truth") is not None:
        gt = doc["ground_truth"]
        where = "ground_truth."
        prym = {}
        for k, rec in enumerate(_require(gt, "prym", where)):
            prym[rec["id"]] = parse_vector(rec["M"], field, f"{where}prym[{k}].M")
        truth = GroundTruth(
            branch_points=list(parse_vector(_require(gt, "branch_points", where), field, where + "branch_points")),
            alpha_indices=tuple(_require(gt, "alpha_indices", where)),
            phi=parse_matrix(_require(gt, "phi", where), field, where + "phi"),
            prym=prym,
            witnesses=witnesses,
        )
    return SteinerInput(CurveContext(g), pairs, witnesses, truth, field)


def steiner_to_dict(inp: SteinerInput) -> dict:
    doc = {
        "genus": inp.ctx.g,
        "field": inp.field,
        "pairs": [{"id": p.id, "L": fmt_vector(p.L), "Lp": fmt_vector(p.Lp)} for p in inp.pairs],
    }
    if inp.witnesses:
        doc["witnesses"] = [fmt_vector(w) for w in inp.witnesses]
    gt = inp.ground_truth
    if gt is not None:
        doc["ground_truth"] = {
            "branch_points": fmt_vector(gt.branch_points),
            "alpha_indices": list(gt.alpha_indices),
            "phi": fmt_matrix(gt.phi),
            "prym": [{"id": k, "M": fmt_vector(v)} for k, v in sorted(gt.prym.items())],
        }
    return doc


def dumps(doc: dict) -> str:
    return json.dumps(doc, sort_keys=True, indent=1) + "\n"


def write_json(doc: dict, path) -> None:
    try:
        Path(path).write_text(dumps(doc), encoding="utf-8")
    except OSError as exc:
        raise IoError(f"cannot write {path}: {exc.strerror or exc}") from None


def read_json(path) -> dict:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise IoError(f"cannot read {path}: {exc.strerror or exc}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: line {exc.lineno} column {exc.colno}: {exc.msg}") from None


def load_steiner(path, tol: float = la.DEFAULT_TOL) -> SteinerInput:
    inp = steiner_from_dict(read_json(path))
    validate_input(inp, tol)
    return inp


def save_steiner(inp: SteinerInput, path) -> None:
    write_json(steiner_to_dict(inp), path)


def upper(m) -> list[str]:
    return fmt_vector(la.sym_coords(m))


def result_to_dict(g, phi, prym, quadrics, diagnostics: dict) -> dict:
    return {
        "genus": g,
        "phi": fmt_matrix(phi.matrix),
        "prym_hyperplanes": [
            {"id": k, "M": fmt_vector(m), "scalar": fmt_scalar(c)} for k, (m, c) in sorted(prym.items())
        ],
        "quadrics": [
            {"id": q.id, "sign": int(q.sign), "matrix_upper": upper(q.matrix)} for q in quadrics
        ],
        "diagnostics": diagnostics,
    }


def save_result(path, g, phi, prym, quadrics, diagnostics: dict) -> None:
    write_json(result_to_dict(g, phi, prym, quadrics, diagnostics), path)


def load_result(path, field: str = "rational") -> dict:
    """Parsed result: phi matrix, prym and quadric records with arrays."""
    doc = read_json(path)
    out = {"genus": _require(doc, "genus"), "diagnostics": doc.get("diagnostics", {})}
    out["phi"] = parse_matrix(_require(doc, "phi"), field, "phi")
    out["prym_hyperplanes"] = {
        rec["id"]: (
            parse_vector(rec["M"], field, f"prym_hyperplanes[{k}].M"),
            parse_scalar(rec["scalar"], field, f"prym_hyperplanes[{k}].scalar"),
        )
        for k, rec in enumerate(_require(doc, "prym_hyperplanes"))
    }
    out["quadrics"] = [
        (
            rec["id"],
            rec["sign"],
            la.sym_from_coords(parse_vector(rec["matrix_upper"], field, f"quadrics[{k}].matrix_upper")),
        )
        for k, rec in enumerate(_require(doc, "quadrics"))
    ]
    return out
