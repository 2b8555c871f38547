"""JSON interchange: problem files, curve models, local-model sections, reports.

Rationals travel as strings ("a/b" in lowest terms) so nothing is lost;
all emitted JSON is byte-deterministic for identical inputs (sorted keys,
fixed indentation, no timestamps).
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Any, Mapping, Optional, Sequence

from .curves import (
    GhostCurveModel,
    HyperellipticModel,
    NodalRationalModel,
    RawEvaluationModel,
)
from .exact import QMatrix, rat, rat_to_str, rat_vector
from .laurent import LaurentPoly, poly_from_json, poly_to_json
from .localmodel import XYT, GhostExpansion, ResidueReport
from .obstruction import (
    AttachmentColumn,
    CorollaryVerdict,
    ObstructionProblem,
    TheoremVerdict,
    Verdict,
)

FORMAT_VERSION = 1


class InputError(ValueError):
    """Malformed or inconsistent problem file; maps to CLI exit code 2."""


def _require(condition: bool, message: str):
    if not condition:
        raise InputError(message)


def _get(mapping: Mapping, key: str, where: str):
    _require(key in mapping, f"{where}: missing field {key!r}")
    return mapping[key]


# -- curve models -------------------------------------------------------------


def model_from_json(data: Mapping, where: str = "curve_model") -> GhostCurveModel:
    kind = _get(data, "type", where)
    genus = int(_get(data, "genus", where))
    try:
        if kind == "hyperelliptic":
            return HyperellipticModel(genus, [rat(c) for c in _get(data, "f", where)])
        if kind == "nodal_rational":
            pairs = [(rat(a), rat(b)) for a, b in _get(data, "nodes", where)]
            return NodalRationalModel(genus, pairs)
        if kind == "raw":
            rows = [[rat(v) for v in row] for row in _get(data, "ev_matrix", where)]
            return RawEvaluationModel(genus, QMatrix(rows))
    except ValueError as exc:
        raise InputError(f"{where}: {exc}") from exc
    raise InputError(f"{where}: unknown model type {kind!r}")


def model_to_json(model: GhostCurveModel) -> dict:
    if isinstance(model, HyperellipticModel):
        return {
            "type": "hyperelliptic",
            "genus": model.genus,
            "f": [rat_to_str(c) for c in model.f_coeffs],
        }
    if isinstance(model, NodalRationalModel):
        return {
            "type": "nodal_rational",
            "genus": model.genus,
            "nodes": [[rat_to_str(a), rat_to_str(b)] for a, b in model.node_pairs],
        }
    if isinstance(model, RawEvaluationModel):
        return {
            "type": "raw",
            "genus": model.genus,
            "ev_matrix": [[rat_to_str(v) for v in row] for row in model.matrix.entries],
        }
    raise TypeError(f"not a curve model: {model!r}")


def _attachment_from_json(model: GhostCurveModel, data: Mapping, where: str):
    try:
        if isinstance(model, HyperellipticModel):
            return (rat(_get(data, "x", where)), rat(_get(data, "y", where)))
        if isinstance(model, NodalRationalModel):
            return rat(_get(data, "p", where))
        return int(_get(data, "index", where))
    except ValueError as exc:
        raise InputError(f"{where}: {exc}") from exc


# -- problems -----------------------------------------------------------------


def problem_from_json(data: Mapping, where: str = "component") -> ObstructionProblem:
    try:
        if "curve_model" in data:
            model = model_from_json(_get(data, "curve_model", where), f"{where}.curve_model")
            attachments = _get(data, "attachments", where)
            derivs = _get(data, "derivs", where)
            _require(
                len(attachments) == len(derivs),
                f"{where}: {len(attachments)} attachments but {len(derivs)} derivative vectors",
            )
            _require(len(derivs) >= 1, f"{where}: need at least one attachment")
            ambient = len(derivs[0])
            columns = []
            for i, (att, dv) in enumerate(zip(attachments, derivs)):
                point = _attachment_from_json(model, att, f"{where}.attachments[{i}]")
                delta = model.ev_vector(point)
                _require(
                    len(dv) == ambient,
                    f"{where}.derivs[{i}]: length {len(dv)} != {ambient}",
                )
                columns.append(AttachmentColumn(delta=delta, deriv=rat_vector(dv)))
            return ObstructionProblem(
                genus=model.genus, ambient_dim=ambient, points=columns
            )
        genus = int(_get(data, "genus", where))
        ambient = int(_get(data, "ambient_dim", where))
        columns = []
        for i, entry in enumerate(_get(data, "points", where)):
            delta = rat_vector(_get(entry, "delta", f"{where}.points[{i}]"))
            deriv = rat_vector(_get(entry, "deriv", f"{where}.points[{i}]"))
            columns.append(AttachmentColumn(delta=delta, deriv=deriv))
        return ObstructionProblem(genus=genus, ambient_dim=ambient, points=columns)
    except InputError:
        raise
    except ValueError as exc:
        raise InputError(f"{where}: {exc}") from exc


def problem_to_json(problem: ObstructionProblem) -> dict:
    return {
        "genus": problem.genus,
        "ambient_dim": problem.ambient_dim,
        "points": [
            {
                "delta": [rat_to_str(v) for v in p.delta],
                "deriv": [rat_to_str(v) for v in p.deriv],
            }
            for p in problem.points
        ],
    }


@dataclass(frozen=True)
class LocalModelInput:
    m: int
    components: tuple[LaurentPoly, ...]


def local_model_from_json(data: Mapping, where: str = "local_model") -> LocalModelInput:
    try:
        m = int(_get(data, "m", where))
        raw_components = _get(data, "G", where)
        _require(isinstance(raw_components, list) and raw_components, f"{where}: G must be a nonempty list")
        components = tuple(
            poly_from_json(XYT, comp) for comp in raw_components
        )
        return LocalModelInput(m=m, components=components)
    except InputError:
        raise
    except (ValueError, KeyError, TypeError) as exc:
        raise InputError(f"{where}: {exc}") from exc


def local_model_to_json(m: int, components: Sequence[LaurentPoly]) -> dict:
    return {"m": m, "G": [poly_to_json(c) for c in components]}


@dataclass(frozen=True)
class ProblemFile:
    components: tuple[ObstructionProblem, ...]
    local_model: Optional[LocalModelInput]


def problem_file_from_json(data: Any) -> ProblemFile:
    _require(isinstance(data, Mapping), "top level must be a JSON object")
    version = data.get("version", FORMAT_VERSION)
    _require(version == FORMAT_VERSION, f"unsupported format version {version!r}")
    components: tuple[ObstructionProblem, ...] = ()
    if "components" in data:
        raw = data["components"]
        _require(isinstance(raw, list) and raw, "components must be a nonempty list")
        components = tuple(
            problem_from_json(entry, f"components[{i}]") for i, entry in enumerate(raw)
        )
    elif "points" in data or "curve_model" in data:
        components = (problem_from_json(data, "problem"),)
    local_model = None
    if "local_model" in data:
        local_model = local_model_from_json(data["local_model"])
    _require(
        components or local_model is not None,
        "file contains neither an obstruction problem nor a local-model section",
    )
    return ProblemFile(components=components, local_model=local_model)


def load_problem_file(path: str) -> ProblemFile:
    try:
        with open(path, "r", encoding="utf-8") as handle:
            data = json.load(handle)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON at line {exc.lineno}, column {exc.colno}") from exc
    return problem_file_from_json(data)


# -- reports ------------------------------------------------------------------


def verdict_pair_to_json(theorem: TheoremVerdict, corollary: CorollaryVerdict) -> dict:
    return {
        "theorem": {
            "verdict": theorem.verdict.value,
            "rank": theorem.rank,
            "kernel_witness": (
                None
                if theorem.kernel_witness is None
                else [rat_to_str(v) for v in theorem.kernel_witness]
            ),
        },
        "corollary": {
            "verdict": corollary.verdict.value,
            "witness_D": None if corollary.witness_D is None else list(corollary.witness_D),
        },
    }


def expansion_to_json(expansion: GhostExpansion) -> list[dict]:
    levels = []
    for lvl in expansion.levels:
        levels.append(
            {
                "l": lvl.level,
                "a": [rat_to_str(v) for v in lvl.constant],
                "components": [
                    {
                        "name": comp.name,
                        "pole_order": comp.pole_order,
                        "residue": [rat_to_str(v) for v in comp.residue],
                    }
                    for comp in lvl.components
                ],
            }
        )
    return levels


def residue_report_to_json(report: ResidueReport) -> dict:
    return {
        "m": report.m,
        "expected_residue": [rat_to_str(v) for v in report.expected_residue],
        "levels": expansion_to_json(report.expansion),
        "verdict": "pass" if report.passed else "fail",
        "failures": list(report.failures),
    }


def dump_json(obj: Any) -> str:
    """Canonical serialization: sorted keys, two-space indent, trailing newline."""
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"
