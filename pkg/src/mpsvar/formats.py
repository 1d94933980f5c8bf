"""JSON file formats for states, parameters, polynomials and reports.

Rationals are strings ("3", "-1/4"); complex floats are [re, im] pairs of
numbers; real floats are written with 17 significant digits.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Any

from .exactnum import COMPLEX_FLOAT, Mod, QuadExt, common_kind
from .parametrize import BoundaryPair, MatrixTuple, RhoParams
from .polynomial import SparsePolynomial
from .states import PureState


class FormatError(ValueError):
    """A file does not follow the expected format."""


def format_float(x: float) -> str:
    return format(x, ".17g")


def scalar_to_json(x) -> Any:
    if isinstance(x, bool):
        raise FormatError("booleans are not scalars")
    if isinstance(x, int):
        return str(x)
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, Mod):
        return str(x.value)
    if isinstance(x, QuadExt):
        return str(x)
    if isinstance(x, float):
        return [float(format_float(x)), 0.0]
    if isinstance(x, complex):
        return [float(format_float(x.real)), float(format_float(x.imag))]
    raise FormatError(f"cannot serialize {type(x).__name__}")


def scalar_from_json(v, scalar: str = "rational"):
    if scalar == "float":
        if isinstance(v, list):
            if len(v) != 2:
                raise FormatError("complex values are [re, im] pairs")
            return complex(float(v[0]), float(v[1]))
        return complex(float(v))
    if isinstance(v, (int, str)) and not isinstance(v, bool):
        try:
            return Fraction(v)
        except (ValueError, ZeroDivisionError) as exc:
            raise FormatError(f"bad rational {v!r}") from exc
    raise FormatError(f"bad rational {v!r}")


def format_scalar(x) -> str:
    """Human-readable exact string, or 17 significant digits for floats."""
    if isinstance(x, complex):
        if x.imag == 0:
            return format_float(x.real)
        return f"({format_float(x.real)}{'+' if x.imag >= 0 else '-'}{format_float(abs(x.imag))}j)"
    if isinstance(x, float):
        return format_float(x)
    return str(x)


def _scalar_name(values) -> str:
    return "float" if common_kind(values) == COMPLEX_FLOAT else "rational"


# states ---------------------------------------------------------------------

def state_to_json(s: PureState) -> dict:
    return {
        "kind": "pure_state", "d": s.d, "N": s.N, "scalar": _scalar_name(s.amplitudes),
        "amplitudes": [scalar_to_json(a) for a in s.amplitudes],
    }


def state_from_json(obj: dict) -> PureState:
    _expect(obj, "pure_state")
    try:
        d, N, scalar = int(obj["d"]), int(obj["N"]), obj.get("scalar", "rational")
        amps = tuple(scalar_from_json(v, scalar) for v in obj["amplitudes"])
    except KeyError as exc:
        raise FormatError(f"missing field {exc}") from exc
    return PureState(d, N, amps)


# parameters -----------------------------------------------------------------

def params_to_json(obj) -> dict:
    if isinstance(obj, RhoParams):
        out = {"kind": "rho_params"}
        out.update({k: scalar_to_json(v) for k, v in zip(RhoParams.names(), obj.as_tuple())})
        return out
    if isinstance(obj, tuple) and len(obj) == 2 and isinstance(obj[1], BoundaryPair):
        A, bd = obj
        out = _matrices_json("ob_params", A)
        out["b0"] = [scalar_to_json(x) for x in bd.b0]
        out["b1"] = [scalar_to_json(x) for x in bd.b1]
        return out
    if isinstance(obj, MatrixTuple):
        return _matrices_json("pb_params", obj)
    raise FormatError(f"cannot serialize parameters of type {type(obj).__name__}")


def _matrices_json(kind: str, A: MatrixTuple) -> dict:
    vals = A.params()
    return {"kind": kind, "D": A.D, "d": A.d, "scalar": _scalar_name(vals),
            "matrices": [[[scalar_to_json(x) for x in row] for row in m] for m in A.mats]}


def params_from_json(obj: dict):
    kind = obj.get("kind")
    scalar = obj.get("scalar", "rational")
    conv = lambda v: scalar_from_json(v, scalar)
    try:
        if kind == "rho_params":
            return RhoParams(*(conv(obj[k]) for k in RhoParams.names()))
        if kind in ("pb_params", "ob_params"):
            A = MatrixTuple([[[conv(x) for x in row] for row in m] for m in obj["matrices"]])
            if "D" in obj and int(obj["D"]) != A.D or "d" in obj and int(obj["d"]) != A.d:
                raise FormatError("declared D or d disagrees with the matrices")
            if kind == "pb_params":
                return A
            return A, BoundaryPair([conv(x) for x in obj["b0"]], [conv(x) for x in obj["b1"]])
    except KeyError as exc:
        raise FormatError(f"missing field {exc}") from exc
    raise FormatError(f"unknown parameter kind {kind!r}")


# polynomials and generic IO -----------------------------------------------

def poly_from_json(obj: dict) -> SparsePolynomial:
    _expect(obj, "poly")
    return SparsePolynomial.from_json(obj)


def _expect(obj: dict, kind: str) -> None:
    if not isinstance(obj, dict) or obj.get("kind") != kind:
        raise FormatError(f"expected a {kind!r} object")


def dumps(obj: dict) -> str:
    return json.dumps(obj, indent=2, ensure_ascii=False) + "\n"


def read_json(path: str) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}: {exc}") from exc


def write_text(path: str, text: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)
