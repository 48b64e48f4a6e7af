"""JSON matrix literals.

An entry is an integer, a rational string such as ``"-3/4"``, or a pair
``[re, im]`` of those. A JSON float anywhere makes the matrix a float
matrix. Output always uses strings so exact values round-trip.
"""

from __future__ import annotations

from fractions import Fraction

from .linalg import DEFAULT_TOL, Mat, Scalar


class LiteralError(ValueError):
    def __init__(self, message: str, path: str = ""):
        self.path = path
        super().__init__(f"{path}: {message}" if path else message)


def _part(value, path: str):
    if isinstance(value, bool):
        raise LiteralError("booleans are not numbers", path)
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        return value
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise LiteralError(f"cannot read {value!r} as a rational", path) from exc
    raise LiteralError(f"unexpected entry {value!r}", path)


def parse_scalar(value, path: str = "") -> Scalar:
    if isinstance(value, list):
        if len(value) != 2:
            raise LiteralError("complex entries are [re, im] pairs", path)
        re, im = _part(value[0], path), _part(value[1], path)
    else:
        re, im = _part(value, path), Fraction(0)
    if isinstance(re, float) or isinstance(im, float):
        return Scalar(float(re), float(im))
    return Scalar(re, im)


def parse_matrix(value, path: str = "", shape: tuple[int, int] | None = None, tol: float | None = None) -> Mat:
    if not isinstance(value, list) or not value or not all(isinstance(r, list) for r in value):
        raise LiteralError("a matrix is a non-empty list of rows", path)
    rows = [[parse_scalar(x, f"{path}[{i}][{j}]") for j, x in enumerate(r)] for i, r in enumerate(value)]
    width = len(rows[0])
    for i, r in enumerate(rows):
        if len(r) != width:
            raise LiteralError(f"row {i} has {len(r)} entries, expected {width}", path)
    if shape is not None and (len(rows), width) != shape:
        raise LiteralError(f"expected a {shape[0]}x{shape[1]} matrix, got {len(rows)}x{width}", path)
    m = Mat.from_rows(rows)
    if tol is not None:
        m = m.to_float(tol)
    return m


def format_scalar(s: Scalar):
    if not s.exact:
        return [repr(float(s.re)), repr(float(s.im))] if s.im else repr(float(s.re))
    re = str(Fraction(s.re))
    return [re, str(Fraction(s.im))] if s.im else re


def format_matrix(m: Mat) -> list[list]:
    return [[format_scalar(x) for x in row] for row in m.entries()]


def float_tol(tol: float | None) -> float:
    return DEFAULT_TOL if tol is None else tol
