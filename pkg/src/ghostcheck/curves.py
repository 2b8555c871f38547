"""Ghost-curve models and their evaluation covectors.

Each model fixes a basis of the global sections of its dualizing sheaf and a
local coordinate at every admissible point, and produces the vector of basis
sections evaluated at a point against that coordinate. Conventions:

- hyperelliptic y^2 = f(x), genus g: basis x^(a-1) dx / y for a = 1..g,
  coordinate x - x0 at a point (x0, y0) with y0 != 0;
- nodal rational (a line glued at g pairs of points): basis
  eta_j = (1/(x - a_j) - 1/(x - b_j)) dx, coordinate x - p at a parameter p
  away from the glued points (residues +1 at a_j, -1 at b_j);
- raw: a stored genus x n matrix of evaluation vectors, points are indices.

Verdicts downstream are invariant under these choices; the conventions are
fixed so that fixtures and reports are reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence, Union

from .exact import QMatrix, RatLike, rat, rat_vector


class CurveModelError(ValueError):
    """Invalid model data or inadmissible point."""


class PointNotOnCurve(CurveModelError):
    pass


class WeierstrassPoint(CurveModelError):
    """y = 0 on a hyperelliptic model; the fixed chart cannot evaluate there."""


class PointAtNode(CurveModelError):
    pass


class DuplicatePoint(CurveModelError):
    pass


def _poly_eval(coeffs: Sequence[Fraction], x: Fraction) -> Fraction:
    acc = Fraction(0)
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def _poly_derivative(coeffs: Sequence[Fraction]) -> list[Fraction]:
    return [Fraction(i) * coeffs[i] for i in range(1, len(coeffs))]


def _poly_trim(coeffs: list[Fraction]) -> list[Fraction]:
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    return coeffs


def _poly_mod(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    a = _poly_trim(list(a))
    while len(a) >= len(b):
        f = a[-1] / b[-1]
        shift = len(a) - len(b)
        for i in range(len(b)):
            a[shift + i] -= f * b[i]
        a = _poly_trim(a)
        if not a:
            break
    return a


def _poly_gcd_degree(a: Sequence[Fraction], b: Sequence[Fraction]) -> int:
    u = _poly_trim(list(a))
    v = _poly_trim(list(b))
    while v:
        u, v = v, _poly_mod(u, v)
    return len(u) - 1


def is_squarefree(coeffs: Sequence[Fraction]) -> bool:
    """gcd(f, f') is a nonzero constant."""
    f = _poly_trim([rat(c) for c in coeffs])
    if len(f) - 1 < 1:
        return False
    return _poly_gcd_degree(f, _poly_derivative(f)) == 0


@dataclass(frozen=True)
class HyperellipticModel:
    """Smooth hyperelliptic curve y^2 = f(x) of genus g >= 1.

    ``f_coeffs[i]`` multiplies x^i; deg f must be 2g+1 or 2g+2 and f must be
    squarefree. Points are (x0, y0) pairs on the affine chart with y0 != 0.
    """

    genus: int
    f_coeffs: tuple[Fraction, ...]

    def __init__(self, genus: int, f_coeffs: Sequence[RatLike]):
        coeffs = rat_vector(f_coeffs)
        if genus < 1:
            raise CurveModelError("ghost models need genus >= 1")
        if not coeffs or coeffs[-1] == 0:
            raise CurveModelError("leading coefficient of f must be nonzero")
        degree = len(coeffs) - 1
        if degree not in (2 * genus + 1, 2 * genus + 2):
            raise CurveModelError(
                f"deg f = {degree} incompatible with genus {genus} (need 2g+1 or 2g+2)"
            )
        if not is_squarefree(coeffs):
            raise CurveModelError("f must be squarefree")
        object.__setattr__(self, "genus", genus)
        object.__setattr__(self, "f_coeffs", coeffs)

    def f_at(self, x: RatLike) -> Fraction:
        return _poly_eval(self.f_coeffs, rat(x))

    def validate_point(self, point: Sequence[RatLike]) -> tuple[Fraction, Fraction]:
        x0, y0 = rat(point[0]), rat(point[1])
        if y0 * y0 != self.f_at(x0):
            raise PointNotOnCurve(f"({x0}, {y0}) does not satisfy y^2 = f(x)")
        if y0 == 0:
            raise WeierstrassPoint(f"x = {x0} is a branch point; evaluation needs y != 0")
        return x0, y0

    def ev_vector(
        self, point: Sequence[RatLike], coordinate_scale: RatLike = 1
    ) -> tuple[Fraction, ...]:
        """(w_1(p), ..., w_g(p)) against the coordinate scale*(x - x0).

        The basis section x^(a-1) dx / y evaluates to x0^(a-1) / y0 in the
        coordinate x - x0; rescaling the coordinate by s divides every entry
        by s (covector transformation).
        """
        x0, y0 = self.validate_point(point)
        s = rat(coordinate_scale)
        if s == 0:
            raise CurveModelError("coordinate scale must be nonzero")
        return tuple(x0 ** (a - 1) / (y0 * s) for a in range(1, self.genus + 1))

    def ev_matrix(self, points: Sequence[Sequence[RatLike]]) -> QMatrix:
        seen = set()
        for p in points:
            key = (rat(p[0]), rat(p[1]))
            if key in seen:
                raise DuplicatePoint(f"point {key} listed twice")
            seen.add(key)
        return QMatrix.from_columns([self.ev_vector(p) for p in points])


@dataclass(frozen=True)
class NodalRationalModel:
    """Irreducible nodal curve of arithmetic genus g: a line glued at g pairs.

    Sections of the dualizing sheaf are differentials on the line with simple
    poles at the pair (a_j, b_j) and opposite residues; the basis eta_j has
    residue +1 at a_j and -1 at b_j. Points and nodes live on one affine
    chart (the point at infinity is excluded).
    """

    genus: int
    node_pairs: tuple[tuple[Fraction, Fraction], ...]

    def __init__(self, genus: int, node_pairs: Sequence[Sequence[RatLike]]):
        if genus < 1:
            raise CurveModelError("ghost models need genus >= 1")
        pairs = tuple((rat(a), rat(b)) for a, b in node_pairs)
        if len(pairs) != genus:
            raise CurveModelError(f"genus {genus} needs exactly {genus} node pairs")
        flat = [v for pair in pairs for v in pair]
        if len(set(flat)) != len(flat):
            raise CurveModelError("node parameters must be pairwise distinct")
        object.__setattr__(self, "genus", genus)
        object.__setattr__(self, "node_pairs", pairs)

    def basis_residues(self, j: int) -> tuple[tuple[Fraction, Fraction], tuple[Fraction, Fraction]]:
        """((a_j, +1), (b_j, -1)): the defining residue data of eta_j."""
        a, b = self.node_pairs[j]
        return (a, Fraction(1)), (b, Fraction(-1))

    def validate_point(self, p: RatLike) -> Fraction:
        value = rat(p)
        for a, b in self.node_pairs:
            if value == a or value == b:
                raise PointAtNode(f"parameter {value} is a node preimage")
        return value

    def ev_vector(self, p: RatLike, coordinate_scale: RatLike = 1) -> tuple[Fraction, ...]:
        value = self.validate_point(p)
        s = rat(coordinate_scale)
        if s == 0:
            raise CurveModelError("coordinate scale must be nonzero")
        return tuple(
            (1 / (value - a) - 1 / (value - b)) / s for a, b in self.node_pairs
        )

    def ev_matrix(self, points: Sequence[RatLike]) -> QMatrix:
        values = [rat(p) for p in points]
        if len(set(values)) != len(values):
            raise DuplicatePoint("parameters must be pairwise distinct")
        return QMatrix.from_columns([self.ev_vector(p) for p in values])


@dataclass(frozen=True)
class RawEvaluationModel:
    """Direct carrier of an evaluation matrix; points are column indices."""

    genus: int
    matrix: QMatrix

    def __init__(self, genus: int, matrix: QMatrix):
        if genus < 1:
            raise CurveModelError("ghost models need genus >= 1")
        if matrix.rows != genus:
            raise CurveModelError(
                f"evaluation matrix has {matrix.rows} rows, expected genus {genus}"
            )
        object.__setattr__(self, "genus", genus)
        object.__setattr__(self, "matrix", matrix)

    def ev_vector(self, index: int) -> tuple[Fraction, ...]:
        if not 0 <= index < self.matrix.cols:
            raise CurveModelError(f"point index {index} out of range")
        return self.matrix.column(index)

    def ev_matrix(self, indices: Sequence[int]) -> QMatrix:
        if len(set(indices)) != len(indices):
            raise DuplicatePoint("indices must be pairwise distinct")
        return QMatrix.from_columns([self.ev_vector(i) for i in indices])


GhostCurveModel = Union[HyperellipticModel, NodalRationalModel, RawEvaluationModel]
