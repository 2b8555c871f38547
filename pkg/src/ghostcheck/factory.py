"""Instance construction: dimension counts, the line-star example family,
and seeded random problems for property testing."""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .curves import HyperellipticModel, NodalRationalModel
from .exact import rat_vector
from .obstruction import AttachmentColumn, ObstructionProblem


class FactoryError(ValueError):
    pass


class ModelConstructionError(FactoryError):
    """Raised when no admissible point configuration was found."""


def _moduli_dim_formula(ambient_dim: int, genus: int, degree: int) -> int:
    return (ambient_dim - 3) * (1 - genus) + degree * (ambient_dim + 1)


def dim_moduli(ambient_dim: int, genus: int, degree: int) -> int:
    """Dimension of the space of maps with smooth genus-g domains, degree d,
    into projective N-space: (N-3)(1-g) + d(N+1). Needs d >= 2g-1 so the
    deformations are unobstructed."""
    if ambient_dim < 1 or genus < 1 or degree < 1:
        raise FactoryError("need N, g, d >= 1")
    if degree < 2 * genus - 1:
        raise FactoryError(f"need d >= 2g-1 (got d = {degree}, g = {genus})")
    return _moduli_dim_formula(ambient_dim, genus, degree)


@dataclass(frozen=True)
class StratumSpec:
    """One boundary stratum: a genus-h ghost curve with n attached effective
    pieces of genera g_i and degrees d_i (d_i >= 2 g_i)."""

    ambient_dim: int
    ghost_genus: int
    parts: tuple[tuple[int, int], ...]

    def __init__(self, ambient_dim: int, ghost_genus: int, parts: Sequence[Sequence[int]]):
        pts = tuple((int(g), int(d)) for g, d in parts)
        if ambient_dim < 1:
            raise FactoryError("ambient dimension must be >= 1")
        if ghost_genus < 1:
            raise FactoryError("ghost genus must be >= 1")
        if not pts:
            raise FactoryError("need at least one attached part")
        for g_i, d_i in pts:
            if g_i < 0 or d_i < 1:
                raise FactoryError("parts need g_i >= 0 and d_i >= 1")
            if d_i < 2 * g_i:
                raise FactoryError(f"part (g={g_i}, d={d_i}) violates d_i >= 2 g_i")
        object.__setattr__(self, "ambient_dim", ambient_dim)
        object.__setattr__(self, "ghost_genus", ghost_genus)
        object.__setattr__(self, "parts", pts)
        if self.degree < 2 * self.genus - 1:
            raise FactoryError(
                f"total degree {self.degree} violates d >= 2g-1 for total genus {self.genus}"
            )

    @property
    def n_points(self) -> int:
        return len(self.parts)

    @property
    def genus(self) -> int:
        return self.ghost_genus + sum(g for g, _ in self.parts)

    @property
    def degree(self) -> int:
        return sum(d for _, d in self.parts)


def dim_stratum(spec: StratumSpec) -> int:
    """Dimension of the stratum, computed by the explicit sum

        3h - 3 + n - N(n-1) + sum_i ((N-3)(1-g_i) + d_i(N+1) + 1)

    and cross-checked against the closed form (moduli dimension) + N h - n.
    """
    big_n, h, n = spec.ambient_dim, spec.ghost_genus, spec.n_points
    total = 3 * h - 3 + n - big_n * (n - 1)
    for g_i, d_i in spec.parts:
        total += (big_n - 3) * (1 - g_i) + d_i * (big_n + 1) + 1
    closed_form = _moduli_dim_formula(big_n, spec.genus, spec.degree) + big_n * h - n
    if total != closed_form:
        raise AssertionError("stratum dimension formulas disagree; this is a bug")
    return total


# -- the line-star example family --------------------------------------------


def _hyperelliptic_star_model(h: int) -> tuple[HyperellipticModel, list[int]]:
    """Genus-h curve y^2 = k^2 + prod_{j=1}^{2h+2} (x - j), which carries the
    rational points (j, +-k) for j = 1..2h+2. The constant k^2 is bumped
    through squares until f is squarefree."""
    xs = list(range(1, 2 * h + 3))
    base = [Fraction(1)]
    for j in xs:
        base = [
            (base[i - 1] if i > 0 else Fraction(0)) - Fraction(j) * (base[i] if i < len(base) else Fraction(0))
            for i in range(len(base) + 1)
        ]
    for k in range(1, 50):
        coeffs = list(base)
        coeffs[0] += Fraction(k * k)
        try:
            return HyperellipticModel(h, coeffs), [k]
        except ValueError:
            continue
    raise ModelConstructionError(f"no squarefree interpolating polynomial found for h = {h}")


def _hyperelliptic_star_points(
    big_n: int, h: int
) -> tuple[HyperellipticModel, list[list[tuple[Fraction, Fraction]]]]:
    """N groups of h distinct points, each group with full evaluation rank.

    Groups 2i-1 and 2i share a block of x-values with opposite y-signs, so
    the whole collection stays pairwise distinct; the model guarantees
    rational points over x = 1..2h+2 only, which bounds ceil(N/2) blocks of
    h x-values each.
    """
    blocks_needed = (big_n + 1) // 2
    if blocks_needed * h > 2 * h + 2:
        raise ModelConstructionError(
            f"N = {big_n}, h = {h}: the model guarantees rational points over "
            f"{2 * h + 2} x-values, fewer than the {blocks_needed * h} required"
        )
    model, (k,) = _hyperelliptic_star_model(h)
    groups = []
    for i in range(big_n):
        block = i // 2
        sign = 1 if i % 2 == 0 else -1
        xs = range(block * h + 1, block * h + h + 1)
        points = [(Fraction(x), Fraction(sign * k)) for x in xs]
        groups.append(points)
    for points in groups:
        if model.ev_matrix(points).rank() != h:
            raise ModelConstructionError("group evaluation matrix is rank deficient")
    return model, groups


def _nodal_star_points(
    big_n: int, h: int, seed: int
) -> tuple[NodalRationalModel, list[list[Fraction]]]:
    """N groups of h distinct parameters with full per-group evaluation rank.

    Parameters are taken from 2h upward (the first 2h integers are node
    preimages); a rank-deficient group advances to fresh values, with a
    seeded random fallback after a bounded number of tries.
    """
    model = NodalRationalModel(h, [(2 * j, 2 * j + 1) for j in range(h)])
    rng = random.Random(seed)
    groups: list[list[Fraction]] = []
    taken: set[Fraction] = set()
    next_value = 2 * h
    for _ in range(big_n):
        for _attempt in range(64):
            candidate = [Fraction(next_value + offset) for offset in range(h)]
            next_value += h
            if taken & set(candidate):
                continue
            if model.ev_matrix(candidate).rank() == h:
                groups.append(candidate)
                taken.update(candidate)
                break
        else:
            for _attempt in range(256):
                candidate = sorted(
                    Fraction(rng.randint(2 * h, 10**6)) for _ in range(h)
                )
                if len(set(candidate)) != h or taken & set(candidate):
                    continue
                if model.ev_matrix(candidate).rank() == h:
                    groups.append(candidate)
                    taken.update(candidate)
                    break
            else:
                raise ModelConstructionError("no full-rank point group found")
    return model, groups


def build_line_star_instance(
    big_n: int, h: int, model_kind: str = "hyperelliptic", seed: int = 0
) -> ObstructionProblem:
    """Ghost curve of genus h attached to N concurrent lines, h points each.

    Group i of attachment points carries the i-th standard basis vector of
    the target tangent space as its derivative; every group's evaluation
    matrix has rank h, so the obstruction matrix is square of full rank
    n = N h and the injectivity test always fires. The subset rank test
    never does: the set of all points satisfies the inequality because
    N + h <= N h for N, h >= 2.
    """
    if big_n < 2 or h < 2:
        raise FactoryError("the line-star family needs N >= 2 and h >= 2")
    model, groups = _line_star_geometry(big_n, h, model_kind, seed)
    columns = []
    for i, points in enumerate(groups):
        deriv = [Fraction(0)] * big_n
        deriv[i] = Fraction(1)
        for p in points:
            delta = model.ev_vector(p)
            columns.append(AttachmentColumn(delta=delta, deriv=deriv))
    return ObstructionProblem(genus=h, ambient_dim=big_n, points=columns)


def _line_star_geometry(big_n: int, h: int, model_kind: str, seed: int):
    if model_kind == "hyperelliptic":
        return _hyperelliptic_star_points(big_n, h)
    if model_kind == "nodal_rational":
        return _nodal_star_points(big_n, h, seed)
    raise FactoryError(f"unknown model kind {model_kind!r}")


def random_instance(
    seed: int, genus: int, ambient_dim: int, n_points: int, coeff_bound: int = 9
) -> ObstructionProblem:
    """Seed-deterministic problem with integer entries in [-bound, bound]."""
    if genus < 1 or ambient_dim < 1 or n_points < 1:
        raise FactoryError("need g, N, n >= 1")
    rng = random.Random(seed)
    columns = []
    for _ in range(n_points):
        delta = [rng.randint(-coeff_bound, coeff_bound) for _ in range(genus)]
        deriv = [rng.randint(-coeff_bound, coeff_bound) for _ in range(ambient_dim)]
        columns.append(AttachmentColumn(delta=rat_vector(delta), deriv=rat_vector(deriv)))
    return ObstructionProblem(genus=genus, ambient_dim=ambient_dim, points=columns)
