"""Sparse multivariate Laurent polynomials over exact rationals.

A polynomial is a finite map from exponent vectors (integers, possibly
negative) to nonzero rational coefficients, together with an ordered
variable list. Zero coefficients are never stored, so equality is
structural. Serialization orders terms graded-lexicographically
(total degree first, then the exponent vector) to keep fixtures and
reports byte-stable.

Example
-------
>>> x = LaurentPoly.variable(("x", "y"), "x")
>>> y = LaurentPoly.variable(("x", "y"), "y")
>>> (x + y) * (x - y) == x * x - y * y
True
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping, Sequence, Union

from .exact import RatLike, rat, rat_to_str


class LaurentVariableMismatch(ValueError):
    """Raised when combining polynomials over different variable lists."""


class MissingSubstitutionImage(ValueError):
    """Raised when a substitution map omits a variable of the polynomial."""


TermsLike = Union[
    Mapping[tuple[int, ...], RatLike],
    Iterable[tuple[Sequence[int], RatLike]],
]


class LaurentPoly:
    __slots__ = ("variables", "terms")

    def __init__(self, variables: Sequence[str], terms: TermsLike = ()):
        vt = tuple(str(v) for v in variables)
        if len(set(vt)) != len(vt):
            raise ValueError(f"duplicate variable names in {vt}")
        items = terms.items() if isinstance(terms, Mapping) else terms
        canon: dict[tuple[int, ...], Fraction] = {}
        for exps, coeff in items:
            e = tuple(int(k) for k in exps)
            if len(e) != len(vt):
                raise ValueError(f"exponent vector {e} does not match variables {vt}")
            q = canon.get(e, Fraction(0)) + rat(coeff)
            if q:
                canon[e] = q
            else:
                canon.pop(e, None)
        object.__setattr__(self, "variables", vt)
        object.__setattr__(self, "terms", canon)

    def __setattr__(self, name, value):
        raise AttributeError("LaurentPoly is immutable")

    # -- constructors ---------------------------------------------------

    @classmethod
    def zero(cls, variables: Sequence[str]) -> "LaurentPoly":
        return cls(variables)

    @classmethod
    def constant(cls, variables: Sequence[str], value: RatLike) -> "LaurentPoly":
        exps = (0,) * len(tuple(variables))
        return cls(variables, {exps: value})

    @classmethod
    def monomial(cls, variables: Sequence[str], exps: Sequence[int], coeff: RatLike = 1) -> "LaurentPoly":
        return cls(variables, {tuple(exps): coeff})

    @classmethod
    def variable(cls, variables: Sequence[str], name: str) -> "LaurentPoly":
        vt = tuple(variables)
        exps = [0] * len(vt)
        exps[vt.index(name)] = 1
        return cls(vt, {tuple(exps): 1})

    # -- predicates and accessors ----------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self.terms

    @property
    def is_constant(self) -> bool:
        return all(all(k == 0 for k in e) for e in self.terms)

    def constant_value(self) -> Fraction:
        """The value of a constant polynomial (zero included)."""
        if not self.is_constant:
            raise ValueError(f"not a constant polynomial: {self!r}")
        zero_exps = (0,) * len(self.variables)
        return self.terms.get(zero_exps, Fraction(0))

    def coefficient(self, exps: Sequence[int]) -> Fraction:
        return self.terms.get(tuple(exps), Fraction(0))

    def min_exponent(self, var: str) -> int | None:
        """Smallest exponent of ``var`` over all terms; None for the zero polynomial."""
        idx = self.variables.index(var)
        if not self.terms:
            return None
        return min(e[idx] for e in self.terms)

    def sorted_terms(self) -> list[tuple[tuple[int, ...], Fraction]]:
        return sorted(self.terms.items(), key=lambda item: (sum(item[0]), item[0]))

    # -- ring operations --------------------------------------------------

    def _check_same_variables(self, other: "LaurentPoly"):
        if self.variables != other.variables:
            raise LaurentVariableMismatch(
                f"variable lists differ: {self.variables} vs {other.variables}"
            )

    def __add__(self, other: "LaurentPoly") -> "LaurentPoly":
        self._check_same_variables(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            q = out.get(e, Fraction(0)) + c
            if q:
                out[e] = q
            else:
                out.pop(e, None)
        return LaurentPoly(self.variables, out)

    def __neg__(self) -> "LaurentPoly":
        return LaurentPoly(self.variables, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other: "LaurentPoly") -> "LaurentPoly":
        return self + (-other)

    def __mul__(self, other) -> "LaurentPoly":
        if not isinstance(other, LaurentPoly):
            return self.scale(other)
        self._check_same_variables(other)
        out: dict[tuple[int, ...], Fraction] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                q = out.get(e, Fraction(0)) + c1 * c2
                if q:
                    out[e] = q
                else:
                    out.pop(e, None)
        return LaurentPoly(self.variables, out)

    def __rmul__(self, other) -> "LaurentPoly":
        return self.scale(other)

    def scale(self, factor: RatLike) -> "LaurentPoly":
        f = rat(factor)
        if not f:
            return LaurentPoly(self.variables)
        return LaurentPoly(self.variables, {e: c * f for e, c in self.terms.items()})

    def __pow__(self, n: int) -> "LaurentPoly":
        if not isinstance(n, int) or n < 0:
            raise ValueError("only nonnegative integer powers are supported")
        out = LaurentPoly.constant(self.variables, 1)
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, LaurentPoly)
            and self.variables == other.variables
            and self.terms == other.terms
        )

    __hash__ = None  # mutable-dict storage; hashing is not supported

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        pieces = []
        for exps, coeff in self.sorted_terms():
            factors = [
                f"{v}^{k}" if k != 1 else v
                for v, k in zip(self.variables, exps)
                if k != 0
            ]
            if not factors:
                pieces.append(str(coeff))
            elif coeff == 1:
                pieces.append("*".join(factors))
            elif coeff == -1:
                pieces.append("-" + "*".join(factors))
            else:
                pieces.append(f"{coeff}*" + "*".join(factors))
        return " + ".join(pieces).replace("+ -", "- ")


def substitute(poly: LaurentPoly, images: Mapping[str, LaurentPoly]) -> LaurentPoly:
    """Apply a monomial substitution, a ring homomorphism.

    Every variable of ``poly`` must have an image; each image must be a
    single Laurent monomial with nonzero coefficient, and all images must
    share one target variable list. Negative exponents pass through
    monomial inversion, so substitute(p*q) = substitute(p)*substitute(q).
    """
    if not images:
        raise MissingSubstitutionImage("empty substitution map")
    target_vars = next(iter(images.values())).variables
    parsed: dict[str, tuple[tuple[int, ...], Fraction]] = {}
    for name, image in images.items():
        if image.variables != target_vars:
            raise LaurentVariableMismatch("substitution images must share one variable list")
        if len(image.terms) != 1:
            raise ValueError(f"image of {name!r} is not a single monomial: {image!r}")
        ((exps, coeff),) = image.terms.items()
        parsed[name] = (exps, coeff)
    for v in poly.variables:
        if v not in parsed:
            raise MissingSubstitutionImage(f"no image for variable {v!r}")
    out: dict[tuple[int, ...], Fraction] = {}
    width = len(target_vars)
    for exps, coeff in poly.terms.items():
        new_exps = [0] * width
        new_coeff = coeff
        for v, k in zip(poly.variables, exps):
            if k == 0:
                continue
            img_exps, img_coeff = parsed[v]
            for i in range(width):
                new_exps[i] += img_exps[i] * k
            new_coeff *= img_coeff**k
        e = tuple(new_exps)
        q = out.get(e, Fraction(0)) + new_coeff
        if q:
            out[e] = q
        else:
            out.pop(e, None)
    return LaurentPoly(target_vars, out)


def restrict_to_axis(poly: LaurentPoly, var: str) -> tuple[LaurentPoly, int]:
    """Leading Laurent coefficient of ``poly`` along the divisor {var = 0}.

    Returns ``(restricted, pole_order)`` where pole_order is
    max(0, -min exponent of var) and ``restricted`` collects the terms whose
    var-exponent equals -pole_order, with ``var`` removed from the variable
    list. In particular, when the polynomial is regular along the axis
    (pole_order 0) the result is the honest restriction, and a polynomial
    that vanishes along the axis restricts to 0.
    """
    idx = poly.variables.index(var)
    rest_vars = poly.variables[:idx] + poly.variables[idx + 1 :]
    if not poly.terms:
        return LaurentPoly(rest_vars), 0
    min_exp = min(e[idx] for e in poly.terms)
    pole_order = max(0, -min_exp)
    kept = {
        (e[:idx] + e[idx + 1 :]): c
        for e, c in poly.terms.items()
        if e[idx] == -pole_order
    }
    return LaurentPoly(rest_vars, kept), pole_order


def normal_form_xyt(poly: LaurentPoly, m: int) -> LaurentPoly:
    """Normal form in k[x,y,t]/(xy - t^m): rewrite xy -> t^m until no term
    carries both x and y.

    The polynomial must have three variables, read positionally as
    (x, y, t), and only nonnegative exponents. The result is the unique
    representative with min(x-exp, y-exp) = 0 in every term.
    """
    if len(poly.variables) != 3:
        raise ValueError(f"expected exactly three variables (x, y, t), got {poly.variables}")
    if m < 1:
        raise ValueError("m must be >= 1")
    out: dict[tuple[int, ...], Fraction] = {}
    for (ex, ey, et), coeff in poly.terms.items():
        if ex < 0 or ey < 0 or et < 0:
            raise ValueError(f"negative exponent in term {(ex, ey, et)}")
        k = min(ex, ey)
        e = (ex - k, ey - k, et + k * m)
        q = out.get(e, Fraction(0)) + coeff
        if q:
            out[e] = q
        else:
            out.pop(e, None)
    return LaurentPoly(poly.variables, out)


def poly_to_json(poly: LaurentPoly) -> list[dict]:
    """Serialize terms as [{"exps": [...], "coeff": "a/b"}, ...] in graded-lex order."""
    return [
        {"exps": list(exps), "coeff": rat_to_str(coeff)}
        for exps, coeff in poly.sorted_terms()
    ]


def poly_from_json(variables: Sequence[str], data: Iterable[Mapping]) -> LaurentPoly:
    terms = []
    for item in data:
        terms.append((tuple(int(k) for k in item["exps"]), rat(item["coeff"])))
    return LaurentPoly(variables, terms)
