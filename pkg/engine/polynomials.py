"""
Graded Polynomial Rings over F_p.

Polynomials are sympy Poly objects over GF(p) in the ring's generators. This
module owns the text format ("c*x1^a1*...*xr^ar") and the evaluation of
polynomials at points with coordinates in an extension field.
"""

import itertools
import re
from math import comb
from dataclasses import dataclass
from functools import cached_property
from typing import Dict, List, Sequence, Tuple

import numpy as np
import sympy
import galois

from engine.finite_field import FieldSpec


_TERM_TOKEN = re.compile(r"^[0-9a-zA-Z_\s\*\^\+\-\(\)]*$")


@dataclass(frozen=True)
class GradedPolyRing:
    """
    k[x_1..x_r] over F_p with every generator of one degree.

    Attributes:
        p: Characteristic
        r: Number of variables
        gen_degree: Degree of each generator (1 or 2)
        prefix: Variable name prefix
    """
    p: int
    r: int
    gen_degree: int = 1
    prefix: str = "x"

    def __post_init__(self):
        FieldSpec(self.p)
        if self.r < 1:
            raise ValueError(f"Ring needs at least one variable, got r={self.r}")
        if self.gen_degree < 1:
            raise ValueError(f"Generator degree must be positive, got {self.gen_degree}")

    @cached_property
    def symbols(self) -> Tuple[sympy.Symbol, ...]:
        return tuple(sympy.Symbol(f"{self.prefix}{i + 1}") for i in range(self.r))

    @cached_property
    def _namespace(self) -> Dict[str, sympy.Symbol]:
        return {str(s): s for s in self.symbols}

    def descriptor(self) -> Dict[str, int]:
        return {"p": self.p, "r": self.r, "gen_degree": self.gen_degree}

    def poly(self, expr) -> sympy.Poly:
        """Coerce a sympy expression, integer or Poly into this ring."""
        if isinstance(expr, sympy.Poly):
            expr = expr.as_expr()
        return sympy.Poly(expr, *self.symbols, modulus=self.p)

    def zero(self) -> sympy.Poly:
        return self.poly(0)

    def one(self) -> sympy.Poly:
        return self.poly(1)

    def var(self, i: int) -> sympy.Poly:
        """The i-th generator, 0-based."""
        return self.poly(self.symbols[i])

    def variables(self) -> List[sympy.Poly]:
        return [self.var(i) for i in range(self.r)]

    def monomial(self, exponents: Sequence[int], coeff: int = 1) -> sympy.Poly:
        expr = sympy.Integer(coeff)
        for s, a in zip(self.symbols, exponents):
            expr *= s ** int(a)
        return self.poly(expr)

    def monomials_of_weight(self, weight: int) -> List[Tuple[int, ...]]:
        """Exponent vectors with total exponent `weight`, in lexicographic order."""
        return sorted(
            a for a in itertools.product(range(weight + 1), repeat=self.r)
            if sum(a) == weight
        )

    def degree(self, f: sympy.Poly) -> int:
        """Graded degree of a homogeneous polynomial (total degree times gen_degree)."""
        if f.is_zero:
            return 0
        return f.total_degree() * self.gen_degree

    def is_homogeneous(self, f: sympy.Poly) -> bool:
        if f.is_zero:
            return True
        return len({sum(m) for m in f.monoms()}) == 1

    def coefficients(self, f: sympy.Poly) -> List[Tuple[Tuple[int, ...], int]]:
        """Terms as (exponents, coefficient in 0..p-1), graded reverse lex descending."""
        if f.is_zero:
            return []
        terms = []
        for monom, coeff in f.terms(order="grevlex"):
            c = int(coeff) % self.p
            if c:
                terms.append((tuple(int(a) for a in monom), c))
        return terms

    def format(self, f: sympy.Poly) -> str:
        """Render f in the `c*x1^a1*...` text format."""
        terms = self.coefficients(f)
        if not terms:
            return "0"
        parts = []
        for monom, c in terms:
            factors = []
            for i, a in enumerate(monom):
                if a == 1:
                    factors.append(f"{self.prefix}{i + 1}")
                elif a > 1:
                    factors.append(f"{self.prefix}{i + 1}^{a}")
            if c != 1 or not factors:
                factors.insert(0, str(c))
            parts.append("*".join(factors))
        return " + ".join(parts)

    def parse(self, text: str) -> sympy.Poly:
        """
        Parse the text format.

        Raises:
            ValueError: If the text contains unknown symbols or is malformed
        """
        if not isinstance(text, str) or not _TERM_TOKEN.match(text):
            raise ValueError(f"Malformed polynomial text: {text!r}")
        try:
            expr = sympy.sympify(text.replace("^", "**"), locals=self._namespace)
        except (sympy.SympifyError, SyntaxError, TypeError) as e:
            raise ValueError(f"Malformed polynomial text: {text!r}") from e
        unknown = expr.free_symbols - set(self.symbols)
        if unknown:
            raise ValueError(
                f"Polynomial {text!r} uses symbols {sorted(map(str, unknown))} "
                f"outside {self.prefix}1..{self.prefix}{self.r}"
            )
        return self.poly(expr)

    def evaluate(self, f: sympy.Poly, points: galois.FieldArray) -> galois.FieldArray:
        """
        Evaluate f at many points at once.

        Args:
            f: Polynomial of this ring
            points: FieldArray of shape (N, r) over an extension of F_p

        Returns:
            FieldArray of N values
        """
        ftype = type(points)
        if int(ftype.characteristic) != self.p:
            raise ValueError(
                f"Points over characteristic {ftype.characteristic} cannot "
                f"evaluate a polynomial over F_{self.p}"
            )
        values = ftype.Zeros(points.shape[0])
        for monom, c in self.coefficients(f):
            term = ftype.Ones(points.shape[0]) * ftype(c)
            for i, a in enumerate(monom):
                if a:
                    term = term * points[:, i] ** a
            values = values + term
        return values

    def rational_points(self, field: FieldSpec) -> galois.FieldArray:
        """All points of affine r-space over the given extension field."""
        grid = np.array(list(itertools.product(range(field.order), repeat=self.r)), dtype=np.int64)
        return field.gf(grid.reshape(-1, self.r))


def reduced_ring(p: int, r: int) -> GradedPolyRing:
    """The reduced cohomology ring k[x_1..x_r]: degree 1 at p = 2, degree 2 otherwise."""
    return GradedPolyRing(p, r, 1 if p == 2 else 2)


def polynomial_ring_S(p: int, r: int) -> GradedPolyRing:
    """The ring S = k[x_1..x_r] with every variable of degree 2."""
    return GradedPolyRing(p, r, 2)


def monomial_count(weight: int, r: int) -> int:
    """Number of monomials of total exponent `weight` in r variables."""
    return comb(weight + r - 1, r - 1)
