"""
Support Varieties.

A Variety is represented by an ideal of its polynomial ring; two varieties
are equal when their ideals have the same radical. Supports of kE-modules
come from the Fitting ideal of Ext^*(k, m); the rank variety gives an
independent answer for cross-checking.
"""

import itertools
from dataclasses import dataclass
from math import factorial
from typing import Any, Dict, List, Optional, Union

from engine.ext import ExtPresentation, ext_presentation, normalize_support_ideal
from engine.finite_field import column_complement, column_space, hstack, mat_kernel, mat_solve, vstack
from engine.group_modules import FdModule
from engine.ideals import Ideal, ideal_intersection, ideal_sum, radical_contains, symbolic_minors
from engine.polynomials import GradedPolyRing, reduced_ring


@dataclass
class Variety:
    """
    Zero set of an ideal over the algebraic closure.

    Attributes:
        ideal: Any representative ideal
        truncation: Ext truncation degree the ideal came from, if any
        stable: Stability flag of that presentation
    """
    ideal: Ideal
    truncation: Optional[int] = None
    stable: Optional[bool] = None

    @property
    def ring(self) -> GradedPolyRing:
        return self.ideal.ring

    def generators(self) -> List[str]:
        return [self.ring.format(g) for g in self.ideal.generators]

    def to_json(self) -> Dict[str, Any]:
        out: Dict[str, Any] = {"ring": self.ring.descriptor(), "generators": self.generators()}
        if self.truncation is not None:
            out["truncation"] = self.truncation
        return out

    @classmethod
    def everything(cls, ring: GradedPolyRing) -> "Variety":
        return cls(Ideal(ring))

    @classmethod
    def origin(cls, ring: GradedPolyRing) -> "Variety":
        return cls(Ideal.irrelevant(ring))


def _check_same_ring(a: Variety, b: Variety) -> None:
    if a.ring != b.ring:
        raise ValueError(f"Ring mismatch: {a.ring} vs {b.ring}")


def variety_intersect(a: Variety, b: Variety) -> Variety:
    _check_same_ring(a, b)
    return Variety(ideal_sum(a.ideal, b.ideal))


def variety_union(a: Variety, b: Variety) -> Variety:
    _check_same_ring(a, b)
    return Variety(ideal_intersection(a.ideal, b.ideal))


def variety_contains(outer: Variety, inner: Variety) -> bool:
    """inner ⊆ outer: every generator of outer's ideal lies in the radical of inner's."""
    _check_same_ring(outer, inner)
    return radical_contains(inner.ideal, outer.ideal)


def variety_equals(a: Variety, b: Variety) -> bool:
    return variety_contains(a, b) and variety_contains(b, a)


def is_proj_empty(v: Variety) -> bool:
    """True iff V lies inside the origin, i.e. every variable is in the radical."""
    return variety_contains(Variety.origin(v.ring), v)


def support_from_presentation(presentation: ExtPresentation) -> Variety:
    ideal = normalize_support_ideal(presentation.support_ideal())
    return Variety(ideal, presentation.truncation, presentation.stable)


def support_of_module(m: FdModule, truncation: Union[int, str] = "auto") -> Variety:
    """
    V_E(m) as the zero set of the Fitting ideal of Ext^*(k, m).

    Projective modules give the origin V(x_1..x_r).
    """
    return support_from_presentation(ext_presentation(m, truncation))


def _multinomial(exponents) -> int:
    total = factorial(sum(exponents))
    for a in exponents:
        total //= factorial(a)
    return total


def rank_variety_oracle(m: FdModule) -> Variety:
    """
    The locus of α where m is not free over k[u_α]/(u_α^p), u_α = sum α_i z_i.

    m is free over k[u_α] iff rank(u_α^{p-1}) = dim/p. The polynomial matrix
    u_α^{p-1} = sum_{|a|=p-1} multinomial(a) α^a Z^a factors through
    m / ∩ ker Z^a and lands in the span of the Z^a, so the minors are taken
    of that smaller matrix.
    """
    ring = reduced_ring(m.p, m.r)
    if m.dim == 0:
        return Variety.origin(ring)
    if m.dim % m.p:
        return Variety.everything(ring)
    t = m.dim // m.p
    exponents = [a for a in itertools.product(range(m.p), repeat=m.r) if sum(a) == m.p - 1]
    actions = {a: m.monomial_action(a) for a in exponents}
    image = column_space(hstack(list(actions.values())))
    if image.shape[1] < t:
        return Variety.everything(ring)
    coords = {a: mat_solve(image, z) for a, z in actions.items()}
    kernel = mat_kernel(vstack(list(coords.values())))
    complement = column_complement(kernel, m.identity())
    if complement.shape[1] < t:
        return Variety.everything(ring)
    reduced = {a: c @ complement for a, c in coords.items()}
    rows, cols = image.shape[1], complement.shape[1]
    entries = [[ring.zero() for _ in range(cols)] for _ in range(rows)]
    for a, block in reduced.items():
        coeff = _multinomial(a) % m.p
        if not coeff:
            continue
        monomial = ring.monomial(a, coeff)
        for i in range(rows):
            for j in range(cols):
                value = int(block[i, j])
                if value:
                    entries[i][j] = entries[i][j] + monomial * value
    return Variety(symbolic_minors(ring, entries, t))
