"""
Ideal Calculus.

Ideals of a GradedPolyRing with a compute-once Gröbner cache, membership and
radical membership, sums, intersections, elimination, ring maps, Fitting
ideals and determinantal ideals. Gröbner bases come from sympy over GF(p)
(graded reverse lexicographic order; lexicographic block order to
eliminate).
"""

import itertools
import threading
from math import comb
from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np
import sympy

from engine.errors import VerificationError
from engine.finite_field import FieldSpec
from engine.polynomials import GradedPolyRing


def _groebner(exprs: Sequence[Any], gens: Sequence[sympy.Symbol], p: int, order: str):
    return sympy.groebner(list(exprs), *gens, modulus=p, order=order)


def _is_unit_basis(basis, gens: Sequence[sympy.Symbol], p: int) -> bool:
    return any(sympy.Poly(g, *gens, modulus=p).is_ground for g in basis.exprs)


class Ideal:
    """
    An ideal given by generators, with a lazily computed reduced Gröbner basis.

    The cache fill is guarded by a lock so an Ideal can be shared between
    sweep worker threads.
    """

    def __init__(self, ring: GradedPolyRing, generators: Sequence[Any] = ()):
        self.ring = ring
        polys = [ring.poly(g) for g in generators]
        self.generators: Tuple[sympy.Poly, ...] = tuple(g for g in polys if not g.is_zero)
        self._basis: Optional[Tuple[sympy.Poly, ...]] = None
        self._grobner_obj = None
        self._lock = threading.Lock()

    def __repr__(self) -> str:
        gens = ", ".join(self.ring.format(g) for g in self.generators)
        return f"Ideal({gens})"

    @classmethod
    def unit(cls, ring: GradedPolyRing) -> "Ideal":
        return cls(ring, [1])

    @classmethod
    def irrelevant(cls, ring: GradedPolyRing) -> "Ideal":
        """The ideal m = (x_1..x_r)."""
        return cls(ring, ring.variables())

    def _fill_cache(self) -> None:
        with self._lock:
            if self._basis is not None:
                return
            if not self.generators:
                self._basis = ()
                return
            basis = _groebner(
                [g.as_expr() for g in self.generators], self.ring.symbols,
                self.ring.p, "grevlex",
            )
            for g in self.generators:
                if basis.reduce(g.as_expr())[1] != 0:
                    raise VerificationError(
                        f"Gröbner basis of {self!r} does not contain generator "
                        f"{self.ring.format(g)}"
                    )
            self._grobner_obj = basis
            self._basis = tuple(self.ring.poly(g) for g in basis.exprs)

    @property
    def basis(self) -> Tuple[sympy.Poly, ...]:
        """Reduced Gröbner basis (graded reverse lex)."""
        self._fill_cache()
        return self._basis

    def is_zero(self) -> bool:
        return not self.generators

    def is_unit(self) -> bool:
        return any(g.is_ground for g in self.basis)

    def is_homogeneous(self) -> bool:
        return all(self.ring.is_homogeneous(g) for g in self.generators)

    def normal_form(self, f: sympy.Poly) -> sympy.Poly:
        f = self.ring.poly(f)
        if not self.basis:
            return f
        return self.ring.poly(self._grobner_obj.reduce(f.as_expr())[1])

    def contains(self, f: sympy.Poly) -> bool:
        return self.normal_form(f).is_zero

    def to_json(self) -> Dict[str, Any]:
        return {
            "ring": self.ring.descriptor(),
            "generators": [self.ring.format(g) for g in self.generators],
        }

    @classmethod
    def from_json(cls, data: Dict[str, Any]) -> "Ideal":
        """
        Rebuild an ideal from its JSON form.

        Raises:
            ValueError: If the ring descriptor or a generator is malformed
        """
        try:
            desc = data["ring"]
            ring = GradedPolyRing(int(desc["p"]), int(desc["r"]), int(desc.get("gen_degree", 1)))
            gens = data["generators"]
        except (KeyError, TypeError) as e:
            raise ValueError(f"Malformed ideal JSON: {e}") from e
        return cls(ring, [ring.parse(g) for g in gens])


def _check_ring(a: GradedPolyRing, b: GradedPolyRing) -> None:
    if a != b:
        raise ValueError(f"Ring mismatch: {a} vs {b}")


def groebner_basis(i: Ideal) -> Ideal:
    """The ideal generated by the reduced Gröbner basis of i (idempotent)."""
    return Ideal(i.ring, i.basis)


def ideal_membership(f: sympy.Poly, i: Ideal, ring: Optional[GradedPolyRing] = None) -> bool:
    """
    True iff f reduces to zero modulo the Gröbner basis of i.

    Raises:
        ValueError: If f is declared over a different ring
    """
    if ring is not None:
        _check_ring(ring, i.ring)
    return i.contains(f)


def radical_membership(f: sympy.Poly, i: Ideal, ring: Optional[GradedPolyRing] = None) -> bool:
    """
    True iff some power of f lies in i.

    Uses one auxiliary variable t: f is in the radical iff 1 lies in
    i + (1 - t f).
    """
    if ring is not None:
        _check_ring(ring, i.ring)
    f = i.ring.poly(f)
    if f.is_zero:
        return True
    if i.is_zero():
        return False
    t = sympy.Dummy("t")
    gens = (t,) + i.ring.symbols
    exprs = [g.as_expr() for g in i.generators] + [1 - t * f.as_expr()]
    basis = _groebner(exprs, gens, i.ring.p, "grevlex")
    return _is_unit_basis(basis, gens, i.ring.p)


def radical_contains(a: Ideal, b: Ideal) -> bool:
    """True iff b is contained in the radical of a (V(a) is inside V(b))."""
    _check_ring(a.ring, b.ring)
    return all(radical_membership(g, a) for g in b.generators)


def ideal_sum(a: Ideal, b: Ideal) -> Ideal:
    _check_ring(a.ring, b.ring)
    return Ideal(a.ring, a.generators + b.generators)


def _eliminate_symbols(exprs: Sequence[Any], drop: Sequence[sympy.Symbol],
                       keep: Sequence[sympy.Symbol], p: int) -> List[Any]:
    """Generators of (exprs) intersected with k[keep], by a lex block order."""
    if not exprs:
        return []
    gens = tuple(drop) + tuple(keep)
    basis = _groebner(exprs, gens, p, "lex")
    dropped = set(drop)
    return [g for g in basis.exprs if not (sympy.sympify(g).free_symbols & dropped)]


def ideal_intersection(a: Ideal, b: Ideal) -> Ideal:
    """a ∩ b as the t-free part of t·a + (1 − t)·b."""
    _check_ring(a.ring, b.ring)
    if a.is_zero() or b.is_zero():
        return Ideal(a.ring)
    t = sympy.Dummy("t")
    exprs = [t * g.as_expr() for g in a.generators]
    exprs += [(1 - t) * g.as_expr() for g in b.generators]
    kept = _eliminate_symbols(exprs, [t], a.ring.symbols, a.ring.p)
    return Ideal(a.ring, kept)


def eliminate(i: Ideal, variables: Sequence[int]) -> Ideal:
    """
    i ∩ k[remaining variables].

    Args:
        i: Ideal
        variables: 0-based indices of the variables to eliminate

    Returns:
        Ideal of the same ring whose generators avoid the eliminated variables
    """
    drop_set = set(variables)
    if any(v < 0 or v >= i.ring.r for v in drop_set):
        raise ValueError(f"Variable indices {sorted(drop_set)} out of range for r={i.ring.r}")
    drop = [s for k, s in enumerate(i.ring.symbols) if k in drop_set]
    keep = [s for k, s in enumerate(i.ring.symbols) if k not in drop_set]
    kept = _eliminate_symbols([g.as_expr() for g in i.generators], drop, keep, i.ring.p)
    return Ideal(i.ring, kept)


@dataclass(frozen=True)
class RingMap:
    """
    A graded ring homomorphism given by the images of the source generators.

    degree_scale relates the two degree conventions: an element of source
    degree n maps to target degree n * degree_scale.
    """
    source: GradedPolyRing
    target: GradedPolyRing
    images: Tuple[sympy.Poly, ...]
    degree_scale: int = 1

    def __post_init__(self):
        if len(self.images) != self.source.r:
            raise ValueError(
                f"RingMap needs {self.source.r} images, got {len(self.images)}"
            )
        if self.source.p != self.target.p:
            raise ValueError("RingMap source and target differ in characteristic")
        images = tuple(self.target.poly(f) for f in self.images)
        object.__setattr__(self, "images", images)
        expected = self.source.gen_degree * self.degree_scale
        for k, f in enumerate(images):
            if f.is_zero:
                continue
            if not self.target.is_homogeneous(f) or self.target.degree(f) != expected:
                raise ValueError(
                    f"Image of x{k + 1} is {self.target.format(f)}, "
                    f"not homogeneous of degree {expected}"
                )

    @classmethod
    def identity(cls, ring: GradedPolyRing) -> "RingMap":
        return cls(ring, ring, tuple(ring.variables()))

    def apply(self, f: sympy.Poly) -> sympy.Poly:
        f = self.source.poly(f)
        mapping = {s: img.as_expr() for s, img in zip(self.source.symbols, self.images)}
        return self.target.poly(sympy.expand(f.as_expr().xreplace(mapping)))


def ringmap_apply(m: RingMap, i: Ideal) -> Ideal:
    """Extension of i along m: the target ideal generated by the images."""
    _check_ring(m.source, i.ring)
    return Ideal(m.target, [m.apply(g) for g in i.generators])


def ringmap_kernel_mod(m: RingMap, i_target: Ideal) -> Ideal:
    """
    Kernel of source -> target / i_target, via the graph ideal.

    Target variables are renamed apart, the graph generators x_j - m(x_j)
    are added to i_target and the target variables are eliminated.
    """
    _check_ring(m.target, i_target.ring)
    fresh = tuple(sympy.Dummy(f"u{k + 1}") for k in range(m.target.r))
    rename = dict(zip(m.target.symbols, fresh))
    exprs = [
        s - img.as_expr().xreplace(rename)
        for s, img in zip(m.source.symbols, m.images)
    ]
    exprs += [g.as_expr().xreplace(rename) for g in i_target.generators]
    kept = _eliminate_symbols(exprs, fresh, m.source.symbols, m.source.p)
    return Ideal(m.source, kept)


def degree_doubling_map(p: int, r: int) -> RingMap:
    """k[x] with deg x = 1 into S = k[x] with deg x = 2, x_i -> x_i."""
    source = GradedPolyRing(p, r, 1)
    target = GradedPolyRing(p, r, 2)
    return RingMap(source, target, tuple(target.variables()), degree_scale=2)


def restriction_map(source_ring: GradedPolyRing, target_ring: GradedPolyRing,
                    matrix: Sequence[Sequence[int]]) -> RingMap:
    """
    Restriction of reduced cohomology along a subgroup embedding.

    With B the r x r' embedding matrix, x_j maps to sum_i B[j][i] x'_i.
    """
    images = []
    for j in range(source_ring.r):
        expr = sympy.Integer(0)
        for i in range(target_ring.r):
            expr += int(matrix[j][i]) * target_ring.symbols[i]
        images.append(target_ring.poly(expr))
    return RingMap(source_ring, target_ring, tuple(images))


class _MinorCalculator:
    """Determinants of square submatrices by Laplace expansion along the first row."""

    def __init__(self, ring: GradedPolyRing, entries: Sequence[Sequence[sympy.Poly]]):
        self.ring = ring
        self.entries = entries
        self._memo: Dict[Tuple[Tuple[int, ...], Tuple[int, ...]], sympy.Poly] = {}

    def det(self, rows: Tuple[int, ...], cols: Tuple[int, ...]) -> sympy.Poly:
        key = (rows, cols)
        if key in self._memo:
            return self._memo[key]
        if len(rows) == 1:
            value = self.entries[rows[0]][cols[0]]
        else:
            value = self.ring.zero()
            head = rows[0]
            for k, c in enumerate(cols):
                a = self.entries[head][c]
                if a.is_zero:
                    continue
                sub = self.det(rows[1:], cols[:k] + cols[k + 1:])
                if sub.is_zero:
                    continue
                term = a * sub
                value = value - term if k % 2 else value + term
        self._memo[key] = value
        return value


def minor_count(n_rows: int, n_cols: int, t: int) -> int:
    return comb(n_rows, t) * comb(n_cols, t)


def symbolic_minors(ring: GradedPolyRing, entries: Sequence[Sequence[Any]], t: int) -> Ideal:
    """
    Ideal of all t x t minors of a polynomial matrix.

    Raises:
        ValueError: If t is outside 1..min(rows, cols)
    """
    n_rows = len(entries)
    n_cols = len(entries[0]) if n_rows else 0
    if t < 1 or t > min(n_rows, n_cols):
        raise ValueError(f"Minor size {t} out of range for a {n_rows}x{n_cols} matrix")
    polys = [[ring.poly(e) for e in row] for row in entries]
    calc = _MinorCalculator(ring, polys)
    minors = []
    for rows in itertools.combinations(range(n_rows), t):
        for cols in itertools.combinations(range(n_cols), t):
            d = calc.det(rows, cols)
            if not d.is_zero:
                minors.append(d)
    return Ideal(ring, minors)


def fitting_ideal_0(ring: GradedPolyRing, presentation: Sequence[Sequence[Any]],
                    n_generators: int) -> Ideal:
    """
    0-th Fitting ideal of coker(presentation).

    Args:
        ring: Coefficient ring
        presentation: n_generators rows of relation columns
        n_generators: Number of module generators

    Returns:
        Ideal of all maximal minors; unit ideal for the zero module, zero
        ideal when there are fewer relations than generators
    """
    if len(presentation) != n_generators:
        raise ValueError(
            f"Presentation has {len(presentation)} rows, expected {n_generators}"
        )
    if n_generators == 0:
        return Ideal.unit(ring)
    n_cols = len(presentation[0])
    if n_cols < n_generators:
        return Ideal(ring)
    return symbolic_minors(ring, presentation, n_generators)


def rational_zero_set(i: Ideal, field: FieldSpec) -> set:
    """Zeros of i with coordinates in the given extension field, as integer tuples."""
    points = i.ring.rational_points(field)
    mask = None
    for g in i.generators:
        vanishes = i.ring.evaluate(g, points) == 0
        mask = vanishes if mask is None else (mask & vanishes)
    ints = np.asarray(points.view(np.ndarray))
    if mask is None:
        return {tuple(int(v) for v in row) for row in ints}
    return {tuple(int(v) for v in row) for row in ints[np.asarray(mask)]}
