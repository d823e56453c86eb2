"""
Differential Graded Algebras.

Three finite dg algebras over F_p, each with an explicit monomial basis:
the exterior algebra Λ on ξ_1..ξ_r (degree -1, zero differential), the
Koszul algebra A = kE ⊗ Λ(y_1..y_r) with d(z_i) = 0 and d(y_i) = z_i, and
the polynomial ring S on x_1..x_r (degree 2) truncated by weight. A product
of basis monomials is again ± a basis monomial, or zero.

Complexes are cochain complexes: differentials raise degree by one.
"""

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from typing import Any, Dict, List, Optional, Sequence, Tuple

import galois

from engine.errors import VerificationError, WindowError
from engine.finite_field import FieldSpec, column_space, hstack, mat_kernel, mat_rank, to_int_lists
from engine.polynomials import polynomial_ring_S


LAMBDA = "lambda"
KOSZUL_A = "koszul_A"
POLY_S = "poly_S"

Label = Any
Vector = Dict[Any, int]


def subsets(r: int) -> List[Tuple[int, ...]]:
    """Subsets of {0..r-1} as sorted tuples, by size and then lexicographically."""
    return [s for size in range(r + 1) for s in itertools.combinations(range(r), size)]


def merge_sign(u: Sequence[int], t: Sequence[int]) -> int:
    """ξ_U ξ_T = sign · ξ_{U ∪ T}; 0 when U and T meet."""
    if set(u) & set(t):
        return 0
    inversions = sum(1 for a in u for b in t if a > b)
    return -1 if inversions % 2 else 1


def dual_action(u: Sequence[int], s: Sequence[int]) -> Optional[Tuple[int, Tuple[int, ...]]]:
    """
    ξ_U · ξ_S^∨ in Λ∨ = Hom_k(Λ, k), with (a·f)(x) = (-1)^{|a||f|} f(a·x).

    Returns:
        (sign, S minus U), or None when U is not contained in S
    """
    if not set(u) <= set(s):
        return None
    rest = tuple(k for k in s if k not in u)
    sign = merge_sign(u, rest)
    if (len(u) * len(s)) % 2:
        sign = -sign
    return sign, rest


def _accumulate(out: Vector, label: Label, coeff: int, p: int) -> None:
    value = (out.get(label, 0) + coeff) % p
    if value:
        out[label] = value
    else:
        out.pop(label, None)


@dataclass(frozen=True)
class DgAlgebra:
    """
    A finite dg algebra with a monomial basis.

    Attributes:
        kind: "lambda", "koszul_A" or "poly_S"
        p: Characteristic of the ground field
        r: Number of generators of each family
        max_weight: Highest polynomial weight kept (poly_S only)
    """
    kind: str
    p: int
    r: int
    max_weight: int = 0

    def __post_init__(self):
        if self.kind not in (LAMBDA, KOSZUL_A, POLY_S):
            raise ValueError(f"Unknown dg algebra kind {self.kind!r}")
        if self.r < 1:
            raise ValueError(f"Rank must be positive, got {self.r}")
        if self.max_weight < 0:
            raise ValueError(f"max_weight must be non-negative, got {self.max_weight}")
        FieldSpec(self.p)

    @property
    def field(self) -> FieldSpec:
        return FieldSpec(self.p)

    @property
    def comultiplication(self) -> Optional[str]:
        """Generators of Λ and A are primitive."""
        return "lie" if self.kind in (LAMBDA, KOSZUL_A) else None

    # -- generators -------------------------------------------------------

    @cached_property
    def generators(self) -> List[Tuple[str, int]]:
        """(name, degree) of each algebra generator."""
        names = range(1, self.r + 1)
        if self.kind == LAMBDA:
            return [(f"xi{i}", -1) for i in names]
        if self.kind == KOSZUL_A:
            return [(f"z{i}", 0) for i in names] + [(f"y{i}", -1) for i in names]
        return [(f"x{i}", 2) for i in names]

    def generator_degree(self, g: int) -> int:
        return self.generators[g][1]

    def generator_differential(self, g: int) -> List[Tuple[int, int]]:
        """d(g) as (coefficient, generator) pairs."""
        if self.kind == KOSZUL_A and g >= self.r:
            return [(1, g - self.r)]
        return []

    def nilpotency(self, g: int) -> Optional[int]:
        """Smallest k with g^k = 0, if any."""
        if self.kind == POLY_S:
            return None
        if self.kind == KOSZUL_A and g < self.r:
            return self.p
        return 2

    # -- basis ------------------------------------------------------------

    @cached_property
    def basis(self) -> List[Label]:
        if self.kind == LAMBDA:
            return subsets(self.r)
        if self.kind == KOSZUL_A:
            exponents = list(itertools.product(range(self.p), repeat=self.r))
            return [(a, s) for s in subsets(self.r) for a in exponents]
        ring = polynomial_ring_S(self.p, self.r)
        return [a for w in range(self.max_weight + 1) for a in ring.monomials_of_weight(w)]

    @cached_property
    def index(self) -> Dict[Label, int]:
        return {label: k for k, label in enumerate(self.basis)}

    @property
    def dim(self) -> int:
        return len(self.basis)

    def degree(self, label: Label) -> int:
        if self.kind == LAMBDA:
            return -len(label)
        if self.kind == KOSZUL_A:
            return -len(label[1])
        return 2 * sum(label)

    def degree_range(self) -> Tuple[int, int]:
        if self.kind == POLY_S:
            return 0, 2 * self.max_weight
        return -self.r, 0

    def basis_in_degree(self, n: int) -> List[Label]:
        return [b for b in self.basis if self.degree(b) == n]

    def unit(self) -> Label:
        if self.kind == LAMBDA:
            return ()
        if self.kind == KOSZUL_A:
            return ((0,) * self.r, ())
        return (0,) * self.r

    def generator_label(self, g: int) -> Label:
        if self.kind == LAMBDA:
            return (g,)
        if self.kind == KOSZUL_A:
            if g < self.r:
                return (tuple(int(k == g) for k in range(self.r)), ())
            return ((0,) * self.r, (g - self.r,))
        return tuple(int(k == g) for k in range(self.r))

    def word(self, label: Label) -> List[int]:
        """Generators whose ordered product is the basis element."""
        if self.kind == LAMBDA:
            return list(label)
        if self.kind == KOSZUL_A:
            a, s = label
            return [i for i in range(self.r) for _ in range(a[i])] + [self.r + i for i in s]
        return [i for i in range(self.r) for _ in range(label[i])]

    def format(self, label: Label) -> str:
        if self.kind == LAMBDA:
            parts = [f"xi{i + 1}" for i in label]
        elif self.kind == KOSZUL_A:
            a, s = label
            parts = [f"z{i + 1}" if e == 1 else f"z{i + 1}^{e}" for i, e in enumerate(a) if e]
            parts += [f"y{i + 1}" for i in s]
        else:
            parts = [f"x{i + 1}" if e == 1 else f"x{i + 1}^{e}" for i, e in enumerate(label) if e]
        return "*".join(parts) if parts else "1"

    # -- arithmetic -------------------------------------------------------

    def product(self, u: Label, v: Label) -> Optional[Tuple[int, Label]]:
        """u·v as (sign, label), or None when it vanishes."""
        if self.kind == LAMBDA:
            sign = merge_sign(u, v)
            return (sign, tuple(sorted(u + v))) if sign else None
        if self.kind == KOSZUL_A:
            c = tuple(x + y for x, y in zip(u[0], v[0]))
            if any(e >= self.p for e in c):
                return None
            sign = merge_sign(u[1], v[1])
            return (sign, (c, tuple(sorted(u[1] + v[1])))) if sign else None
        c = tuple(x + y for x, y in zip(u, v))
        if sum(c) > self.max_weight:
            return None
        return 1, c

    def multiply(self, u: Vector, v: Vector) -> Vector:
        out: Vector = {}
        for a, ca in u.items():
            for b, cb in v.items():
                term = self.product(a, b)
                if term is not None:
                    _accumulate(out, term[1], term[0] * ca * cb, self.p)
        return out

    def differential(self, label: Label) -> Vector:
        """d on a basis element; d(z^a y_S) = z^a Σ_j (-1)^{j-1} z_{s_j} y_{S minus s_j}."""
        out: Vector = {}
        if self.kind != KOSZUL_A:
            return out
        a, s = label
        for j, i in enumerate(s):
            if a[i] + 1 >= self.p:
                continue
            raised = tuple(e + int(k == i) for k, e in enumerate(a))
            rest = s[:j] + s[j + 1:]
            _accumulate(out, (raised, rest), -1 if j % 2 else 1, self.p)
        return out

    def apply_differential(self, v: Vector) -> Vector:
        out: Vector = {}
        for label, c in v.items():
            for target, coeff in self.differential(label).items():
                _accumulate(out, target, c * coeff, self.p)
        return out

    def verify(self) -> None:
        """
        d² = 0 on every basis element and the Leibniz rule on every pair.

        Raises:
            VerificationError: Naming the first failing element or pair
        """
        for u in self.basis:
            if self.apply_differential(self.differential(u)):
                raise VerificationError(f"d² ≠ 0 on {self.format(u)} in {self.kind}")
        if self.kind != KOSZUL_A:
            return
        for u in self.basis:
            du = self.differential(u)
            sign = -1 if self.degree(u) % 2 else 1
            for v in self.basis:
                term = self.product(u, v)
                lhs = self.apply_differential({term[1]: term[0] % self.p}) if term else {}
                rhs = self.multiply(du, {v: 1})
                for label, c in self.multiply({u: 1}, self.differential(v)).items():
                    _accumulate(rhs, label, sign * c, self.p)
                if lhs != rhs:
                    raise VerificationError(
                        f"Leibniz rule fails on ({self.format(u)}, {self.format(v)}) in {self.kind}"
                    )

    def socle_degree(self) -> int:
        """Degree of the elements killed by every generator (a single line for Λ and A)."""
        if self.kind == POLY_S:
            raise ValueError("The truncated polynomial ring has no distinguished socle")
        generators = [self.generator_label(g) for g in range(len(self.generators))]
        socle = [b for b in self.basis if all(self.product(g, b) is None for g in generators)]
        degrees = {self.degree(b) for b in socle}
        if len(degrees) != 1:
            raise VerificationError(f"Socle of {self.kind} is spread over degrees {sorted(degrees)}")
        return degrees.pop()

    def as_complex(self, lo: Optional[int] = None, hi: Optional[int] = None) -> "GradedComplex":
        """The underlying cochain complex on degrees lo..hi (default: the whole algebra)."""
        low, high = self.degree_range()
        lo = low if lo is None else lo
        hi = high if hi is None else hi
        spec = self.field
        bases = {n: self.basis_in_degree(n) for n in range(lo, hi + 1)}
        differentials = {}
        for n in range(lo, hi):
            source, target = bases[n], bases[n + 1]
            where = {label: k for k, label in enumerate(target)}
            out = spec.zeros(len(target), len(source))
            for k, label in enumerate(source):
                for image, c in self.differential(label).items():
                    out[where[image], k] = c
            differentials[n] = out
        return GradedComplex(
            spec, lo, hi, {n: len(b) for n, b in bases.items()}, differentials,
            truncated=self.kind == POLY_S,
        )


def build_lambda(p: int, r: int) -> DgAlgebra:
    """Exterior algebra on ξ_1..ξ_r, degree -1, zero differential."""
    algebra = DgAlgebra(LAMBDA, p, r)
    algebra.verify()
    return algebra


def build_koszul_A(p: int, r: int, window: Optional[Tuple[int, int]] = None) -> DgAlgebra:
    """
    The Koszul dg algebra A = kE[y_1..y_r], y_i exterior of degree -1, d(y_i) = z_i.

    Raises:
        ValueError: If the window does not cover degrees -r..0
        VerificationError: If d² = 0 or the Leibniz rule fails on the basis
    """
    if window is not None and (window[0] > -r or window[1] < 0):
        raise ValueError(f"Window {tuple(window)} does not cover degrees [{-r}, 0]")
    algebra = DgAlgebra(KOSZUL_A, p, r)
    algebra.verify()
    return algebra


def build_poly_S(p: int, r: int, max_weight: int) -> DgAlgebra:
    """k[x_1..x_r], deg x_i = 2, keeping monomials of weight <= max_weight."""
    return DgAlgebra(POLY_S, p, r, max_weight)


@dataclass
class GradedComplex:
    """
    A cochain complex of finite-dimensional spaces on a window of degrees.

    Attributes:
        spec: Coefficient field
        lo, hi: Window (inclusive)
        dims: dims[n] for lo <= n <= hi
        differentials: differentials[n] maps degree n to n + 1; missing means zero
        truncated: True when degrees outside the window were cut off rather than zero
        certified_below: Degrees at or above this bound may carry truncation artifacts
    """
    spec: FieldSpec
    lo: int
    hi: int
    dims: Dict[int, int]
    differentials: Dict[int, galois.FieldArray] = field(default_factory=dict)
    truncated: bool = False
    certified_below: Optional[int] = None

    def dim(self, n: int) -> int:
        return self.dims.get(n, 0) if self.lo <= n <= self.hi else 0

    def differential(self, n: int) -> galois.FieldArray:
        if n in self.differentials:
            return self.differentials[n]
        return self.spec.zeros(self.dim(n + 1), self.dim(n))

    def verify(self) -> None:
        """
        Raises:
            VerificationError: If d² ≠ 0 in some degree
        """
        for n in range(self.lo, self.hi - 1):
            square = self.differential(n + 1) @ self.differential(n)
            if square.size and square.any():
                raise VerificationError(f"d² ≠ 0 from degree {n}")

    def cycles(self, n: int) -> galois.FieldArray:
        d = self.differential(n)
        return mat_kernel(d) if d.size else self.spec.identity(self.dim(n))

    def boundaries(self, n: int) -> galois.FieldArray:
        return column_space(self.differential(n - 1))

    def homology_dim(self, n: int) -> int:
        return self.cycles(n).shape[1] - mat_rank(self.differential(n - 1))

    def homology_dims(self) -> Dict[int, int]:
        return {n: self.homology_dim(n) for n in range(self.lo, self.hi + 1)}

    def total_dim(self) -> int:
        return sum(self.dims.values())

    def to_json(self) -> Dict[str, Any]:
        return {
            "window": [self.lo, self.hi],
            "dims": {str(n): d for n, d in sorted(self.dims.items())},
            "differentials": {str(n): to_int_lists(m) for n, m in sorted(self.differentials.items())},
            "truncated": self.truncated,
        }


@dataclass
class DgMap:
    """A degree-preserving map of complexes, blocks[n]: source^n -> target^n."""
    source: GradedComplex
    target: GradedComplex
    blocks: Dict[int, galois.FieldArray]

    def block(self, n: int) -> galois.FieldArray:
        if n in self.blocks:
            return self.blocks[n]
        return self.source.spec.zeros(self.target.dim(n), self.source.dim(n))

    def is_chain_map(self) -> bool:
        lo = min(self.source.lo, self.target.lo)
        hi = max(self.source.hi, self.target.hi)
        for n in range(lo, hi):
            lhs = self.target.differential(n) @ self.block(n)
            rhs = self.block(n + 1) @ self.source.differential(n)
            if lhs.shape != rhs.shape or (lhs - rhs).any():
                return False
        return True


def identity_map(c: GradedComplex) -> DgMap:
    return DgMap(c, c, {n: c.spec.identity(c.dim(n)) for n in range(c.lo, c.hi + 1)})


@dataclass
class DgAlgebraMap:
    """A map of dg algebras given on basis elements."""
    source: DgAlgebra
    target: DgAlgebra
    images: Dict[Label, Vector]

    def apply(self, v: Vector) -> Vector:
        out: Vector = {}
        for label, c in v.items():
            for image, coeff in self.images[label].items():
                _accumulate(out, image, c * coeff, self.target.p)
        return out

    def is_multiplicative(self) -> bool:
        src, tgt = self.source, self.target
        for u in src.basis:
            for v in src.basis:
                term = src.product(u, v)
                lhs = self.apply({term[1]: term[0] % src.p}) if term else {}
                if lhs != tgt.multiply(self.images[u], self.images[v]):
                    return False
        return True

    def commutes_with_differential(self) -> bool:
        return all(
            self.apply(self.source.differential(u)) == self.target.apply_differential(self.images[u])
            for u in self.source.basis
        )

    def chain_map(self, lo: Optional[int] = None, hi: Optional[int] = None) -> DgMap:
        source = self.source.as_complex(lo, hi)
        target = self.target.as_complex(lo, hi)
        spec = self.source.field
        blocks = {}
        for n in range(source.lo, source.hi + 1):
            src = self.source.basis_in_degree(n)
            tgt = {label: k for k, label in enumerate(self.target.basis_in_degree(n))}
            out = spec.zeros(len(tgt), len(src))
            for k, label in enumerate(src):
                for image, c in self.images[label].items():
                    out[tgt[image], k] = c
            blocks[n] = out
        return DgMap(source, target, blocks)


def phi_lambda_to_A(p: int, r: int) -> DgAlgebraMap:
    """
    φ: Λ -> A with φ(ξ_i) = z_i^{p-1} y_i, extended multiplicatively.

    Raises:
        VerificationError: If φ is not multiplicative or not a chain map
    """
    lam = build_lambda(p, r)
    koszul = build_koszul_A(p, r)
    generator_images = []
    for i in range(r):
        exponents = tuple((p - 1) * int(k == i) for k in range(r))
        generator_images.append({(exponents, (i,)): 1})
    images: Dict[Label, Vector] = {}
    for s in lam.basis:
        image: Vector = {koszul.unit(): 1}
        for i in s:
            image = koszul.multiply(image, generator_images[i])
        images[s] = image
    phi = DgAlgebraMap(lam, koszul, images)
    if not phi.is_multiplicative():
        raise VerificationError("φ is not multiplicative")
    if not phi.commutes_with_differential():
        raise VerificationError("φ does not commute with the differential")
    return phi


@dataclass
class QuasiIsoReport:
    """Per-degree homology comparison of a chain map."""
    passed: bool
    certified: List[int]
    source_dims: Dict[int, int]
    target_dims: Dict[int, int]
    induced_ranks: Dict[int, int]

    def to_json(self) -> Dict[str, Any]:
        return {
            "passed": self.passed,
            "certified": self.certified,
            "source_dims": {str(n): d for n, d in self.source_dims.items()},
            "target_dims": {str(n): d for n, d in self.target_dims.items()},
            "induced_ranks": {str(n): d for n, d in self.induced_ranks.items()},
        }


def _reach(c: GradedComplex) -> Tuple[int, int]:
    """Degrees on which c is known; a complete complex is also known to vanish next to its ends."""
    return (c.lo, c.hi) if c.truncated else (c.lo - 1, c.hi + 1)


def certified_degrees(f: DgMap, window: Optional[Tuple[int, int]] = None) -> List[int]:
    """
    Degrees n with [n-1, n+1] inside the window and below every truncation bound.
    """
    (a_lo, a_hi), (b_lo, b_hi) = _reach(f.source), _reach(f.target)
    lo, hi = max(a_lo, b_lo), min(a_hi, b_hi)
    if window is not None:
        lo, hi = max(lo, window[0]), min(hi, window[1])
    bounds = [c.certified_below for c in (f.source, f.target) if c.certified_below is not None]
    return [n for n in range(lo + 1, hi) if all(n < b for b in bounds)]


def verify_quasi_iso(f: DgMap, window: Optional[Tuple[int, int]] = None) -> QuasiIsoReport:
    """
    Check that f induces an isomorphism on homology in every certified degree.

    Raises:
        WindowError: If the window certifies no degree
    """
    degrees = certified_degrees(f, window)
    if not degrees:
        raise WindowError(f"Window {window} is too small to certify any degree")
    source_dims, target_dims, ranks = {}, {}, {}
    passed = True
    for n in degrees:
        h_src = f.source.homology_dim(n)
        h_tgt = f.target.homology_dim(n)
        boundaries = f.target.boundaries(n)
        images = f.block(n) @ f.source.cycles(n)
        if images.shape[1]:
            rank = mat_rank(hstack([boundaries, images])) - boundaries.shape[1]
        else:
            rank = 0
        source_dims[n], target_dims[n], ranks[n] = h_src, h_tgt, rank
        passed = passed and h_src == h_tgt == rank
    return QuasiIsoReport(passed, degrees, source_dims, target_dims, ranks)
