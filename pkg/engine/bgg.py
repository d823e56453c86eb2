"""
BGG Correspondence on Finite Windows.

Dg modules over Λ, A and S are stored degree by degree: a dimension, the
differential d^n: M^n -> M^{n+1} and the action of every algebra generator.
J = Λ∨ ⊗ S with differential δ = Σ ξ_i ⊗ x_i is kept up to S-weight m, which
is a genuine dg quotient because δ raises the S-weight.

Hom_Λ(J, M) is finite in each degree when M is finite-dimensional, since J is
free over Λ on the elements ξ_top∨ ⊗ x^a. Λ-supports are read off the
S-module Ext_Λ(k, M) = H(S ⊗ M, d_M + Σ x_i ⊗ ξ_i). When M is free over Λ
the same S-module is H(Hom_Λ(J, M)), and the two presentations are compared.
"""

from dataclasses import dataclass, field
from typing import Any, Callable, Dict, Iterable, List, Optional, Sequence, Tuple

import galois

from engine.dg_algebras import (
    KOSZUL_A,
    LAMBDA,
    POLY_S,
    DgAlgebra,
    DgMap,
    GradedComplex,
    Label,
    Vector,
    build_koszul_A,
    build_lambda,
    build_poly_S,
    dual_action,
    merge_sign,
    phi_lambda_to_A,
    subsets,
)
from engine.errors import VerificationError
from engine.ext import GradedHomology, GradedPresenter, normalize_support_ideal
from engine.finite_field import FieldSpec, hstack, mat_kron, mat_rank, to_int_lists, vstack
from engine.group_modules import FdModule
from engine.ideals import Ideal, degree_doubling_map, ringmap_apply
from engine.polynomials import monomial_count, polynomial_ring_S
from engine.supports import Variety, support_of_module


def _signed(block: galois.FieldArray, sign: int) -> galois.FieldArray:
    return block if sign > 0 else -block


@dataclass(eq=False)
class DgModule:
    """
    A dg module over a DgAlgebra, known on the degrees lo..hi.

    Attributes:
        algebra: The acting dg algebra
        lo, hi: Window of degrees (inclusive)
        dims: dims[n] for the degrees of the window
        differentials: differentials[n] maps degree n to n + 1; missing means zero
        actions: actions[(g, n)] is generator g from degree n to n + |g|; missing means zero
        truncated: True when degrees outside the window were cut off rather than zero
        certified_below: Degrees at or above this bound may carry truncation artifacts
        notes: Remarks recorded while building (e.g. an empty window)
    """
    algebra: DgAlgebra
    lo: int
    hi: int
    dims: Dict[int, int]
    differentials: Dict[int, galois.FieldArray] = field(default_factory=dict)
    actions: Dict[Tuple[int, int], galois.FieldArray] = field(default_factory=dict)
    truncated: bool = False
    certified_below: Optional[int] = None
    notes: List[str] = field(default_factory=list)

    @property
    def spec(self) -> FieldSpec:
        return self.algebra.field

    def dim(self, n: int) -> int:
        return self.dims.get(n, 0) if self.lo <= n <= self.hi else 0

    def total_dim(self) -> int:
        return sum(self.dim(n) for n in range(self.lo, self.hi + 1))

    def degrees(self) -> List[int]:
        """Degrees carrying a nonzero space."""
        return [n for n in range(self.lo, self.hi + 1) if self.dim(n)]

    def differential(self, n: int) -> galois.FieldArray:
        if n in self.differentials:
            return self.differentials[n]
        return self.spec.zeros(self.dim(n + 1), self.dim(n))

    def action(self, g: int, n: int) -> galois.FieldArray:
        if (g, n) in self.actions:
            return self.actions[(g, n)]
        return self.spec.zeros(self.dim(n + self.algebra.generator_degree(g)), self.dim(n))

    def basis_action(self, label: Label, n: int) -> galois.FieldArray:
        """Action of an algebra basis element from degree n."""
        matrix = self.spec.identity(self.dim(n))
        degree = n
        for g in reversed(self.algebra.word(label)):
            matrix = self.action(g, degree) @ matrix
            degree += self.algebra.generator_degree(g)
        return matrix

    def as_complex(self) -> GradedComplex:
        return GradedComplex(
            self.spec, self.lo, self.hi,
            {n: self.dim(n) for n in range(self.lo, self.hi + 1)},
            {n: d for n, d in self.differentials.items()},
            truncated=self.truncated,
            certified_below=self.certified_below,
        )

    def _inside(self, *degrees: int) -> bool:
        return not self.truncated or all(self.lo <= n <= self.hi for n in degrees)

    def verify(self) -> None:
        """
        d² = 0, the module Leibniz rule for every generator, graded
        commutativity of the generator actions and their nilpotency.

        Raises:
            VerificationError: Naming the failing generator and degree
        """
        alg = self.algebra
        gens = range(len(alg.generators))
        for n in range(self.lo, self.hi + 1):
            if self._inside(n, n + 2):
                if (self.differential(n + 1) @ self.differential(n)).any():
                    raise VerificationError(f"d² ≠ 0 from degree {n}")
        for g in gens:
            dg = alg.generator_degree(g)
            name = alg.generators[g][0]
            for n in range(self.lo, self.hi + 1):
                if not self._inside(n, n + 1, n + dg, n + dg + 1):
                    continue
                lhs = self.differential(n + dg) @ self.action(g, n)
                rhs = _signed(self.action(g, n + 1) @ self.differential(n), -1 if dg % 2 else 1)
                for coeff, h in alg.generator_differential(g):
                    rhs = rhs + self.action(h, n) * self.spec.scalar(coeff)
                if (lhs - rhs).any():
                    raise VerificationError(f"Leibniz rule fails for {name} in degree {n}")
        for g in gens:
            dg = alg.generator_degree(g)
            for h in gens:
                if h < g:
                    continue
                dh = alg.generator_degree(h)
                for n in range(self.lo, self.hi + 1):
                    if not self._inside(n, n + dg, n + dh, n + dg + dh):
                        continue
                    gh = self.action(g, n + dh) @ self.action(h, n)
                    if g == h:
                        if dg % 2 and gh.any():
                            raise VerificationError(f"{alg.generators[g][0]}² ≠ 0 in degree {n}")
                        continue
                    hg = self.action(h, n + dg) @ self.action(g, n)
                    if (gh - _signed(hg, -1 if (dg * dh) % 2 else 1)).any():
                        raise VerificationError(
                            f"{alg.generators[g][0]} and {alg.generators[h][0]} "
                            f"do not graded-commute in degree {n}"
                        )
        for g in gens:
            k = alg.nilpotency(g)
            if k is None:
                continue
            dg = alg.generator_degree(g)
            for n in range(self.lo, self.hi + 1):
                if not self._inside(*(n + j * dg for j in range(k + 1))):
                    continue
                power = self.spec.identity(self.dim(n))
                for j in range(k):
                    power = self.action(g, n + j * dg) @ power
                if power.any():
                    raise VerificationError(f"{alg.generators[g][0]}^{k} ≠ 0 in degree {n}")

    def to_json(self) -> Dict[str, Any]:
        names = [name for name, _ in self.algebra.generators]
        return {
            "algebra": {"kind": self.algebra.kind, "p": self.algebra.p, "r": self.algebra.r},
            "window": [self.lo, self.hi],
            "dims": {str(n): self.dim(n) for n in range(self.lo, self.hi + 1)},
            "differentials": {str(n): to_int_lists(m) for n, m in sorted(self.differentials.items())},
            "actions": {
                f"{names[g]}@{n}": to_int_lists(m) for (g, n), m in sorted(self.actions.items())
            },
            "truncated": self.truncated,
            "notes": list(self.notes),
        }


def module_from_rules(algebra: DgAlgebra,
                      bases: Dict[int, List[Label]],
                      differential: Callable[[Label], Vector],
                      action: Callable[[int, Label], Vector],
                      certified_below: Optional[int] = None,
                      verify: bool = True) -> DgModule:
    """
    Build a finite dg module from a basis per degree and rules giving d and
    the generator actions on basis elements.
    """
    spec = algebra.field
    bases = {n: labels for n, labels in bases.items() if labels}
    if not bases:
        return DgModule(algebra, 0, 0, {})
    index = {n: {label: k for k, label in enumerate(labels)} for n, labels in bases.items()}

    def matrix(source: int, target: int, rule: Callable[[Label], Vector]) -> galois.FieldArray:
        out = spec.zeros(len(bases[target]), len(bases[source]))
        for k, label in enumerate(bases[source]):
            for image, c in rule(label).items():
                if image not in index[target]:
                    raise VerificationError(f"Rule leaves the basis: {image} in degree {target}")
                out[index[target][image], k] = c % algebra.p
        return out

    differentials = {n: matrix(n, n + 1, differential) for n in bases if n + 1 in bases}
    actions = {}
    for g in range(len(algebra.generators)):
        dg = algebra.generator_degree(g)
        for n in bases:
            if n + dg in bases:
                actions[(g, n)] = matrix(n, n + dg, lambda label, g=g: action(g, label))
    module = DgModule(
        algebra, min(bases), max(bases), {n: len(b) for n, b in bases.items()},
        differentials, actions, certified_below=certified_below,
    )
    if verify:
        module.verify()
    return module


def _by_degree(labels: Iterable[Label], degree: Callable[[Label], int]) -> Dict[int, List[Label]]:
    out: Dict[int, List[Label]] = {}
    for label in labels:
        out.setdefault(degree(label), []).append(label)
    return out


def _no_differential(label: Label) -> Vector:
    return {}


def trivial_dg_module(algebra: DgAlgebra) -> DgModule:
    """k in degree 0, every generator acting by zero."""
    return module_from_rules(algebra, {0: ["1"]}, _no_differential, lambda g, label: {})


def regular_dg_module(algebra: DgAlgebra) -> DgModule:
    """The algebra acting on itself by left multiplication."""
    def act(g: int, label: Label) -> Vector:
        term = algebra.product(algebra.generator_label(g), label)
        return {term[1]: term[0]} if term else {}

    return module_from_rules(
        algebra, _by_degree(algebra.basis, algebra.degree), algebra.differential, act,
    )


def lambda_quotient(p: int, r: int, indices: Sequence[int]) -> DgModule:
    """Λ / (ξ_i : i in indices), a cyclic Λ-module with zero differential."""
    lam = build_lambda(p, r)
    killed = set(indices)
    if not killed <= set(range(r)):
        raise ValueError(f"Indices {sorted(killed)} out of range for r = {r}")
    labels = [s for s in subsets(r) if not killed & set(s)]

    def act(g: int, label: Label) -> Vector:
        if g in killed:
            return {}
        term = lam.product((g,), label)
        return {term[1]: term[0]} if term else {}

    return module_from_rules(lam, _by_degree(labels, lam.degree), _no_differential, act)


def lambda_dual(p: int, r: int) -> DgModule:
    """Λ∨ = Hom_k(Λ, k): ξ_S∨ in degree |S|, zero differential."""
    lam = build_lambda(p, r)

    def act(g: int, label: Label) -> Vector:
        term = dual_action((g,), label)
        return {term[1]: term[0]} if term else {}

    return module_from_rules(lam, _by_degree(subsets(r), len), _no_differential, act)


def s_truncated(p: int, r: int, bounds: Sequence[int]) -> DgModule:
    """k[x_1..x_r] / (x_i^{b_i}) as a dg S-module with zero differential."""
    if len(bounds) != r or any(b < 1 for b in bounds):
        raise ValueError(f"Need {r} positive bounds, got {list(bounds)}")
    top = sum(b - 1 for b in bounds)
    s_alg = build_poly_S(p, r, top)
    labels = [a for a in s_alg.basis if all(e < b for e, b in zip(a, bounds))]

    def act(g: int, label: Label) -> Vector:
        raised = tuple(e + int(k == g) for k, e in enumerate(label))
        return {raised: 1} if raised[g] < bounds[g] else {}

    return module_from_rules(s_alg, _by_degree(labels, s_alg.degree), _no_differential, act)


def cone_identity(m: DgModule) -> DgModule:
    """
    Cone of the identity: C^n = M^{n+1} ⊕ M^n, d(a, b) = (-d a, a + d b),
    g·(a, b) = ((-1)^{|g|} g a, g b). Contractible.
    """
    spec, alg = m.spec, m.algebra
    lo, hi = m.lo - 1, m.hi
    dims = {n: m.dim(n + 1) + m.dim(n) for n in range(lo, hi + 1)}
    differentials = {}
    for n in range(lo, hi):
        out = spec.zeros(dims[n + 1], dims[n])
        a, b = m.dim(n + 1), m.dim(n)
        a2 = m.dim(n + 2)
        out[:a2, :a] = -m.differential(n + 1)
        out[a2:, :a] = spec.identity(a)
        out[a2:, a:] = m.differential(n)
        differentials[n] = out
    actions = {}
    for g in range(len(alg.generators)):
        dg = alg.generator_degree(g)
        for n in range(lo, hi + 1):
            if not lo <= n + dg <= hi:
                continue
            out = spec.zeros(dims[n + dg], dims[n])
            a, a_target = m.dim(n + 1), m.dim(n + dg + 1)
            out[:a_target, :a] = _signed(m.action(g, n + 1), -1 if dg % 2 else 1)
            out[a_target:, a:] = m.action(g, n)
            actions[(g, n)] = out
    cone = DgModule(alg, lo, hi, dims, differentials, actions)
    cone.verify()
    return cone


@dataclass(eq=False)
class TruncatedJ:
    """
    J = Λ∨ ⊗ S kept up to S-weight m - 1, with δ = Σ ξ_i ⊗ x_i.

    Attributes:
        r: Number of variables
        m: Truncation bound on the S-weight
        module: The dg Λ-module, basis ξ_S∨ ⊗ x^a in degree |S| + 2|a|
        s_module: The same complex as a dg S-module (x_i acting on the right factor)
    """
    r: int
    m: int
    module: DgModule
    s_module: DgModule

    def unit_map(self) -> DgMap:
        """k -> J, 1 -> ξ_∅∨ ⊗ 1."""
        target = self.module.as_complex()
        spec = self.module.spec
        source = GradedComplex(spec, 0, target.hi, {n: int(n == 0) for n in range(target.hi + 1)})
        block = spec.zeros(target.dim(0), 1)
        block[0, 0] = 1
        return DgMap(source, target, {0: block})


def _delta(label: Tuple[Tuple[int, ...], Tuple[int, ...]], p: int) -> Vector:
    """δ(ξ_S∨ ⊗ x^a) = Σ_i (ξ_i · ξ_S∨) ⊗ x^{a + e_i}, untruncated."""
    s, a = label
    out: Vector = {}
    for i in range(len(a)):
        term = dual_action((i,), s)
        if term is None:
            continue
        raised = tuple(e + int(k == i) for k, e in enumerate(a))
        out[(term[1], raised)] = (out.get((term[1], raised), 0) + term[0]) % p
    return {k: v for k, v in out.items() if v}


def build_truncated_J(r: int, m: int, p: int = 2) -> TruncatedJ:
    """
    Raises:
        ValueError: If m < 1
        VerificationError: If δ² ≠ 0 before truncation, or a dg axiom fails
    """
    if m < 1:
        raise ValueError(f"Truncation bound must be at least 1, got {m}")
    lam = build_lambda(p, r)
    ring = polynomial_ring_S(p, r)
    weights = [a for w in range(m) for a in ring.monomials_of_weight(w)]
    labels = [(s, a) for a in weights for s in subsets(r)]
    for label in labels:
        square: Vector = {}
        for image, c in _delta(label, p).items():
            for target, coeff in _delta(image, p).items():
                square[target] = (square.get(target, 0) + c * coeff) % p
        if any(square.values()):
            raise VerificationError(f"δ² ≠ 0 on {label}")

    def degree(label) -> int:
        return len(label[0]) + 2 * sum(label[1])

    def differential(label) -> Vector:
        return {k: v for k, v in _delta(label, p).items() if sum(k[1]) < m}

    def lambda_action(g: int, label) -> Vector:
        term = dual_action((g,), label[0])
        return {(term[1], label[1]): term[0]} if term else {}

    def s_action(g: int, label) -> Vector:
        raised = tuple(e + int(k == g) for k, e in enumerate(label[1]))
        return {(label[0], raised): 1} if sum(raised) < m else {}

    bases = _by_degree(labels, degree)
    module = module_from_rules(lam, bases, differential, lambda_action, certified_below=m - 1)
    s_alg = build_poly_S(p, r, m - 1)
    s_module = module_from_rules(s_alg, bases, differential, s_action, certified_below=m - 1)
    return TruncatedJ(r, m, module, s_module)


def _s_algebra_for(p: int, r: int, lo: int, hi: int) -> DgAlgebra:
    return build_poly_S(p, r, max(0, (hi - lo) // 2))


def hom_J(m: DgModule, window: Tuple[int, int]) -> DgModule:
    """
    Hom_Λ(J, M) on the degrees of the window, as a dg S-module.

    A map φ of degree n is determined by m_a = φ(ξ_top∨ ⊗ x^a) in
    M^{n + r + 2|a|}; then (dφ)_a = d_M m_a - Σ_i ξ_i m_{a + e_i} and
    (x_j φ)_a = m_{a + e_j}.

    Raises:
        ValueError: If M is not a complete finite-dimensional Λ-module
    """
    if m.algebra.kind != LAMBDA:
        raise ValueError(f"hom_J needs a dg Λ-module, got one over {m.algebra.kind}")
    if m.truncated:
        raise ValueError("hom_J needs a finite-dimensional module, not a truncated window")
    lo, hi = window
    if hi < lo:
        raise ValueError(f"Invalid window {tuple(window)}")
    p, r = m.algebra.p, m.algebra.r
    spec = m.spec
    ring = polynomial_ring_S(p, r)
    monomials: Dict[int, List[Tuple[int, ...]]] = {}

    def components(n: int) -> List[Tuple[Tuple[int, ...], int, int]]:
        out, offset = [], 0
        for w in range(max(0, -((n + r - m.lo) // 2)), (m.hi - n - r) // 2 + 1):
            k = n + r + 2 * w
            if not m.dim(k):
                continue
            if w not in monomials:
                monomials[w] = ring.monomials_of_weight(w)
            for a in monomials[w]:
                out.append((a, k, offset))
                offset += m.dim(k)
        return out

    layout = {n: components(n) for n in range(lo, hi + 1)}
    dims = {n: sum(m.dim(k) for _, k, _ in comps) for n, comps in layout.items()}
    offsets = {n: {a: (k, off) for a, k, off in comps} for n, comps in layout.items()}
    differentials = {}
    for n in range(lo, hi):
        out = spec.zeros(dims[n + 1], dims[n])
        source = offsets[n]
        for a, k, row in layout[n + 1]:
            rows = slice(row, row + m.dim(k))
            if a in source:
                _, col = source[a]
                out[rows, col:col + m.dim(k - 1)] = m.differential(k - 1)
            for i in range(r):
                raised = tuple(e + int(j == i) for j, e in enumerate(a))
                if raised in source:
                    _, col = source[raised]
                    out[rows, col:col + m.dim(k + 1)] -= m.action(i, k + 1)
        differentials[n] = out
    actions = {}
    for n in range(lo, hi - 1):
        for i in range(r):
            out = spec.zeros(dims[n + 2], dims[n])
            source = offsets[n]
            for a, k, row in layout[n + 2]:
                raised = tuple(e + int(j == i) for j, e in enumerate(a))
                if raised in source:
                    _, col = source[raised]
                    out[row:row + m.dim(k), col:col + m.dim(k)] = spec.identity(m.dim(k))
            actions[(i, n)] = out
    result = DgModule(
        _s_algebra_for(p, r, lo, hi), lo, hi, dims, differentials, actions,
        truncated=True, certified_below=m.certified_below,
    )
    if not any(dims.values()):
        result.notes.append(
            f"window [{lo}, {hi}] lies outside the nonvanishing range (degrees <= {m.hi - r})"
        )
    result.verify()
    return result


def tensor_S_J(n_mod: DgModule) -> DgModule:
    """
    N ⊗_S J realised as N ⊗_k Λ∨ with
    d(v ⊗ f) = d_N v ⊗ f + (-1)^{|v|} Σ_i x_i v ⊗ ξ_i f and
    ξ·(v ⊗ f) = (-1)^{|v|} v ⊗ ξ f.

    Raises:
        ValueError: If N is not a complete finite-dimensional S-module
    """
    if n_mod.algebra.kind != POLY_S:
        raise ValueError(f"tensor_S_J needs a dg S-module, got one over {n_mod.algebra.kind}")
    if n_mod.truncated:
        raise ValueError("tensor_S_J needs a finite-dimensional module, not a truncated window")
    p, r = n_mod.algebra.p, n_mod.algebra.r
    lam = build_lambda(p, r)
    spec = n_mod.spec
    if not n_mod.degrees():
        return DgModule(lam, 0, 0, {})
    lo, hi = n_mod.lo, n_mod.hi + r
    layout: Dict[int, Dict[Tuple[int, ...], Tuple[int, int]]] = {}
    dims = {}
    for n in range(lo, hi + 1):
        blocks, offset = {}, 0
        for s in subsets(r):
            k = n - len(s)
            if n_mod.dim(k):
                blocks[s] = (k, offset)
                offset += n_mod.dim(k)
        layout[n], dims[n] = blocks, offset
    differentials = {}
    for n in range(lo, hi):
        out = spec.zeros(dims[n + 1], dims[n])
        for s, (k, col) in layout[n].items():
            cols = slice(col, col + n_mod.dim(k))
            if s in layout[n + 1] and n_mod.dim(k + 1):
                _, row = layout[n + 1][s]
                out[row:row + n_mod.dim(k + 1), cols] += n_mod.differential(k)
            for i in range(r):
                term = dual_action((i,), s)
                if term is None or term[1] not in layout[n + 1]:
                    continue
                _, row = layout[n + 1][term[1]]
                sign = term[0] * (-1 if k % 2 else 1)
                out[row:row + n_mod.dim(k + 2), cols] += _signed(n_mod.action(i, k), sign)
        differentials[n] = out
    actions = {}
    for n in range(lo + 1, hi + 1):
        for i in range(r):
            out = spec.zeros(dims[n - 1], dims[n])
            for s, (k, col) in layout[n].items():
                term = dual_action((i,), s)
                if term is None:
                    continue
                _, row = layout[n - 1][term[1]]
                sign = term[0] * (-1 if k % 2 else 1)
                out[row:row + n_mod.dim(k), col:col + n_mod.dim(k)] = _signed(spec.identity(n_mod.dim(k)), sign)
            actions[(i, n)] = out
    result = DgModule(lam, lo, hi, dims, differentials, actions)
    result.verify()
    return result


class DgModuleHomology(GradedHomology):
    """H(N) of a dg S-module as a graded S-module."""

    def __init__(self, n_mod: DgModule, lo: int, hi: int):
        self.module = n_mod
        super().__init__(polynomial_ring_S(n_mod.algebra.p, n_mod.algebra.r), lo, hi)
        self.compute()

    def size(self, n: int) -> int:
        return self.module.dim(n)

    def differential(self, n: int) -> galois.FieldArray:
        return self.module.differential(n)

    def shift(self, n: int, i: int) -> galois.FieldArray:
        return self.module.action(i, n)


class BggComplex(GradedHomology):
    """S ⊗ M with differential d_M + Σ x_i ⊗ ξ_i; its cohomology is Ext_Λ(k, M)."""

    def __init__(self, m: DgModule, lo: int, hi: int):
        if m.algebra.kind != LAMBDA:
            raise ValueError(f"Need a dg Λ-module, got one over {m.algebra.kind}")
        self.module = m
        self._monomials: Dict[int, List[Tuple[int, ...]]] = {}
        self._layouts: Dict[int, Dict[Tuple[Tuple[int, ...], int], int]] = {}
        super().__init__(polynomial_ring_S(m.algebra.p, m.algebra.r), lo, hi)
        self.compute()

    def layout(self, n: int) -> Dict[Tuple[Tuple[int, ...], int], int]:
        """Offsets of the blocks x^μ ⊗ M^k with 2|μ| + k = n."""
        if n not in self._layouts:
            m = self.module
            blocks, offset = {}, 0
            for w in range(0, (n - m.lo) // 2 + 1):
                k = n - 2 * w
                if not m.dim(k):
                    continue
                if w not in self._monomials:
                    self._monomials[w] = self.ring.monomials_of_weight(w)
                for mu in self._monomials[w]:
                    blocks[(mu, k)] = offset
                    offset += m.dim(k)
            self._layouts[n] = blocks
        return self._layouts[n]

    def size(self, n: int) -> int:
        return sum(self.module.dim(k) for _, k in self.layout(n))

    def differential(self, n: int) -> galois.FieldArray:
        m = self.module
        source, target = self.layout(n), self.layout(n + 1)
        out = self.spec.zeros(self.size(n + 1), self.size(n))
        for (mu, k), col in source.items():
            cols = slice(col, col + m.dim(k))
            if (mu, k + 1) in target:
                row = target[(mu, k + 1)]
                out[row:row + m.dim(k + 1), cols] = m.differential(k)
            for i in range(self.ring.r):
                raised = tuple(e + int(j == i) for j, e in enumerate(mu))
                if (raised, k - 1) in target:
                    row = target[(raised, k - 1)]
                    out[row:row + m.dim(k - 1), cols] = m.action(i, k)
        return out

    def shift(self, n: int, i: int) -> galois.FieldArray:
        m = self.module
        source, target = self.layout(n), self.layout(n + 2)
        out = self.spec.zeros(self.size(n + 2), self.size(n))
        for (mu, k), col in source.items():
            raised = tuple(e + int(j == i) for j, e in enumerate(mu))
            row = target[(raised, k)]
            out[row:row + m.dim(k), col:col + m.dim(k)] = self.spec.identity(m.dim(k))
        return out


def _presented_support(complex_: GradedHomology, truncation: int) -> Variety:
    presenter = GradedPresenter(complex_.module_data()).run()
    presenter.check_hilbert_function()
    ideal = normalize_support_ideal(presenter.support_ideal())
    return Variety(ideal, truncation, presenter.is_stable())


def lambda_support(m: DgModule, truncation: int) -> Variety:
    """
    Support of a finite-dimensional dg Λ-module over S = Ext_Λ(k, k), from a
    presentation of Ext_Λ(k, M) in degrees up to the truncation. For M free
    over Λ, hom_J_support presents the same module through Hom_Λ(J, M).

    Raises:
        ValueError: If the truncation lies below the lowest degree of M
    """
    ring = polynomial_ring_S(m.algebra.p, m.algebra.r)
    degrees = m.degrees()
    if not degrees:
        return Variety(Ideal.irrelevant(ring), truncation, True)
    lo = degrees[0]
    if truncation < lo:
        raise ValueError(f"Truncation {truncation} lies below the lowest degree {lo} of M")
    return _presented_support(BggComplex(m, lo, truncation), truncation)


def s_support(n_mod: DgModule, truncation: Optional[int] = None) -> Variety:
    """Support of H(N) for a finite-dimensional dg S-module N."""
    ring = polynomial_ring_S(n_mod.algebra.p, n_mod.algebra.r)
    degrees = n_mod.degrees()
    if not degrees:
        return Variety.origin(ring)
    lo = degrees[0]
    hi = max(degrees[-1] if truncation is None else truncation, lo)
    return _presented_support(DgModuleHomology(n_mod, lo, hi), hi)


def is_lambda_free(m: DgModule) -> bool:
    """
    Whether the graded Λ-module underlying m is free, i.e. injective.

    Λ is local with top k, so M is free exactly when dim M = 2^r dim(M / ΣξM).
    """
    if m.algebra.kind != LAMBDA:
        raise ValueError(f"Need a dg Λ-module, got one over {m.algebra.kind}")
    r = m.algebra.r
    radical = 0
    for n in m.degrees():
        images = [m.action(i, n + 1) for i in range(r) if m.dim(n + 1)]
        if images:
            radical += mat_rank(hstack(images))
    return m.total_dim() == 2 ** r * (m.total_dim() - radical)


def hom_J_support(m: DgModule, truncation: int) -> Variety:
    """
    S-support of H(Hom_Λ(J, M)) presented in degrees lowest..truncation.

    For M free over Λ this is Ext_Λ(k, M), so it agrees with lambda_support.
    For other M, Hom_Λ(J, M) is a cofree S-module (k gives the graded dual of
    S below degree 0) and the result is not a Λ-support.

    Raises:
        ValueError: If the truncation lies below the lowest degree of M
    """
    ring = polynomial_ring_S(m.algebra.p, m.algebra.r)
    degrees = m.degrees()
    if not degrees:
        return Variety(Ideal.irrelevant(ring), truncation, True)
    lo = degrees[0]
    if truncation < lo:
        raise ValueError(f"Truncation {truncation} lies below the lowest degree {lo} of M")
    # one extra degree on each side so that H^lo and H^truncation see both differentials
    maps = hom_J(m, (lo - 1, truncation + 1))
    return _presented_support(DgModuleHomology(maps, lo, truncation), truncation)


def restrict_along_phi(x: DgModule) -> DgModule:
    """φ^* X: a dg A-module seen over Λ through φ(ξ_i) = z_i^{p-1} y_i."""
    if x.algebra.kind != KOSZUL_A:
        raise ValueError(f"Need a dg A-module, got one over {x.algebra.kind}")
    phi = phi_lambda_to_A(x.algebra.p, x.algebra.r)
    actions = {}
    for i in range(x.algebra.r):
        for n in range(x.lo, x.hi + 1):
            if not x.lo <= n - 1 <= x.hi:
                continue
            out = x.spec.zeros(x.dim(n - 1), x.dim(n))
            for label, c in phi.images[(i,)].items():
                out = out + x.basis_action(label, n) * x.spec.scalar(c)
            actions[(i, n)] = out
    result = DgModule(phi.source, x.lo, x.hi, dict(x.dims), dict(x.differentials), actions,
                      truncated=x.truncated)
    result.verify()
    return result


def koszul_trivial(p: int, r: int) -> DgModule:
    """k as a dg A-module through the augmentation."""
    return trivial_dg_module(build_koszul_A(p, r))


def kE_as_dg_module(m: FdModule) -> DgModule:
    """
    A kE-module in degree 0 with the z_i acting; the y_i act by zero. This
    is only a module over A^0 = kE, so it is not verified as an A-module.
    """
    koszul = DgAlgebra(KOSZUL_A, m.p, m.r)
    actions = {(i, 0): m.z[i] for i in range(m.r)} if m.dim else {}
    return DgModule(koszul, 0, 0, {0: m.dim}, {}, actions)


def coinduce_to_A(m: FdModule, p: Optional[int] = None, r: Optional[int] = None) -> DgModule:
    """
    Hom_{kE}(A, m), the right adjoint of restriction to A^0 = kE.

    φ is stored by its values c_T = φ(y_T) in m, in degree |T|, with
    (aφ)(b) = (-1)^{|a|(|φ|+|b|)} φ(b a) and (dφ)(b) = -(-1)^{|φ|} φ(d b).

    Raises:
        ValueError: If p or r disagree with the module
    """
    if (p is not None and p != m.p) or (r is not None and r != m.r):
        raise ValueError(f"Module is over (p, r) = ({m.p}, {m.r}), requested ({p}, {r})")
    koszul = build_koszul_A(m.p, m.r)
    if m.dim == 0:
        return DgModule(koszul, 0, 0, {})
    z = [to_int_lists(zi) for zi in m.z]
    rank = m.r
    labels = [(t, k) for t in subsets(rank) for k in range(m.dim)]

    def z_times(i: int, t, k: int, coeff: int) -> Vector:
        return {(t, j): coeff * z[i][j][k] for j in range(m.dim) if z[i][j][k]}

    def differential(label) -> Vector:
        t, k = label
        s = len(t)
        out: Vector = {}
        for u in range(rank):
            if u in t:
                continue
            bigger = tuple(sorted(t + (u,)))
            position = bigger.index(u)
            coeff = -(-1) ** s * (-1) ** position
            for key, value in z_times(u, bigger, k, coeff).items():
                out[key] = (out.get(key, 0) + value) % m.p
        return {key: v for key, v in out.items() if v}

    def act(g: int, label) -> Vector:
        t, k = label
        if g < rank:
            return z_times(g, t, k, 1)
        i = g - rank
        if i not in t:
            return {}
        rest = tuple(v for v in t if v != i)
        return {(rest, k): -merge_sign(rest, (i,))}

    return module_from_rules(koszul, _by_degree(labels, lambda label: len(label[0])), differential, act)


def chain_map_space_dim(x: DgModule, y: DgModule, generators: Optional[Sequence[int]] = None) -> int:
    """
    Dimension of the space of degree-0 maps F: X -> Y commuting with d and
    with the listed generators (default: all generators of X's algebra).
    """
    spec = x.spec
    gens = list(range(len(x.algebra.generators))) if generators is None else list(generators)
    lo, hi = min(x.lo, y.lo), max(x.hi, y.hi)
    offsets, total = {}, 0
    for n in range(lo, hi + 1):
        if x.dim(n) and y.dim(n):
            offsets[n] = total
            total += x.dim(n) * y.dim(n)
    if total == 0:
        return 0

    def term(n: int, coefficient: galois.FieldArray, out: galois.FieldArray) -> None:
        if n in offsets:
            out[:, offsets[n]:offsets[n] + x.dim(n) * y.dim(n)] += coefficient

    rows = []
    for n in range(lo - 1, hi + 1):
        height = y.dim(n + 1) * x.dim(n)
        if not height:
            continue
        out = spec.zeros(height, total)
        if n in offsets:
            term(n, mat_kron(spec.identity(x.dim(n)), y.differential(n)), out)
        if n + 1 in offsets:
            term(n + 1, -mat_kron(x.differential(n).T, spec.identity(y.dim(n + 1))), out)
        rows.append(out)
    for g in gens:
        dg = x.algebra.generator_degree(g)
        for n in range(lo, hi + 1):
            height = y.dim(n + dg) * x.dim(n)
            if not height:
                continue
            out = spec.zeros(height, total)
            if n in offsets:
                term(n, mat_kron(spec.identity(x.dim(n)), y.action(g, n)), out)
            if n + dg in offsets:
                term(n + dg, -mat_kron(x.action(g, n).T, spec.identity(y.dim(n + dg))), out)
            rows.append(out)
    if not rows:
        return total
    return total - mat_rank(vstack(rows))


def ext_A_hilbert(p: int, r: int, truncation: int) -> List[int]:
    """dim Ext^n_A(k, k) for 0 <= n <= D, via φ^* k over Λ."""
    if truncation < 0:
        raise ValueError(f"Truncation must be non-negative, got {truncation}")
    k_lambda = restrict_along_phi(koszul_trivial(p, r))
    complex_ = BggComplex(k_lambda, 0, truncation)
    return [complex_.dim(n) for n in range(truncation + 1)]


def expected_ext_A_dims(r: int, truncation: int) -> List[int]:
    """Monomials of weight n/2 in r variables, 0 in odd degrees."""
    return [0 if n % 2 else monomial_count(n // 2, r) for n in range(truncation + 1)]


def descent_support(m: FdModule, truncation: int) -> Variety:
    """Λ-support of φ^* Hom_{kE}(A, m)."""
    return lambda_support(restrict_along_phi(coinduce_to_A(m)), truncation)


def kE_support_in_S(m: FdModule, truncation="auto") -> Variety:
    """V_E(m) moved to S; at p = 2 through the degree-doubling map."""
    supp = support_of_module(m, truncation)
    if m.p == 2:
        return Variety(ringmap_apply(degree_doubling_map(m.p, m.r), supp.ideal), supp.truncation, supp.stable)
    return supp
