"""
Free Resolutions over kE.

A free kE-module P = kE^b is stored in the basis z^c e_j, generator-major
(index j * p^r + monomial_index(c)). Differentials are plain matrices over
F_p acting on column vectors.

Two constructions are provided: minimal resolutions of an arbitrary module
built cover by cover, and the explicit resolution of k obtained as the
tensor product of the periodic resolutions of the cyclic factors. Ext is
computed from the latter, whose differentials are known in closed form.
"""

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Dict, List, Sequence, Tuple

import numpy as np
import galois

from engine.errors import VerificationError
from engine.finite_field import mat_kernel, mat_power, mat_rank, mat_solve, to_int_lists
from engine.group_modules import (
    ElementaryAbelianAlgebra,
    FdModule,
    cover_map,
    free_module,
    submodule_action,
    trivial_module,
)


@dataclass(frozen=True, eq=False)
class MinimalResolution:
    """
    ... -> P_2 -> P_1 -> P_0 -> module with P_n = kE^{b_n}.

    Attributes:
        module: The module resolved
        betti: Free ranks b_0..b_N
        differentials: ∂_1..∂_N, ∂_n of shape (b_{n-1} p^r, b_n p^r)
        augmentation: P_0 -> module, shape (dim, b_0 p^r)
    """
    module: FdModule
    betti: Tuple[int, ...]
    differentials: Tuple[galois.FieldArray, ...]
    augmentation: galois.FieldArray

    @property
    def length(self) -> int:
        return len(self.betti) - 1

    @property
    def algebra(self) -> ElementaryAbelianAlgebra:
        return self.module.algebra

    def free_dim(self, n: int) -> int:
        return self.betti[n] * self.algebra.dim

    def differential(self, n: int) -> galois.FieldArray:
        """∂_n for 1 <= n <= length."""
        return self.differentials[n - 1]

    def verify(self) -> None:
        """
        Check ∂∂ = 0, minimality and exactness in degrees 0..N-1.

        Raises:
            VerificationError: If any condition fails
        """
        q = self.algebra.dim
        if mat_rank(self.augmentation) != self.module.dim:
            raise VerificationError("Augmentation is not surjective")
        maps = [self.augmentation] + list(self.differentials)
        for n in range(1, len(maps)):
            if maps[n - 1].size and maps[n].size and np.any((maps[n - 1] @ maps[n]).view(np.ndarray)):
                raise VerificationError(f"∂ composed with ∂ is nonzero at degree {n}")
            d = maps[n]
            top_rows = [j * q for j in range(self.betti[n - 1])]
            if d.size and np.any(d[top_rows, :].view(np.ndarray)):
                raise VerificationError(f"∂_{n} is not minimal: image leaves the radical")
            if mat_rank(d) + mat_rank(maps[n - 1]) != self.free_dim(n - 1):
                raise VerificationError(f"Resolution is not exact at degree {n - 1}")

    def to_json(self) -> Dict:
        return {
            "betti": list(self.betti),
            "differentials": [to_int_lists(d) for d in self.differentials],
        }


def minimal_resolution(m: FdModule, n: int) -> MinimalResolution:
    """
    Minimal resolution of m up to P_n, one projective cover at a time.

    Args:
        m: Module to resolve
        n: Length (n >= 0)
    """
    if n < 0:
        raise ValueError(f"Resolution length must be >= 0, got {n}")
    algebra = m.algebra
    q = algebra.dim
    augmentation = cover_map(m)
    betti = [augmentation.shape[1] // q]
    differentials = []
    previous = augmentation
    for _ in range(n):
        kernel = mat_kernel(previous)
        p_prev = previous.shape[1]
        if kernel.shape[1] == 0:
            betti.append(0)
            d = algebra.field.zeros(p_prev, 0)
        else:
            ambient = free_module(algebra, betti[-1]).z
            kernel_module = FdModule(algebra, submodule_action(ambient, kernel))
            d = kernel @ cover_map(kernel_module)
            betti.append(d.shape[1] // q)
        differentials.append(d)
        previous = d
    return MinimalResolution(m, tuple(betti), tuple(differentials), augmentation)


def compositions(n: int, r: int) -> List[Tuple[int, ...]]:
    """Multi-indices a in N^r with |a| = n, lexicographically ascending."""
    return _compositions(n, r)


@lru_cache(maxsize=None)
def _compositions(n: int, r: int) -> List[Tuple[int, ...]]:
    if r == 1:
        return [(n,)]
    out = []
    for first in range(n + 1):
        for rest in _compositions(n - first, r - 1):
            out.append((first,) + rest)
    return out


class TensorResolution:
    """
    The minimal resolution of k over kE as a tensor product of periodic ones.

    P_n has one generator e_a for each multi-index a with |a| = n and

        ∂ e_a = sum_i (-1)^{a_1 + ... + a_{i-1}} w_i(a_i) e_{a - e_i}

    with w_i(a_i) = z_i for odd a_i and z_i^{p-1} for even a_i.
    """

    def __init__(self, algebra: ElementaryAbelianAlgebra):
        self.algebra = algebra
        self.p = algebra.p
        self.r = algebra.r
        self.period = 1 if self.p == 2 else 2

    def generators(self, n: int) -> List[Tuple[int, ...]]:
        if n < 0:
            return []
        return compositions(n, self.r)

    def rank(self, n: int) -> int:
        return len(self.generators(n))

    def index(self, n: int) -> Dict[Tuple[int, ...], int]:
        return {a: k for k, a in enumerate(self.generators(n))}

    def boundary_terms(self, a: Sequence[int]) -> List[Tuple[int, int, int]]:
        """(i, sign, exponent of z_i) for each nonzero summand of ∂ e_a."""
        terms = []
        prefix = 0
        for i, ai in enumerate(a):
            if ai >= 1:
                sign = -1 if prefix % 2 else 1
                exponent = 1 if ai % 2 else self.p - 1
                terms.append((i, sign, exponent))
            prefix += ai
        return terms

    def differential(self, n: int) -> galois.FieldArray:
        """∂_n as a matrix, for n >= 1."""
        q = self.algebra.dim
        rows = self.index(n - 1)
        cols = self.generators(n)
        data = np.zeros((len(rows) * q, len(cols) * q), dtype=np.int64)
        regular = [np.asarray(z.view(np.ndarray), dtype=np.int64) for z in self.algebra.regular_actions]
        for k, a in enumerate(cols):
            for i, sign, exponent in self.boundary_terms(a):
                b = list(a)
                b[i] -= 1
                j = rows[tuple(b)]
                block = np.linalg.matrix_power(regular[i], exponent) % self.p
                data[j * q:(j + 1) * q, k * q:(k + 1) * q] += sign * block
        return self.algebra.field.gf(data % self.p)

    def augmentation(self) -> galois.FieldArray:
        aug = self.algebra.field.zeros(1, self.algebra.dim)
        aug[0, 0] = 1
        return aug

    def as_minimal_resolution(self, length: int) -> MinimalResolution:
        return MinimalResolution(
            trivial_module(self.algebra),
            tuple(self.rank(n) for n in range(length + 1)),
            tuple(self.differential(n) for n in range(1, length + 1)),
            self.augmentation(),
        )

    def cochain_differential(self, n: int, m: FdModule) -> galois.FieldArray:
        """
        δ: Hom(P_n, m) -> Hom(P_{n+1}, m) with Hom(P_n, m) = m^{b_n}.

        (δφ)_b = sum over summands of ∂ e_b of sign * Z_i^{exponent} φ_{b - e_i}.
        """
        dim = m.dim
        rows = self.generators(n + 1)
        cols = self.index(n)
        data = np.zeros((len(rows) * dim, len(cols) * dim), dtype=np.int64)
        powers = {}
        for i, zi in enumerate(m.z):
            base = np.asarray(zi.view(np.ndarray), dtype=np.int64)
            powers[(i, 1)] = base
            powers[(i, self.p - 1)] = np.asarray(mat_power(zi, self.p - 1).view(np.ndarray), dtype=np.int64)
        for k, b in enumerate(rows):
            for i, sign, exponent in self.boundary_terms(b):
                a = list(b)
                a[i] -= 1
                j = cols[tuple(a)]
                data[k * dim:(k + 1) * dim, j * dim:(j + 1) * dim] += sign * powers[(i, exponent)]
        return m.field.gf(data % self.p)

    def periodicity_shift(self, n: int, i: int, dim: int) -> galois.FieldArray:
        """
        Action of x_i on cochains, Hom(P_n, m) -> Hom(P_{n+d}, m) with d the period.

        (x_i φ)_b = φ_{b - d e_i} when b_i >= d, else 0.
        """
        d = self.period
        rows = self.generators(n + d)
        cols = self.index(n)
        data = np.zeros((len(rows) * dim, len(cols) * dim), dtype=np.int64)
        eye = np.eye(dim, dtype=np.int64)
        for k, b in enumerate(rows):
            if b[i] >= d:
                a = list(b)
                a[i] -= d
                j = cols[tuple(a)]
                data[k * dim:(k + 1) * dim, j * dim:(j + 1) * dim] = eye
        return self.algebra.field.gf(data)


@dataclass(frozen=True, eq=False)
class Cocycle:
    """
    A class in H^d(E, k): a functional on the generators of P_d.

    Attributes:
        degree: d
        functional: Row of b_d values (one per generator of P_d)
    """
    degree: int
    functional: galois.FieldArray

    def is_zero(self) -> bool:
        return not np.any(self.functional.view(np.ndarray))

    def extended(self, algebra: ElementaryAbelianAlgebra) -> galois.FieldArray:
        """The kE-linear map P_d -> k as a 1 x (b_d p^r) row."""
        q = algebra.dim
        row = algebra.field.zeros(1, len(self.functional) * q)
        for j, value in enumerate(self.functional):
            row[0, j * q] = value
        return row

    def check(self, res: MinimalResolution) -> None:
        """
        Raises:
            ValueError: If the functional has the wrong length
            VerificationError: If it does not vanish on the image of ∂_{d+1}
        """
        if len(self.functional) != res.betti[self.degree]:
            raise ValueError(
                f"Cocycle of degree {self.degree} needs {res.betti[self.degree]} values, "
                f"got {len(self.functional)}"
            )
        if self.degree + 1 <= res.length:
            image = self.extended(res.algebra) @ res.differential(self.degree + 1)
            if np.any(image.view(np.ndarray)):
                raise VerificationError(f"Functional of degree {self.degree} is not a cocycle")


@dataclass(frozen=True, eq=False)
class ChainMap:
    """Chain map F_n: P_{n+shift} -> P_n for n = 0..len(blocks)-1."""
    shift: int
    blocks: Tuple[galois.FieldArray, ...]

    def block(self, n: int) -> galois.FieldArray:
        return self.blocks[n]


def yoneda_action(zeta: Cocycle, res: MinimalResolution) -> ChainMap:
    """
    Lift zeta to a chain self-map of res of degree zeta.degree.

    res must resolve k. F_0 sends e_j to zeta_j * 1; each further block
    solves ∂_n F_n = F_{n-1} ∂_{n+d} on generators and extends kE-linearly.

    Raises:
        ValueError: If res does not resolve the trivial module
        VerificationError: If a lifting system is inconsistent
    """
    module = res.module
    if module.dim != 1 or np.any(np.concatenate([z.view(np.ndarray).ravel() for z in module.z])):
        raise ValueError("yoneda_action needs a resolution of the trivial module")
    if res.length < zeta.degree:
        raise ValueError(f"Resolution of length {res.length} is too short for degree {zeta.degree}")
    zeta.check(res)
    algebra = res.algebra
    q = algebra.dim
    d = zeta.degree
    gf = algebra.field.gf
    monomials = algebra.monomials()
    blocks = []
    top = res.length - d
    for n in range(max(top, 0) + 1):
        source_rank = res.betti[n + d]
        if n == 0:
            generator_images = gf.Zeros((res.free_dim(0), source_rank))
            for j in range(source_rank):
                generator_images[:, j] = zeta.functional[j] * _unit_vector(gf, res.free_dim(0), 0)
        else:
            boundary = res.differential(n)
            rhs = blocks[n - 1] @ res.differential(n + d)[:, [j * q for j in range(source_rank)]]
            if source_rank == 0:
                generator_images = gf.Zeros((res.free_dim(n), 0))
            else:
                generator_images = mat_solve(boundary, rhs)
                if generator_images is None:
                    raise VerificationError(f"Chain map lifting failed at degree {n}")
        target_free = free_module(algebra, res.betti[n]) if res.betti[n] else None
        block = gf.Zeros((res.free_dim(n), res.free_dim(n + d)))
        for j in range(source_rank):
            y = generator_images[:, j:j + 1]
            for c in monomials:
                col = j * q + algebra.monomial_index(c)
                block[:, col:col + 1] = target_free.monomial_action(c) @ y if target_free else y
        blocks.append(block)
    return ChainMap(d, tuple(blocks))


def _unit_vector(gf, size: int, k: int) -> galois.FieldArray:
    v = gf.Zeros(size)
    v[k] = 1
    return v


def induced_cochain_map(chain: ChainMap, res: MinimalResolution, n: int, m: FdModule) -> galois.FieldArray:
    """
    Hom(P_n, m) -> Hom(P_{n+d}, m), φ -> φ ∘ F_n, on generator coordinates.

    Hom(P_n, m) is identified with m^{b_n} by φ -> (φ(e_j))_j.
    """
    algebra = res.algebra
    q = algebra.dim
    d = chain.shift
    f = chain.block(n)
    rows = res.betti[n + d]
    cols = res.betti[n]
    out = m.field.zeros(rows * m.dim, cols * m.dim)
    monomials = algebra.monomials()
    for j in range(rows):
        for k in range(cols):
            acc = m.field.zeros(m.dim, m.dim)
            for c in monomials:
                coeff = f[k * q + algebra.monomial_index(c), j * q]
                if coeff != 0:
                    acc = acc + coeff * m.monomial_action(c)
            out[j * m.dim:(j + 1) * m.dim, k * m.dim:(k + 1) * m.dim] = acc
    return out


def cochain_differential(res: MinimalResolution, n: int, m: FdModule) -> galois.FieldArray:
    """δ: Hom(P_n, m) -> Hom(P_{n+1}, m) for a materialized resolution."""
    identity_lift = ChainMap(1, tuple(res.differential(k + 1) for k in range(res.length)))
    return induced_cochain_map(identity_lift, res, n, m)
