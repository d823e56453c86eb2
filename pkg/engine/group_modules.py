"""
Modules over Elementary Abelian Group Algebras.

kE = k[z_1..z_r]/(z_i^p) with z_i = g_i - 1. A finite-dimensional module is
given by the matrices of z_1..z_r acting on column vectors. Group elements
are recovered as g_i = I + Z_i.
"""

import itertools
from dataclasses import dataclass
from functools import cached_property
from typing import Any, Dict, List, Sequence, Tuple, Union

import numpy as np
import galois

from engine.finite_field import (
    FieldSpec,
    block_diag,
    column_complement,
    column_space,
    hstack,
    mat_kernel,
    mat_kron,
    mat_power,
    mat_rank,
    mat_solve,
    random_invertible,
    random_matrix,
    mat_inverse,
    to_int_lists,
    vstack,
)


@dataclass(frozen=True)
class ElementaryAbelianAlgebra:
    """The group algebra kE of E = (Z/p)^r over F_p."""
    p: int
    r: int

    def __post_init__(self):
        FieldSpec(self.p)
        if self.r < 1:
            raise ValueError(f"Rank must be >= 1, got {self.r}")

    @property
    def field(self) -> FieldSpec:
        return FieldSpec(self.p)

    @property
    def dim(self) -> int:
        return self.p ** self.r

    def monomials(self) -> List[Tuple[int, ...]]:
        """Exponent vectors a in [0, p)^r in basis order (z_1 most significant)."""
        return list(itertools.product(range(self.p), repeat=self.r))

    def monomial_index(self, a: Sequence[int]) -> int:
        index = 0
        for exponent in a:
            index = index * self.p + int(exponent)
        return index

    @cached_property
    def regular_actions(self) -> Tuple[galois.FieldArray, ...]:
        """Matrices of multiplication by z_i on kE in the monomial basis."""
        gf = self.field.gf
        actions = []
        for i in range(self.r):
            z = gf.Zeros((self.dim, self.dim))
            for a in self.monomials():
                if a[i] + 1 < self.p:
                    b = list(a)
                    b[i] += 1
                    z[self.monomial_index(b), self.monomial_index(a)] = 1
            actions.append(z)
        return tuple(actions)


@dataclass(frozen=True, eq=False)
class FdModule:
    """
    A finite-dimensional kE-module.

    Attributes:
        algebra: The algebra acting
        z: Matrices Z_1..Z_r of the generators z_i, pairwise commuting with
           Z_i^p = 0 (checked at construction)
    """
    algebra: ElementaryAbelianAlgebra
    z: Tuple[galois.FieldArray, ...]

    def __post_init__(self):
        z = tuple(self.z)
        object.__setattr__(self, "z", z)
        if len(z) != self.algebra.r:
            raise ValueError(
                f"Module needs {self.algebra.r} action matrices, got {len(z)}"
            )
        gf = self.algebra.field.gf
        n = z[0].shape[0]
        for i, zi in enumerate(z):
            if type(zi) is not gf:
                raise ValueError(f"Action matrix Z{i + 1} is not over F_{self.algebra.p}")
            if zi.shape != (n, n):
                raise ValueError(
                    f"Action matrix Z{i + 1} has shape {zi.shape}, expected ({n}, {n})"
                )
            if np.any(mat_power(zi, self.algebra.p).view(np.ndarray)):
                raise ValueError(f"Z{i + 1}^{self.algebra.p} is not zero")
        for i, j in itertools.combinations(range(len(z)), 2):
            if not np.array_equal(z[i] @ z[j], z[j] @ z[i]):
                raise ValueError(f"Z{i + 1} and Z{j + 1} do not commute")

    @property
    def dim(self) -> int:
        return self.z[0].shape[0]

    @property
    def p(self) -> int:
        return self.algebra.p

    @property
    def r(self) -> int:
        return self.algebra.r

    @property
    def field(self) -> FieldSpec:
        return self.algebra.field

    def identity(self) -> galois.FieldArray:
        return self.field.identity(self.dim)

    def group_element(self, exponents: Sequence[int]) -> galois.FieldArray:
        """Matrix of g_1^{c_1}...g_r^{c_r}."""
        out = self.identity()
        for zi, c in zip(self.z, exponents):
            out = out @ mat_power(self.identity() + zi, int(c) % self.p)
        return out

    def monomial_action(self, a: Sequence[int]) -> galois.FieldArray:
        """Matrix of z^a."""
        out = self.identity()
        for zi, c in zip(self.z, a):
            if c:
                out = out @ mat_power(zi, int(c))
        return out

    def to_json(self) -> Dict[str, Any]:
        return {
            "p": self.p,
            "rank": self.r,
            "dim": self.dim,
            "z_actions": [to_int_lists(zi) for zi in self.z],
        }

    @classmethod
    def from_json(cls, data: Dict[str, Any]) -> "FdModule":
        """
        Build a module from its JSON form.

        Raises:
            ValueError: If the JSON is malformed or violates module invariants
        """
        try:
            algebra = ElementaryAbelianAlgebra(int(data["p"]), int(data["rank"]))
            dim = int(data["dim"])
            raw = data["z_actions"]
        except (KeyError, TypeError) as e:
            raise ValueError(f"Malformed module JSON: missing or invalid {e}") from e
        if not isinstance(raw, list) or len(raw) != algebra.r:
            raise ValueError(f"z_actions must list {algebra.r} matrices")
        actions = []
        for i, rows in enumerate(raw):
            arr = np.array(rows, dtype=np.int64)
            if dim == 0:
                arr = arr.reshape(0, 0)
            if arr.shape != (dim, dim):
                raise ValueError(
                    f"z_actions[{i}] has shape {arr.shape}, expected ({dim}, {dim})"
                )
            if arr.size and (arr.min() < 0 or arr.max() >= algebra.p):
                raise ValueError(f"z_actions[{i}] entries must lie in 0..{algebra.p - 1}")
            actions.append(algebra.field.gf(arr))
        return cls(algebra, tuple(actions))


@dataclass(frozen=True)
class SubgroupEmbedding:
    """
    E' = (Z/p)^{r'} inside E = (Z/p)^r.

    The i-th source generator maps to prod_j g_j^{B[j][i]}; B has full
    column rank.
    """
    p: int
    matrix: Tuple[Tuple[int, ...], ...]

    def __post_init__(self):
        rows = tuple(tuple(int(v) % self.p for v in row) for row in self.matrix)
        object.__setattr__(self, "matrix", rows)
        if not rows or not rows[0]:
            raise ValueError("Embedding matrix must be non-empty")
        if any(len(row) != len(rows[0]) for row in rows):
            raise ValueError("Embedding matrix rows have unequal lengths")
        if mat_rank(self.as_field_matrix()) != self.source_rank:
            raise ValueError(
                f"Embedding matrix has rank {mat_rank(self.as_field_matrix())}, "
                f"expected full column rank {self.source_rank}"
            )

    @property
    def target_rank(self) -> int:
        return len(self.matrix)

    @property
    def source_rank(self) -> int:
        return len(self.matrix[0])

    @property
    def source(self) -> ElementaryAbelianAlgebra:
        return ElementaryAbelianAlgebra(self.p, self.source_rank)

    @property
    def target(self) -> ElementaryAbelianAlgebra:
        return ElementaryAbelianAlgebra(self.p, self.target_rank)

    def as_field_matrix(self) -> galois.FieldArray:
        return FieldSpec(self.p).matrix(self.matrix)

    @classmethod
    def identity(cls, p: int, r: int) -> "SubgroupEmbedding":
        return cls(p, tuple(tuple(int(i == j) for j in range(r)) for i in range(r)))

    @classmethod
    def coordinate(cls, p: int, r: int, indices: Sequence[int]) -> "SubgroupEmbedding":
        """The subgroup generated by g_i for i in indices (0-based)."""
        return cls(p, tuple(tuple(int(i == k) for k in indices) for i in range(r)))

    def to_json(self) -> Dict[str, Any]:
        return {"matrix": [list(row) for row in self.matrix]}

    @classmethod
    def from_json(cls, data: Dict[str, Any], p: int) -> "SubgroupEmbedding":
        try:
            return cls(p, tuple(tuple(row) for row in data["matrix"]))
        except (KeyError, TypeError) as e:
            raise ValueError(f"Malformed embedding JSON: {e}") from e


def _check_algebra(m: FdModule, algebra: ElementaryAbelianAlgebra) -> None:
    if m.algebra != algebra:
        raise ValueError(
            f"Algebra mismatch: module over (p={m.p}, r={m.r}), "
            f"expected (p={algebra.p}, r={algebra.r})"
        )


def zero_module(algebra: ElementaryAbelianAlgebra) -> FdModule:
    return FdModule(algebra, tuple(algebra.field.zeros(0, 0) for _ in range(algebra.r)))


def trivial_module(algebra: ElementaryAbelianAlgebra) -> FdModule:
    """The trivial module k."""
    return FdModule(algebra, tuple(algebra.field.zeros(1, 1) for _ in range(algebra.r)))


def regular_module(algebra: ElementaryAbelianAlgebra) -> FdModule:
    """kE acting on itself."""
    return FdModule(algebra, algebra.regular_actions)


def free_module(algebra: ElementaryAbelianAlgebra, rank: int) -> FdModule:
    if rank == 0:
        return zero_module(algebra)
    return FdModule(
        algebra, tuple(block_diag([z] * rank) for z in algebra.regular_actions)
    )


def truncated_module(algebra: ElementaryAbelianAlgebra, bounds: Sequence[int]) -> FdModule:
    """
    k[z_1..z_r]/(z_1^{b_1}, ..., z_r^{b_r}) for 1 <= b_i <= p.

    bounds all 1 gives k, all p gives kE, (1, p, ...) gives kE/(z_1).
    """
    if len(bounds) != algebra.r or any(b < 1 or b > algebra.p for b in bounds):
        raise ValueError(f"Bounds {list(bounds)} must be r={algebra.r} values in 1..{algebra.p}")
    shape = list(bounds)
    basis = list(itertools.product(*[range(b) for b in shape]))
    index = {a: k for k, a in enumerate(basis)}
    gf = algebra.field.gf
    actions = []
    for i in range(algebra.r):
        z = gf.Zeros((len(basis), len(basis)))
        for a in basis:
            if a[i] + 1 < shape[i]:
                b = list(a)
                b[i] += 1
                z[index[tuple(b)], index[a]] = 1
        actions.append(z)
    return FdModule(algebra, tuple(actions))


def direct_sum(m: FdModule, n: FdModule) -> FdModule:
    _check_algebra(n, m.algebra)
    if m.dim == 0:
        return n
    if n.dim == 0:
        return m
    return FdModule(m.algebra, tuple(block_diag([a, b]) for a, b in zip(m.z, n.z)))


def tensor_diagonal(m: FdModule, n: FdModule, hopf: str = "group") -> FdModule:
    """
    m ⊗_k n with the diagonal action.

    Args:
        m, n: Modules over the same algebra
        hopf: "group" (z acts by Z⊗I + I⊗Z + Z⊗Z) or "lie" (Z⊗I + I⊗Z)

    Raises:
        ValueError: On algebra mismatch or unknown hopf mode
    """
    _check_algebra(n, m.algebra)
    if hopf not in ("group", "lie"):
        raise ValueError(f"hopf must be 'group' or 'lie', got {hopf!r}")
    if m.dim == 0 or n.dim == 0:
        return zero_module(m.algebra)
    im = m.identity()
    i_n = n.identity()
    actions = []
    for a, b in zip(m.z, n.z):
        z = mat_kron(a, i_n) + mat_kron(im, b)
        if hopf == "group":
            z = z + mat_kron(a, b)
        actions.append(z)
    return FdModule(m.algebra, tuple(actions))


def antipode_matrix(z: galois.FieldArray, p: int) -> galois.FieldArray:
    """(I + Z)^{-1} - I = sum_{j=1}^{p-1} (-Z)^j."""
    out = type(z).Zeros(z.shape)
    power = type(z).Identity(z.shape[0])
    for _ in range(1, p):
        power = power @ (-z)
        out = out + power
    return out


def dual_module(m: FdModule) -> FdModule:
    """Hom_k(m, k) with z_i acting by the transpose of the antipode of Z_i."""
    if m.dim == 0:
        return m
    return FdModule(m.algebra, tuple(antipode_matrix(z, m.p).T for z in m.z))


def restrict(m: FdModule, e: SubgroupEmbedding) -> FdModule:
    """
    Restriction along e: z'_i acts by prod_j (I + Z_j)^{B[j][i]} - I.

    Raises:
        ValueError: If m is not over e's target algebra
    """
    _check_algebra(m, e.target)
    if m.dim == 0:
        return zero_module(e.source)
    actions = []
    for i in range(e.source_rank):
        column = [e.matrix[j][i] for j in range(e.target_rank)]
        actions.append(m.group_element(column) - m.identity())
    return FdModule(e.source, tuple(actions))


class _CosetTable:
    """Cosets of the image of e in F_p^r with lexicographically least representatives."""

    def __init__(self, e: SubgroupEmbedding):
        p = e.p
        self.p = p
        b = np.array(e.matrix, dtype=np.int64)
        self.source_coords: Dict[Tuple[int, ...], Tuple[int, ...]] = {}
        for c in itertools.product(range(p), repeat=e.source_rank):
            h = tuple(int(v) for v in (b @ np.array(c, dtype=np.int64)) % p)
            self.source_coords[h] = c
        subgroup = list(self.source_coords)
        reps = set()
        self.decompose: Dict[Tuple[int, ...], Tuple[Tuple[int, ...], Tuple[int, ...]]] = {}
        for v in itertools.product(range(p), repeat=e.target_rank):
            candidates = []
            for h in subgroup:
                t = tuple((vi - hi) % p for vi, hi in zip(v, h))
                candidates.append((t, h))
            t, h = min(candidates)
            reps.add(t)
            self.decompose[v] = (t, h)
        self.representatives: List[Tuple[int, ...]] = sorted(reps)
        self.rep_index = {t: k for k, t in enumerate(self.representatives)}


def induce(n: FdModule, e: SubgroupEmbedding) -> FdModule:
    """
    Induction kE ⊗_{kE'} n along e.

    Basis: g^t ⊗ v for t running through the lexicographically least coset
    representatives, t-major. g_j (g^t ⊗ v) = g^{t'} ⊗ h v where
    t + e_j = t' + h with h in the image subgroup.

    Raises:
        ValueError: If n is not over e's source algebra
    """
    _check_algebra(n, e.source)
    target = e.target
    table = _CosetTable(e)
    n_cosets = len(table.representatives)
    if n.dim == 0:
        return zero_module(target)
    gf = target.field.gf
    dim = n_cosets * n.dim
    actions = []
    for j in range(target.r):
        g = gf.Zeros((dim, dim))
        for t in table.representatives:
            shifted = list(t)
            shifted[j] = (shifted[j] + 1) % e.p
            t_new, h = table.decompose[tuple(shifted)]
            block = n.group_element(table.source_coords[h])
            src = table.rep_index[t] * n.dim
            dst = table.rep_index[t_new] * n.dim
            g[dst:dst + n.dim, src:src + n.dim] = block
        actions.append(g - gf.Identity(dim))
    return FdModule(target, tuple(actions))


def reciprocity_maps(n: FdModule, e: SubgroupEmbedding) -> Tuple[galois.FieldArray, galois.FieldArray]:
    """
    The split pair n -> restrict(induce(n, e), e) -> n.

    The inclusion sends v to 1 ⊗ v; the projection keeps the component of the
    identity coset.
    """
    induced_dim = len(_CosetTable(e).representatives) * n.dim
    gf = n.field.gf
    inclusion = gf.Zeros((induced_dim, n.dim))
    inclusion[:n.dim, :] = gf.Identity(n.dim)
    return inclusion, inclusion.T.copy()


def radical_basis(m: FdModule) -> galois.FieldArray:
    """Columns spanning rad m = sum of the images of the Z_i."""
    if m.dim == 0:
        return m.field.zeros(0, 0)
    return column_space(hstack(list(m.z)))


def top_dimension(m: FdModule) -> int:
    """dim m / rad m, the number of generators of a projective cover."""
    if m.dim == 0:
        return 0
    return m.dim - mat_rank(hstack(list(m.z)))


def is_projective(m: FdModule) -> bool:
    """m is free iff dim m = p^r dim(m / rad m)."""
    return m.dim == m.algebra.dim * top_dimension(m)


def norm_matrix(m: FdModule) -> galois.FieldArray:
    """Action of the norm element prod_i z_i^{p-1}."""
    return m.monomial_action([m.p - 1] * m.r)


def projective_summand_count(m: FdModule) -> int:
    """Number of kE summands of m (the rank of the norm element)."""
    if m.dim == 0:
        return 0
    return mat_rank(norm_matrix(m))


def top_representatives(m: FdModule) -> galois.FieldArray:
    """Vectors of m whose images form a basis of m / rad m."""
    return column_complement(radical_basis(m), m.identity())


def cover_map(m: FdModule) -> galois.FieldArray:
    """
    Projective cover kE^b -> m as a dim(m) x (b p^r) matrix.

    The basis vector z^a in the k-th copy maps to Z^a v_k where v_k runs
    through top_representatives(m).
    """
    tops = top_representatives(m)
    columns = []
    monomials = m.algebra.monomials()
    for k in range(tops.shape[1]):
        v = tops[:, k:k + 1]
        for a in monomials:
            columns.append(m.monomial_action(a) @ v)
    if not columns:
        return m.field.zeros(m.dim, 0)
    return hstack(columns)


def submodule_action(ambient: Sequence[galois.FieldArray], basis: galois.FieldArray) -> Tuple[galois.FieldArray, ...]:
    """
    Action on a submodule spanned by the columns of basis.

    Solves basis @ X_i = Z_i @ basis for each generator.

    Raises:
        ValueError: If the span is not closed under the action
    """
    actions = []
    for z in ambient:
        x = mat_solve(basis, z @ basis)
        if x is None:
            raise ValueError("Subspace is not a submodule")
        actions.append(x)
    return tuple(actions)


def syzygy(m: FdModule) -> FdModule:
    """Ω m: the kernel of the projective cover of m."""
    algebra = m.algebra
    if m.dim == 0:
        return zero_module(algebra)
    pi = cover_map(m)
    b = pi.shape[1] // algebra.dim
    kernel = mat_kernel(pi)
    if kernel.shape[1] == 0:
        return zero_module(algebra)
    ambient = free_module(algebra, b).z
    return FdModule(algebra, submodule_action(ambient, kernel))


def subquotient_module(m: FdModule, upper: galois.FieldArray, lower: galois.FieldArray) -> FdModule:
    """
    The subquotient W / U for submodules U ⊆ W of m given by column bases.

    Raises:
        ValueError: If U or W is not a submodule or U is not inside W
    """
    complement = column_complement(lower, upper)
    if complement.shape[1] == 0:
        return zero_module(m.algebra)
    if lower.shape[1]:
        frame = hstack([lower, complement])
    else:
        frame = complement
    if lower.shape[1] and mat_rank(upper) != mat_rank(hstack([upper, lower])):
        raise ValueError("Lower subspace is not contained in the upper subspace")
    k = lower.shape[1]
    actions = []
    for z in m.z:
        coords = mat_solve(frame, z @ complement)
        if coords is None:
            raise ValueError("Upper subspace is not a submodule")
        if k and mat_solve(frame, z @ lower) is None:
            raise ValueError("Lower subspace is not a submodule")
        actions.append(coords[k:, :])
    return FdModule(m.algebra, tuple(actions))


def quotient_module(m: FdModule, lower: galois.FieldArray) -> FdModule:
    return subquotient_module(m, m.identity(), lower)


def submodule_generated(m: FdModule, vectors: galois.FieldArray) -> galois.FieldArray:
    """Column basis of the kE-span of the given vectors."""
    if vectors.shape[1] == 0:
        return vectors
    blocks = [m.monomial_action(a) @ vectors for a in m.algebra.monomials()]
    return column_space(hstack(blocks))


def hom_space_basis(m: FdModule, n: FdModule) -> List[galois.FieldArray]:
    """
    Basis of Hom_kE(m, n) as n.dim x m.dim matrices.

    F is a module map iff N_i F = F M_i for every i; with F flattened row-major
    this is (N_i ⊗ I - I ⊗ M_i^T) vec F = 0.
    """
    _check_algebra(n, m.algebra)
    if m.dim == 0 or n.dim == 0:
        return []
    constraints = [
        mat_kron(nz, m.identity()) - mat_kron(n.identity(), mz.T)
        for mz, nz in zip(m.z, n.z)
    ]
    kernel = mat_kernel(vstack(constraints))
    return [kernel[:, k].reshape(n.dim, m.dim) for k in range(kernel.shape[1])]


def hom_space_dim(m: FdModule, n: FdModule) -> int:
    return len(hom_space_basis(m, n))


def is_module_map(f: galois.FieldArray, m: FdModule, n: FdModule) -> bool:
    if f.shape != (n.dim, m.dim):
        return False
    return all(np.array_equal(nz @ f, f @ mz) for mz, nz in zip(m.z, n.z))


def conjugate(m: FdModule, t: galois.FieldArray) -> FdModule:
    """The isomorphic module with actions T Z_i T^{-1}."""
    t_inv = mat_inverse(t)
    return FdModule(m.algebra, tuple(t @ z @ t_inv for z in m.z))


def random_module(algebra: ElementaryAbelianAlgebra,
                  seed: Union[int, np.random.SeedSequence, np.random.Generator],
                  dim_max: int) -> FdModule:
    """
    A random module of dimension 1..dim_max, deterministic in seed.

    A quotient of a free module kE^b, 1 <= b <= dim_max, by the kE-span of
    random relations drawn from its radical, conjugated by a random invertible
    matrix. Relations in the radical never touch the top, so the quotient has
    top dimension exactly b.
    """
    if dim_max < 1:
        raise ValueError(f"dim_max must be >= 1, got {dim_max}")
    rng = np.random.default_rng(seed)
    spec = algebra.field
    b = int(rng.integers(1, dim_max + 1))
    ambient = free_module(algebra, b)
    size = ambient.dim
    relations = spec.zeros(size, 0)
    keep_free = size <= dim_max and rng.random() < 0.3
    while not keep_free:
        w = random_matrix(spec, size, algebra.r * b, rng)
        blocks = [ambient.z[i] @ w[:, i * b:(i + 1) * b] for i in range(algebra.r)]
        candidate = sum(blocks[1:], blocks[0])
        relations = submodule_generated(ambient, hstack([relations, candidate]))
        current = size - relations.shape[1]
        if current <= dim_max and (current == b or rng.random() < 0.5):
            break
    module = quotient_module(ambient, relations) if relations.shape[1] else ambient
    t = random_invertible(spec, module.dim, rng)
    return conjugate(module, t)


def random_embedding(p: int, r: int, source_rank: int,
                     seed: Union[int, np.random.SeedSequence, np.random.Generator]) -> SubgroupEmbedding:
    """A random E' = (Z/p)^{source_rank} inside (Z/p)^r, deterministic in seed."""
    if not 1 <= source_rank <= r:
        raise ValueError(f"Source rank must lie in 1..{r}, got {source_rank}")
    rng = np.random.default_rng(seed)
    spec = FieldSpec(p)
    while True:
        b = random_matrix(spec, r, source_rank, rng)
        if mat_rank(b) == source_rank:
            return SubgroupEmbedding(p, tuple(tuple(row) for row in to_int_lists(b)))
