"""
Small p-Groups by Multiplication Table.

Enough structure to decide projectivity of a module over kG and to restrict
it to elementary abelian subgroups, for groups of order at most 64.
"""

import itertools
from dataclasses import dataclass
from typing import List, Sequence, Tuple

import numpy as np
import galois

from engine.finite_field import FieldSpec, block_diag, hstack, mat_kron, mat_rank
from engine.group_modules import ElementaryAbelianAlgebra, FdModule


MAX_GROUP_ORDER = 64

# Quaternion units 1, i, j, k: (product unit, sign flip) for row * column.
_UNIT_PRODUCTS = {
    (0, 0): (0, 0), (0, 1): (1, 0), (0, 2): (2, 0), (0, 3): (3, 0),
    (1, 0): (1, 0), (1, 1): (0, 1), (1, 2): (3, 0), (1, 3): (2, 1),
    (2, 0): (2, 0), (2, 1): (3, 1), (2, 2): (0, 1), (2, 3): (1, 0),
    (3, 0): (3, 0), (3, 1): (2, 0), (3, 2): (1, 1), (3, 3): (0, 1),
}


@dataclass(frozen=True)
class PGroup:
    """
    A finite p-group given by its multiplication table.

    Element 0 is the identity; table[a][b] is the index of a*b.
    """
    name: str
    p: int
    table: Tuple[Tuple[int, ...], ...]
    generators: Tuple[int, ...]

    def __post_init__(self):
        n = len(self.table)
        if n > MAX_GROUP_ORDER:
            raise ValueError(f"Group order {n} exceeds {MAX_GROUP_ORDER}")
        k = 0
        while self.p ** k < n:
            k += 1
        if self.p ** k != n:
            raise ValueError(f"Group order {n} is not a power of {self.p}")
        if any(self.table[0][b] != b or self.table[b][0] != b for b in range(n)):
            raise ValueError("Element 0 is not the identity")

    @property
    def order(self) -> int:
        return len(self.table)

    def multiply(self, a: int, b: int) -> int:
        return self.table[a][b]

    def power(self, a: int, k: int) -> int:
        out = 0
        for _ in range(k):
            out = self.multiply(out, a)
        return out

    def generated(self, elements: Sequence[int]) -> List[int]:
        """The subgroup generated by the given elements."""
        found = {0}
        frontier = [0]
        while frontier:
            nxt = []
            for a in frontier:
                for g in elements:
                    b = self.multiply(a, g)
                    if b not in found:
                        found.add(b)
                        nxt.append(b)
            frontier = nxt
        return sorted(found)

    @classmethod
    def cyclic(cls, n: int, p: int) -> "PGroup":
        table = tuple(tuple((a + b) % n for b in range(n)) for a in range(n))
        return cls(f"Z/{n}", p, table, (1,))

    @classmethod
    def elementary_abelian(cls, p: int, r: int) -> "PGroup":
        vectors = list(itertools.product(range(p), repeat=r))
        index = {v: k for k, v in enumerate(vectors)}
        table = tuple(
            tuple(index[tuple((x + y) % p for x, y in zip(u, v))] for v in vectors)
            for u in vectors
        )
        generators = tuple(index[tuple(int(i == j) for j in range(r))] for i in range(r))
        return cls(f"(Z/{p})^{r}", p, table, generators)

    @classmethod
    def quaternion(cls) -> "PGroup":
        """Q_8 with element (sign, unit) stored at index 4 * sign + unit."""
        table = []
        for a in range(8):
            row = []
            for b in range(8):
                unit, flip = _UNIT_PRODUCTS[(a % 4, b % 4)]
                sign = (a // 4 + b // 4 + flip) % 2
                row.append(4 * sign + unit)
            table.append(tuple(row))
        return cls("Q8", 2, tuple(table), (1, 2))


@dataclass(frozen=True, eq=False)
class GroupModule:
    """A kG-module: one matrix per group element."""
    group: PGroup
    rho: Tuple[galois.FieldArray, ...]

    def __post_init__(self):
        if len(self.rho) != self.group.order:
            raise ValueError(f"Need {self.group.order} element matrices, got {len(self.rho)}")
        identity = FieldSpec(self.group.p).identity(self.dim)
        if not np.array_equal(self.rho[0], identity):
            raise ValueError("Identity element does not act as the identity")
        for g in self.group.generators:
            for h in range(self.group.order):
                if not np.array_equal(self.rho[g] @ self.rho[h], self.rho[self.group.multiply(g, h)]):
                    raise ValueError(f"Action is not multiplicative at ({g}, {h})")

    @property
    def dim(self) -> int:
        return self.rho[0].shape[0]


def trivial_group_module(group: PGroup) -> GroupModule:
    one = FieldSpec(group.p).identity(1)
    return GroupModule(group, tuple(one for _ in range(group.order)))


def regular_group_module(group: PGroup) -> GroupModule:
    """kG with g acting by left multiplication on the basis of group elements."""
    gf = FieldSpec(group.p).gf
    rho = []
    for g in range(group.order):
        m = gf.Zeros((group.order, group.order))
        for h in range(group.order):
            m[group.multiply(g, h), h] = 1
        rho.append(m)
    return GroupModule(group, tuple(rho))


def group_direct_sum(m: GroupModule, n: GroupModule) -> GroupModule:
    return GroupModule(m.group, tuple(block_diag([a, b]) for a, b in zip(m.rho, n.rho)))


def group_tensor(m: GroupModule, n: GroupModule) -> GroupModule:
    """m ⊗_k n with g acting diagonally."""
    return GroupModule(m.group, tuple(mat_kron(a, b) for a, b in zip(m.rho, n.rho)))


def group_module_is_projective(m: GroupModule) -> bool:
    """kG is local, so m is projective iff dim m = |G| dim(m / rad m)."""
    if m.dim == 0:
        return True
    identity = m.rho[0]
    augmentation = hstack([m.rho[g] - identity for g in m.group.generators])
    top = m.dim - mat_rank(augmentation)
    return m.dim == m.group.order * top


def check_elementary_abelian(group: PGroup, elements: Sequence[int]) -> None:
    """
    Raises:
        ValueError: If the elements do not form a basis of an elementary
                    abelian subgroup
    """
    for h in elements:
        if h == 0 or group.power(h, group.p) != 0:
            raise ValueError(f"Element {h} of {group.name} does not have order {group.p}")
    for a, b in itertools.combinations(elements, 2):
        if group.multiply(a, b) != group.multiply(b, a):
            raise ValueError(f"Elements {a} and {b} of {group.name} do not commute")
    if len(group.generated(elements)) != group.p ** len(elements):
        raise ValueError(f"Elements {list(elements)} of {group.name} are not independent")


def restrict_to_elementary(m: GroupModule, elements: Sequence[int]) -> FdModule:
    """
    Restriction to the elementary abelian subgroup with basis `elements`.

    z_i acts by rho(h_i) - I.
    """
    check_elementary_abelian(m.group, elements)
    algebra = ElementaryAbelianAlgebra(m.group.p, len(elements))
    identity = m.rho[0]
    return FdModule(algebra, tuple(m.rho[h] - identity for h in elements))
