"""
Exact Linear Algebra over Finite Fields.

Dense matrices over prime fields F_p and small extensions F_{p^e}. Field
arithmetic is delegated to galois FieldArrays; elimination is deterministic
(first nonzero pivot, left to right) so every derived basis is reproducible.
"""

from dataclasses import dataclass, field
from functools import lru_cache
from typing import List, Optional, Sequence, Tuple, Type

import numpy as np
import galois


# Extension fields are only used for point sampling.
MAX_EXTENSION_ORDER = 125


@lru_cache(maxsize=None)
def _field_class(p: int, e: int, modulus: Tuple[int, ...]) -> Type[galois.FieldArray]:
    if e == 1:
        return galois.GF(p)
    poly = galois.Poly(list(modulus), field=galois.GF(p))
    return galois.GF(p ** e, irreducible_poly=poly)


@dataclass(frozen=True)
class FieldSpec:
    """
    A finite field F_{p^e}.

    Attributes:
        p: Prime characteristic
        e: Extension degree (1 for the prime field)
        modulus: Coefficients (highest degree first) of the defining
                 irreducible polynomial; empty for e = 1
    """
    p: int
    e: int = 1
    modulus: Tuple[int, ...] = field(default_factory=tuple)

    def __post_init__(self):
        if not isinstance(self.p, int) or not galois.is_prime(self.p):
            raise ValueError(f"Characteristic must be prime, got {self.p}")
        if self.e < 1:
            raise ValueError(f"Extension degree must be >= 1, got {self.e}")
        if self.e == 1:
            object.__setattr__(self, "modulus", ())
            return
        if self.p ** self.e > MAX_EXTENSION_ORDER:
            raise ValueError(
                f"Field order {self.p ** self.e} exceeds the supported "
                f"maximum {MAX_EXTENSION_ORDER}"
            )
        if not self.modulus:
            poly = galois.irreducible_poly(self.p, self.e)
            object.__setattr__(self, "modulus", tuple(int(c) for c in poly.coeffs))
        modulus = tuple(int(c) % self.p for c in self.modulus)
        object.__setattr__(self, "modulus", modulus)
        if len(modulus) != self.e + 1 or modulus[0] == 0:
            raise ValueError(
                f"Modulus {modulus} is not a polynomial of degree {self.e}"
            )
        poly = galois.Poly(list(modulus), field=galois.GF(self.p))
        if not poly.is_irreducible():
            raise ValueError(f"Modulus {poly} is reducible over F_{self.p}")

    @property
    def order(self) -> int:
        return self.p ** self.e

    @property
    def gf(self) -> Type[galois.FieldArray]:
        """The galois FieldArray class of this field."""
        return _field_class(self.p, self.e, self.modulus)

    @classmethod
    def of(cls, array: galois.FieldArray) -> "FieldSpec":
        """Recover the FieldSpec of a galois array."""
        ftype = type(array)
        p = int(ftype.characteristic)
        e = int(ftype.degree)
        modulus = () if e == 1 else tuple(int(c) for c in ftype.irreducible_poly.coeffs)
        return cls(p, e, modulus)

    def elements(self) -> galois.FieldArray:
        """All field elements in integer order."""
        return self.gf(np.arange(self.order))

    def matrix(self, rows: Sequence[Sequence[int]], n_cols: Optional[int] = None) -> galois.FieldArray:
        """
        Build a matrix from nested integer rows.

        Args:
            rows: Row-major integers in 0..order-1 (reduced mod order when
                  the field is prime)
            n_cols: Column count, needed only when rows is empty

        Returns:
            2-D FieldArray
        """
        data = np.array(rows, dtype=np.int64)
        if data.size == 0:
            return self.zeros(len(rows), n_cols or 0)
        if data.ndim != 2:
            raise ValueError(f"Matrix rows must be 2-dimensional, got shape {data.shape}")
        if self.e == 1:
            data = data % self.p
        elif data.min() < 0 or data.max() >= self.order:
            raise ValueError(f"Entries must lie in 0..{self.order - 1}")
        return self.gf(data)

    def zeros(self, rows: int, cols: int) -> galois.FieldArray:
        return self.gf.Zeros((rows, cols))

    def identity(self, n: int) -> galois.FieldArray:
        return self.gf.Identity(n)

    def scalar(self, value: int) -> galois.FieldArray:
        return self.gf(int(value) % self.order if self.e == 1 else int(value))


def _check_same_field(a: galois.FieldArray, b: galois.FieldArray) -> None:
    if type(a) is not type(b):
        raise ValueError(
            f"Field mismatch: {type(a).name} vs {type(b).name}"
        )


def to_int_lists(m: galois.FieldArray) -> List[List[int]]:
    """Integer representation of a matrix, as nested lists (JSON friendly)."""
    return np.asarray(m.view(np.ndarray), dtype=np.int64).tolist()


def hstack(blocks: Sequence[galois.FieldArray]) -> galois.FieldArray:
    """Concatenate matrices of one field side by side."""
    ftype = type(blocks[0])
    for block in blocks[1:]:
        _check_same_field(blocks[0], block)
    data = np.hstack([np.asarray(b.view(np.ndarray)) for b in blocks])
    return ftype(data)


def vstack(blocks: Sequence[galois.FieldArray]) -> galois.FieldArray:
    """Concatenate matrices of one field on top of each other."""
    ftype = type(blocks[0])
    for block in blocks[1:]:
        _check_same_field(blocks[0], block)
    data = np.vstack([np.asarray(b.view(np.ndarray)) for b in blocks])
    return ftype(data)


def block_diag(blocks: Sequence[galois.FieldArray]) -> galois.FieldArray:
    """Block-diagonal matrix of the given blocks."""
    ftype = type(blocks[0])
    rows = sum(b.shape[0] for b in blocks)
    cols = sum(b.shape[1] for b in blocks)
    out = ftype.Zeros((rows, cols))
    r = c = 0
    for b in blocks:
        out[r:r + b.shape[0], c:c + b.shape[1]] = b
        r += b.shape[0]
        c += b.shape[1]
    return out


def row_reduce(m: galois.FieldArray) -> Tuple[galois.FieldArray, List[int]]:
    """
    Reduced row echelon form by Gauss-Jordan elimination.

    Pivots are the first nonzero entry in each column, scanning left to
    right, so the result is deterministic. Used in place of
    FieldArray.row_reduce because callers need the pivot columns, and
    mat_kernel orders its basis by them.

    Returns:
        Tuple of (reduced matrix, pivot column indices)
    """
    a = m.copy()
    n_rows, n_cols = a.shape
    pivots: List[int] = []
    r = 0
    for c in range(n_cols):
        if r == n_rows:
            break
        nz = np.nonzero(a[r:, c])[0]
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            a[[r, i]] = a[[i, r]]
        a[r] = a[r] / a[r, c]
        column = a[:, c].copy()
        column[r] = 0
        targets = np.nonzero(column)[0]
        if targets.size:
            a[targets] = a[targets] - column[targets][:, None] * a[r][None, :]
        pivots.append(c)
        r += 1
    return a, pivots


def mat_rank(m: galois.FieldArray) -> int:
    """Rank of a matrix over its field."""
    if m.size == 0:
        return 0
    return len(row_reduce(m)[1])


def mat_kernel(m: galois.FieldArray) -> galois.FieldArray:
    """
    Basis of the right null space.

    Returns:
        Matrix whose columns are a basis of {x : m x = 0}; its width is
        cols - rank. Basis vectors are ordered by their free column.
    """
    ftype = type(m)
    n_rows, n_cols = m.shape
    if n_rows == 0 or m.size == 0:
        return ftype.Identity(n_cols)
    reduced, pivots = row_reduce(m)
    pivot_set = set(pivots)
    free = [c for c in range(n_cols) if c not in pivot_set]
    basis = ftype.Zeros((n_cols, len(free)))
    for k, f in enumerate(free):
        basis[f, k] = 1
        for j, pc in enumerate(pivots):
            basis[pc, k] = -reduced[j, f]
    return basis


def mat_solve(a: galois.FieldArray, b: galois.FieldArray) -> Optional[galois.FieldArray]:
    """
    Solve a x = b.

    Args:
        a: Coefficient matrix
        b: Right-hand side with the same number of rows

    Returns:
        A particular solution (free variables set to zero), or None when the
        system is inconsistent

    Raises:
        ValueError: If the row counts differ or the fields differ
        RuntimeError: If the solution fails the re-multiplication check
    """
    _check_same_field(a, b)
    if a.shape[0] != b.shape[0]:
        raise ValueError(
            f"Dimension mismatch: a has {a.shape[0]} rows, b has {b.shape[0]}"
        )
    ftype = type(a)
    n_cols = a.shape[1]
    if a.shape[0] == 0:
        return ftype.Zeros((n_cols, b.shape[1]))
    reduced, pivots = row_reduce(hstack([a, b]))
    if any(pc >= n_cols for pc in pivots):
        return None
    x = ftype.Zeros((n_cols, b.shape[1]))
    for j, pc in enumerate(pivots):
        x[pc] = reduced[j, n_cols:]
    if not np.array_equal(a @ x, b):
        raise RuntimeError("Linear solve produced a solution that fails a x = b")
    return x


def mat_kron(a: galois.FieldArray, b: galois.FieldArray) -> galois.FieldArray:
    """
    Kronecker product with index convention (i_a, i_b) -> i_a * b.rows + i_b.
    """
    _check_same_field(a, b)
    ar, ac = a.shape
    br, bc = b.shape
    product = a[:, None, :, None] * b[None, :, None, :]
    return product.reshape(ar * br, ac * bc)


def mat_power(m: galois.FieldArray, k: int) -> galois.FieldArray:
    """Non-negative integer power of a square matrix."""
    result = type(m).Identity(m.shape[0])
    base = m
    while k > 0:
        if k & 1:
            result = result @ base
        base = base @ base
        k >>= 1
    return result


def column_space(m: galois.FieldArray) -> galois.FieldArray:
    """A basis of the column space, taken from the pivot columns of m."""
    if m.size == 0:
        return type(m).Zeros((m.shape[0], 0))
    _, pivots = row_reduce(m)
    return m[:, pivots]


def column_complement(sub: galois.FieldArray, ambient: galois.FieldArray) -> galois.FieldArray:
    """
    Columns of ambient that extend a basis of span(sub) to span(sub + ambient).

    Args:
        sub: Matrix whose columns span the subspace to complement
        ambient: Candidate columns, scanned left to right

    Returns:
        Matrix of the selected ambient columns
    """
    if sub.shape[1] == 0:
        return column_space(ambient)
    if ambient.shape[1] == 0:
        return ambient
    combined = hstack([sub, ambient])
    _, pivots = row_reduce(combined)
    offset = sub.shape[1]
    chosen = [c - offset for c in pivots if c >= offset]
    return ambient[:, chosen]


def random_matrix(spec: FieldSpec, rows: int, cols: int, rng: np.random.Generator) -> galois.FieldArray:
    """Uniformly random matrix."""
    return spec.gf(rng.integers(0, spec.order, size=(rows, cols)))


def random_invertible(spec: FieldSpec, n: int, rng: np.random.Generator) -> galois.FieldArray:
    """Random invertible matrix, drawn until full rank."""
    while True:
        candidate = random_matrix(spec, n, n, rng)
        if mat_rank(candidate) == n:
            return candidate


def mat_inverse(m: galois.FieldArray) -> galois.FieldArray:
    """
    Inverse of a square matrix.

    Raises:
        ValueError: If m is singular
    """
    n = m.shape[0]
    x = mat_solve(m, type(m).Identity(n))
    if x is None or m.shape[0] != m.shape[1]:
        raise ValueError("Matrix is not invertible")
    return x
