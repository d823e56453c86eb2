"""
Ext as a Graded Module over Reduced Cohomology.

Ext^n_{kE}(k, m) is computed as the cohomology of Hom_{kE}(P, m) for the
explicit resolution P of k. The reduced ring R_red = k[x_1..x_r] acts by the
periodicity shift of P. A degreewise presenter turns any such graded module
(finite window, known action maps) into generators and relations over R_red;
the dg side reuses it for modules over S.
"""

from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Tuple, Union

import galois
import sympy

from engine.errors import VerificationError
from engine.finite_field import (
    FieldSpec,
    column_complement,
    column_space,
    hstack,
    mat_kernel,
    mat_rank,
    mat_solve,
)
from engine.group_modules import ElementaryAbelianAlgebra, FdModule, projective_summand_count
from engine.ideals import Ideal, fitting_ideal_0, ideal_intersection, minor_count
from engine.polynomials import GradedPolyRing, reduced_ring
from engine.resolutions import TensorResolution


# Above this many maximal minors the support ideal is assembled from the
# annihilators of the individual generators instead.
MAX_FITTING_MINORS = 256

# Automatic truncation never goes beyond this degree.
MAX_AUTO_TRUNCATION = 48


@dataclass(frozen=True)
class CohomRing:
    """
    Reduced cohomology k[x_1..x_r] of E = (Z/p)^r.

    Generators have degree 1 at p = 2 and degree 2 at odd p.
    """
    algebra: ElementaryAbelianAlgebra

    @property
    def ring(self) -> GradedPolyRing:
        return reduced_ring(self.algebra.p, self.algebra.r)

    @property
    def gen_degree(self) -> int:
        return self.ring.gen_degree

    def irrelevant_ideal(self) -> Ideal:
        return Ideal.irrelevant(self.ring)


@dataclass
class GradedModuleData:
    """
    A graded module over a polynomial ring, known on a window of degrees.

    Attributes:
        ring: Acting ring; variable x_i raises degree by ring.gen_degree
        lo, hi: Window of degrees (inclusive)
        dims: dims[n] for lo <= n <= hi
        actions: actions[(n, i)] is the matrix of x_i from degree n to n + gen_degree,
                 present whenever both degrees lie in the window
    """
    ring: GradedPolyRing
    lo: int
    hi: int
    dims: Dict[int, int]
    actions: Dict[Tuple[int, int], galois.FieldArray]

    def degrees(self) -> List[int]:
        return list(range(self.lo, self.hi + 1))


class GradedPresenter:
    """
    Minimal generators and relations of a GradedModuleData, degree by degree.

    In each degree n the free module F_n is spanned by labels (g, μ) with
    deg g + d|μ| = n. New generators complement the image of F_n in M_n; new
    relations complement x·K_{n-d} inside K_n = ker(F_n -> M_n).
    """

    def __init__(self, data: GradedModuleData):
        self.data = data
        self.ring = data.ring
        self.step = data.ring.gen_degree
        self.spec = FieldSpec(data.ring.p)
        self.generator_degrees: List[int] = []
        self.generator_vectors: List[galois.FieldArray] = []
        self.relations: List[Tuple[int, List[Tuple[int, Tuple[int, ...]]], galois.FieldArray]] = []
        self._labels: Dict[int, List[Tuple[int, Tuple[int, ...]]]] = {}
        self._images: Dict[Tuple[int, Tuple[int, ...]], galois.FieldArray] = {}
        self._kernels: Dict[int, galois.FieldArray] = {}

    def _monomials(self, weight: int) -> List[Tuple[int, ...]]:
        return self.ring.monomials_of_weight(weight)

    def _labels_in(self, n: int) -> List[Tuple[int, Tuple[int, ...]]]:
        labels = []
        for g, deg in enumerate(self.generator_degrees):
            gap = n - deg
            if gap >= 0 and gap % self.step == 0:
                labels.extend((g, mu) for mu in self._monomials(gap // self.step))
        return labels

    def _image(self, label: Tuple[int, Tuple[int, ...]]) -> galois.FieldArray:
        if label in self._images:
            return self._images[label]
        g, mu = label
        if not any(mu):
            return self.generator_vectors[g]
        i = next(k for k, a in enumerate(mu) if a)
        lower = list(mu)
        lower[i] -= 1
        degree = self.generator_degrees[g] + self.step * sum(lower)
        vector = self.data.actions[(degree, i)] @ self._image((g, tuple(lower)))
        self._images[label] = vector
        return vector

    def _image_matrix(self, n: int, labels) -> galois.FieldArray:
        dim = self.data.dims[n]
        if not labels:
            return self.spec.zeros(dim, 0)
        return hstack([self._image(label) for label in labels])

    def _multiplication(self, n: int, i: int) -> galois.FieldArray:
        """x_i from F_{n-d} to F_n in label coordinates."""
        source = self._labels[n - self.step]
        target = {label: k for k, label in enumerate(self._labels[n])}
        out = self.spec.zeros(len(target), len(source))
        for k, (g, mu) in enumerate(source):
            raised = list(mu)
            raised[i] += 1
            out[target[(g, tuple(raised))], k] = 1
        return out

    def run(self) -> "GradedPresenter":
        for n in self.data.degrees():
            dim = self.data.dims[n]
            labels = self._labels_in(n)
            image = self._image_matrix(n, labels)
            fresh = column_complement(image, self.spec.identity(dim)) if dim else self.spec.zeros(0, 0)
            for k in range(fresh.shape[1]):
                self.generator_degrees.append(n)
                self.generator_vectors.append(fresh[:, k:k + 1])
            labels = self._labels_in(n)
            self._labels[n] = labels
            image = self._image_matrix(n, labels)
            kernel = mat_kernel(image) if labels else self.spec.zeros(0, 0)
            self._kernels[n] = kernel
            if kernel.shape[1] == 0:
                continue
            previous = n - self.step
            if previous in self._kernels and self._kernels[previous].shape[1]:
                lifted = hstack([
                    self._multiplication(n, i) @ self._kernels[previous]
                    for i in range(self.ring.r)
                ])
            else:
                lifted = self.spec.zeros(len(labels), 0)
            new_relations = column_complement(lifted, kernel)
            for k in range(new_relations.shape[1]):
                self.relations.append((n, labels, new_relations[:, k:k + 1]))
        return self

    def relation_matrix(self) -> List[List[sympy.Poly]]:
        """Rows indexed by generators, columns by relations."""
        rows = [[self.ring.zero() for _ in self.relations] for _ in self.generator_degrees]
        for c, (_, labels, vector) in enumerate(self.relations):
            for k, (g, mu) in enumerate(labels):
                coeff = int(vector[k, 0])
                if coeff:
                    rows[g][c] = rows[g][c] + self.ring.monomial(mu, coeff)
        return rows

    def relation_degrees(self) -> List[int]:
        return [n for n, _, _ in self.relations]

    def check_hilbert_function(self) -> None:
        """
        dim F_n - dim(relations)_n must equal dim M_n in every window degree.

        Raises:
            VerificationError: On any mismatch
        """
        for n in self.data.degrees():
            labels = self._labels[n]
            index = {label: k for k, label in enumerate(labels)}
            columns = []
            for degree, rel_labels, vector in self.relations:
                gap = n - degree
                if gap < 0 or gap % self.step:
                    continue
                for nu in self._monomials(gap // self.step):
                    col = self.spec.zeros(len(labels), 1)
                    for k, (g, mu) in enumerate(rel_labels):
                        if vector[k, 0] != 0:
                            col[index[(g, tuple(a + b for a, b in zip(mu, nu)))], 0] = vector[k, 0]
                    columns.append(col)
            relation_rank = mat_rank(hstack(columns)) if columns else 0
            if len(labels) - relation_rank != self.data.dims[n]:
                raise VerificationError(
                    f"Presentation predicts dimension {len(labels) - relation_rank} "
                    f"in degree {n}, module has {self.data.dims[n]}"
                )

    def cyclic_annihilator(self, g: int) -> Ideal:
        """Annihilator of generator g, from the degrees inside the window."""
        generators = []
        kernels: Dict[int, galois.FieldArray] = {}
        base = self.generator_degrees[g]
        weight = 0
        while base + self.step * weight <= self.data.hi:
            monomials = self._monomials(weight)
            images = hstack([self._image((g, mu)) for mu in monomials])
            kernel = mat_kernel(images)
            kernels[weight] = kernel
            if kernel.shape[1] and weight > 0 and kernels[weight - 1].shape[1]:
                lower = self._monomials(weight - 1)
                target = {mu: k for k, mu in enumerate(monomials)}
                lifts = []
                for i in range(self.ring.r):
                    mult = self.spec.zeros(len(monomials), len(lower))
                    for k, mu in enumerate(lower):
                        raised = list(mu)
                        raised[i] += 1
                        mult[target[tuple(raised)], k] = 1
                    lifts.append(mult @ kernels[weight - 1])
                fresh = column_complement(hstack(lifts), kernel)
            else:
                fresh = kernel
            for k in range(fresh.shape[1]):
                poly = self.ring.zero()
                for j, mu in enumerate(monomials):
                    coeff = int(fresh[j, k])
                    if coeff:
                        poly = poly + self.ring.monomial(mu, coeff)
                generators.append(poly)
            weight += 1
        return Ideal(self.ring, generators)

    def is_stable(self) -> bool:
        """No generator or relation appears in the last third of the window."""
        lo, hi = self.data.lo, self.data.hi
        tail = max(1, (hi - lo) // 3)
        degrees = self.generator_degrees + self.relation_degrees()
        return all(n <= hi - tail for n in degrees)

    def support_ideal(self) -> Ideal:
        """
        Fitting ideal of the presentation; the intersection of the generator
        annihilators when the Fitting ideal has too many minors.
        """
        n_gens = len(self.generator_degrees)
        n_rels = len(self.relations)
        if n_gens == 0:
            return Ideal.unit(self.ring)
        if n_rels < n_gens or minor_count(n_gens, n_rels, n_gens) <= MAX_FITTING_MINORS:
            return fitting_ideal_0(self.ring, self.relation_matrix(), n_gens)
        ideal = self.cyclic_annihilator(0)
        for g in range(1, n_gens):
            ideal = ideal_intersection(ideal, self.cyclic_annihilator(g))
        return ideal


def normalize_support_ideal(ideal: Ideal) -> Ideal:
    """The unit ideal stands for the irrelevant locus {m}."""
    if ideal.is_unit():
        return Ideal.irrelevant(ideal.ring)
    return ideal


class GradedHomology:
    """
    Cohomology of a cochain complex of vector spaces in degrees lo..hi,
    together with the maps x_i: H^n -> H^{n+d} induced by chain-level shifts.

    Subclasses supply size(n), differential(n) (size(n+1) x size(n)) and
    shift(n, i) (size(n+d) x size(n)). Each H^n is represented by cocycles
    complementing the coboundaries; coordinates come from solving against
    [B^n | reps].
    """

    def __init__(self, ring: GradedPolyRing, lo: int, hi: int):
        if hi < lo:
            raise ValueError(f"Invalid degree window [{lo}, {hi}]")
        self.ring = ring
        self.spec = FieldSpec(ring.p)
        self.lo = lo
        self.hi = hi
        self._reps: Dict[int, galois.FieldArray] = {}
        self._frames: Dict[int, Tuple[galois.FieldArray, int]] = {}

    def size(self, n: int) -> int:
        raise NotImplementedError

    def differential(self, n: int) -> galois.FieldArray:
        raise NotImplementedError

    def shift(self, n: int, i: int) -> galois.FieldArray:
        raise NotImplementedError

    def compute(self) -> "GradedHomology":
        spec = self.spec
        previous_delta = self.differential(self.lo - 1)
        for n in range(self.lo, self.hi + 1):
            size = self.size(n)
            delta = self.differential(n)
            cocycles = mat_kernel(delta) if delta.size else spec.identity(size)
            if previous_delta.size:
                boundaries = column_space(previous_delta)
            else:
                boundaries = spec.zeros(size, 0)
            reps = column_complement(boundaries, cocycles) if size else spec.zeros(0, 0)
            self._reps[n] = reps
            frame = hstack([boundaries, reps]) if size else spec.zeros(0, 0)
            self._frames[n] = (frame, boundaries.shape[1])
            previous_delta = delta
        return self

    def dim(self, n: int) -> int:
        return self._reps[n].shape[1]

    def representatives(self, n: int) -> galois.FieldArray:
        return self._reps[n]

    def coordinates(self, n: int, vectors: galois.FieldArray) -> galois.FieldArray:
        """Coordinates in the H^n basis of cocycles given as columns."""
        frame, offset = self._frames[n]
        if self.dim(n) == 0:
            return self.spec.zeros(0, vectors.shape[1])
        solution = mat_solve(frame, vectors)
        if solution is None:
            raise VerificationError(f"Vector is not a cocycle in degree {n}")
        return solution[offset:, :]

    def action(self, n: int, i: int) -> galois.FieldArray:
        """x_i: H^n -> H^{n+d}."""
        d = self.ring.gen_degree
        reps = self._reps[n]
        if reps.shape[1] == 0 or self.dim(n + d) == 0:
            return self.spec.zeros(self.dim(n + d), reps.shape[1])
        return self.coordinates(n + d, self.shift(n, i) @ reps)

    def module_data(self) -> GradedModuleData:
        d = self.ring.gen_degree
        dims = {n: self.dim(n) for n in range(self.lo, self.hi + 1)}
        actions = {}
        for n in range(self.lo, self.hi + 1 - d):
            for i in range(self.ring.r):
                actions[(n, i)] = self.action(n, i)
        return GradedModuleData(self.ring, self.lo, self.hi, dims, actions)


class ExtComplex(GradedHomology):
    """Ext^n_{kE}(k, m) for lo <= n <= hi, via Hom_{kE}(P, m)."""

    def __init__(self, m: FdModule, lo: int, hi: int):
        if lo < 0:
            raise ValueError(f"Invalid degree window [{lo}, {hi}]")
        self.module = m
        self.resolution = TensorResolution(m.algebra)
        self.cohom = CohomRing(m.algebra)
        super().__init__(self.cohom.ring, lo, hi)
        self.compute()

    def size(self, n: int) -> int:
        return self.resolution.rank(n) * self.module.dim if n >= 0 else 0

    def differential(self, n: int) -> galois.FieldArray:
        if n < 0:
            return self.spec.zeros(self.size(0), 0)
        return self.resolution.cochain_differential(n, self.module)

    def shift(self, n: int, i: int) -> galois.FieldArray:
        return self.resolution.periodicity_shift(n, i, self.module.dim)


@dataclass
class ExtPresentation:
    """
    Truncated presentation of Ext^{>=start}(k, m) over R_red.

    Attributes:
        cohom: The reduced cohomology ring
        generator_degrees: Degrees of the minimal generators
        relation_degrees: Degrees of the minimal relations
        matrix: Rows = generators, columns = relations, polynomial entries
        truncation: Highest degree D used
        start: Lowest Ext degree used (0 or 1)
        stable: Whether no generators or relations appeared late in the window
        dims: dim Ext^n for start <= n <= D
    """
    cohom: CohomRing
    generator_degrees: List[int]
    relation_degrees: List[int]
    matrix: List[List[sympy.Poly]]
    truncation: int
    start: int
    stable: bool
    dims: Dict[int, int]
    presenter: Optional[GradedPresenter] = field(default=None, repr=False)

    def support_ideal(self) -> Ideal:
        if self.presenter is None:
            return fitting_ideal_0(self.cohom.ring, self.matrix, len(self.generator_degrees))
        return self.presenter.support_ideal()

    def to_json(self) -> Dict[str, Any]:
        ring = self.cohom.ring
        return {
            "ring": ring.descriptor(),
            "generator_degrees": list(self.generator_degrees),
            "relation_degrees": list(self.relation_degrees),
            "matrix": [[ring.format(f) for f in row] for row in self.matrix],
            "truncation": self.truncation,
            "start": self.start,
            "stable": self.stable,
        }


def default_truncation(m: FdModule) -> int:
    return 2 * m.dim + 2 * m.r


def ext_start_degree(m: FdModule) -> int:
    """
    Degree 0 is used only when m has no projective summands.

    Otherwise the presentation starts at degree 1 rather than splitting the
    projective summands off. Ext^{>=1} and Ext^{>=0} differ by a
    finite-dimensional piece, so both give the same support.
    """
    return 0 if projective_summand_count(m) == 0 else 1


def present_ext(m: FdModule, truncation: int) -> ExtPresentation:
    start = ext_start_degree(m)
    hi = max(truncation, start)
    complex_ = ExtComplex(m, start, hi)
    data = complex_.module_data()
    presenter = GradedPresenter(data).run()
    presenter.check_hilbert_function()
    return ExtPresentation(
        cohom=complex_.cohom,
        generator_degrees=list(presenter.generator_degrees),
        relation_degrees=presenter.relation_degrees(),
        matrix=presenter.relation_matrix(),
        truncation=hi,
        start=start,
        stable=presenter.is_stable(),
        dims=dict(data.dims),
        presenter=presenter,
    )


def ext_presentation(m: FdModule, truncation: Union[int, str] = "auto") -> ExtPresentation:
    """
    Graded R_red-module presentation of Ext^*(k, m) up to degree D.

    With truncation "auto", D starts at 2 dim m + 2r and is doubled (at most
    twice, never beyond MAX_AUTO_TRUNCATION) while the presentation is not
    stable.
    """
    if truncation == "auto":
        degree = min(default_truncation(m), MAX_AUTO_TRUNCATION)
        presentation = present_ext(m, degree)
        for _ in range(2):
            if presentation.stable or degree >= MAX_AUTO_TRUNCATION:
                break
            degree = min(2 * degree, MAX_AUTO_TRUNCATION)
            presentation = present_ext(m, degree)
        return presentation
    if not isinstance(truncation, int) or truncation < 1:
        raise ValueError(f"Truncation degree must be a positive integer or 'auto', got {truncation!r}")
    return present_ext(m, truncation)
