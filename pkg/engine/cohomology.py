"""
Cohomology Ring and Koszul Modules.

The polynomial generators x_1..x_r of reduced cohomology are the periodicity
classes of the explicit resolution of k: the functional dual to e_{d e_i}
with d = 1 at p = 2 and d = 2 at odd p.
"""

from math import comb
from typing import List, Sequence, Tuple

import sympy

from engine.errors import VerificationError
from engine.finite_field import column_space, hstack, mat_kernel, mat_rank
from engine.ext import CohomRing, ExtComplex
from engine.group_modules import (
    ElementaryAbelianAlgebra,
    FdModule,
    free_module,
    subquotient_module,
    tensor_diagonal,
    trivial_module,
)
from engine.resolutions import Cocycle, TensorResolution


def cohomology_dimension(p: int, r: int, n: int) -> int:
    """dim H^n(E, k) for E = (Z/p)^r: the number of multi-indices of size n."""
    if n < 0:
        return 0
    return comb(n + r - 1, r - 1)


def reduced_dimension(p: int, r: int, n: int) -> int:
    """dim of the degree-n part of k[x_1..x_r] in the reduced grading."""
    step = 1 if p == 2 else 2
    if n < 0 or n % step:
        return 0
    return comb(n // step + r - 1, r - 1)


def generator_cocycle(algebra: ElementaryAbelianAlgebra, i: int) -> Cocycle:
    """The periodicity class x_i as a functional on P_d."""
    return linear_cocycle(algebra, [int(k == i) for k in range(algebra.r)])


def linear_cocycle(algebra: ElementaryAbelianAlgebra, coefficients: Sequence[int]) -> Cocycle:
    """sum_i c_i x_i as a functional on P_d."""
    if len(coefficients) != algebra.r:
        raise ValueError(f"Need {algebra.r} coefficients, got {len(coefficients)}")
    res = TensorResolution(algebra)
    d = res.period
    index = res.index(d)
    functional = algebra.field.gf.Zeros(res.rank(d))
    for i, c in enumerate(coefficients):
        exponents = [0] * algebra.r
        exponents[i] = d
        functional[index[tuple(exponents)]] = int(c) % algebra.p
    return Cocycle(d, functional)


def cocycle_linear_form(algebra: ElementaryAbelianAlgebra, zeta: Cocycle) -> sympy.Poly:
    """
    The polynomial sum_i c_i x_i represented by a periodicity-class cocycle.

    Raises:
        ValueError: If zeta has components outside the periodicity classes
    """
    res = TensorResolution(algebra)
    ring = CohomRing(algebra).ring
    d = res.period
    if zeta.degree != d:
        raise ValueError(f"Cocycle has degree {zeta.degree}, expected {d}")
    poly = ring.zero()
    for a, value in zip(res.generators(d), zeta.functional):
        c = int(value)
        if not c:
            continue
        if max(a) != d:
            raise ValueError(f"Cocycle has a component on e_{a}, which is not a periodicity class")
        poly = poly + ring.monomial([int(v == d) for v in a], c)
    return poly


def cohomology_ring(algebra: ElementaryAbelianAlgebra, truncation: int) -> Tuple[CohomRing, List[Cocycle]]:
    """
    Reduced cohomology ring with its generator cocycles, verified up to D.

    Checks that dim H^n(E, k) matches the closed form and that the monomials
    in the generators, applied to 1 in H^0 by the periodicity action, stay
    linearly independent in every degree up to D.

    Raises:
        ValueError: If D is below the generator degree
        VerificationError: If either check fails
    """
    cohom = CohomRing(algebra)
    d = cohom.gen_degree
    if truncation < d:
        raise ValueError(f"Truncation {truncation} is below the generator degree {d}")
    complex_ = ExtComplex(trivial_module(algebra), 0, truncation)
    for n in range(truncation + 1):
        expected = cohomology_dimension(algebra.p, algebra.r, n)
        if complex_.dim(n) != expected:
            raise VerificationError(
                f"dim H^{n} = {complex_.dim(n)}, expected {expected}"
            )
    ring = cohom.ring
    images = {(0,) * algebra.r: algebra.field.identity(1)}
    for weight in range(1, truncation // d + 1):
        degree = weight * d
        current = {}
        for mu in ring.monomials_of_weight(weight):
            i = next(k for k, a in enumerate(mu) if a)
            lower = list(mu)
            lower[i] -= 1
            current[mu] = complex_.action(degree - d, i) @ images[tuple(lower)]
        if mat_rank(hstack(list(current.values()))) != len(current):
            raise VerificationError(f"Monomials of degree {degree} are linearly dependent")
        images = current
    cocycles = [generator_cocycle(algebra, i) for i in range(algebra.r)]
    return cohom, cocycles


def koszul_generator_module(algebra: ElementaryAbelianAlgebra, zeta: Cocycle) -> FdModule:
    """
    L_ζ = ker(ζ: Ω^d k -> k), realised as ker(ζ̃ on P_d) / im ∂_{d+1}.

    Raises:
        ValueError: If zeta is zero or a coboundary
    """
    res = TensorResolution(algebra)
    d = zeta.degree
    if len(zeta.functional) != res.rank(d):
        raise ValueError(f"Cocycle of degree {d} needs {res.rank(d)} values")
    if zeta.is_zero():
        raise ValueError("Cannot build a Koszul module from the zero class")
    materialized = res.as_minimal_resolution(d + 1)
    zeta.check(materialized)
    if d >= 1:
        delta = res.cochain_differential(d - 1, trivial_module(algebra))
        if mat_rank(hstack([delta, zeta.functional.reshape(-1, 1)])) == mat_rank(delta):
            raise ValueError("Cocycle is a coboundary")
    upper = mat_kernel(zeta.extended(algebra))
    lower = column_space(res.differential(d + 1))
    return subquotient_module(free_module(algebra, res.rank(d)), upper, lower)


def koszul_module(m: FdModule, zeta: Cocycle) -> FdModule:
    """m ⊗ L_ζ with the group diagonal action."""
    return tensor_diagonal(m, koszul_generator_module(m.algebra, zeta), "group")
