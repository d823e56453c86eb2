"""
Theorem Checkers.

Each checker computes the varieties on both sides of a support identity and
returns a CheckReport. A failing comparison is a result, not an exception.
"""

import time
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

from engine.bgg import (
    DgModule,
    build_truncated_J,
    chain_map_space_dim,
    coinduce_to_A,
    descent_support,
    expected_ext_A_dims,
    ext_A_hilbert,
    hom_J_support,
    is_lambda_free,
    kE_as_dg_module,
    kE_support_in_S,
    lambda_support,
    regular_dg_module,
    trivial_dg_module,
)
from engine.cohomology import cocycle_linear_form, koszul_module
from engine.dg_algebras import build_koszul_A, build_lambda, phi_lambda_to_A, verify_quasi_iso
from engine.group_modules import (
    ElementaryAbelianAlgebra,
    FdModule,
    SubgroupEmbedding,
    induce,
    is_projective,
    regular_module,
    restrict,
    tensor_diagonal,
    trivial_module,
    truncated_module,
)
from engine.ideals import Ideal, restriction_map, ringmap_apply, ringmap_kernel_mod
from engine.p_groups import GroupModule, group_module_is_projective, restrict_to_elementary
from engine.polynomials import polynomial_ring_S, reduced_ring
from engine.resolutions import Cocycle
from engine.supports import (
    Variety,
    is_proj_empty,
    rank_variety_oracle,
    support_of_module,
    variety_contains,
    variety_equals,
    variety_intersect,
)


@dataclass
class CheckReport:
    """Outcome of one theorem check."""
    kind: str
    passed: bool
    varieties: Dict[str, List[str]] = field(default_factory=dict)
    truncations: List[int] = field(default_factory=list)
    details: Dict[str, Any] = field(default_factory=dict)
    seconds: float = 0.0

    def to_json(self) -> Dict[str, Any]:
        return {
            "kind": self.kind,
            "passed": self.passed,
            "varieties": self.varieties,
            "truncations": self.truncations,
            "details": self.details,
            "seconds": round(self.seconds, 4),
        }


def _record(report: CheckReport, name: str, v: Variety) -> None:
    report.varieties[name] = v.generators()
    if v.truncation is not None:
        report.truncations.append(v.truncation)


def check_tensor_theorem(m: FdModule, n: FdModule, hopf: str = "group",
                         truncation: Union[int, str] = "auto") -> CheckReport:
    """supp(m ⊗ n) = supp(m) ∩ supp(n)."""
    start = time.perf_counter()
    report = CheckReport("tensor", False)
    supp_m = support_of_module(m, truncation)
    supp_n = support_of_module(n, truncation)
    product = tensor_diagonal(m, n, hopf)
    supp_product = support_of_module(product, truncation)
    expected = variety_intersect(supp_m, supp_n)
    _record(report, "supp_m", supp_m)
    _record(report, "supp_n", supp_n)
    _record(report, "supp_tensor", supp_product)
    report.passed = variety_equals(supp_product, expected)
    report.details = {"hopf": hopf, "dims": [m.dim, n.dim, product.dim]}
    report.seconds = time.perf_counter() - start
    return report


def check_subgroup_theorem(m: FdModule, e: SubgroupEmbedding,
                           truncation: Union[int, str] = "auto") -> CheckReport:
    """supp(m restricted to E') = preimage of supp(m) under res*, i.e. V(res(I))."""
    start = time.perf_counter()
    report = CheckReport("subgroup", False)
    big = reduced_ring(e.p, e.target_rank)
    small = reduced_ring(e.p, e.source_rank)
    res = restriction_map(big, small, e.matrix)
    supp_m = support_of_module(m, truncation)
    supp_restricted = support_of_module(restrict(m, e), truncation)
    expected = Variety(ringmap_apply(res, supp_m.ideal))
    _record(report, "supp_m", supp_m)
    _record(report, "supp_restricted", supp_restricted)
    _record(report, "preimage", expected)
    report.passed = variety_equals(supp_restricted, expected)
    report.details = {"embedding": [list(row) for row in e.matrix]}
    report.seconds = time.perf_counter() - start
    return report


def check_induction_support(n: FdModule, e: SubgroupEmbedding,
                            truncation: Union[int, str] = "auto") -> CheckReport:
    """supp(induce(n)) = res*(supp n), the variety of the kernel of R_E -> R_E'/I."""
    start = time.perf_counter()
    report = CheckReport("induction", False)
    big = reduced_ring(e.p, e.target_rank)
    small = reduced_ring(e.p, e.source_rank)
    res = restriction_map(big, small, e.matrix)
    supp_n = support_of_module(n, truncation)
    induced = induce(n, e)
    supp_induced = support_of_module(induced, truncation)
    expected = Variety(ringmap_kernel_mod(res, supp_n.ideal))
    _record(report, "supp_n", supp_n)
    _record(report, "supp_induced", supp_induced)
    _record(report, "image", expected)
    report.passed = variety_equals(supp_induced, expected)
    report.details = {"embedding": [list(row) for row in e.matrix], "induced_dim": induced.dim}
    report.seconds = time.perf_counter() - start
    return report


def check_chouinard(m: GroupModule, subgroups: Sequence[Sequence[int]]) -> CheckReport:
    """
    m is projective iff its restriction to every listed elementary abelian
    subgroup is projective.

    Raises:
        ValueError: If a listed subgroup is not elementary abelian
    """
    start = time.perf_counter()
    report = CheckReport("chouinard", False)
    projective = group_module_is_projective(m)
    restricted = [is_projective(restrict_to_elementary(m, elements)) for elements in subgroups]
    report.passed = projective == all(restricted)
    report.details = {
        "group": m.group.name,
        "projective": projective,
        "restrictions_projective": restricted,
    }
    report.seconds = time.perf_counter() - start
    return report


def check_projectivity_support(m: FdModule, truncation: Union[int, str] = "auto") -> CheckReport:
    """is_proj_empty(supp m) iff m is projective."""
    start = time.perf_counter()
    report = CheckReport("projectivity", False)
    supp = support_of_module(m, truncation)
    _record(report, "supp_m", supp)
    report.passed = is_proj_empty(supp) == is_projective(m)
    report.details = {"projective": is_projective(m)}
    report.seconds = time.perf_counter() - start
    return report


def thick_membership(m: FdModule, v: Variety, truncation: Union[int, str] = "auto") -> bool:
    """True iff supp(m) ⊆ V, the membership test for the thick subcategory of V."""
    return variety_contains(v, support_of_module(m, truncation))


def check_koszul_law(m: FdModule, zeta: Cocycle, truncation: Union[int, str] = "auto") -> CheckReport:
    """supp(m ⊗ L_ζ) = supp(m) ∩ V(ζ)."""
    start = time.perf_counter()
    report = CheckReport("koszul", False)
    form = cocycle_linear_form(m.algebra, zeta)
    supp_m = support_of_module(m, truncation)
    koszul = koszul_module(m, zeta)
    supp_koszul = support_of_module(koszul, truncation)
    expected = variety_intersect(supp_m, Variety(Ideal(supp_m.ring, [form])))
    _record(report, "supp_m", supp_m)
    _record(report, "supp_koszul", supp_koszul)
    report.varieties["zeta"] = [supp_m.ring.format(form)]
    report.passed = variety_equals(supp_koszul, expected)
    report.details = {"koszul_dim": koszul.dim}
    report.seconds = time.perf_counter() - start
    return report


def check_oracle(m: FdModule, truncation: Union[int, str] = "auto") -> CheckReport:
    """The Ext support agrees with the rank variety."""
    start = time.perf_counter()
    report = CheckReport("oracle", False)
    supp = support_of_module(m, truncation)
    oracle = rank_variety_oracle(m)
    _record(report, "supp_m", supp)
    _record(report, "rank_variety", oracle)
    report.passed = variety_equals(supp, oracle)
    report.details = {"dim": m.dim, "stable": supp.stable}
    report.seconds = time.perf_counter() - start
    return report


def check_bgg_chain(p: int, r: int, m: int = 4, window: Tuple[int, int] = (-8, 8)) -> CheckReport:
    """
    The dg chain at (p, r): φ: Λ -> A is a quasi-isomorphism, k -> J is one
    in the certified degrees, Ext_A(k, k) has the Hilbert series of S, the
    coinduction adjunction holds on A itself, Λ-supports of the standard
    modules come out as expected and the kE-support of k and kE survives
    the passage to Λ. Supports are truncated at the top of the window.
    """
    start = time.perf_counter()
    report = CheckReport("bgg", False)
    checks: Dict[str, bool] = {}
    truncation = max(window[1], 2)

    phi = phi_lambda_to_A(p, r)
    phi_report = verify_quasi_iso(phi.chain_map(), window)
    checks["phi_quasi_iso"] = phi_report.passed

    j = build_truncated_J(r, m, p)
    unit_report = verify_quasi_iso(j.unit_map(), window)
    checks["unit_quasi_iso"] = unit_report.passed

    dims = ext_A_hilbert(p, r, truncation)
    checks["ext_A_hilbert"] = dims == expected_ext_A_dims(r, truncation)

    algebra = ElementaryAbelianAlgebra(p, r)
    regular = regular_dg_module(build_koszul_A(p, r))
    module = truncated_module(algebra, [1] + [p] * (r - 1))
    left = chain_map_space_dim(regular, coinduce_to_A(module))
    right = chain_map_space_dim(
        regular, kE_as_dg_module(module), generators=range(r),
    )
    checks["coinduction_adjunction"] = left == right

    ring = polynomial_ring_S(p, r)
    expected = {
        "lambda_trivial": (trivial_dg_module(build_lambda(p, r)), Variety.everything(ring)),
        "lambda_free": (regular_dg_module(build_lambda(p, r)), Variety.origin(ring)),
    }
    for name, (lam_module, variety) in expected.items():
        supp = lambda_support(lam_module, truncation)
        _record(report, name, supp)
        checks[name] = variety_equals(supp, variety)

    for name, kE_module in (("descent_trivial", trivial_module(algebra)),
                            ("descent_free", regular_module(algebra))):
        descended = descent_support(kE_module, truncation)
        _record(report, name, descended)
        checks[name] = variety_equals(descended, kE_support_in_S(kE_module))

    report.passed = all(checks.values())
    report.details = {
        "p": p,
        "r": r,
        "m": m,
        "window": list(window),
        "checks": checks,
        "phi": phi_report.to_json(),
        "unit": unit_report.to_json(),
        "ext_A_dims": dims,
        "adjunction_dims": [left, right],
    }
    report.seconds = time.perf_counter() - start
    return report


def check_bgg_bridge(m: DgModule, truncations: Sequence[int],
                     expected: Optional[Variety] = None) -> CheckReport:
    """
    The Λ-support of m does not depend on the truncation, and agrees with
    `expected` when given (the S-support of N for m = N ⊗_S J). When m is
    free over Λ it also agrees with the S-support of H(Hom_Λ(J, m)).
    """
    start = time.perf_counter()
    report = CheckReport("bgg_bridge", False)
    supports = []
    for d in truncations:
        supp = lambda_support(m, d)
        _record(report, f"lambda_support_D{d}", supp)
        supports.append(supp)
    passed = all(variety_equals(supports[0], other) for other in supports[1:])
    if expected is not None:
        report.varieties["expected"] = expected.generators()
        passed = passed and variety_equals(supports[0], expected)
    free = is_lambda_free(m)
    if free:
        maps = hom_J_support(m, truncations[0])
        _record(report, "hom_J_support", maps)
        passed = passed and variety_equals(supports[0], maps)
    report.passed = passed
    report.details = {"degrees": m.degrees(), "total_dim": m.total_dim(), "lambda_free": free}
    report.seconds = time.perf_counter() - start
    return report
