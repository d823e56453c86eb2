import pytest

from engine.bgg import (
    BggComplex,
    DgModuleHomology,
    build_truncated_J,
    chain_map_space_dim,
    coinduce_to_A,
    cone_identity,
    descent_support,
    expected_ext_A_dims,
    ext_A_hilbert,
    hom_J,
    hom_J_support,
    is_lambda_free,
    kE_as_dg_module,
    kE_support_in_S,
    lambda_dual,
    lambda_quotient,
    lambda_support,
    regular_dg_module,
    restrict_along_phi,
    s_support,
    s_truncated,
    tensor_S_J,
    trivial_dg_module,
)
from engine.dg_algebras import build_koszul_A, build_lambda, verify_quasi_iso
from engine.errors import WindowError
from engine.group_modules import ElementaryAbelianAlgebra, regular_module, trivial_module, truncated_module
from engine.ideals import Ideal
from engine.polynomials import polynomial_ring_S
from engine.supports import Variety, variety_equals


def s_variety(p, r, *texts):
    ring = polynomial_ring_S(p, r)
    return Variety(Ideal(ring, [ring.parse(t) for t in texts]))


@pytest.mark.parametrize("p,r", [(2, 1), (2, 2), (3, 2)])
def test_standard_modules_verify(p, r):
    lam = build_lambda(p, r)
    for module in (trivial_dg_module(lam), regular_dg_module(lam), lambda_dual(p, r),
                   lambda_quotient(p, r, [0])):
        module.verify()
    regular_dg_module(build_koszul_A(p, r)).verify()


def test_lambda_dual_dims():
    dual = lambda_dual(2, 3)
    assert [dual.dim(n) for n in range(4)] == [1, 3, 3, 1]
    assert dual.total_dim() == 8


def test_lambda_quotient_rejects_bad_indices():
    with pytest.raises(ValueError):
        lambda_quotient(2, 2, [2])


@pytest.mark.parametrize("r", [1, 2, 3])
def test_unit_into_J_is_a_quasi_isomorphism(r):
    j = build_truncated_J(r, 4)
    report = verify_quasi_iso(j.unit_map(), (-8, 8))
    assert report.passed
    assert report.certified == [0, 1, 2]


def test_J_needs_positive_bound():
    with pytest.raises(ValueError):
        build_truncated_J(2, 0)


def test_J_window_too_small():
    j = build_truncated_J(2, 4)
    with pytest.raises(WindowError):
        verify_quasi_iso(j.unit_map(), (0, 1))


@pytest.mark.parametrize("r", [1, 2])
def test_hom_J_of_the_dual_is_k(r):
    out = hom_J(lambda_dual(2, r), (-6, 3)).as_complex()
    assert [out.homology_dim(n) for n in range(-4, 2)] == [0, 0, 0, 0, 1, 0]


def test_hom_J_outside_the_range_is_empty():
    out = hom_J(lambda_dual(2, 1), (4, 6))
    assert out.total_dim() == 0
    assert out.notes


def test_hom_J_checks_its_input():
    with pytest.raises(ValueError):
        hom_J(s_truncated(2, 2, [1, 1]), (0, 2))
    with pytest.raises(ValueError):
        hom_J(lambda_dual(2, 2), (3, 1))


ROUND_TRIP_BOUNDS = [(2, 1, [3]), (2, 2, [1, 1]), (2, 2, [2, 1]), (2, 2, [1, 2]), (3, 2, [2, 2])]


@pytest.mark.parametrize("p,r,bounds", ROUND_TRIP_BOUNDS)
def test_hom_J_undoes_tensor_S_J(p, r, bounds):
    n_mod = s_truncated(p, r, bounds)
    lo, hi = n_mod.lo - 2, n_mod.hi + 2
    out = hom_J(tensor_S_J(n_mod), (lo, hi)).as_complex()
    degrees = range(lo + 1, hi)
    assert [out.homology_dim(n) for n in degrees] == [n_mod.dim(n) for n in degrees]


@pytest.mark.parametrize("r,m", [(1, 3), (2, 3), (3, 2)])
def test_hom_J_of_J_has_the_hilbert_function_of_S(r, m):
    j = build_truncated_J(r, m)
    top = 2 * (m - 1)
    out = hom_J(j.module, (-2, top + 2)).as_complex()
    assert [out.homology_dim(n) for n in range(-1, top + 2)] == [0] + expected_ext_A_dims(r, top) + [0]


def test_is_lambda_free():
    assert is_lambda_free(lambda_dual(2, 2))
    assert is_lambda_free(lambda_quotient(3, 2, []))
    assert is_lambda_free(tensor_S_J(s_truncated(2, 2, [2, 1])))
    assert not is_lambda_free(lambda_quotient(2, 2, [0]))
    assert not is_lambda_free(trivial_dg_module(build_lambda(2, 1)))
    with pytest.raises(ValueError):
        is_lambda_free(s_truncated(2, 2, [1, 1]))


@pytest.mark.parametrize("p,r,bounds", ROUND_TRIP_BOUNDS)
def test_hom_J_and_ext_present_the_same_module(p, r, bounds):
    module = tensor_S_J(s_truncated(p, r, bounds))
    lo, top = module.lo, module.hi + 2
    ext = BggComplex(module, lo, top)
    maps = DgModuleHomology(hom_J(module, (lo - 1, top + 1)), lo, top)
    assert [maps.dim(n) for n in range(lo, top + 1)] == [ext.dim(n) for n in range(lo, top + 1)]
    assert variety_equals(hom_J_support(module, top), lambda_support(module, top))


def test_hom_J_support_of_the_regular_module():
    module = regular_dg_module(build_lambda(2, 2))
    assert variety_equals(hom_J_support(module, 4), Variety.origin(polynomial_ring_S(2, 2)))


def test_hom_J_support_of_k_is_not_its_lambda_support():
    # Hom_Λ(J, k) lives below degree 0, so nothing survives in the window
    module = trivial_dg_module(build_lambda(2, 2))
    ring = polynomial_ring_S(2, 2)
    assert variety_equals(hom_J_support(module, 6), Variety.origin(ring))
    assert variety_equals(lambda_support(module, 6), Variety.everything(ring))
    with pytest.raises(ValueError):
        hom_J_support(module, -1)


@pytest.mark.parametrize("r", [1, 2, 3])
def test_tensor_with_J_of_k_is_the_dual(r):
    out = tensor_S_J(s_truncated(2, r, [1] * r))
    expected = lambda_dual(2, r)
    assert [out.dim(n) for n in range(r + 1)] == [expected.dim(n) for n in range(r + 1)]


def test_tensor_S_J_needs_an_S_module():
    with pytest.raises(ValueError):
        tensor_S_J(lambda_dual(2, 2))


def test_s_truncated_bounds():
    module = s_truncated(3, 2, [2, 3])
    assert module.total_dim() == 6
    assert variety_equals(s_support(module), Variety.origin(polynomial_ring_S(3, 2)))
    with pytest.raises(ValueError):
        s_truncated(2, 2, [0, 1])


@pytest.mark.parametrize("p,r", [(2, 2), (3, 2)])
def test_lambda_supports_of_standard_modules(p, r):
    ring = polynomial_ring_S(p, r)
    lam = build_lambda(p, r)
    assert variety_equals(lambda_support(trivial_dg_module(lam), 8), Variety.everything(ring))
    assert variety_equals(lambda_support(regular_dg_module(lam), 8), Variety.origin(ring))
    assert variety_equals(lambda_support(lambda_quotient(p, r, [0]), 8), s_variety(p, r, "x2"))
    assert variety_equals(lambda_support(lambda_quotient(p, r, [1]), 8), s_variety(p, r, "x1"))


def test_lambda_support_of_finite_S_module_is_the_origin():
    module = tensor_S_J(s_truncated(2, 2, [2, 1]))
    assert variety_equals(lambda_support(module, 8), Variety.origin(polynomial_ring_S(2, 2)))


def test_lambda_support_truncation_must_reach_the_module():
    with pytest.raises(ValueError):
        lambda_support(regular_dg_module(build_lambda(2, 2)), -5)


def test_cone_of_identity_is_contractible():
    cone = cone_identity(lambda_quotient(2, 2, [1]))
    assert all(d == 0 for d in cone.as_complex().homology_dims().values())


@pytest.mark.parametrize("p,r", [(2, 1), (2, 2), (3, 1), (3, 2)])
def test_ext_A_has_the_hilbert_series_of_S(p, r):
    assert ext_A_hilbert(p, r, 6) == expected_ext_A_dims(r, 6)


def test_ext_A_dims_at_rank_two():
    assert expected_ext_A_dims(2, 4) == [1, 0, 2, 0, 3]
    with pytest.raises(ValueError):
        ext_A_hilbert(2, 2, -1)


def test_coinduction_dimension_and_adjunction():
    algebra = ElementaryAbelianAlgebra(2, 2)
    module = truncated_module(algebra, [1, 2])
    coinduced = coinduce_to_A(module)
    assert coinduced.total_dim() == 8
    coinduced.verify()
    regular = regular_dg_module(build_koszul_A(2, 2))
    left = chain_map_space_dim(regular, coinduced)
    right = chain_map_space_dim(regular, kE_as_dg_module(module), generators=range(2))
    assert left == right
    with pytest.raises(ValueError):
        coinduce_to_A(module, p=3)


def test_restriction_along_phi_of_k():
    k_lambda = restrict_along_phi(trivial_dg_module(build_koszul_A(3, 2)))
    assert k_lambda.algebra.kind == "lambda"
    assert k_lambda.total_dim() == 1
    with pytest.raises(ValueError):
        restrict_along_phi(lambda_dual(3, 2))


@pytest.mark.parametrize("p", [2, 3])
def test_descent_matches_the_kE_support(p):
    algebra = ElementaryAbelianAlgebra(p, 2)
    for module in (trivial_module(algebra), regular_module(algebra)):
        assert variety_equals(descent_support(module, 8), kE_support_in_S(module))


def test_kE_support_moves_to_S_by_degree_doubling():
    algebra = ElementaryAbelianAlgebra(2, 2)
    supp = kE_support_in_S(truncated_module(algebra, [1, 2]))
    assert supp.ring.gen_degree == 2
    assert variety_equals(supp, s_variety(2, 2, "x2"))


def test_dg_module_json():
    document = lambda_dual(2, 1).to_json()
    assert document["algebra"] == {"kind": "lambda", "p": 2, "r": 1}
    assert document["dims"] == {"0": 1, "1": 1}
    assert "xi1@1" in document["actions"]
