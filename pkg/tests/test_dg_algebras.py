import pytest

from engine.dg_algebras import (
    KOSZUL_A,
    DgAlgebra,
    build_koszul_A,
    build_lambda,
    build_poly_S,
    certified_degrees,
    dual_action,
    identity_map,
    merge_sign,
    phi_lambda_to_A,
    subsets,
    verify_quasi_iso,
)
from engine.errors import WindowError


def test_subsets_order():
    assert subsets(2) == [(), (0,), (1,), (0, 1)]
    assert len(subsets(4)) == 16


def test_exterior_signs():
    assert merge_sign((0,), (1,)) == 1
    assert merge_sign((1,), (0,)) == -1
    assert merge_sign((0, 2), (1,)) == -1
    assert merge_sign((0,), (0, 1)) == 0


def test_dual_action_signs():
    assert dual_action((0,), (0, 1)) == (1, (1,))
    assert dual_action((1,), (0, 1)) == (-1, (0,))
    assert dual_action((0,), (1,)) is None
    # odd times odd picks up the Koszul sign
    assert dual_action((0,), (0,)) == (-1, ())


def test_algebra_dimensions():
    assert build_lambda(2, 3).dim == 8
    assert build_koszul_A(3, 2).dim == 36
    assert build_poly_S(2, 2, 2).dim == 6
    assert build_poly_S(2, 2, 2).degree_range() == (0, 4)


def test_unknown_kind_rejected():
    with pytest.raises(ValueError):
        DgAlgebra("weyl", 2, 2)
    with pytest.raises(ValueError):
        DgAlgebra(KOSZUL_A, 2, 0)


def test_koszul_window_must_cover_the_algebra():
    with pytest.raises(ValueError):
        build_koszul_A(2, 2, (-1, 0))
    assert build_koszul_A(2, 2, (-2, 0)).r == 2


def test_lambda_products():
    lam = build_lambda(2, 2)
    assert lam.product((0,), (0,)) is None
    assert lam.product((1,), (0,)) == (-1, (0, 1))
    assert lam.format((0, 1)) == "xi1*xi2"


def test_koszul_differential():
    koszul = build_koszul_A(3, 2)
    y1 = koszul.generator_label(2)
    assert koszul.differential(y1) == {((1, 0), ()): 1}
    # z1^2 y1 is a cycle at p = 3
    assert koszul.differential(((2, 0), (0,))) == {}
    assert koszul.format(((2, 0), (0,))) == "z1^2*y1"


@pytest.mark.parametrize("p,r", [(2, 1), (2, 2), (3, 2), (5, 1)])
def test_koszul_algebra_has_exterior_homology(p, r):
    homology = build_koszul_A(p, r).as_complex().homology_dims()
    assert homology == {-k: len([s for s in subsets(r) if len(s) == k]) for k in range(r + 1)}


def test_socle_degrees():
    assert build_lambda(2, 3).socle_degree() == -3
    assert build_koszul_A(3, 2).socle_degree() == -2
    with pytest.raises(ValueError):
        build_poly_S(2, 2, 3).socle_degree()


@pytest.mark.parametrize("p,r", [(2, 1), (2, 2), (3, 1), (3, 2), (5, 2)])
def test_phi_is_a_quasi_isomorphism(p, r):
    phi = phi_lambda_to_A(p, r)
    assert phi.is_multiplicative()
    assert phi.commutes_with_differential()
    report = verify_quasi_iso(phi.chain_map(), (-8, 8))
    assert report.passed
    assert report.certified == list(range(-r, 1))


def test_identity_is_a_chain_map():
    c = build_koszul_A(2, 2).as_complex()
    c.verify()
    assert identity_map(c).is_chain_map()


def test_truncated_complex_certifies_interior_only():
    s = build_poly_S(2, 1, 3).as_complex()
    assert s.truncated
    assert certified_degrees(identity_map(s)) == list(range(1, 6))


def test_window_error_when_nothing_is_certified():
    phi = phi_lambda_to_A(2, 2)
    with pytest.raises(WindowError):
        verify_quasi_iso(phi.chain_map(), (5, 6))


def test_complex_json():
    document = build_lambda(2, 1).as_complex().to_json()
    assert document["window"] == [-1, 0]
    assert document["dims"] == {"-1": 1, "0": 1}
    assert document["truncated"] is False


def test_comultiplication_tags():
    assert build_lambda(2, 2).comultiplication == "lie"
    assert build_koszul_A(3, 1).comultiplication == "lie"
    assert build_poly_S(2, 2, 2).comultiplication is None
