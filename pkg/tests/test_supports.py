import pytest

from data.loader import DataLoader
from engine.group_modules import (
    ElementaryAbelianAlgebra,
    direct_sum,
    random_module,
    regular_module,
    trivial_module,
    truncated_module,
)
from engine.ideals import Ideal
from engine.polynomials import reduced_ring
from engine.supports import (
    Variety,
    is_proj_empty,
    rank_variety_oracle,
    support_of_module,
    variety_contains,
    variety_equals,
    variety_intersect,
    variety_union,
)


@pytest.fixture
def ring():
    return reduced_ring(2, 2)


def linear(ring, text):
    return Variety(Ideal(ring, [ring.parse(text)]))


def test_trivial_module_has_full_support(ring):
    supp = support_of_module(DataLoader("k_p2_r2").load_module())
    assert supp.generators() == []
    assert variety_equals(supp, Variety.everything(ring))
    assert not is_proj_empty(supp)


def test_free_module_has_origin_support(ring):
    supp = support_of_module(DataLoader("kE_p2_r2").load_module())
    assert variety_equals(supp, Variety.origin(ring))
    assert is_proj_empty(supp)


def test_cyclic_quotient_support(ring):
    supp = support_of_module(DataLoader("kE_mod_z1_p2_r2").load_module())
    assert variety_equals(supp, linear(ring, "x2"))
    assert variety_equals(supp, Variety(DataLoader("ideal_x2_p2_r2").load_ideal()))


def test_shifted_cyclic_module_matches_rank_variety():
    m = DataLoader("shifted_cyclic_p3_r2").load_module()
    ring = reduced_ring(3, 2)
    supp = support_of_module(m)
    assert variety_equals(supp, linear(ring, "x1 + 2*x2"))
    assert variety_equals(supp, rank_variety_oracle(m))


def test_support_of_direct_sum_is_the_union(ring):
    algebra = ElementaryAbelianAlgebra(2, 2)
    m = direct_sum(truncated_module(algebra, [1, 2]), truncated_module(algebra, [2, 1]))
    assert variety_equals(support_of_module(m), linear(ring, "x1*x2"))


def test_projective_summands_do_not_change_support(ring):
    algebra = ElementaryAbelianAlgebra(2, 2)
    m = direct_sum(truncated_module(algebra, [1, 2]), regular_module(algebra))
    assert variety_equals(support_of_module(m), linear(ring, "x2"))


def test_support_records_its_truncation():
    supp = support_of_module(trivial_module(ElementaryAbelianAlgebra(2, 1)), 5)
    assert supp.truncation == 5
    assert supp.to_json()["truncation"] == 5
    assert supp.stable


def test_variety_algebra(ring):
    v1, v2 = linear(ring, "x1"), linear(ring, "x2")
    assert variety_equals(variety_union(v1, v2), linear(ring, "x1*x2"))
    assert variety_equals(variety_intersect(v1, v2), Variety.origin(ring))
    assert variety_contains(Variety.everything(ring), v1)
    assert not variety_contains(v1, v2)
    assert variety_equals(linear(ring, "x1^3"), v1)
    with pytest.raises(ValueError):
        variety_contains(v1, Variety.everything(reduced_ring(2, 3)))


def test_rank_variety_edge_cases(ring):
    algebra = ElementaryAbelianAlgebra(2, 2)
    assert variety_equals(rank_variety_oracle(regular_module(algebra)), Variety.origin(ring))
    assert variety_equals(rank_variety_oracle(trivial_module(algebra)), Variety.everything(ring))


@pytest.mark.parametrize("seed", range(6))
def test_support_agrees_with_rank_variety(seed):
    for p in (2, 3):
        m = random_module(ElementaryAbelianAlgebra(p, 2), seed, 6)
        assert variety_equals(support_of_module(m), rank_variety_oracle(m))
