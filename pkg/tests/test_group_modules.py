import numpy as np
import pytest

from engine.finite_field import FieldSpec, mat_rank, random_invertible, to_int_lists
from engine.group_modules import (
    ElementaryAbelianAlgebra,
    FdModule,
    SubgroupEmbedding,
    conjugate,
    direct_sum,
    dual_module,
    free_module,
    hom_space_dim,
    induce,
    is_module_map,
    is_projective,
    projective_summand_count,
    quotient_module,
    radical_basis,
    random_embedding,
    random_module,
    reciprocity_maps,
    regular_module,
    restrict,
    syzygy,
    tensor_diagonal,
    top_dimension,
    trivial_module,
    truncated_module,
    zero_module,
)
from engine.supports import rank_variety_oracle, support_of_module, variety_equals


@pytest.fixture
def kE22():
    return ElementaryAbelianAlgebra(2, 2)


def test_regular_module_basis_order(kE22):
    z1, z2 = regular_module(kE22).z
    # basis (0,0), (0,1), (1,0), (1,1)
    assert int(z1[2, 0]) == 1 and int(z1[3, 1]) == 1
    assert int(z2[1, 0]) == 1 and int(z2[3, 2]) == 1
    assert int(np.asarray(z1.view(np.ndarray)).sum()) == 2


def test_projectivity_and_top(kE22):
    assert is_projective(regular_module(kE22))
    assert is_projective(zero_module(kE22))
    assert not is_projective(trivial_module(kE22))
    assert top_dimension(free_module(kE22, 3)) == 3
    assert projective_summand_count(direct_sum(regular_module(kE22), trivial_module(kE22))) == 1


def test_truncated_module_shapes(kE22):
    assert truncated_module(kE22, [1, 1]).dim == 1
    assert truncated_module(kE22, [2, 2]).dim == 4
    m = truncated_module(kE22, [1, 2])
    assert m.dim == 2
    assert not np.any(m.z[0].view(np.ndarray))
    with pytest.raises(ValueError):
        truncated_module(kE22, [3, 1])


def test_module_invariants_are_checked(kE22):
    gf = kE22.field.gf
    a = gf([[0, 1], [0, 0]])
    b = gf([[0, 0], [1, 0]])
    with pytest.raises(ValueError, match="commute"):
        FdModule(kE22, (a, b))
    with pytest.raises(ValueError, match="not zero"):
        FdModule(ElementaryAbelianAlgebra(2, 1), (gf([[1]]),))
    with pytest.raises(ValueError):
        FdModule(kE22, (a,))


def test_module_json(kE22):
    m = truncated_module(kE22, [2, 1])
    again = FdModule.from_json(m.to_json())
    assert again.to_json() == m.to_json()
    bad = m.to_json()
    bad["z_actions"][0][0][0] = 2
    with pytest.raises(ValueError):
        FdModule.from_json(bad)
    with pytest.raises(ValueError):
        FdModule.from_json({"p": 2, "rank": 2, "dim": 3, "z_actions": m.to_json()["z_actions"]})
    with pytest.raises(ValueError):
        FdModule.from_json({"p": 2, "rank": 2})


def test_tensor_with_free_is_free(kE22):
    for hopf in ("group", "lie"):
        t = tensor_diagonal(regular_module(kE22), truncated_module(kE22, [1, 2]), hopf)
        assert t.dim == 8
        assert is_projective(t)
    with pytest.raises(ValueError):
        tensor_diagonal(trivial_module(kE22), trivial_module(kE22), "hopf")
    with pytest.raises(ValueError):
        tensor_diagonal(trivial_module(kE22), trivial_module(ElementaryAbelianAlgebra(2, 1)))


def test_dual_keeps_dimension_and_projectivity():
    algebra = ElementaryAbelianAlgebra(3, 2)
    assert is_projective(dual_module(regular_module(algebra)))
    m = truncated_module(algebra, [2, 3])
    assert dual_module(m).dim == m.dim
    assert top_dimension(dual_module(m)) == 1


def test_syzygy_dimensions():
    for p, r in [(2, 1), (2, 2), (3, 2)]:
        algebra = ElementaryAbelianAlgebra(p, r)
        assert syzygy(trivial_module(algebra)).dim == p ** r - 1
        assert syzygy(regular_module(algebra)).dim == 0


def test_hom_spaces(kE22):
    k, kE = trivial_module(kE22), regular_module(kE22)
    assert hom_space_dim(k, kE) == 1
    assert hom_space_dim(kE, k) == 1
    assert hom_space_dim(kE, kE) == 4


def test_quotient_by_radical_is_trivial(kE22):
    kE = regular_module(kE22)
    top = quotient_module(kE, radical_basis(kE))
    assert top.dim == 1
    assert not np.any(top.z[0].view(np.ndarray))


def test_restriction_of_free_module_is_free(kE22):
    e = SubgroupEmbedding.coordinate(2, 2, [0])
    res = restrict(regular_module(kE22), e)
    assert res.r == 1 and res.dim == 4
    assert is_projective(res)
    with pytest.raises(ValueError):
        restrict(trivial_module(ElementaryAbelianAlgebra(2, 1)), e)


def test_induction_from_coordinate_subgroup(kE22):
    e = SubgroupEmbedding.coordinate(2, 2, [0])
    n = trivial_module(e.source)
    ind = induce(n, e)
    # kE ⊗ k over k<g1> is kE/(z1)
    assert ind.dim == 2
    assert not np.any(ind.z[0].view(np.ndarray))
    assert mat_rank(ind.z[1]) == 1
    assert is_projective(induce(regular_module(e.source), e))


@pytest.mark.parametrize("seed", range(5))
def test_reciprocity_maps_split(seed):
    p, r = 3, 2
    e = random_embedding(p, r, 1, seed)
    n = random_module(e.source, seed, 4)
    inclusion, projection = reciprocity_maps(n, e)
    back = restrict(induce(n, e), e)
    assert is_module_map(inclusion, n, back)
    assert is_module_map(projection, back, n)
    assert np.array_equal(projection @ inclusion, n.identity())


def test_embedding_validation():
    with pytest.raises(ValueError):
        SubgroupEmbedding(2, ((1, 1), (1, 1)))
    with pytest.raises(ValueError):
        SubgroupEmbedding(2, ())
    assert SubgroupEmbedding.identity(3, 2).source_rank == 2
    e = SubgroupEmbedding.from_json({"matrix": [[1], [0]]}, 2)
    assert e.to_json() == {"matrix": [[1], [0]]}
    with pytest.raises(ValueError):
        SubgroupEmbedding.from_json({}, 2)


def test_random_embedding_is_deterministic():
    assert random_embedding(3, 3, 2, 7) == random_embedding(3, 3, 2, 7)
    assert random_embedding(2, 3, 3, 1).source_rank == 3
    with pytest.raises(ValueError):
        random_embedding(2, 2, 0, 1)


@pytest.mark.parametrize("seed", range(10))
def test_random_module_is_deterministic_and_bounded(seed):
    algebra = ElementaryAbelianAlgebra(2, 2)
    m = random_module(algebra, seed, 6)
    assert 1 <= m.dim <= 6
    assert m.to_json() == random_module(algebra, seed, 6).to_json()


def test_random_module_rejects_empty_bound(kE22):
    with pytest.raises(ValueError):
        random_module(kE22, 0, 0)


def test_conjugate_keeps_isomorphism_type(kE22):
    m = truncated_module(kE22, [2, 1])
    t = random_invertible(FieldSpec(2), m.dim, np.random.default_rng(3))
    c = conjugate(m, t)
    assert is_module_map(t, m, c)
    assert to_int_lists(c.z[1]) == [[0, 0], [0, 0]]


def test_random_modules_reach_large_tops_and_both_projectivity_types(kE22):
    samples = [random_module(kE22, seed, 8) for seed in range(1, 101)]
    assert {is_projective(m) for m in samples} == {True, False}
    assert max(top_dimension(m) for m in samples) >= 4
    assert all(1 <= m.dim <= 8 for m in samples)


@pytest.mark.parametrize("seed", range(6))
def test_syzygy_ignores_projective_summands(kE22, seed):
    m = random_module(kE22, seed, 5)
    plain = syzygy(m)
    padded = syzygy(direct_sum(m, regular_module(kE22)))
    assert padded.dim == plain.dim
    assert projective_summand_count(padded) == projective_summand_count(plain) == 0
    assert hom_space_dim(plain, padded) == hom_space_dim(plain, plain) == hom_space_dim(padded, padded)


@pytest.mark.parametrize("seed", range(4))
def test_syzygy_keeps_the_rank_variety(kE22, seed):
    samples = [random_module(kE22, 10 * seed + k, 3) for k in range(10)]
    for m in [m for m in samples if not is_projective(m)][:2]:
        assert variety_equals(rank_variety_oracle(syzygy(m)), rank_variety_oracle(m))


@pytest.mark.parametrize("p", [2, 3])
def test_syzygy_keeps_the_support(p):
    algebra = ElementaryAbelianAlgebra(p, 2)
    for m in (trivial_module(algebra), truncated_module(algebra, [p, 1])):
        assert variety_equals(support_of_module(syzygy(m), 6), support_of_module(m, 6))


@pytest.mark.parametrize("seed", range(4))
def test_induction_commutes_with_tensor_products(seed):
    algebra = ElementaryAbelianAlgebra(2, 2)
    e = random_embedding(2, 2, 1, seed)
    m = random_module(algebra, seed, 3)
    n = random_module(e.source, seed + 50, 2)
    left = induce(tensor_diagonal(restrict(m, e), n), e)
    right = tensor_diagonal(m, induce(n, e))
    assert left.dim == right.dim
    assert projective_summand_count(left) == projective_summand_count(right)
    assert top_dimension(left) == top_dimension(right)
    assert hom_space_dim(left, right) == hom_space_dim(right, right)


@pytest.mark.parametrize("p,seed", [(2, s) for s in range(5)] + [(3, s) for s in range(5)])
def test_duality_preserves_projectivity(p, seed):
    m = random_module(ElementaryAbelianAlgebra(p, 2), seed, p ** 2)
    dual = dual_module(m)
    assert dual.dim == m.dim
    assert is_projective(dual) == is_projective(m)
    assert projective_summand_count(dual) == projective_summand_count(m)


@pytest.mark.parametrize("p", [2, 3])
def test_group_and_lie_tensor_products_share_the_rank_variety(p):
    algebra = ElementaryAbelianAlgebra(p, 2)
    m = truncated_module(algebra, [2, 1])
    n = truncated_module(algebra, [p, 2])
    group, lie = tensor_diagonal(m, n, "group"), tensor_diagonal(m, n, "lie")
    assert to_int_lists(group.z[0]) != to_int_lists(lie.z[0])
    assert variety_equals(rank_variety_oracle(group), rank_variety_oracle(lie))
