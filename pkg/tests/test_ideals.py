import numpy as np
import pytest

from engine.finite_field import FieldSpec
from engine.ideals import (
    Ideal,
    RingMap,
    degree_doubling_map,
    eliminate,
    fitting_ideal_0,
    groebner_basis,
    ideal_intersection,
    ideal_membership,
    ideal_sum,
    radical_contains,
    radical_membership,
    rational_zero_set,
    restriction_map,
    ringmap_apply,
    ringmap_kernel_mod,
    symbolic_minors,
)
from engine.polynomials import GradedPolyRing


@pytest.fixture
def ring():
    return GradedPolyRing(2, 2)


def random_ideal(ring, rng, n_generators=2, max_weight=2):
    gens = []
    for _ in range(n_generators):
        weight = int(rng.integers(1, max_weight + 1))
        f = ring.zero()
        for a in ring.monomials_of_weight(weight):
            c = int(rng.integers(0, ring.p))
            if c:
                f = f + ring.monomial(a, c)
        gens.append(f)
    return Ideal(ring, gens)


def test_zero_generators_are_dropped(ring):
    i = Ideal(ring, [ring.zero(), ring.parse("x1")])
    assert len(i.generators) == 1
    assert Ideal(ring).is_zero()


def test_membership(ring):
    i = Ideal(ring, [ring.parse("x1^2"), ring.parse("x1*x2")])
    assert ideal_membership(ring.parse("x1^2*x2 + x1*x2^3"), i)
    assert not ideal_membership(ring.parse("x1"), i)
    assert not ideal_membership(ring.parse("x2^5"), i)


def test_membership_rejects_other_ring(ring):
    with pytest.raises(ValueError):
        ideal_membership(ring.parse("x1"), Ideal(ring), GradedPolyRing(3, 2))


def test_radical_membership(ring):
    i = Ideal(ring, [ring.parse("x1^3")])
    assert radical_membership(ring.parse("x1"), i)
    assert not radical_membership(ring.parse("x2"), i)
    assert radical_membership(ring.zero(), Ideal(ring))
    assert not radical_membership(ring.parse("x1"), Ideal(ring))


def test_unit_ideal(ring):
    assert Ideal.unit(ring).is_unit()
    assert not Ideal.irrelevant(ring).is_unit()


def test_sum_and_intersection(ring):
    a = Ideal(ring, [ring.parse("x1")])
    b = Ideal(ring, [ring.parse("x2")])
    assert radical_contains(ideal_sum(a, b), Ideal.irrelevant(ring))
    meet = ideal_intersection(a, b)
    assert ideal_membership(ring.parse("x1*x2"), meet)
    assert not ideal_membership(ring.parse("x1"), meet)
    assert ideal_intersection(a, Ideal(ring)).is_zero()


def test_eliminate(ring):
    i = Ideal(ring, [ring.parse("x1 + x2"), ring.parse("x2^2")])
    kept = eliminate(i, [1])
    assert all(g.degree(ring.symbols[1]) <= 0 for g in kept.generators)
    assert ideal_membership(ring.parse("x1^2"), kept)
    with pytest.raises(ValueError):
        eliminate(i, [5])


def test_restriction_and_kernel():
    big = GradedPolyRing(2, 2)
    small = GradedPolyRing(2, 1)
    # first coordinate subgroup: x1 -> x1, x2 -> 0
    res = restriction_map(big, small, [[1], [0]])
    assert small.format(res.apply(big.parse("x1 + x2"))) == "x1"
    kernel = ringmap_kernel_mod(res, Ideal(small))
    assert radical_contains(kernel, Ideal(big, [big.parse("x2")]))
    assert radical_contains(Ideal(big, [big.parse("x2")]), kernel)


def test_ring_map_checks_degrees():
    s = GradedPolyRing(2, 1, 2)
    with pytest.raises(ValueError):
        RingMap(GradedPolyRing(2, 1), s, (s.parse("x1^2"),))


def test_degree_doubling(ring):
    doubling = degree_doubling_map(2, 2)
    image = ringmap_apply(doubling, Ideal(ring, [ring.parse("x1*x2")]))
    assert image.ring.gen_degree == 2
    assert image.ring.format(image.generators[0]) == "x1*x2"


def test_minors_and_fitting(ring):
    x1, x2 = ring.variables()
    entries = [[x1, x2], [ring.zero(), x1]]
    assert symbolic_minors(ring, entries, 2).generators[0] == x1 ** 2
    assert fitting_ideal_0(ring, [[x1, x2]], 1).contains(x2)
    assert fitting_ideal_0(ring, [], 0).is_unit()
    assert fitting_ideal_0(ring, [[]], 1).is_zero()
    with pytest.raises(ValueError):
        symbolic_minors(ring, entries, 3)


def test_json_round_trip_keeps_generators(ring):
    i = Ideal(ring, [ring.parse("x1^2 + x1*x2")])
    again = Ideal.from_json(i.to_json())
    assert again.ring == ring
    assert again.generators == i.generators
    with pytest.raises(ValueError):
        Ideal.from_json({"generators": ["x1"]})


# Gröbner engine self-checks against brute-force oracles


@pytest.mark.parametrize("seed", range(20))
def test_reduced_basis_is_idempotent(seed):
    ring = GradedPolyRing(2, 3)
    i = random_ideal(ring, np.random.default_rng(seed), n_generators=3)
    once = groebner_basis(i)
    assert groebner_basis(once).basis == once.basis


@pytest.mark.parametrize("seed", range(20))
def test_membership_agrees_with_points_over_F4(seed):
    ring = GradedPolyRing(2, 2)
    rng = np.random.default_rng(100 + seed)
    i = random_ideal(ring, rng)
    zeros = rational_zero_set(i, FieldSpec(2, 2))
    f = random_ideal(ring, rng, n_generators=1, max_weight=3).generators
    if not f:
        return
    if ideal_membership(f[0], i):
        assert zeros <= rational_zero_set(Ideal(ring, f), FieldSpec(2, 2))


@pytest.mark.parametrize("seed", range(100))
def test_radical_membership_agrees_with_power_search(seed):
    ring = GradedPolyRing(2, 2)
    rng = np.random.default_rng(1000 + seed)
    i = random_ideal(ring, rng)
    f = ring.var(int(rng.integers(0, 2)))
    found = any(i.contains(f ** k) for k in range(1, 7))
    member = radical_membership(f, i)
    if found:
        assert member
    if not member:
        assert not found
    if member:
        # f vanishes wherever i does
        zeros = rational_zero_set(i, FieldSpec(2, 2))
        assert zeros <= rational_zero_set(Ideal(ring, [f]), FieldSpec(2, 2))
