from itertools import product

import pytest

from quantum_ideals.models.cyclotomic import CycFrac, CycInt, galois, nu_h
from quantum_ideals.models.link_diagram import cable, diagram_from_text, disjoint_union, mirror, unknot
from quantum_ideals.services.skein_eval import (
    ColorRangeError,
    FrontierOverflowError,
    TLElement,
    _build_nodes,
    bracket,
    colored_bracket,
    colored_hopf_value,
    colored_unknot_value,
    jones_wenzl,
    omega_bracket,
    standard_A,
    su2_params,
)


def conjugate(x: CycFrac) -> CycFrac:
    return CycFrac(galois(x.num, -1 % x.conductor), x.den)


def test_parameters(params5, params7, su2):
    assert params5.A_power(2) == CycInt.zeta(5)
    assert params5.A_power(10) == CycInt.one(5)
    assert params5.A_power(5) == -CycInt.one(5)
    assert params5.max_color == 1
    assert params7.max_color == 2
    assert su2.max_color == 1
    assert su2.A_power(12) == CycInt.one(24)
    assert su2.delta == -su2.qint(2)
    # [2] = 1 at r = 3, so delta = -1
    assert su2.delta == CycInt.scalar(24, -1)
    with pytest.raises(ColorRangeError):
        standard_A(9)
    with pytest.raises(ColorRangeError):
        su2_params(4)


def test_empty_diagram_is_one(params5):
    assert bracket(cable(unknot(0), []), params5) == CycFrac.one(5)


def test_unknot_and_hopf_brackets(params5, catalog):
    assert bracket(cable(unknot(1), [1]), params5) == CycFrac.of(params5.delta)
    hopf = catalog.load_diagram('hopf')
    # with the empty diagram normalized to 1, the Hopf link gives [4]
    assert bracket(cable(hopf, [1, 1]), params5) == CycFrac.of(params5.qint(4))


@pytest.mark.parametrize('c', [0, 1, 2, 3, 4])
def test_jones_wenzl_idempotent_and_killed_by_turnbacks(c):
    params = standard_A(11)
    f = jones_wenzl(c, params)
    assert f * f == f
    for i in range(1, c):
        assert (f * TLElement.cup_cap(c, i, params)).is_zero()
        assert (TLElement.cup_cap(c, i, params) * f).is_zero()


def test_jones_wenzl_out_of_range(params5):
    with pytest.raises(ColorRangeError):
        jones_wenzl(2, params5)


@pytest.mark.parametrize('p', [5, 7])
def test_colored_unknot_oracle(p, fresh_cache):
    params = standard_A(p)
    for c in params.colors:
        value = colored_bracket(unknot(1), [c], None, params, cache=fresh_cache)
        assert value == CycFrac.of(colored_unknot_value(c, params))


@pytest.mark.parametrize('p', [5, 7])
def test_colored_hopf_oracle(p, catalog, fresh_cache):
    params = standard_A(p)
    hopf = catalog.load_diagram('hopf')
    for c1 in params.colors:
        for c2 in params.colors:
            value = colored_bracket(hopf, [c1, c2], None, params, cache=fresh_cache)
            assert value == CycFrac.of(colored_hopf_value(c1, c2, params))


def test_su2_oracles(su2, catalog, fresh_cache):
    hopf = catalog.load_diagram('hopf')
    for c in su2.colors:
        assert colored_bracket(unknot(1), [c], None, su2, cache=fresh_cache) == \
            CycFrac.of(colored_unknot_value(c, su2))
        assert colored_bracket(hopf, [c, 1], None, su2, cache=fresh_cache) == \
            CycFrac.of(colored_hopf_value(c, 1, su2))


def test_sweep_order_independence(params7, catalog, rng):
    for name, colors in (('3_1', [2]), ('T4-2', [1, 2]), ('3_1-meridian', [1, 1])):
        cabled = cable(catalog.load_diagram(name), colors)
        expected = bracket(cabled, params7)
        count = len(_build_nodes(cabled, params7, None))
        order = list(range(count))
        assert bracket(cabled, params7, order=order, frontier_cap=10 ** 6) == expected
        rng.shuffle(order)
        assert bracket(cabled, params7, order=order, frontier_cap=10 ** 6) == expected


def test_mirror_conjugates_bracket(params5, catalog, fresh_cache):
    for name in ('3_1', '4_1', 'T4-2', '3_1-meridian'):
        diagram = catalog.load_diagram(name)
        colors = [1] * diagram.num_components
        value = colored_bracket(diagram, colors, None, params5, cache=fresh_cache)
        assert colored_bracket(mirror(diagram), colors, None, params5, cache=fresh_cache) == conjugate(value)


def test_split_union_multiplies(params5, catalog, fresh_cache):
    trefoil = catalog.load_diagram('3_1')
    union = disjoint_union(trefoil, unknot(1))
    value = colored_bracket(union, [1, 1], None, params5, cache=fresh_cache)
    single = colored_bracket(trefoil, [1], None, params5, cache=fresh_cache)
    assert value == single * CycFrac.of(params5.delta)


def test_framing_correction(params5, fresh_cache):
    for c in params5.colors:
        twisted = colored_bracket(unknot(1), [c], [3], params5, cache=fresh_cache)
        assert twisted == CycFrac.of(colored_unknot_value(c, params5) * params5.twist_power(c, 3))


def test_framing_is_relative_to_writhe(params5, catalog, fresh_cache):
    trefoil = catalog.load_diagram('3_1')
    # blackboard framing of this diagram is its writhe, -3
    assert colored_bracket(trefoil, [1], [-3], params5, cache=fresh_cache) == \
        colored_bracket(trefoil, [1], None, params5, cache=fresh_cache)


def test_frontier_cap_enforced(params5, catalog):
    cabled = cable(catalog.load_diagram('T8-2'), [1, 1])
    with pytest.raises(FrontierOverflowError):
        bracket(cabled, params5, frontier_cap=2)


def test_color_range_checked(params5):
    with pytest.raises(ColorRangeError):
        colored_bracket(unknot(1), [2], None, params5)


def test_cache_hits(params5, catalog, fresh_cache):
    hopf = catalog.load_diagram('hopf')
    colored_bracket(hopf, [1, 1], [0, 0], params5, cache=fresh_cache)
    colored_bracket(hopf, [1, 1], [2, 5], params5, cache=fresh_cache)
    stats = fresh_cache.stats()
    assert stats['entries'] == 1
    assert stats['hits'] == 1
    fresh_cache.disable()
    colored_bracket(hopf, [1, 1], None, params5, cache=fresh_cache)
    assert fresh_cache.stats()['entries'] == 0


def test_omega_bracket_of_unknot(params5, fresh_cache):
    # sum over colors of <e_c>^2
    expected = CycInt.zero(5)
    for c in params5.colors:
        expected = expected + colored_unknot_value(c, params5) ** 2
    assert omega_bracket(unknot(1), [0], params5, cache=fresh_cache) == CycFrac.of(expected)


@pytest.mark.parametrize('p', [5, 7, 11])
def test_omega_bracket_of_twisted_unknots(p, fresh_cache):
    params = standard_A(p)
    plus = omega_bracket(unknot(1), [1], params, cache=fresh_cache).to_cycint()
    minus = omega_bracket(unknot(1), [-1], params, cache=fresh_cache).to_cycint()
    assert nu_h(plus) + nu_h(minus) == p - 3


def braid_closure(strands, word):
    """PD code of a braid closure; generator i > 0 crosses position i over i + 1"""
    current = list(range(1, strands + 1))
    fresh = strands
    crossings = []
    for g in word:
        i = abs(g) - 1
        a, b = current[i], current[i + 1]
        a_out, b_out = fresh + 1, fresh + 2
        fresh += 2
        crossings.append([b, a_out, b_out, a] if g > 0 else [a, b, a_out, b_out])
        current[i], current[i + 1] = b_out, a_out
    close = dict(zip(current, range(1, strands + 1)))
    return diagram_from_text([[close.get(lab, lab) for lab in x] for x in crossings])


def assert_same_brackets(first, second, params, cache):
    assert first.num_components == second.num_components
    for colors in product(params.colors, repeat=first.num_components):
        assert colored_bracket(first, colors, None, params, cache=cache) == \
            colored_bracket(second, colors, None, params, cache=cache), colors


@pytest.mark.parametrize('p', [5, 7])
def test_reidemeister_three(p, fresh_cache):
    params = standard_A(p)
    assert_same_brackets(braid_closure(3, [1, 2, 1]), braid_closure(3, [2, 1, 2]), params, fresh_cache)
    assert_same_brackets(braid_closure(3, [-1, -2, -1]), braid_closure(3, [-2, -1, -2]), params, fresh_cache)


@pytest.mark.parametrize('p', [5, 7])
def test_reidemeister_two(p, fresh_cache):
    params = standard_A(p)
    # two circles, one lying over the other at both crossings
    overlap = diagram_from_text('PD[X[1,4,2,3], X[2,4,1,3]]')
    assert_same_brackets(overlap, unknot(2), params, fresh_cache)
    cancelled = braid_closure(3, [1, 2, -2, 1])
    assert_same_brackets(cancelled, disjoint_union(braid_closure(2, [1, 1]), unknot(1)), params, fresh_cache)
