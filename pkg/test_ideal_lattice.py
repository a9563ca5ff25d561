import pytest

from quantum_ideals.models.cyclotomic import INFINITY, CycInt, euler_phi, galois, h_element, parse_cycint
from quantum_ideals.models.ideal_lattice import (
    IdealError,
    ideal_breve,
    ideal_contains,
    ideal_contains_ideal,
    ideal_equals,
    ideal_from_generators,
    ideal_galois,
    ideal_mul,
    ideal_norm,
    ideal_nu_h,
    ideal_power,
    matches_principal,
    principal,
    unit_ideal,
    zero_ideal,
)

G31 = parse_cycint('1 - 2*z^2', 5)
G11 = parse_cycint('1 + 2*z^2', 5)


def random_ideal(rng, n):
    gens = [CycInt(n, tuple(rng.randint(-3, 3) for _ in range(euler_phi(n)))) for _ in range(2)]
    return ideal_from_generators(n, gens)


def test_unit_and_zero_ideals():
    one = unit_ideal(5)
    assert one.is_unit_ideal()
    assert ideal_norm(one) == 1
    assert ideal_nu_h(one) == 0
    zero = ideal_from_generators(5, [CycInt.zero(5)])
    assert zero.is_zero
    assert ideal_equals(zero, zero_ideal(5))
    assert ideal_norm(zero) == 0
    assert ideal_nu_h(zero) == INFINITY
    assert ideal_contains(zero, CycInt.zero(5))
    assert not ideal_contains(zero, CycInt.one(5))


def test_principal_ideal_norms():
    assert ideal_norm(principal(h_element(5))) == 5
    assert ideal_norm(principal(G31)) == 31
    assert ideal_norm(principal(G11)) == 11
    assert ideal_norm(principal(CycInt.scalar(5, 2))) == 16
    assert ideal_norm(principal(CycInt.scalar(8, 2))) == 16


def test_hnf_is_canonical():
    unit = CycInt.one(5) + CycInt.zeta(5)
    assert ideal_equals(principal(G31), principal(G31 * unit))
    assert ideal_equals(principal(G31), ideal_from_generators(5, [G31, G31 * CycInt.scalar(5, 7)]))
    assert principal(G31).fingerprint() == principal(G31 * CycInt.zeta(5, 3)).fingerprint()


def test_matches_principal_up_to_units():
    ideal = principal(G31 * CycInt.zeta(5, 2))
    assert matches_principal(ideal, G31)
    assert matches_principal(ideal, -G31)
    assert not matches_principal(ideal, galois(G31, 2))
    with pytest.raises(IdealError):
        matches_principal(ideal, CycInt.zero(5))


def test_coprime_generators_give_unit_ideal():
    # 2 is inert in Q(zeta_5), so (2) and an element of norm 31 are coprime
    assert ideal_from_generators(5, [CycInt.scalar(5, 2), G31]).is_unit_ideal()


def test_products_and_powers():
    assert ideal_norm(ideal_mul(principal(G31), principal(G11))) == 31 * 11
    assert ideal_equals(ideal_mul(principal(G31), principal(G11)), principal(G31 * G11))
    cube = ideal_power(principal(h_element(5)), 3)
    assert ideal_norm(cube) == 125
    assert ideal_nu_h(cube) == 3
    assert ideal_equals(ideal_power(principal(G31), 0), unit_ideal(5))


def test_membership():
    ideal = principal(G31)
    x = CycInt.from_exponents(5, {0: 3, 3: -1})
    assert ideal_contains(ideal, G31 * x)
    assert not ideal_contains(ideal, CycInt.one(5))
    assert not ideal_contains(ideal, CycInt.scalar(5, 30))
    assert ideal_contains(ideal, CycInt.scalar(5, 31))
    h = principal(h_element(5))
    assert ideal_contains_ideal(h, ideal_power(h, 2))
    assert not ideal_contains_ideal(ideal_power(h, 2), h)
    with pytest.raises(IdealError):
        ideal_contains(ideal, CycInt.one(7))


def test_breve_removes_h_part():
    h = h_element(5)
    ideal = principal(h ** 2 * G31)
    assert ideal_nu_h(ideal) == 2
    assert ideal_equals(ideal_breve(ideal), principal(G31))
    assert ideal_breve(principal(h ** 3)).is_unit_ideal()
    assert ideal_equals(ideal_breve(principal(G11)), principal(G11))


def test_breve_of_sum_with_h():
    # (h * a, h * b) has breve (a, b)
    h = h_element(7)
    a, b = CycInt.scalar(7, 2), CycInt.one(7) + CycInt.scalar(7, 2) * CycInt.zeta(7)
    both = ideal_from_generators(7, [h * a, h * b])
    assert ideal_equals(ideal_breve(both), ideal_from_generators(7, [a, b]))


def test_galois_on_ideals():
    for t in (2, 3, 4):
        assert ideal_equals(ideal_galois(principal(G31), t), principal(galois(G31, t)))
    assert ideal_galois(zero_ideal(5), 2).is_zero


def test_ideals_over_zeta8():
    sqrt2 = CycInt(8, (0, 1, 0, -1))
    two = principal(CycInt.scalar(8, 2))
    assert ideal_equals(ideal_power(principal(sqrt2), 2), two)
    assert ideal_contains_ideal(principal(sqrt2), two)
    assert ideal_norm(principal(sqrt2)) == 4


def test_mixed_rings_rejected():
    with pytest.raises(IdealError):
        ideal_equals(unit_ideal(5), unit_ideal(7))


@pytest.mark.parametrize('n', [5, 7, 20])
def test_hnf_is_idempotent(rng, n):
    for _ in range(4):
        ideal = random_ideal(rng, n)
        assert ideal_from_generators(n, ideal.basis()).hnf == ideal.hnf


@pytest.mark.parametrize('p', [5, 7])
def test_nu_h_is_additive_on_products(rng, p):
    h = principal(h_element(p))
    for _ in range(4):
        a = ideal_mul(random_ideal(rng, p), ideal_power(h, rng.randint(0, 2)))
        b = ideal_mul(random_ideal(rng, p), ideal_power(h, rng.randint(0, 2)))
        assert ideal_nu_h(ideal_mul(a, b)) == ideal_nu_h(a) + ideal_nu_h(b)
        assert ideal_norm(ideal_mul(a, b)) == ideal_norm(a) * ideal_norm(b)
