import pytest

from quantum_ideals.models.cyclotomic import (
    INFINITY,
    ConductorMismatchError,
    CycFrac,
    CycInt,
    CyclotomicError,
    NotCoprimeError,
    PolynomialParseError,
    divide_by_h,
    euler_phi,
    galois,
    gauss_sum,
    h_element,
    i_compose,
    i_decompose,
    is_unit,
    norm,
    norm_by_galois,
    nu_h,
    parse_cycint,
    phi_coefficients,
    quantum_int,
)
from quantum_ideals.services.quantum_invariant import SQRT2_24


def random_element(rng, n, spread=4):
    return CycInt(n, tuple(rng.randint(-spread, spread) for _ in range(euler_phi(n))))


def test_cyclotomic_polynomials():
    assert phi_coefficients(5) == (1, 1, 1, 1, 1)
    assert phi_coefficients(8) == (1, 0, 0, 0, 1)
    assert euler_phi(20) == 8
    assert euler_phi(24) == 8


def test_roots_of_unity():
    assert CycInt.zeta(7) ** 7 == CycInt.one(7)
    assert CycInt.zeta(5, 5) == CycInt.one(5)
    assert CycInt.zeta(5, -1) * CycInt.zeta(5) == CycInt.one(5)
    assert CycInt.from_exponents(5, {e: 1 for e in range(5)}).is_zero()


def test_table_generator_norms():
    assert norm(parse_cycint('1 - 2*z^2', 5)) == 31
    for text in ('1 + 2*z^2', '1 + 2*z', '1 + 2*z^3'):
        assert norm(parse_cycint(text, 5)) == 11


@pytest.mark.parametrize('n', [5, 7, 8, 20])
def test_norm_matches_galois_product(rng, n):
    for _ in range(5):
        x = random_element(rng, n)
        assert norm(x) == norm_by_galois(x)


def test_h_valuation():
    h = h_element(5)
    assert norm(h) == 5
    assert nu_h(h) == 1
    assert nu_h(CycInt.scalar(5, 5)) == 4
    assert nu_h(h ** 3 * (CycInt.one(5) + CycInt.zeta(5))) == 3
    assert nu_h(CycInt.one(5)) == 0
    assert nu_h(CycInt.zero(5)) == INFINITY


def test_divide_by_h(rng):
    h = h_element(7)
    for _ in range(5):
        x = random_element(rng, 7)
        assert divide_by_h(h * x) == x
    assert divide_by_h(CycInt.one(7)) is None
    with pytest.raises(CyclotomicError):
        divide_by_h(CycInt.one(8))


def test_h_valuation_in_conductor_4p():
    # sqrt(-5) = i*g lives in Z[zeta_20]; its square is -5 = h^4 * unit
    assert nu_h(gauss_sum(5).value) == 2
    assert nu_h(gauss_sum(5).value, 5) == 2
    assert nu_h(gauss_sum(7).value) == 3
    assert nu_h(i_compose(CycInt.one(5), h_element(5))) == 0
    assert nu_h(i_compose(h_element(5), h_element(5) ** 2)) == 1
    with pytest.raises(ConductorMismatchError):
        nu_h(CycInt.one(20), 7)
    with pytest.raises(CyclotomicError):
        nu_h(CycInt.one(8))


@pytest.mark.parametrize('p', [5, 7, 11, 13])
def test_p_is_h_to_the_p_minus_1_times_unit(p):
    unit = (h_element(p) ** (p - 1)).exact_div(p)
    assert is_unit(unit)


@pytest.mark.parametrize('n', [5, 7, 20])
def test_norm_is_multiplicative(rng, n):
    for _ in range(5):
        a, b = random_element(rng, n), random_element(rng, n)
        assert norm(a * b) == norm(a) * norm(b)


@pytest.mark.parametrize('p', [5, 7])
def test_h_valuation_properties(rng, p):
    h = h_element(p)
    for _ in range(8):
        a = random_element(rng, p) * h ** rng.randint(0, 3)
        b = random_element(rng, p) * h ** rng.randint(0, 3)
        if a.is_zero() or b.is_zero():
            continue
        assert nu_h(a * b) == nu_h(a) + nu_h(b)
        assert nu_h(a + b) >= min(nu_h(a), nu_h(b))


def test_units():
    assert is_unit(CycInt.one(5) + CycInt.zeta(5))
    assert is_unit(CycInt.zeta(7, 3))
    assert not is_unit(h_element(5))
    assert not is_unit(CycInt.scalar(5, 2))


def test_fraction_inverse(rng):
    for n in (5, 8):
        x = random_element(rng, n)
        if x.is_zero():
            continue
        frac = CycFrac.of(x, 3)
        assert frac * frac.inverse() == CycFrac.one(n)


def test_fraction_normalization():
    x = CycInt.from_exponents(5, {0: 2, 1: 4})
    frac = CycFrac.of(x, 4)
    assert frac.den == 2
    assert frac.num == CycInt.from_exponents(5, {0: 1, 1: 2})
    assert CycFrac.of(x, -2).to_cycint() == -CycInt.from_exponents(5, {0: 1, 1: 2})
    with pytest.raises(CyclotomicError):
        frac.to_cycint()
    with pytest.raises(ZeroDivisionError):
        CycFrac.zero(5).inverse()


def test_gauss_sums():
    assert gauss_sum(5).g ** 2 == CycInt.scalar(5, 5)
    assert gauss_sum(7).g ** 2 == CycInt.scalar(7, -7)
    assert gauss_sum(5).value ** 2 == CycInt.scalar(20, -5)
    assert gauss_sum(7).value ** 2 == CycInt.scalar(7, -7)


def test_i_decomposition(rng):
    re, im = random_element(rng, 5), random_element(rng, 5)
    assert i_decompose(i_compose(re, im)) == (re, im)
    assert i_decompose(CycInt.zeta(20, 5)) == (CycInt.zero(5), CycInt.one(5))


def test_embed_and_restrict(rng):
    x = random_element(rng, 5)
    assert x.embed(20).restrict(5) == x
    assert SQRT2_24 ** 2 == CycInt.scalar(24, 2)
    assert SQRT2_24.restrict(8) == CycInt(8, (0, 1, 0, -1))
    with pytest.raises(CyclotomicError):
        CycInt.zeta(20).restrict(5)


def test_galois_action():
    x = parse_cycint('1 - 2*z^2', 5)
    assert galois(x, 2) == parse_cycint('1 - 2*z^4', 5)
    assert galois(galois(x, 2), 3) == x
    with pytest.raises(NotCoprimeError):
        galois(x, 5)


def test_conductor_mismatch():
    with pytest.raises(ConductorMismatchError):
        CycInt.zeta(5) + CycInt.zeta(7)


def test_quantum_integers():
    # [2] = z + z^-1 and [p] = 0
    assert quantum_int(5, 2) == CycInt.zeta(5) + CycInt.zeta(5, -1)
    assert quantum_int(5, 5).is_zero()
    assert quantum_int(7, -3) == -quantum_int(7, 3)


@pytest.mark.parametrize('p', [5, 7, 11])
def test_galois_moves_quantum_integers(p):
    # sigma_t([m]) * [t] = [tm]; [t] is a unit for t prime to p
    for t in range(1, p):
        assert is_unit(quantum_int(p, t))
        for m in range(1, p):
            assert galois(quantum_int(p, m), t) * quantum_int(p, t) == quantum_int(p, (t * m) % p)


def test_parse_and_format():
    assert parse_cycint('1 - 2*z^2', 5).to_text() == '1 - 2*z^2'
    assert parse_cycint('z^5', 5) == CycInt.one(5)
    assert parse_cycint('z^-1', 5) == CycInt.zeta(5, -1)
    assert parse_cycint('(1 + z)*(1 - z)', 7) == CycInt.one(7) - CycInt.zeta(7, 2)
    assert CycInt.zero(5).to_text() == '0'
    for bad in ('y + 1', '1/2*z', 'z^(1/2)', '1 +* z'):
        with pytest.raises(PolynomialParseError):
            parse_cycint(bad, 5)
