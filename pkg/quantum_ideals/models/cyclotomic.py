"""
Exact arithmetic in cyclotomic rings Z[zeta_n] and their fraction fields
"""
import logging
from dataclasses import dataclass
from functools import lru_cache
from math import gcd
from typing import Dict, Iterable, List, Optional, Tuple, Union

from sympy import Add, Integer, Matrix, Poly, Symbol, cyclotomic_poly, isprime, resultant, sympify, totient
from sympy.core.sympify import SympifyError

logger = logging.getLogger(__name__)

Z = Symbol('z')
INFINITY = float('inf')


class CyclotomicError(ValueError):
    """Base error for cyclotomic arithmetic"""
    pass


class ConductorMismatchError(CyclotomicError):
    """Operands live in rings of different conductor"""
    pass


class NotCoprimeError(CyclotomicError):
    """Galois exponent shares a factor with the conductor"""
    pass


class PolynomialParseError(CyclotomicError):
    """Polynomial text in z could not be read"""
    pass


@lru_cache(maxsize=None)
def phi_coefficients(n: int) -> Tuple[int, ...]:
    """Coefficients of the n-th cyclotomic polynomial, lowest degree first"""
    poly = Poly(cyclotomic_poly(n, Z), Z)
    return tuple(int(c) for c in reversed(poly.all_coeffs()))


@lru_cache(maxsize=None)
def euler_phi(n: int) -> int:
    return int(totient(n))


def _reduce(n: int, vec: List[int]) -> Tuple[int, ...]:
    """Reduce a coefficient vector modulo the monic polynomial Phi_n"""
    phi = phi_coefficients(n)
    deg = len(phi) - 1
    vec = list(vec)
    for top in range(len(vec) - 1, deg - 1, -1):
        c = vec[top]
        if c:
            shift = top - deg
            for j, pj in enumerate(phi):
                if pj:
                    vec[shift + j] -= c * pj
    vec.extend([0] * (deg - len(vec)))
    return tuple(vec[:deg])


@dataclass(frozen=True)
class CycInt:
    """Element of Z[zeta_n] in the power basis, reduced modulo Phi_n"""
    conductor: int
    coeffs: Tuple[int, ...]

    # Constructors

    @classmethod
    def from_exponents(cls, n: int, terms: Union[Dict[int, int], Iterable[Tuple[int, int]]]) -> 'CycInt':
        """Build sum c * zeta_n^e from (e, c) terms; exponents are taken mod n"""
        items = terms.items() if isinstance(terms, dict) else terms
        vec = [0] * n
        for e, c in items:
            vec[e % n] += c
        return cls(n, _reduce(n, vec))

    @classmethod
    def scalar(cls, n: int, c: int) -> 'CycInt':
        return cls(n, (c,) + (0,) * (euler_phi(n) - 1))

    @classmethod
    def zero(cls, n: int) -> 'CycInt':
        return cls.scalar(n, 0)

    @classmethod
    def one(cls, n: int) -> 'CycInt':
        return cls.scalar(n, 1)

    @classmethod
    def zeta(cls, n: int, k: int = 1) -> 'CycInt':
        return cls.from_exponents(n, {k: 1})

    # Predicates

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def is_scalar(self) -> bool:
        return not any(self.coeffs[1:])

    def augmentation(self) -> int:
        """Image under zeta -> 1"""
        return sum(self.coeffs)

    def content(self) -> int:
        g = 0
        for c in self.coeffs:
            g = gcd(g, c)
        return g

    # Arithmetic

    def _check(self, other: 'CycInt') -> None:
        if not isinstance(other, CycInt):
            raise TypeError(f"Cannot combine CycInt with {type(other).__name__}")
        if other.conductor != self.conductor:
            raise ConductorMismatchError(
                f"Conductor mismatch: {self.conductor} vs {other.conductor}"
            )

    def __add__(self, other: 'CycInt') -> 'CycInt':
        self._check(other)
        return CycInt(self.conductor, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other: 'CycInt') -> 'CycInt':
        self._check(other)
        return CycInt(self.conductor, tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def __neg__(self) -> 'CycInt':
        return CycInt(self.conductor, tuple(-a for a in self.coeffs))

    def __mul__(self, other: Union['CycInt', int]) -> 'CycInt':
        if isinstance(other, int):
            return CycInt(self.conductor, tuple(a * other for a in self.coeffs))
        self._check(other)
        prod = [0] * (2 * len(self.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    if b:
                        prod[i + j] += a * b
        return CycInt(self.conductor, _reduce(self.conductor, prod))

    __rmul__ = __mul__

    def __pow__(self, k: int) -> 'CycInt':
        if k < 0:
            raise CyclotomicError("Negative powers need CycFrac")
        result = CycInt.one(self.conductor)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def exact_div(self, c: int) -> 'CycInt':
        """Divide by a rational integer that divides every coefficient"""
        if c == 0 or any(a % c for a in self.coeffs):
            raise CyclotomicError(f"{self.to_text()} is not divisible by {c}")
        return CycInt(self.conductor, tuple(a // c for a in self.coeffs))

    # Change of ring

    def embed(self, n: int) -> 'CycInt':
        """Image in Z[zeta_n] for a multiple n of the conductor"""
        if n % self.conductor:
            raise ConductorMismatchError(f"{self.conductor} does not divide {n}")
        step = n // self.conductor
        return CycInt.from_exponents(n, {j * step: c for j, c in enumerate(self.coeffs) if c})

    def restrict(self, m: int) -> 'CycInt':
        """Preimage in Z[zeta_m] of an element lying in that subring"""
        n = self.conductor
        if n % m:
            raise ConductorMismatchError(f"{m} does not divide {n}")
        images = [CycInt.zeta(m, j).embed(n).coeffs for j in range(euler_phi(m))]
        system = Matrix(images).T
        target = Matrix(self.coeffs)
        try:
            solution, params = system.gauss_jordan_solve(target)
        except ValueError:
            raise CyclotomicError(f"{self.to_text()} does not lie in Z[zeta_{m}]")
        if params.shape[0] or any(not v.is_integer for v in solution):
            raise CyclotomicError(f"{self.to_text()} does not lie in Z[zeta_{m}]")
        return CycInt(m, tuple(int(v) for v in solution))

    # Rendering

    def to_text(self) -> str:
        return format_polynomial(self.coeffs)

    def __str__(self) -> str:
        return self.to_text()


@dataclass(frozen=True, eq=False)
class CycFrac:
    """Element of Q(zeta_n) as numerator over a positive integer denominator"""
    num: CycInt
    den: int = 1

    @classmethod
    def of(cls, num: CycInt, den: int = 1) -> 'CycFrac':
        if den == 0:
            raise ZeroDivisionError("CycFrac with zero denominator")
        if den < 0:
            num, den = -num, -den
        g = gcd(num.content(), den)
        if g > 1:
            num, den = num.exact_div(g), den // g
        return cls(num, den)

    @classmethod
    def one(cls, n: int) -> 'CycFrac':
        return cls(CycInt.one(n), 1)

    @classmethod
    def zero(cls, n: int) -> 'CycFrac':
        return cls(CycInt.zero(n), 1)

    @property
    def conductor(self) -> int:
        return self.num.conductor

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_integral(self) -> bool:
        return self.den == 1

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, CycFrac):
            return NotImplemented
        return self.num * other.den == other.num * self.den

    def __hash__(self) -> int:
        reduced = CycFrac.of(self.num, self.den)
        return hash((reduced.num, reduced.den))

    def __add__(self, other: 'CycFrac') -> 'CycFrac':
        return CycFrac.of(self.num * other.den + other.num * self.den, self.den * other.den)

    def __sub__(self, other: 'CycFrac') -> 'CycFrac':
        return CycFrac.of(self.num * other.den - other.num * self.den, self.den * other.den)

    def __neg__(self) -> 'CycFrac':
        return CycFrac(-self.num, self.den)

    def __mul__(self, other: Union['CycFrac', CycInt, int]) -> 'CycFrac':
        if isinstance(other, int):
            return CycFrac.of(self.num * other, self.den)
        if isinstance(other, CycInt):
            return CycFrac.of(self.num * other, self.den)
        return CycFrac.of(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other: 'CycFrac') -> 'CycFrac':
        return self * other.inverse()

    def __pow__(self, k: int) -> 'CycFrac':
        base = self if k >= 0 else self.inverse()
        result = CycFrac.one(self.conductor)
        for _ in range(abs(k)):
            result = result * base
        return result

    def inverse(self) -> 'CycFrac':
        """1/x = den * (product of the other conjugates of num) / Norm(num)"""
        if self.num.is_zero():
            raise ZeroDivisionError("Inverse of zero in a cyclotomic field")
        n = self.conductor
        cofactor = CycInt.one(n)
        for t in range(2, n):
            if gcd(t, n) == 1:
                cofactor = cofactor * galois(self.num, t)
        full = self.num * cofactor
        if not full.is_scalar():
            raise CyclotomicError("Conjugate product is not rational")
        return CycFrac.of(cofactor * self.den, full.coeffs[0])

    def to_cycint(self) -> CycInt:
        reduced = CycFrac.of(self.num, self.den)
        if reduced.den != 1:
            raise CyclotomicError(f"Value ({reduced.num.to_text()})/{reduced.den} is not integral")
        return reduced.num

    def to_text(self) -> str:
        if self.den == 1:
            return self.num.to_text()
        return f"({self.num.to_text()})/{self.den}"


@dataclass(frozen=True)
class GaussPair:
    """Quadratic Gauss sum together with the chosen square root of -p"""
    g: CycInt
    value: CycInt
    convention_tag: str


# Ring operations


def galois(a: CycInt, t: int) -> CycInt:
    """Automorphism zeta -> zeta^t"""
    n = a.conductor
    if gcd(t, n) != 1:
        raise NotCoprimeError(f"Galois exponent {t} is not coprime to {n}")
    return CycInt.from_exponents(n, {j * t: c for j, c in enumerate(a.coeffs) if c})


def norm(a: CycInt) -> int:
    """Absolute norm via the resultant with Phi_n"""
    if a.is_zero():
        return 0
    if a.is_scalar():
        return abs(a.coeffs[0]) ** len(a.coeffs)
    poly = Poly(list(reversed(a.coeffs)), Z)
    return abs(int(resultant(poly, Poly(cyclotomic_poly(a.conductor, Z), Z))))


def norm_by_galois(a: CycInt) -> int:
    """Absolute norm as the product of all Galois conjugates"""
    n = a.conductor
    prod = CycInt.one(n)
    for t in range(1, n):
        if gcd(t, n) == 1:
            prod = prod * galois(a, t)
    if not prod.is_scalar():
        raise CyclotomicError("Galois product is not rational")
    return abs(prod.coeffs[0])


def is_unit(a: CycInt) -> bool:
    return norm(a) == 1


def divide_by_h(a: CycInt) -> Optional[CycInt]:
    """Exact quotient a / (1 - zeta_p), or None when h does not divide a"""
    p = a.conductor
    if p == 2 or not isprime(p):
        raise CyclotomicError(f"h = 1 - zeta_p needs an odd prime conductor, got {p}")
    aug = a.augmentation()
    if aug % p:
        return None
    # a + m * Phi_p vanishes at 1, then divide by (x - 1)
    m = -aug // p
    b = [c + m for c in a.coeffs] + [m]
    q = [0] * (len(b) - 1)
    carry = 0
    for idx in range(len(b) - 1, 0, -1):
        carry = b[idx] + carry
        q[idx - 1] = carry
    return CycInt(p, tuple(-c for c in q))


def nu_h(a: CycInt, p: Optional[int] = None) -> Union[int, float]:
    """Largest k with (1 - zeta_p)^k dividing a; infinity for zero.
    An element re + i*im of Z[zeta_4p] takes the smaller valuation of its parts.
    """
    if p is not None and a.conductor not in (p, 4 * p):
        raise ConductorMismatchError(f"nu_h expects conductor {p} or {4 * p}, got {a.conductor}")
    if a.is_zero():
        return INFINITY
    if a.conductor % 4 == 0 and (a.conductor // 4) % 2:
        return min(nu_h(part) for part in i_decompose(a))
    k = 0
    while True:
        q = divide_by_h(a)
        if q is None:
            return k
        a, k = q, k + 1


def h_element(p: int) -> CycInt:
    return CycInt.one(p) - CycInt.zeta(p)


def quantum_int(p: int, m: int) -> CycInt:
    """[m] = (zeta^m - zeta^-m) / (zeta - zeta^-1) in Z[zeta_p]"""
    if m < 0:
        return -quantum_int(p, -m)
    return CycInt.from_exponents(p, [(m - 1 - 2 * j, 1) for j in range(m)])


def i_unit(n: int) -> CycInt:
    if n % 4:
        raise CyclotomicError(f"i is not in Z[zeta_{n}]")
    return CycInt.zeta(n, n // 4)


def gauss_sum(p: int) -> GaussPair:
    """sum_a zeta_p^(a^2) and a square root of -p built from it"""
    g = CycInt.from_exponents(p, [(a * a, 1) for a in range(p)])
    if p % 4 == 3:
        return GaussPair(g=g, value=g, convention_tag='sqrt(-p) = g')
    value = i_unit(4 * p) * g.embed(4 * p)
    return GaussPair(g=g, value=value, convention_tag='sqrt(-p) = i*g, i = zeta_4p^p')


def i_decompose(a: CycInt) -> Tuple[CycInt, CycInt]:
    """Split a in Z[zeta_4p] as re + i*im with re, im in Z[zeta_p]"""
    n = a.conductor
    if n % 4:
        raise CyclotomicError(f"Conductor {n} is not of the form 4p")
    p = n // 4
    # a*p + 4*b = 1, so zeta_4p^j = i^(a*j) * zeta_p^(b*j)
    ai = pow(p, -1, 4)
    b = (1 - ai * p) // 4
    re: Dict[int, int] = {}
    im: Dict[int, int] = {}
    for j, c in enumerate(a.coeffs):
        if not c:
            continue
        quarter = (ai * j) % 4
        target = re if quarter % 2 == 0 else im
        sign = -1 if quarter >= 2 else 1
        e = (b * j) % p
        target[e] = target.get(e, 0) + sign * c
    return CycInt.from_exponents(p, re), CycInt.from_exponents(p, im)


def i_compose(re: CycInt, im: CycInt) -> CycInt:
    n = 4 * re.conductor
    return re.embed(n) + i_unit(n) * im.embed(n)


# Text rendering


def format_polynomial(coeffs: Iterable[int]) -> str:
    terms = []
    for e, c in enumerate(coeffs):
        if not c:
            continue
        mag = abs(c)
        if e == 0:
            body = str(mag)
        else:
            power = 'z' if e == 1 else f'z^{e}'
            body = power if mag == 1 else f'{mag}*{power}'
        if not terms:
            terms.append(body if c > 0 else f'-{body}')
        else:
            terms.append(f'+ {body}' if c > 0 else f'- {body}')
    return ' '.join(terms) if terms else '0'


def parse_cycint(text: str, n: int) -> CycInt:
    """Read an integer Laurent polynomial in z such as '1 - 2*z^2'"""
    try:
        expr = sympify(text.replace('^', '**'), locals={'z': Z}).expand()
    except (SympifyError, SyntaxError, TypeError) as e:
        raise PolynomialParseError(f"Cannot parse polynomial {text!r}: {e}")
    if expr.free_symbols - {Z}:
        raise PolynomialParseError(f"Unexpected symbols in {text!r}")
    terms = []
    for term in Add.make_args(expr):
        coeff, exp = term.as_coeff_exponent(Z)
        if not (isinstance(coeff, Integer) and exp.is_integer):
            raise PolynomialParseError(f"Term {term} in {text!r} is not an integer multiple of a power of z")
        terms.append((int(exp), int(coeff)))
    return CycInt.from_exponents(n, terms)
