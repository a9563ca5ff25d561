"""
Ideals of Z[zeta_n] as integer lattices in Hermite normal form
"""
import hashlib
import logging
from dataclasses import dataclass
from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple, Union

from sympy import isprime
from sympy.polys.domains import ZZ
from sympy.polys.matrices import DM
from sympy.polys.matrices.normalforms import hermite_normal_form

from .cyclotomic import (
    INFINITY,
    ConductorMismatchError,
    CycInt,
    divide_by_h,
    euler_phi,
    galois,
    nu_h,
)

logger = logging.getLogger(__name__)


class IdealError(ValueError):
    """Malformed ideal or operands from different rings"""
    pass


@dataclass(frozen=True)
class IdealLattice:
    """
    Ideal of Z[zeta_n]. The columns of ``hnf`` are a Z-basis in the power
    basis: upper triangular, positive diagonal, entries right of a pivot
    reduced modulo it. The zero ideal has an empty ``hnf``.
    """
    conductor: int
    hnf: Tuple[Tuple[int, ...], ...]

    @property
    def p(self) -> int:
        return self.conductor

    @property
    def rank(self) -> int:
        return euler_phi(self.conductor)

    @property
    def is_zero(self) -> bool:
        return not self.hnf

    def basis(self) -> List[CycInt]:
        """Basis vectors as ring elements"""
        if self.is_zero:
            return []
        return [
            CycInt(self.conductor, tuple(row[j] for row in self.hnf))
            for j in range(self.rank)
        ]

    def is_unit_ideal(self) -> bool:
        return not self.is_zero and ideal_norm(self) == 1

    def fingerprint(self) -> str:
        text = repr((self.conductor, self.hnf))
        return hashlib.sha1(text.encode()).hexdigest()[:12]

    def to_dict(self, principal_match: Optional[str] = None) -> Dict[str, Any]:
        nu = ideal_nu_h(self) if isprime(self.conductor) else None
        return {
            'p': self.conductor,
            'hnf': [list(row) for row in self.hnf],
            'norm': ideal_norm(self),
            'nu_h': 'inf' if nu == INFINITY else nu,
            'principal_match': principal_match,
        }


def _from_vectors(n: int, vectors: Iterable[Sequence[int]]) -> IdealLattice:
    columns = [list(v) for v in vectors if any(v)]
    if not columns:
        return IdealLattice(n, ())
    rank = euler_phi(n)
    matrix = DM([[col[i] for col in columns] for i in range(rank)], ZZ)
    reduced = hermite_normal_form(matrix).to_Matrix().tolist()
    hnf = tuple(tuple(int(x) for x in row) for row in reduced)
    if len(hnf[0]) != rank:
        raise IdealError(f"Lattice of rank {len(hnf[0])} is not an ideal of Z[zeta_{n}]")
    return IdealLattice(n, hnf)


def _check_zeta_closed(ideal: IdealLattice) -> None:
    zeta = CycInt.zeta(ideal.conductor)
    for b in ideal.basis():
        if not ideal_contains(ideal, zeta * b):
            raise IdealError("Lattice is not closed under multiplication by zeta")


def ideal_from_generators(n: int, gens: Iterable[CycInt], check: bool = True) -> IdealLattice:
    """Ideal generated by gens: the lattice spanned by zeta^j * g"""
    rank = euler_phi(n)
    vectors = []
    for g in gens:
        if g.conductor != n:
            raise ConductorMismatchError(f"Generator in conductor {g.conductor}, expected {n}")
        power = g
        zeta = CycInt.zeta(n)
        for _ in range(rank):
            vectors.append(power.coeffs)
            power = power * zeta
    ideal = _from_vectors(n, vectors)
    if check:
        _check_zeta_closed(ideal)
    return ideal


def unit_ideal(n: int) -> IdealLattice:
    return ideal_from_generators(n, [CycInt.one(n)], check=False)


def zero_ideal(n: int) -> IdealLattice:
    return IdealLattice(n, ())


def principal(g: CycInt) -> IdealLattice:
    return ideal_from_generators(g.conductor, [g], check=False)


def ideal_norm(ideal: IdealLattice) -> int:
    """Index of the lattice, i.e. the product of the pivots"""
    if ideal.is_zero:
        return 0
    result = 1
    for i, row in enumerate(ideal.hnf):
        result *= row[i]
    return abs(result)


def ideal_equals(a: IdealLattice, b: IdealLattice) -> bool:
    if a.conductor != b.conductor:
        raise IdealError(f"Ideals over different rings: {a.conductor} vs {b.conductor}")
    return a.hnf == b.hnf


def ideal_contains(ideal: IdealLattice, x: CycInt) -> bool:
    """Membership by back-substitution in the triangular basis"""
    if x.conductor != ideal.conductor:
        raise IdealError(f"Element in conductor {x.conductor}, ideal in {ideal.conductor}")
    if ideal.is_zero:
        return x.is_zero()
    rest = list(x.coeffs)
    for j in range(ideal.rank - 1, -1, -1):
        pivot = ideal.hnf[j][j]
        if rest[j] % pivot:
            return False
        c = rest[j] // pivot
        if c:
            for i in range(j + 1):
                rest[i] -= c * ideal.hnf[i][j]
    return not any(rest)


def ideal_contains_ideal(outer: IdealLattice, inner: IdealLattice) -> bool:
    """True when inner is a subset of outer"""
    return all(ideal_contains(outer, b) for b in inner.basis())


def ideal_nu_h(ideal: IdealLattice) -> Union[int, float]:
    """Exponent of (1 - zeta_p) in the ideal; infinite for the zero ideal"""
    if ideal.is_zero:
        return INFINITY
    return min(nu_h(b) for b in ideal.basis())


def ideal_mul(a: IdealLattice, b: IdealLattice) -> IdealLattice:
    if a.conductor != b.conductor:
        raise IdealError(f"Ideals over different rings: {a.conductor} vs {b.conductor}")
    if a.is_zero or b.is_zero:
        return zero_ideal(a.conductor)
    products = [(x * y).coeffs for x in a.basis() for y in b.basis()]
    return _from_vectors(a.conductor, products)


def ideal_power(ideal: IdealLattice, k: int) -> IdealLattice:
    result = unit_ideal(ideal.conductor)
    for _ in range(k):
        result = ideal_mul(result, ideal)
    return result


def ideal_breve(ideal: IdealLattice) -> IdealLattice:
    """The ideal with its full (1 - zeta_p) part removed"""
    if ideal.is_zero:
        return ideal
    nu = ideal_nu_h(ideal)
    if nu == 0:
        return ideal
    quotients = []
    for b in ideal.basis():
        for _ in range(nu):
            b = divide_by_h(b)
        quotients.append(b.coeffs)
    logger.debug(f"Removed h^{nu} from ideal of norm {ideal_norm(ideal)}")
    return _from_vectors(ideal.conductor, quotients)


def ideal_galois(ideal: IdealLattice, t: int) -> IdealLattice:
    """Image of the ideal under zeta -> zeta^t"""
    if ideal.is_zero:
        return ideal
    return _from_vectors(ideal.conductor, [galois(b, t).coeffs for b in ideal.basis()])


def matches_principal(ideal: IdealLattice, g: CycInt) -> bool:
    """True when the ideal equals (g); associates of g pass"""
    if g.is_zero():
        raise IdealError("Candidate generator must be nonzero")
    return ideal_equals(ideal, principal(g))
