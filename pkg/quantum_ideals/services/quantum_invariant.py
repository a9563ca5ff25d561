"""
Closed 3-manifold invariants from framed surgery presentations:
the SO(3) invariant I_p, the SU(2) invariant tau_3 and TV_3
"""
import hashlib
import logging
from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

from sympy import Matrix, Symbol
from sympy.polys.domains import ZZ
from sympy.polys.matrices import DM
from sympy.polys.matrices.normalforms import smith_normal_form

from ..models.cyclotomic import (
    INFINITY,
    CycFrac,
    CycInt,
    CyclotomicError,
    galois,
    gauss_sum,
    i_unit,
    is_unit,
    norm,
    nu_h,
)
from ..models.link_diagram import LinkDiagram, disjoint_union, linking_matrix, unknot
from .skein_eval import (
    DEFAULT_FRONTIER_CAP,
    BracketCache,
    BracketParams,
    omega_bracket,
    standard_A,
    su2_params,
)

logger = logging.getLogger(__name__)

_x = Symbol('x')


class IntegralityError(ArithmeticError):
    """Invariant did not land in the expected ring"""
    pass


@dataclass(frozen=True)
class LinkingMatrix:
    rows: Tuple[Tuple[int, ...], ...]

    @property
    def size(self) -> int:
        return len(self.rows)

    def determinant(self) -> int:
        if not self.rows:
            return 1
        return int(Matrix(self.rows).det())


@dataclass(frozen=True, eq=False)
class SurgeryPresentation:
    """A link diagram with one integer framing per component"""
    diagram: LinkDiagram
    framings: Tuple[int, ...]

    def __post_init__(self):
        if len(self.framings) != self.diagram.num_components:
            raise ValueError(
                f"{self.diagram.num_components} components but {len(self.framings)} framings"
            )

    @classmethod
    def empty(cls) -> 'SurgeryPresentation':
        return cls(unknot(0), ())

    @classmethod
    def framed_unknot(cls, k: int) -> 'SurgeryPresentation':
        return cls(unknot(1), (k,))

    def linking_matrix(self) -> LinkingMatrix:
        return LinkingMatrix(tuple(tuple(r) for r in linking_matrix(self.diagram, list(self.framings))))

    def with_framings(self, framings: Sequence[int]) -> 'SurgeryPresentation':
        return SurgeryPresentation(self.diagram, tuple(framings))

    def connected_sum(self, other: 'SurgeryPresentation') -> 'SurgeryPresentation':
        return SurgeryPresentation(disjoint_union(self.diagram, other.diagram), self.framings + other.framings)

    def stabilize(self, sign: int) -> 'SurgeryPresentation':
        """Blow up: add a split unknot framed +1 or -1"""
        return self.connected_sum(SurgeryPresentation.framed_unknot(1 if sign > 0 else -1))

    def fingerprint(self) -> str:
        text = repr((self.diagram.key, self.framings))
        return hashlib.sha1(text.encode()).hexdigest()[:12]


@dataclass(frozen=True)
class InvariantValue:
    value: CycInt
    theory: str
    level: int
    presentation_hash: str
    convention: str

    @property
    def conductor(self) -> int:
        return self.value.conductor

    def nu_h(self) -> Optional[Union[int, float]]:
        """h-valuation of an SO(3) value; None for SU(2) values"""
        if self.theory != 'SO3':
            return None
        return nu_h(self.value, self.level)

    def norm(self) -> int:
        return norm(self.value)

    def is_unit(self) -> bool:
        return is_unit(self.value)

    def to_dict(self) -> Dict[str, Any]:
        nu = self.nu_h()
        return {
            'theory': self.theory,
            'p': self.level,
            'value': self.value.to_text(),
            'conductor': self.conductor,
            'nu_h': 'inf' if nu == INFINITY else nu,
            'is_unit': self.is_unit(),
            'norm': self.norm(),
            'presentation': self.presentation_hash,
        }


def signature_data(matrix: Union[LinkingMatrix, Sequence[Sequence[int]]]) -> Tuple[int, int, int]:
    """(b_plus, b_minus, nullity) from sign changes of the characteristic polynomial"""
    rows = matrix.rows if isinstance(matrix, LinkingMatrix) else tuple(tuple(r) for r in matrix)
    if not rows:
        return 0, 0, 0
    coeffs = [int(c) for c in reversed(Matrix(rows).charpoly(_x).all_coeffs())]
    nullity = next(k for k, c in enumerate(coeffs) if c)
    trimmed = coeffs[nullity:]

    def sign_changes(seq: List[int]) -> int:
        signs = [c > 0 for c in seq if c]
        return sum(1 for a, b in zip(signs, signs[1:]) if a != b)

    b_plus = sign_changes(trimmed)
    b_minus = sign_changes([c if k % 2 == 0 else -c for k, c in enumerate(trimmed)])
    return b_plus, b_minus, nullity


def homology_closed(matrix: Union[LinkingMatrix, Sequence[Sequence[int]]]) -> Tuple[int, List[int]]:
    """H_1 of the surgered manifold: (free rank, torsion coefficients > 1)"""
    rows = matrix.rows if isinstance(matrix, LinkingMatrix) else tuple(tuple(r) for r in matrix)
    if not rows:
        return 0, []
    snf = smith_normal_form(DM([list(r) for r in rows], ZZ)).to_Matrix()
    diagonal = [abs(int(snf[i, i])) for i in range(len(rows))]
    return sum(1 for d in diagonal if d == 0), sorted(d for d in diagonal if d > 1)


def zp_rank(matrix: Union[LinkingMatrix, Sequence[Sequence[int]]], p: int) -> int:
    """dim H_1(M; Z_p)"""
    free, torsion = homology_closed(matrix)
    return free + sum(1 for d in torsion if d % p == 0)


def _surgery_core(pres: SurgeryPresentation, params: BracketParams, frontier_cap: int,
                  cache: Optional[BracketCache]) -> Tuple[CycFrac, int]:
    """<L(omega)> G+^-b+ G-^-b- eta^(2*floor(n0/2)), and the nullity"""
    b_plus, b_minus, nullity = signature_data(pres.linking_matrix())
    core = omega_bracket(pres.diagram, pres.framings, params, frontier_cap, cache)
    g_plus = omega_bracket(unknot(1), [1], params, frontier_cap, cache)
    g_minus = omega_bracket(unknot(1), [-1], params, frontier_cap, cache)
    # eta^-2 = G+ G-
    eta_sq = (g_plus * g_minus).inverse()
    value = core * g_plus.inverse() ** b_plus * g_minus.inverse() ** b_minus * eta_sq ** (nullity // 2)
    logger.debug(f"Surgery core: b+={b_plus} b-={b_minus} nullity={nullity}")
    return value, nullity


def invariant_Ip(pres: SurgeryPresentation, p: int, frontier_cap: int = DEFAULT_FRONTIER_CAP,
                 cache: Optional[BracketCache] = None) -> InvariantValue:
    """I_p(M), valued in Z[zeta_p] (p = 3 mod 4) or Z[zeta_4p] (p = 1 mod 4)"""
    params = standard_A(p)
    value, nullity = _surgery_core(pres, params, frontier_cap, cache)
    gauss = gauss_sum(p)
    if nullity % 2:
        # eta = (zeta - zeta^-1) / sqrt(-p) = (zeta - zeta^-1) sqrt(-p) / (-p)
        zeta_diff = CycInt.zeta(p) - CycInt.zeta(p, -1)
        value = value * CycFrac.of(zeta_diff * gauss.g, -p)
    try:
        result = value.to_cycint()
    except CyclotomicError as e:
        raise IntegralityError(f"I_{p} is not integral: {e}")
    ring = p if p % 4 == 3 else 4 * p
    if ring != p:
        result = result.embed(ring)
        if nullity % 2:
            result = result * i_unit(ring)
    logger.info(f"I_{p} of presentation {pres.fingerprint()}: {result.to_text()} (conductor {ring})")
    return InvariantValue(result, 'SO3', p, pres.fingerprint(), gauss.convention_tag)


SQRT2_24 = CycInt.from_exponents(24, {3: 1, 21: 1})


def invariant_tau3(pres: SurgeryPresentation, frontier_cap: int = DEFAULT_FRONTIER_CAP,
                   cache: Optional[BracketCache] = None) -> InvariantValue:
    """tau_3(M) in Z[zeta_8]"""
    params = su2_params(3)
    value, nullity = _surgery_core(pres, params, frontier_cap, cache)
    if nullity % 2:
        # eta = 1 / sqrt(2) = sqrt(2) / 2
        value = value * CycFrac.of(SQRT2_24, 2)
    try:
        result = value.to_cycint()
    except CyclotomicError as e:
        raise IntegralityError(f"tau_3 is not integral: {e}")
    if galois(result, 17) != result:
        raise IntegralityError(f"tau_3 value {result.to_text()} is outside Z[zeta_8]")
    restricted = result.restrict(8)
    logger.info(f"tau_3 of presentation {pres.fingerprint()}: {restricted.to_text()}")
    return InvariantValue(restricted, 'SU2', 3, pres.fingerprint(), 'sqrt(2) = zeta_24^3 + zeta_24^21')


def invariant_tv3(pres: SurgeryPresentation, frontier_cap: int = DEFAULT_FRONTIER_CAP,
                  cache: Optional[BracketCache] = None) -> CycInt:
    """tau_3 times its complex conjugate, in Z[sqrt 2] inside Z[zeta_8]"""
    tau = invariant_tau3(pres, frontier_cap, cache).value
    return tau * galois(tau, -1 % 8)


def sqrt2_coordinates(x: CycInt) -> Tuple[int, int]:
    """(a, b) with x = a + b*sqrt(2), sqrt(2) = zeta_8 - zeta_8^3"""
    if x.conductor != 8:
        raise IntegralityError(f"Expected a conductor 8 value, got {x.conductor}")
    a, b, c, d = x.coeffs
    if c != 0 or d != -b:
        raise IntegralityError(f"{x.to_text()} is not in Z[sqrt 2]")
    return a, b


def h_divisibility_holds(pres: SurgeryPresentation, value: InvariantValue) -> bool:
    """When H_1(M; Z_p) is nonzero, h^(d-1) must divide I_p(M)"""
    p = value.level
    if zp_rank(pres.linking_matrix(), p) == 0:
        return True
    return value.nu_h() >= (p - 3) // 2
