"""
FKB ideals of 3-manifolds L_k obtained by k-surgery on one component of a
two-component link, with homology, classification and consistency checks
"""
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from math import ceil, gcd
from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple, Union

from ..models.cyclotomic import INFINITY, CycInt, h_element, i_decompose, parse_cycint
from ..models.ideal_lattice import (
    IdealLattice,
    ideal_breve,
    ideal_contains,
    ideal_equals,
    ideal_from_generators,
    ideal_norm,
    ideal_nu_h,
    ideal_power,
    matches_principal,
    principal,
    unit_ideal,
)
from ..models.link_diagram import ComponentRef, DiagramError, LinkDiagram, linking_number, sublink
from .quantum_invariant import (
    InvariantValue,
    SurgeryPresentation,
    invariant_Ip,
    invariant_tau3,
    invariant_tv3,
)
from .skein_eval import DEFAULT_FRONTIER_CAP, omega_bracket, standard_A

logger = logging.getLogger(__name__)

LARGE = 'Large'
SMALL = 'Small'


class MixedGeneratorError(ArithmeticError):
    """A generator has nonzero parts in both Z[zeta_p] and i*Z[zeta_p]"""
    pass


@dataclass(frozen=True, eq=False)
class FkbInput:
    """Two-component link with K surgered at framing k and J left as boundary torus"""
    diagram: LinkDiagram
    k: int
    p: int
    surgery_component: int = 0
    boundary_component: int = 1
    frontier_cap: int = DEFAULT_FRONTIER_CAP

    @classmethod
    def build(cls, diagram: LinkDiagram, k: int, p: int, surgery: ComponentRef = 'K',
              frontier_cap: int = DEFAULT_FRONTIER_CAP) -> 'FkbInput':
        if diagram.num_components != 2:
            raise DiagramError(f"FKB ideals need a two-component link, got {diagram.num_components}")
        if isinstance(surgery, str) and not any(diagram.names):
            # unnamed diagrams surger their first component
            surgery = 0
        K = diagram.component_index(surgery)
        return cls(diagram, k, p, K, 1 - K, frontier_cap)

    @property
    def d(self) -> int:
        return (self.p - 1) // 2

    @property
    def linking(self) -> int:
        return linking_number(self.diagram, self.surgery_component, self.boundary_component)

    def framings(self, s: int) -> Tuple[int, int]:
        framing = [0, 0]
        framing[self.surgery_component] = self.k
        framing[self.boundary_component] = s
        return tuple(framing)

    def presentation(self, s: int) -> SurgeryPresentation:
        """L_{k,s}"""
        return SurgeryPresentation(self.diagram, self.framings(s))

    def with_k(self, k: int) -> 'FkbInput':
        return FkbInput(self.diagram, k, self.p, self.surgery_component,
                        self.boundary_component, self.frontier_cap)


@dataclass
class FkbResult:
    input: FkbInput
    ideal: IdealLattice
    generators: List[InvariantValue]
    normalized: List[CycInt]
    torsion: int
    classification: str
    nu_h: Union[int, float]
    norm: int
    principal_match: Optional[str] = None

    @property
    def is_homology_circle(self) -> bool:
        return self.torsion == 1

    def to_row(self, link: str = '') -> Dict[str, Any]:
        return {
            'link': link,
            'K': self.input.surgery_component,
            'k': self.input.k,
            'ideal_hnf_hash': self.ideal.fingerprint(),
            'norm': self.norm,
            'nu_h': 'inf' if self.nu_h == INFINITY else self.nu_h,
            'classification': self.classification,
            'principal_match': self.principal_match or '',
            'homology_circle': self.is_homology_circle,
        }

    def to_dict(self) -> Dict[str, Any]:
        data = self.to_row()
        data.update({
            'p': self.input.p,
            'generators': [g.to_dict() for g in self.generators],
            'normalized_generators': [g.to_text() for g in self.normalized],
            'ideal': self.ideal.to_dict(self.principal_match),
            'homology': {'rank': 1, 'torsion': self.torsion},
            'linking_number': self.input.linking,
        })
        return data


@dataclass
class CheckReport:
    name: str
    passed: bool
    details: List[str] = field(default_factory=list)

    def to_dict(self) -> Dict[str, Any]:
        return {'check': self.name, 'passed': self.passed, 'details': self.details}


def _generator_task(args: Tuple[FkbInput, int]) -> InvariantValue:
    fkb_input, s = args
    return invariant_Ip(fkb_input.presentation(s), fkb_input.p, fkb_input.frontier_cap)


def fkb_generators(fkb_input: FkbInput, jobs: int = 1) -> List[InvariantValue]:
    """I_p(L_{k,s}) for s = 0..d-1"""
    tasks = [(fkb_input, s) for s in range(fkb_input.d)]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as executor:
            return list(executor.map(_generator_task, tasks))
    return [_generator_task(t) for t in tasks]


def normalize_generators(gens: Sequence[Union[InvariantValue, CycInt]], p: int) -> List[CycInt]:
    """Project generators of the O-ideal to generators in Z[zeta_p]"""
    result = []
    for g in gens:
        value = g.value if isinstance(g, InvariantValue) else g
        if value.conductor == p:
            result.append(value)
            continue
        re, im = i_decompose(value)
        if not re.is_zero() and not im.is_zero():
            raise MixedGeneratorError(f"Generator {value.to_text()} mixes real and i parts")
        result.append(im if re.is_zero() else re)
    return result


def homology_Lk(fkb_input: FkbInput) -> Tuple[int, int]:
    """H_1(L_k) = Z + Z_gcd(k, lk), with gcd(0, 0) = 0 meaning a second Z"""
    return 1, gcd(fkb_input.k, abs(fkb_input.linking))


def large_ideal(fkb_input: FkbInput) -> IdealLattice:
    """The ideal predicted by homology alone: (1) or (h^(d-1))"""
    p = fkb_input.p
    _, torsion = homology_Lk(fkb_input)
    if torsion % p:
        return unit_ideal(p)
    return ideal_power(principal(h_element(p)), fkb_input.d - 1)


def classify(fkb_input: FkbInput, ideal: IdealLattice) -> str:
    return LARGE if ideal_equals(ideal, large_ideal(fkb_input)) else SMALL


def fkb_ideal(fkb_input: FkbInput, candidates: Iterable[str] = (), jobs: int = 1) -> FkbResult:
    """The ideal generated by I_p of the d closed manifolds L_{k,s}"""
    p = fkb_input.p
    gens = fkb_generators(fkb_input, jobs)
    normalized = normalize_generators(gens, p)
    ideal = ideal_from_generators(p, normalized)
    _, torsion = homology_Lk(fkb_input)
    match = None
    for text in candidates:
        if matches_principal(ideal, parse_cycint(text, p)):
            match = text
            break
    result = FkbResult(
        input=fkb_input,
        ideal=ideal,
        generators=gens,
        normalized=normalized,
        torsion=torsion,
        classification=classify(fkb_input, ideal),
        nu_h=ideal_nu_h(ideal),
        norm=ideal_norm(ideal),
        principal_match=match,
    )
    logger.info(
        f"I_{p}(L_k) for k={fkb_input.k}: norm {result.norm}, nu_h {result.nu_h}, {result.classification}"
    )
    return result


# Consistency checks


def homology_nu_h_bound(dim_h1: int, genus: int, d: int) -> int:
    """Lower bound on nu_h of the ideal from dim H_1(N; Z_p) and the boundary genus"""
    if dim_h1 <= genus:
        return 0
    return max(d - 1, ceil((d - 1) * (dim_h1 - genus) / 3))


def nu_h_bound_check(fkb_input: FkbInput, result: FkbResult) -> CheckReport:
    """nu_h >= d-1 iff nu_h > 0 iff gcd(k, lk, p) != 1, and the homology bound"""
    d, p = fkb_input.d, fkb_input.p
    nu = result.nu_h
    divisible = gcd(gcd(fkb_input.k, abs(fkb_input.linking)), p) != 1
    details = []
    if (nu >= d - 1) != (nu > 0) and d > 1:
        details.append(f"nu_h = {nu} lies strictly between 0 and d-1 = {d - 1}")
    if (nu > 0) != divisible:
        details.append(f"nu_h = {nu} but gcd(k, lk, p) {'!=' if divisible else '=='} 1")
    dim_h1 = 1 + (1 if divisible else 0)
    bound = homology_nu_h_bound(dim_h1, 1, d)
    if dim_h1 == 1 and nu != 0:
        details.append(f"dim H_1(L_k; Z_p) = genus but nu_h = {nu}")
    if nu < bound:
        details.append(f"nu_h = {nu} below the homology bound {bound}")
    return CheckReport('nu_h_bound', not details, details)


def embedding_monotonicity_check(fkb_input: FkbInput, result: FkbResult,
                                 sample_s: Iterable[int] = range(-10, 11)) -> CheckReport:
    """Every closed L_{k,s} contains L_k, so I_p(L_{k,s}) lies in the ideal"""
    details = []
    for s in sample_s:
        value = invariant_Ip(fkb_input.presentation(s), fkb_input.p, fkb_input.frontier_cap)
        (part,) = normalize_generators([value], fkb_input.p)
        if not ideal_contains(result.ideal, part):
            details.append(f"I_p(L_(k,{s})) = {part.to_text()} is not in the ideal")
    return CheckReport('embedding_monotonicity', not details, details)


def period_check(fkb_input: FkbInput, result: Optional[FkbResult] = None, jobs: int = 1) -> CheckReport:
    """The ideal for k and for k + p coincide"""
    result = result or fkb_ideal(fkb_input, jobs=jobs)
    shifted = fkb_ideal(fkb_input.with_k(fkb_input.k + fkb_input.p), jobs=jobs)
    ok = ideal_equals(result.ideal, shifted.ideal)
    details = [] if ok else [f"k={fkb_input.k} and k={fkb_input.k + fkb_input.p} give different ideals"]
    return CheckReport('period', ok, details)


def knot_surgery(fkb_input: FkbInput) -> SurgeryPresentation:
    """K(k): k-framed surgery on K alone"""
    return SurgeryPresentation(sublink(fkb_input.diagram, [fkb_input.surgery_component]), (fkb_input.k,))


def knot_surgery_check(fkb_input: FkbInput, result: FkbResult) -> CheckReport:
    """A unit I_p(K(k)) forces p not dividing k and a large ideal; an associate
    of h^(d-1) with p | lk forces p | k and a large ideal"""
    p, d = fkb_input.p, fkb_input.d
    value = invariant_Ip(knot_surgery(fkb_input), p, fkb_input.frontier_cap)
    (part,) = normalize_generators([value], p)
    details = []
    if value.is_unit():
        if fkb_input.k % p == 0:
            details.append("I_p(K(k)) is a unit but p divides k")
        if result.classification != LARGE:
            details.append("I_p(K(k)) is a unit but the ideal is small")
    elif fkb_input.linking % p == 0 and matches_principal(
            ideal_power(principal(h_element(p)), d - 1), part):
        if fkb_input.k % p:
            details.append("I_p(K(k)) is h^(d-1) up to units but p does not divide k")
        if result.classification != LARGE:
            details.append("I_p(K(k)) is h^(d-1) up to units but the ideal is small")
    return CheckReport("knot_surgery", not details, details)


def omega_bracket_ideal(fkb_input: FkbInput) -> IdealLattice:
    """Ideal of the unnormalized brackets <K(t^k omega) u J(t^s omega)>, s = 0..d-1"""
    params = standard_A(fkb_input.p)
    gens = []
    for s in range(fkb_input.d):
        value = omega_bracket(fkb_input.diagram, fkb_input.framings(s), params, fkb_input.frontier_cap)
        gens.append(value.to_cycint())
    return ideal_from_generators(fkb_input.p, gens)


def breve_cross_check(fkb_input: FkbInput, result: FkbResult) -> CheckReport:
    ours = ideal_breve(result.ideal)
    theirs = ideal_breve(omega_bracket_ideal(fkb_input))
    ok = ideal_equals(ours, theirs)
    details = [] if ok else [f"breve norms differ: {ideal_norm(ours)} vs {ideal_norm(theirs)}"]
    return CheckReport('breve', ok, details)


# SU(2) level 3 samples


@dataclass
class Tau3Sample:
    s: int
    tau3: CycInt
    tv3: CycInt


def tau3_samples(fkb_input: FkbInput, s_values: Iterable[int]) -> List[Tau3Sample]:
    """tau_3 and TV_3 of L_{k,s} for the requested s"""
    samples = []
    for s in s_values:
        pres = fkb_input.presentation(s)
        tau = invariant_tau3(pres, fkb_input.frontier_cap).value
        samples.append(Tau3Sample(s, tau, invariant_tv3(pres, fkb_input.frontier_cap)))
    return samples


def tau3_ideal(samples: Sequence[Tau3Sample]) -> IdealLattice:
    return ideal_from_generators(8, [x.tau3 for x in samples])


def tv3_ideal(samples: Sequence[Tau3Sample]) -> IdealLattice:
    """TV_3 samples, extended from Z[sqrt 2] to Z[zeta_8]"""
    return ideal_from_generators(8, [x.tv3 for x in samples])
