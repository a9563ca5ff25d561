"""
Kauffman bracket evaluation at roots of unity: Temperley-Lieb elements,
Jones-Wenzl projectors and a sweep over cabled link diagrams
"""
import logging
import threading
from collections import defaultdict
from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from typing import Any, Dict, Hashable, List, Optional, Sequence, Tuple

from sympy import isprime

from ..models.cyclotomic import CycFrac, CycInt
from ..models.link_diagram import CabledDiagram, LinkDiagram, cable, self_writhe

logger = logging.getLogger(__name__)

DEFAULT_FRONTIER_CAP = 24

Matching = Tuple[int, ...]
Pairing = Tuple[Tuple[int, int], ...]


class FrontierOverflowError(RuntimeError):
    """Sweep frontier grew past the configured cap"""
    pass


class ColorRangeError(ValueError):
    """Color outside the small range of the theory"""
    pass


@dataclass(frozen=True)
class BracketParams:
    """Bracket variable A, loop value delta and the theory they belong to"""
    theory: str
    level: int
    conductor: int
    A: CycInt
    A_order: int
    delta: CycInt

    @property
    def tag(self) -> str:
        return f'{self.theory}-{self.level}'

    @property
    def max_color(self) -> int:
        if self.theory == 'SO3':
            return (self.level - 3) // 2
        return self.level - 2

    @property
    def colors(self) -> range:
        return range(self.max_color + 1)

    def A_power(self, m: int) -> CycInt:
        return _A_power(self, m % self.A_order)

    def qint(self, m: int) -> CycInt:
        """[m] = (A^2m - A^-2m) / (A^2 - A^-2)"""
        if m < 0:
            return -self.qint(-m)
        total = CycInt.zero(self.conductor)
        for j in range(m):
            total = total + self.A_power(2 * (m - 1 - 2 * j))
        return total

    def twist_power(self, c: int, m: int) -> CycInt:
        """mu_c^m with mu_c = (-1)^c A^(c^2 + 2c)"""
        value = self.A_power((c * c + 2 * c) * m)
        return -value if (c * m) % 2 else value

    def describe(self) -> Dict[str, Any]:
        return {'theory': self.tag, 'A': f'({self.A.to_text()}) in conductor {self.conductor}'}


@lru_cache(maxsize=None)
def _A_power(params: BracketParams, e: int) -> CycInt:
    return params.A ** e


def standard_A(p: int) -> BracketParams:
    """SO(3) parameters: A = -zeta_p^((p+1)/2), so A^2 = zeta_p"""
    if p < 5 or not isprime(p):
        raise ColorRangeError(f"p must be an odd prime >= 5, got {p}")
    A = -CycInt.zeta(p, (p + 1) // 2)
    A2 = CycInt.zeta(p)
    delta = -(A2 + CycInt.zeta(p, -1))
    return BracketParams('SO3', p, p, A, 2 * p, delta)


def su2_params(r: int = 3) -> BracketParams:
    """SU(2) parameters at level r with A = zeta_4r, living in conductor 24"""
    if r != 3:
        raise ColorRangeError(f"Only r = 3 is supported, got {r}")
    n = 24
    A = CycInt.zeta(n, n // (4 * r))
    delta = -(A * A + CycInt.zeta(n, -2 * n // (4 * r)))
    return BracketParams('SU2', r, n, A, 4 * r, delta)


# Temperley-Lieb algebra


def _compose(lower: Matching, upper: Matching, c: int) -> Tuple[Matching, int]:
    """Stack upper on top of lower; returns the matching and closed loop count"""
    result: List[Optional[int]] = [None] * (2 * c)
    visited = set()
    for start in range(2 * c):
        if result[start] is not None:
            continue
        in_lower, pt = start < c, start
        while True:
            partner = (lower if in_lower else upper)[pt]
            if in_lower:
                if partner < c:
                    break
                visited.add(partner - c)
                in_lower, pt = False, partner - c
            else:
                if partner >= c:
                    break
                visited.add(partner)
                in_lower, pt = True, partner + c
        result[start], result[partner] = partner, start
    loops = 0
    for m in range(c):
        if m in visited:
            continue
        loops += 1
        cur = m
        while cur not in visited:
            visited.add(cur)
            bottom = upper[cur]
            visited.add(bottom)
            cur = lower[bottom + c] - c
    return tuple(result), loops


class TLElement:
    """Linear combination of crossingless matchings on c strands.

    Points 0..c-1 are the bottom endpoints, c..2c-1 the top ones, both
    numbered left to right.
    """

    def __init__(self, strands: int, terms: Dict[Matching, CycFrac], params: BracketParams):
        self.strands = strands
        self.params = params
        self.terms = {m: v for m, v in terms.items() if not v.is_zero()}

    @classmethod
    def identity(cls, c: int, params: BracketParams) -> 'TLElement':
        match = tuple(list(range(c, 2 * c)) + list(range(c)))
        return cls(c, {match: CycFrac.one(params.conductor)}, params)

    @classmethod
    def cup_cap(cls, c: int, i: int, params: BracketParams) -> 'TLElement':
        """e_i joining strands i-1 and i at the bottom and at the top"""
        match = list(range(c, 2 * c)) + list(range(c))
        a, b = i - 1, i
        match[a], match[b] = b, a
        match[c + a], match[c + b] = c + b, c + a
        return cls(c, {tuple(match): CycFrac.one(params.conductor)}, params)

    def __add__(self, other: 'TLElement') -> 'TLElement':
        terms = dict(self.terms)
        for m, v in other.terms.items():
            terms[m] = terms[m] + v if m in terms else v
        return TLElement(self.strands, terms, self.params)

    def __sub__(self, other: 'TLElement') -> 'TLElement':
        return self + other.scale(CycFrac.of(CycInt.scalar(self.params.conductor, -1)))

    def scale(self, k: CycFrac) -> 'TLElement':
        return TLElement(self.strands, {m: v * k for m, v in self.terms.items()}, self.params)

    def __mul__(self, other: 'TLElement') -> 'TLElement':
        """self below, other on top"""
        c = self.strands
        delta = CycFrac.of(self.params.delta)
        terms: Dict[Matching, CycFrac] = {}
        for m1, v1 in self.terms.items():
            for m2, v2 in other.terms.items():
                m, loops = _compose(m1, m2, c)
                value = v1 * v2 * (delta ** loops)
                terms[m] = terms[m] + value if m in terms else value
        return TLElement(c, terms, self.params)

    def tensor_identity(self) -> 'TLElement':
        """Add one straight strand on the right"""
        c = self.strands
        terms = {}
        for m, v in self.terms.items():
            new = [0] * (2 * c + 2)
            for x in range(2 * c):
                y = m[x]
                nx = x if x < c else x + 1
                ny = y if y < c else y + 1
                new[nx] = ny
            new[c], new[2 * c + 1] = 2 * c + 1, c
            terms[tuple(new)] = v
        return TLElement(c + 1, terms, self.params)

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, TLElement):
            return NotImplemented
        return self.strands == other.strands and (self - other).is_zero()

    def __repr__(self) -> str:
        return f"TLElement(strands={self.strands}, terms={len(self.terms)})"


@lru_cache(maxsize=None)
def jones_wenzl(c: int, params: BracketParams) -> TLElement:
    """f_c by the Wenzl recursion f_(n+1) = f_n x 1 + ([n]/[n+1]) (f_n x 1) e_n (f_n x 1)"""
    if c < 0 or c > params.max_color:
        raise ColorRangeError(f"Color {c} outside 0..{params.max_color} for {params.tag}")
    f = TLElement.identity(0, params)
    for n in range(c):
        lifted = f.tensor_identity()
        if n == 0:
            f = lifted
            continue
        denom = params.qint(n + 1)
        if denom.is_zero():
            raise ColorRangeError(f"[{n + 1}] vanishes for {params.tag}")
        coeff = CycFrac.of(params.qint(n)) / CycFrac.of(denom)
        e = TLElement.cup_cap(n + 1, n, params)
        f = lifted + (lifted * e * lifted).scale(coeff)
    return f


# Sweep evaluation


@dataclass
class _Node:
    labels: List[int]
    terms: List[Tuple[Pairing, CycFrac]]


def _build_nodes(cabled: CabledDiagram, params: BracketParams,
                 insertions: Optional[Sequence[TLElement]]) -> List[_Node]:
    ids: Dict[Hashable, int] = {}

    def lid(label: Hashable) -> int:
        if label not in ids:
            ids[label] = len(ids)
        return ids[label]

    one = CycFrac.one(params.conductor)
    A = CycFrac.of(params.A)
    A_inv = CycFrac.of(params.A_power(-1))
    raw: List[Tuple[List[Hashable], List[Tuple[Tuple[Tuple[int, int], ...], CycFrac]]]] = []
    for (s, e, n, w), _sign in cabled.crossings:
        raw.append(([s, e, n, w], [(((0, 1), (2, 3)), A), (((0, 3), (1, 2)), A_inv)]))
    for idx, mark in enumerate(cabled.marks):
        element = insertions[idx] if insertions is not None else jones_wenzl(mark.strands, params)
        if element.strands != mark.strands:
            raise ValueError(f"Insertion on {element.strands} strands for a {mark.strands}-strand mark")
        terms = []
        for match, v in element.terms.items():
            pairs = tuple((x, match[x]) for x in range(len(match)) if x < match[x])
            terms.append((pairs, v))
        raw.append((list(mark.inputs) + list(mark.outputs), terms))
    for a, b in cabled.closures:
        raw.append(([a, b], [(((0, 1),), one)]))

    nodes = []
    for labels, terms in raw:
        local = []
        for lab in labels:
            x = lid(lab)
            if x in local:
                # a strand leaving and re-entering the same node: route it through a bridge
                fresh = lid(('bridge', len(ids)))
                nodes.append(_Node([x, fresh], [(((x, fresh),), one)]))
                x = fresh
            local.append(x)
        nodes.append(_Node(local, [
            (tuple(tuple(sorted((local[u], local[v]))) for u, v in pairs), value)
            for pairs, value in terms
        ]))
    counts: Dict[int, int] = defaultdict(int)
    for node in nodes:
        for x in node.labels:
            counts[x] += 1
    if any(v != 2 for v in counts.values()):
        raise ValueError("Cabled diagram has a dangling strand end")
    return nodes


def _merge(left: Pairing, right: Pairing) -> Tuple[Pairing, int]:
    """Glue two pairings along shared endpoints; returns open pairing and loop count"""
    edges = list(left) + list(right)
    adj: Dict[int, List[int]] = defaultdict(list)
    for eid, (u, v) in enumerate(edges):
        adj[u].append(eid)
        adj[v].append(eid)
    used = [False] * len(edges)
    result = []
    for start, incident in adj.items():
        if len(incident) != 1 or used[incident[0]]:
            continue
        cur, eid = start, incident[0]
        while True:
            used[eid] = True
            u, v = edges[eid]
            nxt = v if u == cur else u
            if len(adj[nxt]) == 1:
                break
            e0, e1 = adj[nxt]
            eid = e1 if e0 == eid else e0
            cur = nxt
        result.append((start, nxt) if start < nxt else (nxt, start))
    loops = 0
    for eid0 in range(len(edges)):
        if used[eid0]:
            continue
        loops += 1
        cur, eid = edges[eid0][0], eid0
        while not used[eid]:
            used[eid] = True
            u, v = edges[eid]
            cur = v if u == cur else u
            e0, e1 = adj[cur]
            eid = e1 if e0 == eid else e0
    return tuple(sorted(result)), loops


def _greedy_order(nodes: List[_Node]) -> List[int]:
    remaining = set(range(len(nodes)))
    frontier: set = set()
    order = []
    while remaining:
        best = min(remaining, key=lambda i: (
            -len(frontier.intersection(nodes[i].labels)),
            len(frontier.symmetric_difference(nodes[i].labels)),
            i,
        ))
        order.append(best)
        remaining.discard(best)
        frontier.symmetric_difference_update(nodes[best].labels)
    return order


def bracket(cabled: CabledDiagram, params: BracketParams,
            insertions: Optional[Sequence[TLElement]] = None,
            order: Optional[Sequence[int]] = None,
            frontier_cap: int = DEFAULT_FRONTIER_CAP) -> CycFrac:
    """Kauffman bracket of a cabled diagram with projector insertions; the empty diagram is 1"""
    nodes = _build_nodes(cabled, params, insertions)
    if order is None:
        order = _greedy_order(nodes)
    elif sorted(order) != list(range(len(nodes))):
        raise ValueError("Sweep order must be a permutation of the diagram's nodes")

    delta = CycFrac.of(params.delta)
    delta_powers = [CycFrac.one(params.conductor)]
    state: Dict[Pairing, CycFrac] = {(): CycFrac.one(params.conductor)}
    frontier: set = set()
    widest = 0
    for idx in order:
        node = nodes[idx]
        frontier.symmetric_difference_update(node.labels)
        if len(frontier) > frontier_cap:
            raise FrontierOverflowError(
                f"Frontier of {len(frontier)} endpoints exceeds cap {frontier_cap}"
            )
        widest = max(widest, len(frontier))
        new_state: Dict[Pairing, CycFrac] = {}
        for pairing, coeff in state.items():
            for node_pairing, node_coeff in node.terms:
                merged, loops = _merge(pairing, node_pairing)
                while len(delta_powers) <= loops:
                    delta_powers.append(delta_powers[-1] * delta)
                value = coeff * node_coeff * delta_powers[loops]
                if merged in new_state:
                    new_state[merged] = new_state[merged] + value
                else:
                    new_state[merged] = value
        state = {k: v for k, v in new_state.items() if not v.is_zero()}
        logger.debug(f"Node {idx}: frontier {len(frontier)}, {len(state)} states")
    logger.debug(f"Swept {len(nodes)} nodes, widest frontier {widest}")
    return state.get((), CycFrac.zero(params.conductor))


# Memo cache for unframed colored brackets


class BracketCache:
    """Process-wide memo of colored brackets, safe for concurrent threads"""

    def __init__(self):
        self._store: Dict[Hashable, CycFrac] = {}
        self._lock = threading.Lock()
        self.enabled = True
        self.hits = 0
        self.misses = 0

    def get(self, key: Hashable) -> Optional[CycFrac]:
        if not self.enabled:
            return None
        with self._lock:
            value = self._store.get(key)
            if value is None:
                self.misses += 1
            else:
                self.hits += 1
            return value

    def put(self, key: Hashable, value: CycFrac) -> None:
        if not self.enabled:
            return
        with self._lock:
            self._store[key] = value

    def clear(self) -> None:
        with self._lock:
            self._store.clear()
            self.hits = self.misses = 0

    def disable(self) -> None:
        logger.warning("Bracket cache disabled")
        self.enabled = False
        self.clear()

    def stats(self) -> Dict[str, int]:
        with self._lock:
            return {'entries': len(self._store), 'hits': self.hits, 'misses': self.misses}


# Global instance
bracket_cache = BracketCache()


def _check_colors(colors: Sequence[int], params: BracketParams) -> None:
    for c in colors:
        if c < 0 or c > params.max_color:
            raise ColorRangeError(f"Color {c} outside 0..{params.max_color} for {params.tag}")


def colored_bracket(diagram: LinkDiagram, colors: Sequence[int], framings: Optional[Sequence[int]],
                    params: BracketParams, frontier_cap: int = DEFAULT_FRONTIER_CAP,
                    cache: Optional[BracketCache] = None) -> CycFrac:
    """Bracket of the diagram colored by f_c per component, corrected to the given framings"""
    if len(colors) != diagram.num_components:
        raise ValueError(f"Expected {diagram.num_components} colors, got {len(colors)}")
    _check_colors(colors, params)
    cache = bracket_cache if cache is None else cache

    key = (diagram.key, tuple(colors), params.theory, params.level)
    value = cache.get(key)
    if value is None:
        value = bracket(cable(diagram, colors), params, frontier_cap=frontier_cap)
        cache.put(key, value)

    if framings is not None:
        for idx, c in enumerate(colors):
            shift = framings[idx] - self_writhe(diagram, idx)
            if c and shift:
                value = value * params.twist_power(c, shift)
    return value


def omega_bracket(diagram: LinkDiagram, framings: Sequence[int], params: BracketParams,
                  frontier_cap: int = DEFAULT_FRONTIER_CAP,
                  cache: Optional[BracketCache] = None) -> CycFrac:
    """Bracket with every component colored by sum_c (-1)^c [c+1] f_c"""
    total = CycFrac.zero(params.conductor)
    weights = {c: params.qint(c + 1) * (-1 if c % 2 else 1) for c in params.colors}
    for colors in product(params.colors, repeat=diagram.num_components):
        weight = CycInt.one(params.conductor)
        for c in colors:
            weight = weight * weights[c]
        total = total + colored_bracket(diagram, colors, framings, params, frontier_cap, cache) * weight
    logger.debug(f"omega bracket over {len(params.colors) ** diagram.num_components} colorings")
    return total


def colored_unknot_value(c: int, params: BracketParams) -> CycInt:
    value = params.qint(c + 1)
    return -value if c % 2 else value


def colored_hopf_value(c1: int, c2: int, params: BracketParams) -> CycInt:
    value = params.qint((c1 + 1) * (c2 + 1))
    return -value if (c1 + c2) % 2 else value
