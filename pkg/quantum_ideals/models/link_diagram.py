"""
Oriented link diagrams from planar-diagram (PD) codes: parsing, orientation,
crossing signs, linking numbers, sublinks, mirrors, unions and cabling
"""
import json
import logging
import re
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Any, Dict, Hashable, Iterable, List, Optional, Sequence, Tuple, Union

logger = logging.getLogger(__name__)

Dart = Tuple[int, int]
PDTuple = Tuple[int, int, int, int]
ComponentRef = Union[int, str]
# (representative edge label, optional head dart of that edge), or None for a free loop
LayoutEntry = Optional[Tuple[int, Optional[Dart]]]

_PD_RE = re.compile(r'^PD\[\s*(.*?)\s*\]$', re.S)
_X_RE = re.compile(r'X\[\s*(-?\d+)\s*,\s*(-?\d+)\s*,\s*(-?\d+)\s*,\s*(-?\d+)\s*\]')


class PDParseError(ValueError):
    """PD text is malformed or does not describe a planar oriented link"""
    pass


class DiagramError(ValueError):
    """Invalid request against a link diagram"""
    pass


@dataclass(frozen=True)
class PDCode:
    """Crossings as (i, j, k, l), counterclockwise from the incoming under-strand"""
    crossings: Tuple[PDTuple, ...]
    unknots: int = 0

    def to_text(self) -> str:
        body = ', '.join('X[{},{},{},{}]'.format(*x) for x in self.crossings)
        return f'PD[{body}]'

    @property
    def num_crossings(self) -> int:
        return len(self.crossings)


@dataclass(frozen=True)
class Crossing:
    labels: PDTuple
    sign: int
    under: int
    over: int


@dataclass(frozen=True)
class Component:
    index: int
    edges: Tuple[int, ...]
    name: Optional[str] = None

    @property
    def is_free_loop(self) -> bool:
        return not self.edges


class LinkDiagram:
    """An oriented link diagram; treat instances as immutable"""

    def __init__(self, pd: Tuple[PDTuple, ...], layout: Sequence[LayoutEntry],
                 names: Optional[Sequence[Optional[str]]] = None):
        self.pd = tuple(tuple(x) for x in pd)
        traced = _trace(self.pd, layout)
        names = list(names) if names else [None] * len(layout)
        if len(names) != len(layout):
            raise DiagramError("Component names do not match the component count")

        self.edge_tail: Dict[int, Dart] = {}
        self.edge_head: Dict[int, Dart] = {}
        self.edge_component: Dict[int, int] = {}
        components = []
        for idx, cycle in enumerate(traced):
            for e, tail, head in cycle:
                self.edge_tail[e] = tail
                self.edge_head[e] = head
                self.edge_component[e] = idx
            components.append(Component(idx, tuple(e for e, _, _ in cycle), names[idx]))
        self.components: Tuple[Component, ...] = tuple(components)

        heads = set(self.edge_head.values())
        crossings = []
        for c, (i, j, k, l) in enumerate(self.pd):
            sign = 1 if (c, 3) in heads else -1
            crossings.append(Crossing((i, j, k, l), sign, self.edge_component[i], self.edge_component[j]))
        self.crossings: Tuple[Crossing, ...] = tuple(crossings)

    # Construction

    @classmethod
    def from_pd(cls, pd: PDCode, names: Optional[Sequence[Optional[str]]] = None) -> 'LinkDiagram':
        """Default component order: by smallest edge label, free loops last"""
        layout: List[LayoutEntry] = []
        seen: set = set()
        darts = _darts(pd.crossings)
        _validate_darts(darts)
        labels = sorted({lab for x in pd.crossings for lab in x})
        for lab in labels:
            if lab in seen:
                continue
            cycle = _trace_one(pd.crossings, darts, lab, None)
            seen.update(e for e, _, _ in cycle)
            layout.append((lab, None))
        layout.extend([None] * pd.unknots)
        return cls(pd.crossings, layout, names)

    def layout(self) -> List[LayoutEntry]:
        return [None if c.is_free_loop else (c.edges[0], self.edge_head[c.edges[0]])
                for c in self.components]

    # Queries

    @property
    def num_components(self) -> int:
        return len(self.components)

    @property
    def num_crossings(self) -> int:
        return len(self.pd)

    @property
    def num_free_loops(self) -> int:
        return sum(1 for c in self.components if c.is_free_loop)

    @property
    def names(self) -> List[Optional[str]]:
        return [c.name for c in self.components]

    @property
    def key(self) -> Hashable:
        """Identity of the unoriented diagram, used for bracket caching"""
        return (self.pd, tuple(c.is_free_loop for c in self.components))

    def component_index(self, ref: ComponentRef) -> int:
        if isinstance(ref, str):
            for c in self.components:
                if c.name == ref:
                    return c.index
            raise DiagramError(f"Unknown component {ref!r}")
        if not 0 <= ref < len(self.components):
            raise DiagramError(f"Unknown component {ref}")
        return ref

    def writhe(self) -> int:
        return sum(c.sign for c in self.crossings)

    def to_pd(self) -> PDCode:
        return PDCode(self.pd, self.num_free_loops)

    def to_dict(self) -> Dict[str, Any]:
        return {
            'pd': [list(x) for x in self.pd],
            'unknots': self.num_free_loops,
            'components': {c.name: c.index for c in self.components if c.name},
        }

    def __repr__(self) -> str:
        return f"LinkDiagram(crossings={self.num_crossings}, components={self.num_components})"


def _darts(pd: Sequence[PDTuple]) -> Dict[int, List[Dart]]:
    darts: Dict[int, List[Dart]] = defaultdict(list)
    for c, x in enumerate(pd):
        for pos, lab in enumerate(x):
            darts[lab].append((c, pos))
    return darts


def _validate_darts(darts: Dict[int, List[Dart]]) -> None:
    for lab, ds in darts.items():
        if len(ds) != 2:
            raise PDParseError(f"Edge label {lab} occurs {len(ds)} times, expected 2")


def _other(darts: Dict[int, List[Dart]], lab: int, dart: Dart) -> Dart:
    a, b = darts[lab]
    return b if a == dart else a


def _trace_one(pd: Sequence[PDTuple], darts: Dict[int, List[Dart]], start: int,
               head: Optional[Dart]) -> List[Tuple[int, Dart, Dart]]:
    """Walk one component; each step is (edge, tail dart, head dart)"""
    h0 = head if head is not None else darts[start][0]
    cycle = []
    e, h = start, h0
    while True:
        cycle.append((e, _other(darts, e, h), h))
        c, pos = h
        out = (c, (pos + 2) % 4)
        e = pd[c][out[1]]
        h = _other(darts, e, out)
        if (e, h) == (start, h0):
            return cycle


def _reverse(cycle: List[Tuple[int, Dart, Dart]]) -> List[Tuple[int, Dart, Dart]]:
    return [(e, head, tail) for e, tail, head in reversed(cycle)]


def _orient(cycle: List[Tuple[int, Dart, Dart]]) -> List[Tuple[int, Dart, Dart]]:
    """Under-strands run from position 0 to 2; otherwise labels increase"""
    forward = backward = 0
    for _, tail, head in cycle:
        if head[1] == 0 or tail[1] == 2:
            forward += 1
        if head[1] == 2 or tail[1] == 0:
            backward += 1
    if forward and backward:
        raise PDParseError("Component orientation disagrees with under-strand directions")
    if backward:
        return _reverse(cycle)
    if forward:
        return cycle
    labels = [e for e, _, _ in cycle]
    steps = list(zip(labels, labels[1:] + labels[:1]))
    up = sum(1 for a, b in steps if b == a + 1)
    down = sum(1 for a, b in steps if a == b + 1)
    return _reverse(cycle) if down > up else cycle


def _trace(pd: Tuple[PDTuple, ...], layout: Sequence[LayoutEntry]) -> List[List[Tuple[int, Dart, Dart]]]:
    darts = _darts(pd)
    _validate_darts(darts)
    traced = []
    covered: set = set()
    for entry in layout:
        if entry is None:
            traced.append([])
            continue
        lab, head = entry
        if lab not in darts:
            raise PDParseError(f"Unknown edge label {lab}")
        cycle = _trace_one(pd, darts, lab, head)
        cycle = _orient(cycle) if head is None else cycle
        for e, tail, h in cycle:
            if h[1] == 2 or tail[1] == 0:
                raise PDParseError(f"Edge {e} enters an under-crossing from the outgoing side")
        if covered & {e for e, _, _ in cycle}:
            raise PDParseError("Layout names the same component twice")
        covered.update(e for e, _, _ in cycle)
        traced.append(cycle)
    if covered != set(darts):
        raise PDParseError("Layout does not cover every edge of the diagram")
    return traced


def _check_planar(pd: Sequence[PDTuple]) -> None:
    """Euler characteristic 2 on every connected piece of the diagram"""
    if not pd:
        return
    darts = _darts(pd)
    _validate_darts(darts)
    parent = list(range(len(pd)))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for (c1, _), (c2, _) in darts.values():
        parent[find(c1)] = find(c2)
    pieces = len({find(c) for c in range(len(pd))})

    seen: set = set()
    faces = 0
    for c in range(len(pd)):
        for pos in range(4):
            if (c, pos) in seen:
                continue
            faces += 1
            d = (c, pos)
            while d not in seen:
                seen.add(d)
                twin = _other(darts, pd[d[0]][d[1]], d)
                d = (twin[0], (twin[1] + 1) % 4)
    if faces != len(pd) + 2 * pieces:
        raise PDParseError(f"PD code is not planar ({faces} faces for {len(pd)} crossings)")


def parse_pd(text: Union[str, Sequence[Sequence[int]]], unknots: Optional[int] = None) -> PDCode:
    """
    Parse `PD[X[a,b,c,d], ...]` or a JSON list of 4-tuples into a validated
    PDCode. A PD code without crossings is only accepted with an explicit
    unknot count (0 for the empty link).
    """
    if isinstance(text, str):
        stripped = text.strip()
        if stripped.startswith('['):
            try:
                raw = json.loads(stripped)
            except json.JSONDecodeError as e:
                raise PDParseError(f"Malformed JSON PD code: {e}")
        else:
            match = _PD_RE.match(stripped)
            if not match:
                raise PDParseError(f"Expected PD[X[...], ...], got {stripped[:40]!r}")
            body = match.group(1)
            raw = [tuple(int(v) for v in m.groups()) for m in _X_RE.finditer(body)]
            leftover = _X_RE.sub('', body).replace(',', '').strip()
            if leftover:
                raise PDParseError(f"Unexpected text in PD code: {leftover[:40]!r}")
    else:
        raw = text

    crossings = []
    for x in raw:
        if len(x) != 4 or not all(isinstance(v, int) and v > 0 for v in x):
            raise PDParseError(f"Crossing {x} must be four positive integer labels")
        crossings.append(tuple(x))
    if not crossings and unknots is None:
        raise PDParseError("PD code without crossings needs an explicit unknot count")
    unknots = unknots or 0
    if unknots < 0:
        raise PDParseError(f"Unknot count must be nonnegative, got {unknots}")

    pd = PDCode(tuple(crossings), unknots)
    _check_planar(pd.crossings)
    diagram = LinkDiagram.from_pd(pd)
    logger.debug(f"Parsed PD code: {pd.num_crossings} crossings, {diagram.num_components} components")
    return pd


def diagram_from_text(text: str, unknots: Optional[int] = None,
                      names: Optional[Sequence[Optional[str]]] = None) -> LinkDiagram:
    return LinkDiagram.from_pd(parse_pd(text, unknots), names)


def unknot(count: int = 1) -> LinkDiagram:
    return LinkDiagram((), [None] * count)


# Combinatorial invariants


def linking_number(diagram: LinkDiagram, c1: ComponentRef, c2: ComponentRef) -> int:
    a, b = diagram.component_index(c1), diagram.component_index(c2)
    if a == b:
        raise DiagramError("Linking number needs two distinct components")
    total = sum(x.sign for x in diagram.crossings if {x.under, x.over} == {a, b})
    return total // 2


def self_writhe(diagram: LinkDiagram, c: ComponentRef) -> int:
    idx = diagram.component_index(c)
    return sum(x.sign for x in diagram.crossings if x.under == idx and x.over == idx)


def linking_matrix(diagram: LinkDiagram, framings: Sequence[int]) -> List[List[int]]:
    n = diagram.num_components
    if len(framings) != n:
        raise DiagramError(f"Expected {n} framings, got {len(framings)}")
    return [[framings[i] if i == j else linking_number(diagram, i, j) for j in range(n)] for i in range(n)]


# Derived diagrams


def sublink(diagram: LinkDiagram, keep: Iterable[ComponentRef]) -> LinkDiagram:
    """Delete the other components, splicing the strands that crossed them"""
    kept = sorted({diagram.component_index(r) for r in keep})
    parent: Dict[int, int] = {}

    def find(x: int) -> int:
        parent.setdefault(x, x)
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    survivors = []
    for c, x in enumerate(diagram.crossings):
        under_kept, over_kept = x.under in kept, x.over in kept
        i, j, k, l = x.labels
        if under_kept and over_kept:
            survivors.append(c)
        elif under_kept:
            parent[find(i)] = find(k)
        elif over_kept:
            parent[find(j)] = find(l)

    crossing_map = {old: new for new, old in enumerate(survivors)}
    relabel: Dict[int, int] = {}
    layout: List[LayoutEntry] = []
    names = []
    next_label = 1
    for idx in kept:
        comp = diagram.components[idx]
        names.append(comp.name)
        classes = [find(e) for e in comp.edges]
        if len(set(classes)) <= 1:
            layout.append(None)
            continue
        start = next(s for s in range(len(classes)) if classes[s] != classes[s - 1])
        order = comp.edges[start:] + comp.edges[:start]
        first = next_label
        for pos, e in enumerate(order):
            if pos and find(e) != find(order[pos - 1]):
                next_label += 1
            relabel[find(e)] = next_label
        # head of the first run is the head of its last old edge
        run_end = next(e for pos, e in enumerate(order)
                       if pos + 1 == len(order) or find(order[pos + 1]) != find(e))
        hc, hpos = diagram.edge_head[run_end]
        layout.append((first, (crossing_map[hc], hpos)))
        next_label += 1

    pd = tuple(tuple(relabel[find(lab)] for lab in diagram.crossings[c].labels) for c in survivors)
    return LinkDiagram(pd, layout, names)


def mirror(diagram: LinkDiagram) -> LinkDiagram:
    """Swap over and under at every crossing"""
    pd = []
    shifts = []
    for x in diagram.crossings:
        i, j, k, l = x.labels
        if x.sign > 0:
            pd.append((l, i, j, k))
            shifts.append(1)
        else:
            pd.append((j, k, l, i))
            shifts.append(3)
    layout: List[LayoutEntry] = []
    for entry in diagram.layout():
        if entry is None:
            layout.append(None)
        else:
            lab, (c, pos) = entry
            layout.append((lab, (c, (pos + shifts[c]) % 4)))
    return LinkDiagram(tuple(pd), layout, diagram.names)


def disjoint_union(first: LinkDiagram, second: LinkDiagram) -> LinkDiagram:
    offset = max((lab for x in first.pd for lab in x), default=0)
    shift = len(first.pd)
    pd = first.pd + tuple(tuple(lab + offset for lab in x) for x in second.pd)
    layout = first.layout()
    for entry in second.layout():
        if entry is None:
            layout.append(None)
        else:
            lab, (c, pos) = entry
            layout.append((lab + offset, (c + shift, pos)))
    return LinkDiagram(pd, layout, first.names + second.names)


def relabel(diagram: LinkDiagram, mapping: Dict[int, int]) -> LinkDiagram:
    """Rename edge labels; orientation and component order are kept"""
    pd = tuple(tuple(mapping[lab] for lab in x) for x in diagram.pd)
    layout = [None if e is None else (mapping[e[0]], e[1]) for e in diagram.layout()]
    return LinkDiagram(pd, layout, diagram.names)


# Cabling


@dataclass(frozen=True)
class ProjectorMark:
    """Site where a Jones-Wenzl projector is spliced into a cabled component"""
    component: int
    edge: Optional[int]
    strands: int
    inputs: Tuple[Hashable, ...]
    outputs: Tuple[Hashable, ...]


@dataclass(frozen=True)
class CabledDiagram:
    base: LinkDiagram
    multiplicities: Tuple[int, ...]
    crossings: Tuple[Tuple[Tuple[Hashable, Hashable, Hashable, Hashable], int], ...]
    marks: Tuple[ProjectorMark, ...]
    closures: Tuple[Tuple[Hashable, Hashable], ...] = field(default=())

    @property
    def num_crossings(self) -> int:
        return len(self.crossings)


def cable(diagram: LinkDiagram, multiplicities: Sequence[int]) -> CabledDiagram:
    """Blackboard parallel copies, with one projector mark per surviving component"""
    if len(multiplicities) != diagram.num_components:
        raise DiagramError(f"Expected {diagram.num_components} multiplicities, got {len(multiplicities)}")
    if any(m < 0 for m in multiplicities):
        raise DiagramError("Multiplicities must be nonnegative")
    keep = [i for i, m in enumerate(multiplicities) if m > 0]
    base = sublink(diagram, keep)
    mult = tuple(multiplicities[i] for i in keep)

    marked = {comp.edges[0]: comp.index for comp in base.components if not comp.is_free_loop}

    def tail_label(e: int, t: int) -> Hashable:
        return ('e', e, t, 'a') if e in marked else ('e', e, t)

    def head_label(e: int, t: int) -> Hashable:
        return ('e', e, t, 'b') if e in marked else ('e', e, t)

    crossings = []
    for n, x in enumerate(base.crossings):
        i, j, k, l = x.labels
        a, b = mult[x.under], mult[x.over]
        # vertical copies sit at x = t, horizontal copies at y = -s (positive) or y = +s
        vertical_order = list(range(b - 1, -1, -1)) if x.sign > 0 else list(range(b))
        horizontal_order = list(range(a)) if x.sign > 0 else list(range(a - 1, -1, -1))
        if x.sign > 0:
            h_in, h_out = (lambda s: head_label(l, s)), (lambda s: tail_label(j, s))
        else:
            h_in, h_out = (lambda s: head_label(j, s)), (lambda s: tail_label(l, s))
        for t in range(a):
            for s in range(b):
                q = vertical_order.index(s)
                south = head_label(i, t) if q == 0 else ('x', n, 'v', t, q)
                north = tail_label(k, t) if q == b - 1 else ('x', n, 'v', t, q + 1)
                r = horizontal_order.index(t)
                before = h_in(s) if r == 0 else ('x', n, 'h', s, r)
                after = h_out(s) if r == a - 1 else ('x', n, 'h', s, r + 1)
                if x.sign > 0:
                    west, east = before, after
                else:
                    east, west = before, after
                crossings.append(((south, east, north, west), x.sign))

    marks = []
    closures = []
    for comp in base.components:
        m = mult[comp.index]
        if comp.is_free_loop:
            inputs = tuple(('f', comp.index, t, 'a') for t in range(m))
            outputs = tuple(('f', comp.index, t, 'b') for t in range(m))
            closures.extend(zip(outputs, inputs))
            marks.append(ProjectorMark(comp.index, None, m, inputs, outputs))
        else:
            e = comp.edges[0]
            marks.append(ProjectorMark(
                comp.index, e, m,
                tuple(tail_label(e, t) for t in range(m)),
                tuple(head_label(e, t) for t in range(m)),
            ))
    logger.debug(f"Cabled {diagram!r} with {mult}: {len(crossings)} crossings")
    return CabledDiagram(base, mult, tuple(crossings), tuple(marks), tuple(closures))
