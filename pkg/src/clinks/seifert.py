"""The signed multigraph of Seifert circles and its doubly negative index.

Vertices are the circles of the oriented smoothing, signed by their plane
orientation; edges are the crossings, signed by the crossing sign.  Two
circles are compatible when they induce the same generator of the homology
of the annulus between them on the sphere; in the plane this reads: nested
circles are compatible iff equally oriented, unnested ones iff oppositely
oriented.  h(D) counts incompatible pairs and is the quantity the braiding
moves drive to zero.

The doubly negative index of the graph is the largest number of negative
edges, each touching a negative vertex, that are cyclically independent: no
k of them lie on a cycle of 2k or fewer edges.  A branch-and-bound search
computes it exactly (with a budget flag), and an exhaustive oracle checks it
on small graphs.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from .diagram import LinkDiagram, SeifertCircleSet, seifert_circuits
from .errors import TooLarge

CYCLE_BUDGET = 200_000
NODE_BUDGET = 2_000_000


@dataclass(frozen=True)
class GraphEdge:
    id: int
    u: int
    v: int
    sign: int
    crossing: int | None = None


@dataclass
class SeifertGraph:
    vertex_signs: list[int]
    edges: list[GraphEdge]
    nesting: set[tuple[int, int]] = field(default_factory=set)  # (inner, outer)

    @property
    def n_vertices(self) -> int:
        return len(self.vertex_signs)

    def multiplicity(self, u: int, v: int) -> int:
        a, b = min(u, v), max(u, v)
        return sum(1 for e in self.edges if (min(e.u, e.v), max(e.u, e.v)) == (a, b))

    def valency(self, v: int) -> int:
        return sum(1 for e in self.edges if v in (e.u, e.v))

    def to_dict(self) -> dict:
        return {
            "vertices": [{"id": i, "sign": s} for i, s in enumerate(self.vertex_signs)],
            "edges": [
                {"id": e.id, "ends": [e.u, e.v], "sign": e.sign, "crossing": e.crossing}
                for e in self.edges
            ],
            "nesting": sorted(self.nesting),
        }

    def to_dot(self) -> str:
        lines = ["graph seifert {"]
        for i, s in enumerate(self.vertex_signs):
            shape = "circle" if s > 0 else "doublecircle"
            lines.append(f'  v{i} [label="{"+" if s > 0 else "-"}{i}", shape={shape}];')
        for e in self.edges:
            style = "solid" if e.sign > 0 else "dashed"
            lines.append(f'  v{e.u} -- v{e.v} [style={style}, label="{e.id}"];')
        lines.append("}")
        return "\n".join(lines)


def build_graph(diagram: LinkDiagram, circles: SeifertCircleSet) -> SeifertGraph:
    """One vertex per Seifert circle, one edge per crossing."""
    touched: dict[int, list[int]] = {}
    for ci, circuit in enumerate(circles.circles):
        for cid in circuit.turns:
            touched.setdefault(cid, []).append(ci)
    edges = []
    for cid in sorted(touched):
        ends = touched[cid]
        if len(ends) != 2 or ends[0] == ends[1]:
            raise ValueError(f"crossing {cid} does not join two distinct circles: {ends}")
        edges.append(GraphEdge(len(edges), ends[0], ends[1], diagram.crossings[cid].sign, cid))
    nesting = set()
    for i in range(len(circles)):
        for j in range(len(circles)):
            if i != j and circles.nested(i, j):
                nesting.add((i, j))
    return SeifertGraph(list(circles.orientations), edges, nesting)


def incompatible_pairs(circles: SeifertCircleSet) -> int:
    """h(D): pairs inducing opposite annulus generators."""
    h = 0
    for i, j in combinations(range(len(circles)), 2):
        nested = circles.nested(i, j) or circles.nested(j, i)
        same = circles.orientations[i] == circles.orientations[j]
        if (nested and not same) or (not nested and same):
            h += 1
    return h


def compatible_by_winding(poly_a: np.ndarray, poly_b: np.ndarray,
                          probe_a: np.ndarray, probe_b: np.ndarray) -> bool:
    """Annulus-homology compatibility computed from winding numbers.

    The class of each circle in the annulus between them is measured by a
    winding number; nested circles compare directly, unnested ones with a
    sign flip (the annulus closes up through infinity on the sphere).
    """
    from .geometry import point_in_polygon, winding_number

    a_in_b = point_in_polygon(poly_b, probe_a)
    b_in_a = point_in_polygon(poly_a, probe_b)
    if a_in_b:
        return winding_number(poly_a, probe_a) == winding_number(poly_b, probe_a)
    if b_in_a:
        return winding_number(poly_a, probe_b) == winding_number(poly_b, probe_b)
    return winding_number(poly_a, probe_a) == -winding_number(poly_b, probe_b)


@dataclass(frozen=True)
class IndexResult:
    value: int
    exact: bool
    edge_ids: tuple[int, ...]


def _vertex_cycles(graph: SeifertGraph, budget: int):
    """Vertex-simple cycles of length >= 3, as slot lists of vertex pairs.

    Returns (cycles, exhausted) where each cycle is a tuple of normalized
    vertex pairs; parallel-edge choices are resolved by the caller.
    """
    n = graph.n_vertices
    neighbors: dict[int, set[int]] = {v: set() for v in range(n)}
    for e in graph.edges:
        neighbors[e.u].add(e.v)
        neighbors[e.v].add(e.u)
    cycles: list[tuple[tuple[int, int], ...]] = []
    count = 0

    def extend(start: int, path: list[int]):
        nonlocal count
        count += 1
        if count > budget:
            raise TooLarge("cycle enumeration budget exhausted")
        last = path[-1]
        for nxt in sorted(neighbors[last]):
            if nxt == start and len(path) >= 3:
                if path[1] < path[-1]:  # each cycle once per direction
                    pairs = tuple(
                        (min(a, b), max(a, b))
                        for a, b in zip(path, path[1:] + [start])
                    )
                    cycles.append(pairs)
            elif nxt > start and nxt not in path:
                extend(start, path + [nxt])

    exhausted = True
    try:
        for s in range(n):
            extend(s, [s])
    except TooLarge:
        exhausted = False
    return cycles, exhausted


def _pair_of(edge: GraphEdge) -> tuple[int, int]:
    return (min(edge.u, edge.v), max(edge.u, edge.v))


def doubly_negative_index(graph: SeifertGraph, cycle_budget: int = CYCLE_BUDGET,
                          node_budget: int = NODE_BUDGET) -> IndexResult:
    """Maximum cyclically independent set of doubly negative edges.

    Exact branch and bound; when a budget runs out the best feasible set
    found so far is returned with ``exact=False`` (a certified lower bound).
    """
    candidates = [
        e for e in graph.edges
        if e.sign < 0
        and (graph.vertex_signs[e.u] < 0 or graph.vertex_signs[e.v] < 0)
        and graph.multiplicity(e.u, e.v) == 1  # else it sits on a 2-cycle
    ]
    if not candidates:
        return IndexResult(0, True, ())
    cycles, cycles_exact = _vertex_cycles(graph, cycle_budget)
    pair_sets = [frozenset(c) for c in cycles]
    lengths = [len(c) for c in cycles]
    candidates.sort(key=lambda e: e.id)

    def feasible(chosen_pairs: set[tuple[int, int]]) -> bool:
        for pairs, length in zip(pair_sets, lengths):
            hits = len(pairs & chosen_pairs)
            if hits and length <= 2 * hits:
                return False
        return True

    best: list[GraphEdge] = []
    nodes = 0
    exact = cycles_exact

    def search(idx: int, chosen: list[GraphEdge], chosen_pairs: set[tuple[int, int]]):
        nonlocal best, nodes, exact
        nodes += 1
        if nodes > node_budget:
            exact = False
            return
        if len(chosen) > len(best):
            best = list(chosen)
        if idx == len(candidates) or len(chosen) + len(candidates) - idx <= len(best):
            return
        edge = candidates[idx]
        pair = _pair_of(edge)
        if pair not in chosen_pairs:  # two chosen parallels always dependent
            trial = chosen_pairs | {pair}
            if feasible(trial):
                chosen.append(edge)
                search(idx + 1, chosen, trial)
                chosen.pop()
        search(idx + 1, chosen, chosen_pairs)

    search(0, [], set())
    return IndexResult(len(best), exact, tuple(e.id for e in best))


def _edge_cycles(graph: SeifertGraph, max_edges: int = 20):
    """All simple cycles as explicit edge-id sets (oracle-side enumeration)."""
    if len(graph.edges) > max_edges:
        raise TooLarge(f"oracle limited to {max_edges} edges")
    by_pair: dict[tuple[int, int], list[GraphEdge]] = {}
    for e in graph.edges:
        by_pair.setdefault(_pair_of(e), []).append(e)
    cycles: list[frozenset[int]] = []
    for pair, es in by_pair.items():
        for e1, e2 in combinations(es, 2):
            cycles.append(frozenset((e1.id, e2.id)))
    vcycles, exhausted = _vertex_cycles(graph, CYCLE_BUDGET)
    if not exhausted:
        raise TooLarge("oracle cycle enumeration exhausted")
    for pairs in vcycles:
        options = [by_pair[p] for p in pairs]
        def expand(i, acc):
            if i == len(options):
                cycles.append(frozenset(acc))
                return
            for e in options[i]:
                expand(i + 1, acc + [e.id])
        expand(0, [])
    return cycles


def ind_oracle(graph: SeifertGraph) -> int:
    """Exhaustive check of every edge subset against every explicit cycle."""
    cycles = _edge_cycles(graph)
    candidates = [
        e.id for e in graph.edges
        if e.sign < 0 and (graph.vertex_signs[e.u] < 0 or graph.vertex_signs[e.v] < 0)
    ]
    best = 0
    for size in range(len(candidates), 0, -1):
        if size <= best:
            break
        for subset in combinations(candidates, size):
            s = frozenset(subset)
            ok = True
            for cycle in cycles:
                k = len(s & cycle)
                if k and len(cycle) <= 2 * k:
                    ok = False
                    break
            if ok:
                best = size
                break
    return best


def graph_to_json(graph: SeifertGraph) -> str:
    return json.dumps(graph.to_dict(), indent=1, sort_keys=True)
