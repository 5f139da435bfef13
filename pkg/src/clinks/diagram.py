"""Planar link diagrams: crossings, circuits, Seifert smoothing, invariants.

A diagram is a list of closed oriented polylines in the plane together with a
height (Z) value at every vertex, remembered from the space curve it came
from.  Crossings carry the over/under resolution from the heights and a sign
from the oriented tangent frame: a crossing is positive when the frame
(over direction, under direction) is positively oriented.

Two combinatorial invariants drive everything downstream:

* the writhe, the signed crossing count;
* the rotation number, the total turning of the tangent along all components.

For diagrams obtained from the complex stereographic projection of a sphere
link these satisfy  euler characteristic = rotation - writhe.

Circuits (closed sub-curves compatible with the orientation) support the
height-jump bookkeeping: at each turn the circuit changes strands and the
difference of the two lift heights is its jump.  Every circuit of such a
diagram satisfies  sum(jumps) < 2 * algebraic area.
"""

from __future__ import annotations

import json
from bisect import bisect_left
from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateCrossing
from .geometry import (
    crossing_sign,
    direction_at,
    interpolate,
    point_in_polygon,
    polyline_intersections,
    shoelace_area,
    turning_number,
    winding_number,
)

VERTEX_GUARD = 1e-6      # crossing too close to a vertex, in diameters
HEIGHT_GUARD = 1e-9      # over/under separation too small, in diameters
ANGLE_GUARD = 1e-5       # near-tangential intersection


@dataclass(frozen=True)
class StrandRef:
    """A passage of one component through a crossing."""

    component: int
    position: float          # fractional index along the component polyline
    direction: np.ndarray    # unit tangent in the plane
    height: float


@dataclass(frozen=True)
class Crossing:
    position: np.ndarray
    over: StrandRef
    under: StrandRef
    sign: int

    @property
    def jump(self) -> float:
        """Height gap z_over - z_under; positive for genuine crossings."""
        return self.over.height - self.under.height

    def strand_on(self, component: int, position: float) -> StrandRef:
        for s in (self.over, self.under):
            if s.component == component and abs(s.position - position) < 1e-9:
                return s
        raise KeyError("no such passage")


@dataclass
class LinkDiagram:
    components: list[np.ndarray]          # closed polylines, shape (n, 2)
    z_lifts: list[np.ndarray]             # height per vertex
    crossings: list[Crossing] = field(default_factory=list)

    def diameter(self) -> float:
        if not self.components:
            return 0.0
        allpts = np.vstack(self.components)
        return float(np.linalg.norm(allpts.max(axis=0) - allpts.min(axis=0)))

    def passages(self) -> list[list[tuple[float, int, bool]]]:
        """Per component: sorted (position, crossing index, is_over)."""
        out: list[list[tuple[float, int, bool]]] = [[] for _ in self.components]
        for idx, c in enumerate(self.crossings):
            out[c.over.component].append((c.over.position, idx, True))
            out[c.under.component].append((c.under.position, idx, False))
        for lst in out:
            lst.sort()
        return out

    def height_at(self, component: int, pos: float) -> float:
        z = self.z_lifts[component]
        n = len(z)
        i = int(np.floor(pos)) % n
        frac = pos - np.floor(pos)
        return float(z[i] + frac * (z[(i + 1) % n] - z[i]))


@dataclass
class Circuit:
    """Closed oriented sub-curve; ``arcs`` are (component, passage index).

    Arc (c, k) runs from passage k to passage k+1 of component c.  A
    crossing-free component is the single pseudo-arc (c, -1).  ``turns``
    lists the crossing index entered at the END of each arc (empty for
    smooth circuits).
    """

    arcs: list[tuple[int, int]]
    turns: list[int]
    polygon: np.ndarray

    def orientation(self) -> int:
        return 1 if shoelace_area(self.polygon) > 0 else -1

    def algebraic_area(self) -> float:
        """sum over bounded regions of (winding index) * area."""
        return shoelace_area(self.polygon)

    def region_indices(self, probes: int = 400, rng_seed: int = 0) -> list[tuple[np.ndarray, int]]:
        """Sampled (point, winding index) pairs over the bounding box."""
        rng = np.random.default_rng(rng_seed)
        lo = self.polygon.min(axis=0)
        hi = self.polygon.max(axis=0)
        out = []
        for _ in range(probes):
            q = lo + rng.random(2) * (hi - lo)
            out.append((q, winding_number(self.polygon, q)))
        return out


@dataclass
class SeifertCircleSet:
    circles: list[Circuit]          # one circle per Seifert circuit (same order)
    orientations: list[int]

    @property
    def n_plus(self) -> int:
        return sum(1 for o in self.orientations if o > 0)

    @property
    def n_minus(self) -> int:
        return sum(1 for o in self.orientations if o < 0)

    def __len__(self) -> int:
        return len(self.circles)

    def nested(self, inner: int, outer: int) -> bool:
        """Whether circle ``inner`` lies inside circle ``outer``."""
        probe = _interior_sample(self.circles[inner].polygon)
        return point_in_polygon(self.circles[outer].polygon, probe)


def _interior_sample(polygon: np.ndarray) -> np.ndarray:
    # a vertex midway along the longest edge stays off other circles'
    # corner points, which are the only shared points
    edges = np.linalg.norm(np.roll(polygon, -1, axis=0) - polygon, axis=1)
    i = int(edges.argmax())
    return 0.5 * (polygon[i] + polygon[(i + 1) % len(polygon)])


# ---------------------------------------------------------------------------
# diagram construction


def build_diagram(projected) -> LinkDiagram:
    """Assemble the diagram of a family of projected loops.

    ``projected`` is a list of objects with ``plane()`` and ``heights()``
    (ProjectedLoop), or bare (points2d, z) tuples.  Raises
    DegenerateCrossing for near-tangential intersections, for crossings too
    close to polyline vertices, and for unresolved heights; the caller is
    expected to refine the sampling or perturb and retry.
    """
    comps: list[np.ndarray] = []
    zs: list[np.ndarray] = []
    for item in projected:
        if hasattr(item, "plane"):
            comps.append(np.asarray(item.plane(), dtype=float))
            zs.append(np.asarray(item.heights(), dtype=float))
        else:
            pts, z = item
            comps.append(np.asarray(pts, dtype=float))
            zs.append(np.asarray(z, dtype=float))
    diagram = LinkDiagram(comps, zs)
    scale = max(diagram.diameter(), 1e-300)
    crossings: list[Crossing] = []
    for a in range(len(comps)):
        for b in range(a, len(comps)):
            hits = polyline_intersections(comps[a], comps[b], same=(a == b))
            for i, s, j, u in hits:
                pos_a, pos_b = i + s, j + u
                frac_guard = VERTEX_GUARD
                if min(s, 1 - s, u, 1 - u) < frac_guard:
                    raise DegenerateCrossing(
                        f"crossing at parameter {min(s, 1 - s, u, 1 - u):.2e} from a vertex "
                        f"(components {a},{b}); refine the sampling"
                    )
                da = direction_at(comps[a], pos_a)
                db = direction_at(comps[b], pos_b)
                sin_angle = abs(da[0] * db[1] - da[1] * db[0])
                if sin_angle < ANGLE_GUARD:
                    raise DegenerateCrossing(
                        f"near-tangential intersection between components {a} and {b}"
                    )
                za = diagram.height_at(a, pos_a)
                zb = diagram.height_at(b, pos_b)
                if abs(za - zb) < HEIGHT_GUARD * scale:
                    raise DegenerateCrossing(
                        f"unresolved heights at a crossing of components {a},{b}"
                    )
                pt = interpolate(comps[a], pos_a)
                ref_a = StrandRef(a, pos_a, da, za)
                ref_b = StrandRef(b, pos_b, db, zb)
                over, under = (ref_a, ref_b) if za > zb else (ref_b, ref_a)
                crossings.append(Crossing(pt, over, under, crossing_sign(over.direction, under.direction)))
    # triple-point guard: two crossings nearly coincident
    for i in range(len(crossings)):
        for j in range(i + 1, len(crossings)):
            if np.linalg.norm(crossings[i].position - crossings[j].position) < 10 * VERTEX_GUARD * scale:
                raise DegenerateCrossing("two crossings nearly coincide (triple point?)")
    diagram.crossings = crossings
    return diagram


# ---------------------------------------------------------------------------
# invariants


def writhe(diagram: LinkDiagram) -> int:
    return sum(c.sign for c in diagram.crossings)


def rotation_number(diagram: LinkDiagram) -> int:
    total = 0.0
    for pts in diagram.components:
        total += turning_number(pts)
    rounded = round(total)
    if abs(total - rounded) > 0.05:
        raise ValueError(f"turning numbers far from integers: {total}")
    return int(rounded)


def euler_characteristic(diagram: LinkDiagram) -> int:
    """rotation - writhe; equals chi of the curve piece inside the sphere
    for diagrams produced by the complex stereographic projection."""
    return rotation_number(diagram) - writhe(diagram)


# ---------------------------------------------------------------------------
# circuits and the Seifert smoothing


def _samples_between(pts: np.ndarray, pos_a: float, pos_b: float) -> np.ndarray:
    """Polyline from position a forward to position b (wrapping)."""
    n = len(pts)
    out = [interpolate(pts, pos_a)]
    span = (pos_b - pos_a) % n
    if span == 0:
        span = n
    k = int(np.floor(pos_a)) + 1
    while k - pos_a < span:
        out.append(pts[k % n])
        k += 1
    out.append(interpolate(pts, pos_b))
    return np.array(out)


def seifert_circuits(diagram: LinkDiagram) -> list[Circuit]:
    """The circuits that turn at every crossing they meet.

    These are the boundaries of the oriented smoothing: the incoming strand
    of one passage continues along the outgoing strand of the other.
    """
    passages = diagram.passages()
    # arc (c, k) runs from passage k to passage k+1 (cyclically)
    next_arc: dict[tuple[int, int], tuple[int, int]] = {}
    crossing_of_turn: dict[tuple[int, int], int] = {}
    sides: dict[int, list[tuple[int, int]]] = {}
    for comp, plist in enumerate(passages):
        for k, (_, cid, _) in enumerate(plist):
            sides.setdefault(cid, []).append((comp, k))
    for cid, ends in sides.items():
        (ca, ka), (cb, kb) = ends
        na, nb = len(passages[ca]), len(passages[cb])
        next_arc[(ca, (ka - 1) % na)] = (cb, kb)
        next_arc[(cb, (kb - 1) % nb)] = (ca, ka)
        crossing_of_turn[(ca, (ka - 1) % na)] = cid
        crossing_of_turn[(cb, (kb - 1) % nb)] = cid
    circuits: list[Circuit] = []
    visited: set[tuple[int, int]] = set()
    for comp, plist in enumerate(passages):
        if not plist:
            circuits.append(Circuit([(comp, -1)], [], diagram.components[comp]))
            continue
        for k in range(len(plist)):
            if (comp, k) in visited:
                continue
            arcs: list[tuple[int, int]] = []
            turns: list[int] = []
            cur = (comp, k)
            while cur not in visited:
                visited.add(cur)
                arcs.append(cur)
                turns.append(crossing_of_turn[cur])
                cur = next_arc[cur]
            chunks = []
            for c, kk in arcs:
                plist_c = passages[c]
                pos_a = plist_c[kk][0]
                pos_b = plist_c[(kk + 1) % len(plist_c)][0]
                chunks.append(_samples_between(diagram.components[c], pos_a, pos_b)[:-1])
            circuits.append(Circuit(arcs, turns, np.vstack(chunks)))
    return circuits


def seifert_circles(diagram: LinkDiagram) -> SeifertCircleSet:
    """Oriented smoothing of every crossing.

    The smoothed circles correspond one to one with the Seifert circuits
    (same list index); the circle's plane orientation is the circuit's.
    """
    circuits = seifert_circuits(diagram)
    return SeifertCircleSet(circuits, [c.orientation() for c in circuits])


def jumps(diagram: LinkDiagram, circuit: Circuit) -> list[float]:
    """Height jumps at the circuit's turns: z(next strand) - z(this strand)."""
    passages = diagram.passages()
    out = []
    for (comp, k), cid in zip(circuit.arcs, circuit.turns):
        if k == -1:
            continue
        plist = passages[comp]
        pos_end = plist[(k + 1) % len(plist)][0]
        crossing = diagram.crossings[cid]
        this_strand = crossing.strand_on(comp, pos_end)
        other = crossing.over if this_strand is crossing.under else crossing.under
        out.append(other.height - this_strand.height)
    return out


def stokes_check(diagram: LinkDiagram, circuit: Circuit, slack: float = 1e-9) -> tuple[float, float, bool]:
    """(sum of jumps, 2 * algebraic area, sum < 2A).

    The algebraic area equals the winding-index-weighted region area by
    Green's theorem; the polygon line integral computes it exactly.
    """
    lhs = float(sum(jumps(diagram, circuit)))
    rhs = 2.0 * circuit.algebraic_area()
    return lhs, rhs, lhs < rhs + slack


# ---------------------------------------------------------------------------
# export


def diagram_to_dict(diagram: LinkDiagram) -> dict:
    return {
        "components": [
            {"vertices": pts.tolist(), "z_lift": z.tolist()}
            for pts, z in zip(diagram.components, diagram.z_lifts)
        ],
        "crossings": [
            {
                "position": c.position.tolist(),
                "over": [c.over.component, c.over.position],
                "under": [c.under.component, c.under.position],
                "sign": c.sign,
                "jump": c.jump,
            }
            for c in diagram.crossings
        ],
        "writhe": writhe(diagram),
        "rotation": rotation_number(diagram),
    }


def diagram_to_json(diagram: LinkDiagram) -> str:
    return json.dumps(diagram_to_dict(diagram), indent=1, sort_keys=True)


def pd_code(diagram: LinkDiagram) -> str:
    """Extended PD code: per crossing the four incident arcs, counter-
    clockwise from the incoming under-strand.

    Arcs are the diagram arcs between consecutive passages, numbered per
    component; crossing-free components are listed separately.
    """
    passages = diagram.passages()
    arc_ids: dict[tuple[int, int], int] = {}
    nxt = 1
    for comp, plist in enumerate(passages):
        for k in range(len(plist)):
            arc_ids[(comp, k)] = nxt
            nxt += 1
    quads = []
    for cid, c in enumerate(diagram.crossings):
        ends = {}
        for ref, role in ((c.under, "under"), (c.over, "over")):
            plist = passages[ref.component]
            k = next(i for i, (pos, cc, _) in enumerate(plist) if cc == cid and abs(pos - ref.position) < 1e-12)
            n = len(plist)
            ends[role] = {
                "in": arc_ids[(ref.component, (k - 1) % n)],
                "out": arc_ids[(ref.component, k)],
                "dir": ref.direction,
            }
        # counter-clockwise order around the crossing starting at in-under
        u = ends["under"]
        o = ends["over"]
        if c.sign > 0:
            quad = (u["in"], o["out"], u["out"], o["in"])
        else:
            quad = (u["in"], o["in"], u["out"], o["out"])
        quads.append("X[%d,%d,%d,%d]" % quad)
    free = [f"O[{comp}]" for comp, plist in enumerate(passages) if not plist]
    return "PD[" + ", ".join(quads + free) + "]"
