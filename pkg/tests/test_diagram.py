"""Tests for diagram construction, invariants, circuits, and Stokes checks."""

import numpy as np
import pytest

from clinks.diagram import (
    build_diagram,
    euler_characteristic,
    jumps,
    pd_code,
    rotation_number,
    seifert_circles,
    seifert_circuits,
    stokes_check,
    writhe,
)
from clinks.fixtures import PAPER_CUBIC, braid_closure_polylines, torus_diagram_polylines
from clinks.projection import project_link
from clinks.tracing import trace_link

from synthetic import add_kink, add_slide_bulge, circle


def diagram_of(curve, r, kind="complex", **kw):
    link = trace_link(curve, r, **kw)
    return build_diagram(project_link(link, kind))


class TestBuildDiagram:
    def test_embedded_loop_has_no_crossings(self):
        d = build_diagram([circle((0, 0), 1.0)])
        assert d.crossings == []

    def test_concentric_circles_have_no_crossings(self):
        d = build_diagram([circle((0, 0), 1.0), circle((0, 0), 2.0)])
        assert d.crossings == []

    def test_paper_cubic_standard_projection(self):
        d = diagram_of(PAPER_CUBIC, 0.8, kind="standard")
        assert len(d.crossings) == 2
        assert all(c.sign == 1 for c in d.crossings)

    def test_crossing_count_invariant_under_plane_rotation(self):
        link = trace_link(PAPER_CUBIC, 0.8)
        loops = project_link(link, "standard")
        d0 = build_diagram(loops)
        rng = np.random.default_rng(4)
        for _ in range(3):
            th = rng.uniform(0, 2 * np.pi)
            rot = np.array([[np.cos(th), -np.sin(th)], [np.sin(th), np.cos(th)]])
            rotated = [(lp.plane() @ rot.T, lp.heights()) for lp in loops]
            d1 = build_diagram(rotated)
            assert len(d1.crossings) == len(d0.crossings)
            assert sorted(c.sign for c in d1.crossings) == sorted(c.sign for c in d0.crossings)


class TestWritheRotation:
    def test_zero_crossing_unknot(self):
        d = build_diagram([circle((0, 0), 1.0)])
        assert writhe(d) == 0
        assert rotation_number(d) == 1
        assert euler_characteristic(d) == 1

    def test_clockwise_circle(self):
        d = build_diagram([circle((0, 0), 1.0, ccw=False)])
        assert rotation_number(d) == -1

    def test_torus_link_diagrams(self):
        for delta in (2, 3):
            d = build_diagram(torus_diagram_polylines(delta))
            assert writhe(d) == delta * (delta - 1)
            assert rotation_number(d) == delta
            assert euler_characteristic(d) == delta - delta * (delta - 1)

    def test_braid_closure_signs(self):
        d = build_diagram(braid_closure_polylines([1, 1, 1], 2))
        assert writhe(d) == 3
        assert rotation_number(d) == 2
        d = build_diagram(braid_closure_polylines([-1, -1], 2))
        assert writhe(d) == -2

    def test_paper_cubic_complex_chi(self):
        d = diagram_of(PAPER_CUBIC, 0.8, kind="complex")
        assert euler_characteristic(d) == 1  # trivial knot bounding a disk


class TestReidemeisterEdits:
    def base(self):
        return circle((0, 0), 2.0, n=60)

    def test_kink_edits_cover_the_four_types(self):
        pts, z = self.base()
        d0 = build_diagram([(pts, z)])
        w0, r0 = writhe(d0), rotation_number(d0)
        seen = set()
        for ccw in (True, False):
            for first_over in (True, False):
                kp, kz = add_kink(pts, z, 10, ccw=ccw, first_over=first_over)
                d1 = build_diagram([(kp, kz)])
                dw = writhe(d1) - w0
                dr = rotation_number(d1) - r0
                assert abs(dw) == 1 and abs(dr) == 1
                assert len(d1.crossings) == 1
                seen.add((dw, dr))
        assert seen == {(1, 1), (1, -1), (-1, 1), (-1, -1)}

    def test_positive_positive_kink_preserves_chi(self):
        pts, z = self.base()
        d0 = build_diagram([(pts, z)])
        for ccw in (True, False):
            for first_over in (True, False):
                kp, kz = add_kink(pts, z, 10, ccw=ccw, first_over=first_over)
                d1 = build_diagram([(kp, kz)])
                dw = writhe(d1) - writhe(d0)
                dr = rotation_number(d1) - rotation_number(d0)
                if (dw, dr) in {(1, 1), (-1, -1)}:
                    assert euler_characteristic(d1) == euler_characteristic(d0)

    def test_slide_bulge_is_writhe_and_rot_neutral(self):
        a_pts, a_z = circle((-1.2, 0), 1.0, n=60)
        b_pts, b_z = circle((1.2, 0), 1.0, n=60)
        d0 = build_diagram([(a_pts, a_z), (b_pts, b_z)])
        slid = add_slide_bulge(a_pts, a_z, 0, b_pts, over=True)
        d1 = build_diagram([slid, (b_pts, b_z)])
        assert len(d1.crossings) == 2
        assert writhe(d1) == writhe(d0) == 0
        assert rotation_number(d1) == rotation_number(d0) == 2
        signs = sorted(c.sign for c in d1.crossings)
        assert signs == [-1, 1]

    def test_omega3_via_braid_relation(self):
        d1 = build_diagram(braid_closure_polylines([1, 2, 1], 3))
        d2 = build_diagram(braid_closure_polylines([2, 1, 2], 3))
        assert writhe(d1) == writhe(d2)
        assert rotation_number(d1) == rotation_number(d2)

    def test_disjoint_circle_changes_rot_only(self):
        pts, z = self.base()
        d0 = build_diagram([(pts, z)])
        d_plus = build_diagram([(pts, z), circle((6, 0), 0.5)])
        assert rotation_number(d_plus) == rotation_number(d0) + 1
        assert writhe(d_plus) == writhe(d0)
        d_minus = build_diagram([(pts, z), circle((6, 0), 0.5, ccw=False)])
        assert rotation_number(d_minus) == rotation_number(d0) - 1


class TestSeifert:
    def test_unknot_smooths_to_itself(self):
        d = build_diagram([circle((0, 0), 1.0)])
        cs = seifert_circles(d)
        assert len(cs) == 1
        assert cs.n_plus == 1 and cs.n_minus == 0

    def test_braid_closure_smooths_to_concentric_circles(self):
        d = build_diagram(braid_closure_polylines([1], 2))
        cs = seifert_circles(d)
        assert len(cs) == 2
        assert cs.n_plus == 2 and cs.n_minus == 0
        assert cs.nested(0, 1) or cs.nested(1, 0)

    def test_paper_cubic_standard_has_one_reversed_circuit(self):
        d = diagram_of(PAPER_CUBIC, 0.8, kind="standard")
        cs = seifert_circles(d)
        assert len(cs) == 3
        assert sorted(cs.orientations) in ([-1, 1, 1], [-1, -1, 1])
        assert cs.orientations.count(-1) == 1

    def test_torus_link_circle_count(self):
        d = build_diagram(torus_diagram_polylines(3))
        cs = seifert_circles(d)
        assert len(cs) == 3
        assert cs.n_plus == 3


class TestJumpsAndStokes:
    def test_smooth_circuit_has_no_jumps(self):
        d = build_diagram([circle((0, 0), 1.0)])
        (circuit,) = seifert_circuits(d)
        assert jumps(d, circuit) == []

    def test_kinked_loop_jump_sign(self):
        pts, z = circle((0, 0), 2.0, n=60)
        for first_over in (True, False):
            kp, kz = add_kink(pts, z, 10, ccw=True, first_over=first_over)
            d = build_diagram([(kp, kz)])
            assert len(d.crossings) == 1
            for circuit in seifert_circuits(d):
                lam = jumps(d, circuit)
                assert len(lam) == 1
                # the two circuits at one crossing see opposite jumps
            both = [jumps(d, c)[0] for c in seifert_circuits(d)]
            assert both[0] == pytest.approx(-both[1])
            assert abs(both[0]) == pytest.approx(d.crossings[0].jump)

    def test_round_circle_stokes(self):
        d = build_diagram([circle((0, 0), 1.5)])
        (circuit,) = seifert_circuits(d)
        lhs, rhs, ok = stokes_check(d, circuit)
        assert lhs == 0
        assert rhs == pytest.approx(2 * np.pi * 1.5**2, rel=3e-3)
        assert ok

    def test_negative_circle_fails_stokes(self):
        d = build_diagram([circle((0, 0), 1.5, ccw=False)])
        (circuit,) = seifert_circuits(d)
        lhs, rhs, ok = stokes_check(d, circuit)
        assert rhs == pytest.approx(-2 * np.pi * 1.5**2, rel=3e-3)
        assert not ok

    def test_pipeline_diagram_passes_stokes_on_every_circuit(self):
        for r in (0.3, 0.8):
            link = trace_link(PAPER_CUBIC, r)
            d = build_diagram(project_link(link, "complex"))
            for circuit in seifert_circuits(d):
                lhs, rhs, ok = stokes_check(d, circuit)
                assert ok, (r, lhs, rhs)

    def test_negative_circuits_have_negative_jumps(self):
        link = trace_link(PAPER_CUBIC, 0.8)
        d = build_diagram(project_link(link, "complex"))
        for circuit in seifert_circuits(d):
            if circuit.orientation() < 0:
                assert min(jumps(d, circuit)) < 0

    def test_algebraic_area_matches_sampled_winding(self):
        # Monte Carlo oracle for the winding-weighted area
        d = build_diagram(braid_closure_polylines([1, 1], 2))
        for circuit in seifert_circuits(d):
            exact = circuit.algebraic_area()
            lo = circuit.polygon.min(axis=0)
            hi = circuit.polygon.max(axis=0)
            box = float(np.prod(hi - lo))
            rng = np.random.default_rng(0)
            pts = lo + rng.random((20000, 2)) * (hi - lo)
            acc = sum(
                _winding(circuit.polygon, q) for q in pts
            ) * box / len(pts)
            assert acc == pytest.approx(exact, abs=0.05 * max(1.0, abs(exact)))


def _winding(polygon, q):
    from clinks.geometry import winding_number

    return winding_number(polygon, q)


class TestExports:
    def test_pd_code_shape(self):
        d = build_diagram(braid_closure_polylines([1, 1, 1], 2))
        code = pd_code(d)
        assert code.startswith("PD[")
        assert code.count("X[") == 3

    def test_pd_code_free_component(self):
        d = build_diagram([circle((0, 0), 1.0)])
        assert pd_code(d) == "PD[O[0]]"

    def test_json_round_trip_fields(self):
        import json

        from clinks.diagram import diagram_to_json

        d = build_diagram(braid_closure_polylines([1], 2))
        data = json.loads(diagram_to_json(d))
        assert data["writhe"] == 1
        assert data["rotation"] == 2
        assert len(data["components"]) == 1
        assert len(data["crossings"]) == 1
