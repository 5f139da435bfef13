"""Tests for link tracing: seeding, continuation, orientation, margins."""

import numpy as np
import pytest

from clinks.curves import ImplicitCurve, ParametricCurve, critical_radii
from clinks.tracing import (
    axis_clearance,
    ensure_axis_clear,
    orient_link,
    seed_points,
    trace_link,
    transversality_margin,
)

LINE_Y = ImplicitCurve({(0, 1): 1.0})
LINE_AFFINE = ImplicitCurve({(1, 0): 1.0, (0, 1): 1.0, (0, 0): 1.0})
PAPER_CUBIC = ParametricCurve(
    (-0.2052 + 0.0618j, -0.2986 - 0.4498j, -0.1048 + 0.0393j, 0.2563 - 0.1587j),
    (-0.244 + 0.3914j, -0.4694 - 0.1366j, 0.0099 + 0.1586j, -0.4786 - 0.2976j),
)
# the same line, parametrically: x = t, y = -t - 1
PARAM_LINE = ParametricCurve((0.0, 1.0 + 0.0j), (-1.0, -1.0 + 0.0j))


def residual(curve, loop, r):
    worst = 0.0
    for x, y in zip(loop.xs, loop.ys):
        if isinstance(curve, ImplicitCurve):
            from clinks.curves import evaluate

            worst = max(worst, abs(evaluate(curve, (x, y))[0]))
        worst = max(worst, abs(abs(x) ** 2 + abs(y) ** 2 - r * r))
    return worst


class TestSeeds:
    def test_unit_circle_seeds(self):
        pts = seed_points(LINE_Y, 1.0)
        assert pts
        for x, y in pts:
            assert abs(abs(x) - 1.0) < 1e-8
            assert abs(y) < 1e-8

    def test_empty_below_critical_radius(self):
        assert seed_points(LINE_AFFINE, 0.5) == []

    def test_paper_cubic_nonempty(self):
        assert seed_points(PAPER_CUBIC, 0.8)


class TestTrace:
    def test_line_y_is_one_round_loop(self):
        link = trace_link(LINE_Y, 1.0)
        assert len(link.loops) == 1
        loop = link.loops[0]
        assert residual(LINE_Y, loop, 1.0) < 1e-9
        assert np.all(np.abs(loop.ys) < 1e-9)

    def test_affine_line_small_loop_above_birth(self):
        r = 1 / np.sqrt(2) + 0.02
        link = trace_link(LINE_AFFINE, r)
        assert len(link.loops) == 1
        loop = link.loops[0]
        center = np.array([loop.xs.mean(), loop.ys.mean()])
        assert np.linalg.norm(center - np.array([-0.5, -0.5])) < 0.05

    def test_affine_line_empty_below_birth(self):
        link = trace_link(LINE_AFFINE, 0.5)
        assert link.loops == []

    def test_paper_cubic_components_per_interval(self):
        hints = critical_radii(PAPER_CUBIC, 1.0)
        for r, expected in [(0.3, 1), (0.39, 2), (0.5, 1), (0.7, 2), (0.8, 1)]:
            link = trace_link(PAPER_CUBIC, r, hints=hints)
            assert len(link.loops) == expected, f"r={r}"

    def test_hint_free_density_doubling_finds_newborn(self):
        # just above the second birth the new loop is tiny
        link = trace_link(PAPER_CUBIC, 0.3757, density=256)
        assert len(link.loops) == 2

    def test_samples_satisfy_invariants(self):
        hints = critical_radii(PAPER_CUBIC, 1.0)
        link = trace_link(PAPER_CUBIC, 0.8, hints=hints)
        for loop in link.loops:
            assert residual(PAPER_CUBIC, loop, 0.8) < 1e-9 * (1 + PAPER_CUBIC.coeff_norm())

    def test_halved_step_changes_geometry_little(self):
        link1 = trace_link(PAPER_CUBIC, 0.8, step=0.04)
        link2 = trace_link(PAPER_CUBIC, 0.8, step=0.02)
        a = link1.loops[0].r4()
        b = link2.loops[0].r4()
        # one-sided Hausdorff: every coarse sample near the fine loop
        dist = max(np.min(np.linalg.norm(b - p, axis=1)) for p in a)
        assert dist < 10 * (0.04 * 0.8) ** 2 + 1e-6

    def test_implicit_parametric_agree_on_line(self):
        li = trace_link(LINE_AFFINE, 1.5)
        lp = trace_link(PARAM_LINE, 1.5)
        assert len(li.loops) == len(lp.loops) == 1
        assert li.transversality_margin == pytest.approx(lp.transversality_margin, rel=1e-3)


class TestOrientation:
    def test_positive_contact_form(self):
        for curve, r in [(LINE_Y, 1.0), (LINE_AFFINE, 1.2), (PAPER_CUBIC, 0.8)]:
            link = trace_link(curve, r)
            for loop in link.loops:
                assert loop.orientation_checked
                assert loop.contact_values().min() > 0

    def test_reversed_loop_is_flipped_back(self):
        link = trace_link(LINE_Y, 1.0)
        loop = link.loops[0].reversed()
        assert loop.contact_values().max() < 0
        link.loops[0] = loop
        fixed = orient_link(link, LINE_Y)
        assert fixed.loops[0].contact_values().min() > 0

    def test_unit_circle_direction_is_counterclockwise_in_x(self):
        link = trace_link(LINE_Y, 1.0)
        xs = link.loops[0].xs
        winding = np.angle(np.roll(xs, -1) / xs).sum() / (2 * np.pi)
        assert round(winding) == 1


class TestMargin:
    def test_unit_circle_margin_is_one(self):
        assert transversality_margin(LINE_Y, 1.0) == pytest.approx(1.0, abs=1e-6)

    def test_affine_line_margin_small_near_birth(self):
        m = transversality_margin(LINE_AFFINE, 1 / np.sqrt(2) + 1e-5)
        assert 0 < m < 0.02

    def test_affine_line_margin_large_away(self):
        assert transversality_margin(LINE_AFFINE, 2.0) > 0.5


class TestAxisClearance:
    def test_unit_circle_is_clear(self):
        link = trace_link(LINE_Y, 1.0)
        assert axis_clearance(link) == pytest.approx(1.0, abs=1e-6)

    def test_offending_curve_gets_rotated(self):
        # x = t, y = -1 - t: passes through (0, -1), on the half-line
        bad = ParametricCurve((0.0, 1.0 + 0.0j), (-1.0, -1.0 + 0.0j))
        rng = np.random.default_rng(0)
        fixed, rotation = ensure_axis_clear(bad, [1.0], rng)
        assert rotation is not None
        link = trace_link(fixed, 1.0)
        assert axis_clearance(link) > 0.05
