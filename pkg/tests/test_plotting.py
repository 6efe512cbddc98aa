"""SVG rendering of two-generator sections."""

import xml.etree.ElementTree as ET

import pytest

from bloch_atlas import plotting, scenarios
from bloch_atlas.sections import SectionSpec, bounding_radius

SVG_NS = "{http://www.w3.org/2000/svg}"


def render(n, gens, decomp):
    spec = SectionSpec(n, gens)
    maps = scenarios.condition_maps(n, decomp)
    return plotting.section_svg(spec, maps)


class TestSectionSvg:
    def test_document_structure(self):
        text = render(4, (3, 6), "2x2")
        root = ET.fromstring(text)
        assert root.tag == f"{SVG_NS}svg"
        assert root.get("version") == "1.1"
        assert root.get("width") == "800"
        assert root.get("height") == "800"
        assert root.get("viewBox") == "0 0 800 800"

    def test_contains_fill_outline_and_arcs(self):
        root = ET.fromstring(render(6, (8, 13), "3x2"))
        polygons = root.findall(f"{SVG_NS}polygon")
        polylines = root.findall(f"{SVG_NS}polyline")
        assert len(polygons) == 2  # joint fill plus feasible outline
        assert polylines  # classified boundary arcs
        colors = {p.get("stroke") for p in polylines}
        allowed = {plotting.OUTLINE_COLOR} | set(plotting.CONDITION_COLORS)
        assert colors <= allowed
        # this section has classified arcs, so at least one condition color
        assert colors & set(plotting.CONDITION_COLORS)

    def test_coordinates_inside_viewport(self):
        root = ET.fromstring(render(9, (40, 63), "3x3"))
        for element in root.iter():
            points = element.get("points")
            if not points:
                continue
            for token in points.split():
                x, y = map(float, token.split(","))
                assert 0.0 <= x <= 800.0
                assert 0.0 <= y <= 800.0

    def test_axis_scale_uses_bounding_radius(self):
        text = render(4, (3, 6), "2x2")
        assert f"{bounding_radius(4):.3f}" in text

    def test_deterministic(self):
        assert render(8, (8, 49), "4x2") == render(8, (8, 49), "4x2")

    def test_multi_condition_sections_render(self):
        text = render(8, (35, 38), ("4x2", "2x4", "mid222"))
        root = ET.fromstring(text)
        assert root.findall(f"{SVG_NS}polygon")

    def test_rejects_three_generator_sections(self):
        spec = SectionSpec(4, (10, 12, 13))
        maps = scenarios.condition_maps(4, "2x2")
        with pytest.raises(ValueError):
            plotting.section_svg(spec, maps)
