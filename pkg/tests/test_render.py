import xml.etree.ElementTree as ET

import pytest

from lecture_hall.cftp import cftp_sample
from lecture_hall.errors import MismatchedScene
from lecture_hall.lattice import height_function, paths_to_dimers, paths_to_dual, tableau_to_paths
from lecture_hall.model import LectureHallTableau, builtin_profile, extremal_tableaux, make_partition
from lecture_hall.render import RenderSpec, render, render_curve, save_png

NS = {"s": "http://www.w3.org/2000/svg"}
TAB_22 = LectureHallTableau(make_partition([2, 2]), 3, ((5, 6), (2, 3)))


def parse(svg):
    root = ET.fromstring(svg.encode())
    assert root.get("version") == "1.1"
    return root


def group(root, name):
    return root.find(f"s:g[@id='{name}']", NS)


def test_two_path_scene():
    spec = RenderSpec("paths", width=400, height=300)
    root = parse(render(tableau_to_paths(TAB_22), spec))
    lines = group(root, "paths").findall("s:polyline", NS)
    assert len(lines) == 2
    ps = tableau_to_paths(TAB_22)
    for line, path in zip(lines, ps.paths):
        assert len(line.get("points").split()) == len(path)


def test_output_is_deterministic():
    spec = RenderSpec("dimers")
    data = paths_to_dimers(tableau_to_paths(TAB_22))
    assert render(data, spec) == render(data, spec)


@pytest.mark.parametrize(
    "scene, build",
    [
        ("paths", tableau_to_paths),
        ("dual-paths", lambda t: paths_to_dual(tableau_to_paths(t))),
        ("dimers", lambda t: paths_to_dimers(tableau_to_paths(t))),
        ("height", lambda t: height_function(tableau_to_paths(t))),
    ],
)
def test_every_scene_renders(scene, build):
    root = parse(render(build(TAB_22), RenderSpec(scene)))
    assert group(root, {"dual-paths": "dual-paths"}.get(scene, scene)) is not None


def test_mismatched_scene():
    with pytest.raises(MismatchedScene):
        render(tableau_to_paths(TAB_22), RenderSpec("dimers"))


def test_overlay_needs_rescale():
    with pytest.raises(ValueError):
        RenderSpec("paths", overlay_curve=(builtin_profile("square"), 1.0))
    with pytest.raises(ValueError):
        RenderSpec("paths", width=0)


def test_square_sample_with_circle_overlay():
    tab = cftp_sample(make_partition([24] * 24), 24, 3)
    spec = RenderSpec("paths", overlay_curve=(builtin_profile("square"), 1.0), rescale=True)
    root = parse(render(tableau_to_paths(tab), spec))
    assert len(group(root, "curve").findall("s:polyline", NS)) >= 1
    assert len(group(root, "paths").findall("s:polyline", NS)) == 24


def test_empty_shape_is_skeleton_only():
    ps = tableau_to_paths(extremal_tableaux(make_partition([0, 0]), 2)[0])
    root = parse(render(ps, RenderSpec("paths")))
    assert group(root, "skeleton").findall("s:line", NS)
    assert not group(root, "paths").findall("s:polyline", NS)


def test_curve_document():
    root = parse(render_curve(builtin_profile("staircase"), 1.0, 50))
    assert group(root, "curve") is not None


def test_png_output(tmp_path):
    out = tmp_path / "fig.png"
    spec = RenderSpec("paths", overlay_curve=(builtin_profile("square"), 1.5), rescale=True)
    save_png(tableau_to_paths(TAB_22), spec, str(out))
    assert out.read_bytes()[:8] == b"\x89PNG\r\n\x1a\n"
