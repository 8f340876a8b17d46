import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.spatial import ConvexHull

from tightpack import GeometryDomainError, Polyhedron, read_off
from tightpack.kepler_blocks import build_rhombic_dodecahedron, build_trapezo_rhombic_dodecahedron
from tightpack.minimal_blocks import KINDS, minimal_block


def _cube(side=2.0):
    return Polyhedron.from_points(list(itertools.product((0.0, side), repeat=3)), "cube")


def _all_shapes():
    yield build_rhombic_dodecahedron()
    yield build_trapezo_rhombic_dodecahedron()
    for k in KINDS:
        yield minimal_block(k).polyhedron
    yield _cube()


@pytest.mark.parametrize("p", list(_all_shapes()), ids=lambda p: p.name)
def test_closed_convex_euler(p):
    assert p.is_closed()
    assert p.euler_characteristic == 2
    assert p.is_convex()
    assert max(p.face_planarity(i) for i in range(len(p.faces))) < 1e-12


@pytest.mark.parametrize("p", list(_all_shapes()), ids=lambda p: p.name)
def test_volume_matches_qhull(p):
    assert p.volume() == pytest.approx(ConvexHull(p.vertices).volume, rel=1e-12)


@pytest.mark.parametrize("p", list(_all_shapes()), ids=lambda p: p.name)
def test_outward_orientation(p):
    c = p.vertices.mean(axis=0)
    for i in range(len(p.faces)):
        assert p.face_normal(i) @ (p.face_points(i).mean(axis=0) - c) > 0


@pytest.mark.parametrize("p", list(_all_shapes()), ids=lambda p: p.name)
def test_off_round_trip(p):
    q = read_off(p.to_off())
    assert q.faces == p.faces
    assert np.allclose(q.vertices, p.vertices, atol=1e-12)
    assert q.volume() == pytest.approx(p.volume(), abs=1e-10)


def test_off_layout():
    text = _cube().to_off()
    lines = text.splitlines()
    assert lines[0] == "OFF"
    assert lines[1] == "8 6 12"
    assert len(lines) == 2 + 8 + 6
    assert all(len(ln.split()) == 3 for ln in lines[2:10])
    assert all(ln.split()[0] == "4" for ln in lines[10:])


def test_off_write(tmp_path):
    path = tmp_path / "cube.off"
    _cube().write_off(path)
    assert read_off(path.read_text()).euler_characteristic == 2


def test_off_rejects_bad_input():
    with pytest.raises(GeometryDomainError):
        read_off("PLY\n")
    with pytest.raises(GeometryDomainError):
        read_off("OFF\n3 1 3\n0 0 0\n1 0 0\n0 1 0\n4 0 1 2\n")


def test_cube_measures():
    c = _cube(2.0)
    assert c.volume() == pytest.approx(8.0, abs=1e-14)
    assert len(c.faces) == 6
    assert np.allclose(c.edge_lengths(), 2.0)
    assert all(c.face_area(i) == pytest.approx(4.0) for i in range(6))
    assert all(c.plane_angle(f, c.faces[f][0]) == pytest.approx(math.pi / 2) for f in range(6))


def test_open_surface_detected():
    c = _cube()
    open_box = Polyhedron(c.vertices, c.faces[:-1])
    assert not open_box.is_closed()
    with pytest.raises(GeometryDomainError):
        open_box.check_closed()


def test_vertex_neighbor_loop_is_a_cycle():
    p = build_rhombic_dodecahedron()
    for v in range(len(p.vertices)):
        loop = p.vertex_neighbor_loop(v)
        assert len(loop) == len(p.vertex_faces(v))
        assert all((min(v, w), max(v, w)) in p.edges for w in loop)


def test_from_points_rejects_interior_points():
    pts = list(itertools.product((0.0, 1.0), repeat=3)) + [(0.5, 0.5, 0.5)]
    with pytest.raises(GeometryDomainError):
        Polyhedron.from_points(pts)


def test_tangent_planes_of_cube():
    normals = np.vstack([np.eye(3), -np.eye(3)])
    p = Polyhedron.from_tangent_planes(normals, 1.0)
    assert len(p.vertices) == 8 and p.volume() == pytest.approx(8.0)
    assert np.allclose(p.face_distances(), 1.0)


@settings(max_examples=60, deadline=None)
@given(st.lists(st.tuples(*[st.floats(-1, 1)] * 3), min_size=8, max_size=30), st.integers(0, 10**6))
def test_random_hull_properties(raw, seed):
    rng = np.random.default_rng(seed)
    pts = rng.standard_normal((len(raw), 3))
    pts /= np.linalg.norm(pts, axis=1)[:, None]      # points on a sphere are all hull vertices
    if ConvexHull(pts).vertices.size != len(pts):
        return
    p = Polyhedron.from_points(pts)
    assert p.is_closed() and p.euler_characteristic == 2
    assert p.volume() == pytest.approx(ConvexHull(pts).volume, rel=1e-10)
    shift = np.array(raw[0]) * 5
    assert p.translated(shift).volume() == pytest.approx(p.volume(), rel=1e-12)
