import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tightpack import GeometryDomainError
from tightpack import geometry as g
from tightpack import minimal_blocks as mb

R2 = math.sqrt(2)
DENSITY = math.pi / math.sqrt(18)


def _tet_volume(v):
    v = np.asarray(v, float)
    return abs(np.linalg.det(v[1:] - v[0])) / 6


def _trihedral_omegas(block):
    """Vertex solid angles of a simple polyhedron from its three edge rays (ray kernel)."""
    p = block.polyhedron
    out = []
    for v in range(len(p.vertices)):
        nbrs = p.vertex_neighbor_loop(v)
        assert len(nbrs) == 3
        rays = p.vertices[nbrs] - p.vertices[v]
        out.append(g.solid_angle_from_rays(*rays).omega)
    return out


# --- tetrahedron profile ------------------------------------------------------------

def test_profile_values():
    assert mb.tetra_volume_profile(1.0) == pytest.approx(2 * R2 / 3, abs=1e-12)
    assert mb.tetra_volume_profile(R2) == pytest.approx(2 * R2 / 3, abs=1e-12)
    assert mb.tetra_volume_profile(math.sqrt(1.5)) == pytest.approx(1.0, abs=1e-12)


def test_profile_single_turn():
    xs = np.linspace(1.0, R2, 100)
    d = np.diff([mb.tetra_volume_profile(x) for x in xs])
    changes = np.count_nonzero(np.diff(np.sign(d)))
    assert changes == 1
    assert xs[np.argmax([mb.tetra_volume_profile(x) for x in xs])] == pytest.approx(math.sqrt(1.5),
                                                                                  abs=xs[1] - xs[0])


@settings(max_examples=100, deadline=None)
@given(st.floats(1.0, R2))
def test_profile_matches_coordinates(x):
    v = mb.tetra_coordinates(x)
    assert _tet_volume(v) == pytest.approx(mb.tetra_volume_profile(x), rel=1e-12)
    d = {(i, j): np.linalg.norm(v[i] - v[j]) for i, j in itertools.combinations(range(4), 2)}
    # the five reduced constraints bind; the base pair is 2x
    for pair in ((0, 2), (1, 2), (0, 3), (1, 3), (2, 3)):
        assert d[pair] == pytest.approx(2.0, abs=1e-12)
    assert d[(0, 1)] == pytest.approx(2 * x, abs=1e-12)


@pytest.mark.parametrize("x", [0.0, 0.99, 1.5, float("nan")])
def test_profile_domain(x):
    with pytest.raises(GeometryDomainError):
        mb.tetra_volume_profile(x)


# --- stated blocks -----------------------------------------------------------------

@pytest.mark.parametrize("kind", mb.KINDS)
def test_block_volumes(kind):
    b = mb.minimal_block(kind)
    assert b.volume() == pytest.approx(mb.VOLUMES[kind], abs=1e-12)
    assert np.allclose(b.vertices, mb.VERTICES[kind])
    assert min(b.pair_distances().values()) >= 2 - 1e-12


def test_tetra_a_coordinates():
    b = mb.minimal_block("tetra_A")
    want = [(-1, 0, 0), (1, 0, 0), (0, math.sqrt(3), 0), (0, 1 / math.sqrt(3), 2 / math.sqrt(1.5))]
    assert np.allclose(b.vertices, want, atol=1e-15)
    assert _tet_volume(b.vertices) == pytest.approx(2 * R2 / 3, abs=1e-12)


def test_block_face_counts():
    shapes = {k: sorted(len(f) for f in mb.minimal_block(k).polyhedron.faces) for k in mb.KINDS}
    assert shapes["tetra_A"] == shapes["tetra_B"] == [3] * 4
    assert shapes["penta_A"] == shapes["penta_B"] == [3, 3, 3, 3, 4]
    assert shapes["hexa_A"] == shapes["hexa_B"] == [4] * 6


@pytest.mark.parametrize("kind", ["hexa_A", "hexa_B"])
def test_hexahedra(kind):
    b = mb.minimal_block(kind)
    assert np.abs(b.polyhedron.edge_lengths() - 2).max() < 1e-12
    assert len(b.polyhedron.edges) == 12
    assert b.volume() == pytest.approx(4 * R2, abs=1e-12)
    acc = mb.vertex_sphere_density(b)
    assert acc.total_omega == pytest.approx(4 * math.pi, abs=1e-9)
    assert acc.density == pytest.approx(DENSITY, abs=1e-9)
    # fan kernel and ray kernel agree at every corner
    assert np.allclose(b.vertex_solid_angles(), _trihedral_omegas(b), atol=1e-12)


@pytest.mark.parametrize("kind", ["hexa_A", "hexa_B"])
def test_opposite_corners_equal(kind):
    b = mb.minimal_block(kind)
    om = b.vertex_solid_angles()
    v = b.vertices
    centre = v.mean(axis=0)
    for i in range(8):
        j = int(np.argmin(np.linalg.norm(v - (2 * centre - v[i]), axis=1)))
        assert np.allclose(v[j], 2 * centre - v[i])
        assert om[i] == pytest.approx(om[j], abs=1e-12)


def test_hexa_b_contains_stated_vertices():
    v = mb.minimal_block("hexa_B").vertices
    for p in ((R2, -R2, R2), (math.sqrt(8), 0, R2)):
        assert np.isclose(v, p).all(axis=1).any()


def test_cube_block():
    acc = mb.vertex_sphere_density(mb.cube_block(2.0))
    assert acc.total_omega == pytest.approx(4 * math.pi, abs=1e-12)
    assert acc.density == pytest.approx(4 * math.pi / 3 / 8, abs=1e-14)


def test_tetra_b_density():
    b = mb.minimal_block("tetra_B")
    acc = mb.vertex_sphere_density(b)
    omegas = _trihedral_omegas(b)
    assert acc.total_omega == pytest.approx(math.fsum(omegas), abs=1e-12)
    assert acc.total_omega < 4 * math.pi
    assert acc.density == pytest.approx(acc.total_omega / 3 / (2 * R2 / 3), abs=1e-12)


def test_regular_tetra_vertex_angle():
    # Regular tetrahedron corner: 3 arccos(1/3) - pi.
    b = mb.minimal_block("tetra_A")
    assert np.allclose(b.vertex_solid_angles(), 3 * math.acos(1 / 3) - math.pi, atol=1e-12)


def test_non_convex_vertex_figure_rejected():
    from tightpack.polyhedron import Polyhedron
    # a cube with one corner pushed inwards past the opposite faces' planes
    b = mb.cube_block(2.0)
    v = b.vertices.copy()
    v[7] = (1.2, 1.2, 1.2)
    dented = mb.VertexSphereBlock(Polyhedron(v, b.polyhedron.faces), "dented")
    with pytest.raises(GeometryDomainError):
        dented.vertex_solid_angles()


def test_unknown_kind():
    with pytest.raises(GeometryDomainError):
        mb.minimal_block("octa")


# --- prism split ---------------------------------------------------------------------

@pytest.mark.parametrize("kind", ["hexa_A", "hexa_B"])
def test_split_prism(kind):
    p, q = mb.split_prism(kind)
    parent = mb.minimal_block(kind).volume()
    for h in (p, q):
        assert sorted(len(f) for f in h.polyhedron.faces) == [3, 3, 4, 4, 4]
        assert h.volume() == pytest.approx(2 * R2, abs=1e-12)
        acc = mb.vertex_sphere_density(h)
        assert acc.total_omega == pytest.approx(2 * math.pi, abs=1e-9)
        assert acc.density == pytest.approx(DENSITY, abs=1e-9)
    assert p.volume() + q.volume() == pytest.approx(parent, abs=1e-12)
    assert np.allclose(np.sort(p.polyhedron.edge_lengths()), np.sort(q.polyhedron.edge_lengths()),
                       atol=1e-12)


def test_split_prism_domain():
    with pytest.raises(GeometryDomainError):
        mb.split_prism("tetra_A")


# --- constraint activity -----------------------------------------------------------

def test_tetra_a_all_pairs_at_two():
    rep = mb.verify_constraint_activity("tetra_A")
    assert rep.ok and len(rep.active) == 6


def test_tetra_b_five_active():
    rep = mb.verify_constraint_activity("tetra_B")
    assert rep.ok and len(rep.active) == 5
    (idle,) = [c for c in rep.constraints if not c.active]
    assert idle.pair == (0, 1) and idle.label == "x >= 1"
    assert idle.squared_distance == pytest.approx(8.0, abs=1e-12)


@pytest.mark.parametrize("kind", mb.KINDS)
def test_no_constraint_violated(kind):
    assert mb.verify_constraint_activity(kind).ok


def test_inward_move_reported():
    b = mb.minimal_block("hexa_A")
    inward = b.vertices.mean(axis=0) - b.vertices[0]
    moved = mb.perturbed(b, 0, 1e-2 * inward / np.linalg.norm(inward))
    rep = mb.verify_constraint_activity(moved)
    assert not rep.ok and rep.violated
    with pytest.raises(GeometryDomainError):
        moved.check()


# --- minimality spot check ---------------------------------------------------------

def test_minimality_spot_check():
    rep = mb.minimality_spot_check("hexa_A", 10_000, seed=0)
    assert rep.decreases == 0
    assert rep.unrepaired == 0
    assert rep.min_volume_change >= -1e-12


def test_repair_restores_spacing():
    rng = np.random.default_rng(3)
    v = mb.minimal_block("hexa_B").vertices + rng.normal(scale=0.05, size=(8, 3))
    fixed = mb._repair(v)
    i, j = np.triu_indices(8, 1)
    assert np.linalg.norm(fixed[j] - fixed[i], axis=1).min() >= 2.0


@pytest.mark.parametrize("kind", ["hexa_A", "hexa_B"])
def test_hexahedron_translates_form_tight_lattice(kind):
    # a parallelepiped tiles by its edge vectors; the vertex spheres then sit on that lattice
    v = mb.minimal_block(kind).vertices
    nbrs = mb.minimal_block(kind).polyhedron.vertex_neighbor_loop(0)
    basis = v[nbrs] - v[0]
    assert abs(np.linalg.det(basis)) == pytest.approx(4 * R2, abs=1e-12)
    k = np.array(list(itertools.product(range(-3, 4), repeat=3)))
    pts = k @ basis
    d = np.linalg.norm(pts, axis=1)
    d = d[d > 1e-9]
    assert d.min() == pytest.approx(2.0, abs=1e-12)
    assert np.count_nonzero(np.abs(d - 2.0) < 1e-9) == 12
    assert _lattice_density(basis) == pytest.approx(DENSITY, abs=1e-12)


def _lattice_density(basis):
    return 4 * math.pi / 3 / abs(np.linalg.det(basis))
