import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.spatial import cKDTree

from tightpack import GeometryDomainError
from tightpack import barlow as bl
from tightpack import kepler_blocks as kb

DENSITY = math.pi / math.sqrt(18)


def _brute_contacts(region, reach=1):
    """Contact counts from an explicit periodic supercell and a k-d tree."""
    shifts = np.array(list(itertools.product(range(-reach, reach + 1), repeat=3)))
    pts = (region.centers[None] + (shifts @ region.periods)[:, None]).reshape(-1, 3)
    tree = cKDTree(pts)
    return [len(tree.query_ball_point(c, 2.0 + 1e-9)) - 1 for c in region.centers]


# --- sequences ------------------------------------------------------------------

@pytest.mark.parametrize("seq", ["AA", "ABA", "ABCC", "", "ABD", "A"])
def test_invalid_sequences(seq):
    with pytest.raises(GeometryDomainError):
        bl.StackingSequence(seq)


def test_wraparound_message():
    with pytest.raises(GeometryDomainError, match="wrap-around"):
        bl.StackingSequence("ABA")


@pytest.mark.parametrize("seq", ["AB", "ABC", "ABCAB", "ABAC", "ACBCBC"])
def test_valid_sequences(seq):
    assert str(bl.StackingSequence(seq)) == seq


def test_cyclic_sequence_enumeration():
    seqs = bl.cyclic_sequences(8)
    # brute force: all valid words up to rotation
    brute = set()
    for n in range(2, 9):
        for w in itertools.product("ABC", repeat=n):
            s = "".join(w)
            if all(s[i] != s[(i + 1) % n] for i in range(n)):
                brute.add(min(s[i:] + s[:i] for i in range(n)))
    assert sorted(seqs) == sorted(brute)
    assert len(seqs) == len(set(seqs)) == 85


def test_random_sequence_valid():
    rng = np.random.default_rng(0)
    for n in range(2, 12):
        bl.StackingSequence(bl.random_sequence(n, rng))


# --- packings ---------------------------------------------------------------------

def test_hcp_cell():
    r = bl.generate_packing("AB", 1, 1)
    assert r.count == 2
    assert r.cell_volume == pytest.approx(8 * math.sqrt(2), abs=1e-12)


def test_fcc_contacts():
    r = bl.generate_packing("ABC", 2, 2)
    assert bl.minimum_distance(r) == pytest.approx(2.0, abs=1e-12)
    assert (bl.contact_graph(r) == 12).all()


@pytest.mark.parametrize("seq", ["ABC", "AB", "ABAC", "ABCBAC", "ABCABCAB"])
def test_density(seq):
    assert bl.packing_density(bl.generate_packing(seq, 1, 1)) == pytest.approx(DENSITY, abs=1e-12)


def test_density_random_length_eight():
    rng = np.random.default_rng(8)
    s = bl.random_sequence(8, rng)
    assert bl.packing_density(bl.generate_packing(s, 2, 2)) == pytest.approx(DENSITY, abs=1e-12)


@pytest.mark.parametrize("seq", ["AB", "ABC", "ABAC"])
def test_density_independent_of_patch(seq):
    a = bl.packing_density(bl.generate_packing(seq, 1, 1))
    b = bl.packing_density(bl.generate_packing(seq, 4, 4))
    assert a == pytest.approx(b, abs=1e-14)


@pytest.mark.parametrize("seq", ["AB", "ABC", "ABAC", "ABCB"])
def test_contacts_match_brute_force(seq):
    r = bl.generate_packing(seq, 2, 2)
    assert list(bl.contact_graph(r)) == _brute_contacts(r) == [12] * r.count


def test_centers_inside_cell():
    r = bl.generate_packing("ABCAB", 3, 2)
    frac = r.centers @ np.linalg.inv(r.periods)
    assert (frac > -1e-12).all() and (frac < 1 + 1e-12).all()


def test_degenerate_cell_rejected():
    r = bl.generate_packing("AB")
    r.periods = np.zeros((3, 3))
    with pytest.raises(GeometryDomainError):
        bl.packing_density(r)


def test_patch_size_validated():
    with pytest.raises(GeometryDomainError):
        bl.generate_packing("AB", 0, 1)


@settings(max_examples=25, deadline=None)
@given(st.integers(2, 8), st.integers(0, 10**6), st.integers(1, 3), st.integers(1, 3))
def test_random_sequences_are_tight(n, seed, nx, ny):
    s = bl.random_sequence(n, np.random.default_rng(seed))
    r = bl.generate_packing(s, nx, ny)
    assert bl.packing_density(r) == pytest.approx(DENSITY, abs=1e-12)
    assert bl.minimum_distance(r) == pytest.approx(2.0, abs=1e-12)
    assert (bl.contact_graph(r) == 12).all()


# --- periphery ------------------------------------------------------------------

def test_fcc_periphery_all_pairs():
    r = bl.generate_packing("ABC", 2, 2)
    con = bl.contacts(r)
    for i, mine in enumerate(con):
        for j, sh in mine:
            assert bl.periphery_structure(r, i, j, neighbor_shift=sh, con=con) == (1, 4, 7)


def test_hcp_periphery_in_and_across_layers():
    r = bl.generate_packing("AB", 2, 2)
    con = bl.contacts(r)
    seen = set()
    for j, sh in con[0]:
        same_layer = abs(r.position(j, sh)[2] - r.centers[0][2]) < 1e-9
        seen.add(same_layer)
        assert tuple(bl.periphery_structure(r, 0, j, neighbor_shift=sh)) == (1, 4, 7)
    assert seen == {True, False}


def test_periphery_default_shift():
    r = bl.generate_packing("ABC", 2, 2)
    j, _ = bl.contacts(r)[0][0]
    per = bl.periphery_structure(r, 0, j)
    assert (per.shared_with_center, per.outer) == (4, 7)


def test_periphery_needs_contact():
    r = bl.generate_packing("ABC", 2, 2)
    far = int(np.argmax(np.linalg.norm(r.centers - r.centers[0], axis=1)))
    with pytest.raises(GeometryDomainError, match="not in contact"):
        bl.periphery_structure(r, 0, far, neighbor_shift=(0, 0, 0))


# --- bridge to the dodecahedra -------------------------------------------------------

@pytest.mark.parametrize("seq, shape", [("ABC", "rhombic"), ("AB", "trapezo-rhombic")])
def test_contact_planes_build_tight_dodecahedron(seq, shape):
    r = bl.generate_packing(seq, 2, 2)
    for i in range(r.count):
        p = kb.tight_dodecahedron(bl.contact_directions(r, i))
        assert np.abs(p.face_distances() - 1).max() < 1e-12
        assert p.volume() == pytest.approx(4 * math.sqrt(2), abs=1e-12)
        assert kb.block_shape(p) == shape


def test_centers_text():
    r = bl.generate_packing("AB")
    lines = bl.centers_text(r).splitlines()
    assert len(lines) == 2
    assert np.allclose([[float(t) for t in ln.split()] for ln in lines], r.centers)
