"""Barlow close packings of unit spheres from A/B/C stacking sequences.

Layers are triangular lattices of spacing 2 (touching unit spheres).  A
letter selects the in-plane coset of a layer and consecutive layers are
``LAYER_SPACING = 2 sqrt(2/3)`` apart, so spheres in adjacent layers touch.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import GeometryDomainError

LAYER_SPACING = 2 * math.sqrt(2 / 3)
COSETS = {
    "A": np.array([0.0, 0.0]),
    "B": np.array([1.0, 1 / math.sqrt(3)]),
    "C": np.array([2.0, 2 / math.sqrt(3)]),
}
CONTACT_TOL = 1e-9
DENSITY = math.pi / math.sqrt(18)
_SHIFTS = np.array(list(itertools.product(range(-2, 3), repeat=3)))


@dataclass(frozen=True)
class StackingSequence:
    letters: str

    def __post_init__(self):
        s = self.letters
        if not s:
            raise GeometryDomainError("stacking sequence is empty")
        bad = set(s) - set("ABC")
        if bad:
            raise GeometryDomainError(f"stacking sequence has letters {sorted(bad)} outside A/B/C")
        for i in range(len(s)):
            a, b = s[i], s[(i + 1) % len(s)]
            if a == b:
                where = "wrap-around" if i == len(s) - 1 else f"position {i}"
                raise GeometryDomainError(
                    f"stacking sequence {s!r} repeats layer {a!r} at {where}")

    def __len__(self):
        return len(self.letters)

    def __str__(self):
        return self.letters


def as_sequence(seq) -> StackingSequence:
    return seq if isinstance(seq, StackingSequence) else StackingSequence(str(seq))


@dataclass
class PackingRegion:
    """Sphere centres in one period cell; ``periods`` holds the cell vectors as rows."""

    centers: np.ndarray
    periods: np.ndarray
    sequence: StackingSequence
    layers: np.ndarray

    @property
    def count(self) -> int:
        return len(self.centers)

    @property
    def cell_volume(self) -> float:
        return abs(float(np.linalg.det(self.periods)))

    def shift_vector(self, shift) -> np.ndarray:
        return np.asarray(shift, float) @ self.periods

    def position(self, index: int, shift=(0, 0, 0)) -> np.ndarray:
        return self.centers[index] + self.shift_vector(shift)


def generate_packing(seq, nx: int = 1, ny: int = 1) -> PackingRegion:
    """Centres of the Barlow packing for ``seq`` over an ``nx`` by ``ny`` layer patch.

    The in-plane cell is spanned by ``nx * (2, 0, 0)`` and ``ny * (1, sqrt 3, 0)``;
    vertically the cell holds one full period of the sequence.
    """
    seq = as_sequence(seq)
    if nx < 1 or ny < 1:
        raise GeometryDomainError("nx and ny must be at least 1")
    a1 = np.array([2.0, 0.0])
    a2 = np.array([1.0, math.sqrt(3)])
    periods = np.array([
        [2.0 * nx, 0.0, 0.0],
        [1.0 * ny, math.sqrt(3) * ny, 0.0],
        [0.0, 0.0, LAYER_SPACING * len(seq)],
    ])
    inv = np.linalg.inv(periods)
    pts, layers = [], []
    for layer, letter in enumerate(seq.letters):
        for i in range(nx):
            for j in range(ny):
                xy = i * a1 + j * a2 + COSETS[letter]
                p = np.array([xy[0], xy[1], layer * LAYER_SPACING])
                f = p @ inv
                f -= np.floor(f + 1e-12)
                pts.append(f @ periods)
                layers.append(layer)
    return PackingRegion(np.array(pts), periods, seq, np.array(layers))


def packing_density(region: PackingRegion) -> float:
    vol = region.cell_volume
    if not vol > 1e-12:
        raise GeometryDomainError("period vectors are degenerate")
    return region.count * (4 * math.pi / 3) / vol


def _image_offsets(region: PackingRegion) -> np.ndarray:
    return _SHIFTS @ region.periods


def contacts(region: PackingRegion, tol: float = CONTACT_TOL) -> list[list[tuple[int, tuple]]]:
    """For each centre, the ``(index, cell shift)`` of every sphere it touches."""
    offs = _image_offsets(region)
    images = region.centers[None, :, :] + offs[:, None, :]
    out = []
    for i, c in enumerate(region.centers):
        d = np.linalg.norm(images - c, axis=2)
        hit = np.argwhere(np.abs(d - 2.0) <= tol)
        out.append(sorted((int(j), tuple(int(t) for t in _SHIFTS[s])) for s, j in hit))
    return out


def contact_graph(region: PackingRegion, tol: float = CONTACT_TOL) -> np.ndarray:
    """Number of touching neighbours of every sphere, periodic images included."""
    return np.array([len(c) for c in contacts(region, tol)])


def minimum_distance(region: PackingRegion) -> float:
    offs = _image_offsets(region)
    images = region.centers[None, :, :] + offs[:, None, :]
    best = math.inf
    for c in region.centers:
        d = np.linalg.norm(images - c, axis=2)
        d = d[d > 1e-9]
        best = min(best, float(d.min()))
    return best


def contact_directions(region: PackingRegion, index: int, tol: float = CONTACT_TOL) -> np.ndarray:
    """Unit vectors from centre ``index`` towards each touching sphere."""
    c = region.centers[index]
    out = [region.position(j, s) - c for j, s in contacts(region, tol)[index]]
    return np.array(out) / 2.0


class Periphery(NamedTuple):
    mother: int
    shared_with_center: int
    outer: int


def _shift_add(a, b):
    return tuple(x + y for x, y in zip(a, b))


def periphery_structure(region: PackingRegion, center_index: int, neighbor_index: int,
                        tol: float = CONTACT_TOL, neighbor_shift=None, con=None) -> Periphery:
    """Split the contacts of a touching neighbour into mother, shared and outer spheres.

    ``neighbor_shift`` picks the periodic image of the neighbour; by default
    the first image touching the centre is used.  ``con`` may carry the
    output of :func:`contacts` to avoid recomputing it.
    """
    if con is None:
        con = contacts(region, tol)
    mine = set(con[center_index])
    if neighbor_shift is None:
        shifts = [s for j, s in con[center_index] if j == neighbor_index]
        if not shifts:
            raise GeometryDomainError(
                f"spheres {center_index} and {neighbor_index} are not in contact")
        neighbor_shift = shifts[0]
    elif (neighbor_index, tuple(neighbor_shift)) not in mine:
        raise GeometryDomainError(
            f"spheres {center_index} and {neighbor_index}{tuple(neighbor_shift)} are not in contact")
    theirs = {(k, _shift_add(t, neighbor_shift)) for k, t in con[neighbor_index]}
    mother = int((center_index, (0, 0, 0)) in theirs)
    shared = len(theirs & mine)
    return Periphery(mother, shared, len(theirs) - mother - shared)


def cyclic_sequences(max_len: int, min_len: int = 2) -> list[str]:
    """Every valid stacking sequence up to rotation, shortest first."""
    out = []
    for n in range(min_len, max_len + 1):
        for letters in itertools.product("ABC", repeat=n):
            s = "".join(letters)
            if any(s[i] == s[(i + 1) % n] for i in range(n)):
                continue
            if s == min(s[i:] + s[:i] for i in range(n)):
                out.append(s)
    return out


def random_sequence(length: int, rng: np.random.Generator) -> str:
    while True:
        s = [rng.choice(list("ABC"))]
        for _ in range(length - 1):
            s.append(rng.choice([c for c in "ABC" if c != s[-1]]))
        if s[0] != s[-1]:
            return "".join(s)


def centers_text(region: PackingRegion, precision: int = 12) -> str:
    return "".join(f"{x:.{precision}f} {y:.{precision}f} {z:.{precision}f}\n"
                   for x, y, z in region.centers)
