"""Verification suites: every numeric claim as a pass/fail :class:`CheckResult`.

Suites run in a fixed order and draw randomness only from the given seed, so
two runs with the same options produce the same results.
"""
from __future__ import annotations

import csv
import io
import json
import math
import time
from dataclasses import asdict, dataclass
from typing import Callable, Iterable

import numpy as np

from . import barlow, geometry, kepler_blocks as kb, minimal_blocks as mb, planar, pyramids

FOUR_PI = 4 * math.pi
SQRT2 = math.sqrt(2)


@dataclass
class CheckResult:
    check_id: str
    claim: str
    computed: str
    expected: str
    tolerance: float
    passed: bool
    runtime_ms: float = 0.0


def fmt(x) -> str:
    if isinstance(x, (bool, np.bool_)):
        return str(bool(x)).lower()
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, float):
        return f"{x:.12g}"
    return str(x)


def numeric(check_id, claim, computed, expected, tol, expected_text=None) -> CheckResult:
    ok = abs(computed - expected) <= tol
    return CheckResult(check_id, claim, fmt(computed),
                       expected_text if expected_text is not None else fmt(expected),
                       tol, bool(ok))


def exact(check_id, claim, computed, expected) -> CheckResult:
    return CheckResult(check_id, claim, fmt(computed), fmt(expected), 0.0,
                       bool(computed == expected))


def above(check_id, claim, computed, bound) -> CheckResult:
    return CheckResult(check_id, claim, fmt(computed), f"> {fmt(bound)}", 0.0,
                       bool(computed > bound))


def below(check_id, claim, computed, bound) -> CheckResult:
    return CheckResult(check_id, claim, fmt(computed), f"< {fmt(bound)}", 0.0,
                       bool(computed < bound))


@dataclass
class Options:
    tol: float = 1e-8
    seed: int = 42
    samples: int = 10**6


# --- suites -------------------------------------------------------------------

def suite_oracle(opt: Options) -> Iterable[CheckResult]:
    rng = np.random.default_rng(opt.seed)
    worst, count = 0.0, 0
    while count < 1000:
        u, v, w = rng.standard_normal((3, 3))
        r = geometry.solid_angle_from_rays(u, v, w)
        if r.degenerate:
            continue
        ang = geometry.arc_angles_from_rays(u, v, w)
        worst = max(worst, abs(geometry.triangle_solid_angle(ang) - r.omega))
        count += 1
    yield numeric("oracle.lhuilier_vs_rays", "L'Huilier vs triple-product kernel, 1000 triangles",
                  worst, 0.0, 1e-10)
    within = 0
    worst_z = 0.0
    for k in range(20):
        u, v, w = rng.standard_normal((3, 3))
        exact_omega = geometry.solid_angle_from_rays(u, v, w).omega
        est = geometry.monte_carlo_solid_angle(u, v, w, opt.samples, opt.seed + k)
        z = abs(est.omega - exact_omega) / est.stderr
        worst_z = max(worst_z, z)
        within += z <= 3.0
    yield exact("oracle.monte_carlo_3se", f"Monte Carlo within 3 standard errors, 20 triangles, "
                f"{opt.samples} samples (worst z={worst_z:.3f})", within, 20)


def suite_profiles(opt: Options) -> Iterable[CheckResult]:
    for label, th in (("pi/6", math.pi / 6), ("pi/4", math.pi / 4),
                      ("pi/3", math.pi / 3), ("0.4pi", 0.4 * math.pi)):
        etas = [geometry.right_corner_profile(th, x / 10).eta for x in range(1, 51)]
        steps = np.diff(etas)
        yield below(f"profiles.right_corner_decreasing.{label}",
                    f"right corner: eta strictly decreasing on x = 0.1..5.0, theta = {label}",
                    float(steps.max()), 0.0)
    yield numeric("profiles.right_corner_small_x", "right corner: eta -> 1 as x -> 0 (x = 1e-6)",
                  geometry.right_corner_profile(math.pi / 3, 1e-6).eta, 1.0, 1e-4)
    yield below("profiles.right_corner_large_x", "right corner: eta -> 0 as x grows (x = 1e3)",
                geometry.right_corner_profile(math.pi / 3, 1e3).eta, 0.01)
    h = 1 / math.sqrt(3)
    a = geometry.split_corner_profile(1.0, h, 0.3)
    b = geometry.split_corner_profile(1.0, h, 0.7)
    yield numeric("profiles.split_corner_symmetry", "split corner: profile symmetric about theta/2",
                  max(abs(p - q) for p, q in zip(a, b)), 0.0, 1e-12)
    th, d = 1.2, 1e-4
    fd = (geometry.split_corner_profile(th, h, th / 2 + d).eta
          - geometry.split_corner_profile(th, h, th / 2 - d).eta) / (2 * d)
    yield numeric("profiles.split_corner_stationary", "split corner: d(eta)/dx = 0 at x = theta/2", fd, 0.0, 1e-6)
    c = geometry.split_corner_profile(th, h, th / 2)
    lo = geometry.split_corner_profile(th, h, th / 2 - 0.2)
    hi = geometry.split_corner_profile(th, h, th / 2 + 0.2)
    yield exact("profiles.split_corner_extremal", "split corner: omega, V_s, V minimal and eta maximal at theta/2",
                all(c[i] < lo[i] and c[i] < hi[i] for i in range(3))
                and c.eta > lo.eta and c.eta > hi.eta, True)


def suite_honeycomb(opt: Options) -> Iterable[CheckResult]:
    sols = [(s.n, s.k) for s in planar.tiling_solutions()]
    yield exact("honeycomb.tiling_solutions", "regular tilings k(n-2)180/n = 360", sols,
                [(3, 6), (4, 4), (6, 3)])
    yield exact("honeycomb.max_n", "largest tiling polygon is the hexagon", max(n for n, _ in sols), 6)
    side, per = planar.honeycomb_block()
    yield numeric("honeycomb.unit_hexagon_area", "unit-area hexagon", 3 * math.sqrt(3) / 2 * side**2,
                  1.0, 1e-14)
    yield below("honeycomb.hexagon_beats_square", "unit-area hexagon perimeter < square (4)", per, 4.0)
    mono = planar.verify_monotone_extremes(100)
    yield exact("honeycomb.monotone_extremes", "S0(n), L0(n) strictly decreasing for n < 100",
                mono.ok, True)
    rep = planar.verify_regular_minimality(6, 10_000, opt.seed)
    yield exact("honeycomb.hexagon_minimality", "10^4 random 6-angle compositions never beat the regular hexagon",
                rep.violations, 0)
    k2 = planar.kepler2d_density()
    yield numeric("honeycomb.kepler2d_density", "2-D Kepler density pi/sqrt(12)", k2.density,
                  math.pi / math.sqrt(12), 1e-14)
    yield numeric("honeycomb.kepler2d_vs_hexagon", "density equals pi / S_6^0(1)", k2.density,
                  math.pi / planar.regular_polygon_extremes(6)[0], 1e-14)


def suite_table1(opt: Options) -> Iterable[CheckResult]:
    for n in (3, 4, 5):
        m = pyramids.regular_tight_pyramid(n)
        row = pyramids.PYRAMID_TABLE[n]
        claim = f"pyramid table, n = {n}"
        yield numeric(f"table1.omega.n{n}", claim, m.omega, float(row["omega"]), opt.tol, row["omega"])
        yield numeric(f"table1.tau.n{n}", claim, m.tau, float(row["tau"]), opt.tol, row["tau"])
        text, value = pyramids.PYRAMID_VOLUMES[n]
        yield numeric(f"table1.volume.n{n}", claim, m.volume, value, 1e-12, text)
        yield numeric(f"table1.eta.n{n}", claim, m.eta, float(row["eta"]), opt.tol, row["eta"])
        yield numeric(f"table1.four_pi_over_omega.n{n}", claim, FOUR_PI / m.omega,
                      float(row["four_pi_over_omega"]), opt.tol, row["four_pi_over_omega"])


def suite_thirteen(opt: Options) -> Iterable[CheckResult]:
    b = pyramids.thirteen_spheres_budget([4] * 13)
    yield above("thirteen.quadrilaterals", "13 tight quadrilateral pyramids exceed 4 pi",
                b.min_total_omega, FOUR_PI)
    b = pyramids.thirteen_spheres_budget([3] * 13)
    yield above("thirteen.triangles", "13 tight triangular pyramids exceed 4 pi", b.min_total_omega, FOUR_PI)
    b = pyramids.thirteen_spheres_budget([5] * 11 + [4, 3])
    yield above("thirteen.11p_1q_1t", "11 pentagons + quadrilateral + triangle exceed 4 pi",
                b.min_total_omega, FOUR_PI)
    printed = (11 * float(pyramids.PYRAMID_TABLE[5]["omega"]) + float(pyramids.PYRAMID_TABLE[4]["omega"])
               + float(pyramids.PYRAMID_TABLE[3]["omega"]) - FOUR_PI)
    yield numeric("thirteen.11p_1q_1t_margin", "margin over 4 pi matches the printed table",
                  b.margin, printed, 1e-6)
    b = pyramids.thirteen_spheres_budget([5] * 10 + [4] * 3)
    yield exact("thirteen.10p_3q_inconclusive", "10 pentagons + 3 quadrilaterals stay below 4 pi "
                "(budget inconclusive)", (b.exceeds_4pi, b.min_total_omega < FOUR_PI), (False, True))
    b = pyramids.thirteen_spheres_budget([5] * 13)
    yield exact("thirteen.pentagon_parity", "13 pentagons: 65 edge-sides is odd, no polyhedron",
                b.parity_ok, False)
    for n, want in ((3, 10), (4, 12), (5, 13)):
        yield exact(f"thirteen.max_pyramids.n{n}", "floor(4 pi / regular solid angle)",
                    pyramids.max_tight_pyramids(n), want)


def suite_blocks(opt: Options) -> Iterable[CheckResult]:
    f3 = kb.solve_family_three()
    yield numeric("blocks.family3_tan", "family (a, pi/2-a, pi/2-a, a): tan a = sqrt 2",
                  math.tan(f3.alpha), SQRT2, 1e-10)
    yield numeric("blocks.family3_omega", "family three solid angle = pi/3",
                  kb.face_solid_angle(f3.composition.alphas), math.pi / 3, 1e-10)
    yield numeric("blocks.family3_area", "family three base area = sqrt 2",
                  kb.face_area(f3.composition.alphas), SQRT2, 1e-12)
    f2 = kb.solve_family_two()
    for key, val, want in (("alpha", f2.alpha_deg, 51.178151), ("alpha3", f2.alpha3_deg, 26.465547),
                           ("corner", f2.vertex_angle_deg, 127.06891),
                           ("three_corners", 3 * f2.vertex_angle_deg, 381.20672)):
        yield numeric(f"blocks.family2_{key}", "family (a, a, pi-3a, a), degrees", val, want, 1e-4,
                      f"{want}")
    yield exact("blocks.family2_closure_fails", "three corners exceed 360 degrees", f2.closure_fails, True)
    yield numeric("blocks.family3_stationary", "family three is a critical point of area on the pi/3 level set",
                  kb.stationarity_residual(f3.composition.alphas), 0.0, 1e-8)
    a = math.radians(f2.alpha_deg)
    lv = kb.level_set_area_check((a, a, math.pi - 3 * a, a), 2000, seed=opt.seed)
    yield exact("blocks.family2_level_set_minimum", "no sampled pi/3 composition near family two has smaller area",
                lv.decreases, 0)
    pent = kb.pentagon_family_check(100)
    yield exact("blocks.pentagon_feasible", f"tight pentagons on the pi/3 level set "
                f"({len(pent.level_points)} found) admitting vertex closure", len(pent.feasible), 0)
    yield below("blocks.pentagon_bound", "largest solid angle of a closure-feasible tight pentagon",
                pent.max_feasible_omega, math.pi / 3)
    for tag, p in (("rhombic", kb.build_rhombic_dodecahedron()),
                   ("trapezo_rhombic", kb.build_trapezo_rhombic_dodecahedron())):
        dist = p.face_distances()
        yield numeric(f"blocks.{tag}.inradius", f"{p.name}: face planes at distance 1",
                      float(np.abs(dist - 1).max()), 0.0, 1e-12)
        yield numeric(f"blocks.{tag}.volume", f"{p.name}: volume 4 sqrt 2", p.volume(), 4 * SQRT2, 1e-12)
        yield numeric(f"blocks.{tag}.density", f"{p.name}: density pi/sqrt 18",
                      kb.circumscribed_density(p), kb.KEPLER_DENSITY, 1e-12)
        omegas = [kb.face_solid_angle(kb.face_composition(p, i).alphas) for i in range(len(p.faces))]
        yield numeric(f"blocks.{tag}.face_omega", f"{p.name}: each face pyramid pi/3",
                      max(abs(w - math.pi / 3) for w in omegas), 0.0, 1e-9)
        yield numeric(f"blocks.{tag}.omega_sum", f"{p.name}: face pyramids sum to 4 pi",
                      math.fsum(omegas), FOUR_PI, 1e-9)
        yield exact(f"blocks.{tag}.tight_rings", f"{p.name}: tight rings at all vertices",
                    kb.verify_tight_rings(p).ok, True)
    for kind in ("rhombic", "trapezo-rhombic", "mixed"):
        r = kb.verify_space_filling(kind, 3)
        yield numeric(f"blocks.fill.{kind}.volume", f"{kind} stacking, extent 3: block volumes = region",
                      r.blocks_volume, r.region_volume, 1e-9)
        yield exact(f"blocks.fill.{kind}.coverage",
                    f"{kind}: {r.samples} sample points, gaps and overlaps",
                    (r.uncovered, r.multiply_covered), (0, 0))


def suite_minblocks(opt: Options) -> Iterable[CheckResult]:
    for label, x, want in (("1", 1.0, 2 * SQRT2 / 3), ("sqrt2", SQRT2, 2 * SQRT2 / 3),
                           ("sqrt1.5", math.sqrt(1.5), 1.0)):
        yield numeric(f"minblocks.tetra_profile.{label}", f"V_4 at x = {label}",
                      mb.tetra_volume_profile(x), want, 1e-12)
    for kind in ("hexa_A", "hexa_B"):
        b = mb.minimal_block(kind)
        edges = b.polyhedron.edge_lengths()
        yield numeric(f"minblocks.{kind}.edges", f"{kind}: all 12 edges of length 2",
                      float(np.abs(edges - 2).max()), 0.0, 1e-12)
        yield numeric(f"minblocks.{kind}.volume", f"{kind}: volume 4 sqrt 2", b.volume(), 4 * SQRT2, 1e-12)
        acc = mb.vertex_sphere_density(b)
        yield numeric(f"minblocks.{kind}.omega", f"{kind}: vertex solid angles sum to 4 pi",
                      acc.total_omega, FOUR_PI, 1e-9)
        yield numeric(f"minblocks.{kind}.density", f"{kind}: density pi/sqrt 18",
                      acc.density, kb.KEPLER_DENSITY, 1e-9)
        p, q = mb.split_prism(kind)
        yield numeric(f"minblocks.{kind}.prism_volume", f"{kind} prisms: half the volume each",
                      max(abs(p.volume() - 2 * SQRT2), abs(q.volume() - 2 * SQRT2)), 0.0, 1e-12)
        yield numeric(f"minblocks.{kind}.prism_density", f"{kind} prisms: density pi/sqrt 18",
                      max(abs(mb.vertex_sphere_density(h).density - kb.KEPLER_DENSITY) for h in (p, q)),
                      0.0, 1e-9)
    for kind in ("penta_A", "penta_B", "tetra_A", "tetra_B"):
        b = mb.minimal_block(kind)
        yield numeric(f"minblocks.{kind}.volume", f"{kind}: stated minimum volume", b.volume(),
                      mb.VOLUMES[kind], 1e-12)


def suite_barlow(opt: Options, sequences=None, nx: int = 2, ny: int = 2) -> Iterable[CheckResult]:
    seqs = sequences if sequences is not None else barlow.cyclic_sequences(8)
    worst_density, worst_dist, bad_counts, bad_periphery = 0.0, 0.0, 0, 0
    for s in seqs:
        region = barlow.generate_packing(s, nx, ny)
        worst_density = max(worst_density, abs(barlow.packing_density(region) - barlow.DENSITY))
        worst_dist = max(worst_dist, abs(barlow.minimum_distance(region) - 2.0))
        cons = barlow.contacts(region)
        bad_counts += sum(len(c) != 12 for c in cons)
        for i, mine in enumerate(cons):
            for j, sh in mine:
                per = barlow.periphery_structure(region, i, j, neighbor_shift=sh, con=cons)
                bad_periphery += tuple(per) != (1, 4, 7)
    label = f"{len(seqs)} stacking sequences" if sequences is None else ", ".join(map(str, seqs))
    yield numeric("barlow.density", f"{label}: density pi/sqrt 18", worst_density, 0.0, 1e-12)
    yield numeric("barlow.min_distance", f"{label}: closest centres 2 apart", worst_dist, 0.0, 1e-12)
    yield exact("barlow.contacts", f"{label}: spheres without exactly 12 contacts", bad_counts, 0)
    yield exact("barlow.periphery", f"{label}: contact pairs not split (1, 4, 7)", bad_periphery, 0)


SUITES: dict[str, Callable[[Options], Iterable[CheckResult]]] = {
    "oracle": suite_oracle,
    "profiles": suite_profiles,
    "honeycomb": suite_honeycomb,
    "table1": suite_table1,
    "thirteen": suite_thirteen,
    "blocks": suite_blocks,
    "minblocks": suite_minblocks,
    "barlow": suite_barlow,
}


def run_suite(suite: Callable[[Options], Iterable[CheckResult]], opt: Options) -> list[CheckResult]:
    out = []
    it = iter(suite(opt))
    while True:
        t0 = time.perf_counter()
        try:
            r = next(it)
        except StopIteration:
            break
        r.runtime_ms = (time.perf_counter() - t0) * 1e3
        out.append(r)
    return out


def run(names: Iterable[str], opt: Options | None = None) -> list[CheckResult]:
    opt = opt or Options()
    out = []
    for name in names:
        out += run_suite(SUITES[name], opt)
    return out


# --- rendering ----------------------------------------------------------------

FIELDS = ["check_id", "claim", "computed", "expected", "tolerance", "passed", "runtime_ms"]


def _row(r: CheckResult, timing: bool) -> dict:
    d = asdict(r)
    if not timing:
        d.pop("runtime_ms")
    return d


def render(results: list[CheckResult], fmt_name: str = "md", timing: bool = False) -> str:
    fields = FIELDS if timing else FIELDS[:-1]
    if fmt_name == "json":
        return "".join(json.dumps(_row(r, timing)) + "\n" for r in results)
    if fmt_name == "csv":
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=fields, lineterminator="\n")
        w.writeheader()
        for r in results:
            w.writerow(_row(r, timing))
        return buf.getvalue()
    if fmt_name != "md":
        raise ValueError(f"unknown format {fmt_name!r}")
    lines = ["| " + " | ".join(fields) + " |", "|" + "---|" * len(fields)]
    for r in results:
        d = _row(r, timing)
        cells = [("PASS" if v else "FAIL") if k == "passed" else
                 (f"{v:.1f}" if k == "runtime_ms" else fmt(v)) for k, v in d.items()]
        lines.append("| " + " | ".join(c.replace("|", "/") for c in cells) + " |")
    n_pass = sum(r.passed for r in results)
    lines.append("")
    lines.append(f"{n_pass}/{len(results)} checks passed")
    return "\n".join(lines) + "\n"
