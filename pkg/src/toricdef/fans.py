"""Fans of smooth complete toric varieties: data model and combinatorics.

Rays are primitive integer vectors, maximal cones are index sets into the
ray list, and all checks (smoothness, completeness, orientation) are exact.
Ray and cone indices are 0-based here; human-readable reports use 1-based
indices.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, cmp_to_key
from itertools import combinations

from .linalg import (det, det2, dot, egcd, mat_vec, primitive,
                     solve_or_certificate, unimodular_complement, vec_gcd)

FANO = "FANO"
WEAKLY_FANO = "WEAKLY_FANO"
NEITHER = "NEITHER"


@dataclass(frozen=True)
class Issue:
    code: str
    indices: tuple
    detail: str

    def to_dict(self):
        return {"code": self.code, "indices": list(self.indices), "detail": self.detail}


class FanValidationError(ValueError):
    """Raised when raw fan data violates a fan invariant.

    Carries the full list of violations so callers can report all of them.
    """

    def __init__(self, issues):
        self.issues = list(issues)
        super().__init__("; ".join(f"{i.code}{list(i.indices)}" for i in self.issues))


class NotDim2Error(ValueError):
    pass


@dataclass(frozen=True)
class Fan:
    """A complete smooth fan: validated rays plus maximal cones."""

    dim: int
    rays: tuple
    max_cones: tuple  # tuple of sorted ray-index tuples

    @property
    def n_rays(self) -> int:
        return len(self.rays)

    def pairing(self, ray_index: int, u) -> int:
        return dot(self.rays[ray_index], u)

    @cached_property
    def _cone_ray_sets(self):
        return tuple(frozenset(c) for c in self.max_cones)

    @cached_property
    def shared_cone_pairs(self):
        """Set of frozenset pairs {j, k} of rays lying in a common cone."""
        pairs = set()
        for cone in self.max_cones:
            for j, k in combinations(cone, 2):
                pairs.add(frozenset((j, k)))
        return pairs

    def share_cone(self, j: int, k: int) -> bool:
        return frozenset((j, k)) in self.shared_cone_pairs

    def cones_containing(self, rays: frozenset):
        return [i for i, c in enumerate(self._cone_ray_sets) if rays <= c]

    @cached_property
    def face_table(self):
        """Common ray set of every subset of <= dim+1 cover cones.

        The intersection of maximal cones of a fan is the face spanned by
        their common rays, so this table describes every intersection the
        Cech complex needs.
        """
        n = len(self.max_cones)
        table = {}
        sets = self._cone_ray_sets
        for i in range(n):
            table[(i,)] = sets[i]
        for size in range(2, min(n, 4) + 1):
            for combo in combinations(range(n), size):
                table[combo] = table[combo[:-1]] & sets[combo[-1]]
        return table

    def to_dict(self):
        return {"dim": self.dim,
                "rays": [list(r) for r in self.rays],
                "cones": [list(c) for c in self.max_cones]}


@dataclass(frozen=True)
class SurfaceFan(Fan):
    """A smooth complete fan in dimension 2 with its counterclockwise ray cycle.

    Rays are stored in ccw order with det(ray[i], ray[i+1]) = +1 for all i
    (indices mod l), and max cones are exactly the consecutive pairs.
    """

    @property
    def l(self) -> int:
        return len(self.rays)

    def ray(self, i: int):
        """Ray by cyclic index (any integer)."""
        return self.rays[i % self.l]

    @cached_property
    def self_intersection_cycle(self):
        """The integers a_i with ray[i-1] + ray[i+1] = a_i * ray[i]."""
        cyc = []
        for i in range(self.l):
            s = tuple(p + q for p, q in zip(self.ray(i - 1), self.ray(i + 1)))
            v = self.rays[i]
            k = 0 if v[0] == 0 else s[0] // v[0]
            if v[0] == 0:
                k = s[1] // v[1]
            if tuple(k * c for c in v) != s:
                raise AssertionError(f"ray {i}: neighbour sum not a multiple")
            cyc.append(k)
        return tuple(cyc)


@dataclass(frozen=True)
class IsoClass:
    """Canonical form of the self-intersection cycle of a surface fan.

    Two smooth complete toric surfaces are related by a lattice automorphism
    iff their canonical cycles agree.
    """

    cycle: tuple

    @staticmethod
    def of_cycle(cycle) -> "IsoClass":
        cyc = tuple(cycle)
        n = len(cyc)
        best = None
        for seq in (cyc, cyc[::-1]):
            for r in range(n):
                cand = seq[r:] + seq[:r]
                if best is None or cand < best:
                    best = cand
        return IsoClass(best)


def _check_rays(rays, dim, issues):
    seen = {}
    for i, r in enumerate(rays):
        if len(r) != dim:
            issues.append(Issue("NOT_A_FAN", (i,), f"ray {i} has length {len(r)}, expected {dim}"))
            continue
        if all(c == 0 for c in r):
            issues.append(Issue("NON_PRIMITIVE_RAY", (i,), f"ray {i} is zero"))
            continue
        if vec_gcd(r) != 1:
            issues.append(Issue("NON_PRIMITIVE_RAY", (i,), f"ray {i} = {list(r)} has gcd {vec_gcd(r)}"))
        if r in seen:
            issues.append(Issue("NOT_A_FAN", (seen[r], i), f"rays {seen[r]} and {i} coincide"))
        seen[r] = i


def fan_issues(rays, max_cones, dim):
    """All fan-invariant violations of the raw data (empty list when valid)."""
    rays = tuple(tuple(int(c) for c in r) for r in rays)
    cones = tuple(tuple(sorted(set(int(i) for i in c))) for c in max_cones)
    issues: list[Issue] = []
    if dim < 1:
        return [Issue("NOT_A_FAN", (), f"dimension {dim} < 1")]
    _check_rays(rays, dim, issues)
    if any(len(r) != dim for r in rays):
        return issues
    if not cones:
        issues.append(Issue("NOT_COMPLETE", (), "no maximal cones"))
    ok_cones = []
    for ci, c in enumerate(cones):
        if len(c) != dim or any(i < 0 or i >= len(rays) for i in c):
            issues.append(Issue("NOT_A_FAN", (ci,), f"cone {ci} = {list(c)} is not a {dim}-subset of ray indices"))
            continue
        d = det([list(rays[i]) for i in c])
        if abs(d) != 1:
            issues.append(Issue("NOT_SMOOTH", c, f"cone {list(c)} has |det| = {abs(d)}"))
        ok_cones.append(c)
    if len(set(ok_cones)) != len(ok_cones):
        issues.append(Issue("NOT_A_FAN", (), "duplicate maximal cones"))
    if issues:
        return issues

    # Wall structure: every (dim-1)-face of a max cone must be shared by
    # exactly two max cones, lying on opposite sides of the wall.
    walls = {}
    for ci, c in enumerate(cones):
        for w in combinations(c, dim - 1):
            walls.setdefault(w, []).append(ci)
    for w, owners in sorted(walls.items()):
        if len(owners) == 1:
            issues.append(Issue("NOT_COMPLETE", w, f"wall {list(w)} lies on only one cone"))
        elif len(owners) > 2:
            issues.append(Issue("NOT_A_FAN", w, f"wall {list(w)} lies on {len(owners)} cones"))
        else:
            a, b = owners
            other_a = next(i for i in cones[a] if i not in w)
            other_b = next(i for i in cones[b] if i not in w)
            base = [list(rays[i]) for i in w]
            sa = det(base + [list(rays[other_a])])
            sb = det(base + [list(rays[other_b])])
            if sa * sb >= 0:
                issues.append(Issue("NOT_A_FAN", w,
                                    f"cones {a} and {b} lie on the same side of wall {list(w)}"))
    if issues:
        return issues

    if dim == 2:
        # Full-turn criterion: the ccw-sorted rays must chain through all
        # cones with positive consecutive determinants.
        order = sort_ccw(range(len(rays)), rays)
        cone_set = set(cones)
        for k in range(len(order)):
            a, b = order[k], order[(k + 1) % len(order)]
            if det2(rays[a], rays[b]) <= 0:
                issues.append(Issue("NOT_COMPLETE", (a, b),
                                    f"angle gap of at least pi after ray {a}"))
            elif tuple(sorted((a, b))) not in cone_set:
                issues.append(Issue("NOT_A_FAN", (a, b),
                                    f"adjacent rays {a}, {b} span no cone"))
    return issues


def validate_fan(rays, max_cones=None, dim=None) -> Fan:
    """Build a validated Fan, raising FanValidationError on any violation.

    For dim = 2 the cones may be omitted; they are derived from the
    counterclockwise ray order.
    """
    rays = tuple(tuple(int(c) for c in r) for r in rays)
    if dim is None:
        dim = len(rays[0]) if rays else 0
    if max_cones is None:
        if dim != 2:
            raise FanValidationError([Issue("NOT_A_FAN", (), "cones may be omitted only for dim 2")])
        order = sort_ccw(range(len(rays)), rays)
        max_cones = [tuple(sorted((order[k], order[(k + 1) % len(order)])))
                     for k in range(len(order))]
    issues = fan_issues(rays, max_cones, dim)
    if issues:
        raise FanValidationError(issues)
    cones = tuple(sorted(tuple(sorted(set(c))) for c in max_cones))
    return Fan(dim=dim, rays=rays, max_cones=cones)


def sort_ccw(indices, rays):
    """Ray indices sorted counterclockwise, starting from the positive x-axis."""

    def half(v):
        # 0 for angle in [0, pi), 1 for [pi, 2*pi)
        return 0 if (v[1] > 0 or (v[1] == 0 and v[0] > 0)) else 1

    def cmp(i, j):
        vi, vj = rays[i], rays[j]
        hi, hj = half(vi), half(vj)
        if hi != hj:
            return hi - hj
        d = det2(vi, vj)
        return -1 if d > 0 else (1 if d < 0 else 0)

    return sorted(indices, key=cmp_to_key(cmp))


def order_surface(fan: Fan) -> SurfaceFan:
    """Reorder a validated dim-2 fan counterclockwise.

    The result has det(ray[i], ray[i+1]) = +1 for all cyclically consecutive
    pairs, starting at the ray closest to the positive x-axis.
    """
    if fan.dim != 2:
        raise NotDim2Error(f"NOT_DIM_2: fan has dimension {fan.dim}")
    order = sort_ccw(range(fan.n_rays), fan.rays)
    rays = tuple(fan.rays[i] for i in order)
    l = len(rays)
    if l < 3:
        raise FanValidationError([Issue("NOT_COMPLETE", (), f"only {l} rays")])
    for k in range(l):
        if det2(rays[k], rays[(k + 1) % l]) != 1:
            raise FanValidationError([Issue("NOT_SMOOTH", (k, (k + 1) % l),
                                            "consecutive determinant is not +1")])
    # cone k is cone(ray k, ray k+1); keep that order so cone indices mean
    # something downstream (Cech cover, overlaps at rays)
    cones = tuple(tuple(sorted((k, (k + 1) % l))) for k in range(l))
    if set(cones) != set(fan.max_cones):
        raise FanValidationError([Issue("NOT_A_FAN", (), "cones do not match the ccw ray cycle")])
    return SurfaceFan(dim=2, rays=rays, max_cones=cones)


def surface_fan(rays) -> SurfaceFan:
    """Validate raw 2-d ray data and return the ccw-ordered surface fan."""
    return order_surface(validate_fan(rays, None, 2))


def rotate_surface(sf: SurfaceFan, start: int) -> SurfaceFan:
    """The same surface fan with the ray cycle rotated to begin at `start`."""
    rays = tuple(sf.rays[(start + k) % sf.l] for k in range(sf.l))
    l = sf.l
    cones = tuple(tuple(sorted((k, (k + 1) % l))) for k in range(l))
    return SurfaceFan(dim=2, rays=rays, max_cones=cones)


def adapted_basis(r_weight, dim: int = 2):
    """Basis change making the weight R equal to [0, 1].

    Returns (P, Q): P acts on the lattice N, Q on the dual lattice M, with
    Q @ R = (0, 1), det P = +1 and <P v, Q u> = <v, u> for all v, u.
    """
    if dim != 2 or len(r_weight) != 2:
        raise ValueError("adapted bases are only constructed in dimension 2")
    r1, r2 = int(r_weight[0]), int(r_weight[1])
    if vec_gcd((r1, r2)) != 1:
        raise ValueError(f"NOT_PRIMITIVE: {list(r_weight)}")
    return unimodular_complement(r1, r2)


def fano_status(fan: Fan) -> str:
    """FANO / WEAKLY_FANO / NEITHER, by the support-function convexity test.

    For each maximal cone, the unique weight pairing to 1 with all its
    generators is compared against every other ray: strictly below 1
    everywhere means Fano, at most 1 means weakly Fano.
    """
    strict = True
    for cone in fan.max_cones:
        mat = [list(fan.rays[i]) for i in cone]
        kind, u = solve_or_certificate(mat, [1] * fan.dim)
        assert kind == "solution"
        u = [Fraction(c) for c in u]
        in_cone = set(cone)
        for j in range(fan.n_rays):
            if j in in_cone:
                continue
            val = sum(Fraction(c) * q for c, q in zip(fan.rays[j], u))
            if val > 1:
                return NEITHER
            if val == 1:
                strict = False
    return FANO if strict else WEAKLY_FANO


def detect_a1_cylinder(fan: Fan):
    """Witness triples (i, j, k) with ray_j + ray_k = 2 ray_i.

    Both (i, j) and (i, k) must span 2-dimensional cones of the fan.  The
    midpoint configuration is the combinatorial obstruction used by the
    weak-Fano rigidity criterion; an empty list means no such subfan exists.
    """
    ray_index = {r: i for i, r in enumerate(fan.rays)}
    witnesses = []
    for i in range(fan.n_rays):
        double = tuple(2 * c for c in fan.rays[i])
        for j in range(fan.n_rays):
            if j == i or not fan.share_cone(i, j):
                continue
            need = tuple(d - c for d, c in zip(double, fan.rays[j]))
            k = ray_index.get(need)
            if k is None or k in (i, j) or j > k:
                continue
            if fan.share_cone(i, k):
                witnesses.append((i, j, k))
    return sorted(witnesses)


def iso_class(sf: SurfaceFan) -> IsoClass:
    return IsoClass.of_cycle(sf.self_intersection_cycle)


def star_subdivision(sf: SurfaceFan, k: int) -> SurfaceFan:
    """Blow up: insert ray[k] + ray[k+1] between positions k and k+1."""
    new_ray = tuple(p + q for p, q in zip(sf.ray(k), sf.ray(k + 1)))
    rays = list(sf.rays)
    rays.insert((k % sf.l) + 1, new_ray)
    return surface_fan(rays)


def hirzebruch(r: int) -> SurfaceFan:
    """The surface with ray cycle (1,0), (0,1), (-1,r), (0,-1); F_0 = P1 x P1."""
    return surface_fan([(1, 0), (0, 1), (-1, r), (0, -1)])


def projective_plane() -> SurfaceFan:
    return surface_fan([(1, 0), (0, 1), (-1, -1)])


def surface_corpus(max_rays: int = 7):
    """All smooth complete toric surfaces reachable from the standard seeds.

    Breadth-first star subdivisions of P2, P1 x P1 and F_r (r <= 4), capped
    at `max_rays` rays and deduplicated by iso class.  Deterministic order.
    """
    seeds = [projective_plane()] + [hirzebruch(r) for r in range(5)]
    seen = {}
    queue = list(seeds)
    while queue:
        sf = queue.pop(0)
        key = iso_class(sf).cycle
        if key in seen:
            continue
        seen[key] = sf
        if sf.l < max_rays:
            for k in range(sf.l):
                queue.append(star_subdivision(sf, k))
    return [seen[k] for k in sorted(seen, key=lambda c: (len(c), c))]


def apply_unimodular(fan: Fan, m) -> Fan:
    """Transform all rays by a unimodular matrix and re-validate."""
    rays = [mat_vec(m, r) for r in fan.rays]
    new = validate_fan(rays, fan.max_cones, fan.dim)
    if fan.dim == 2:
        return order_surface(new)
    return new


def fan_from_dict(data) -> Fan:
    """Parse the fan JSON object {"dim": n, "rays": [...], "cones": [...]}."""
    if "dim" not in data or "rays" not in data:
        raise KeyError("fan file needs 'dim' and 'rays' fields")
    dim = int(data["dim"])
    rays = [tuple(int(c) for c in r) for r in data["rays"]]
    cones = data.get("cones")
    fan = validate_fan(rays, cones, dim)
    if dim == 2:
        return order_surface(fan)
    return fan


def fan_to_json(fan: Fan, name: str | None = None) -> str:
    """Canonical single-line-per-field JSON for a fan (byte-stable round trip)."""
    obj = {"dim": fan.dim,
           "rays": [list(r) for r in fan.rays],
           "cones": [list(c) for c in fan.max_cones]}
    if name is not None:
        obj["name"] = name
    return json.dumps(obj, separators=(", ", ": ")) + "\n"


def load_fan_file(path) -> Fan:
    with open(path, "r", encoding="utf-8") as fh:
        return fan_from_dict(json.load(fh))
