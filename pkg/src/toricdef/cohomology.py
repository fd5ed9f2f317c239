"""Degree-by-degree cohomology of the boundary line bundles O(D_i).

Two independent routes are implemented: the graph formula (count connected
components of the negative-pairing graph) and a Cech complex over the cover
by maximal cones, with all ranks computed exactly over the rationals.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from .fans import Fan, SurfaceFan
from .linalg import int_rank, solve_or_certificate

FULL = "FULL"
RESTRICTED = "RESTRICTED"


class UnionFind:
    def __init__(self):
        self.parent = {}

    def add(self, x):
        self.parent.setdefault(x, x)

    def find(self, x):
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[max(ra, rb)] = min(ra, rb)

    def components(self):
        return len({self.find(x) for x in self.parent})


class NotACocycleError(ValueError):
    pass


class DimensionLimitError(ValueError):
    pass


@dataclass(frozen=True)
class DegreeGraph:
    """The graph on rays pairing negatively with a degree u.

    Vertices are ray indices j != anchor with <ray_j, u> < 0 (RESTRICTED
    additionally requires ray_j to share a cone with the anchor ray); edges
    join rays lying in a common cone.
    """

    anchor: int
    degree: tuple
    flavor: str
    vertices: tuple
    edges: tuple

    @property
    def components(self) -> int:
        uf = UnionFind()
        for v in self.vertices:
            uf.add(v)
        for a, b in self.edges:
            uf.union(a, b)
        return uf.components()


def gamma_graph(fan: Fan, i: int, u, flavor: str = FULL) -> DegreeGraph:
    verts = []
    for j in range(fan.n_rays):
        if j == i or fan.pairing(j, u) >= 0:
            continue
        if flavor == RESTRICTED and not fan.share_cone(i, j):
            continue
        verts.append(j)
    edges = [(a, b) for a, b in combinations(verts, 2) if fan.share_cone(a, b)]
    return DegreeGraph(anchor=i, degree=tuple(u), flavor=flavor,
                       vertices=tuple(verts), edges=tuple(edges))


def h1_dim_graph(fan: Fan, i: int, u, flavor: str = FULL) -> int:
    """dim H^1(Y, O(D_i))(u) by the component-count formula.

    Zero unless <ray_i, u> = -1; otherwise one less than the number of
    connected components of the degree graph (at least zero).
    """
    if fan.pairing(i, u) != -1:
        return 0
    return max(0, gamma_graph(fan, i, u, flavor).components - 1)


def _section_dim(face_rays, divisor: int | None, u, pairings) -> bool:
    """Whether O(D_divisor) has a (1-dim) section space on the given face."""
    for j in face_rays:
        bound = -1 if j == divisor else 0
        if pairings[j] < bound:
            return False
    return True


class CechComplex:
    """Cech complex of O(D_i) (or of the sum over all i) in a fixed degree.

    The cover consists of all maximal cones; the intersection of any subset
    is the face spanned by their common rays, and the section space of each
    face in the fixed degree is 0- or 1-dimensional per divisor.  Boundary
    matrices carry the usual alternating signs.
    """

    def __init__(self, fan: Fan, u, divisor: int | None = None, max_level: int = 3):
        self.fan = fan
        self.u = tuple(u)
        self.divisor = divisor
        self.max_level = max_level
        pairings = [fan.pairing(j, u) for j in range(fan.n_rays)]
        divisors = range(fan.n_rays) if divisor is None else (divisor,)
        table = fan.face_table
        n = len(fan.max_cones)
        self.basis = []      # basis[p]: list of (cone-combo, divisor)
        self.index = []      # index[p]: map entry -> position
        for p in range(max_level + 1):
            level = []
            for combo in combinations(range(n), p + 1):
                face = table[combo]
                for d in divisors:
                    if _section_dim(face, d, u, pairings):
                        level.append((combo, d))
            self.basis.append(level)
            self.index.append({e: k for k, e in enumerate(level)})

    def dim(self, p: int) -> int:
        return len(self.basis[p])

    def boundary(self, p: int) -> list[list[int]]:
        """Matrix of d_p: C^p -> C^{p+1} (rows indexed by C^{p+1})."""
        rows = []
        src = self.index[p]
        for combo, d in self.basis[p + 1]:
            row = [0] * len(self.basis[p])
            for k in range(len(combo)):
                face = combo[:k] + combo[k + 1:]
                col = src.get((face, d))
                if col is not None:
                    row[col] += (-1) ** k
            rows.append(row)
        return rows

    def h_dim(self, p: int) -> int:
        rank_prev = int_rank(self.boundary(p - 1)) if p > 0 else 0
        rank_here = int_rank(self.boundary(p)) if p < self.max_level else 0
        return self.dim(p) - rank_here - rank_prev

    def check_d_squared(self) -> bool:
        """d_{p+1} o d_p = 0 for all constructed levels."""
        for p in range(self.max_level - 1):
            a = self.boundary(p)
            b = self.boundary(p + 1)
            for i in range(len(b)):
                for j in range(len(a[0]) if a else 0):
                    if sum(b[i][k] * a[k][j] for k in range(len(a))) != 0:
                        return False
        return True


def cech_h_dim(fan: Fan, i: int, u, p: int, max_dim: int = 3) -> int:
    """dim H^p of the Cech complex of O(D_i) in degree u, exactly over Q.

    The guard on the fan dimension is a resource bound only; raise it via
    max_dim if you accept the cost.
    """
    if fan.dim > max_dim:
        raise DimensionLimitError(f"DIMENSION_LIMIT: fan dim {fan.dim} > {max_dim}")
    if p not in (0, 1, 2):
        raise ValueError("p must be 0, 1 or 2")
    return CechComplex(fan, u, divisor=i, max_level=min(p + 1, 3)).h_dim(p)


def _adjacent_pairs(sf: SurfaceFan):
    """For each ray r, the ordered cone pair (sigma_{r-1}, sigma_r) meeting in r.

    Cone k denotes cone(ray[k], ray[k+1]); the overlap of cones k-1 and k is
    the ray r = k.
    """
    l = sf.l
    return {r: ((r - 1) % l, r) for r in range(l)}


def expand_cochain(sf: SurfaceFan, u, cochain):
    """Extend an adjacent-overlap cochain to a full C^1 vector per divisor.

    `cochain` maps (ray_index, divisor_index) -> coefficient of x^u e_D on
    the overlap at that ray, the value being taken on the ordered pair
    (cone before the ray, cone after the ray).  A 1-cocycle is determined by
    these values; the extension telescopes them to all cone pairs and fails
    with NotACocycleError if the cyclic sum is nonzero or an entry is not a
    section on its overlap.
    """
    l = sf.l
    pairings = [sf.pairing(j, u) for j in range(l)]
    by_div: dict[int, dict[int, Fraction]] = {}
    for (r, d), val in cochain.items():
        val = Fraction(val)
        if val == 0:
            continue
        if not (0 <= r < l and 0 <= d < l):
            raise NotACocycleError(f"overlap or divisor index out of range: {(r, d)}")
        bound = -1 if r == d else 0
        if pairings[r] < bound:
            raise NotACocycleError(
                f"x^{list(u)} e_D{d + 1} is not a section on the overlap at ray {r + 1}")
        by_div.setdefault(d, {})[r] = val
    for d, vals in by_div.items():
        if sum(vals.values()) != 0:
            raise NotACocycleError(f"cyclic sum for divisor {d + 1} is nonzero")
    # Telescoped values on arbitrary ordered cone pairs (p, q), p < q:
    # g_{p,q} = sum of the adjacent steps p -> p+1 -> ... -> q.
    full = {}
    for d, vals in by_div.items():
        prefix = [Fraction(0)]
        for k in range(l):
            # step from cone k to cone k+1 crosses the ray k+1
            prefix.append(prefix[-1] + vals.get((k + 1) % l, Fraction(0)))
        entries = {}
        for p in range(l):
            for q in range(p + 1, l):
                g = prefix[q] - prefix[p]
                if g != 0:
                    entries[(p, q)] = g
        full[d] = entries
    return full


def _divisor_d0(sf: SurfaceFan, u, d: int):
    """d0 matrix for O(D_d) in degree u over the surface cover, with bases."""
    pairings = [sf.pairing(j, u) for j in range(sf.l)]
    l = sf.l
    cones = [(k, (k + 1) % l) for k in range(l)]
    c0 = [k for k in range(l)
          if all(pairings[j] >= (-1 if j == d else 0) for j in cones[k])]
    c1 = list(combinations(range(l), 2))
    table = sf.face_table
    rows = []
    c1_live = []
    for (p, q) in c1:
        combo_key = (p, q)
        face = table[combo_key]
        if not _section_dim(face, d, u, pairings):
            continue
        c1_live.append((p, q))
        row = [0] * len(c0)
        for sign, cone in ((-1, p), (1, q)):
            if cone in c0:
                row[c0.index(cone)] = sign
        rows.append(row)
    return c0, c1_live, rows


def is_coboundary(sf: SurfaceFan, u, cochain):
    """Decide whether a 1-cocycle over the sum of the O(D_i) bounds.

    Args:
      sf: the ccw-ordered surface fan whose cover is used.
      u: the degree of every entry.
      cochain: map (ray_index, divisor_index) -> coefficient, giving the
        value on the overlap at that ray (see expand_cochain).

    Returns:
      (True, certificate) with certificate["preimage"] an explicit 0-cochain
      mapping (cone_index, divisor_index) -> coefficient, or
      (False, certificate) with certificate["functional"] a linear functional
      on C^1 entries, vanishing on the image of d0 but not on the cocycle.
    """
    full = expand_cochain(sf, u, cochain)
    preimage = {}
    for d, entries in full.items():
        c0, c1_live, rows = _divisor_d0(sf, u, d)
        live = set(c1_live)
        assert all(pair in live for pair in entries), "cocycle entry off section support"
        rhs = [entries.get(pair, Fraction(0)) for pair in c1_live]
        if not c0:
            if any(v != 0 for v in rhs):
                pair = c1_live[next(k for k, v in enumerate(rhs) if v != 0)]
                return False, {"divisor": d, "functional": {(pair, d): Fraction(1)}}
            continue
        kind, payload = solve_or_certificate(rows, rhs)
        if kind == "certificate":
            functional = {(c1_live[k], d): payload[k]
                          for k in range(len(c1_live)) if payload[k] != 0}
            return False, {"divisor": d, "functional": functional}
        for k, cone in enumerate(c0):
            if payload[k] != 0:
                preimage[(cone, d)] = payload[k]
    return True, {"preimage": preimage}


def h1_classes_rank(sf: SurfaceFan, u, cochains) -> int:
    """Rank in Cech H^1 of the classes of the given 1-cocycles.

    Each cochain is in adjacent-overlap form.  The computation splits per
    divisor: classes supported on O(D_d) are compared against the image of
    that block's d0.
    """
    per_div: dict[int, list[dict]] = {}
    for cochain in cochains:
        for d, entries in expand_cochain(sf, u, cochain).items():
            per_div.setdefault(d, []).append(entries)
    total = 0
    for d, class_list in per_div.items():
        c0, c1_live, rows = _divisor_d0(sf, u, d)
        pos = {pair: k for k, pair in enumerate(c1_live)}
        base_rank = int_rank(rows) if c0 else 0
        # augment the d0 columns with one column per cocycle class
        aug = [row[:] for row in rows] if c0 else [[] for _ in c1_live]
        for entries in class_list:
            assert all(pair in pos for pair in entries), "cocycle entry off section support"
            vec = [Fraction(0)] * len(c1_live)
            for pair, val in entries.items():
                vec[pos[pair]] = Fraction(val)
            scale = 1
            for v in vec:
                scale = scale * v.denominator // gcd(scale, v.denominator)
            for k in range(len(c1_live)):
                aug[k].append(int(vec[k] * scale))
        total += (int_rank(aug) if aug and aug[0] else 0) - base_rank
    return total
