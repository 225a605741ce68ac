"""Annuli S(n,r) and S(n,r)^infty: certified infinite-component detection,
connected components, connection thickness, entropy, induced metrics, and
the almost-convexity / ladder-cutset probes.

Certification is exact, never heuristic: a vertex of the annulus belongs to
S(n,r)^infty iff its component in the induced graph on B(N)\\B(n-1) reaches
word length 2n-1 (or the table boundary).  Reaching 2n-1 certifies
infiniteness because retreat depth is at most half the length; exhausting
the component below 2n-1 certifies finiteness because the component then
lies inside the finite ball B(2n-2).
"""

from __future__ import annotations

import math
import random
from collections import deque
from dataclasses import dataclass, field

from .errors import (
    DisconnectedAnnulus,
    InsufficientRadius,
    VertexNotInAnnulus,
    WrongModel,
)
from .groups import IN_FINITE, IN_INFINITE, LadderLamplighter

ABOVE_CAP = "above-cap"

FULL = "full"
SPHERE = "sphere"
SPHERE_INF = "sphere-inf"


class UnionFind:
    """Array union-find with path halving, over table indices."""

    def __init__(self, size):
        self.parent = list(range(size))

    def find(self, x):
        parent = self.parent
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        self.parent[rb] = ra
        return True


def certified_mask(table, n):
    """bytearray over table indices: 1 iff the element has length >= n and
    lies in (the union of) the infinite component(s) of B(n-1)^c."""
    mask = table._cert.get(n)
    if mask is not None:
        return mask
    size = len(table.elements)
    if n <= 0:
        mask = bytearray([1]) * size
        table._cert[n] = mask
        return mask
    if table.N < 2 * n:
        raise InsufficientRadius(
            f"certification at inner radius {n} needs table N >= {2 * n}, have {table.N}")
    offsets, targets, boundary, (bucket_u, bucket_v) = table.graph()
    lengths = table.lengths
    start = table.level_offsets[n]
    uf = UnionFind(size)
    for lvl in range(n, table.N + 1):
        bu, bv = bucket_u[lvl], bucket_v[lvl]
        for k in range(len(bu)):
            u, v = bu[k], bv[k]
            if lengths[u] >= n and lengths[v] >= n:
                uf.union(u, v)
    threshold = 2 * n - 1
    flagged = set()
    for i in range(start, size):
        if lengths[i] >= threshold or boundary[i]:
            flagged.add(uf.find(i))
    mask = bytearray(size)
    for i in range(start, size):
        if uf.find(i) in flagged:
            mask[i] = 1
    table._cert[n] = mask
    return mask


def certify_infinite_by_search(model, g, n, cap=2_000_000):
    """Table-free certification that g lies in an infinite component of
    B(n-1)^c: BFS from g through elements of exact length >= n until some
    element of length >= 2n-1 turns up (InInfinite) or the component is
    exhausted below that threshold (InFinite).  Needs an exact length
    formula; `cap` bounds the edge budget."""
    from collections import deque

    if model.exact_length(g) < n:
        raise VertexNotInAnnulus(f"|g| < {n}")
    if n <= 0:
        return IN_INFINITE
    target = 2 * n - 1
    ray = getattr(model, "escape_ray_exists", None)
    seen = {g}
    queue = deque([g])
    work = 0
    while queue:
        u = queue.popleft()
        if ray is not None and ray(u):
            return IN_INFINITE
        for v in model.neighbors(u):
            work += 1
            if work > cap:
                raise InsufficientRadius("escape search exceeded its edge cap")
            L = model.exact_length(v)
            if L >= target:
                return IN_INFINITE
            if L >= n and v not in seen:
                seen.add(v)
                queue.append(v)
    return IN_FINITE


def certify_infinite(g, n, table, model=None):
    """Exact decision: is g (with |g| >= n) in the infinite part of
    B(n-1)^c?  Union-of-infinite-components semantics for multi-ended
    models."""
    model = model or table.model
    i = table.index.get(g)
    if i is None:
        raise InsufficientRadius(f"element outside table radius {table.N}")
    if table.lengths[i] < n:
        raise VertexNotInAnnulus(f"|g| = {table.lengths[i]} < {n}")
    return IN_INFINITE if certified_mask(table, n)[i] else IN_FINITE


@dataclass
class AnnulusGraph:
    """Induced subgraph on S(n,r) (or S(n,r)^infty when filtered)."""

    table: object
    n: int
    r: int
    filtered: bool
    vertex_ids: list
    member: bytearray            # membership bitmap over table indices
    in_infinite: bytearray | None  # certification bitmap (None if unknowable)

    def __len__(self):
        return len(self.vertex_ids)

    @property
    def model(self):
        return self.table.model

    def levels(self):
        return [self.table.lengths[i] for i in self.vertex_ids]

    def contains(self, g):
        i = self.table.index.get(g)
        return i is not None and bool(self.member[i])


def build_annulus(n, r, filtered, table):
    """Vertex set S(n,r) = B(n+r)\\B(n-1), optionally filtered to the part
    certified connected to infinity."""
    if n < 0 or r < 0:
        raise InsufficientRadius("n and r must be nonnegative")
    if n + r > table.N:
        raise InsufficientRadius(
            f"annulus S({n},{r}) needs table N >= {n + r}, have {table.N}")
    cert = None
    if filtered or (n >= 1 and table.N >= 2 * n):
        try:
            cert = certified_mask(table, n)
        except InsufficientRadius:
            if filtered:
                raise
            cert = None
    lo, hi = table.level_offsets[n], table.level_offsets[n + r + 1]
    member = bytearray(len(table.elements))
    ids = []
    for i in range(lo, hi):
        if filtered and not cert[i]:
            continue
        member[i] = 1
        ids.append(i)
    return AnnulusGraph(table, n, r, filtered, ids, member, cert)


@dataclass
class ComponentPartition:
    """Connected components of an annulus, restricted to a vertex set."""

    restricted_to: str
    blocks: list          # list of (component_id, member table-indices)
    sizes: list
    H: float = field(init=False)
    h: float = field(init=False)

    def __post_init__(self):
        total = sum(self.sizes)
        if self.sizes and len(set(self.sizes)) == 1:
            # equal-cardinality blocks: entropy is maximal exactly
            self.H = math.log(len(self.sizes))
            self.h = 1.0
            return
        H = 0.0
        if total:
            for s in self.sizes:
                p = s / total
                H -= p * math.log(p)
        self.H = H
        self.h = 1.0 if len(self.sizes) <= 1 else H / math.log(len(self.sizes))

    @property
    def block_count(self):
        return len(self.blocks)

    def member_encodings(self, table):
        enc = table.model.encode
        return [(cid, [enc(table.elements[i]) for i in ids])
                for cid, ids in self.blocks]


def components(annulus, restrict=FULL):
    """Union-find over the annulus edges, then restrict the partition to
    the full annulus, to S(n), or to S(n)^infty."""
    table = annulus.table
    offsets, targets, _boundary, (bucket_u, bucket_v) = table.graph()
    member = annulus.member
    uf = UnionFind(len(table.elements))
    for lvl in range(annulus.n, min(annulus.n + annulus.r, table.N) + 1):
        bu, bv = bucket_u[lvl], bucket_v[lvl]
        for k in range(len(bu)):
            u, v = bu[k], bv[k]
            if member[u] and member[v]:
                uf.union(u, v)
    if restrict == FULL:
        chosen = annulus.vertex_ids
    else:
        lo, hi = table.level_offsets[annulus.n], table.level_offsets[annulus.n + 1]
        if restrict == SPHERE:
            chosen = [i for i in range(lo, hi) if member[i]]
        elif restrict == SPHERE_INF:
            if annulus.in_infinite is None:
                raise InsufficientRadius(
                    "sphere-inf restriction needs certification (table N >= 2n)")
            cert = annulus.in_infinite
            chosen = [i for i in range(lo, hi) if member[i] and cert[i]]
        else:
            raise ValueError(f"unknown restriction {restrict!r}")
    groups = {}
    for i in chosen:
        groups.setdefault(uf.find(i), []).append(i)
    blocks = sorted(groups.values(), key=lambda ids: ids[0])
    return ComponentPartition(
        restricted_to=restrict,
        blocks=[(cid, ids) for cid, ids in enumerate(blocks)],
        sizes=[len(ids) for ids in blocks])


def entropy(partition):
    """(H, h, block_count) of a ComponentPartition."""
    return partition.H, partition.h, partition.block_count


def connection_thickness(n, r_max, table, profile=None):
    """Smallest r <= r_max with S(n,r)^infty connected, else ABOVE_CAP.

    Shells are merged incrementally into one persistent union-find; if the
    table ends before r_max without connectivity the result is
    InsufficientRadius rather than a verdict.
    """
    if n == 0:
        if profile is not None:
            profile.append((0, True))
        return 0
    cert = certified_mask(table, n)
    offsets, targets, _boundary, (bucket_u, bucket_v) = table.graph()
    lengths = table.lengths
    uf = UnionFind(len(table.elements))
    active = 0
    comps = 0
    for r in range(0, r_max + 1):
        lvl = n + r
        if lvl > table.N:
            raise InsufficientRadius(
                f"thickness search at n={n} ran past table N={table.N} at r={r}")
        for i in range(table.level_offsets[lvl], table.level_offsets[lvl + 1]):
            if cert[i]:
                active += 1
                comps += 1
        bu, bv = bucket_u[lvl], bucket_v[lvl]
        for k in range(len(bu)):
            u, v = bu[k], bv[k]
            if lengths[u] >= n and cert[u] and cert[v]:
                if uf.union(u, v):
                    comps -= 1
        connected = active > 0 and comps == 1
        if profile is not None:
            profile.append((r, connected))
        if connected and profile is None:
            return r
    if profile is not None:
        for r, connected in profile:
            if connected:
                return r
    return ABOVE_CAP


def connectivity_profile(n, r_max, table):
    """[(r, connected?)] for r = 0..r_max; used by the monotonicity checks."""
    profile = []
    connection_thickness(n, r_max, table, profile=profile)
    return profile


def streaming_connection_thickness(n, r_max, table):
    """connection_thickness without the cached adjacency structure.

    Edges are regenerated on the fly; this trades CPU for memory so that
    very large tables (tens of millions of edges) stay within RAM.
    """
    if n == 0:
        return 0
    if table.N < 2 * n:
        raise InsufficientRadius(f"need table N >= {2 * n}")
    model, index, lengths = table.model, table.index, table.lengths
    nops = model.generator_count()
    size = len(table.elements)
    start = table.level_offsets[n]
    uf = UnionFind(size)
    escapes = bytearray(size)
    for i in range(start, size):
        g = table.elements[i]
        for gid in range(nops):
            j = index.get(model.apply(g, gid))
            if j is None:
                escapes[i] = 1
            elif j > i and lengths[j] >= n:
                uf.union(i, j)
    threshold = 2 * n - 1
    flagged = {uf.find(i) for i in range(start, size)
               if lengths[i] >= threshold or escapes[i]}
    cert = bytearray(size)
    for i in range(start, size):
        if uf.find(i) in flagged:
            cert[i] = 1
    uf2 = UnionFind(size)
    active = 0
    comps = 0
    for r in range(0, r_max + 1):
        lvl = n + r
        if lvl > table.N:
            raise InsufficientRadius(
                f"thickness search at n={n} ran past table N={table.N} at r={r}")
        for i in range(table.level_offsets[lvl], table.level_offsets[lvl + 1]):
            if not cert[i]:
                continue
            active += 1
            comps += 1
            g = table.elements[i]
            for gid in range(nops):
                j = index.get(model.apply(g, gid))
                if j is not None and j != i and lengths[j] >= n \
                        and lengths[j] <= lvl and cert[j]:
                    if uf2.union(i, j):
                        comps -= 1
        if active > 0 and comps == 1:
            return r
    return ABOVE_CAP


# -- induced metric ----------------------------------------------------------


def _annulus_bfs(annulus, source_id):
    table = annulus.table
    offsets, targets, _b, _k = table.graph()
    member = annulus.member
    dist = {source_id: 0}
    queue = deque([source_id])
    while queue:
        u = queue.popleft()
        du = dist[u]
        for k in range(offsets[u], offsets[u + 1]):
            v = targets[k]
            if member[v] and v not in dist:
                dist[v] = du + 1
                queue.append(v)
    return dist


def induced_distance(annulus, g1, g2):
    """Graph distance inside the annulus; None when disconnected."""
    i = annulus.table.index.get(g1)
    j = annulus.table.index.get(g2)
    if i is None or not annulus.member[i]:
        raise VertexNotInAnnulus(f"{annulus.model.encode(g1)} not in annulus")
    if j is None or not annulus.member[j]:
        raise VertexNotInAnnulus(f"{annulus.model.encode(g2)} not in annulus")
    if i == j:
        return 0
    dist = _annulus_bfs(annulus, i)
    return dist.get(j)


@dataclass
class DiameterResult:
    value: int
    exact: bool


# All-source BFS is exact below this vertex count; larger annuli fall back
# to sampled sources flagged as lower bounds.
EXACT_DIAMETER_CAP = 20_000


def induced_diameter(annulus, sample_sources=64):
    """Exact diameter (all-source BFS) below EXACT_DIAMETER_CAP vertices,
    else a sampled lower bound; None when the annulus is disconnected."""
    ids = annulus.vertex_ids
    if not ids:
        return None
    dist = _annulus_bfs(annulus, ids[0])
    if len(dist) != len(ids):
        return None
    exact = len(ids) <= EXACT_DIAMETER_CAP
    if exact:
        sources = ids
    else:
        step = max(1, len(ids) // sample_sources)
        sources = ids[::step]
    best = 0
    for s in sources:
        d = _annulus_bfs(annulus, s)
        best = max(best, max(d.values()))
    return DiameterResult(best, exact)


def sprawl_estimate(annulus, samples, seed):
    """Mean induced distance over `samples` uniform vertex pairs."""
    if samples < 1:
        raise ValueError("samples must be >= 1")
    ids = annulus.vertex_ids
    if not ids:
        raise DisconnectedAnnulus("empty annulus")
    dist0 = _annulus_bfs(annulus, ids[0])
    if len(dist0) != len(ids):
        raise DisconnectedAnnulus(f"S({annulus.n},{annulus.r}) is not connected")
    rng = random.Random(seed)
    cache = {}
    total = 0
    for _ in range(samples):
        a = ids[rng.randrange(len(ids))]
        b = ids[rng.randrange(len(ids))]
        if a not in cache:
            cache[a] = _annulus_bfs(annulus, a)
        total += cache[a][b]
    return total / samples


# -- section-8 probes ----------------------------------------------------------


def almost_convexity_probe(r, n_range, table):
    """For each n: the worst-case shortest detour between two elements of
    S(n) at distance <= r whose interior lies inside B(n-1); None means
    some pair has no such detour inside the table (unbounded at this cap).

    Only same-sphere pairs qualify: for |g2| > |g1| = n no path can have
    its interior inside B(n-1) at all."""
    offsets, targets, _b, _k = table.graph()
    lengths = table.lengths
    out = {}
    for n in n_range:
        if n < 1 or n + r > table.N:
            raise InsufficientRadius(f"probe needs levels up to {n + r}")
        worst = 0
        found_all = True
        for i in table.sphere_ids(n):
            # candidates g2 on the same sphere within distance r
            ring = {i: 0}
            queue = deque([i])
            while queue:
                u = queue.popleft()
                if ring[u] == r:
                    continue
                for k in range(offsets[u], offsets[u + 1]):
                    v = targets[k]
                    if v not in ring:
                        ring[v] = ring[u] + 1
                        queue.append(v)
            pairs = [j for j, d in ring.items()
                     if j > i and lengths[j] == n]
            if not pairs:
                continue
            # multi-source BFS inside B(n-1) from the interior neighbors of g1
            seeds = [targets[k] for k in range(offsets[i], offsets[i + 1])
                     if lengths[targets[k]] < n]
            dist = {}
            queue = deque()
            for s in seeds:
                if s not in dist:
                    dist[s] = 0
                    queue.append(s)
            while queue:
                u = queue.popleft()
                for k in range(offsets[u], offsets[u + 1]):
                    v = targets[k]
                    if lengths[v] < n and v not in dist:
                        dist[v] = dist[u] + 1
                        queue.append(v)
            direct = {targets[k] for k in range(offsets[i], offsets[i + 1])}
            for j in pairs:
                best = None
                if j in direct:
                    best = 1
                for k in range(offsets[j], offsets[j + 1]):
                    v = targets[k]
                    if lengths[v] < n and v in dist:
                        cand = dist[v] + 2
                        if best is None or cand < best:
                            best = cand
                if best is None:
                    found_all = False
                else:
                    worst = max(worst, best)
        out[n] = worst if found_all else None
    return out


def verify_ladder_cutset(n, table):
    """Boundary of the lamps-and-walker-in-[-n,n] set F_n splits into the
    z = -(n+1) and z = +(n+1) sides; a pass means every path between
    the sides has length >= 2n."""
    model = table.model
    if not isinstance(model, LadderLamplighter) or model.gen_set != "sws":
        raise WrongModel("ladder cutset probe needs the ladder sws-summed model")
    if table.N < n + 2:
        raise InsufficientRadius(f"need table N >= {n + 2}")

    def in_fn(g):
        z, _e = model.base_position(g)
        if not -n <= z <= n:
            return False
        return all(-n <= x <= n for x in model.lamp_columns(g))

    offsets, targets, _b, _k = table.graph()
    left, right = set(), set()
    for i, g in enumerate(table.elements):
        z, _e = model.base_position(g)
        if abs(z) != n + 1:
            continue
        touches = any(in_fn(table.elements[targets[k]])
                      for k in range(offsets[i], offsets[i + 1]))
        if touches:
            (left if z < 0 else right).add(i)
    if not left or not right:
        raise InsufficientRadius(f"boundary sides empty at n={n}")
    dist = {i: 0 for i in left}
    queue = deque(left)
    separation = None
    while queue:
        u = queue.popleft()
        if u in right:
            separation = dist[u]
            break
        for k in range(offsets[u], offsets[u + 1]):
            v = targets[k]
            if v not in dist:
                dist[v] = dist[u] + 1
                queue.append(v)
    return {"separation": separation,
            "passed": separation is None or separation >= 2 * n,
            "left": len(left), "right": len(right)}
