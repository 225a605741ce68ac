"""Dead-end detection and the depth statistics around it: width, retreat
depth, shadow depth, straight connectivity, and sphere-ratio counts."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from .annuli import certified_mask
from .errors import InsufficientRadius, NoOracle
from .groups import IN_INFINITE


@dataclass
class DeadEndReport:
    encoding: str
    length: int
    is_deadend: bool
    width: int
    retreat_depth: int
    shadow_depth: int
    straight: bool


def straight_margin(table):
    """Levels above N - margin are too close to the table boundary for the
    straight-connectivity fixed point to be trusted.

    A non-straight element of S(n) can still start a strictly increasing
    in-table run of length up to ~n (on the line: walk the lamplighter from
    z < 0 up to 0 before the forced dip), so only levels <= N/2 are safe.
    """
    return table.N - table.N // 2


def straight_mask(table):
    """Backward fixed point for 'straightly connected to infinity'.

    Top-level vertices are provisionally straight when they have a
    neighbor outside the table; below that, a vertex is straight iff some
    neighbor one level up is.  Only levels <= N - margin are reportable.
    """
    if table._straight is not None:
        return table._straight
    offsets, targets, boundary, _k = table.graph()
    lengths = table.lengths
    mask = bytearray(len(table.elements))
    for lvl in range(table.N, -1, -1):
        for i in range(table.level_offsets[lvl], table.level_offsets[lvl + 1]):
            if boundary[i]:
                mask[i] = 1
                continue
            up = lvl + 1
            for k in range(offsets[i], offsets[i + 1]):
                j = targets[k]
                if lengths[j] == up and mask[j]:
                    mask[i] = 1
                    break
    table._straight = mask
    return mask


def straight_infinity(g, table):
    """True iff g starts a strictly length-increasing infinite path.

    Models with an exact characterization (the line) answer directly;
    everything else uses the fixed point inside its trusted margin.
    """
    model = table.model
    if getattr(model, "has_straight_oracle", False):
        return model.straight_oracle(g)
    i = table.index.get(g)
    if i is None:
        raise InsufficientRadius(f"element outside table radius {table.N}")
    if table.lengths[i] > table.N - straight_margin(table):
        raise InsufficientRadius(
            f"straight-connectivity is only reported for levels <= "
            f"{table.N - straight_margin(table)}")
    return bool(straight_mask(table)[i])


def is_deadend(g, table):
    """No neighbor is further from the identity."""
    i = table.index[g]
    n = table.lengths[i]
    if n >= table.N:
        raise InsufficientRadius("dead-end test needs one level of headroom")
    offsets, targets, boundary, _k = table.graph()
    if boundary[i]:
        return False
    return all(table.lengths[targets[k]] <= n
               for k in range(offsets[i], offsets[i + 1]))


def width(g, table):
    """BFS distance from g to the certified infinite part of B(|g|)^c."""
    i = table.index[g]
    n = table.lengths[i]
    if table.N < 2 * n + 2:
        raise InsufficientRadius(f"width at |g|={n} needs table N >= {2 * n + 2}")
    cert = certified_mask(table, n + 1)
    offsets, targets, boundary, _k = table.graph()
    dist = {i: 0}
    queue = deque([i])
    while queue:
        u = queue.popleft()
        du = dist[u]
        if boundary[u]:
            # the missing neighbor has length N+1 >= 2(n+1)-1, so it is
            # certified infinite for inner radius n+1
            return du + 1
        for k in range(offsets[u], offsets[u + 1]):
            v = targets[k]
            if cert[v]:
                return du + 1
            if v not in dist:
                dist[v] = du + 1
                queue.append(v)
    raise InsufficientRadius("width search exhausted the table")


def retreat_depth_by_search(model, g, cap=2_000_000):
    """Table-free retreat depth for models with exact lengths: certified
    escape searches at decreasing inner radii."""
    from .annuli import certify_infinite_by_search

    n = model.exact_length(g)
    for d in range(n // 2 + 1):
        if certify_infinite_by_search(model, g, n - d, cap) == IN_INFINITE:
            return d
    raise InsufficientRadius(
        f"retreat depth of {model.encode(g)} exceeds |g|/2")


def retreat_depth(g, table):
    """Least d >= 0 with g in an infinite component of B(|g|-d-1)^c."""
    i = table.index[g]
    n = table.lengths[i]
    if table.N < 2 * n:
        raise InsufficientRadius(f"retreat depth at |g|={n} needs table N >= {2 * n}")
    for d in range(n // 2 + 1):
        if certified_mask(table, n - d)[i]:
            return d
    raise InsufficientRadius(
        f"retreat depth of {table.model.encode(g)} exceeds |g|/2")


def shadow_depth(g, table):
    """Least k such that some geodesic ancestor at level |g|-k is straightly
    connected to infinity."""
    model = table.model
    i = table.index[g]
    n = table.lengths[i]
    if getattr(model, "has_straight_oracle", False):
        def is_straight(j):
            return model.straight_oracle(table.elements[j])
    else:
        if n > table.N - straight_margin(table):
            raise InsufficientRadius("shadow depth needs straight-connectivity margin")
        mask = straight_mask(table)

        def is_straight(j):
            return bool(mask[j])
    offsets, targets, _b, _k = table.graph()
    lengths = table.lengths
    layer = {i}
    for k in range(n + 1):
        if any(is_straight(j) for j in layer):
            return k
        parents = set()
        for u in layer:
            for t in range(offsets[u], offsets[u + 1]):
                v = targets[t]
                if lengths[v] == n - k - 1:
                    parents.add(v)
        layer = parents
        if not layer:
            break
    raise InsufficientRadius(
        f"no straight geodesic ancestor found for {table.model.encode(g)}")


def find_deadends(n, table):
    """DeadEndReport for every dead-end element of S(n)."""
    if table.N < 2 * n + 2:
        raise InsufficientRadius(f"dead-end scan at n={n} needs table N >= {2 * n + 2}")
    reports = []
    for g in table.sphere(n):
        if not is_deadend(g, table):
            continue
        reports.append(DeadEndReport(
            encoding=table.model.encode(g),
            length=n,
            is_deadend=True,
            width=width(g, table),
            retreat_depth=retreat_depth(g, table),
            shadow_depth=shadow_depth(g, table),
            straight=straight_infinity(g, table)))
    return reports


@dataclass
class SphereRatios:
    n: int
    sphere: int
    straight: int
    infinite: int

    @property
    def straight_ratio(self):
        return self.straight / self.sphere

    @property
    def infinite_ratio(self):
        return self.infinite / self.sphere


def s_infinity_ratio(n, table):
    """|S(n)^{s-infty}|, |S(n)^infty| and |S(n)| counts.

    Both counts prefer the model's exact oracles; without them they fall
    back to the fixed point / BFS certification with their radius needs.
    """
    model = table.model
    if getattr(model, "has_straight_oracle", False):
        s_count = sum(model.straight_oracle(g) for g in table.sphere(n))
    else:
        if n > table.N - straight_margin(table):
            raise InsufficientRadius("straight counts need margin headroom")
        mask = straight_mask(table)
        s_count = sum(mask[i] for i in table.sphere_ids(n))
    if model.has_infinite_oracle:
        inf_count = sum(
            model.infinite_component_oracle(g, n) == IN_INFINITE
            for g in table.sphere(n))
    else:
        try:
            cert = certified_mask(table, n)
        except InsufficientRadius:
            raise
        inf_count = sum(cert[i] for i in table.sphere_ids(n))
    return SphereRatios(n=n, sphere=table.sphere_size(n),
                        straight=s_count, infinite=inf_count)
