"""Exhaustive breadth-first enumeration of balls in a Cayley graph.

A BallTable is the substrate for everything downstream: it stores every
element of B(N) with its word length, exposes spheres in a deterministic
(encoding-sorted) order, and lazily builds an index-based adjacency
structure (CSR rows plus per-level edge buckets) shared by the annulus
and dead-end machinery.
"""

from __future__ import annotations

import hashlib
import struct
from array import array

from .errors import BudgetExceeded, NoFormula, RadiusOutOfRange

DEFAULT_BUDGET = 50_000_000


class BallTable:
    """Exact table of B(N) for one model."""

    def __init__(self, model, N, elements, lengths, level_offsets):
        self.model = model
        self.N = N
        self.elements = elements
        self.lengths = lengths
        self.level_offsets = level_offsets
        self.index = {g: i for i, g in enumerate(elements)}
        self._graph = None
        self._cert = {}
        self._straight = None

    def __len__(self):
        return len(self.elements)

    def element_count(self):
        return len(self.elements)

    def word_length(self, g):
        """Stored length, or None when g lies outside B(N)."""
        i = self.index.get(g)
        return None if i is None else self.lengths[i]

    def sphere_size(self, n):
        self._check_radius(n)
        return self.level_offsets[n + 1] - self.level_offsets[n]

    def ball_size(self, n):
        self._check_radius(n)
        return self.level_offsets[n + 1]

    def sphere(self, n):
        """Level-n elements, sorted by encoding."""
        self._check_radius(n)
        return self.elements[self.level_offsets[n]:self.level_offsets[n + 1]]

    def sphere_ids(self, n):
        self._check_radius(n)
        return range(self.level_offsets[n], self.level_offsets[n + 1])

    def _check_radius(self, n):
        if not 0 <= n <= self.N:
            raise RadiusOutOfRange(f"sphere {n} outside table radius {self.N}")

    # -- adjacency ----------------------------------------------------------

    def graph(self):
        """(offsets, targets, boundary, buckets): CSR adjacency over element
        indices, a flag for vertices with a neighbor outside B(N), and
        undirected edges bucketed by max endpoint level."""
        if self._graph is None:
            model, index, lengths = self.model, self.index, self.lengths
            nops = model.generator_count()
            offsets = array("l", [0])
            targets = array("i")
            boundary = bytearray(len(self.elements))
            bucket_u = [array("i") for _ in range(self.N + 1)]
            bucket_v = [array("i") for _ in range(self.N + 1)]
            apply_ = model.apply
            for i, g in enumerate(self.elements):
                row = set()
                out = False
                for gid in range(nops):
                    h = apply_(g, gid)
                    j = index.get(h)
                    if j is None:
                        out = True
                    elif j != i:
                        row.add(j)
                boundary[i] = out
                for j in sorted(row):
                    targets.append(j)
                    if j > i:
                        lvl = lengths[j] if lengths[j] > lengths[i] else lengths[i]
                        bucket_u[lvl].append(i)
                        bucket_v[lvl].append(j)
                offsets.append(len(targets))
            self._graph = (offsets, targets, boundary, (bucket_u, bucket_v))
        return self._graph

    def neighbors_of(self, i):
        offsets, targets, _b, _k = self.graph()
        return targets[offsets[i]:offsets[i + 1]]


def enumerate_ball(model, N, budget=DEFAULT_BUDGET):
    """BFS out to radius N; raises BudgetExceeded (tagged with the largest
    completed radius) if the table would outgrow `budget` elements."""
    if N < 0:
        raise RadiusOutOfRange(f"negative radius {N}")
    if budget <= 0:
        raise BudgetExceeded("budget must be positive", -1)
    e = model.identity()
    seen = {e: 0}
    levels = [[e]]
    frontier = [e]
    nops = model.generator_count()
    apply_ = model.apply
    for k in range(1, N + 1):
        nxt = []
        for g in frontier:
            for gid in range(nops):
                h = apply_(g, gid)
                if h not in seen:
                    seen[h] = k
                    nxt.append(h)
        if len(seen) > budget:
            raise BudgetExceeded(
                f"{model.spec}: ball exceeded {budget} elements at radius {k}",
                k - 1)
        levels.append(nxt)
        frontier = nxt
    key = model.sort_key
    elements = []
    lengths = array("b", bytes(0)) if N <= 127 else array("h")
    level_offsets = [0]
    for k, level in enumerate(levels):
        level.sort(key=key)
        elements.extend(level)
        for _ in level:
            lengths.append(k)
        level_offsets.append(len(elements))
    return BallTable(model, N, elements, lengths, level_offsets)


def cross_check_lengths(table):
    """Compare stored BFS lengths against the model's closed form."""
    model = table.model
    if not model.has_exact_length:
        return {"checked": 0, "mismatches": [], "skipped": "NoFormula"}
    mismatches = []
    for i, g in enumerate(table.elements):
        try:
            want = model.exact_length(g)
        except NoFormula:
            return {"checked": 0, "mismatches": [], "skipped": "NoFormula"}
        if want != table.lengths[i]:
            mismatches.append((model.encode(g), table.lengths[i], want))
    return {"checked": len(table.elements), "mismatches": mismatches,
            "skipped": None}


# -- on-disk cache -----------------------------------------------------------

_MAGIC = b"CAYBALL1\n"


def save_table(table, path):
    """Binary dump: header (spec, N, count) + sorted (encoding, length)
    records + sha256 trailer."""
    h = hashlib.sha256()
    with open(path, "wb") as fh:
        def put(chunk):
            h.update(chunk)
            fh.write(chunk)

        put(_MAGIC)
        spec = table.model.spec.encode()
        put(struct.pack("<H", len(spec)))
        put(spec)
        put(struct.pack("<IQ", table.N, len(table.elements)))
        enc = table.model.encode
        for i, g in enumerate(table.elements):
            raw = enc(g).encode()
            put(struct.pack("<HB", len(raw), table.lengths[i]))
            put(raw)
        fh.write(h.digest())


def load_table(model, path):
    """Reload a cached table; raises ValueError on mismatch or corruption."""
    with open(path, "rb") as fh:
        blob = fh.read()
    payload, digest = blob[:-32], blob[-32:]
    if hashlib.sha256(payload).digest() != digest:
        raise ValueError(f"{path}: checksum mismatch")
    if not payload.startswith(_MAGIC):
        raise ValueError(f"{path}: not a ball cache")
    off = len(_MAGIC)
    (spec_len,) = struct.unpack_from("<H", payload, off)
    off += 2
    spec = payload[off:off + spec_len].decode()
    off += spec_len
    if spec != model.spec:
        raise ValueError(f"{path}: cached model {spec!r} != {model.spec!r}")
    N, count = struct.unpack_from("<IQ", payload, off)
    off += 12
    elements = []
    lengths = array("b") if N <= 127 else array("h")
    level_offsets = [0]
    prev = 0
    for _ in range(count):
        enc_len, length = struct.unpack_from("<HB", payload, off)
        off += 3
        g = model.decode(payload[off:off + enc_len].decode())
        off += enc_len
        if length < prev:
            raise ValueError(f"{path}: records out of level order")
        while prev < length:
            level_offsets.append(len(elements))
            prev += 1
        elements.append(g)
        lengths.append(length)
    while prev < N + 1:
        level_offsets.append(len(elements))
        prev += 1
    return BallTable(model, N, elements, lengths, level_offsets)


def cache_path(directory, model, N):
    safe = "".join(ch if ch.isalnum() else "_" for ch in model.spec)
    return f"{directory}/{safe}__N{N}.ball"


def table_for(model, N, budget=DEFAULT_BUDGET, cache_dir=None):
    """Load-or-build convenience wrapper used by the CLI."""
    if cache_dir:
        import os

        path = cache_path(cache_dir, model, N)
        if os.path.exists(path):
            return load_table(model, path)
        table = enumerate_ball(model, N, budget)
        os.makedirs(cache_dir, exist_ok=True)
        save_table(table, path)
        return table
    return enumerate_ball(model, N, budget)
