"""Group models: concrete group/generating-set pairs and their exact oracles.

Every model exposes the same small surface: canonical hashable elements,
right multiplication by an indexed generator list, textual encoding, and
(where a closed form exists) exact word length plus infinite-component /
same-component oracles.

Element representations:
  * wreath products over the line and the ladder pack into a single int
    (z field, optional rung bit, sparse lamp bitfield) -- these are the
    models whose balls get large, and int keys keep the BFS tables cheap;
  * tree-based and Z-lamp models use plain tuples;
  * direct products pair the factor elements.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .errors import (
    InvalidParameter,
    LengthMismatch,
    MalformedElement,
    NoFormula,
    NoOracle,
    UnsupportedFamily,
)

IN_INFINITE = "InInfinite"
IN_FINITE = "InFinite"
SAME = "Same"
DIFFERENT = "Different"
UNKNOWN = "Unknown"

# Packed layouts cap base coordinates to this window; desk radii stay far
# below it.
_COORD_CAP = 60
_Z_OFF = 64
_LAMP_SHIFT = 8
_LADDER_LAMP_SHIFT = 16


@dataclass(frozen=True)
class GeneratorLabel:
    id: int
    inverse_id: int


class GroupModel:
    """Shared behaviour for all concrete models."""

    name = "abstract"
    spec = "abstract"
    has_exact_length = False
    has_infinite_oracle = False
    has_component_oracle = False
    one_ended = True

    _ops: tuple = ()

    # -- subclass surface -------------------------------------------------

    def identity(self):
        raise NotImplementedError

    def apply(self, g, gid: int):
        """Right-multiply g by generator gid."""
        raise NotImplementedError

    def inverse(self, g):
        raise NotImplementedError

    def encode(self, g) -> str:
        raise NotImplementedError

    def decode(self, text: str):
        raise NotImplementedError

    # -- generic machinery -------------------------------------------------

    def generator_count(self) -> int:
        return len(self._ops)

    def generators(self) -> tuple[GeneratorLabel, ...]:
        """Generator labels with inverse pairing (set is inverse-closed)."""
        try:
            return self._labels
        except AttributeError:
            pass
        e = self.identity()
        images = [self.apply(e, i) for i in range(len(self._ops))]
        index = {g: i for i, g in enumerate(images)}
        labels = []
        for i, g in enumerate(images):
            inv = self.inverse(g)
            if inv not in index:
                raise MalformedElement(
                    f"{self.spec}: generator {i} has no inverse in the set")
            labels.append(GeneratorLabel(i, index[inv]))
        self._labels = tuple(labels)
        return self._labels

    def neighbors(self, g) -> list:
        """All right-multiplications by generators, deduplicated."""
        out = {}
        for i in range(len(self._ops)):
            out[self.apply(g, i)] = None
        return list(out)

    def sort_key(self, g) -> str:
        return self.encode(g)

    # -- optional exact structure -------------------------------------------

    def exact_length(self, g) -> int:
        raise NoFormula(f"{self.spec} has no closed-form word length")

    def infinite_component_oracle(self, g, n: int) -> str:
        raise NoOracle(f"{self.spec} has no infinite-component oracle")

    def same_component_oracle(self, g, g2, n: int, r: int) -> str:
        raise NoOracle(f"{self.spec} has no component oracle")

    def __repr__(self):
        return f"<GroupModel {self.spec}>"


# ---------------------------------------------------------------------------
# helpers shared by the lamp models


def _span(sites, z):
    """(a, b) = min/max of sites union {0, z}."""
    a = min(0, z)
    b = max(0, z)
    for x in sites:
        if x < a:
            a = x
        if x > b:
            b = x
    return a, b


def _check_coord(x):
    if not -_COORD_CAP <= x <= _COORD_CAP:
        raise MalformedElement(f"base coordinate {x} outside packed window")


# ---------------------------------------------------------------------------


class LineLamplighter(GroupModel):
    """Z wr Z_m with the switch-walk-switch generating set L{+-1}L u S_L.

    Elements pack as ints: bits [0,8) hold z+64, the lamp at site x holds
    its value (1..m-1) in the W-bit slot starting at bit 8 + (x+64)*W.
    """

    has_exact_length = True
    has_infinite_oracle = True
    has_component_oracle = True
    has_straight_oracle = True
    one_ended = True

    def __init__(self, m: int):
        if m < 2:
            raise InvalidParameter(f"lamp order m={m}; need m >= 2")
        self.m = m
        self.width = max(1, (m - 1).bit_length())
        self.mask = (1 << self.width) - 1
        self.name = "line-lamplighter"
        self.spec = f"line-lamplighter m={m}"
        ops = [("s", v) for v in range(1, m)]
        for el in range(m):
            for d in (1, -1):
                for er in range(m):
                    ops.append(("w", el, d, er))
        self._ops = tuple(ops)

    # packing ----------------------------------------------------------------

    def _bit(self, x):
        return _LAMP_SHIFT + (x + _Z_OFF) * self.width

    def lamp_value(self, g, x):
        return (g >> self._bit(x)) & self.mask

    def _lamp_add(self, g, x, v):
        if not v:
            return g
        _check_coord(x)
        pos = self._bit(x)
        cur = (g >> pos) & self.mask
        new = (cur + v) % self.m
        return g + ((new - cur) << pos)

    def _lamp_set(self, g, x, v):
        pos = self._bit(x)
        cur = (g >> pos) & self.mask
        return g + ((v - cur) << pos)

    def base_position(self, g):
        return (g & 0xFF) - _Z_OFF

    def _with_z(self, g, z):
        _check_coord(z)
        return (g & ~0xFF) | (z + _Z_OFF)

    def identity(self):
        return _Z_OFF

    def lamp_dict(self, g):
        """Sparse {site: value} view of the lamp configuration."""
        lamps = {}
        field = g >> _LAMP_SHIFT
        base = 0
        while field:
            low = (field & -field).bit_length() - 1
            slot = low // self.width
            site = base + slot - _Z_OFF
            lamps[site] = (g >> self._bit(site)) & self.mask
            drop = (slot + 1) * self.width
            field >>= drop
            base += slot + 1
        return lamps

    def from_parts(self, z, lamps):
        g = self._with_z(self.identity(), z)
        for x, v in lamps.items():
            if v % self.m:
                g = self._lamp_set(g, x, v % self.m)
        return g

    # group ops ----------------------------------------------------------------

    def apply(self, g, gid):
        op = self._ops[gid]
        if op[0] == "s":
            return self._lamp_add(g, self.base_position(g), op[1])
        _, el, d, er = op
        z = self.base_position(g)
        g = self._lamp_add(g, z, el)
        g = self._with_z(g, z + d)
        return self._lamp_add(g, z + d, er)

    def inverse(self, g):
        z = self.base_position(g)
        return self.from_parts(-z, {x - z: (-v) % self.m
                                    for x, v in self.lamp_dict(g).items()})

    def mirror(self, g):
        """Image under the x -> -x automorphism of the base."""
        z = self.base_position(g)
        return self.from_parts(-z, {-x: v for x, v in self.lamp_dict(g).items()})

    def span(self, g):
        """(a, b, z) with a/b the leftmost/rightmost lamp-or-position."""
        z = self.base_position(g)
        a, b = _span(self.lamp_dict(g), z)
        return a, b, z

    # encoding ----------------------------------------------------------------

    def encode(self, g):
        lamps = sorted(self.lamp_dict(g).items())
        body = ",".join(f"{x}:{v}" for x, v in lamps)
        return f"w:{self.base_position(g)};{body}"

    def decode(self, text):
        try:
            head, body = text.split(";", 1)
            assert head.startswith("w:")
            z = int(head[2:])
            lamps = {}
            if body:
                for part in body.split(","):
                    x, v = part.rsplit(":", 1)
                    lamps[int(x)] = int(v)
            return self.from_parts(z, lamps)
        except (ValueError, AssertionError) as exc:
            raise MalformedElement(f"bad line element {text!r}") from exc

    # exact structure ------------------------------------------------------------

    def exact_length(self, g):
        a, b, z = self.span(g)
        if a == 0 and b == 0:
            return 0 if g == self.identity() else 1
        return 2 * b + 2 * (-a) - abs(z)

    def infinite_component_oracle(self, g, n):
        if self.exact_length(g) != n:
            raise LengthMismatch(f"|g| != {n}")
        a, b, z = self.span(g)
        if z < 0:
            a, b, z = -b, -a, -z
        if a == 0:
            return IN_INFINITE
        if z == b:
            return IN_INFINITE
        return IN_INFINITE if z >= -a else IN_FINITE

    def straight_oracle(self, g):
        """True iff g extends to a strictly length-increasing ray.

        The lone-switch elements (0, delta_s) are dead-ends (all their
        walk neighbors have length 1), so they are excluded from the
        a=0 case even though their span is degenerate.
        """
        a, b, z = self.span(g)
        if a == 0 and b == 0:
            return g == self.identity()
        if z < 0:
            a, b, z = -b, -a, -z
        return a == 0 or z == b

    def same_component_oracle(self, g, g2, n, r):
        if self.exact_length(g) != n or self.exact_length(g2) != n:
            raise LengthMismatch(f"both elements must have length {n}")
        a, b, z = self.span(g)
        if z < 0:
            g, g2 = self.mirror(g), self.mirror(g2)
            a, b, z = self.span(g)
        a2, b2, z2 = self.span(g2)
        f, f2 = self.lamp_dict(g), self.lamp_dict(g2)
        if z - r > 0:
            if (a2, b2, z2) != (a, b, z):
                return DIFFERENT
            lo, hi = z - r, z
        elif z < min(b, -a):
            if (a2, b2) != (a, b) or abs(z2) != z:
                return DIFFERENT
            lo, hi = -z, z
        else:
            return UNKNOWN
        sites = set(f) | set(f2)
        for t in sites:
            if lo <= t <= hi:
                continue
            if f.get(t, 0) != f2.get(t, 0):
                return DIFFERENT
        return SAME


# ---------------------------------------------------------------------------


class LadderLamplighter(GroupModel):
    """(Z x Z_2) wr Z_m with either the pair-switch set S1 or sws-summed set.

    Packing: bits [0,8) hold z+64, bit 8 the rung, and column x occupies
    2W bits from 16 + (x+64)*2W (rung-0 site first).
    """

    one_ended = True

    def __init__(self, m: int, gen_set: str):
        if m < 2:
            raise InvalidParameter(f"lamp order m={m}; need m >= 2")
        if gen_set not in ("s1", "sws"):
            raise InvalidParameter(f"ladder generating set {gen_set!r}")
        self.m = m
        self.gen_set = gen_set
        self.width = max(1, (m - 1).bit_length())
        self.mask = (1 << self.width) - 1
        self.name = "ladder-lamplighter"
        self.spec = f"ladder-lamplighter m={m} set={gen_set}"
        self.has_exact_length = gen_set == "s1"
        ops = []
        if gen_set == "s1":
            pairs = list(itertools.product(range(m), repeat=2))
            for p1 in pairs:
                for dz in (1, -1):
                    for de in (0, 1):
                        for p2 in pairs:
                            ops.append(("p", p1, dz, de, p2))
        else:
            for v in range(1, m):
                ops.append(("s", v))
            for el in range(m):
                for move in ((1, 0), (-1, 0), (0, 1)):
                    for er in range(m):
                        ops.append(("w", el, move, er))
        self._ops = tuple(ops)

    # packing ----------------------------------------------------------------

    def _bit(self, x, e):
        return _LADDER_LAMP_SHIFT + (x + _Z_OFF) * 2 * self.width + e * self.width

    def lamp_value(self, g, x, e):
        return (g >> self._bit(x, e)) & self.mask

    def _lamp_add(self, g, x, e, v):
        if not v:
            return g
        _check_coord(x)
        pos = self._bit(x, e)
        cur = (g >> pos) & self.mask
        return g + (((cur + v) % self.m - cur) << pos)

    def base_position(self, g):
        return (g & 0xFF) - _Z_OFF, (g >> 8) & 1

    def _with_base(self, g, z, e):
        _check_coord(z)
        return (g & ~0x1FF) | (z + _Z_OFF) | (e << 8)

    def identity(self):
        return _Z_OFF

    def lamp_dict(self, g):
        lamps = {}
        field = g >> _LADDER_LAMP_SHIFT
        slot = 0
        while field:
            low = (field & -field).bit_length() - 1
            slot += low // self.width
            x, e = slot // 2 - _Z_OFF, slot % 2
            lamps[(x, e)] = self.lamp_value(g, x, e)
            field >>= (low // self.width + 1) * self.width
            slot += 1
        return lamps

    def from_parts(self, z, e, lamps):
        g = self._with_base(self.identity(), z, e)
        for (x, le), v in lamps.items():
            g = self._lamp_add(g, x, le, v % self.m)
        return g

    # group ops ----------------------------------------------------------------

    def apply(self, g, gid):
        op = self._ops[gid]
        z, e = self.base_position(g)
        if op[0] == "p":
            _, p1, dz, de, p2 = op
            g = self._lamp_add(g, z, e, p1[0])
            g = self._lamp_add(g, z, e ^ 1, p1[1])
            z2, e2 = z + dz, e ^ de
            g = self._with_base(g, z2, e2)
            g = self._lamp_add(g, z2, e2, p2[0])
            return self._lamp_add(g, z2, e2 ^ 1, p2[1])
        if op[0] == "s":
            return self._lamp_add(g, z, e, op[1])
        _, el, move, er = op
        g = self._lamp_add(g, z, e, el)
        z2, e2 = z + move[0], e ^ move[1]
        g = self._with_base(g, z2, e2)
        return self._lamp_add(g, z2, e2, er)

    def inverse(self, g):
        z, e = self.base_position(g)
        lamps = {}
        for (x, le), v in self.lamp_dict(g).items():
            lamps[(x - z, le ^ e)] = (-v) % self.m
        return self.from_parts(-z, e, lamps)

    def lamp_columns(self, g):
        return {x for (x, _e) in self.lamp_dict(g)}

    # encoding ----------------------------------------------------------------

    def encode(self, g):
        z, e = self.base_position(g)
        lamps = sorted(self.lamp_dict(g).items())
        body = ",".join(f"{x}.{le}:{v}" for (x, le), v in lamps)
        return f"w:{z}.{e};{body}"

    def decode(self, text):
        try:
            head, body = text.split(";", 1)
            assert head.startswith("w:")
            z, e = head[2:].split(".")
            lamps = {}
            if body:
                for part in body.split(","):
                    site, v = part.rsplit(":", 1)
                    x, le = site.split(".")
                    lamps[(int(x), int(le))] = int(v)
            return self.from_parts(int(z), int(e), lamps)
        except (ValueError, AssertionError) as exc:
            raise MalformedElement(f"bad ladder element {text!r}") from exc

    # exact structure ------------------------------------------------------------

    def exact_length(self, g):
        # S1 walks are forced +-1 moves, so the length is the line-formula
        # length of the column projection, except that column-0-only
        # configurations (including the lone rung flip) cost 2.
        if self.gen_set != "s1":
            raise NoFormula("ladder sws-summed set has no closed form")
        z, _e = self.base_position(g)
        cols = self.lamp_columns(g)
        a, b = _span(cols, z)
        if a == 0 and b == 0:
            return 0 if g == self.identity() else 2
        return 2 * b + 2 * (-a) - abs(z)


# ---------------------------------------------------------------------------


class TreeLamplighter(GroupModel):
    """T_d wr Z_m with switch-walk-switch; base vertices are reduced words
    over d involution letters."""

    has_exact_length = True
    has_infinite_oracle = True
    one_ended = True

    def __init__(self, d: int, m: int):
        if d < 3:
            raise InvalidParameter(
                f"tree degree d={d}; need d >= 3 (use the line family for d=2)")
        if d > 26:
            raise InvalidParameter(f"tree degree d={d} exceeds letter alphabet")
        if m < 2:
            raise InvalidParameter(f"lamp order m={m}; need m >= 2")
        self.d = d
        self.m = m
        self.letters = "abcdefghijklmnopqrstuvwxyz"[:d]
        self.name = "tree-lamplighter"
        self.spec = f"tree-lamplighter d={d} m={m}"
        ops = [("s", v) for v in range(1, m)]
        for el in range(m):
            for ch in self.letters:
                for er in range(m):
                    ops.append(("w", el, ch, er))
        self._ops = tuple(ops)

    # base-word helpers ----------------------------------------------------------

    def walk(self, word, ch):
        if word and word[-1] == ch:
            return word[:-1]
        return word + ch

    def word_mul(self, u, v):
        for ch in v:
            u = self.walk(u, ch)
        return u

    def word_neighbors(self, word):
        return [self.walk(word, ch) for ch in self.letters]

    @staticmethod
    def site_key(word):
        return (len(word), word)

    def identity(self):
        return ("", ())

    def _make(self, gamma, lampdict):
        lamps = tuple(sorted(
            ((w, v % self.m) for w, v in lampdict.items() if v % self.m),
            key=lambda it: self.site_key(it[0])))
        return (gamma, lamps)

    def apply(self, g, gid):
        gamma, lamps = g
        op = self._ops[gid]
        d = dict(lamps)
        if op[0] == "s":
            d[gamma] = (d.get(gamma, 0) + op[1]) % self.m
            return self._make(gamma, d)
        _, el, ch, er = op
        d[gamma] = (d.get(gamma, 0) + el) % self.m
        gamma2 = self.walk(gamma, ch)
        d[gamma2] = (d.get(gamma2, 0) + er) % self.m
        return self._make(gamma2, d)

    def inverse(self, g):
        gamma, lamps = g
        ginv = gamma[::-1]
        d = {self.word_mul(ginv, w): (-v) % self.m for w, v in lamps}
        return self._make(ginv, d)

    # geometry ----------------------------------------------------------------

    def support_tree(self, g):
        """Vertex set of C(g): spanned by e, gamma and the lamp support."""
        gamma, lamps = g
        verts = {""}
        for w in itertools.chain([gamma], (s for s, _v in lamps)):
            for i in range(1, len(w) + 1):
                verts.add(w[:i])
        return verts

    def exact_length(self, g):
        gamma, lamps = g
        verts = self.support_tree(g)
        if len(verts) == 1:
            return 0 if not lamps else 1
        return 2 * (len(verts) - 1) - len(gamma)

    def ball_words(self, radius, root=""):
        """All reduced words within distance `radius` below/around root."""
        out = [root]
        frontier = [root]
        for _ in range(radius):
            nxt = []
            for w in frontier:
                for ch in self.letters:
                    w2 = self.walk(w, ch)
                    if len(w2) > len(w):
                        nxt.append(w2)
            out.extend(nxt)
            frontier = nxt
        return out

    def infinite_component_oracle(self, g, n):
        # g is trapped iff B_T(e, h(gamma)) lies in the interior of C(g).
        if self.exact_length(g) != n:
            raise LengthMismatch(f"|g| != {n}")
        gamma, _lamps = g
        cg = self.support_tree(g)
        h = len(gamma)
        for w in self._ball_around_root(h):
            if w not in cg:
                return IN_INFINITE
            for nb in self.word_neighbors(w):
                if nb not in cg:
                    return IN_INFINITE
        return IN_FINITE

    def _ball_around_root(self, radius):
        out = [""]
        frontier = [""]
        for _ in range(radius):
            nxt = []
            for w in frontier:
                for ch in self.letters:
                    w2 = self.walk(w, ch)
                    if len(w2) > len(w):
                        nxt.append(w2)
            out.extend(nxt)
            frontier = nxt
        return out

    # encoding ----------------------------------------------------------------

    def encode(self, g):
        gamma, lamps = g
        body = ",".join(f"{w}:{v}" for w, v in lamps)
        return f"w:{gamma};{body}"

    def decode(self, text):
        try:
            head, body = text.split(";", 1)
            assert head.startswith("w:")
            gamma = head[2:]
            d = {}
            if body:
                for part in body.split(","):
                    w, v = part.rsplit(":", 1)
                    d[w] = int(v)
            elem = self._make(gamma, d)
            if self.encode(elem) != text:
                raise MalformedElement(f"non-canonical tree element {text!r}")
            return elem
        except (ValueError, AssertionError) as exc:
            raise MalformedElement(f"bad tree element {text!r}") from exc


# ---------------------------------------------------------------------------


class FreeTree(GroupModel):
    """The d-regular tree itself (free product of d involutions)."""

    has_exact_length = True
    has_straight_oracle = True
    one_ended = False

    def __init__(self, d: int):
        if d < 3:
            raise InvalidParameter(f"tree degree d={d}; need d >= 3")
        if d > 26:
            raise InvalidParameter(f"tree degree d={d} exceeds letter alphabet")
        self.d = d
        self.letters = "abcdefghijklmnopqrstuvwxyz"[:d]
        self.name = "free-tree"
        self.spec = f"free-tree d={d}"
        self._ops = tuple(("w", ch) for ch in self.letters)

    def identity(self):
        return ""

    def apply(self, g, gid):
        ch = self._ops[gid][1]
        if g and g[-1] == ch:
            return g[:-1]
        return g + ch

    def inverse(self, g):
        return g[::-1]

    def exact_length(self, g):
        return len(g)

    def straight_oracle(self, g):
        return True

    def encode(self, g):
        return g if g else "."

    def decode(self, text):
        word = "" if text == "." else text
        for i, ch in enumerate(word):
            if ch not in self.letters or (i and word[i - 1] == ch):
                raise MalformedElement(f"bad tree word {text!r}")
        return word


# ---------------------------------------------------------------------------


class ZLine(GroupModel):
    """Z with generators +-1."""

    has_exact_length = True
    has_straight_oracle = True
    one_ended = False

    def __init__(self):
        self.name = "z"
        self.spec = "z"
        self._ops = (("w", 1), ("w", -1))

    def identity(self):
        return 0

    def apply(self, g, gid):
        return g + self._ops[gid][1]

    def inverse(self, g):
        return -g

    def exact_length(self, g):
        return abs(g)

    def straight_oracle(self, g):
        return True

    def encode(self, g):
        return str(g)

    def decode(self, text):
        try:
            return int(text)
        except ValueError as exc:
            raise MalformedElement(f"bad integer {text!r}") from exc


# ---------------------------------------------------------------------------


class ZZLamplighter(GroupModel):
    """Z wr Z with the walk-or-switch set {base +-1, lamp +-1}."""

    has_exact_length = True
    has_straight_oracle = True
    one_ended = True

    def __init__(self):
        self.name = "zz-walk-or-switch"
        self.spec = "zz-walk-or-switch"
        self._ops = (("w", 1), ("w", -1), ("s", 1), ("s", -1))

    def identity(self):
        return (0, ())

    def _make(self, z, lampdict):
        return (z, tuple(sorted((x, v) for x, v in lampdict.items() if v)))

    def apply(self, g, gid):
        z, lamps = g
        op = self._ops[gid]
        if op[0] == "w":
            return (z + op[1], lamps)
        d = dict(lamps)
        d[z] = d.get(z, 0) + op[1]
        return self._make(z, d)

    def inverse(self, g):
        z, lamps = g
        return self._make(-z, {x - z: -v for x, v in lamps})

    def lamp_dict(self, g):
        return dict(g[1])

    def from_parts(self, z, lamps):
        return self._make(z, lamps)

    def span(self, g):
        z, lamps = g
        a, b = _span((x for x, _v in lamps), z)
        return a, b, z

    def exact_length(self, g):
        z, lamps = g
        a, b = _span((x for x, _v in lamps), z)
        return sum(abs(v) for _x, v in lamps) + 2 * b + 2 * (-a) - abs(z)

    def straight_oracle(self, g):
        # growing |f(z)| away from zero raises the length by one forever
        return True

    def encode(self, g):
        z, lamps = g
        body = ",".join(f"{x}:{v}" for x, v in lamps)
        return f"w:{z};{body}"

    def decode(self, text):
        try:
            head, body = text.split(";", 1)
            assert head.startswith("w:")
            d = {}
            if body:
                for part in body.split(","):
                    x, v = part.rsplit(":", 1)
                    d[int(x)] = int(v)
            return self._make(int(head[2:]), d)
        except (ValueError, AssertionError) as exc:
            raise MalformedElement(f"bad zz element {text!r}") from exc


# ---------------------------------------------------------------------------


class PlaneLamplighter(GroupModel):
    """Z^2 wr Z_m with switch-walk-switch; exploratory model, BFS only."""

    one_ended = True

    def __init__(self, m: int):
        if m < 2:
            raise InvalidParameter(f"lamp order m={m}; need m >= 2")
        self.m = m
        self.name = "plane-lamplighter"
        self.spec = f"plane-lamplighter m={m}"
        ops = [("s", v) for v in range(1, m)]
        for el in range(m):
            for move in ((1, 0), (-1, 0), (0, 1), (0, -1)):
                for er in range(m):
                    ops.append(("w", el, move, er))
        self._ops = tuple(ops)

    def identity(self):
        return ((0, 0), ())

    def _make(self, pos, lampdict):
        return (pos, tuple(sorted(
            (s, v % self.m) for s, v in lampdict.items() if v % self.m)))

    def apply(self, g, gid):
        pos, lamps = g
        op = self._ops[gid]
        d = dict(lamps)
        if op[0] == "s":
            d[pos] = (d.get(pos, 0) + op[1]) % self.m
            return self._make(pos, d)
        _, el, move, er = op
        d[pos] = (d.get(pos, 0) + el) % self.m
        pos2 = (pos[0] + move[0], pos[1] + move[1])
        d[pos2] = (d.get(pos2, 0) + er) % self.m
        return self._make(pos2, d)

    def inverse(self, g):
        (zx, zy), lamps = g
        d = {(x - zx, y - zy): (-v) % self.m for (x, y), v in lamps}
        return self._make((-zx, -zy), d)

    def encode(self, g):
        (zx, zy), lamps = g
        body = ",".join(f"{x}.{y}:{v}" for (x, y), v in lamps)
        return f"w:{zx}.{zy};{body}"

    def decode(self, text):
        try:
            head, body = text.split(";", 1)
            assert head.startswith("w:")
            zx, zy = head[2:].split(".")
            d = {}
            if body:
                for part in body.split(","):
                    site, v = part.rsplit(":", 1)
                    x, y = site.split(".")
                    d[(int(x), int(y))] = int(v)
            return self._make((int(zx), int(zy)), d)
        except (ValueError, AssertionError) as exc:
            raise MalformedElement(f"bad plane element {text!r}") from exc


# ---------------------------------------------------------------------------


class DirectProduct(GroupModel):
    """G1 x G2 with the summed set S1 x {e} u {e} x S2 or the product set
    (S1 u {e}) x (S2 u {e}) minus the identity."""

    def __init__(self, left: GroupModel, right: GroupModel, kind: str):
        if kind not in ("summed", "product"):
            raise InvalidParameter(f"product generating set {kind!r}")
        self.left = left
        self.right = right
        self.kind = kind
        self.name = f"product-{kind}"
        self.spec = f"product({left.spec}|{right.spec}) set={kind}"
        self.has_exact_length = left.has_exact_length and right.has_exact_length
        self.one_ended = True
        nl, nr = left.generator_count(), right.generator_count()
        if kind == "summed":
            ops = [("l", i) for i in range(nl)] + [("r", j) for j in range(nr)]
        else:
            ops = [("b", i, j)
                   for i in [None, *range(nl)]
                   for j in [None, *range(nr)]
                   if not (i is None and j is None)]
        self._ops = tuple(ops)

    def identity(self):
        return (self.left.identity(), self.right.identity())

    def apply(self, g, gid):
        op = self._ops[gid]
        if op[0] == "l":
            return (self.left.apply(g[0], op[1]), g[1])
        if op[0] == "r":
            return (g[0], self.right.apply(g[1], op[1]))
        _, i, j = op
        a = g[0] if i is None else self.left.apply(g[0], i)
        b = g[1] if j is None else self.right.apply(g[1], j)
        return (a, b)

    def inverse(self, g):
        return (self.left.inverse(g[0]), self.right.inverse(g[1]))

    def exact_length(self, g):
        if not self.has_exact_length:
            raise NoFormula(f"{self.spec}: a factor lacks a length formula")
        la = self.left.exact_length(g[0])
        lb = self.right.exact_length(g[1])
        return la + lb if self.kind == "summed" else max(la, lb)

    @property
    def has_straight_oracle(self):
        return (self.kind == "summed"
                and getattr(self.left, "has_straight_oracle", False)
                and getattr(self.right, "has_straight_oracle", False))

    def straight_oracle(self, g):
        # summed lengths add, so climbing either coordinate's ray is a ray
        if not self.has_straight_oracle:
            raise NoOracle(f"{self.spec} has no straightness oracle")
        return (self.left.straight_oracle(g[0])
                or self.right.straight_oracle(g[1]))

    def escape_ray_exists(self, g):
        """A coordinate with an increasing ray escapes to infinity while
        the other holds; sound for both generating sets (the held
        coordinate keeps the length at or above its start)."""
        ok = False
        if getattr(self.left, "has_straight_oracle", False):
            ok = self.left.straight_oracle(g[0])
        if not ok and getattr(self.right, "has_straight_oracle", False):
            ok = self.right.straight_oracle(g[1])
        return ok

    def encode(self, g):
        return f"p:({self.left.encode(g[0])}|{self.right.encode(g[1])})"

    def decode(self, text):
        if not (text.startswith("p:(") and text.endswith(")")):
            raise MalformedElement(f"bad product element {text!r}")
        body = text[3:-1]
        depth = 0
        for i, ch in enumerate(body):
            if ch == "(":
                depth += 1
            elif ch == ")":
                depth -= 1
            elif ch == "|" and depth == 0:
                return (self.left.decode(body[:i]), self.right.decode(body[i + 1:]))
        raise MalformedElement(f"bad product element {text!r}")


# ---------------------------------------------------------------------------
# registry


def _parse_params(parts, allowed):
    params = {}
    for part in parts:
        if "=" not in part:
            raise UnsupportedFamily(f"bad parameter {part!r}")
        key, val = part.split("=", 1)
        if key not in allowed:
            raise UnsupportedFamily(f"unknown parameter {key!r}")
        params[key] = val
    return params


def make_group(spec: str) -> GroupModel:
    """Instantiate a group model from its descriptor string."""
    spec = spec.strip()
    if spec.startswith("product("):
        close = spec.rfind(")")
        if close < 0:
            raise UnsupportedFamily(f"unbalanced product spec {spec!r}")
        inner, tail = spec[len("product("):close], spec[close + 1:].strip()
        depth = 0
        split = -1
        for i, ch in enumerate(inner):
            if ch == "(":
                depth += 1
            elif ch == ")":
                depth -= 1
            elif ch == "|" and depth == 0:
                split = i
                break
        if split < 0:
            raise UnsupportedFamily(f"product spec needs two factors: {spec!r}")
        params = _parse_params(tail.split(), {"set"})
        kind = params.get("set", "summed")
        return DirectProduct(make_group(inner[:split]), make_group(inner[split + 1:]),
                             kind)
    parts = spec.split()
    family, rest = parts[0], parts[1:]
    if family == "line-lamplighter":
        params = _parse_params(rest, {"m"})
        return LineLamplighter(int(params.get("m", 2)))
    if family == "tree-lamplighter":
        params = _parse_params(rest, {"d", "m"})
        return TreeLamplighter(int(params.get("d", 3)), int(params.get("m", 2)))
    if family == "ladder-lamplighter":
        params = _parse_params(rest, {"m", "set"})
        return LadderLamplighter(int(params.get("m", 2)), params.get("set", "sws"))
    if family == "plane-lamplighter":
        params = _parse_params(rest, {"m"})
        return PlaneLamplighter(int(params.get("m", 2)))
    if family == "free-tree":
        params = _parse_params(rest, {"d"})
        return FreeTree(int(params.get("d", 3)))
    if family == "zz-walk-or-switch":
        return ZZLamplighter()
    if family == "z":
        return ZLine()
    raise UnsupportedFamily(f"unknown group family {family!r}")


REGISTRY_SPECS = (
    "z",
    "free-tree d=3",
    "line-lamplighter m=2",
    "tree-lamplighter d=3 m=2",
    "ladder-lamplighter m=2 set=s1",
    "ladder-lamplighter m=2 set=sws",
    "zz-walk-or-switch",
    "plane-lamplighter m=2",
    "product(z|z) set=summed",
    "product(z|z) set=product",
    "product(line-lamplighter m=2|line-lamplighter m=2) set=summed",
    "product(line-lamplighter m=2|line-lamplighter m=2) set=product",
)
