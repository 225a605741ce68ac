"""Constructive path certificates: soundness, windows, serialization."""

import random

import pytest

from cayleyspheres import paths
from cayleyspheres.errors import (
    NotInInfiniteComponent,
    OutsideAnnulus,
    UnsupportedRadius,
    WrongRadiusForm,
)
from cayleyspheres.groups import IN_INFINITE, make_group
from cayleyspheres.metric import enumerate_ball


def test_line_already_canonical(line):
    g = line.from_parts(4, {k: 1 for k in range(5)})
    cert = paths.line_connect_canonical(line, g, 4)
    assert len(cert) == 1 and cert.end == g


def test_line_rejects_bad_inputs(line):
    with pytest.raises(UnsupportedRadius):
        paths.line_connect_canonical(line, line.from_parts(1, {0: 1}), 1)
    trapped = line.from_parts(0, {-1: 1, 1: 1})       # |g| = 4, finite part
    with pytest.raises(NotInInfiniteComponent):
        paths.line_connect_canonical(line, trapped, 4)


@pytest.mark.parametrize("n", [2, 3, 4, 5])
def test_line_constructor_exhaustive(line, line_table, n):
    for g in line_table.sphere(n):
        if line.infinite_component_oracle(g, n) != IN_INFINITE:
            continue
        cert = paths.line_connect_canonical(line, g, n)
        res = paths.verify_certificate(cert, line_table)
        assert res["ok"], (line.encode(g), res)
        a, b, z = line.span(cert.end)
        assert (a, b, z) in ((0, n, n), (-n, 0, -n))
        assert cert.max_length() <= 2 * n + 2


def test_line_window_tightness(line, line_table):
    """max length <= 2n+2, attained only through the (a=0, b=n-1, z=n-2)
    iterate."""
    n = 6
    attained = set()
    for g in line_table.sphere(n):
        if line.infinite_component_oracle(g, n) != IN_INFINITE:
            continue
        trace = []
        cert = paths.line_connect_canonical(line, g, n, _trace=trace)
        assert cert.max_length() <= 2 * n + 2
        for state, peak in trace:
            if peak == 2 * n + 2:
                attained.add(state)
    assert attained == {(0, n - 1, n - 2)}


def test_tree_single_step(tree):
    target = paths.tree_elementary_target(tree, 1)
    cert = paths.tree_connect_elementary(tree, target, 1)
    assert cert.end == target
    assert paths.verify_certificate(cert)["ok"]


def test_tree_rejects_wrong_radius(tree):
    g = tree._make("a", {"a": 1})
    with pytest.raises(WrongRadiusForm):
        paths.tree_connect_elementary(tree, g, 1)


def test_tree_r1_exhaustive(tree):
    table = enumerate_ball(tree, 6)
    target = paths.tree_elementary_target(tree, 1)
    count = 0
    for g in table.sphere(5):
        if tree.infinite_component_oracle(g, 5) != IN_INFINITE:
            continue
        cert = paths.tree_connect_elementary(tree, g, 1)
        res = paths.verify_certificate(cert)
        assert res["ok"], (tree.encode(g), res)
        assert cert.end == target
        assert cert.max_length() <= 5 + 1 + 4
        count += 1
    assert count > 4000


def _random_sphere16(tree, rng):
    while True:
        words = []
        for _ in range(rng.randrange(1, 7)):
            w = ""
            for _ in range(rng.randrange(0, 7)):
                w = tree.walk(w, rng.choice(tree.letters))
            words.append(w)
        gamma = ""
        for _ in range(rng.randrange(0, 9)):
            gamma = tree.walk(gamma, rng.choice(tree.letters))
        lamps = {w: 1 for w in words if rng.random() < 0.9}
        g = tree._make(gamma, lamps)
        if tree.exact_length(g) == 16:
            return g


def test_tree_r2_samples(tree):
    rng = random.Random(20240811)
    target = paths.tree_elementary_target(tree, 2)
    good = 0
    tried = 0
    while good < 200 and tried < 4000:
        g = _random_sphere16(tree, rng)
        tried += 1
        if tree.infinite_component_oracle(g, 16) != IN_INFINITE:
            continue
        cert = paths.tree_connect_elementary(tree, g, 2)
        res = paths.verify_certificate(cert)
        assert res["ok"], (tree.encode(g), res)
        assert cert.end == target
        assert cert.max_length() <= 16 + 2 + 4
        good += 1
    assert good == 200


def test_tree_r2_preclimb(tree):
    """A start with h(gamma) < R exercises the climb phase."""
    # gamma = e; lamps pinning 8 edges: |g| = 16, walker far below R
    lamps = {w: 1 for w in ["aba", "abc", "ac", "ba", "bc"]}
    g = tree._make("", lamps)
    assert tree.exact_length(g) == 16
    assert tree.infinite_component_oracle(g, 16) == IN_INFINITE
    cert = paths.tree_connect_elementary(tree, g, 2)
    assert paths.verify_certificate(cert)["ok"]
    assert cert.end == paths.tree_elementary_target(tree, 2)


def test_zwz_single_pile(zz):
    g = zz.from_parts(0, {0: 5})
    cert = paths.zwz_collapse(zz, g, 4)
    assert cert.end == g and len(cert) == 1


def test_zwz_rejects_outside(zz):
    with pytest.raises(OutsideAnnulus):
        paths.zwz_collapse(zz, zz.from_parts(0, {0: 9}), 4)


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_zwz_exhaustive(zz, zz_table, n):
    target = zz.from_parts(0, {0: n + 1})
    for k in range(n, n + 3):
        for g in zz_table.sphere(k):
            cert = paths.zwz_collapse(zz, g, n)
            res = paths.verify_certificate(cert, zz_table)
            assert res["ok"], (zz.encode(g), res)
            assert cert.end == target
            assert cert.max_length() <= n + paths.ZWZ_WINDOW_SLACK


def test_zwz_start_walker_length_bounds(zz):
    for n in (3, 4, 5):
        cert = paths.zwz_collapse(zz, zz.from_parts(n + 1, {}), n)
        steps = len(cert) - 1
        assert n * n / 2 <= steps <= 6 * n * n + n / 2


def test_verify_detects_forgery(line, line_table):
    g = line_table.sphere(3)[5]
    cert = paths.line_connect_canonical(line, g, 3)
    cert.lengths[1] += 1
    res = paths.verify_certificate(cert, line_table)
    assert not res["ok"] and res["first_violation"] == 1


def test_verify_empty_is_ok(line):
    cert = paths.PathCertificate(line, [], [], (0, 0))
    assert paths.verify_certificate(cert)["ok"]


def test_certificate_serialization(line, line_table):
    g = line_table.sphere(4)[7]
    if line.infinite_component_oracle(g, 4) != IN_INFINITE:
        g = line.from_parts(0, {0: 1, 1: 1, 2: 1})
    cert = paths.line_connect_canonical(line, g, 4)
    text = cert.serialize()
    back = paths.parse_certificate(line, text)
    assert back.steps == cert.steps
    assert back.lengths == cert.lengths
    assert back.window == cert.window
    assert paths.verify_certificate(back, line_table)["ok"]
