"""Annulus construction, certification, components, thickness, entropy,
induced metric, and the section-8 probes."""

import math

import pytest

from cayleyspheres import annuli
from cayleyspheres.errors import (
    DisconnectedAnnulus,
    InsufficientRadius,
    VertexNotInAnnulus,
    WrongModel,
)
from cayleyspheres.groups import IN_FINITE, IN_INFINITE, make_group
from cayleyspheres.metric import enumerate_ball


def test_certify_matches_oracle_small(line, line_table):
    for n in range(1, 7):
        for g in line_table.sphere(n):
            assert annuli.certify_infinite(g, n, line_table) == \
                line.infinite_component_oracle(g, n)


def test_certify_examples(line, line_table):
    g = line.from_parts(0, {-1: 1, 1: 1})
    assert annuli.certify_infinite(g, 4, line_table) == IN_FINITE
    g = line.from_parts(6, {k: 1 for k in range(7)})
    assert annuli.certify_infinite(g, 6, line_table) == IN_INFINITE


def test_certify_insufficient_radius(line):
    t = enumerate_ball(line, 5)
    with pytest.raises(InsufficientRadius):
        annuli.certify_infinite(t.sphere(3)[0], 3, t)


def test_z_annulus():
    z = make_group("z")
    t = enumerate_ball(z, 8)
    ann = annuli.build_annulus(3, 0, False, t)
    assert len(ann) == 2
    part = annuli.components(ann)
    assert part.block_count == 2
    assert annuli.connection_thickness(3, 4, t) is annuli.ABOVE_CAP


def test_free_tree_annulus(free_tree_table):
    ann = annuli.build_annulus(2, 1, False, free_tree_table)
    part = annuli.components(ann)
    assert part.block_count == 6
    assert part.h == 1.0


def test_sphere_infinite_majority(line_table):
    # at n=4 the certified-infinite part is a strict majority of S(4)
    ann = annuli.build_annulus(4, 0, True, line_table)
    assert len(ann) > line_table.sphere_size(4) / 2


def test_line_thickness_small(line_table):
    assert annuli.connection_thickness(1, 4, line_table) == 0
    for n in (2, 3, 4):
        assert annuli.connection_thickness(n, n + 3, line_table) == n + 2


def test_monotone_connectivity(line_table):
    # once connected, thicker annuli stay connected (consequence of the
    # geodesic-descent lemma)
    profile = annuli.connectivity_profile(4, 8, line_table)
    seen = False
    for _r, connected in profile:
        if seen:
            assert connected
        seen = seen or connected
    assert seen


def test_component_refinement(line_table):
    # the partition of S(n) at thickness r+1 coarsens the one at r
    n = 5
    prev = None
    for r in range(0, 4):
        ann = annuli.build_annulus(n, r, False, line_table)
        part = annuli.components(ann, annuli.SPHERE)
        assign = {}
        for cid, ids in part.blocks:
            for i in ids:
                assign[i] = cid
        if prev is not None:
            pairs = set()
            for i, cid in prev.items():
                pairs.add((cid, assign[i]))
            fine_to_coarse = {}
            for fine, coarse in pairs:
                assert fine_to_coarse.setdefault(fine, coarse) == coarse
        prev = assign


def test_entropy_conventions(line_table):
    ann = annuli.build_annulus(3, 0, False, line_table)
    part = annuli.components(ann, annuli.FULL)
    H, h, blocks = annuli.entropy(part)
    assert 0.0 <= H <= math.log(blocks) + 1e-12
    singleton = annuli.ComponentPartition(annuli.FULL, [(0, [0])], [1])
    assert singleton.H == 0.0 and singleton.h == 1.0


def test_streaming_thickness_agrees(line):
    table = enumerate_ball(line, 10)
    for n in (2, 3):
        assert annuli.streaming_connection_thickness(n, n + 3, table) \
            == annuli.connection_thickness(n, n + 3, table)


def test_induced_distance_and_diameter(zz, zz_table):
    ann = annuli.build_annulus(4, 3, False, zz_table)
    g1 = zz.from_parts(5, {})
    g2 = zz.from_parts(0, {0: 5})
    assert annuli.induced_distance(ann, g1, g1) == 0
    d = annuli.induced_distance(ann, g1, g2)
    assert d == 32
    diam = annuli.induced_diameter(ann)
    assert diam.exact and diam.value == 64
    with pytest.raises(VertexNotInAnnulus):
        annuli.induced_distance(ann, zz.identity(), g1)


def test_induced_distance_disconnected(zz, zz_table):
    # S(n,2) of Z wr Z is genuinely disconnected
    ann = annuli.build_annulus(4, 2, False, zz_table)
    g1 = zz.from_parts(5, {})
    g2 = zz.from_parts(0, {0: 5})
    assert annuli.induced_distance(ann, g1, g2) is None
    assert annuli.induced_diameter(ann) is None


def test_zz_distortion_profile(zz_table):
    """Z wr Z walk-or-switch: th(n) = 3 for n = 3..6, and the connected
    annulus S(n,3) has quadratic diameter growth with a stable ratio."""
    ratios = []
    for n in (3, 4, 5, 6):
        assert annuli.connection_thickness(n, 4, zz_table) == 3
        ann = annuli.build_annulus(n, 3, False, zz_table)
        diam = annuli.induced_diameter(ann)
        assert diam.exact
        ratios.append(diam.value / n ** 2)
    assert max(ratios) / min(ratios) < 2.0


def test_line_wide_annulus_diameter(line_table):
    ann = annuli.build_annulus(3, 5, False, line_table)
    diam = annuli.induced_diameter(ann)
    assert diam is not None and diam.exact and diam.value > 0


def test_sprawl_deterministic(zz_table):
    ann = annuli.build_annulus(3, 3, False, zz_table)
    a = annuli.sprawl_estimate(ann, 50, seed=7)
    b = annuli.sprawl_estimate(ann, 50, seed=7)
    assert a == b
    ann1 = annuli.build_annulus(3, 0, False, enumerate_ball(make_group("z"), 6))
    with pytest.raises(DisconnectedAnnulus):
        annuli.sprawl_estimate(ann1, 5, seed=1)


def test_sprawl_quadratic_band(zz_table):
    vals = []
    for n in (3, 4, 5):
        ann = annuli.build_annulus(n, 3, False, zz_table)
        vals.append(annuli.sprawl_estimate(ann, 200, seed=12345) / n ** 2)
    assert max(vals) / min(vals) < 2.0


def test_almost_convexity(zz_table):
    z2 = make_group("product(z|z) set=summed")
    t = enumerate_ball(z2, 8)
    t.graph()
    probe = annuli.almost_convexity_probe(2, range(2, 6), t)
    assert set(probe.values()) == {2}
    probe_zz = annuli.almost_convexity_probe(2, range(3, 8), zz_table)
    vals = [probe_zz[n] for n in range(3, 8)]
    assert vals == [6, 8, 10, 12, 14]
    assert all(vals[i] < vals[i + 1] for i in range(len(vals) - 1))


def test_ladder_cutset(ladder_sws_table):
    for n in (2, 3):
        res = annuli.verify_ladder_cutset(n, ladder_sws_table)
        assert res["passed"]
        assert res["separation"] == 2 * n + 2


def test_ladder_cutset_wrong_model(line_table):
    with pytest.raises(WrongModel):
        annuli.verify_ladder_cutset(2, line_table)


def test_annulus_flags(line_table):
    ann = annuli.build_annulus(4, 1, True, line_table)
    assert all(ann.in_infinite[i] for i in ann.vertex_ids)
    levels = ann.levels()
    assert min(levels) >= 4 and max(levels) <= 5
