"""Flux, displacement, and coarse-embedding checks.

Expected values below were derived by hand on small windows (the enumerations
are quoted next to each assertion) and frozen before the window code existed.
Where a value admits an independent arithmetic route (corank differences of
plain letter spans), the test recomputes it that way too.
"""

from __future__ import annotations

import random

import pytest

from graphmcg.fluxdim import (
    EmbeddingReport,
    EndPartition,
    PartitionError,
    StarPartition,
    StarShift,
    WindowError,
    abs_displacement,
    admissible_pair,
    displacement,
    flux,
    flux_family,
    star_flux,
    zk_embedding_check,
)
from graphmcg.freegrp import (
    FreeFactor,
    cork,
    factor_from_span,
    factor_meet,
    member,
    subgroup_graph,
)
from graphmcg.mcg import (
    compose,
    hungry,
    identity,
    inverse_class,
    ladder,
    loch_ness,
    loop_swap,
    loop_word,
    millipede,
    partial_conj,
    power,
    same_class,
    shift,
)

from oracles import ball, brute_common_ball


L = ladder()


def part0() -> EndPartition:
    return EndPartition(L, 0)


# ---------------------------------------------------------------------------
# partitions


def test_partition_requires_two_loop_ends():
    for graph in (loch_ness(), hungry(2), millipede()):
        with pytest.raises(PartitionError):
            EndPartition(graph, 0)
    p = EndPartition(L, 0)
    assert p.left_ends == ("left",)
    assert p.right_ends == ("right",)


def test_partition_serializes_edge_id():
    p = EndPartition(L, 3)
    data = p.to_json()
    assert data["edge"] == 3
    assert data["leftEnds"] == ["left"]
    assert data["rightEnds"] == ["right"]
    # no coordinates anywhere, just the id
    assert "x" not in data and "y" not in data


# ---------------------------------------------------------------------------
# admissible pairs


def test_admissible_pair_identity():
    p = part0()
    e = identity(L)
    for n in (-2, 0, 3):
        assert admissible_pair(e, p, n) == n


def test_admissible_pair_shift_matches_truncation_enumeration():
    # on the three-loop truncation (positions -1, 0, 1) the shift sends the
    # window basis of A_0 = <positions -1, 0> to <positions 0, 1>, which first
    # embeds in A_1; hand table: {-1: 0, 0: 1}
    h = shift(L, 1)
    p = part0()
    assert admissible_pair(h, p, 0) == 1
    assert admissible_pair(h, p, 1) == 2
    assert admissible_pair(h, p, -1) == 0
    # the inverse shift pulls positions down, so A_0 images already sit in A_0
    assert admissible_pair(inverse_class(h), p, 0) == 0


def test_admissible_pair_compact_support():
    p = part0()
    # letters a1 (position 0) and a2 (position -1) stay inside the n = 0 window
    u = loop_word(L, "a2", 1, "post")
    assert admissible_pair(u, p, 0) == 0
    # conjugating rows reach position 2, so the search stops at m = 2
    c = partial_conj(L, "a5", 1)
    assert admissible_pair(c, p, 0) == 2


# ---------------------------------------------------------------------------
# flux values


def test_flux_crossing_shift():
    p = part0()
    h = shift(L, 1)
    # the window count: cork(A_m, A_0) = m, cork(A_m, h(A_0)) = m - 1
    assert flux(h, p) == 1
    assert flux(inverse_class(h), p) == -1


def test_flux_shift_powers_match_direct_coranks():
    p = part0()
    h = shift(L, 1)
    for e in range(-4, 5):
        assert flux(power(h, e), p) == e
    # independent route for e >= 1: windowed coranks of plain letter spans,
    # with the image window floor drifted by e to keep the deep tail matched
    for e in range(1, 5):
        floor = -e - 4
        big0 = factor_from_span(L.enc(q) for q in range(floor, e + 1))
        small0 = factor_from_span(L.enc(q) for q in range(floor, 1))
        cork1 = cork(big0, small0)
        big1 = factor_from_span(L.enc(q) for q in range(floor + e, e + 1))
        image = factor_from_span(L.enc(q + e) for q in range(floor, 1))
        cork2 = cork(big1, image)
        assert cork1 == e and cork2 == 0
        assert flux(power(h, e), p) == cork1 - cork2


def test_flux_zero_on_loop_swaps():
    p = part0()
    for f in (loop_swap(L, 1, 1, 3), loop_swap(L, 2, 1, 4), loop_swap(L, 1, 2, 5)):
        assert flux(f, p) == 0


def test_flux_zero_on_compact_multiwords():
    p = part0()
    cases = [
        loop_word(L, "a2", 1, "post"),
        loop_word(L, "a1 A3", 5, "pre"),
        partial_conj(L, "a5", 1),
        partial_conj(L, "a2 a4", -2),
        compose(loop_word(L, "a3", 1, "post"), partial_conj(L, "a1", 2)),
    ]
    for f in cases:
        assert flux(f, p) == 0


def test_flux_additive_on_random_pairs():
    p = part0()
    rng = random.Random(401)
    pool = [
        lambda: shift(L, rng.choice([-2, -1, 1, 2])),
        lambda: loop_swap(L, 1, rng.randint(1, 3), rng.randint(5, 7)),
        lambda: loop_word(L, "a%d" % rng.randint(1, 5), 7, "post"),
        lambda: partial_conj(L, "a%d" % rng.randint(1, 4), rng.randint(-2, 2)),
    ]
    for _ in range(25):
        f = compose(rng.choice(pool)(), rng.choice(pool)())
        g = rng.choice(pool)()
        assert flux(compose(g, f), p) == flux(g, p) + flux(f, p)


def test_flux_stable_under_window_widening():
    p = part0()
    h = shift(L, 1)
    f = compose(partial_conj(L, "a5", 1), power(h, 3))
    assert flux(f, p) == flux(f, p, margin=6) == 3
    assert displacement(shift(L, 2), 0) == displacement(shift(L, 2), 0, margin=4) == 2


def test_flux_respects_partition_edge():
    # moving the cut does not change the flux of a shift
    h = shift(L, 1)
    for j in (-2, 1, 4):
        assert flux(h, EndPartition(L, j)) == 1


def test_flux_rejects_mismatched_graph():
    p = part0()
    with pytest.raises(PartitionError):
        flux(identity(loch_ness()), p)


# ---------------------------------------------------------------------------
# flux families


def test_flux_family_ladder():
    fam = flux_family(2)
    assert fam.matrix == ((1,),)
    assert len(fam.partitions) == 1 and len(fam.shifts) == 1
    assert isinstance(fam.partitions[0], EndPartition)


def test_flux_family_tripod_identity():
    fam = flux_family(3)
    assert fam.matrix == ((1, 0), (0, 1))
    data = fam.to_json()
    assert data["matrix"] == [[1, 0], [0, 1]]


def test_flux_family_four_ends():
    assert flux_family(4).matrix == ((1, 0, 0), (0, 1, 0), (0, 0, 1))


def test_flux_family_rejects_bad_counts():
    for bad in (1, 0, -3):
        with pytest.raises(PartitionError):
            flux_family(bad)
    with pytest.raises(PartitionError):
        flux_family(float("inf"))


def test_star_codec_and_direct_values():
    # letters on the threefold star: branch b, level l -> 3(l-1) + b + 1
    p1 = StarPartition(3, 1)
    assert p1.letter(0, 1) == 1
    assert p1.letter(1, 1) == 2
    assert p1.letter(2, 2) == 6
    h1 = StarShift(3, 1)
    h2 = StarShift(3, 2)
    # hand windows (depth 4): the crossing pair leaves exactly one basis
    # letter of A_1 uncovered, the disjoint pair covers everything
    for n in (0, 1):
        assert star_flux(h1, p1, n) == 1
        assert star_flux(h2, p1, n) == 0
        assert star_flux(h2, StarPartition(3, 2), n) == 1


def test_star_shift_images():
    h1 = StarShift(3, 1)
    assert h1.image_pos(0, 1) == (1, 1)
    assert h1.image_pos(0, 3) == (0, 2)
    assert h1.image_pos(1, 2) == (1, 3)
    assert h1.image_pos(2, 5) == (2, 5)


# ---------------------------------------------------------------------------
# displacement


def test_displacement_identity_zero():
    assert displacement(identity(L), 0) == 0
    assert abs_displacement(identity(L), 0) == 0


def test_displacement_single_shift():
    h = shift(L, 1)
    # A side is carried into itself, B side loses the letter at position 1:
    # cork(A, A) = 0 and cork(B, <positions >= 2>) = 1
    assert displacement(h, 0) == 1
    assert displacement(inverse_class(h), 0) == 1
    assert abs_displacement(h, 0) == 1


def test_displacement_shift_powers():
    h = shift(L, 1)
    for e in (-3, -2, -1, 1, 2, 3):
        assert displacement(power(h, e), 0) == abs(e)


def test_displacement_stride_components():
    h0 = shift(L, 1, stride=2, offset=0)
    h1 = shift(L, 1, stride=2, offset=1)
    assert displacement(h0, 0) == 1
    # mixed signs displace on both sides of the cut: even positions push one
    # letter out of B, odd positions pull one out of A
    f = compose(h0, inverse_class(h1))
    assert displacement(f, 0) == 2
    assert abs_displacement(f, 0) == 2
    g = compose(power(h0, 2), h1)
    assert displacement(g, 0) == 3


def test_displacement_compact_elements():
    # the swap carries position 0 across the cut and position 1 back:
    # each side loses exactly one basis letter
    assert displacement(loop_swap(L, 1, 1, 3), 0) == 2
    # a1 -> a1 a3 leaves B alone and drops a1 from the reachable A side
    assert displacement(loop_word(L, "a3", 1, "post"), 0) == 1
    # conjugating rows by a word on the same side displace nothing
    assert displacement(partial_conj(L, "a2", -2), 0) == 0
    assert displacement(partial_conj(L, "a5", 1), 0) == 0


def test_displacement_basepoint_matters():
    # the swap of positions 0 and 1 is invisible once the cut sits past it
    f = loop_swap(L, 1, 1, 3)
    assert displacement(f, 0) == 2
    assert displacement(f, 2) == 0
    assert displacement(f, -2) == 0


def test_displacement_expression_invariance():
    h = shift(L, 1)
    f1 = compose(h, partial_conj(L, "a3", 1))
    f2 = compose(partial_conj(L, "a5", 2), h)
    assert same_class(f1, f2)
    # based images: positions <= 1 translate cleanly, higher rows pick up the
    # conjugator a5 which itself lies in the image, so only position 1 leaks
    assert displacement(f1, 0) == 1
    assert displacement(f2, 0) == 1


def test_displacement_window_instability_raises():
    # a conjugating word on the far side of the cut from its slot never
    # stabilizes: every widening finds more displaced letters
    f = partial_conj(L, "a17", -3)
    with pytest.raises(WindowError):
        displacement(f, 0)


def test_displacement_triangle_and_symmetry():
    rng = random.Random(402)
    # composable elements share one shift stride; compact pieces are free
    pool = [
        lambda: shift(L, rng.choice([-1, 1]), stride=2, offset=rng.randint(0, 1)),
        lambda: loop_swap(L, 1, rng.randint(1, 2), rng.randint(4, 6)),
        lambda: loop_word(L, "a%d" % rng.randint(1, 4), 6, "pre"),
        lambda: partial_conj(L, "a2", -2),
    ]
    for _ in range(20):
        f = rng.choice(pool)()
        g = rng.choice(pool)()
        df, dg = abs_displacement(f, 0), abs_displacement(g, 0)
        assert abs_displacement(f, 0) == abs_displacement(inverse_class(f), 0)
        assert abs_displacement(compose(g, f), 0) <= dg + df


def test_displacement_rejects_other_families():
    with pytest.raises(PartitionError):
        displacement(identity(loch_ness()), 0)


# ---------------------------------------------------------------------------
# coarse embedding reports


def test_zk_embedding_line():
    rep = zk_embedding_check(1, 3)
    assert isinstance(rep, EmbeddingReport)
    assert rep.ok and not rep.failures
    assert rep.cases == 7  # e in -3..3


def test_zk_embedding_plane_mixed_signs():
    rep = zk_embedding_check(2, 2)
    assert rep.ok
    # 1 + 4 + 8 vectors with l1 norm <= 2
    assert rep.cases == 13
    data = rep.to_json()
    assert data["ok"] is True and data["k"] == 2


def test_zk_embedding_zero_vector_only():
    rep = zk_embedding_check(3, 0)
    assert rep.ok and rep.cases == 1


# ---------------------------------------------------------------------------
# window computations against brute enumeration


def test_windowed_meet_matches_brute_enumeration():
    radius = 6
    cases = [
        (((1,), (2, 3, -2)), ((2,), (1, 3, -1))),
        (((1,), (2,)), ((2,), (3,))),
        (((1, 2), (3,)), ((2,), (3,))),
    ]
    for gens1, gens2 in cases:
        meet = factor_meet(
            FreeFactor(kind="span", gens=gens1), FreeFactor(kind="span", gens=gens2)
        )
        graph = subgroup_graph(meet.gens)
        brute = brute_common_ball(gens1, gens2, radius)
        letters = {abs(x) for g in gens1 + gens2 for x in g}
        for w in ball(sorted(letters), radius):
            assert member(graph, w) == (w in brute)


def test_windowed_corank_matches_count_arithmetic():
    # spans of explicit letters: corank must equal the plain count difference
    rng = random.Random(403)
    for _ in range(20):
        bottom = rng.randint(-6, -2)
        mid = rng.randint(bottom, 2)
        top = rng.randint(mid, 5)
        big = factor_from_span(L.enc(q) for q in range(bottom, top + 1))
        small = factor_from_span(L.enc(q) for q in range(bottom, mid + 1))
        assert cork(big, small) == top - mid
