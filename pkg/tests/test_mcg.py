"""Element algebra: normal forms, composition laws, induced tables."""

import json
import random

import pytest

from graphmcg.freegrp import (
    InvalidElementError,
    format_word,
    inverse,
    parse_word,
)
from graphmcg.mcg import (
    Basepoint,
    SlotError,
    UnsupportedElementError,
    compose,
    hungry,
    identity,
    induced_aut,
    inverse_class,
    ladder,
    loch_ness,
    loop_swap,
    loop_word,
    millipede,
    parse_basepoint,
    parse_element,
    parse_graph,
    partial_conj,
    power,
    same_class,
    shift,
    shift_position_map,
    word_map,
)

G0 = loch_ness()
G3 = hungry(3)
GM = millipede()
GL = ladder()


# ---------------------------------------------------------------------------
# graph models


def test_ladder_codec_roundtrip():
    for p in range(-6, 7):
        assert GL.dec(GL.enc(p)) == p
    assert GL.enc(0) == 1
    assert GL.enc(1) == 3
    assert GL.enc(-1) == 2
    assert GL.enc(-2) == 4


def test_parse_graph():
    assert parse_graph("LochNess") == G0
    assert parse_graph("Hungry(3)") == G3
    assert parse_graph("Millipede") == GM
    assert parse_graph("Ladder") == GL
    with pytest.raises(SlotError):
        parse_graph("Octopus")


def test_ray_validity():
    assert G3.valid_ray(1) and G3.valid_ray(3)
    assert not G3.valid_ray(4)
    assert GM.valid_ray(17)
    assert not G0.valid_ray(1)
    with pytest.raises(SlotError):
        word_map(G0, "a1", 1, 0)


# ---------------------------------------------------------------------------
# composition laws


def test_ray_words_concatenate_left_factor_first():
    f1 = word_map(G3, "a1 a2", 1, 0)
    f2 = word_map(G3, "a3", 1, 2)
    h = compose(f1, f2)
    assert same_class(h, word_map(G3, "a1 a2 a3", 1, 0))
    # the reversed convention would produce the other product; rule it out
    assert not same_class(h, word_map(G3, "a3 a1 a2", 1, 0))


def test_ray_word_conjugation_by_core_swap():
    psi = loop_swap(G3, 1, 1, 2)
    w = word_map(G3, "a1 a3", 2, 5)
    lhs = compose(compose(psi, w), inverse_class(psi))
    assert same_class(lhs, word_map(G3, "a2 a3", 2, 0))


def test_spine_slot_worked_composition():
    g = partial_conj(G0, "a2", 1)
    f = partial_conj(G0, "a3 a4 a1", 1)
    target = partial_conj(G0, "a2 a3 a4 A2 a1 a2", 1)
    assert same_class(compose(g, f), target)


def test_identity_composition():
    for el in (word_map(G3, "a1", 2, 0), partial_conj(G0, "a2 a3", 2),
               loop_swap(G0, 2, 1, 4)):
        assert same_class(compose(el, identity(el.graph)), el)
        assert same_class(compose(identity(el.graph), el), el)


def test_slot_position_is_not_part_of_the_class():
    assert same_class(word_map(G3, "a1 a2", 1, 0), word_map(G3, "a1 a2", 1, 7))


def test_composition_requires_same_graph():
    with pytest.raises(UnsupportedElementError):
        compose(word_map(G3, "a1", 1, 0), partial_conj(G0, "a1", 1))


# ---------------------------------------------------------------------------
# loop swaps


def test_loop_swap_is_an_involution():
    ls = loop_swap(G3, 2, 1, 4)
    assert same_class(compose(ls, ls), identity(G3))


def test_smallest_swap_is_a_transposition():
    t = induced_aut(loop_swap(G0, 1, 1, 2), "root")
    assert t.letter_image(1) == (2,)
    assert t.letter_image(2) == (1,)
    assert t.letter_image(3) == (3,)


def test_block_swap_permutation():
    t = induced_aut(loop_swap(G3, 2, 1, 4), "root")
    assert t.letter_image(1) == (4,)
    assert t.letter_image(2) == (5,)
    assert t.letter_image(4) == (1,)
    assert t.letter_image(5) == (2,)
    assert t.letter_image(3) == (3,)


def test_loop_swap_blocks_must_be_disjoint():
    with pytest.raises(SlotError):
        loop_swap(G3, 2, 1, 2)


# ---------------------------------------------------------------------------
# induced tables


def test_partial_conj_table_at_left_vertex():
    w = parse_word("a2 a1")
    t = induced_aut(partial_conj(G0, w, 2), "v2")
    for i in (3, 4, 5):
        assert t.letter_image(i) == tuple(w) + (i,) + tuple(inverse(w))
    for i in (1, 2):
        assert t.letter_image(i) == (i,)


def test_identity_has_empty_table():
    t = induced_aut(identity(G3), "root")
    assert t.exceptions == ()
    assert t.end_conj == ()


def test_shift_window_display():
    h = shift(GL, 1)
    assert shift_position_map(h, -3, 3) == {p: p + 1 for p in range(-3, 4)}


def test_ray_word_map_table_beyond_slot():
    el = word_map(G3, "a1 a2", 1, 3)
    before = induced_aut(el, "R1.2")
    beyond = induced_aut(el, "R1.5")
    assert before.letter_image(3) == (3,)
    w = parse_word("a1 a2")
    assert beyond.letter_image(3) == tuple(w) + (3,) + tuple(inverse(w))


def test_vertex_tables_compose_homomorphically():
    rng = random.Random(5)
    bps = ["root", "v1", "v3", "R1.0", "R2.4", "end:spine", "end:R1"]
    for _ in range(60):
        f = _random_atom(rng, G3)
        g = _random_atom(rng, G3)
        h = compose(g, f)
        for bp in bps:
            tg, tf, th = induced_aut(g, bp), induced_aut(f, bp), induced_aut(h, bp)
            for i in range(1, 7):
                assert th.letter_image(i) == tg.apply(tf.letter_image(i))


def test_end_tables_match_expression_tables():
    # canonical transported tables against literal composition of the
    # per-generator tables, at every end
    rng = random.Random(11)
    cases = [
        (G3, ["end:spine", "end:R1", "end:R2", "end:R3"], range(1, 7)),
        (GM, ["end:spine", "end:R1", "end:R2", "end:R4"], range(1, 6)),
        (GL, ["end:right", "end:left"], range(1, 9)),
    ]
    for graph, ends, letters in cases:
        for _ in range(40):
            el = identity(graph)
            for _ in range(rng.randint(1, 5)):
                el = compose(el, _random_atom(rng, graph, with_shift=False))
            for bp_text in ends:
                canon = induced_aut(el, bp_text)
                lit = _fold_expression_table(el, bp_text)
                for i in letters:
                    assert canon.letter_image(i) == lit.letter_image(i), (
                        f"{bp_text} on {graph.family}: {el}"
                    )


def _fold_expression_table(el, bp_text):
    import graphmcg.mcg as M

    bp = parse_basepoint(el.graph, bp_text)
    out = M.InducedAut(graph=el.graph, exceptions=(), end_conj=())
    for atom in el.atoms:
        out = M._compose_induced(M._atom_table(el.graph, atom, bp), out)
    return out


def test_basepoint_parsing():
    assert parse_basepoint(G3, "root") == Basepoint("root")
    assert parse_basepoint(G3, "v2") == Basepoint("v", a=2)
    assert parse_basepoint(G3, "R1.4") == Basepoint("ray", a=1, b=4)
    assert parse_basepoint(G3, "end:spine") == Basepoint("end", end="spine")
    assert parse_basepoint(GL, "end:left") == Basepoint("end", end="left")
    with pytest.raises(SlotError):
        parse_basepoint(G3, "end:left")
    with pytest.raises(SlotError):
        parse_basepoint(G3, "R9.0")
    with pytest.raises(SlotError):
        parse_basepoint(G0, "w1")


# ---------------------------------------------------------------------------
# group laws, randomized over the generators


def _random_word(rng, letters, maxlen=3):
    return tuple(rng.choice(letters) * rng.choice([1, -1])
                 for _ in range(rng.randint(1, maxlen)))


def _random_atom(rng, graph, with_shift=True):
    kinds = ["W", "LW", "PC", "LS"]
    if graph.family in ("LochNess", "Ladder"):
        kinds.remove("W")
    if graph.has_shift and with_shift:
        kinds.append("H")
    kind = rng.choice(kinds)
    if graph.family == "Ladder":
        letters = [1, 2, 3, 4, 5, 6]
    else:
        letters = [1, 2, 3, 4]
    word = _random_word(rng, letters)
    if kind == "W":
        ray = rng.randint(1, 3) if graph.family == "Hungry" else rng.randint(1, 4)
        return word_map(graph, word, ray, rng.randint(0, 2))
    if kind == "LW":
        k = rng.choice(letters)
        w2 = tuple(x for x in word if abs(x) != k) or (letters[0] if k != letters[0] else letters[1],)
        return loop_word(graph, w2, k, rng.choice(["pre", "post"]))
    if kind == "PC":
        j = rng.randint(-2, 2) if graph.family == "Ladder" else rng.randint(0, 3)
        return partial_conj(graph, word, j)
    if kind == "H":
        # stride is fixed at 1 here: only one interleaving family may appear
        # inside a single element, and the stride-2 laws have their own tests
        return shift(graph, rng.randint(-2, 2) or 1)
    return loop_swap(graph, 1, rng.randint(1, 2), rng.randint(3, 5))


def _random_element(rng, graph, depth, with_shift=True):
    el = identity(graph)
    for _ in range(depth):
        el = compose(el, _random_atom(rng, graph, with_shift=with_shift))
    return el


@pytest.mark.parametrize("graph", [G3, GM, GL], ids=lambda g: g.family)
def test_associativity(graph):
    rng = random.Random(17)
    for _ in range(120):
        a = _random_element(rng, graph, rng.randint(1, 2))
        b = _random_element(rng, graph, rng.randint(1, 2))
        c = _random_element(rng, graph, rng.randint(1, 2))
        assert same_class(compose(compose(a, b), c), compose(a, compose(b, c)))


@pytest.mark.parametrize("graph", [G3, GM, GL], ids=lambda g: g.family)
def test_inverses_cancel(graph):
    rng = random.Random(23)
    checked = 0
    for _ in range(80):
        el = _random_element(rng, graph, rng.randint(1, 6))
        try:
            inv = inverse_class(el)
        except InvalidElementError:
            continue  # slot-crossing words give non-invertible classes
        checked += 1
        assert same_class(compose(el, inv), identity(graph))
        assert same_class(compose(inv, el), identity(graph))
    assert checked > 40


def test_power_matches_repeated_composition():
    el = compose(partial_conj(G3, "a2", 1), word_map(G3, "a1", 2, 0))
    sq = compose(el, el)
    assert same_class(power(el, 2), sq)
    assert same_class(power(el, -2), inverse_class(sq))
    assert same_class(power(el, 0), identity(G3))


def test_mixed_slot_word_is_not_invertible():
    el = partial_conj(G0, "a3 a4 a1", 1)
    with pytest.raises(InvalidElementError):
        inverse_class(el)


# ---------------------------------------------------------------------------
# pushing word maps off the spine


def test_spine_slot_at_hub_pushes_to_all_rays():
    w = "a1 A2"
    lhs = partial_conj(G3, w, 0)
    rhs = identity(G3)
    for k in range(1, 4):
        rhs = compose(rhs, word_map(G3, w, k, 0))
    assert same_class(lhs, rhs)


def test_spine_slot_pushes_to_loop_pairs():
    # with no rays, a spine word map in far letters is a product of loop
    # slot maps over the loops it passes
    w = parse_word("a4 a5")
    lhs = partial_conj(G0, w, 2)
    rhs = identity(G0)
    for i in (1, 2):
        pair = compose(loop_word(G0, inverse(w), i, "pre"),
                       loop_word(G0, w, i, "post"))
        rhs = compose(rhs, pair)
    assert same_class(lhs, rhs)


def test_ray_drags_distinguish_hub_push():
    w = parse_word("a4 a5")
    lhs = partial_conj(G3, w, 2)
    rhs = identity(G3)
    for i in (1, 2):
        rhs = compose(rhs, compose(loop_word(G3, inverse(w), i, "pre"),
                                   loop_word(G3, w, i, "post")))
    assert not same_class(lhs, rhs)
    assert lhs.table == rhs.table
    assert dict(lhs.drags) == {f"R{k}": tuple(w) for k in (1, 2, 3)}
    assert rhs.drags == ()


def test_millipede_drags_only_behind_the_slot():
    el = partial_conj(GM, "a4", 3)
    assert dict(el.drags) == {"R1": (4,), "R2": (4,)}


# ---------------------------------------------------------------------------
# ladder shifts


def test_shift_conjugates_slot_data():
    s = shift(GL, 2)
    lhs = compose(compose(s, partial_conj(GL, "a1", 0)), inverse_class(s))
    assert same_class(lhs, partial_conj(GL, "a5", 2))


def test_shift_conjugation_across_the_middle():
    lhs = compose(compose(shift(GL, 3), partial_conj(GL, "a4", -2)),
                  shift(GL, -3))
    assert same_class(lhs, partial_conj(GL, "a3", 1))


def test_interleaved_shifts_commute_and_add():
    h0 = shift(GL, 1, stride=2, offset=0)
    h1 = shift(GL, 1, stride=2, offset=1)
    assert same_class(compose(h0, h1), compose(h1, h0))
    assert same_class(compose(h0, h0), shift(GL, 2, stride=2, offset=0))
    assert same_class(h1, shift(GL, 1, stride=2, offset=3))


def test_interleaved_shift_moves_only_its_loops():
    h0 = shift(GL, 1, stride=2, offset=0)
    lw = loop_word(GL, "a3", 1, "pre")  # loop at position 0, word at position 1
    conj = compose(compose(h0, lw), inverse_class(h0))
    assert same_class(conj, loop_word(GL, "a3", 5, "pre"))
    h1 = shift(GL, 1, stride=2, offset=1)
    conj = compose(compose(h1, lw), inverse_class(h1))
    assert same_class(conj, loop_word(GL, "a7", 1, "pre"))


def test_different_strides_are_rejected():
    with pytest.raises(UnsupportedElementError):
        compose(shift(GL, 1, stride=2), shift(GL, 1, stride=3))


def test_shifts_only_on_the_two_ended_family():
    for graph in (G0, G3, GM):
        with pytest.raises(UnsupportedElementError):
            shift(graph, 1)


def test_no_vertex_tables_through_shifts():
    with pytest.raises(UnsupportedElementError):
        induced_aut(shift(GL, 1), "v0")
    assert not compose(shift(GL, 1), shift(GL, -1)).shift


def test_shift_inverse_and_order():
    s = shift(GL, 2)
    assert same_class(compose(s, inverse_class(s)), identity(GL))
    u = compose(s, partial_conj(GL, "a1", 0))
    v = compose(partial_conj(GL, "a1", 0), s)
    assert not same_class(u, v)


# ---------------------------------------------------------------------------
# expressions


def test_expression_roundtrips():
    texts = [
        "W(a1 a2, R1.0)",
        "LS(2, 1, 4) * PC(a2, S1)",
        "W(a1 A2, R2.3)^-2 * LW(a3, 1, pre)",
        "PC(a1 a2 a3, S2)^3",
    ]
    for text in texts:
        el = parse_element(G3, text)
        assert same_class(el, parse_element(G3, str(el)))


def test_ladder_expression_roundtrips():
    texts = [
        "H(+1) * PC(a1, S0) * H(-1)",
        "H(+1, stride=2, offset=0) * LW(a3, 1, pre) * H(-1, stride=2, offset=0)",
        "H(2)^-1 * LW(a3, 1, post)",
    ]
    for text in texts:
        el = parse_element(GL, text)
        assert same_class(el, parse_element(GL, str(el)))


def test_expression_is_applied_right_to_left():
    el = parse_element(G3, "LS(1, 1, 2) * W(a1, R1.0)")
    manual = compose(loop_swap(G3, 1, 1, 2), word_map(G3, "a1", 1, 0))
    assert same_class(el, manual)
    # the swap acts after the ray word, so it relabels the dragged letter
    assert format_word(el.drag_of("R1")) == "a2"


def test_identity_expression():
    assert parse_element(G3, "1").is_identity()
    assert str(identity(G3)) == "1"


def test_malformed_expressions_rejected():
    bad = ["W(a1)", "PC(a1, R1.0)", "LS(1, 2)", "H(1) * * W(a1, R1.0)",
           "Q(3)", "W(a1, R9.0)", "LW(a1, 1, pre)", "", "W(a1, R1.0",
           "H(+1, stride=x)"]
    for text in bad:
        with pytest.raises((SlotError, UnsupportedElementError)):
            parse_element(G3, text)


def test_normalized_equality_of_distinct_expressions():
    a = parse_element(G3, "W(a1, R1.0) * W(a2, R1.3)")
    b = parse_element(G3, "W(a1 a2, R1.1)")
    assert same_class(a, b)
    assert a == b  # atoms differ but the normal forms are equal values


# ---------------------------------------------------------------------------
# serialization and immutability


def test_json_shape():
    el = parse_element(G3, "W(a1 a2, R1.0) * PC(a2, S1)")
    data = el.to_json()
    assert data["graph"] == {"family": "Hungry", "rays": 3}
    assert data["coreAut"] == {"1": "A2 a1 a2"}
    assert data["multiWord"]["R1"] == "a1 a2 a2"
    assert data["multiWord"]["R2"] == "a2"
    assert data["shiftPowers"] == []
    json.dumps(data)

    h = shift(GL, 2, stride=2, offset=1)
    assert h.to_json()["shiftPowers"] == [
        {"stride": 2, "offset": 1, "power": 2}
    ]


def test_classes_are_immutable():
    el = word_map(G3, "a1", 1, 0)
    with pytest.raises(Exception):
        el.shift = ()
    with pytest.raises(Exception):
        el.graph.rays = 5
