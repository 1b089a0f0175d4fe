"""Flux homomorphisms and basepoint displacement on the spine graph.

Both quantities compare a free factor of loop letters with its image under
a mapping class. Every corank is taken inside a finite letter window sized
from the support of the element plus a margin; the tail boundary of each
window is offset by the drift of the shift component on that residue class,
so translated tails cancel exactly. Every value is recomputed in a widened
window and disagreement raises WindowError instead of returning a guess.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from fractions import Fraction

from .freegrp import (
    FreeFactor,
    UnregisteredFactorError,
    cork,
    factor_from_span,
    factor_meet,
)
from .mcg import (
    GraphModel,
    MappingClass,
    UnsupportedElementError,
    Word,
    compose,
    identity,
    induced_aut,
    inverse_class,
    ladder,
    letters_of,
    loop_swap,
    loop_word,
    partial_conj,
    same_class,
    shift,
    word_map,
)


class PartitionError(ValueError):
    """The requested end partition or family member does not exist."""


class WindowError(RuntimeError):
    """A windowed corank failed to stabilize under widening."""


def _widening_enabled() -> bool:
    flag = os.environ.get("GRAPHMCG_WINDOW_CHECK", "1").lower()
    return flag not in ("0", "off", "false")


# ---------------------------------------------------------------------------
# end partitions of the two-ended spine


@dataclass(frozen=True)
class EndPartition:
    """Cut of the spine between loop positions `edge` and `edge + 1`.

    Both sides must accumulate loops, which on these families singles out
    the two-ended spine. Serialized by the edge id alone.
    """

    graph: GraphModel
    edge: int

    def __post_init__(self):
        if not self.graph.has_shift:
            raise PartitionError(
                f"{self.graph.family}: partition side lacking an end"
                " accumulated by loops"
            )

    @property
    def left_ends(self) -> tuple[str, ...]:
        return tuple(self.graph.other_loop_ends)

    @property
    def right_ends(self) -> tuple[str, ...]:
        return (self.graph.designated_end,)

    def to_json(self) -> dict:
        return {
            "edge": self.edge,
            "leftEnds": list(self.left_ends),
            "rightEnds": list(self.right_ends),
        }


def _check_same_graph(f: MappingClass, part: EndPartition) -> None:
    if f.graph != part.graph:
        raise PartitionError("element and partition live on different graphs")


# ---------------------------------------------------------------------------
# windows

# The shift component moves position p to p + moves[p % stride]; a window
# whose boundary faces an infinite tail must shift that boundary the same
# way, otherwise the count picks up phantom letters near the edge.


def _moves(f: MappingClass) -> tuple[int, dict[int, int]]:
    if not f.shift:
        return 1, {}
    stride = f.shift[0][0][0]
    return stride, {o: k * t for (k, o), t in f.shift}


def _reach(f: MappingClass) -> int:
    return max((abs(k * t) for (k, _), t in f.shift), default=0)


def _data_positions(f: MappingClass) -> set[int]:
    dec = f.graph.dec
    pos: set[int] = set()
    for i, w in f.table:
        pos.add(dec(i))
        pos |= {dec(x) for x in letters_of(w)}
    for _, w in f.omegas:
        pos |= {dec(x) for x in letters_of(w)}
    for atom in f.atoms:
        pos |= {dec(x) for x in letters_of(atom.word)}
    return pos


def _full_image(f: MappingClass, i: int) -> Word:
    """Image of one loop letter under the canonical table and shift."""
    g = f.graph
    stride, moves = _moves(f)
    out = []
    for x in f.letter_image(i):
        p = g.dec(abs(x))
        q = p + moves.get(p % stride, 0)
        out.append(g.enc(q) if x > 0 else -g.enc(q))
    return tuple(out)


def _span(graph: GraphModel, positions) -> FreeFactor:
    return factor_from_span(sorted(graph.enc(p) for p in positions))


# ---------------------------------------------------------------------------
# flux


def _floor(f: MappingClass, edge: int, n: int, margin: int) -> int:
    data = _data_positions(f) | {edge + min(n, 0)}
    return min(data) - margin - _reach(f)


def admissible_pair(
    f: MappingClass, part: EndPartition, n: int, *, margin: int = 2
) -> int:
    """Smallest m >= n carrying the canonical image of the n-side factor."""
    _check_same_graph(f, part)
    g = f.graph
    j = part.edge
    m = n
    for p in range(_floor(f, j, n, margin), j + n + 1):
        img = _full_image(f, g.enc(p))
        m = max(m, max(g.dec(abs(x)) for x in img) - j)
    return m


def _flux_at(f: MappingClass, part: EndPartition, n: int, m: int, floor: int) -> int:
    g = f.graph
    j = part.edge
    stride, moves = _moves(f)
    dom = range(floor, j + n + 1)
    big0 = _span(g, range(floor, j + m + 1))
    c1 = cork(big0, _span(g, dom))
    big_pos: list[int] = []
    for r in range(stride):
        lo = floor + ((r - floor) % stride) + moves.get(r, 0)
        big_pos.extend(range(lo, j + m + 1, stride))
    images = tuple(_full_image(f, g.enc(p)) for p in dom)
    try:
        c2 = cork(_span(g, big_pos), FreeFactor(kind="image", gens=images))
    except UnregisteredFactorError as exc:
        raise WindowError(f"image escapes the window at pair ({m}, {n}): {exc}") from None
    return c1 - c2


def _flux_detail(f: MappingClass, part: EndPartition, margin: int):
    _check_same_graph(f, part)
    pairs = []
    for n in (0, 1, -1):
        pairs.append((admissible_pair(f, part, n, margin=margin), n))
    pairs.append((pairs[0][0] + 1, 0))
    values = []
    for m, n in pairs:
        floor = _floor(f, part.edge, n, margin)
        v = _flux_at(f, part, n, m, floor)
        if _widening_enabled():
            deeper = floor - margin - _reach(f) - 2
            if _flux_at(f, part, n, m, deeper) != v:
                raise WindowError(
                    f"flux at pair ({m}, {n}) changed when the window doubled"
                )
        values.append(v)
    if len(set(values)) != 1:
        raise WindowError(f"admissible pairs disagree: {sorted(set(values))}")
    return values[0], tuple(pairs)


def flux(f: MappingClass, part: EndPartition, *, margin: int = 2) -> int:
    """Signed count of loop letters carried across the cut, toward +."""
    return _flux_detail(f, part, margin)[0]


def flux_report(f: MappingClass, part: EndPartition, *, margin: int = 2) -> dict:
    value, pairs = _flux_detail(f, part, margin)
    return {"value": value, "pairs": [[m, n] for m, n in pairs]}


# ---------------------------------------------------------------------------
# flux families: one crossing shift per partition, pairing matrix

# For two ends the spine itself carries the family. For more ends the model
# is a star of loop rays: `branches` rays joined at a center, a loop at
# every integer level >= 1 of every ray. Letters are numbered breadth
# first, branch b level l taking index branches*(l-1) + b + 1.


@dataclass(frozen=True)
class StarPartition:
    """Cut separating one branch of the loop star from the rest."""

    branches: int
    branch: int

    def __post_init__(self):
        if self.branches < 3:
            raise PartitionError("a loop star needs at least three branches")
        if not 0 <= self.branch < self.branches:
            raise PartitionError("no such branch on the star")

    def letter(self, b: int, level: int) -> int:
        if not 0 <= b < self.branches or level < 1:
            raise PartitionError("no such loop on the star")
        return self.branches * (level - 1) + b + 1

    def to_json(self) -> dict:
        return {"branches": self.branches, "branch": self.branch}


@dataclass(frozen=True)
class StarShift:
    """Feed the first loop of branch 0 into the given branch.

    Levels of branch 0 slide down by one, levels of the target branch
    slide up by one, and the displaced center loop crosses over.
    """

    branches: int
    branch: int

    def __post_init__(self):
        if self.branches < 3:
            raise PartitionError("a loop star needs at least three branches")
        if not 1 <= self.branch < self.branches:
            raise PartitionError("star shifts feed branch 0 into another branch")

    def image_pos(self, b: int, level: int) -> tuple[int, int]:
        if b == 0 and level == 1:
            return (self.branch, 1)
        if b == 0:
            return (0, level - 1)
        if b == self.branch:
            return (b, level + 1)
        return (b, level)

    def drift(self, b: int) -> int:
        if b == 0:
            return -1
        if b == self.branch:
            return 1
        return 0

    def to_json(self) -> dict:
        return {"branches": self.branches, "into": self.branch}


def _star_flux_at(h: StarShift, part: StarPartition, n: int, depth: int) -> int:
    k, i = part.branches, part.branch
    dom = [(i, l) for l in range(1, n + 1)]
    dom += [(b, l) for b in range(k) if b != i for l in range(1, depth + 1)]
    imgs = [h.image_pos(b, l) for b, l in dom]
    m = max([n] + [l for b, l in imgs if b == i])
    rest0 = [(b, l) for b in range(k) if b != i for l in range(1, depth + 1)]
    big0 = [part.letter(i, l) for l in range(1, m + 1)]
    big0 += [part.letter(b, l) for b, l in rest0]
    c1 = cork(
        factor_from_span(sorted(big0)),
        factor_from_span(sorted(part.letter(b, l) for b, l in dom)),
    )
    big1 = [part.letter(i, l) for l in range(1, m + 1)]
    big1 += [
        part.letter(b, l)
        for b in range(k)
        if b != i
        for l in range(1, depth + h.drift(b) + 1)
    ]
    gens = tuple((part.letter(b, l),) for b, l in imgs)
    try:
        c2 = cork(factor_from_span(sorted(big1)), FreeFactor(kind="image", gens=gens))
    except UnregisteredFactorError as exc:
        raise WindowError(f"star image escapes the window: {exc}") from None
    return c1 - c2


def star_flux(h: StarShift, part: StarPartition, n: int = 0, *, depth: int = 4) -> int:
    if h.branches != part.branches:
        raise PartitionError("shift and partition live on different stars")
    if n < 0:
        raise PartitionError("the star grading starts at 0")
    v = _star_flux_at(h, part, n, depth)
    if _widening_enabled() and _star_flux_at(h, part, n, depth + 3) != v:
        raise WindowError(f"star flux at n={n} changed when the window doubled")
    return v


@dataclass(frozen=True)
class FluxFamily:
    partitions: tuple
    shifts: tuple
    matrix: tuple[tuple[int, ...], ...]

    def to_json(self) -> dict:
        return {
            "partitions": [p.to_json() for p in self.partitions],
            "shifts": [s.to_json() for s in self.shifts],
            "matrix": [list(row) for row in self.matrix],
        }


def flux_family(count) -> FluxFamily:
    """Independent flux pairs for a graph with `count` loop-accumulated ends."""
    if isinstance(count, bool) or not isinstance(count, int):
        raise PartitionError("the number of ends must be a finite integer")
    if count < 2:
        raise PartitionError("a flux family needs at least two ends")
    if count == 2:
        g = ladder()
        part = EndPartition(g, 0)
        h = shift(g, 1)
        return FluxFamily((part,), (h,), ((flux(h, part),),))
    parts = tuple(StarPartition(count, i) for i in range(1, count))
    shifts = tuple(StarShift(count, j) for j in range(1, count))
    rows = []
    for p in parts:
        row = []
        for h in shifts:
            v = star_flux(h, p, 0)
            if star_flux(h, p, 1) != v:
                raise WindowError("pairing entry depends on the grading cut")
            row.append(v)
        rows.append(tuple(row))
    return FluxFamily(parts, shifts, tuple(rows))


# ---------------------------------------------------------------------------
# basepoint tables

# Displacement is not invariant under regauging, so images are taken at a
# fixed spine vertex: loop shifts relabel positions around the vertex and
# every other atom contributes its table at the vertex itself. The recorded
# expression must recombine to the canonical data it claims to represent.


def _atom_class(graph: GraphModel, atom) -> MappingClass:
    if atom.kind == "H":
        return shift(graph, -atom.a if atom.inv else atom.a, atom.b, atom.c)
    if atom.kind == "W":
        out = word_map(graph, atom.word, atom.a, atom.b)
    elif atom.kind == "LW":
        out = loop_word(graph, atom.word, atom.a, atom.side)
    elif atom.kind == "PC":
        out = partial_conj(graph, atom.word, atom.b)
    elif atom.kind == "LS":
        out = loop_swap(graph, atom.a, atom.b, atom.c)
    else:
        raise UnsupportedElementError(f"unknown atom kind {atom.kind!r}")
    return inverse_class(out) if atom.inv else out


def _based_word_maps(f: MappingClass, x0: int) -> list:
    g = f.graph
    maps: list = []
    rebuilt = identity(g)
    run = None

    def flush():
        nonlocal run
        if run is not None:
            aut = induced_aut(run, f"v{x0}")
            maps.append(aut.apply)
            run = None

    for atom in f.atoms:
        cls = _atom_class(g, atom)
        rebuilt = compose(cls, rebuilt)
        if atom.kind == "H":
            flush()
            stride, moves = _moves(cls)

            def relabel(w: Word, stride=stride, moves=moves) -> Word:
                out = []
                for x in w:
                    p = g.dec(abs(x))
                    q = p + moves.get(p % stride, 0)
                    out.append(g.enc(q) if x > 0 else -g.enc(q))
                return tuple(out)

            maps.append(relabel)
        else:
            run = cls if run is None else compose(cls, run)
    flush()
    if not same_class(rebuilt, f):
        raise UnsupportedElementError(
            "expression history does not match the canonical data"
        )
    return maps


def _based_image(maps: list, letter: int) -> Word:
    w: Word = (letter,)
    for fn in maps:
        w = fn(w)
    return w


# ---------------------------------------------------------------------------
# displacement


def _displacement_at(f: MappingClass, x0: int, margin: int) -> int:
    g = f.graph
    maps = _based_word_maps(f, x0)
    data = _data_positions(f) | _data_positions(inverse_class(f)) | {x0, x0 + 1}
    reach = _reach(f)
    stride, moves = _moves(f)
    bottom = min(data) - margin - reach
    top = max(data) + margin + reach

    def side_cork(dom, big) -> int:
        images = tuple(_based_image(maps, g.enc(p)) for p in dom)
        span = _span(g, big)
        meet = factor_meet(FreeFactor(kind="image", gens=images), span)
        return cork(span, meet)

    big_a: list[int] = []
    big_b: list[int] = []
    for r in range(stride):
        lo = bottom + ((r - bottom) % stride) + moves.get(r, 0)
        big_a.extend(range(lo, x0 + 1, stride))
        hi = top - ((top - r) % stride) + moves.get(r, 0)
        big_b.extend(range(x0 + 1 + ((r - x0 - 1) % stride), hi + 1, stride))
    left = side_cork(range(bottom, x0 + 1), big_a)
    right = side_cork(range(x0 + 1, top + 1), big_b)
    return left + right


def displacement(f: MappingClass, x0: int = 0, *, margin: int = 1) -> int:
    """Letters lost to each side of the cut at x0 under the based images."""
    if not f.graph.has_shift:
        raise PartitionError(
            f"{f.graph.family}: displacement is defined on the two-ended spine"
        )
    v = _displacement_at(f, x0, margin)
    if _widening_enabled():
        wider = _displacement_at(f, x0, 2 * margin + 2)
        if wider != v:
            raise WindowError(
                f"displacement at x0={x0} changed when the window doubled:"
                f" {v} then {wider}"
            )
    return v


def abs_displacement(f: MappingClass, x0: int = 0, *, margin: int = 1):
    """Average of the displacement of f and of its inverse."""
    total = displacement(f, x0, margin=margin)
    total += displacement(inverse_class(f), x0, margin=margin)
    half, rem = divmod(total, 2)
    return half if rem == 0 else Fraction(total, 2)


def displacement_report(f: MappingClass, x0: int = 0, *, margin: int = 1) -> dict:
    value = displacement(f, x0, margin=margin)
    ab = abs_displacement(f, x0, margin=margin)
    return {
        "value": value,
        "absolute": ab if isinstance(ab, int) else str(ab),
        "x0": x0,
    }


# ---------------------------------------------------------------------------
# lattice quasi-embedding report


@dataclass(frozen=True)
class EmbeddingReport:
    k: int
    bound: int
    cases: int
    failures: tuple
    ok: bool

    def to_json(self) -> dict:
        return {
            "k": self.k,
            "bound": self.bound,
            "cases": self.cases,
            "failures": [
                {"vector": list(v), "got": str(got)} for v, got in self.failures
            ],
            "ok": self.ok,
        }


def _l1_vectors(k: int, bound: int):
    if k == 0:
        yield ()
        return
    for head in range(-bound, bound + 1):
        for tail in _l1_vectors(k - 1, bound - abs(head)):
            yield (head,) + tail


def zk_embedding_check(k: int, bound: int, *, x0: int = 0) -> EmbeddingReport:
    """Exhaust the l1 ball of Z^k through stride-k shifts on the spine.

    The product of one shift per congruence class must displace by exactly
    the l1 norm of the exponent vector.
    """
    if k < 1:
        raise PartitionError("the lattice rank must be >= 1")
    if bound < 0:
        raise PartitionError("the norm bound must be >= 0")
    g = ladder()
    cases = 0
    failures = []
    for vec in _l1_vectors(k, bound):
        cases += 1
        f = identity(g)
        for i, e in enumerate(vec):
            if e:
                f = compose(shift(g, e, k, i), f)
        want = sum(abs(e) for e in vec)
        got = abs_displacement(f, x0)
        if got != want:
            failures.append((vec, got))
    return EmbeddingReport(k, bound, cases, tuple(failures), not failures)
