"""Length functions, ultrametric trees and the leveled comb model.

The graphs served here carry exactly one loop-accumulated end and exactly
one component of the loop complement with infinite end space: an infinite
comb whose teeth sit at positive integer spine positions with unit spacing.
A geodesic line of the comb runs tooth-to-tooth or tooth-to-spine-end, and
a line through tooth k keeps distance k from the loops. A mapping class
moves a line exactly when the insertion words picked up by the line's two
directions disagree, so the smallest cutoff below which every line is
preserved is

    length(g) = 0 if g drags no tooth, else 1 + the largest dragged tooth.

length is an ultranorm: length(gh) <= max(length(g), length(h)) and
inverses keep length. Hence d(g, h) = length(g^-1 h) is an ultrametric on
classes modulo the length-zero subgroup, and any finite family embeds in a
dendrogram whose merge heights are half-integers. The leveled model is the
combinatorial picture of the same tree: vertices (n, f) prescribe reduced
words on the teeth at positions >= n, mapping classes act through

    (phi . f)(i) = w_i * phi_core(f(i)),

with w_i the drag of tooth i, and word maps realize every vertex from the
base point of its level. The hyperbolicity helpers make the ultrametric
four-point property checkable on explicit matrices.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Mapping, Optional, Sequence, Union

from .blueprint import (
    Blueprint,
    Comb,
    Hungry,
    LochNess,
    Wedge,
    end_profile,
    is_infinite,
    ray,
    to_json as _blueprint_json,
)
from .classify import Verdict, report as _classify_report
from .freegrp import Word, concat, reduce_word
from .mcg import GraphModel, MappingClass, compose, inverse_class, millipede, word_map


class CombError(ValueError):
    """A graph without a usable comb component, or mismatched registrations."""


# ---------------------------------------------------------------------------
# contexts


def _comb_host() -> Blueprint:
    return Wedge(LochNess(), Comb(ray()))


@dataclass(frozen=True)
class CombContext:
    """A graph paired with its designated comb component.

    graph is the symbolic element algebra; tooth k is the ray attached at
    spine position k, so teeth are unit-spaced and a line through tooth k
    has distance k from the loops. host records the ambient graph shape.
    """

    graph: GraphModel
    host: Blueprint

    def cb_ball(self, n: int) -> "CBBallCertificate":
        return cb_ball(n, self)

    def to_json(self) -> dict:
        return {
            "graph": self.graph.to_json(),
            "host": _blueprint_json(self.host),
            "teeth": "tooth k at distance k from the loops, unit spacing",
        }


def full_length_context(graph) -> CombContext:
    """Locate the unique infinite-end component of the loop complement.

    Accepts either a registered element-algebra graph or a blueprint. The
    length function needs one loop-accumulated end and exactly one comb; a
    graph with none, or with two or more, is rejected.
    """
    if isinstance(graph, GraphModel):
        if graph.family != "Millipede":
            raise CombError(
                "graph lacking a comb component: the "
                f"{graph.family} family has no unbounded set of teeth"
            )
        return CombContext(graph=graph, host=_comb_host())
    profile = end_profile(graph)
    if profile.elCount != 1:
        raise CombError(
            "length functions need exactly one loop-accumulated end; "
            f"found {profile.elCount}"
        )
    count = profile.infiniteEndComponentsOfComplementOfCore
    if count == 0:
        raise CombError(
            "graph lacking a comb component: every piece outside the loops "
            "has finite end space"
        )
    if is_infinite(count) or count != 1:
        raise CombError(
            f"the comb component must be unique; found {count} components "
            "with infinite end space"
        )
    verdict = _classify_report(graph).locally_cb
    if verdict.value != "LocallyCB":
        raise CombError("the mapping class group is not locally CB: " + verdict.detail)
    return CombContext(graph=millipede(), host=graph)


# ---------------------------------------------------------------------------
# the length function


def length(g: MappingClass, ctx: CombContext) -> int:
    """Smallest k such that g preserves every line at distance >= k."""
    if not isinstance(g, MappingClass):
        raise TypeError(f"not a mapping class: {g!r}")
    if g.graph != ctx.graph:
        raise CombError("element registered on a different graph than the context")
    teeth = [int(name[1:]) for name, w in g.drags if w]
    return 1 + max(teeth) if teeth else 0


def _distance(a: MappingClass, b: MappingClass, ctx: CombContext) -> int:
    return length(compose(inverse_class(a), b), ctx)


# ---------------------------------------------------------------------------
# ultrametric trees


@dataclass(frozen=True)
class TreeNode:
    height: Fraction
    children: tuple[int, ...]
    parent: Optional[int]
    leaf_ids: tuple[int, ...]


@dataclass(frozen=True)
class UltraTree:
    """Dendrogram realizing the pairwise length distances.

    Leaves carry the input element ids (several when inputs are at distance
    zero); internal nodes sit at half-integer heights, strictly increasing
    toward the root, and the leaf-to-leaf path distance 2 * height(meet)
    reproduces d. gromov tabulates the products at the identity class.
    """

    nodes: tuple[TreeNode, ...]
    root: int
    leaves: tuple[int, ...]
    dist: tuple[tuple[int, ...], ...]
    gromov: tuple[tuple[Fraction, ...], ...]

    def leaf_for(self, input_id: int) -> int:
        for idx in self.leaves:
            if input_id in self.nodes[idx].leaf_ids:
                return idx
        raise KeyError(f"no leaf carries element {input_id}")

    def meet(self, a: int, b: int) -> int:
        seen = set()
        while a is not None:
            seen.add(a)
            a = self.nodes[a].parent
        while b not in seen:
            b = self.nodes[b].parent
        return b

    def tree_distance(self, i: int, j: int) -> int:
        a, b = self.leaf_for(i), self.leaf_for(j)
        if a == b:
            return 0
        return int(2 * self.nodes[self.meet(a, b)].height)

    def to_json(self) -> dict:
        return {
            "root": self.root,
            "leaves": list(self.leaves),
            "nodes": [
                {
                    "height": str(n.height),
                    "children": list(n.children),
                    "parent": n.parent,
                    "elements": list(n.leaf_ids),
                }
                for n in self.nodes
            ],
            "distances": [list(row) for row in self.dist],
            "gromov": [[str(x) for x in row] for row in self.gromov],
        }

    def to_dot(self) -> str:
        lines = ["graph ultratree {", "  node [fontname=monospace];"]
        for idx, n in enumerate(self.nodes):
            if n.children:
                lines.append(f'  n{idx} [label="{n.height}", shape=circle];')
            else:
                label = "+".join(f"g{i}" for i in n.leaf_ids)
                lines.append(f'  n{idx} [label="{label}", shape=plaintext];')
        for idx, n in enumerate(self.nodes):
            for c in n.children:
                lines.append(f"  n{idx} -- n{c};")
        lines.append("}")
        return "\n".join(lines)


def ultratree(elements: Sequence[MappingClass], ctx: CombContext) -> UltraTree:
    """Build the dendrogram over the classes of the given elements.

    Inputs at distance zero act identically on the comb and share a leaf.
    The pairwise distances are verified to be ultrametric before merging;
    components of equal minimal distance merge together, which is what
    keeps every internal node at valence >= 3.
    """
    els = list(elements)
    if not els:
        raise ValueError("at least one element is required")
    n = len(els)
    lens = [length(g, ctx) for g in els]
    inverses = [inverse_class(g) for g in els]
    dmat = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            dmat[i][j] = dmat[j][i] = length(compose(inverses[i], els[j]), ctx)

    # group zero-distance inputs into classes, first appearance first
    groups: list[list[int]] = []
    for i in range(n):
        for grp in groups:
            if dmat[grp[0]][i] == 0:
                grp.append(i)
                break
        else:
            groups.append([i])
    k = len(groups)
    dd = [[dmat[groups[i][0]][groups[j][0]] for j in range(k)] for i in range(k)]
    for i in range(k):
        for j in range(k):
            for l in range(k):
                if dd[i][l] > max(dd[i][j], dd[j][l]):
                    raise CombError("length distances failed the ultrametric inequality")

    recs: list[dict] = [
        {"height": Fraction(0), "children": (), "leaf_ids": tuple(grp)}
        for grp in groups
    ]
    member: dict[int, int] = {i: i for i in range(k)}  # node id -> class id
    active = list(range(k))
    while len(active) > 1:
        dmin = min(
            dd[member[a]][member[b]] for a, b in combinations(active, 2)
        )
        # merge whole components of the minimal-distance relation at once
        comp = {a: a for a in active}

        def find(x: int) -> int:
            while comp[x] != x:
                x = comp[x]
            return x

        for a, b in combinations(active, 2):
            if dd[member[a]][member[b]] == dmin:
                comp[find(a)] = find(b)
        buckets: dict[int, list[int]] = {}
        for a in active:
            buckets.setdefault(find(a), []).append(a)
        nxt = []
        for bunch in buckets.values():
            if len(bunch) == 1:
                nxt.append(bunch[0])
                continue
            node_id = len(recs)
            recs.append(
                {
                    "height": Fraction(dmin, 2),
                    "children": tuple(bunch),
                    "leaf_ids": (),
                }
            )
            for c in bunch:
                recs[c]["parent"] = node_id
            member[node_id] = member[bunch[0]]
            nxt.append(node_id)
        active = nxt

    recs[active[0]].setdefault("parent", None)
    nodes = tuple(
        TreeNode(
            height=r["height"],
            children=r["children"],
            parent=r.get("parent"),
            leaf_ids=r["leaf_ids"],
        )
        for r in recs
    )
    gromov = tuple(
        tuple(Fraction(lens[i] + lens[j] - dmat[i][j], 2) for j in range(n))
        for i in range(n)
    )
    return UltraTree(
        nodes=nodes,
        root=active[0],
        leaves=tuple(range(k)),
        dist=tuple(tuple(row) for row in dmat),
        gromov=gromov,
    )


# ---------------------------------------------------------------------------
# the leveled model


@dataclass(frozen=True)
class LeveledVertex:
    """A level n >= 1 with reduced words prescribed on teeth >= n."""

    n: int
    f: tuple[tuple[int, Word], ...] = ()

    def __post_init__(self):
        if not isinstance(self.n, int) or isinstance(self.n, bool) or self.n < 1:
            raise ValueError("level must be a positive integer")
        cleaned = []
        seen = set()
        for i, w in self.f:
            if not isinstance(i, int) or i < self.n:
                raise ValueError(f"tooth {i} lies below level {self.n}")
            if i in seen:
                raise ValueError(f"tooth {i} prescribed twice")
            seen.add(i)
            if not all(isinstance(x, int) and x != 0 for x in w):
                raise ValueError(f"bad word on tooth {i}: {w!r}")
            red = reduce_word(w)
            if red:
                cleaned.append((i, red))
        object.__setattr__(self, "f", tuple(sorted(cleaned)))

    def value(self, i: int) -> Word:
        for j, w in self.f:
            if j == i:
                return w
        return ()

    def to_json(self) -> dict:
        return {"level": self.n, "words": {str(i): list(w) for i, w in self.f}}


def leveled_vertex(n: int, f: Union[Mapping[int, Word], Iterable, None] = None) -> LeveledVertex:
    if f is None:
        items: tuple = ()
    elif isinstance(f, Mapping):
        items = tuple(f.items())
    else:
        items = tuple(f)
    return LeveledVertex(n, items)


def adjacent(u: LeveledVertex, v: LeveledVertex) -> bool:
    """Levels differ by one and the words agree on the shared domain."""
    if abs(u.n - v.n) != 1:
        return False
    lo = max(u.n, v.n)
    teeth = {i for i, _ in u.f} | {i for i, _ in v.f}
    return all(u.value(i) == v.value(i) for i in teeth if i >= lo)


def leveled_action(phi: MappingClass, v: LeveledVertex) -> LeveledVertex:
    """Apply (phi . f)(i) = w_i * phi_core(f(i)) on the teeth >= v.n."""
    if not isinstance(phi, MappingClass) or phi.graph.family != "Millipede":
        raise CombError("the leveled model acts only through comb-carrying graphs")
    support = {i for i, _ in v.f}
    for name, w in phi.drags:
        if w and int(name[1:]) >= v.n:
            support.add(int(name[1:]))
    items = []
    for i in sorted(support):
        w = concat(phi.drag_of(f"R{i}"), phi.apply(v.value(i)))
        if w:
            items.append((i, w))
    return LeveledVertex(v.n, tuple(items))


# ---------------------------------------------------------------------------
# hyperbolicity checkers


def _check_metric(d) -> list[list]:
    rows = [list(r) for r in d]
    size = len(rows)
    if any(len(r) != size for r in rows):
        raise ValueError("distance matrix must be square")
    for i in range(size):
        if rows[i][i] != 0:
            raise ValueError("diagonal entries must vanish")
        for j in range(size):
            if rows[i][j] != rows[j][i]:
                raise ValueError("distance matrix must be symmetric")
            if i != j and not rows[i][j] > 0:
                raise ValueError("distinct points need positive distance")
    for i in range(size):
        for j in range(size):
            for l in range(size):
                if rows[i][j] > rows[i][l] + rows[l][j]:
                    raise ValueError("triangle inequality fails")
    return rows


def _exact(rows) -> bool:
    return all(not isinstance(x, float) for row in rows for x in row)


def is_ultrametric(d) -> bool:
    """Whether every triple satisfies d(x,z) <= max(d(x,y), d(y,z))."""
    rows = _check_metric(d)
    size = len(rows)
    return all(
        rows[i][l] <= max(rows[i][j], rows[j][l])
        for i in range(size)
        for j in range(size)
        for l in range(size)
    )


def _pairing_sums(rows, a, b, c, e):
    sums = sorted(
        (
            rows[a][b] + rows[c][e],
            rows[a][c] + rows[b][e],
            rows[a][e] + rows[b][c],
        ),
        reverse=True,
    )
    return sums[0], sums[1]


def hyperbolicity_delta(d):
    """Largest relative four-point defect (two top pairing sums compared).

    Exactly zero on ultrametric input; exact arithmetic whenever the matrix
    has no floats. The scale-invariant form (s1 - s2) / s1 is returned; the
    additive gap is available as four_point_gap.
    """
    rows = _check_metric(d)
    size = len(rows)
    exact = _exact(rows)
    best = Fraction(0) if exact else 0.0
    for a, b, c, e in combinations(range(size), 4):
        s1, s2 = _pairing_sums(rows, a, b, c, e)
        defect = (Fraction(s1 - s2) / s1) if exact else (s1 - s2) / s1
        if defect > best:
            best = defect
    return best


def four_point_gap(d):
    """Largest additive four-point defect (s1 - s2) / 2 over quadruples."""
    rows = _check_metric(d)
    size = len(rows)
    exact = _exact(rows)
    best = Fraction(0) if exact else 0.0
    for a, b, c, e in combinations(range(size), 4):
        s1, s2 = _pairing_sums(rows, a, b, c, e)
        gap = Fraction(s1 - s2, 2) if exact else (s1 - s2) / 2
        if gap > best:
            best = gap
    return best


# ---------------------------------------------------------------------------
# coarsely bounded balls and bounded geometry


@dataclass(frozen=True)
class CBBallCertificate:
    """Identification of a length ball with a standard CB graph group.

    Classes of length <= level drag only the teeth strictly below level, so
    they are supported on the loops plus those finitely many rays; the ball
    group is the pure mapping class group of that standard form, and the
    classification verdict certifies it coarsely bounded.
    """

    level: int
    teeth: tuple[int, ...]
    ball: Blueprint
    verdict: Verdict

    def to_json(self) -> dict:
        return {
            "level": self.level,
            "teethInside": list(self.teeth),
            "ball": _blueprint_json(self.ball),
            "cb": self.verdict.to_json(),
        }


def cb_ball(n: int, ctx: CombContext) -> CBBallCertificate:
    if not isinstance(n, int) or isinstance(n, bool) or n < 0:
        raise ValueError("ball level must be a non-negative integer")
    stubs = max(n - 1, 0)
    ball = Hungry(stubs)
    verdict = _classify_report(ball).cb
    if verdict.value != "CB":
        raise CombError("ball identification failed to certify as CB")
    return CBBallCertificate(level=n, teeth=tuple(range(1, n)), ball=ball, verdict=verdict)


def bounded_geometry_witness(
    n: int, family: Sequence[MappingClass], ctx: CombContext
) -> MappingClass:
    """An element of length n + 1 outside every length-n coset of the family.

    Each family member can exclude at most one single-letter word on tooth
    n, so scanning len(family) + 1 candidate letters always succeeds. The
    returned g satisfies length(g) = n + 1 and length(f^-1 g) > n for all f.
    """
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise ValueError(
            "witness level must be a positive integer: no class has length 1"
        )
    fam = list(family)
    for f in fam:
        length(f, ctx)  # validates registration against the context
    inverses = [inverse_class(f) for f in fam]
    for letter in range(1, len(fam) + 2):
        g = word_map(ctx.graph, (letter,), n)
        if all(length(compose(fi, g), ctx) > n for fi in inverses):
            return g
    raise RuntimeError("no witness found among the candidate words")
