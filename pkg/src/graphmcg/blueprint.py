"""Blueprints for locally finite infinite graphs and their end profiles.

A blueprint is a finite symbolic description of a locally finite connected
graph. The grammar:

    FiniteGraph(edges, vertices, root)   any finite connected graph
    LochNess()                           one-ended spine with a loop per step
    Hungry(n)                            LochNess plus n rays at a hub w0
    Millipede()                          a loop and a ray per spine step
    Ladder()                             two-ended spine with a loop per step
    Wedge(left, right)                   roots identified
    Comb(tooth)                          a tooth copy at each spine vertex
    TreeSpray(decoration)                rooted binary tree, decorated

Spines are subdivided: consecutive loop vertices v_i are separated by a
midpoint w_i, so spine steps have length 2. Operations: `check`, lazy
realization via `truncate` (metric ball with stable vertex names and boundary
marks), `end_profile` (structural recursion, no infinite enumeration), DOT
and JSON round trips.

Count scales are represented as plain ints or the strings
"countably-infinite" / "continuum".
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional, Union

ALEPH0 = "countably-infinite"
CONTINUUM = "continuum"

Scale = Union[int, str]


class BlueprintError(ValueError):
    """The term does not describe a valid connected locally finite graph."""


def _scale_ok(s: Scale) -> bool:
    return (isinstance(s, int) and s >= 0) or s in (ALEPH0, CONTINUUM)


def is_infinite(s: Scale) -> bool:
    return s in (ALEPH0, CONTINUUM)


def scale_add(a: Scale, b: Scale) -> Scale:
    for big in (CONTINUUM, ALEPH0):
        if a == big or b == big:
            return big
    return a + b


def scale_at_least_one(s: Scale) -> bool:
    return is_infinite(s) or s >= 1


def scale_sub_finite(a: Scale, n: int) -> Scale:
    """a - n for a finite deduction; infinite scales absorb it."""
    if is_infinite(a):
        return a
    if a < n:
        raise ValueError("negative scale")
    return a - n


# ---------------------------------------------------------------------------
# terms


class Blueprint:
    pass


@dataclass(frozen=True)
class FiniteGraph(Blueprint):
    edges: tuple[tuple[str, str], ...] = ()
    vertices: tuple[str, ...] = ()
    root: Optional[str] = None

    def all_vertices(self) -> tuple[str, ...]:
        seen = list(self.vertices)
        for u, v in self.edges:
            for x in (u, v):
                if x not in seen:
                    seen.append(x)
        return tuple(seen)

    def the_root(self) -> str:
        return self.root if self.root is not None else self.all_vertices()[0]


@dataclass(frozen=True)
class LochNess(Blueprint):
    pass


@dataclass(frozen=True)
class Hungry(Blueprint):
    rays: int = 1


@dataclass(frozen=True)
class Millipede(Blueprint):
    pass


@dataclass(frozen=True)
class Ladder(Blueprint):
    pass


@dataclass(frozen=True)
class Wedge(Blueprint):
    left: Blueprint
    right: Blueprint


@dataclass(frozen=True)
class Comb(Blueprint):
    tooth: Blueprint


@dataclass(frozen=True)
class TreeSpray(Blueprint):
    decoration: Optional[Blueprint] = None


def single_vertex() -> FiniteGraph:
    return FiniteGraph(vertices=("x",))


def loop_graph() -> FiniteGraph:
    return FiniteGraph(edges=(("x", "x"),))


def ray() -> Comb:
    return Comb(single_vertex())


def lasso() -> Wedge:
    return Wedge(loop_graph(), ray())


# ---------------------------------------------------------------------------
# validity


def check(bp: Blueprint) -> None:
    """Raise BlueprintError unless bp is a valid blueprint term."""
    if isinstance(bp, FiniteGraph):
        verts = bp.all_vertices()
        if not verts:
            raise BlueprintError("finite graph needs at least one vertex")
        if bp.root is not None and bp.root not in verts:
            raise BlueprintError(f"root {bp.root!r} is not a vertex")
        for e in bp.edges:
            if len(e) != 2:
                raise BlueprintError(f"bad edge {e!r}")
        # connectivity
        adj: dict[str, set[str]] = {v: set() for v in verts}
        for u, v in bp.edges:
            adj[u].add(v)
            adj[v].add(u)
        seen = {verts[0]}
        stack = [verts[0]]
        while stack:
            for w in adj[stack.pop()]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        if seen != set(verts):
            raise BlueprintError("finite graph is not connected")
    elif isinstance(bp, Hungry):
        if not isinstance(bp.rays, int) or isinstance(bp.rays, bool) or bp.rays < 0:
            raise BlueprintError("Hungry needs a finite ray count >= 0")
    elif isinstance(bp, (LochNess, Millipede, Ladder)):
        pass
    elif isinstance(bp, Wedge):
        check(bp.left)
        check(bp.right)
    elif isinstance(bp, Comb):
        check(bp.tooth)
    elif isinstance(bp, TreeSpray):
        if bp.decoration is not None:
            check(bp.decoration)
    else:
        raise BlueprintError(f"not a blueprint: {bp!r}")


# ---------------------------------------------------------------------------
# lazy models
#
# A model is (root_id, neighbors) where neighbors(v) yields (edge_tag, w)
# for every incident edge; a self loop at v yields (tag, v) once. Vertex ids
# and tags are nested tuples, so they are stable across truncation radii.

Vertex = tuple
Neighbors = Callable[[Vertex], list[tuple[tuple, Vertex]]]


def _spine_with(loop: bool, lowest: int, extra) -> Neighbors:
    """Shared spine v_i / w_i with optional loops at v_i and extra branches.

    extra(v) -> list of (tag, w) appended at any vertex; indices i >= lowest
    for v vertices, w_i sits between v_i and v_{i+1}.
    """

    def nbrs(v: Vertex):
        out = []
        if v[0] == "v":
            i = v[1]
            if loop:
                out.append((("loop", i), v))
            out.append((("sp", i, "r"), ("w", i)))
            if i > lowest:
                out.append((("sp", i - 1, "r2"), ("w", i - 1)))
        elif v[0] == "w":
            i = v[1]
            out.append((("sp", i, "r"), ("v", i)))
            out.append((("sp", i, "r2"), ("v", i + 1)))
        out.extend(extra(v))
        return out

    return nbrs


def _wrap(prefix, sub_root: Vertex, attach: Vertex, nbrs: Neighbors):
    """View a sub-model's vertices under a prefix, gluing its root to attach."""

    def wrap_v(u: Vertex) -> Vertex:
        return attach if u == sub_root else prefix + (u,)

    def wrapped(v: Vertex, original: Vertex | None = None):
        src = original if original is not None else v[-1]
        return [(prefix + (tag,), wrap_v(u)) for tag, u in nbrs(src)]

    return wrap_v, wrapped


def _model(bp: Blueprint) -> tuple[Vertex, Neighbors]:
    if isinstance(bp, FiniteGraph):
        verts = bp.all_vertices()
        edges = bp.edges

        def nbrs(v: Vertex):
            name = v[1]
            out = []
            for k, (a, b) in enumerate(edges):
                if a == name == b:
                    out.append((("e", k), v))
                elif a == name:
                    out.append((("e", k), ("fin", b)))
                elif b == name:
                    out.append((("e", k), ("fin", a)))
            return out

        return ("fin", bp.the_root()), nbrs

    if isinstance(bp, LochNess):
        return ("v", 1), _spine_with(True, 1, lambda v: [])

    if isinstance(bp, Hungry):
        n = bp.rays

        def extra(v: Vertex):
            out = []
            if v == ("v", 1):
                out.append((("hub",), ("h", 0)))
            return out

        spine = _spine_with(True, 1, extra)

        def nbrs(v: Vertex):
            if v[0] == "h":
                out = [(("hub",), ("v", 1))]
                for k in range(1, n + 1):
                    out.append((("ray", k, 0), ("r", k, 1)))
                return out
            if v[0] == "r":
                _, k, j = v
                out = [(("ray", k, j), ("r", k, j + 1))]
                if j > 1:
                    out.append((("ray", k, j - 1), ("r", k, j - 1)))
                else:
                    out.append((("ray", k, 0), ("h", 0)))
                return out
            return spine(v)

        return ("h", 0), nbrs

    if isinstance(bp, Millipede):

        def extra(v: Vertex):
            if v[0] == "w":
                return [(("ray", v[1], 0), ("r", v[1], 1))]
            return []

        spine = _spine_with(True, 1, extra)

        def nbrs(v: Vertex):
            if v[0] == "r":
                _, k, j = v
                out = [(("ray", k, j), ("r", k, j + 1))]
                if j > 1:
                    out.append((("ray", k, j - 1), ("r", k, j - 1)))
                else:
                    out.append((("ray", k, 0), ("w", k)))
                return out
            return spine(v)

        return ("v", 1), nbrs

    if isinstance(bp, Ladder):
        def nbrs(v: Vertex):
            if v[0] == "v":
                i = v[1]
                return [
                    (("loop", i), v),
                    (("sp", i, "r"), ("w", i)),
                    (("sp", i - 1, "r2"), ("w", i - 1)),
                ]
            i = v[1]
            return [(("sp", i, "r"), ("v", i)), (("sp", i, "r2"), ("v", i + 1))]

        return ("v", 0), nbrs

    if isinstance(bp, Wedge):
        lroot, lnbrs = _model(bp.left)
        rroot, rnbrs = _model(bp.right)
        root = ("W",)
        wrap_l, wrapped_l = _wrap(("L",), lroot, root, lnbrs)
        wrap_r, wrapped_r = _wrap(("R",), rroot, root, rnbrs)

        def nbrs(v: Vertex):
            if v == root:
                return wrapped_l(v, lroot) + wrapped_r(v, rroot)
            if v[0] == "L":
                return wrapped_l(v)
            return wrapped_r(v)

        return root, nbrs

    if isinstance(bp, Comb):
        troot, tnbrs = _model(bp.tooth)

        def nbrs(v: Vertex):
            if v[0] == "c":
                k = v[1]
                out = [(("spine", k), ("c", k + 1))]
                if k > 0:
                    out.append((("spine", k - 1), ("c", k - 1)))
                if k >= 1:
                    _, wrapped = _wrap(("t", k), troot, ("c", k), tnbrs)
                    out.extend(wrapped(v, troot))
                return out
            k = v[1]
            _, wrapped = _wrap(("t", k), troot, ("c", k), tnbrs)
            return wrapped(v)

        return ("c", 0), nbrs

    if isinstance(bp, TreeSpray):
        dec = bp.decoration
        droot, dnbrs = (None, None) if dec is None else _model(dec)

        def nbrs(v: Vertex):
            if v[0] == "b":
                s = v[1]
                out = [(("tree", s, c), ("b", s + c)) for c in ("0", "1")]
                if s:
                    out.append((("tree", s[:-1], s[-1]), ("b", s[:-1])))
                if dec is not None:
                    _, wrapped = _wrap(("d", s), droot, ("b", s), dnbrs)
                    out.extend(wrapped(v, droot))
                return out
            s = v[1]
            _, wrapped = _wrap(("d", s), droot, ("b", s), dnbrs)
            return wrapped(v)

        return ("b", ""), nbrs

    raise BlueprintError(f"not a blueprint: {bp!r}")


def _fmt_vertex(v: Vertex) -> str:
    parts = []
    for x in v:
        if x == "fin":
            continue  # finite-graph vertices keep their given names
        if isinstance(x, tuple):
            parts.append(_fmt_vertex(x))
        else:
            parts.append(str(x))
    return ".".join(parts) if parts else "o"


# ---------------------------------------------------------------------------
# truncation


@dataclass(frozen=True)
class Truncation:
    """Metric ball of a blueprint: a finite marked graph.

    boundary lists the vertices where the infinite graph continues beyond
    the ball. Vertex names are stable: growing the radius never renames.
    """

    radius: int
    root: str
    vertices: tuple[str, ...]
    edges: tuple[tuple[str, str, str], ...]
    boundary: tuple[str, ...]

    def loop_edges(self) -> tuple[tuple[str, str, str], ...]:
        return tuple(e for e in self.edges if e[0] == e[1])

    def to_dot(self) -> str:
        lines = ["graph truncation {"]
        for v in self.vertices:
            style = []
            if v == self.root:
                style.append("shape=doublecircle")
            if v in self.boundary:
                style.append("style=dashed")
            suffix = f" [{', '.join(style)}]" if style else ""
            lines.append(f'  "{v}"{suffix};')
        for u, v, _ in self.edges:
            lines.append(f'  "{u}" -- "{v}";')
        lines.append("}")
        return "\n".join(lines)

    def to_json(self) -> dict:
        return {
            "radius": self.radius,
            "root": self.root,
            "vertices": list(self.vertices),
            "edges": [list(e) for e in self.edges],
            "boundary": list(self.boundary),
        }


def truncate(bp: Blueprint, radius: int) -> Truncation:
    check(bp)
    if radius < 0:
        raise BlueprintError("radius must be >= 0")
    root, nbrs = _model(bp)
    dist = {root: 0}
    order = [root]
    queue = [root]
    while queue:
        v = queue.pop(0)
        if dist[v] == radius:
            continue
        for _, w in nbrs(v):
            if w not in dist:
                dist[w] = dist[v] + 1
                order.append(w)
                queue.append(w)
    edges: dict[tuple[str, str, str], None] = {}
    boundary = []
    for v in order:
        fv = _fmt_vertex(v)
        outside = False
        for tag, w in nbrs(v):
            if w in dist:
                fw = _fmt_vertex(w)
                a, b = sorted((fv, fw))
                edges[(a, b, _fmt_vertex(tag))] = None
            else:
                outside = True
        if outside:
            boundary.append(fv)
    return Truncation(
        radius=radius,
        root=_fmt_vertex(root),
        vertices=tuple(_fmt_vertex(v) for v in order),
        edges=tuple(sorted(edges)),
        boundary=tuple(sorted(boundary)),
    )


# ---------------------------------------------------------------------------
# end profiles

# The recursion carries more than the public profile: wedging needs to know
# how the component of the complement of the core that contains the root
# behaves when the root is forced into the core by the ambient graph.


@dataclass(frozen=True)
class _Rec:
    rank: Scale
    ends: Scale
    el: Scale
    discrete: bool            # E minus the loop ends is discrete
    accum: bool               # ... has an accumulation point in itself
    complement_nonempty: bool
    inf_end: Scale            # complement-of-core components with infinitely many ends
    root_in_core: bool
    rc_ends: Scale            # ends of the root's complement component
    root_split_inf: Scale     # infinite-end parts after the root joins the core


def _contribution(x: _Rec) -> Scale:
    """Infinite-end complement components once x hangs off an ambient core."""
    base = scale_sub_finite(
        x.inf_end, 1 if (not x.root_in_core and is_infinite(x.rc_ends)) else 0
    )
    return scale_add(base, 0 if x.root_in_core else x.root_split_inf)


def _finite_graph_rec(bp: FiniteGraph) -> _Rec:
    verts = list(bp.all_vertices())
    rk = len(bp.edges) - len(verts) + 1
    # core = iterated leaf stripping (keeps cycles and their connectors)
    adj: dict[str, list[tuple[int, str]]] = {v: [] for v in verts}
    for k, (u, v) in enumerate(bp.edges):
        adj[u].append((k, v))
        if u != v:
            adj[v].append((k, u))
    alive = set(verts)
    dead_edges: set[int] = set()
    changed = True
    while changed:
        changed = False
        for v in list(alive):
            live = [(k, w) for k, w in adj[v] if w in alive and k not in dead_edges]
            if len(live) <= 1 and not any(w == v for _, w in live):
                if len(live) == 1:
                    dead_edges.add(live[0][0])
                alive.discard(v)
                changed = True
    root_in_core = rk >= 1 and bp.the_root() in alive
    return _Rec(
        rank=rk,
        ends=0,
        el=0,
        discrete=True,
        accum=False,
        complement_nonempty=False,
        inf_end=0,
        root_in_core=root_in_core,
        rc_ends=0,
        root_split_inf=0,
    )


def _rec(bp: Blueprint) -> _Rec:
    if isinstance(bp, FiniteGraph):
        return _finite_graph_rec(bp)
    if isinstance(bp, LochNess):
        return _Rec(ALEPH0, 1, 1, True, False, False, 0, True, 0, 0)
    if isinstance(bp, Hungry):
        n = bp.rays
        return _Rec(ALEPH0, 1 + n, 1, True, False, n >= 1, 0, False, n, 0)
    if isinstance(bp, Millipede):
        return _Rec(ALEPH0, ALEPH0, 1, True, False, True, 0, True, 0, 0)
    if isinstance(bp, Ladder):
        return _Rec(ALEPH0, 2, 2, True, False, False, 0, True, 0, 0)

    if isinstance(bp, Wedge):
        a, b = _rec(bp.left), _rec(bp.right)
        rank = scale_add(a.rank, b.rank)
        ends = scale_add(a.ends, b.ends)
        el = scale_add(a.el, b.el)
        discrete = a.discrete and b.discrete
        accum = a.accum or b.accum
        nonempty = a.complement_nonempty or b.complement_nonempty
        root_in_core = (
            (scale_at_least_one(a.rank) and scale_at_least_one(b.rank))
            or a.root_in_core
            or b.root_in_core
        )
        if root_in_core:
            inf_end = scale_add(_contribution(a), _contribution(b))
            return _Rec(rank, ends, el, discrete, accum, nonempty,
                        inf_end, True, 0, 0)
        rc_ends = scale_add(a.rc_ends, b.rc_ends)
        base = scale_add(
            scale_sub_finite(a.inf_end, 1 if is_infinite(a.rc_ends) else 0),
            scale_sub_finite(b.inf_end, 1 if is_infinite(b.rc_ends) else 0),
        )
        inf_end = scale_add(base, 1 if is_infinite(rc_ends) else 0)
        split = scale_add(a.root_split_inf, b.root_split_inf)
        return _Rec(rank, ends, el, discrete, accum, nonempty,
                    inf_end, False, rc_ends, split)

    if isinstance(bp, Comb):
        t = _rec(bp.tooth)
        spine_el = scale_at_least_one(t.rank)
        ends = 1 if t.ends == 0 else scale_add(ALEPH0, t.ends)
        if spine_el:
            el = (1 if t.el == 0 else scale_add(ALEPH0, t.el))
        else:
            el = 0
        nonempty = t.complement_nonempty or not spine_el
        spine_accumulates = (not spine_el) and t.ends != 0
        discrete = t.discrete and not spine_accumulates
        accum = t.accum or spine_accumulates
        if not spine_el:
            # rank 0: the core is empty and the whole graph is one component
            rank: Scale = 0
            inf_end = 1 if is_infinite(ends) else 0
            return _Rec(rank, ends, el, discrete, accum, nonempty,
                        inf_end, False, ends, 1 if is_infinite(ends) else 0)
        contrib = _contribution(t)
        inf_end = ALEPH0 if scale_at_least_one(contrib) else 0
        return _Rec(ALEPH0, ends, el, discrete, accum, nonempty,
                    inf_end, False, 0, 0)

    if isinstance(bp, TreeSpray):
        if bp.decoration is None:
            return _Rec(0, CONTINUUM, 0, False, True, True, 1, False, CONTINUUM, 2)
        d = _rec(bp.decoration)
        if scale_at_least_one(d.rank):
            contrib = _contribution(d)
            inf_end = ALEPH0 if scale_at_least_one(contrib) else 0
            return _Rec(ALEPH0, CONTINUUM, CONTINUUM, d.discrete, d.accum,
                        d.complement_nonempty, inf_end, True, 0, 0)
        return _Rec(0, CONTINUUM, 0, False, True, True, 1, False, CONTINUUM,
                    scale_add(2, d.root_split_inf))

    raise BlueprintError(f"not a blueprint: {bp!r}")


@dataclass(frozen=True)
class EndProfile:
    """End-space profile of a blueprint.

    rank: first Betti number scale. endCount / elCount: sizes of the end
    space and of the subset of ends accumulated by loops. The two complement
    fields describe the subspace of ends that are not loop ends.
    infiniteEndComponentsOfComplementOfCore counts the components of the
    complement of the core whose own end spaces are infinite.
    """

    rank: Scale
    endCount: Scale
    elCount: Scale
    elComplementDiscrete: bool
    elComplementHasAccumulation: bool
    infiniteEndComponentsOfComplementOfCore: Scale
    isLasso: bool

    def to_json(self) -> dict:
        return {
            "rank": self.rank,
            "endCount": self.endCount,
            "elCount": self.elCount,
            "elComplementDiscrete": self.elComplementDiscrete,
            "elComplementHasAccumulation": self.elComplementHasAccumulation,
            "infiniteEndComponentsOfComplementOfCore":
                self.infiniteEndComponentsOfComplementOfCore,
            "isLasso": self.isLasso,
        }


def end_profile(bp: Blueprint) -> EndProfile:
    check(bp)
    r = _rec(bp)
    if r.discrete == r.accum:
        raise AssertionError("discreteness recursions disagree")
    if not is_infinite(r.ends) and r.complement_nonempty != (r.ends != r.el):
        # in the infinite regime the scales cannot separate ends from loop
        # ends, so only the finite case is checkable against the counts
        raise AssertionError("complement flag disagrees with counts")
    return EndProfile(
        rank=r.rank,
        endCount=r.ends,
        elCount=r.el,
        elComplementDiscrete=r.discrete,
        elComplementHasAccumulation=r.accum,
        infiniteEndComponentsOfComplementOfCore=r.inf_end,
        isLasso=(r.rank == 1 and r.ends == 1),
    )


# ---------------------------------------------------------------------------
# JSON round trip


def to_json(bp: Blueprint) -> dict:
    if isinstance(bp, FiniteGraph):
        return {
            "family": "FiniteGraph",
            "edges": [list(e) for e in bp.edges],
            "vertices": list(bp.vertices),
            "root": bp.root,
        }
    if isinstance(bp, LochNess):
        return {"family": "LochNess"}
    if isinstance(bp, Hungry):
        return {"family": "Hungry", "rays": bp.rays}
    if isinstance(bp, Millipede):
        return {"family": "Millipede"}
    if isinstance(bp, Ladder):
        return {"family": "Ladder"}
    if isinstance(bp, Wedge):
        return {"family": "Wedge", "left": to_json(bp.left), "right": to_json(bp.right)}
    if isinstance(bp, Comb):
        return {"family": "Comb", "tooth": to_json(bp.tooth)}
    if isinstance(bp, TreeSpray):
        dec = bp.decoration
        return {"family": "TreeSpray",
                "decoration": None if dec is None else to_json(dec)}
    raise BlueprintError(f"not a blueprint: {bp!r}")


def from_json(data: dict) -> Blueprint:
    if not isinstance(data, dict) or "family" not in data:
        raise BlueprintError("blueprint json needs a 'family' key")
    fam = data["family"]
    if fam == "FiniteGraph":
        bp: Blueprint = FiniteGraph(
            edges=tuple((str(u), str(v)) for u, v in data.get("edges", [])),
            vertices=tuple(str(v) for v in data.get("vertices", [])),
            root=data.get("root"),
        )
    elif fam == "LochNess":
        bp = LochNess()
    elif fam == "Hungry":
        bp = Hungry(rays=data.get("rays", 1))
    elif fam == "Millipede":
        bp = Millipede()
    elif fam == "Ladder":
        bp = Ladder()
    elif fam == "Wedge":
        bp = Wedge(from_json(data["left"]), from_json(data["right"]))
    elif fam == "Comb":
        bp = Comb(from_json(data["tooth"]))
    elif fam == "TreeSpray":
        dec = data.get("decoration")
        bp = TreeSpray(None if dec is None else from_json(dec))
    else:
        raise BlueprintError(f"unknown blueprint family {fam!r}")
    check(bp)
    return bp


def describe(bp: Blueprint) -> str:
    if isinstance(bp, FiniteGraph):
        return f"FiniteGraph({len(bp.all_vertices())}v,{len(bp.edges)}e)"
    if isinstance(bp, LochNess):
        return "LochNess"
    if isinstance(bp, Hungry):
        return f"Hungry({bp.rays})"
    if isinstance(bp, Millipede):
        return "Millipede"
    if isinstance(bp, Ladder):
        return "Ladder"
    if isinstance(bp, Wedge):
        return f"Wedge({describe(bp.left)}, {describe(bp.right)})"
    if isinstance(bp, Comb):
        return f"Comb({describe(bp.tooth)})"
    if isinstance(bp, TreeSpray):
        dec = bp.decoration
        return f"TreeSpray({'' if dec is None else describe(dec)})"
    return repr(bp)


def enumerate_blueprints(depth: int) -> list[Blueprint]:
    """A finite lattice of blueprint terms, used by sweep tests and demos."""
    atoms: list[Blueprint] = [
        single_vertex(),
        loop_graph(),
        FiniteGraph(edges=(("x", "x"), ("x", "y"), ("y", "y"))),
        LochNess(),
        Hungry(0),
        Hungry(2),
        Millipede(),
        Ladder(),
        TreeSpray(None),
    ]
    levels = [list(atoms)]
    for _ in range(depth):
        prev = levels[-1]
        nxt: list[Blueprint] = []
        for x in prev:
            nxt.append(Comb(x))
            nxt.append(TreeSpray(x))
        for x in prev[: max(4, len(atoms))]:
            for y in atoms[:4]:
                nxt.append(Wedge(x, y))
        levels.append(nxt)
    out: list[Blueprint] = []
    for lv in levels:
        out.extend(lv)
    return out
