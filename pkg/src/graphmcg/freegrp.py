"""Exact free-group machinery.

Reduced words over an indexed basis, Stallings subgroup graphs with folding,
membership, fiber-product intersections, and corank bookkeeping for registered
free factors.

Words are tuples of nonzero ints: ``3`` means ``a3`` and ``-3`` means ``a3``
inverted.  The text syntax uses lowercase for generators and uppercase for
inverses:

    >>> parse_word("a1 A2 a3")
    (1, -2, 3)
    >>> format_word((1, -2, 3))
    'a1 A2 a3'
    >>> rank(subgroup_graph([parse_word("a1 a2"), parse_word("a1 a3")]))
    2

Subgroup graphs are deterministic folded automata.  ``fold`` accepts any
finite labeled graph with a basepoint and returns the folded core, which is
the canonical representative of the subgroup it spans.
"""

from __future__ import annotations

import re
from collections import deque
from dataclasses import dataclass
from itertools import product as iproduct

Word = tuple[int, ...]

IDENTITY: Word = ()


class InvalidElementError(ValueError):
    """A table or word system does not define a free-group automorphism."""


class UnregisteredFactorError(ValueError):
    """A subgroup handle without free-factor provenance was passed to cork."""


# ---------------------------------------------------------------------------
# words


def reduce_word(letters) -> Word:
    out: list[int] = []
    for x in letters:
        if x == 0:
            raise ValueError("letter index 0 is not allowed")
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


def concat(*words: Word) -> Word:
    merged: list[int] = []
    for w in words:
        merged.extend(w)
    return reduce_word(merged)


def inverse(w: Word) -> Word:
    return tuple(-x for x in reversed(w))


def conjugate(c: Word, w: Word) -> Word:
    """c w c^-1, reduced."""
    return concat(c, w, inverse(c))


def letters_of(w: Word) -> set[int]:
    return {abs(x) for x in w}


def apply_map(fn, w: Word) -> Word:
    """Image of w under the endomorphism a_i -> fn(i)."""
    parts: list[int] = []
    for x in w:
        img = fn(abs(x))
        parts.extend(img if x > 0 else inverse(img))
    return reduce_word(parts)


def apply_table(table: dict[int, Word], w: Word) -> Word:
    """Image of w under a_i -> table[i], identity off the table's support."""
    return apply_map(lambda i: table.get(i, (i,)), w)


_TOKEN = re.compile(r"([aA])(\d+)$")


def parse_word(text: str) -> Word:
    """Parse `a1 A1 a2` syntax; `1` or the empty string is the identity."""
    text = text.strip()
    if text in ("", "1"):
        return IDENTITY
    letters = []
    for tok in text.split():
        m = _TOKEN.match(tok)
        if not m or int(m.group(2)) == 0:
            raise ValueError(f"bad word token {tok!r}")
        idx = int(m.group(2))
        letters.append(idx if m.group(1) == "a" else -idx)
    return reduce_word(letters)


def format_word(w: Word) -> str:
    if not w:
        return "1"
    return " ".join(f"a{x}" if x > 0 else f"A{-x}" for x in w)


def _letter_key(x: int) -> tuple[int, int]:
    return (abs(x), 0 if x > 0 else 1)


def shortlex_key(w: Word) -> tuple:
    return (len(w), tuple(_letter_key(x) for x in w))


def cyclic_reduce(w: Word) -> Word:
    while len(w) >= 2 and w[0] == -w[-1]:
        w = w[1:-1]
    return w


# ---------------------------------------------------------------------------
# Stallings graphs

# A folded graph is stored as a transition table: out[v][k] = w means an edge
# labeled a_k from v to w when k > 0, and the reverse direction when k < 0.
# Both directions are always stored, so folded graphs are deterministic
# automata over the symmetrized alphabet.


@dataclass(frozen=True)
class PreGraph:
    """Finite labeled graph with basepoint, not necessarily folded.

    edges: triples (u, k, v) with k > 0, meaning an a_k-edge from u to v.
    Vertex ids are arbitrary hashables.
    """

    edges: tuple[tuple[object, int, object], ...]
    basepoint: object = 0


@dataclass(frozen=True)
class StallingsGraph:
    out: tuple[dict[int, int], ...]
    basepoint: int = 0

    def trace(self, w: Word, start: int | None = None) -> int | None:
        v = self.basepoint if start is None else start
        for x in w:
            nxt = self.out[v].get(x)
            if nxt is None:
                return None
            v = nxt
        return v

    def accepts(self, w: Word) -> bool:
        return self.trace(w) == self.basepoint

    @property
    def num_vertices(self) -> int:
        return len(self.out)

    @property
    def num_edges(self) -> int:
        return sum(1 for trans in self.out for k in trans if k > 0)

    def labels(self) -> set[int]:
        return {k for trans in self.out for k in trans if k > 0}

    def canonical_key(self) -> tuple:
        """Isomorphism invariant: BFS renumbering in label order."""
        order = {self.basepoint: 0}
        queue = [self.basepoint]
        edges = []
        while queue:
            v = queue.pop(0)
            for k in sorted(self.out[v], key=_letter_key):
                w = self.out[v][k]
                if w not in order:
                    order[w] = len(order)
                    queue.append(w)
                edges.append((order[v], k, order[w]))
        return (len(order), tuple(sorted(edges)))

    def to_dot(self) -> str:
        lines = ["digraph stallings {", '  rankdir="LR";']
        for v in range(len(self.out)):
            shape = "doublecircle" if v == self.basepoint else "circle"
            lines.append(f'  n{v} [shape={shape}, label="{v}"];')
        for v, trans in enumerate(self.out):
            for k in sorted(trans, key=_letter_key):
                if k > 0:
                    lines.append(f'  n{v} -> n{trans[k]} [label="a{k}"];')
        lines.append("}")
        return "\n".join(lines)


def _fold_edges(raw_edges, basepoint) -> StallingsGraph:
    verts: dict[object, int] = {}

    def vid(v) -> int:
        if v not in verts:
            verts[v] = len(verts)
        return verts[v]

    base = vid(basepoint)
    edges = [(vid(u), k, vid(v)) for u, k, v in raw_edges]

    parent = list(range(len(verts)))

    def find(v: int) -> int:
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    # out maps representative -> label -> set of representative targets
    out: list[dict[int, set[int]]] = [dict() for _ in range(len(verts))]
    for u, k, v in edges:
        out[u].setdefault(k, set()).add(v)
        out[v].setdefault(-k, set()).add(u)

    def refresh(v: int) -> None:
        new: dict[int, set[int]] = {}
        for k, targets in out[v].items():
            new[k] = {find(t) for t in targets}
        out[v] = new

    while True:
        conflict = None
        for v in range(len(verts)):
            if find(v) != v:
                continue
            refresh(v)
            for k, targets in out[v].items():
                if len(targets) > 1:
                    # refresh already collapsed duplicates, so these are
                    # two genuinely distinct representatives
                    conflict = tuple(sorted(targets)[:2])
                    break
            if conflict:
                break
        if not conflict:
            break
        x, y = conflict
        parent[y] = x
        merged: dict[int, set[int]] = dict(out[x])
        for k, targets in out[y].items():
            merged.setdefault(k, set()).update(targets)
        out[x] = merged
        out[y] = {}

    # collapse to deterministic transition dicts
    reps = sorted({find(v) for v in range(len(verts))})
    index = {r: i for i, r in enumerate(reps)}
    table: list[dict[int, int]] = [dict() for _ in reps]
    for r in reps:
        refresh(r)
        for k, targets in out[r].items():
            (t,) = targets
            table[index[r]][k] = index[t]
    return StallingsGraph(out=tuple(table), basepoint=index[find(base)])


def _core_restrict(g: StallingsGraph) -> StallingsGraph:
    """Trim hanging trees: every vertex must lie on a reduced basepoint loop."""
    alive = set(range(g.num_vertices))
    changed = True
    while changed:
        changed = False
        for v in list(alive):
            if v == g.basepoint:
                continue
            deg = sum(1 for k, w in g.out[v].items() if w in alive)
            if deg <= 1:
                alive.remove(v)
                changed = True
    index = {v: i for i, v in enumerate(sorted(alive))}
    table: list[dict[int, int]] = [dict() for _ in alive]
    for v in alive:
        for k, w in g.out[v].items():
            if w in alive:
                table[index[v]][k] = index[w]
    return StallingsGraph(out=tuple(table), basepoint=index[g.basepoint])


def fold(pre: PreGraph | StallingsGraph) -> StallingsGraph:
    """Fold a finite labeled graph and return its core. Idempotent."""
    if isinstance(pre, StallingsGraph):
        edges = [
            (v, k, w)
            for v, trans in enumerate(pre.out)
            for k, w in trans.items()
            if k > 0
        ]
        return _core_restrict(_fold_edges(edges, pre.basepoint))
    return _core_restrict(_fold_edges(pre.edges, pre.basepoint))


def subgroup_graph(gens) -> StallingsGraph:
    """Folded core graph of the subgroup generated by the given words."""
    edges = []
    for n, raw in enumerate(gens):
        w = reduce_word(raw)
        if not w:
            continue
        prev: object = 0
        for pos, x in enumerate(w):
            nxt: object = 0 if pos == len(w) - 1 else ("g", n, pos)
            if x > 0:
                edges.append((prev, x, nxt))
            else:
                edges.append((nxt, -x, prev))
            prev = nxt
    if not edges:
        return StallingsGraph(out=({},), basepoint=0)
    return _core_restrict(_fold_edges(edges, 0))


def rank(g: StallingsGraph) -> int:
    """First Betti number of the core: E - V + 1."""
    return g.num_edges - g.num_vertices + 1


def member(g: StallingsGraph, w: Word) -> bool:
    return g.accepts(reduce_word(w))


def intersect(g1: StallingsGraph, g2: StallingsGraph) -> StallingsGraph:
    """Folded core of the fiber product at the basepoint pair."""
    start = (g1.basepoint, g2.basepoint)
    seen = {start: 0}
    queue = [start]
    table: list[dict[int, int]] = [dict()]
    while queue:
        v1, v2 = queue.pop(0)
        here = seen[(v1, v2)]
        for k, w1 in g1.out[v1].items():
            w2 = g2.out[v2].get(k)
            if w2 is None:
                continue
            tgt = (w1, w2)
            if tgt not in seen:
                seen[tgt] = len(seen)
                table.append(dict())
                queue.append(tgt)
            table[here][k] = seen[tgt]
    return _core_restrict(StallingsGraph(out=tuple(table), basepoint=0))


def graph_basis(g: StallingsGraph) -> list[Word]:
    """A free basis of the subgroup, one word per non-tree edge."""
    tree_path: dict[int, Word] = {g.basepoint: IDENTITY}
    queue = [g.basepoint]
    tree_edges: set[tuple[int, int, int]] = set()
    while queue:
        v = queue.pop(0)
        for k in sorted(g.out[v], key=_letter_key):
            w = g.out[v][k]
            if w not in tree_path:
                tree_path[w] = tree_path[v] + (k,)
                tree_edges.add((v, abs(k), w) if k > 0 else (w, abs(k), v))
                queue.append(w)
    basis = []
    for v in range(g.num_vertices):
        for k, w in g.out[v].items():
            if k > 0 and (v, k, w) not in tree_edges:
                basis.append(concat(tree_path[v], (k,), inverse(tree_path[w])))
    basis.sort(key=shortlex_key)
    return basis


def isomorphic(g1: StallingsGraph, g2: StallingsGraph) -> bool:
    return g1.canonical_key() == g2.canonical_key()


# ---------------------------------------------------------------------------
# Nielsen reduction with witnesses


def _canonical_row_key(w: Word) -> tuple:
    return min(shortlex_key(w), shortlex_key(inverse(w)))


def _measure(rows) -> tuple:
    total = sum(len(w) for w, _ in rows)
    return (total, tuple(sorted(_canonical_row_key(w) for w, _ in rows)))


def _row_products(rows, i: int, j: int):
    """The eight single-move replacements for row i using row j."""
    wi, ei = rows[i]
    wj, ej = rows[j]
    for si in (1, -1):
        for sj in (1, -1):
            for order in ("ij", "ji"):
                a = (wi, ei) if si == 1 else (inverse(wi), inverse(ei))
                b = (wj, ej) if sj == 1 else (inverse(wj), inverse(ej))
                if order == "ji":
                    a, b = b, a
                yield (concat(a[0], b[0]), concat(a[1], b[1]))


def _state_key(rows) -> tuple:
    return tuple(sorted(min((w, e), (inverse(w), inverse(e))) for w, e in rows))


_PLATEAU_BUDGET = 50000


def _plateau_jump(rows) -> list[tuple[Word, Word]] | None:
    """Search the equal-total-length plateau for a strictly shorter state.

    Every state a non-lengthening reduction can pass through lies on the
    plateau, so a breadth-first sweep finds the next descent whenever one
    exists. Rows forming a basis always admit one until each row is a
    single letter; proper-subgroup plateaus can be huge, hence the budget.
    """
    total = sum(len(w) for w, _ in rows)
    seen = {_state_key(rows)}
    queue = deque([list(rows)])
    while queue:
        state = queue.popleft()
        for i, j in iproduct(range(len(state)), repeat=2):
            if i == j:
                continue
            for cand in _row_products(state, i, j):
                nxt = list(state)
                nxt[i] = cand
                t = sum(len(w) for w, _ in nxt)
                if t < total:
                    return nxt
                if t > total:
                    continue
                key = _state_key(nxt)
                if key not in seen:
                    if len(seen) >= _PLATEAU_BUDGET:
                        raise RuntimeError(
                            "Nielsen plateau search exceeded its budget"
                        )
                    seen.add(key)
                    queue.append(nxt)
    return None


def nielsen_reduce(rows: list[tuple[Word, Word]]) -> list[tuple[Word, Word]]:
    """Nielsen-reduce (word, witness) rows.

    Each row is (w, e) with the invariant phi(e) = w for the ambient system;
    moves preserve it. The measure (total length, shortlex multiset) strictly
    decreases on every applied move, so this terminates. An empty word row
    means the original rows were not independent.
    """
    rows = [(reduce_word(w), reduce_word(e)) for w, e in rows]
    while True:
        current = _measure(rows)
        best = None
        for i, j in iproduct(range(len(rows)), repeat=2):
            if i == j:
                continue
            for cand in _row_products(rows, i, j):
                trial = list(rows)
                trial[i] = cand
                m = _measure(trial)
                if m < current and (best is None or m < best[0]):
                    best = (m, i, cand)
        if best is None:
            return rows
        rows[best[1]] = best[2]


def _reduce_basis_rows(rows: list[tuple[Word, Word]]) -> list[tuple[Word, Word]]:
    """Reduce rows known to form a basis down to single letters.

    The greedy pass alone can in principle stall on an equal-length plateau;
    for a basis a strictly shorter state is always reachable through it, so
    alternate the two until every row is a letter.
    """
    rows = nielsen_reduce(rows)
    while any(len(w) != 1 for w, _ in rows):
        jump = _plateau_jump(rows)
        if jump is None:
            raise RuntimeError("basis rows stalled with no plateau descent")
        rows = nielsen_reduce(jump)
    return rows


def invert_table(table: dict[int, Word]) -> dict[int, Word]:
    """Invert the automorphism a_i -> table[i] (identity off the support).

    Raises InvalidElementError when the table is not an automorphism of the
    free group on the mentioned letters; surjectivity is decided by folding
    the letter images, not by how far the reduction search got. The result
    is verified by composition before being returned.
    """
    support = set(table)
    for w in table.values():
        support |= letters_of(w)
    letters = sorted(support)
    rows = [(reduce_word(table.get(i, (i,))), (i,)) for i in letters]
    image = subgroup_graph([w for w, _ in rows])
    labels = sorted(k for k in image.out[image.basepoint] if k > 0)
    if image.num_vertices != 1 or labels != letters:
        raise InvalidElementError(
            "letter images do not generate the free group on the support"
        )
    rows = _reduce_basis_rows(rows)
    inv: dict[int, Word] = {}
    seen: set[int] = set()
    for w, e in rows:
        k = w[0]
        if abs(k) in seen:
            raise InvalidElementError("table rows are not independent")
        seen.add(abs(k))
        inv[abs(k)] = e if k > 0 else inverse(e)
    if seen != set(letters):
        raise InvalidElementError("table does not span its letter support")
    for i in letters:
        if apply_table(table, inv[i]) != (i,):
            raise InvalidElementError("inversion verification failed")
    trimmed = {i: w for i, w in inv.items() if w != (i,)}
    return trimmed


def is_automorphism_table(table: dict[int, Word]) -> bool:
    try:
        invert_table(table)
        return True
    except InvalidElementError:
        return False


# ---------------------------------------------------------------------------
# registered free factors and corank

# The registry discipline: a FreeFactor is always produced by one of the
# constructors below, so its free-factor status has a provenance. General
# free-factor recognition is out of scope by design.


@dataclass(frozen=True)
class FreeFactor:
    """A registered free factor of a finite-rank window of the ambient group.

    kind: "span" (subgraph-induced basis factor), "image" (automorphism image
    of a registered factor) or "meet" (Kurosh intersection of two registered
    factors).
    """

    kind: str
    gens: tuple[Word, ...]
    provenance: tuple = ()

    def graph(self) -> StallingsGraph:
        return subgroup_graph(self.gens)

    def rank(self) -> int:
        return rank(self.graph())


def factor_from_span(indices) -> FreeFactor:
    gens = tuple((i,) for i in sorted(set(indices)))
    return FreeFactor(kind="span", gens=gens, provenance=tuple(sorted(set(indices))))


def factor_from_aut_image(table: dict[int, Word], factor: FreeFactor) -> FreeFactor:
    if not is_automorphism_table(table):
        raise InvalidElementError("image factor requires an automorphism table")
    gens = tuple(apply_table(table, g) for g in factor.gens)
    return FreeFactor(kind="image", gens=gens, provenance=(factor.kind,))


def factor_meet(f1: FreeFactor, f2: FreeFactor) -> FreeFactor:
    g = intersect(f1.graph(), f2.graph())
    gens = tuple(graph_basis(g))
    return FreeFactor(kind="meet", gens=gens, provenance=(f1.kind, f2.kind))


def cork(big: FreeFactor | None, small: FreeFactor, *, window: FreeFactor | None = None) -> int:
    """Corank of `small` inside `big` (rank difference of free factors).

    `big = None` means the full group on the window letters touched by the
    presentations; pass `window` to widen it explicitly. Raises
    UnregisteredFactorError for handles that did not come from the registry.
    """
    for f in (big, small, window):
        if f is not None and not isinstance(f, FreeFactor):
            raise UnregisteredFactorError(
                "cork needs registered FreeFactor handles; raw subgroups are"
                " rejected because free-factor testing is out of scope"
            )
    if big is None:
        touched: set[int] = set()
        for g in small.gens:
            touched |= letters_of(g)
        if window is not None:
            for g in window.gens:
                touched |= letters_of(g)
        big_rank = len(touched)
    else:
        big_graph = big.graph()
        for g in small.gens:
            if not member(big_graph, g):
                raise UnregisteredFactorError(
                    "small factor is not contained in the big one"
                )
        big_rank = rank(big_graph)
    small_rank = small.rank()
    if small_rank > big_rank:
        raise UnregisteredFactorError("small factor exceeds the declared window")
    return big_rank - small_rank
