"""Proper mapping classes of the standard loop families, in canonical form.

Supported graphs: the one-ended loop spine (LochNess), its hub-with-rays
variant (Hungry), the loop-and-ray spine (Millipede) and the two-ended loop
spine (Ladder). Loops are indexed by positive letters; the Ladder interleaves
its two directions through the codec p >= 0 -> 2p+1, p < 0 -> -2p.

A mapping class is stored in a gauge-fixed normal form:

  shift    a single spine translation power (Ladder only),
  table    finitely many exceptional loop images of the automorphism induced
           far along the designated end,
  omegas   for each non-designated loop end, the eventual conjugator: deep
           in that direction letters map to conj(omega, a_i),
  drags    for each ray direction r, the word sigma_r such that basepoints
           far along r see the table conj(sigma_r) . table.

The designated loop end carries no conjugator by convention; that pins the
data uniquely, so two expressions define the same mapping class exactly when
their normal forms coincide.

Composition is functional: in compose(g, f) and in the expression `g * f`
the factor f acts first. Tables compose as automorphisms, drags by
sigma_{g.f} = sigma_g . g(sigma_f), omegas by omega_{g.f} = g(omega_f) . omega_g.

Atoms:

  W(word, Rk.j)    word map on a slot of ray k, oriented with the far side
                   first: basepoints beyond the slot see conj(word)
  LW(word, k, pre|post)  word map on a slot of loop k: a_k -> w a_k or a_k w;
                   the word must avoid loop k
  PC(word, Sj)     word map on the spine slot between loop j and whatever
                   follows it: letters up to j map to conj(word^-1, a_i) in
                   the normal form, basepoints left of the slot see everything
                   past j conjugated by the word
  LS(n, m1, m2)    swap of two disjoint blocks of n loops
  H(s)             spine translation by s (Ladder only)

Expression syntax: atoms joined with `*`, rightmost factor applied first,
each atom optionally powered with `^`, words in `a1 A2` letters, e.g.

    W(a1 a2, R1.0) * LS(2, 1, 4) * PC(a2, S1)^-1
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Optional

from .freegrp import (
    InvalidElementError,
    Word,
    apply_table,
    concat,
    format_word,
    inverse,
    invert_table,
    letters_of,
    parse_word,
    reduce_word,
)


class UnsupportedElementError(ValueError):
    """The expression leaves the supported element algebra."""


class SlotError(ValueError):
    """The slot or basepoint does not exist on this graph."""


# ---------------------------------------------------------------------------
# graph models


@dataclass(frozen=True)
class GraphModel:
    family: str
    rays: int = 0

    def __post_init__(self):
        if self.family not in ("LochNess", "Hungry", "Millipede", "Ladder"):
            raise SlotError(f"unknown graph family {self.family!r}")
        if self.family != "Hungry" and self.rays:
            raise SlotError("only Hungry takes a ray count")
        if self.family == "Hungry" and self.rays < 0:
            raise SlotError("ray count must be >= 0")

    # loop positions <-> letters
    def enc(self, pos: int) -> int:
        if self.family == "Ladder":
            return 2 * pos + 1 if pos >= 0 else -2 * pos
        if pos < 1:
            raise SlotError(f"no loop at position {pos}")
        return pos

    def dec(self, letter: int) -> int:
        if letter < 1:
            raise SlotError(f"bad loop letter {letter}")
        if self.family == "Ladder":
            return (letter - 1) // 2 if letter % 2 == 1 else -(letter // 2)
        return letter

    @property
    def has_shift(self) -> bool:
        return self.family == "Ladder"

    @property
    def designated_end(self) -> str:
        return "right" if self.family == "Ladder" else "spine"

    @property
    def other_loop_ends(self) -> tuple[str, ...]:
        return ("left",) if self.family == "Ladder" else ()

    def valid_ray(self, k: int) -> bool:
        if self.family == "Hungry":
            return 1 <= k <= self.rays
        if self.family == "Millipede":
            return k >= 1
        return False

    def ray_attach_pos(self, k: int) -> int:
        """Spine position whose segment carries ray k (hub rays sit at 0)."""
        if self.family == "Hungry":
            return 0
        if self.family == "Millipede":
            return k
        raise SlotError(f"{self.family} has no rays")

    def to_json(self) -> dict:
        data = {"family": self.family}
        if self.family == "Hungry":
            data["rays"] = self.rays
        return data


def loch_ness() -> GraphModel:
    return GraphModel("LochNess")


def hungry(rays: int) -> GraphModel:
    return GraphModel("Hungry", rays=rays)


def millipede() -> GraphModel:
    return GraphModel("Millipede")


def ladder() -> GraphModel:
    return GraphModel("Ladder")


_GRAPH_RE = re.compile(r"^\s*(LochNess|Millipede|Ladder)\s*(\(\s*\))?\s*$")
_HUNGRY_RE = re.compile(r"^\s*Hungry\s*\(\s*(\d+)\s*\)\s*$")


def parse_graph(text: str) -> GraphModel:
    m = _GRAPH_RE.match(text)
    if m:
        return GraphModel(m.group(1))
    m = _HUNGRY_RE.match(text)
    if m:
        return GraphModel("Hungry", rays=int(m.group(1)))
    raise SlotError(f"unknown graph {text!r}")


def model_from_json(data: dict) -> GraphModel:
    return GraphModel(data["family"], rays=data.get("rays", 0))


# ---------------------------------------------------------------------------
# loop shift specs

# A loop shift moves an arithmetic subsequence of the spine loops one step
# along itself, fixing every other loop. The subsequence is (stride, offset)
# with positions ≡ offset (mod stride); shifts of one interleaving family
# (equal stride) commute, and their powers form the shift component of the
# normal form.

ShiftVector = tuple[tuple[tuple[int, int], int], ...]  # ((stride, offset), power)


def _shift_vector(entries: dict[tuple[int, int], int]) -> ShiftVector:
    out = {}
    for (stride, offset), t in entries.items():
        if stride < 1:
            raise SlotError("shift stride must be >= 1")
        key = (stride, offset % stride)
        out[key] = out.get(key, 0) + t
    out = {k: t for k, t in out.items() if t}
    strides = {k[0] for k in out}
    if len(strides) > 1:
        raise UnsupportedElementError(
            "loop shifts of different strides do not commute; only one"
            " interleaving family may appear in an element"
        )
    return tuple(sorted(out.items()))


def _shift_add(a: ShiftVector, b: ShiftVector) -> ShiftVector:
    merged: dict[tuple[int, int], int] = dict(a)
    for k, t in b:
        merged[k] = merged.get(k, 0) + t
    return _shift_vector(merged)


def _shift_neg(a: ShiftVector) -> ShiftVector:
    return tuple((k, -t) for k, t in a)


def _shift_pos_map(sv: ShiftVector):
    """Position translation of the shift component (and its inverse)."""
    moves = {offset: stride * t for (stride, offset), t in sv}
    stride = sv[0][0][0] if sv else 1

    def fwd(p: int) -> int:
        return p + moves.get(p % stride, 0)

    def back(p: int) -> int:
        return p - moves.get(p % stride, 0)

    return fwd, back


def _translate_word(graph: GraphModel, w: Word, pos_map) -> Word:
    out = []
    for x in w:
        i = graph.enc(pos_map(graph.dec(abs(x))))
        out.append(i if x > 0 else -i)
    return tuple(out)


# ---------------------------------------------------------------------------
# atoms


@dataclass(frozen=True)
class Atom:
    kind: str          # "W" | "LW" | "PC" | "LS" | "H"
    word: Word = ()
    a: int = 0         # ray index / loop index / block size / shift power
    b: int = 0         # slot position / m1 / stride
    c: int = 0         # m2 / offset
    side: str = ""     # "pre" | "post" for LW
    inv: bool = False  # formal inverse of the recorded atom

    def __str__(self) -> str:
        if self.kind == "W":
            base = f"W({format_word(self.word)}, R{self.a}.{self.b})"
        elif self.kind == "LW":
            base = f"LW({format_word(self.word)}, {self.a}, {self.side})"
        elif self.kind == "PC":
            base = f"PC({format_word(self.word)}, S{self.b})"
        elif self.kind == "LS":
            base = f"LS({self.a}, {self.b}, {self.c})"
        elif self.b == 1:
            base = f"H({self.a:+d})"
        else:
            base = f"H({self.a:+d}, stride={self.b}, offset={self.c})"
        return base + ("^-1" if self.inv else "")


# ---------------------------------------------------------------------------
# mapping classes


def _freeze(d: dict) -> tuple:
    return tuple(sorted(d.items()))


def _thaw(t: tuple) -> dict:
    return dict(t)


@dataclass(frozen=True)
class MappingClass:
    """Normal form of a proper mapping class. Equality is data equality.

    The expression history in `atoms` is carried along for expression-level
    basepoint tables and display; it does not enter equality.
    """

    graph: GraphModel
    table: tuple[tuple[int, Word], ...] = ()
    omegas: tuple[tuple[str, Word], ...] = ()
    drags: tuple[tuple[str, Word], ...] = ()
    shift: ShiftVector = ()
    atoms: tuple[Atom, ...] = field(default=(), compare=False)

    def core_aut(self) -> dict[int, Word]:
        return _thaw(self.table)

    def omega_of(self, end: str) -> Word:
        return _thaw(self.omegas).get(end, ())

    def drag_of(self, ray: str) -> Word:
        return _thaw(self.drags).get(ray, ())

    def is_identity(self) -> bool:
        return not self.table and not self.omegas and not self.drags and not self.shift

    # the induced automorphism far along the designated end (shift extracted)
    def letter_image(self, i: int) -> Word:
        t = _thaw(self.table)
        if i in t:
            return t[i]
        if self.graph.family == "Ladder" and self.graph.dec(i) < 0:
            om = self.omega_of("left")
            if om:
                return concat(om, (i,), inverse(om))
        return (i,)

    def apply(self, w: Word) -> Word:
        parts: list[int] = []
        for x in w:
            img = self.letter_image(abs(x))
            parts.extend(img if x > 0 else inverse(img))
        return reduce_word(parts)

    def __str__(self) -> str:
        if not self.atoms:
            return "1"
        # application order is right to left in display
        return " * ".join(str(a) for a in reversed(self.atoms))

    def to_json(self) -> dict:
        multi = {}
        for end, w in self.omegas:
            multi[end] = format_word(w)
        for ray, w in self.drags:
            multi[ray] = format_word(w)
        return {
            "graph": self.graph.to_json(),
            "coreAut": {str(i): format_word(w) for i, w in self.table},
            "multiWord": multi,
            "shiftPowers": [
                {"stride": k, "offset": o, "power": t}
                for (k, o), t in self.shift
            ],
            "expression": str(self),
        }


def identity(graph: GraphModel) -> MappingClass:
    return MappingClass(graph=graph)


def _default_image(graph: GraphModel, omegas: dict[str, Word], i: int) -> Word:
    if graph.family == "Ladder" and graph.dec(i) < 0:
        om = omegas.get("left", ())
        if om:
            return concat(om, (i,), inverse(om))
    return (i,)


def _make(graph: GraphModel, table: dict[int, Word], omegas: dict[str, Word],
          drags: dict[str, Word], shift: ShiftVector,
          atoms: tuple[Atom, ...]) -> MappingClass:
    """Canonicalize: reduce words, drop defaults, freeze."""
    omegas = {e: reduce_word(w) for e, w in omegas.items() if reduce_word(w)}
    table = {i: reduce_word(w) for i, w in table.items()}
    table = {i: w for i, w in table.items()
             if w != _default_image(graph, omegas, i)}
    drags = {r: reduce_word(w) for r, w in drags.items() if reduce_word(w)}
    if shift and not graph.has_shift:
        raise UnsupportedElementError(f"{graph.family} has no spine shifts")
    return MappingClass(
        graph=graph,
        table=_freeze(table),
        omegas=_freeze(omegas),
        drags=_freeze(drags),
        shift=shift,
        atoms=atoms,
    )


# --- atom constructors ------------------------------------------------------


def _check_letters(graph: GraphModel, w: Word) -> None:
    for i in letters_of(w):
        graph.dec(i)  # raises on invalid letters


def word_map(graph: GraphModel, w, ray: int, pos: int = 0) -> MappingClass:
    """W(w, R<ray>.<pos>): word map on a slot of the given ray."""
    w = parse_word(w) if isinstance(w, str) else reduce_word(w)
    _check_letters(graph, w)
    if not graph.valid_ray(ray):
        raise SlotError(f"{graph.family} has no ray R{ray}")
    if pos < 0:
        raise SlotError("ray slot position must be >= 0")
    atom = Atom("W", word=w, a=ray, b=pos)
    return _make(graph, {}, {}, {f"R{ray}": w}, (), (atom,))


def loop_word(graph: GraphModel, w, k: int, side: str) -> MappingClass:
    """LW(w, k, pre|post): word map on a slot of loop k."""
    w = parse_word(w) if isinstance(w, str) else reduce_word(w)
    _check_letters(graph, w)
    graph.dec(k)
    if side not in ("pre", "post"):
        raise SlotError("loop slot side must be pre or post")
    if k in letters_of(w):
        raise SlotError(f"loop slot word must avoid its own loop a{k}")
    image = concat(w, (k,)) if side == "pre" else concat((k,), w)
    atom = Atom("LW", word=w, a=k, side=side)
    return _make(graph, {k: image}, {}, {}, (), (atom,))


def partial_conj(graph: GraphModel, w, j: int) -> MappingClass:
    """PC(w, Sj): word map on the spine slot following loop j.

    Basepoints left of the slot see the partial conjugation a_i -> w a_i w^-1
    for i past the slot; the normal form records the complementary twist.
    """
    w = parse_word(w) if isinstance(w, str) else reduce_word(w)
    _check_letters(graph, w)
    winv = inverse(w)
    table: dict[int, Word] = {}
    omegas: dict[str, Word] = {}
    drags: dict[str, Word] = {}
    if graph.family == "Ladder":
        omegas["left"] = winv
        if j >= 0:
            for p in range(0, j + 1):
                table[graph.enc(p)] = concat(winv, (graph.enc(p),), w)
        else:
            for p in range(j + 1, 0):
                table[graph.enc(p)] = (graph.enc(p),)
    else:
        if j < 0:
            raise SlotError("spine slot must be >= 0")
        for i in range(1, j + 1):
            table[i] = concat(winv, (i,), w)
        if graph.family == "Hungry":
            for k in range(1, graph.rays + 1):
                drags[f"R{k}"] = w
        elif graph.family == "Millipede":
            for k in range(1, j):
                drags[f"R{k}"] = w
    atom = Atom("PC", word=w, b=j)
    # slot-crossing words give proper-map classes that need not invert;
    # construction stays permissive, inverse_class raises on those
    return _make(graph, table, omegas, drags, (), (atom,))


def loop_swap(graph: GraphModel, n: int, m1: int, m2: int) -> MappingClass:
    """LS(n, m1, m2): swap the loop blocks [m1, m1+n) and [m2, m2+n)."""
    if n < 1:
        raise SlotError("block size must be >= 1")
    if m1 < 1 or m2 < 1:
        raise SlotError("block starts must be valid letters")
    if m2 - m1 < n:
        raise SlotError("loop swap blocks must be disjoint (m2 - m1 >= n)")
    table: dict[int, Word] = {}
    for t in range(n):
        table[m1 + t] = (m2 + t,)
        table[m2 + t] = (m1 + t,)
    atom = Atom("LS", a=n, b=m1, c=m2)
    return _make(graph, table, {}, {}, (), (atom,))


def shift(graph: GraphModel, s: int, stride: int = 1, offset: int = 0) -> MappingClass:
    """H(s, stride, offset): loop shift by s steps along an arithmetic
    subsequence of the spine loops (Ladder only)."""
    if not graph.has_shift:
        raise UnsupportedElementError(f"{graph.family} has no spine shifts")
    sv = _shift_vector({(stride, offset): s})
    atom = Atom("H", a=s, b=stride, c=offset % stride)
    return _make(graph, {}, {}, {}, sv, (atom,))


# --- composition, inversion, equality ---------------------------------------


def _window_letters(*parts: MappingClass) -> set[int]:
    letters: set[int] = set()
    for g in parts:
        for i, w in g.table:
            letters.add(i)
            letters |= letters_of(w)
        for _, w in g.omegas:
            letters |= letters_of(w)
        for _, w in g.drags:
            letters |= letters_of(w)
    return letters


def _shift_conjugate(g: MappingClass, sv: ShiftVector) -> MappingClass:
    """H^-1 g H for the shift component H given by sv: relabel the data."""
    if not sv or g.graph.family != "Ladder":
        return g
    gr = g.graph
    fwd, back = _shift_pos_map(sv)
    rows = _thaw(g.table)
    # letters that change sides pick up or lose the omega default, so their
    # rows must be written out before relabeling
    stride = sv[0][0][0]
    for (_, offset), t in sv:
        lo, hi = (0, stride * t) if t > 0 else (stride * t, 0)
        for p in range(lo, hi):
            if p % stride != offset:
                continue
            i = gr.enc(p)
            if i not in rows:
                rows[i] = g.letter_image(i)
    table = {gr.enc(back(gr.dec(i))): _translate_word(gr, w, back)
             for i, w in rows.items()}
    omegas = {e: _translate_word(gr, w, back) for e, w in g.omegas}
    return _make(gr, table, omegas, _thaw(g.drags), g.shift, g.atoms)


def compose(g: MappingClass, f: MappingClass) -> MappingClass:
    """g after f: the rightmost factor acts first."""
    if g.graph != f.graph:
        raise UnsupportedElementError("cannot compose classes on different graphs")
    graph = g.graph
    gc = _shift_conjugate(g, f.shift)
    new_shift = _shift_add(g.shift, f.shift)

    omegas: dict[str, Word] = {}
    for e in graph.other_loop_ends:
        om = concat(gc.apply(f.omega_of(e)), gc.omega_of(e))
        if om:
            omegas[e] = om

    table: dict[int, Word] = {}
    for i in _window_letters(gc, f):
        table[i] = gc.apply(f.letter_image(i))

    drags: dict[str, Word] = {}
    for r in {r for r, _ in gc.drags} | {r for r, _ in f.drags}:
        sigma = concat(gc.drag_of(r), gc.apply(f.drag_of(r)))
        if sigma:
            drags[r] = sigma

    return _make(graph, table, omegas, drags, new_shift, f.atoms + gc.atoms)


def _checked_inverse_data(g: MappingClass) -> MappingClass:
    """Inverse of the shift-free data, verified by composing both ways."""
    u = MappingClass(graph=g.graph, table=g.table, omegas=g.omegas,
                     drags=g.drags, shift=())
    window = _window_letters(u)
    full = {i: u.letter_image(i) for i in window}
    beta = invert_table(full) if full else {}

    def b_apply(w: Word) -> Word:
        return apply_table(beta, w)

    omegas = {e: b_apply(inverse(w)) for e, w in u.omegas}
    drags = {r: b_apply(inverse(w)) for r, w in u.drags}
    table = {i: b_apply((i,)) for i in window}
    u_inv = _make(g.graph, table, omegas, drags, (), ())
    for prod in (compose(u, u_inv), compose(u_inv, u)):
        if not prod.is_identity():
            raise InvalidElementError("inversion verification failed")
    return u_inv


def inverse_class(g: MappingClass) -> MappingClass:
    u_inv = _checked_inverse_data(g)
    u_inv = _shift_conjugate(u_inv, _shift_neg(g.shift))
    atoms = tuple(_atom_inverse(a) for a in reversed(g.atoms))
    return MappingClass(graph=g.graph, table=u_inv.table, omegas=u_inv.omegas,
                        drags=u_inv.drags, shift=_shift_neg(g.shift),
                        atoms=atoms)


def _atom_inverse(atom: Atom) -> Atom:
    if atom.kind == "LS":
        return atom  # involution
    if atom.kind == "H":
        return Atom("H", a=-atom.a, b=atom.b, c=atom.c)
    if atom.kind == "W":
        return Atom("W", word=inverse(atom.word), a=atom.a, b=atom.b,
                    inv=atom.inv)
    if atom.kind == "LW":
        # a_k -> w a_k inverts to a_k -> w^-1 a_k at the same slot
        return Atom("LW", word=inverse(atom.word), a=atom.a, side=atom.side,
                    inv=atom.inv)
    # PC: exact inverse atom for one-sided words, formal marker otherwise
    return Atom("PC", word=atom.word, b=atom.b, inv=not atom.inv)


def power(g: MappingClass, n: int) -> MappingClass:
    if n == 0:
        return identity(g.graph)
    base = g if n > 0 else inverse_class(g)
    out = base
    for _ in range(abs(n) - 1):
        out = compose(out, base)
    return out


def shift_position_map(g: MappingClass, lo: int, hi: int) -> dict[int, int]:
    """Action of the shift component on spine loop positions lo..hi."""
    fwd, _ = _shift_pos_map(g.shift)
    return {p: fwd(p) for p in range(lo, hi + 1)}


def same_class(f: MappingClass, g: MappingClass) -> bool:
    return (
        f.graph == g.graph
        and f.table == g.table
        and f.omegas == g.omegas
        and f.drags == g.drags
        and f.shift == g.shift
    )


# ---------------------------------------------------------------------------
# expression parser

_FACTOR_RE = re.compile(
    r"^\s*(?:(1)|(W|LW|PC|LS|H)\s*\(([^()]*)\))\s*(?:\^\s*(-?\d+))?\s*$"
)
_RAY_SLOT_RE = re.compile(r"^R(\d+)\.(\d+)$")
_SPINE_SLOT_RE = re.compile(r"^S(-?\d+)$")


def _parse_factor(graph: GraphModel, text: str) -> MappingClass:
    m = _FACTOR_RE.match(text)
    if not m:
        raise SlotError(f"cannot parse factor {text!r}")
    if m.group(1):
        return identity(graph)
    kind, argtext, exp = m.group(2), m.group(3), m.group(4)
    args = [a.strip() for a in argtext.split(",")] if argtext.strip() else []
    if kind == "W":
        if len(args) != 2:
            raise SlotError(f"W needs a word and a ray slot: {text!r}")
        slot = _RAY_SLOT_RE.match(args[1])
        if not slot:
            raise SlotError(f"bad ray slot {args[1]!r}")
        out = word_map(graph, args[0], int(slot.group(1)), int(slot.group(2)))
    elif kind == "LW":
        if len(args) != 3:
            raise SlotError(f"LW needs a word, a loop and a side: {text!r}")
        out = loop_word(graph, args[0], int(args[1]), args[2])
    elif kind == "PC":
        if len(args) != 2:
            raise SlotError(f"PC needs a word and a spine slot: {text!r}")
        slot = _SPINE_SLOT_RE.match(args[1])
        if not slot:
            raise SlotError(f"bad spine slot {args[1]!r}")
        out = partial_conj(graph, args[0], int(slot.group(1)))
    elif kind == "LS":
        if len(args) != 3:
            raise SlotError(f"LS needs three integers: {text!r}")
        out = loop_swap(graph, int(args[0]), int(args[1]), int(args[2]))
    else:
        if not args:
            raise SlotError(f"H needs a power: {text!r}")
        try:
            s = int(args[0])
        except ValueError:
            raise SlotError(f"bad shift power {args[0]!r}") from None
        stride, offset = 1, 0
        for extra in args[1:]:
            m2 = re.match(r"^(stride|offset)\s*=\s*(-?\d+)$", extra)
            if not m2:
                raise SlotError(f"bad shift argument {extra!r}")
            if m2.group(1) == "stride":
                stride = int(m2.group(2))
            else:
                offset = int(m2.group(2))
        out = shift(graph, s, stride=stride, offset=offset)
    if exp is not None:
        out = power(out, int(exp))
    return out


def _split_factors(text: str) -> list[str]:
    parts = []
    depth = 0
    cur: list[str] = []
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
            if depth < 0:
                raise SlotError("unbalanced parentheses")
        if ch == "*" and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    if depth != 0:
        raise SlotError("unbalanced parentheses")
    parts.append("".join(cur))
    return parts


def parse_element(graph: GraphModel, text: str) -> MappingClass:
    """Parse an expression; factors apply right to left."""
    text = text.strip()
    if not text:
        raise SlotError("empty expression")
    out = identity(graph)
    for ftext in _split_factors(text):
        out = compose(out, _parse_factor(graph, ftext))
    return out


def normalize(graph: GraphModel, text: str) -> MappingClass:
    """Parse and return the canonical form of an expression."""
    return parse_element(graph, text)


# ---------------------------------------------------------------------------
# basepoint tables

# Induced automorphism tables are expression level at vertices: the literal
# table of the recorded representative at that basepoint. At family basepoints
# (the ends) they come from the canonical data transported by the recorded
# conjugators; the two agree, which the tests cross-check.


@dataclass(frozen=True)
class InducedAut:
    """A free-group automorphism with per-end conjugation defaults."""

    graph: GraphModel
    exceptions: tuple[tuple[int, Word], ...]
    end_conj: tuple[tuple[str, Word], ...]

    def letter_image(self, i: int) -> Word:
        exc = _thaw(self.exceptions)
        if i in exc:
            return exc[i]
        ends = _thaw(self.end_conj)
        if self.graph.family == "Ladder":
            side = "right" if self.graph.dec(i) >= 0 else "left"
        else:
            side = "spine"
        om = ends.get(side, ())
        if om:
            return concat(om, (i,), inverse(om))
        return (i,)

    def apply(self, w: Word) -> Word:
        parts: list[int] = []
        for x in w:
            img = self.letter_image(abs(x))
            parts.extend(img if x > 0 else inverse(img))
        return reduce_word(parts)

    def to_json(self) -> dict:
        return {
            "exceptions": {str(i): format_word(w) for i, w in self.exceptions},
            "endConjugators": {e: format_word(w) for e, w in self.end_conj},
        }


def _induced(graph: GraphModel, exc: dict[int, Word],
             ends: dict[str, Word]) -> InducedAut:
    ends = {e: reduce_word(w) for e, w in ends.items() if reduce_word(w)}
    probe = InducedAut(graph=graph, exceptions=(), end_conj=_freeze(ends))
    exc = {i: reduce_word(w) for i, w in exc.items()}
    exc = {i: w for i, w in exc.items() if w != probe.letter_image(i)}
    return InducedAut(graph=graph, exceptions=_freeze(exc), end_conj=_freeze(ends))


_BP_V = re.compile(r"^v(-?\d+)$")
_BP_RAY = re.compile(r"^R(\d+)\.(\d+)$")
_BP_END = re.compile(r"^end:(.+)$")


@dataclass(frozen=True)
class Basepoint:
    kind: str          # "root" | "v" | "ray" | "end"
    a: int = 0         # spine pos / ray index
    b: int = 0         # ray vertex position
    end: str = ""


def parse_basepoint(graph: GraphModel, text: str) -> Basepoint:
    text = text.strip()
    if text == "root":
        return Basepoint("root")
    m = _BP_V.match(text)
    if m:
        pos = int(m.group(1))
        graph.enc(pos)
        return Basepoint("v", a=pos)
    m = _BP_RAY.match(text)
    if m:
        k = int(m.group(1))
        if not graph.valid_ray(k):
            raise SlotError(f"{graph.family} has no ray R{k}")
        return Basepoint("ray", a=k, b=int(m.group(2)))
    m = _BP_END.match(text)
    if m:
        name = m.group(1)
        if name == graph.designated_end or name in graph.other_loop_ends:
            return Basepoint("end", end=name)
        rm = re.match(r"^R(\d+)$", name)
        if rm and graph.valid_ray(int(rm.group(1))):
            return Basepoint("end", a=int(rm.group(1)), end=name)
        raise SlotError(f"{graph.family} has no end {name!r}")
    raise SlotError(f"cannot parse basepoint {text!r}")


def _pc_side_of(graph: GraphModel, bp: Basepoint, j: int) -> str:
    """Which side of the spine slot Sj a basepoint sits on."""
    if bp.kind == "root":
        return "left"
    if bp.kind == "v":
        return "left" if bp.a <= j else "right"
    if bp.kind == "ray" or (bp.kind == "end" and bp.end.startswith("R")):
        if graph.family == "Hungry":
            return "left"
        return "left" if graph.ray_attach_pos(bp.a) < j else "right"
    if bp.end == "left":
        return "left"
    return "right"  # designated end


def _w_beyond(graph: GraphModel, bp: Basepoint, ray: int, pos: int) -> bool:
    """Is the basepoint past the ray slot (so it sees the conjugation)?"""
    if bp.kind == "ray" and bp.a == ray:
        return bp.b > pos
    if bp.kind == "end" and bp.end == f"R{ray}":
        return True
    return False


def _atom_table(graph: GraphModel, atom: Atom, bp: Basepoint) -> InducedAut:
    exc: dict[int, Word] = {}
    ends: dict[str, Word] = {}
    if atom.kind == "W":
        if _w_beyond(graph, bp, atom.a, atom.b):
            # everything on the core side is conjugated by the word
            ends["spine"] = atom.word
    elif atom.kind == "LW":
        w = atom.word
        exc[atom.a] = concat(w, (atom.a,)) if atom.side == "pre" else concat((atom.a,), w)
    elif atom.kind == "LS":
        for t in range(atom.a):
            exc[atom.b + t] = (atom.c + t,)
            exc[atom.c + t] = (atom.b + t,)
    elif atom.kind == "H":
        raise UnsupportedElementError(
            "vertex tables of shifts are not letter tables; compare the"
            " canonical forms instead"
        )
    elif atom.kind == "PC":
        j = atom.b
        w = atom.word
        side = _pc_side_of(graph, bp, j)
        if side == "left":
            # everything past the slot is conjugated by w
            if graph.family == "Ladder":
                ends["right"] = w
                if j >= 0:
                    for p in range(0, j + 1):
                        exc[graph.enc(p)] = (graph.enc(p),)
                else:
                    for p in range(j + 1, 0):
                        exc[graph.enc(p)] = concat(w, (graph.enc(p),), inverse(w))
            else:
                ends["spine"] = w
                for i in range(1, j + 1):
                    exc[i] = (i,)
        else:
            winv = inverse(w)
            if graph.family == "Ladder":
                ends["left"] = winv
                if j >= 0:
                    for p in range(0, j + 1):
                        exc[graph.enc(p)] = concat(winv, (graph.enc(p),), w)
                else:
                    for p in range(j + 1, 0):
                        exc[graph.enc(p)] = (graph.enc(p),)
            else:
                for i in range(1, j + 1):
                    exc[i] = concat(winv, (i,), w)
    out = _induced(graph, exc, ends)
    if atom.inv:
        out = _invert_induced(out)
    return out


def _invert_induced(t: InducedAut) -> InducedAut:
    letters: set[int] = set()
    for i, w in t.exceptions:
        letters.add(i)
        letters |= letters_of(w)
    for _, w in t.end_conj:
        letters |= letters_of(w)
    full = {i: t.letter_image(i) for i in letters}
    beta = invert_table(full) if full else {}
    ends = {e: apply_table(beta, inverse(w)) for e, w in t.end_conj}
    exc = {i: apply_table(beta, (i,)) for i in letters}
    return _induced(t.graph, exc, ends)


def _compose_induced(g: InducedAut, f: InducedAut) -> InducedAut:
    """g after f on literal tables."""
    graph = g.graph
    letters: set[int] = set()
    for t in (g.exceptions, f.exceptions):
        for i, w in t:
            letters.add(i)
            letters |= letters_of(w)
    for t in (g.end_conj, f.end_conj):
        for _, w in t:
            letters |= letters_of(w)
    ends: dict[str, Word] = {}
    for e in {e for e, _ in g.end_conj} | {e for e, _ in f.end_conj}:
        ends[e] = concat(g.apply(_thaw(f.end_conj).get(e, ())),
                         _thaw(g.end_conj).get(e, ()))
    exc = {i: g.apply(f.letter_image(i)) for i in letters}
    return _induced(graph, exc, ends)


def induced_aut(g: MappingClass, basepoint: str) -> InducedAut:
    """Induced fundamental-group table at a basepoint.

    Vertex basepoints give the literal table of the recorded expression;
    family basepoints (ends) give the canonical transported table.
    """
    bp = parse_basepoint(g.graph, basepoint)
    if bp.kind == "end":
        return _canonical_end_table(g, bp)
    if g.shift:
        raise UnsupportedElementError(
            "vertex tables are only defined for shift-free expressions"
        )
    out = InducedAut(graph=g.graph, exceptions=(), end_conj=())
    for atom in g.atoms:
        out = _compose_induced(_atom_table(g.graph, atom, bp), out)
    return out


def _canonical_end_table(g: MappingClass, bp: Basepoint) -> InducedAut:
    if g.shift:
        raise UnsupportedElementError(
            "end tables are only defined for shift-free elements"
        )
    graph = g.graph
    if bp.end == graph.designated_end:
        c: Word = ()
    elif bp.end in graph.other_loop_ends:
        c = inverse(g.omega_of(bp.end))
    else:
        c = g.drag_of(bp.end)
    # the far table at this basepoint is conj(c) . table
    letters = _window_letters(g) | letters_of(c)
    ends: dict[str, Word] = {}
    main = graph.designated_end if graph.family != "Ladder" else "right"
    if c:
        ends[main] = c
    for e in graph.other_loop_ends:
        ends[e] = concat(c, g.omega_of(e))
    exc = {i: concat(c, g.letter_image(i), inverse(c)) for i in letters}
    return _induced(graph, exc, ends)
