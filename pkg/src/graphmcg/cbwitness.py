"""Boundedness witnesses: short factorizations over F and a window stabilizer.

On the single-loop-end families every class factors as a product of at most
`bound` blocks, each one element of a small finite set F followed by an
element of the stabilizer V_K of the loop window K = [v1, vn].  The
factorizations built here carry machine-checkable certificates: membership
in F is an index into the recorded set, membership in V_K is re-derived
from the canonical data alone, and `verify` recombines the factors through
the element algebra and compares against the target.
"""

from __future__ import annotations

from dataclasses import dataclass

from .freegrp import (
    InvalidElementError,
    Word,
    concat,
    format_word,
    inverse,
    letters_of,
    parse_word,
    reduce_word,
)
from .mcg import (
    GraphModel,
    MappingClass,
    UnsupportedElementError,
    compose,
    identity,
    inverse_class,
    loop_swap,
    loop_word,
    parse_basepoint,
    same_class,
    word_map,
)

_WINDOW_FAMILIES = ("LochNess", "Hungry", "Millipede")


class CertificateError(ValueError):
    """A factorization or certificate failed verification."""


def _check_window(graph: GraphModel, n: int) -> None:
    if graph.family not in _WINDOW_FAMILIES:
        raise UnsupportedElementError(
            f"{graph.family} admits no bounded witness window")
    if not isinstance(n, int) or n < 1:
        raise UnsupportedElementError("window must contain at least one loop")


# ---------------------------------------------------------------------------
# permutation warm-up: bijections of the positive integers with finite support

Perm = dict[int, int]
PermPairs = tuple[tuple[int, int], ...]


def perm_normalize(p) -> Perm:
    out: Perm = {}
    for k, v in dict(p).items():
        k, v = int(k), int(v)
        if k < 1 or v < 1:
            raise CertificateError("permutations act on the positive integers")
        if k != v:
            out[k] = v
    if set(out.values()) != set(out.keys()):
        raise CertificateError("not a finitely supported bijection")
    return out


def perm_apply(p: Perm, i: int) -> int:
    return p.get(i, i)


def perm_compose(g, f) -> Perm:
    """g after f: the rightmost factor acts first."""
    g, f = perm_normalize(g), perm_normalize(f)
    out: Perm = {}
    for i in set(g) | set(f):
        j = perm_apply(g, perm_apply(f, i))
        if j != i:
            out[i] = j
    return out


def perm_inverse(p) -> Perm:
    return {v: k for k, v in perm_normalize(p).items()}


def perm_support(p: Perm) -> set[int]:
    return set(perm_normalize(p))


def _freeze_perm(p: Perm) -> PermPairs:
    return tuple(sorted(perm_normalize(p).items()))


@dataclass(frozen=True)
class PermFactorization:
    """Product of window-fixing permutations and copies of the block swap f."""

    target: PermPairs
    window: int
    f: PermPairs
    g: PermPairs
    u: PermPairs
    nu: PermPairs
    factors: tuple[tuple[PermPairs, str], ...]
    power: int

    def verify(self) -> bool:
        prod: Perm = {}
        for pairs, tag in self.factors:
            p = dict(pairs)
            if tag == "inF":
                if p != dict(self.f):
                    raise CertificateError("factor is not the registered swap")
            elif tag == "inVK":
                moved = [i for i in range(1, self.window + 1)
                         if perm_apply(p, i) != i]
                if moved:
                    raise CertificateError(
                        f"stabilizer factor moves window point {moved[0]}")
            else:
                raise CertificateError(f"unknown factor tag {tag!r}")
            prod = perm_compose(prod, p)
        if prod != dict(self.target):
            raise CertificateError("factors do not recombine to the target")
        if self.power != achieved_power([t for _, t in self.factors]):
            raise CertificateError("declared power does not match the factors")
        if self.power > 3:
            raise CertificateError("power exceeds the symmetric group bound")
        return True

    def to_json(self) -> dict:
        return {
            "target": [list(x) for x in self.target],
            "window": self.window,
            "f": [list(x) for x in self.f],
            "factors": [
                {"perm": [list(x) for x in pairs], "tag": tag}
                for pairs, tag in self.factors
            ],
            "power": self.power,
            "bound": 3,
        }


def sinfty_factorize(sigma, n: int) -> PermFactorization:
    """Factor a finitely supported bijection over {f} and the window fixers."""
    if not isinstance(n, int) or n < 1:
        raise CertificateError("window must contain at least one point")
    sigma = perm_normalize(sigma)
    f: Perm = {}
    for i in range(1, n + 1):
        f[i], f[n + i] = n + i, i
    u = perm_inverse(sigma)
    m = max(perm_support(u) | {2 * n})
    g: Perm = {}
    for i in range(n + 1, 2 * n + 1):
        g[i], g[m + i - n] = m + i - n, i
    nu = perm_compose(f, perm_compose(g, perm_compose(u, perm_compose(g, f))))
    if any(perm_apply(nu, i) != i for i in range(1, n + 1)):
        raise CertificateError("conjugated correction fails to fix the window")
    if sigma:
        factors = (
            (_freeze_perm(g), "inVK"),
            (_freeze_perm(f), "inF"),
            (_freeze_perm(perm_inverse(nu)), "inVK"),
            (_freeze_perm(f), "inF"),
            (_freeze_perm(g), "inVK"),
        )
    else:
        factors = ()
    fact = PermFactorization(
        target=_freeze_perm(sigma), window=n, f=_freeze_perm(f),
        g=_freeze_perm(g), u=_freeze_perm(u), nu=_freeze_perm(nu),
        factors=factors, power=achieved_power([t for _, t in factors]))
    fact.verify()
    return fact


# ---------------------------------------------------------------------------
# window stabilizer certificates


@dataclass(frozen=True)
class VKCertificate:
    """Window membership data: gauge word plus the gauged table rows."""

    window: int
    gauge: Word
    table: tuple[tuple[int, Word], ...]

    def to_json(self) -> dict:
        return {
            "window": self.window,
            "gauge": format_word(self.gauge),
            "table": {str(i): format_word(w) for i, w in self.table},
        }


def _conj_core(w: Word, i: int) -> Word | None:
    """Return u when w reads exactly inverse(u) a_i u, else None."""
    if len(w) % 2 != 1:
        return None
    h = len(w) // 2
    if w[h] != i:
        return None
    u = w[h + 1:]
    if tuple(w) == tuple(inverse(u)) + (i,) + tuple(u):
        return u
    return None


def _gauged_rows(el: MappingClass, n: int, gauge: Word):
    letters = set(range(1, n + 1))
    for i, w in el.table:
        letters.add(i)
        letters |= letters_of(w)
    rows = []
    for i in sorted(letters):
        rows.append((i, reduce_word(concat(gauge, el.letter_image(i),
                                           inverse(gauge)))))
    return tuple(rows)


def vk_certificate(el: MappingClass, n: int) -> VKCertificate | None:
    """Certify that el stabilizes the loop window [v1, vn], or return None."""
    _check_window(el.graph, n)
    if el.shift:
        return None
    gauge: Word = ()
    for i in range(1, n + 1):
        img = el.letter_image(i)
        if img != (i,):
            core = _conj_core(img, i)
            if core is None:
                return None
            gauge = core
            break
    cert = VKCertificate(window=n, gauge=gauge,
                         table=_gauged_rows(el, n, gauge))
    return cert if verify_vk(el, n, cert) else None


def verify_vk(el: MappingClass, n: int, cert: VKCertificate | None) -> bool:
    """Re-derive a window stabilizer certificate from canonical data alone."""
    if cert is None or cert.window != n:
        return False
    graph = el.graph
    if graph.family not in _WINDOW_FAMILIES or el.shift:
        return False
    if any(x <= n for x in letters_of(cert.gauge)):
        return False
    rows = _gauged_rows(el, n, cert.gauge)
    if rows != cert.table:
        return False
    for i, w in rows:
        if i <= n:
            if w != (i,):
                return False
        elif any(x <= n for x in letters_of(w)):
            return False
    for ray_key, w in el.drags:
        k = int(ray_key[1:])
        # a dragged ray hanging inside the window leaves the window moved;
        # one hanging beyond it may only wrap the far loops
        if graph.ray_attach_pos(k) <= n:
            return False
        if any(x <= n for x in letters_of(w)):
            return False
    try:
        inverse_class(el)
    except InvalidElementError:
        return False
    return True


def in_vk(el: MappingClass, n: int) -> bool:
    return vk_certificate(el, n) is not None


# ---------------------------------------------------------------------------
# factorizations of mapping classes


@dataclass(frozen=True)
class Factor:
    element: MappingClass
    tag: str                                # "inF" | "inVK"
    f_index: int = -1
    certificate: VKCertificate | None = None

    def to_json(self) -> dict:
        data = {"tag": self.tag, "element": self.element.to_json()}
        if self.tag == "inF":
            data["fIndex"] = self.f_index
        if self.certificate is not None:
            data["certificate"] = self.certificate.to_json()
        return data


def achieved_power(tags) -> int:
    """Blocks of (one F factor, one stabilizer run) covering the tag list."""
    power = 0
    slot_open = False
    prev_stab = False
    for tag in tags:
        if tag == "inF":
            power += 1
            slot_open = True
            prev_stab = False
        elif tag == "inVK":
            if prev_stab:
                continue
            if slot_open:
                slot_open = False
            else:
                power += 1
            prev_stab = True
        else:
            raise CertificateError(f"unknown factor tag {tag!r}")
    return power


@dataclass(frozen=True)
class WitnessFactorization:
    target: MappingClass
    window: int
    f_set: tuple[MappingClass, ...]
    factors: tuple[Factor, ...]
    power: int
    bound: int

    def recombined(self) -> MappingClass:
        out = identity(self.target.graph)
        for fac in self.factors:
            out = compose(out, fac.element)
        return out

    def verify(self) -> bool:
        if not same_class(self.recombined(), self.target):
            raise CertificateError("factors do not recombine to the target")
        for pos, fac in enumerate(self.factors):
            if fac.tag == "inF":
                if not 0 <= fac.f_index < len(self.f_set):
                    raise CertificateError(f"factor {pos}: F index out of range")
                if not same_class(fac.element, self.f_set[fac.f_index]):
                    raise CertificateError(
                        f"factor {pos}: not the registered F element")
            elif fac.tag == "inVK":
                if not verify_vk(fac.element, self.window, fac.certificate):
                    raise CertificateError(
                        f"factor {pos}: stabilizer certificate fails")
            else:
                raise CertificateError(f"factor {pos}: unknown tag {fac.tag!r}")
        if self.power != achieved_power([f.tag for f in self.factors]):
            raise CertificateError("declared power does not match the factors")
        if self.power > self.bound:
            raise CertificateError("power exceeds the declared bound")
        return True

    def to_json(self) -> dict:
        return {
            "target": self.target.to_json(),
            "window": self.window,
            "fSet": [el.to_json() for el in self.f_set],
            "factors": [fac.to_json() for fac in self.factors],
            "power": self.power,
            "bound": self.bound,
        }


def _vk_factor(el: MappingClass, n: int) -> Factor:
    cert = vk_certificate(el, n)
    if cert is None:
        raise CertificateError("constructed factor misses the stabilizer")
    return Factor(element=el, tag="inVK", certificate=cert)


def _window_swap(graph: GraphModel, n: int) -> MappingClass:
    return loop_swap(graph, n, 1, n + 1)


def _support_top(el: MappingClass, floor: int) -> int:
    top = floor
    for i, w in el.table:
        top = max(top, i, *letters_of(w) or (0,))
    return top


def loops_factorize(u: MappingClass, n: int) -> WitnessFactorization:
    """Factor a loop-supported class over {f} and the window stabilizer."""
    graph = u.graph
    _check_window(graph, n)
    if u.drags or u.omegas or u.shift:
        raise UnsupportedElementError("support is not loop-only")
    f = _window_swap(graph, n)
    if u.is_identity():
        fact = WitnessFactorization(u, n, (f,), (), 0, 3)
        fact.verify()
        return fact
    m = _support_top(u, 2 * n)
    g = loop_swap(graph, n, n + 1, m + 1)
    nu = compose(compose(compose(compose(f, g), u), g), f)
    factors = (
        _vk_factor(g, n),
        Factor(f, "inF", f_index=0),
        _vk_factor(nu, n),
        Factor(f, "inF", f_index=0),
        _vk_factor(g, n),
    )
    fact = WitnessFactorization(
        u, n, (f,), factors,
        achieved_power([fac.tag for fac in factors]), 3)
    fact.verify()
    return fact


def _ray_slot(graph: GraphModel, slot) -> tuple[int, int]:
    if isinstance(slot, str):
        bp = parse_basepoint(graph, slot)
        if bp.kind != "ray":
            raise UnsupportedElementError(f"{slot!r} is not a ray slot")
        return bp.a, bp.b
    ray, pos = slot
    if not graph.valid_ray(ray):
        raise UnsupportedElementError(f"{graph.family} has no ray R{ray}")
    return ray, pos


def ray_factorize(graph: GraphModel, w, slot, n: int) -> WitnessFactorization:
    """Factor a ray word map over {f, the basis anchor} and the stabilizer."""
    _check_window(graph, n)
    ray, pos = _ray_slot(graph, slot)
    w = parse_word(w) if isinstance(w, str) else reduce_word(w)
    target = word_map(graph, w, ray, pos)
    f = _window_swap(graph, n)
    anchor = word_map(graph, (n + 1,), ray, pos)
    anchor_inv = inverse_class(anchor)
    f_set = (f, anchor, anchor_inv)
    if not w:
        factors: tuple[Factor, ...] = ()
    elif w == (n + 1,):
        factors = (Factor(anchor, "inF", f_index=1),)
    elif w == (-(n + 1),):
        factors = (Factor(anchor_inv, "inF", f_index=2),)
    else:
        m = max(letters_of(w) | {2 * n + 1})
        h = loop_swap(graph, 1, n + 1, m + 1)
        g = loop_swap(graph, n, n + 1, m + 2)
        # pull the word out of the anchor's way, then clear of the window
        w2 = compose(f, g).apply(h.apply(w))
        if any(x <= n for x in letters_of(w2)):
            raise CertificateError("conjugated ray word failed to clear the window")
        rho = loop_word(graph, w2, m + 2, "post")
        factors = (
            _vk_factor(h, n),
            Factor(anchor_inv, "inF", f_index=2),
            _vk_factor(g, n),
            Factor(f, "inF", f_index=0),
            _vk_factor(compose(rho, g), n),
            Factor(anchor, "inF", f_index=1),
            _vk_factor(compose(g, inverse_class(rho)), n),
            Factor(f, "inF", f_index=0),
            _vk_factor(compose(g, h), n),
        )
    fact = WitnessFactorization(
        target, n, f_set, factors,
        achieved_power([fac.tag for fac in factors]), 5)
    fact.verify()
    return fact


def approximate_inverse(phi: MappingClass, n: int) -> MappingClass:
    """A class u supported near the window with u * phi in the stabilizer."""
    _check_window(phi.graph, n)
    if vk_certificate(phi, n) is not None:
        return identity(phi.graph)
    return inverse_class(phi)


def _merge_f(f_set: list[MappingClass], el: MappingClass) -> int:
    for idx, known in enumerate(f_set):
        if same_class(known, el):
            return idx
    f_set.append(el)
    return len(f_set) - 1


def _adopt(sub: WitnessFactorization, f_set: list[MappingClass]) -> list[Factor]:
    out = []
    for fac in sub.factors:
        if fac.tag == "inF":
            idx = _merge_f(f_set, sub.f_set[fac.f_index])
            out.append(Factor(fac.element, "inF", f_index=idx))
        else:
            out.append(fac)
    return out


def full_witness(phi: MappingClass, n: int) -> WitnessFactorization:
    """Factor any registered class on a bounded family within the stated bound."""
    graph = phi.graph
    _check_window(graph, n)
    if graph.family == "LochNess":
        bound = 4
    elif graph.family == "Hungry":
        bound = 4 + 5 * graph.rays
    else:
        bound = 7 + 5 * n

    u = approximate_inverse(phi, n)
    remainder = compose(u, phi)
    core = inverse_class(u)

    f_set: list[MappingClass] = [_window_swap(graph, n)]
    factors: list[Factor] = []

    drags = sorted(((int(r[1:]), w) for r, w in core.drags), reverse=True)
    near = [(k, w) for k, w in drags if graph.ray_attach_pos(k) <= n]
    far = [(k, w) for k, w in drags if graph.ray_attach_pos(k) > n]

    total = identity(graph)
    for k, w in drags:
        total = compose(total, word_map(graph, w, k, 0))
    core_loops = compose(inverse_class(total), core)
    if core_loops.drags or core_loops.omegas or core_loops.shift:
        raise CertificateError("ray peeling left non-loop support behind")

    if far:
        # one telescoped block conjugates every far drag clear of the window
        far_prod = identity(graph)
        for k, w in far:
            far_prod = compose(far_prod, word_map(graph, w, k, 0))
        f = f_set[0]
        top = max(set().union(*(letters_of(w) for _, w in far)) | {2 * n})
        g = loop_swap(graph, n, n + 1, top + 1)
        nu = compose(compose(compose(compose(f, g), far_prod), g), f)
        factors += [
            _vk_factor(g, n),
            Factor(f, "inF", f_index=0),
            _vk_factor(nu, n),
            Factor(f, "inF", f_index=0),
            _vk_factor(g, n),
        ]

    for k, w in near:
        factors += _adopt(ray_factorize(graph, w, (k, 0), n), f_set)

    if not core_loops.is_identity():
        factors += _adopt(loops_factorize(core_loops, n), f_set)

    if not remainder.is_identity():
        factors.append(_vk_factor(remainder, n))

    fact = WitnessFactorization(
        phi, n, tuple(f_set), tuple(factors),
        achieved_power([fac.tag for fac in factors]), bound)
    fact.verify()
    return fact
