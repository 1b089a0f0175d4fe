"""Classification of pure mapping class groups from end profiles.

Four verdicts are computed from a blueprint's end profile:

  classify_cb          is PMap coarsely bounded
  classify_locally_cb  is PMap locally coarsely bounded
  asdim                asymptotic dimension, where determined
  h1_lower_bound       lower bound for the rank of the first cohomology
  map_cb_note          what the verdicts imply for the full mapping class group

Every verdict carries a reason tag (a stable machine-readable slug describing
the case that fired) and a human-readable detail sentence. Tags name the
structural facts, so two graphs with the same profile always get the same
verdict and tag.
"""

from __future__ import annotations

from dataclasses import dataclass

from .blueprint import (
    ALEPH0,
    Blueprint,
    EndProfile,
    Scale,
    end_profile,
    is_infinite,
)


@dataclass(frozen=True)
class Verdict:
    value: str
    tag: str
    detail: str

    def to_json(self) -> dict:
        return {"value": self.value, "tag": self.tag, "detail": self.detail}


def classify_cb(profile: EndProfile) -> Verdict:
    """Coarse boundedness of the pure mapping class group."""
    rank = profile.rank
    if rank == 0:
        return Verdict(
            "CB",
            "rank-zero",
            "the graph is a tree, so every proper homotopy equivalence is"
            " properly homotopic to one supported nowhere",
        )
    if rank == 1:
        if profile.endCount == 1:
            return Verdict(
                "CB",
                "rank-one-single-end",
                "one loop and one end: every mapping class is approximated by"
                " ones displaced toward the end",
            )
        return Verdict(
            "NotCB",
            "rank-one-multi-end",
            "a single loop with several ends admits unbounded loop shifts"
            " distinguished by which end absorbs the loop",
        )
    if not is_infinite(rank):
        return Verdict(
            "NotCB",
            "finite-rank-at-least-two",
            "with finitely many loops the group surjects continuously onto"
            " the outer automorphisms of a free group of rank at least two",
        )
    el = profile.elCount
    if is_infinite(el) or el >= 2:
        return Verdict(
            "NotCB",
            "two-ends-accumulated",
            "at least two ends are accumulated by loops, so flux maps give"
            " unbounded invariants",
        )
    if el == 0:
        raise AssertionError(
            "impossible profile: infinitely many loops must accumulate at"
            " some end"
        )
    if profile.elComplementDiscrete:
        return Verdict(
            "CB",
            "one-loop-end-discrete-complement",
            "a single loop-accumulated end with discrete remaining ends:"
            " every element factors through a bounded displacement toward it",
        )
    return Verdict(
        "NotCB",
        "accumulation-point",
        "the loop-free ends fail to be discrete, and an accumulation point"
        " yields infinitely many independent proper translations",
    )


def classify_locally_cb(profile: EndProfile) -> Verdict:
    """Local coarse boundedness (some CB neighborhood of the identity)."""
    if not is_infinite(profile.rank):
        return Verdict(
            "LocallyCB",
            "finite-rank",
            "finitely many loops: pointwise stabilizers of the core are"
            " coarsely bounded neighborhoods",
        )
    if is_infinite(profile.elCount):
        return Verdict(
            "NotLocallyCB",
            "infinitely-many-loop-ends",
            "every identity neighborhood moves loops near infinitely many"
            " loop-accumulated ends independently",
        )
    if is_infinite(profile.infiniteEndComponentsOfComplementOfCore):
        return Verdict(
            "NotLocallyCB",
            "infinitely-many-infinite-end-components",
            "infinitely many components outside the core carry infinite end"
            " spaces, defeating every candidate bounded neighborhood",
        )
    return Verdict(
        "LocallyCB",
        "few-loop-ends-tame-complement",
        "finitely many loop-accumulated ends and finitely many infinite-end"
        " components outside the core give a coarsely bounded stabilizer",
    )


def asdim(profile: EndProfile) -> Verdict:
    """Asymptotic dimension, in the cases the classification determines."""
    cb = classify_cb(profile)
    if cb.value == "CB":
        return Verdict(
            "0",
            "coarsely-bounded",
            "coarsely bounded groups have asymptotic dimension zero",
        )
    lcb = classify_locally_cb(profile)
    if lcb.value == "NotLocallyCB":
        return Verdict(
            "unknown",
            "not-locally-cb",
            "without local coarse boundedness the group carries no"
            " well-behaved coarse structure to measure",
        )
    if is_infinite(profile.rank):
        el = profile.elCount
        if el == 1:
            return Verdict(
                "0",
                "one-loop-end",
                "locally coarsely bounded with a single loop-accumulated end:"
                " the coarse structure is zero dimensional",
            )
        return Verdict(
            "infinity",
            "multiple-loop-ends",
            "locally coarsely bounded with several loop-accumulated ends:"
            " flux directions span unbounded euclidean pieces of every"
            " dimension",
        )
    return Verdict(
        "unknown",
        "finite-rank-unbounded",
        "finite positive rank with an unbounded group: the dimension is"
        " positive and finite but not pinned down by the profile",
    )


def h1_lower_bound(profile: EndProfile) -> Scale:
    """Lower bound for the rank of the first cohomology of PMap."""
    el = profile.elCount
    if is_infinite(el):
        return ALEPH0
    if el >= 2:
        return el - 1
    return 0


def map_cb_note(profile: EndProfile) -> Verdict:
    """Coarse boundedness of the full mapping class group, where implied."""
    el = profile.elCount
    if not is_infinite(el) and el >= 2 and not is_infinite(profile.endCount):
        return Verdict(
            "MapNotCB",
            "several-loop-ends-finitely-many-ends",
            "finitely many ends with at least two loop-accumulated ones:"
            " fluxes survive passing to the full group",
        )
    if el == 1 and profile.elComplementDiscrete:
        return Verdict(
            "MapCB",
            "one-loop-end-discrete-complement",
            "the displacement argument is equivariant, so the full group is"
            " coarsely bounded as well",
        )
    return Verdict(
        "unknown",
        "outside-known-cases",
        "the profile matches none of the cases with a known verdict for the"
        " full mapping class group",
    )


@dataclass(frozen=True)
class Report:
    profile: EndProfile
    cb: Verdict
    locally_cb: Verdict
    asdim: Verdict
    h1_lower_bound: Scale
    map_note: Verdict

    def to_json(self) -> dict:
        return {
            "profile": self.profile.to_json(),
            "cb": self.cb.to_json(),
            "locallyCB": self.locally_cb.to_json(),
            "asdim": self.asdim.to_json(),
            "h1LowerBound": self.h1_lower_bound,
            "mapNote": self.map_note.to_json(),
        }


def report(bp: Blueprint) -> Report:
    profile = end_profile(bp)
    return Report(
        profile=profile,
        cb=classify_cb(profile),
        locally_cb=classify_locally_cb(profile),
        asdim=asdim(profile),
        h1_lower_bound=h1_lower_bound(profile),
        map_note=map_cb_note(profile),
    )
