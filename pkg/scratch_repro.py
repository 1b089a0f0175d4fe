import random
import sys

sys.path.insert(0, "src")
from graphmcg.freegrp import InvalidElementError, reduce_word
from graphmcg.mcg import (
    compose,
    identity,
    inverse_class,
    loop_swap,
    loop_word,
    millipede,
    partial_conj,
    word_map,
)

M = millipede()


def rand_word(rng, alphabet=4, max_len=3):
    while True:
        w = reduce_word(
            [rng.choice([1, -1]) * rng.randint(1, alphabet)
             for _ in range(rng.randint(1, max_len))]
        )
        if w:
            return w


def rand_element_parts(rng, max_tooth=7):
    parts = []
    desc = []
    for _ in range(rng.randint(1, 4)):
        kind = rng.choice(["wm", "wm", "pc", "lw", "ls"])
        if kind == "wm":
            w, k = rand_word(rng), rng.randint(1, max_tooth)
            parts.append(word_map(M, w, k))
            desc.append(f"wm({w},{k})")
        elif kind == "pc":
            w, j = rand_word(rng, alphabet=3), rng.randint(0, 6)
            parts.append(partial_conj(M, w, j))
            desc.append(f"pc({w},{j})")
        elif kind == "lw":
            w = rand_word(rng, alphabet=3)
            s = rng.choice(["pre", "post"])
            parts.append(loop_word(M, w, 5, side=s))
            desc.append(f"lw({w},5,{s})")
        else:
            m1 = rng.randint(1, 4)
            m2 = m1 + rng.randint(1, 3)
            parts.append(loop_swap(M, 1, m1, m2))
            desc.append(f"ls(1,{m1},{m2})")
    out = parts[0]
    for p in parts[1:]:
        out = compose(out, p)
    return out, parts, desc


rng = random.Random(9001)
for it in range(25):
    g, parts, desc = rand_element_parts(rng)
    try:
        inverse_class(g)
    except InvalidElementError as e:
        print("iteration", it, "FAILS")
        print("parts:", desc)
        print("table:", dict(g.core_table) if hasattr(g, "core_table") else g)
        print("drags:", g.drags)
        print("error:", e)
        # compose the primitive inverses in reverse order
        inv = inverse_class(parts[-1])
        for p in reversed(parts[:-1]):
            inv = compose(inv, inverse_class(p))
        both = compose(inv, g)
        other = compose(g, inv)
        print("manual inverse drags:", inv.drags)
        print("inv*g == id:", both == identity(M))
        print("g*inv == id:", other == identity(M))
        print("inv*g drags:", both.drags)
        print("inv*g table:", getattr(both, "core_table", None))
        break
else:
    print("no failure in 25 draws")
