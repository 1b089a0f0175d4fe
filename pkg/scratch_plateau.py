import random
import sys

sys.path.insert(0, "src")
from graphmcg.freegrp import (
    _measure,
    _row_products,
    apply_table,
    inverse,
    reduce_word,
)
from itertools import product as iproduct


def greedy_only(rows):
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


rng = random.Random(7)
letters = [1, 2, 3, 4, 5]


def elementary(rng):
    kind = rng.choice(["transvect", "transvect", "swap", "invert", "conj"])
    i, j = rng.sample(letters, 2)
    if kind == "transvect":
        side = rng.choice([1, -1])
        order = rng.choice([(i, side * j), (side * j, i)])
        return {i: reduce_word(order)}
    if kind == "swap":
        return {i: (j,), j: (i,)}
    if kind == "invert":
        return {i: (-i,)}
    return {i: reduce_word((j, i, -j))}


found = 0
for trial in range(4000):
    table = {}
    for _ in range(rng.randint(4, 14)):
        step = elementary(rng)
        table = {
            k: apply_table(step, table.get(k, (k,)))
            for k in set(table) | set(step)
        }
        table = {k: w for k, w in table.items() if w != (k,)}
    if not table:
        continue
    support = set(table)
    for w in table.values():
        support |= {abs(x) for x in w}
    rows = [(reduce_word(table.get(i, (i,))), (i,)) for i in sorted(support)]
    out = greedy_only(rows)
    if any(len(w) != 1 for w, _ in out):
        found += 1
        print("greedy stall on valid table:", table)
        print("  stuck rows:", [w for w, _ in out])
        if found >= 3:
            break
print("stalls found:", found, "of 4000")
