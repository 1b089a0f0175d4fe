import sys
from itertools import product as iproduct

sys.path.insert(0, "src")
from graphmcg.freegrp import (
    _measure,
    _row_products,
    reduce_word,
    subgroup_graph,
)


def greedy_only(rows):
    rows = [(reduce_word(w), reduce_word(e)) for w, e in rows]
    while True:
        current = _measure(rows)
        best = None
        for i in range(len(rows)):
            for j in range(len(rows)):
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


def words_up_to(n, letters=(1, -1, 2, -2)):
    out = [()]
    frontier = [()]
    for _ in range(n):
        nxt = []
        for w in frontier:
            for x in letters:
                if w and w[-1] == -x:
                    continue
                nxt.append(w + (x,))
        out.extend(nxt)
        frontier = nxt
    return out


def is_rose(ws, letters):
    g = subgroup_graph(ws)
    labels = sorted(k for k in g.out[g.basepoint] if k > 0)
    return g.num_vertices == 1 and labels == sorted(letters)


words = [w for w in words_up_to(5) if w]
stalls = 0
checked = 0
for w1 in words:
    for w2 in words:
        if len(w1) + len(w2) > 8 or len(w1) < 2:
            continue
        if not is_rose([w1, w2], [1, 2]):
            continue
        checked += 1
        out = greedy_only([(w1, (1,)), (w2, (2,))])
        if any(len(w) != 1 for w, _ in out):
            stalls += 1
            if stalls <= 5:
                print("stall:", w1, w2, "->", [w for w, _ in out])
print("bases checked:", checked, "stalls:", stalls)
