import sys

sys.path.insert(0, "src")
from graphmcg.freegrp import (
    apply_table,
    concat,
    inverse,
    reduce_word,
    subgroup_graph,
)

# the stuck table from partial conjugation of {a1, a2} by w = A3 a2
table = {1: (-2, 3, 1, -3, 2), 2: (-2, 3, 2, -3, 2)}
letters = [1, 2, 3]
rows = [reduce_word(table.get(i, (i,))) for i in letters]
g = subgroup_graph(rows)
print("vertices:", g.num_vertices, "edges:", g.num_edges)
print("base out labels:", sorted(k for k in g.out[g.basepoint] if k > 0))

# brute plateau BFS over Nielsen moves to find the witness expressions
from itertools import product as iproduct


def moves(state):
    n = len(state)
    for i, j in iproduct(range(n), repeat=2):
        if i == j:
            continue
        wi, ei = state[i]
        wj, ej = state[j]
        for si in (1, -1):
            for sj in (1, -1):
                for order in ("ij", "ji"):
                    a = (wi, ei) if si == 1 else (inverse(wi), inverse(ei))
                    b = (wj, ej) if sj == 1 else (inverse(wj), inverse(ej))
                    if order == "ji":
                        a, b = b, a
                    nw = concat(a[0], b[0])
                    ne = concat(a[1], b[1])
                    out = list(state)
                    out[i] = (nw, ne)
                    yield tuple(out)


def canon(state):
    return tuple(
        sorted(min((w, e), (inverse(w), inverse(e))) for w, e in state)
    )


start = tuple((rows[k], (letters[k],)) for k in range(len(letters)))
cur = start
total = sum(len(w) for w, _ in cur)
print("start total:", total)
steps = 0
while total > len(letters):
    # BFS over the plateau of the current total for any strict descent
    seen = {canon(cur)}
    queue = [cur]
    found = None
    explored = 0
    while queue and found is None:
        state = queue.pop(0)
        explored += 1
        for nxt in moves(state):
            t = sum(len(w) for w, _ in nxt)
            if t < total:
                found = nxt
                break
            if t == total:
                key = canon(nxt)
                if key not in seen:
                    seen.add(key)
                    queue.append(nxt)
    if found is None:
        print("STUCK at total", total, "after exploring", explored)
        break
    cur = found
    total = sum(len(w) for w, _ in cur)
    steps += 1
    print("descent to total", total, f"(plateau explored {explored})")

print("final rows:")
for w, e in cur:
    print("  ", w, "<-", e)

# build and verify the inverse table
inv = {}
for w, e in cur:
    if len(w) == 1:
        inv[abs(w[0])] = e if w[0] > 0 else inverse(e)
ok = all(apply_table(table, inv[i]) == (i,) for i in letters)
print("inverse table:", inv)
print("verified:", ok)
