"""Independent reference computations used to cross-check the engine.

Nothing here calls the engine's composition, enumeration or matrix code.
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction


def double_factorial_oracle(k: int) -> int:
    # (k-1)!! for even k, as k! / (2^(k/2) (k/2)!)
    if k % 2:
        return 0
    h = k // 2
    return math.factorial(k) // (2**h * math.factorial(h))


def brute_force_pairings(k: int) -> int:
    """Fixed-point-free involutions of k points, counted over all permutations."""
    total = 0
    for p in itertools.permutations(range(k)):
        if all(p[i] != i and p[p[i]] == i for i in range(k)):
            total += 1
    return total


class _DSU:
    def __init__(self):
        self.parent = {}

    def find(self, x):
        self.parent.setdefault(x, x)
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, a, b):
        self.parent[self.find(a)] = self.find(b)


def compose_oracle(g_pairs, g_loops, f_pairs, f_loops, m, n, p):
    """Compose by connected components.

    Pairs use labels ('I', k) / ('O', k), 1-based, as printed in the text
    encoding.  Returns (set of frozenset pairs over ('in', k)/('out', k), loops).
    """
    dsu = _DSU()

    def fl(lbl):
        side, k = lbl
        return ("in", k) if side == "I" else ("mid", k)

    def gl(lbl):
        side, k = lbl
        return ("mid", k) if side == "I" else ("out", k)

    edges = [(fl(a), fl(b)) for a, b in f_pairs] + [(gl(a), gl(b)) for a, b in g_pairs]
    nodes = {x for e in edges for x in e}
    for a, b in edges:
        dsu.union(a, b)
    comps = {}
    for x in nodes:
        comps.setdefault(dsu.find(x), []).append(x)
    pairs, cycles = set(), 0
    for members in comps.values():
        ext = [x for x in members if x[0] != "mid"]
        if not ext:
            cycles += 1
        else:
            assert len(ext) == 2
            pairs.add(frozenset(ext))
    return pairs, f_loops + g_loops + cycles


def parse_pairs(text: str):
    """Pairs from the text encoding ``m;n;loops;(I1-O1)...``."""
    m, n, loops, body = text.split(";")
    out = []
    for chunk in body.strip("()").split(")(") if body else []:
        a, b = chunk.split("-")
        out.append(((a[0], int(a[1:])), (b[0], int(b[1:]))))
    return int(m), int(n), int(loops), out


def matrix_oracle(mat_unit, mat_counit, trace, text):
    """Y of a morphism given by its text encoding, by summing over colorings.

    Rows are output multi-indices, columns input multi-indices, both
    lexicographic with the first strand most significant.
    """
    m, n, loops, pairs = parse_pairs(text)
    d = len(mat_unit)
    rows = []
    for out in itertools.product(range(d), repeat=n):
        row = []
        for inp in itertools.product(range(d), repeat=m):
            color = {("I", k + 1): inp[k] for k in range(m)}
            color.update({("O", k + 1): out[k] for k in range(n)})
            val = Fraction(trace) ** loops
            for a, b in pairs:
                if a[0] == "I" and b[0] == "I":
                    val *= mat_counit[color[a]][color[b]]
                elif a[0] == "O" and b[0] == "O":
                    val *= mat_unit[color[a]][color[b]]
                else:
                    val *= 1 if color[a] == color[b] else 0
            row.append(Fraction(val))
        rows.append(tuple(row))
    return tuple(rows)


def kron_oracle(a, b):
    return tuple(tuple(x * y for x in ra for y in rb) for ra in a for rb in b)


def matmul_oracle(a, b):
    return tuple(tuple(sum((a[i][k] * b[k][j] for k in range(len(b))), Fraction(0)) for j in range(len(b[0]))) for i in range(len(a)))


def series_oracle(loop_counts, trunc):
    """Exponent set of sum_F q^(loops F), truncated."""
    return {k for k in loop_counts if k < trunc}
