"""Independent oracles and generators shared by the test modules.

Everything here is deliberately naive: permutation scans, exhaustive
partition sweeps, batch elimination.  The point is to check the library
against code that shares none of its machinery.
"""

from __future__ import annotations

import itertools
import random

from cyclespan.gf2 import EdgeVector
from cyclespan.graph import Graph, from_edge_list


def permutation_hamilton_cycles(g: Graph) -> set[tuple[int, ...]]:
    """All Hamilton cycles as canonical orders, by scanning permutations."""
    n = g.n
    out = set()
    if n < 3:
        return out
    for perm in itertools.permutations(range(1, n)):
        if perm[0] > perm[-1]:
            continue
        order = (0,) + perm
        ok = g.has_edge(order[-1], 0)
        if ok:
            for u, v in zip(order, order[1:]):
                if not g.has_edge(u, v):
                    ok = False
                    break
        if ok:
            out.add(order)
    return out


def batch_gf2_rank(rows: list[int], ncols: int) -> int:
    """Rank by plain Gaussian elimination over GF(2)."""
    work = [r for r in rows]
    rank = 0
    row = 0
    for col in range(ncols):
        pivot = None
        for i in range(row, len(work)):
            if work[i] >> col & 1:
                pivot = i
                break
        if pivot is None:
            continue
        work[row], work[pivot] = work[pivot], work[row]
        for i in range(len(work)):
            if i != row and work[i] >> col & 1:
                work[i] ^= work[row]
        rank += 1
        row += 1
        if row == len(work):
            break
    return rank


def brute_shortest_path(g: Graph, x: int, y: int, banned: set[int]) -> int | None:
    """Length of a shortest x..y path avoiding banned, by full DFS."""
    if x == y:
        return 0
    best = [None]

    def walk(v, seen, length):
        if best[0] is not None and length >= best[0]:
            return
        for w in g.neighbors(v):
            if w in seen or w in banned:
                continue
            if w == y:
                if best[0] is None or length + 1 < best[0]:
                    best[0] = length + 1
                continue
            seen.add(w)
            walk(w, seen, length + 1)
            seen.discard(w)

    walk(x, {x}, 0)
    return best[0]


def random_graph(rng: random.Random, n: int, p: float) -> Graph:
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n) if rng.random() < p]
    return from_edge_list(n, pairs)


def petersen() -> Graph:
    outer = [(i, (i + 1) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    return from_edge_list(10, outer + spokes + inner)


def all_bipartition_cuts(g: Graph) -> set[int]:
    """Bit masks of E(A, V-A) over every partition (vertex n-1 fixed in B)."""
    cuts = set()
    for mask in range(1 << max(0, g.n - 1)):
        cut = 0
        for eid, (u, v) in enumerate(g.edges):
            if (mask >> u & 1) != (mask >> v & 1):
                cut |= 1 << eid
        cuts.add(cut)
    return cuts


def random_switcher(seed: int, k: int | None = None, max_interior: int = 3):
    """A random valid switcher instance: (graph, cycle, paths, r)."""
    rng = random.Random(seed)
    if k is None:
        k = rng.randint(2, 6)
    two_k = 2 * k
    cycle = list(range(two_k))
    pairs = [(i, (i + 1) % two_k) for i in range(two_k)]
    paths = []
    label = two_k
    for i in range(2, k + 1):
        a, b = i - 1, two_k - i + 1  # 0-based endpoints of P_i
        interior = [label + j for j in range(rng.randint(0, max_interior))]
        label += len(interior)
        chain = [a] + interior + [b]
        pairs.extend(zip(chain, chain[1:]))
        paths.append(chain)
    g = from_edge_list(label, pairs)
    while True:
        bits = rng.getrandbits(g.m)
        cyc_mask = 0
        for u, v in zip(cycle, cycle[1:] + cycle[:1]):
            cyc_mask |= 1 << g.edge_id(u, v)
        if (bits & cyc_mask).bit_count() % 2 == 1:
            break
        bits ^= cyc_mask & -cyc_mask  # flip one cycle edge to make it odd
        break
    return g, cycle, paths, EdgeVector(bits, g.m)


def graph_from_mask(n: int, mask: int) -> Graph:
    pairs = []
    idx = 0
    for i in range(n):
        for j in range(i + 1, n):
            if mask >> idx & 1:
                pairs.append((i, j))
            idx += 1
    return from_edge_list(n, pairs)
