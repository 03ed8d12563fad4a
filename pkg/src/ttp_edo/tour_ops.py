"""EAX-1AB crossover and 2-opt mutation on TTP tours.

All vertices here are 0-based; city 1 of the benchmark file is vertex 0.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .instance import Instance
from .solution import Tour

Edge = tuple[int, int]


def _edge(u: int, v: int) -> Edge:
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class AbCycle:
    """Closed alternating walk ``v0 -A- v1 -B- v2 -A- ... -B- v0``.

    Edge ``k`` joins ``vertices[k]`` and ``vertices[k+1]`` (wrapping); even
    ``k`` are parent-A edges, odd ``k`` parent-B edges.
    """

    vertices: tuple[int, ...]

    def __len__(self):
        return len(self.vertices)

    def edges(self) -> list[Edge]:
        vs = self.vertices
        return [_edge(vs[k], vs[(k + 1) % len(vs)]) for k in range(len(vs))]

    @property
    def a_edges(self) -> list[Edge]:
        return self.edges()[0::2]

    @property
    def b_edges(self) -> list[Edge]:
        return self.edges()[1::2]


@dataclass
class IntermediateSolution:
    """Degree-2 edge set given as an adjacency list, plus its cycles."""

    adj: list[list[int]]
    subtours: list[list[int]]

    @classmethod
    def from_adjacency(cls, adj: list[list[int]]) -> "IntermediateSolution":
        return cls(adj, _cycles(adj))

    def edges(self) -> set[Edge]:
        return {_edge(u, v) for u, nb in enumerate(self.adj) for v in nb}


def _cycles(adj: list[list[int]]) -> list[list[int]]:
    n = len(adj)
    seen = [False] * n
    out = []
    for start in range(n):
        if seen[start]:
            continue
        cyc = [start]
        seen[start] = True
        prev, cur = start, adj[start][0]
        while cur != start:
            cyc.append(cur)
            seen[cur] = True
            a, b = adj[cur]
            prev, cur = cur, (b if a == prev else a)
        out.append(cyc)
    return out


def _tour_adjacency(t: Tour) -> list[list[int]]:
    n = t.n
    order = t.order.tolist()
    adj = [[] for _ in range(n)]
    for k in range(n):
        u, v = order[k], order[(k + 1) % n]
        adj[u].append(v)
        adj[v].append(u)
    return adj


def build_ab_cycle(a: Tour, b: Tour, rng: np.random.Generator) -> AbCycle | None:
    """Random alternating walk over E(a)\\E(b) and E(b)\\E(a), closed at its start.

    Each vertex has as many unshared A-edges as unshared B-edges, so the walk
    can only stall at its start vertex, and it stops the first time it gets
    back there on a B-edge.
    """
    n = a.n
    adj_a = _tour_adjacency(a)
    adj_b = _tour_adjacency(b)
    # unused unshared edges per vertex
    free_a = [[v for v in adj_a[u] if v not in adj_b[u]] for u in range(n)]
    free_b = [[v for v in adj_b[u] if v not in adj_a[u]] for u in range(n)]
    starts = [u for u in range(n) if free_a[u]]
    if not starts:
        return None

    start = starts[int(rng.integers(len(starts)))]
    walk = [start]
    cur = start
    use_a = True
    while True:
        free = free_a if use_a else free_b
        opts = free[cur]
        nxt = opts[int(rng.integers(len(opts)))] if len(opts) > 1 else opts[0]
        opts.remove(nxt)
        free[nxt].remove(cur)
        cur = nxt
        if not use_a and cur == start:
            break
        walk.append(cur)
        use_a = not use_a
    return AbCycle(tuple(walk))


def apply_ab_cycle(a: Tour, cyc: AbCycle) -> IntermediateSolution:
    """Drop the cycle's A-edges from ``a`` and add its B-edges."""
    adj = _tour_adjacency(a)
    for u, v in cyc.a_edges:
        adj[u].remove(v)
        adj[v].remove(u)
    for u, v in cyc.b_edges:
        adj[u].append(v)
        adj[v].append(u)
    return IntermediateSolution.from_adjacency(adj)


def _cycle_edges(cyc: list[int]) -> np.ndarray:
    """Edges of a cycle as rows ``(low, high)``, sorted lexicographically."""
    u = np.asarray(cyc, dtype=np.int64)
    v = np.roll(u, -1)
    e = np.stack([np.minimum(u, v), np.maximum(u, v)], axis=1)
    return e[np.lexsort((e[:, 1], e[:, 0]))]


def best_reconnection(inst: Instance, small: list[int], others: list[list[int]]):
    """Cheapest 2-exchange joining ``small`` to one of ``others``.

    Returns ``(cost, e1, e2, e3, e4)``: remove ``e1`` (in ``small``) and
    ``e2``, add ``e3`` and ``e4``.  Ties go to the lexicographically
    smallest ``(e1, e2)``, then to the ``(low1, low2), (high1, high2)`` join.
    """
    d = inst.dist
    e1 = _cycle_edges(small)
    e2 = np.concatenate([_cycle_edges(c) for c in others])
    e2 = e2[np.lexsort((e2[:, 1], e2[:, 0]))]
    a, b = e1[:, 0:1], e1[:, 1:2]
    c, dd = e2[None, :, 0], e2[None, :, 1]
    removed = d[a, b] + d[c, dd]
    cost = np.stack([d[a, c] + d[b, dd] - removed, d[a, dd] + d[b, c] - removed], axis=2)
    i, j, k = np.unravel_index(int(np.argmin(cost)), cost.shape)
    (u1, v1), (u2, v2) = e1[i].tolist(), e2[j].tolist()
    joins = [(u1, u2), (v1, v2)] if k == 0 else [(u1, v2), (v1, u2)]
    return int(cost[i, j, k]), (u1, v1), (u2, v2), _edge(*joins[0]), _edge(*joins[1])


def merge_subtours(inst: Instance, t: IntermediateSolution, repairs: list[Edge] | None = None,
                   prefer: Tour | None = None) -> Tour:
    """Join subtours by greedy 2-exchanges, smallest subtour first.

    ``repairs`` collects the edges introduced by the joins.  The undirected
    result is oriented to agree with ``prefer`` on as many directed edges as
    possible (see :func:`orient`).
    """
    adj = [list(nb) for nb in t.adj]
    subtours = [list(c) for c in t.subtours]
    while len(subtours) > 1:
        small = min(subtours, key=lambda c: (len(c), min(c)))
        others = [c for c in subtours if c is not small]
        _, (u1, v1), (u2, v2), e3, e4 = best_reconnection(inst, small, others)
        for x, y in ((u1, v1), (u2, v2)):
            adj[x].remove(y)
            adj[y].remove(x)
        for x, y in (e3, e4):
            adj[x].append(y)
            adj[y].append(x)
        if repairs is not None:
            repairs.extend([e3, e4])
        subtours = _cycles(adj)
    return orient(adj, prefer)


def orient(adj: list[list[int]], prefer: Tour | None = None) -> Tour:
    """Turn a Hamiltonian adjacency into a Tour starting at vertex 0.

    Of the two directions, take the one sharing more directed edges with
    ``prefer``; on a tie, the one whose second vertex is smaller.
    """
    n = len(adj)
    order = [0]
    prev, cur = 0, min(adj[0])
    while cur != 0:
        order.append(cur)
        x, y = adj[cur]
        prev, cur = cur, (y if x == prev else x)
    if len(order) != n:
        raise ValueError("adjacency is not a single Hamiltonian cycle")
    fwd = np.asarray(order, dtype=np.int64)
    bwd = np.concatenate([fwd[:1], fwd[:0:-1]])
    if prefer is not None:
        succ = prefer.order[(prefer.pos + 1) % n]

        def agree(o):
            return int(np.count_nonzero(succ[o] == np.roll(o, -1)))

        if agree(bwd) > agree(fwd):
            return Tour(bwd)
    return Tour(fwd)


def eax_1ab(inst: Instance, a: Tour, b: Tour, rng: np.random.Generator,
            repairs: list[Edge] | None = None) -> Tour:
    cyc = build_ab_cycle(a, b, rng)
    if cyc is None:
        return Tour(a.order.copy())
    inter = apply_ab_cycle(a, cyc)
    return merge_subtours(inst, inter, repairs=repairs, prefer=a)


def two_opt_move(tour: Tour, i: int, j: int) -> Tour:
    """Reverse positions ``i..j`` (0-based, ``1 <= i < j <= n-1``)."""
    if not 1 <= i < j <= tour.n - 1:
        raise ValueError(f"invalid 2-opt positions ({i}, {j}) for n={tour.n}")
    order = tour.order.copy()
    order[i:j + 1] = order[i:j + 1][::-1]
    return Tour(order)


def two_opt_mutation(tour: Tour, rng: np.random.Generator) -> Tour:
    n = tour.n
    if n < 4:
        raise ValueError("2-opt mutation needs at least 4 cities")
    i, j = sorted(rng.choice(np.arange(1, n), size=2, replace=False).tolist())
    return two_opt_move(tour, i, j)
