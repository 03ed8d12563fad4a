import itertools

import numpy as np
import pytest

import oracles
from ttp_edo.instance import Instance
from ttp_edo.solution import Tour
from ttp_edo.tour_ops import (
    AbCycle,
    IntermediateSolution,
    apply_ab_cycle,
    build_ab_cycle,
    eax_1ab,
    merge_subtours,
    two_opt_move,
    two_opt_mutation,
)


def plain_instance(coords):
    return Instance("t", tuple((float(x), float(y)) for x, y in coords), (), 1, 0.1, 1.0, 1.0)


def random_coords(rng, n):
    pts = set()
    while len(pts) < n:
        pts.add((int(rng.integers(0, 200)), int(rng.integers(0, 200))))
    return sorted(pts)


def random_tour(rng, n):
    return Tour(np.concatenate([[0], rng.permutation(n - 1) + 1]))


def check_ab_cycle(cyc: AbCycle, a: Tour, b: Tour):
    ea, eb = a.edges(), b.edges()
    edges = cyc.edges()
    assert len(edges) % 2 == 0 and len(edges) >= 4
    assert all(e in ea and e not in eb for e in cyc.a_edges)
    assert all(e in eb and e not in ea for e in cyc.b_edges)
    # each edge used once
    assert len(set(cyc.a_edges)) == len(cyc.a_edges)
    assert len(set(cyc.b_edges)) == len(cyc.b_edges)
    # closed walk: consecutive edges share the listed vertex, last returns to the first
    vs = cyc.vertices
    for k in range(len(vs)):
        assert set(edges[k]) == {vs[k], vs[(k + 1) % len(vs)]}


def test_identical_parents_have_no_ab_cycle(rng):
    a = random_tour(rng, 9)
    assert build_ab_cycle(a, a, rng) is None
    child = eax_1ab(plain_instance(random_coords(rng, 9)), a, a, rng)
    assert child == a and child is not a


def test_four_city_ab_cycle(rng):
    a = Tour.from_cities([1, 2, 3, 4])
    b = Tour.from_cities([1, 3, 2, 4])
    sym_diff = a.edges() ^ b.edges()
    assert sym_diff == {(0, 1), (2, 3), (0, 2), (1, 3)}
    for _ in range(20):
        cyc = build_ab_cycle(a, b, rng)
        check_ab_cycle(cyc, a, b)
        assert set(cyc.edges()) == sym_diff
        inter = apply_ab_cycle(a, cyc)
        assert inter.edges() == b.edges()
        assert len(inter.subtours) == 1


def test_random_ab_cycles_are_valid(rng):
    for _ in range(1000):
        a, b = random_tour(rng, 10), random_tour(rng, 10)
        cyc = build_ab_cycle(a, b, rng)
        if cyc is None:
            assert a.edges() == b.edges()
            continue
        check_ab_cycle(cyc, a, b)
        inter = apply_ab_cycle(a, cyc)
        assert all(len(nb) == 2 for nb in inter.adj)
        assert sorted(c for s in inter.subtours for c in s) == list(range(10))
        assert inter.edges() == (a.edges() - set(cyc.a_edges)) | set(cyc.b_edges)


def test_single_subtour_is_unchanged(rng):
    inst = plain_instance(random_coords(rng, 7))
    t = random_tour(rng, 7)
    inter = IntermediateSolution.from_adjacency([[t.pred(c), t.succ(c)] for c in range(7)])
    repairs = []
    out = merge_subtours(inst, inter, repairs, prefer=t)
    assert out == t and repairs == []


def brute_force_merge(inst, inter):
    """Every (e1 in smallest subtour, e2 elsewhere, reconnection) with its cost."""
    d = inst.dist
    small = min(inter.subtours, key=lambda c: (len(c), min(c)))

    def cyc_edges(c):
        return [tuple(sorted((c[k], c[(k + 1) % len(c)]))) for k in range(len(c))]

    e_small = cyc_edges(small)
    e_other = [e for c in inter.subtours if c is not small for e in cyc_edges(c)]
    out = []
    for (a, b), (c, e) in itertools.product(e_small, e_other):
        for join in (((a, c), (b, e)), ((a, e), (b, c))):
            cost = -d[a, b] - d[c, e] + d[join[0]] + d[join[1]]
            out.append((cost, (a, b), (c, e), tuple(tuple(sorted(j)) for j in join)))
    return out


def test_two_triangles_merge_matches_brute_force():
    inst = plain_instance([(0, 0), (2, 0), (1, 2), (10, 0), (12, 0), (11, 2)])
    adj = [[1, 2], [0, 2], [0, 1], [4, 5], [3, 5], [3, 4]]
    inter = IntermediateSolution.from_adjacency(adj)
    assert len(inter.subtours) == 2
    candidates = brute_force_merge(inst, inter)
    best_cost = min(c[0] for c in candidates)
    winners = sorted(c for c in candidates if c[0] == best_cost)
    repairs = []
    tour = merge_subtours(inst, inter, repairs)
    cost, e1, e2, joins = winners[0]
    expected = (inter.edges() - {e1, e2}) | set(joins)
    assert tour.edges() == expected
    assert set(repairs) == set(joins)
    assert tour.length(inst) == sum(inst.dist[u, v] for u, v in inter.edges()) + best_cost


def test_merge_against_brute_force_random(rng):
    for _ in range(200):
        n = int(rng.integers(6, 14))
        inst = plain_instance(random_coords(rng, n))
        # random partition into cycles of length >= 3
        perm = rng.permutation(n).tolist()
        cuts, k = [], 0
        while n - k >= 6 and rng.random() < 0.7:
            k += int(rng.integers(3, n - k - 2))
            cuts.append(k)
        parts = [perm[i:j] for i, j in zip([0, *cuts], [*cuts, n])]
        adj = [[] for _ in range(n)]
        for c in parts:
            for i in range(len(c)):
                u, v = c[i], c[(i + 1) % len(c)]
                adj[u].append(v)
                adj[v].append(u)
        inter = IntermediateSolution.from_adjacency(adj)
        repairs = []
        tour = merge_subtours(inst, inter, repairs)
        assert len(repairs) == 2 * (len(parts) - 1)
        if len(parts) == 2:
            best_cost = min(c[0] for c in brute_force_merge(inst, inter))
            assert tour.length(inst) == sum(inst.dist[u, v] for u, v in inter.edges()) + best_cost


def test_eax_children_are_valid_and_traceable(rng):
    inst = plain_instance(random_coords(rng, 8))
    for _ in range(10_000):
        a, b = random_tour(rng, 8), random_tour(rng, 8)
        repairs = []
        child = eax_1ab(inst, a, b, rng, repairs)
        assert child.order[0] == 0
        assert sorted(child.order.tolist()) == list(range(8))
        stray = child.edges() - a.edges() - b.edges()
        assert stray <= set(repairs)


def test_eax_orientation_follows_parent_a(rng):
    inst = plain_instance(random_coords(rng, 30))

    def agree(a, order):
        succ_a = {int(a.order[k]): int(a.order[(k + 1) % 30]) for k in range(30)}
        return sum(succ_a[order[k]] == order[(k + 1) % 30] for k in range(30))

    for _ in range(300):
        a, b = random_tour(rng, 30), random_tour(rng, 30)
        if rng.random() < 0.5:
            b = two_opt_mutation(a, rng)
        order = eax_1ab(inst, a, b, rng).order.tolist()
        assert agree(a, order) >= agree(a, [order[0], *order[:0:-1]])


def test_two_opt_example():
    assert two_opt_move(Tour.from_cities([1, 2, 3, 4]), 1, 2) == Tour.from_cities([1, 3, 2, 4])


def test_two_opt_bad_positions():
    with pytest.raises(ValueError):
        two_opt_move(Tour.from_cities([1, 2, 3, 4]), 0, 2)
    with pytest.raises(ValueError):
        two_opt_mutation(Tour.from_cities([1, 2, 3]), np.random.default_rng(0))


def test_two_opt_mutation_properties(rng):
    for _ in range(10_000):
        n = int(rng.integers(4, 20))
        t = random_tour(rng, n)
        u = two_opt_mutation(t, rng)
        assert u.order[0] == 0 and sorted(u.order.tolist()) == list(range(n))
        assert len(t.edges() ^ u.edges()) in (0, 4)


def test_two_opt_changes_exactly_two_edges_except_full_reversal(rng):
    t = random_tour(rng, 9)
    for i in range(1, 8):
        for j in range(i + 1, 9):
            diff = t.edges() - two_opt_move(t, i, j).edges()
            assert len(diff) == (0 if (i, j) == (1, 8) else 2)
