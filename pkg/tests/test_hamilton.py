import itertools
import random

import networkx as nx
from hypothesis import given, strategies as st

from treeramsey.hamilton import dirac_ok, hamilton_cycle, is_hamilton_cycle


def random_adj(r, n, p):
    adj = [set() for _ in range(n)]
    for u, v in itertools.combinations(range(n), 2):
        if r.random() < p:
            adj[u].add(v)
            adj[v].add(u)
    return adj


def dirac_graph(r, n):
    """Random graph, then edges added at low-degree vertices until min degree >= n/2."""
    adj = random_adj(r, n, r.random() * 0.6)
    for v in range(n):
        others = [y for y in range(n) if y != v and y not in adj[v]]
        r.shuffle(others)
        while 2 * len(adj[v]) < n:
            y = others.pop()
            adj[v].add(y)
            adj[y].add(v)
    return adj


def brute_hamiltonian(adj):
    n = len(adj)
    for perm in itertools.permutations(range(1, n)):
        cyc = (0,) + perm
        if all(cyc[(i + 1) % n] in adj[cyc[i]] for i in range(n)):
            return True
    return False


def test_examples():
    k4 = [set(range(4)) - {v} for v in range(4)]
    assert dirac_ok(k4)
    assert is_hamilton_cycle(k4, hamilton_cycle(k4))
    petersen = [set(nx.petersen_graph().adj[v]) for v in range(10)]
    assert not dirac_ok(petersen)
    assert hamilton_cycle(petersen) is None
    star = [{1, 2, 3}, {0}, {0}, {0}]
    assert hamilton_cycle(star) is None
    assert hamilton_cycle([{1}, {0}]) is None


def test_verifier():
    c4 = [{1, 3}, {0, 2}, {1, 3}, {0, 2}]
    assert is_hamilton_cycle(c4, [0, 1, 2, 3])
    assert not is_hamilton_cycle(c4, [0, 2, 1, 3])
    assert not is_hamilton_cycle(c4, [0, 1, 2])


@given(st.integers(0, 10**9), st.integers(3, 60))
def test_dirac_graphs(seed, n):
    r = random.Random(seed)
    adj = dirac_graph(r, n)
    assert dirac_ok(adj)
    cyc = hamilton_cycle(adj, seed=seed)
    assert cyc is not None and is_hamilton_cycle(adj, cyc)


@given(st.integers(0, 10**9))
def test_never_returns_a_wrong_cycle(seed):
    r = random.Random(seed)
    n = r.randint(3, 8)
    adj = random_adj(r, n, r.random())
    cyc = hamilton_cycle(adj, seed=seed)
    if cyc is not None:
        assert is_hamilton_cycle(adj, cyc)
    else:
        assert not dirac_ok(adj)
    if not brute_hamiltonian(adj):
        assert cyc is None
