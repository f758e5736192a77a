import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from treeramsey.colouring import BLUE, RED, TwoColouring, block_colouring, sample_random_colouring
from treeramsey.weights import (
    Digraph, WeightProblem, a_membership_literal, abc_partition, biclique_situation_failures,
    check_duality, colour_link_digraph, find_biclique_situation, is_weight_function, max_weight,
    qr_report,
)

ALPHAS = [Fraction(3, 2), Fraction(2), Fraction(3)]


def random_digraph(seed, nmax=10, arc_cap=None):
    r = random.Random(seed)
    n = r.randint(1, nmax)
    p = r.random()
    arcs = [(u, v) for u in range(n) for v in range(n) if u != v and r.random() < p]
    if arc_cap is not None:
        r.shuffle(arcs)
        arcs = arcs[:arc_cap]
    return Digraph(n, tuple(arcs))


def _solve(rows, rhs):
    """Gaussian elimination over the rationals; None when singular."""
    k = len(rows)
    M = [list(r) + [b] for r, b in zip(rows, rhs)]
    for c in range(k):
        piv = next((i for i in range(c, k) if M[i][c] != 0), None)
        if piv is None:
            return None
        M[c], M[piv] = M[piv], M[c]
        for i in range(k):
            if i != c and M[i][c] != 0:
                f = M[i][c] / M[c][c]
                M[i] = [a - f * b for a, b in zip(M[i], M[c])]
    return [M[i][k] / M[i][i] for i in range(k)]


def vertex_enumeration_max(p: WeightProblem) -> Fraction:
    """Maximum total weight over the basic feasible points of the polytope."""
    g = p.digraph
    m = len(g.arcs)
    if m == 0:
        return Fraction(0)
    M = p.matrix()
    cons = [(M[v], Fraction(1)) for v in range(g.n)]
    cons += [([Fraction(int(i == e)) for i in range(m)], Fraction(0)) for e in range(m)]
    best = None
    for idx in itertools.combinations(range(len(cons)), m):
        x = _solve([cons[i][0] for i in idx], [cons[i][1] for i in idx])
        if x is None or any(t < 0 for t in x):
            continue
        if any(sum(a * t for a, t in zip(M[v], x)) > 1 for v in range(g.n)):
            continue
        val = sum(x)
        best = val if best is None or val > best else best
    return best


def test_max_weight_examples():
    sol = max_weight(WeightProblem(Digraph(3, ()), 2))
    assert sol.wmax == 0 and sol.f == {}
    sol = max_weight(WeightProblem(Digraph(2, ((0, 1),)), 2))
    assert sol.wmax == 1
    sol = max_weight(WeightProblem(Digraph(2, ((0, 1), (1, 0))), 2))
    assert sol.wmax == Fraction(4, 3)
    assert set(sol.f.values()) == {Fraction(2, 3)}


@given(st.integers(0, 10**9), st.sampled_from(ALPHAS))
def test_max_weight_matches_vertex_enumeration(seed, alpha):
    g = random_digraph(seed, nmax=5, arc_cap=5)
    p = WeightProblem(g, alpha)
    sol = max_weight(p)
    assert sol.wmax == vertex_enumeration_max(p)
    assert check_duality(p, sol) == []
    assert is_weight_function(p, sol.f)


@given(st.integers(0, 10**9))
def test_wmax_monotone_in_alpha(seed):
    g = random_digraph(seed, nmax=7)
    vals = [max_weight(WeightProblem(g, a)).wmax for a in ALPHAS]
    assert vals == sorted(vals)


def test_abc_examples():
    part = abc_partition(WeightProblem(Digraph(3, ()), 2), strict=False)
    assert part.A == {0, 1, 2} and not part.B and not part.C
    # equality case: the strict form of ABC:8 cannot hold without arcs
    assert part.checks["ABC:8"] is False and part.checks["ABC:8-weak"] is True
    part = abc_partition(WeightProblem(Digraph(2, ((0, 1),)), 2))
    assert part.A == {0} and not part.B and part.C == {1}
    assert all(part.checks.values())


@given(st.integers(0, 10**9), st.sampled_from(ALPHAS))
def test_abc_inequalities(seed, alpha):
    g = random_digraph(seed, nmax=8)
    p = WeightProblem(g, alpha)
    part = abc_partition(p, strict=False)
    n = g.n
    w = part.wmax
    assert len(part.B) <= w / alpha
    assert len(part.C) <= (1 + 1 / alpha) * w - (1 + alpha) * len(part.B)
    assert len(part.A) >= n - (1 + 1 / alpha) * w
    if not part.checks["ABC:8"]:
        assert len(part.A) == n - (1 + 1 / alpha) * w and not part.B


@given(st.integers(0, 10**9), st.sampled_from(ALPHAS))
def test_a_membership_agrees_with_literal_lp(seed, alpha):
    g = random_digraph(seed, nmax=7)
    p = WeightProblem(g, alpha)
    sol = max_weight(p)
    part = abc_partition(p, sol, strict=False)
    assert part.A == {v for v in range(g.n) if a_membership_literal(p, sol.wmax, v)}


def test_random_tournaments():
    r = random.Random(8)
    for _ in range(40):
        n = r.randint(2, 8)
        arcs = tuple((u, v) if r.random() < 0.5 else (v, u) for u, v in itertools.combinations(range(n), 2))
        for a in ALPHAS:
            part = abc_partition(WeightProblem(Digraph(n, arcs), a), strict=True)
            assert part.checks["ABC:5"] and part.checks["ABC:6"]


def test_digraph_validation_and_json():
    with pytest.raises(ValueError):
        Digraph(2, ((0, 0),))
    with pytest.raises(ValueError):
        Digraph(2, ((0, 1), (0, 1)))
    with pytest.raises(ValueError):
        WeightProblem(Digraph(2, ()), Fraction(1, 2))
    g = random_digraph(4)
    assert Digraph.from_json(g.to_json()) == g


def test_link_digraph_examples():
    k3 = TwoColouring.all_red(3)
    link = colour_link_digraph(k3, 0, RED)
    assert link.labels == (1, 2) and set(link.digraph.arcs) == {(0, 1), (1, 0)}
    assert colour_link_digraph(k3, 0, BLUE).digraph.arcs == ()
    col, parts = block_colouring([5, 2], [RED, RED], BLUE)
    link = colour_link_digraph(col, 0, RED)
    inside = {link.labels.index(v) for v in parts[0] if v != 0}
    assert all(u in inside and v in inside for u, v in link.digraph.arcs)
    assert len(link.digraph.arcs) == 4 * 3


@given(st.integers(0, 10**6))
def test_link_digraph_definition(seed):
    col = sample_random_colouring(7, Fraction(1, 2), seed)
    for colour in (RED, BLUE):
        link = colour_link_digraph(col, 0, colour)
        lab = link.labels
        expect = {(i, j) for i in range(6) for j in range(6) if i != j
                  and col.colour_of(0, lab[i]) == colour and col.colour_of(lab[i], lab[j]) == colour}
        assert set(link.digraph.arcs) == expect


def test_qr_examples():
    rep = qr_report(TwoColouring.all_blue(4), 0, RED, 2)
    assert not rep.Q and rep.ok
    rep = qr_report(TwoColouring.all_red(4), 1, RED, 2)
    assert rep.checks["QR:1"] and rep.checks["QR:2"] and rep.checks["QR:3"]


@given(st.integers(0, 10**9), st.sampled_from(ALPHAS))
def test_qr_properties(seed, alpha):
    r = random.Random(seed)
    N = r.randint(2, 9)
    col = sample_random_colouring(N, Fraction(r.randint(1, 9), 10), seed)
    rep = qr_report(col, r.randrange(N), r.choice([RED, BLUE]), alpha)
    assert rep.checks["QR:1"] and rep.checks["QR:2"] and rep.checks["QR:3"]


def _biclique_host(q, rr):
    """Apex 0 red to a blue clique of size q; a red clique of size rr blue to everything else."""
    col, _ = block_colouring([1, q, rr], [RED, BLUE, RED], {(0, 1): RED, (0, 2): BLUE, (1, 2): BLUE})
    return col


def test_biclique_all_red():
    s = find_biclique_situation(TwoColouring.all_red(8), 0, 2, 2, Fraction(1, 100))
    assert not s.ok and s.reason == "wMax too large"


def test_biclique_low_degree():
    s = find_biclique_situation(TwoColouring.all_blue(8), 0, 2, 2, Fraction(1, 100))
    assert not s.ok and s.reason == "degree hypothesis"


@pytest.mark.parametrize("q,rr", [(8, 0), (12, 2), (20, 4)])
@pytest.mark.parametrize("alpha,beta", [(2, 2), (3, 2), (Fraction(3, 2), Fraction(3, 2))])
def test_biclique_constructed(q, rr, alpha, beta):
    eps = Fraction(1, 100)
    col = _biclique_host(q, rr)
    s = find_biclique_situation(col, 0, alpha, beta, eps)
    assert s.ok
    assert biclique_situation_failures(col, 0, s, alpha, beta, eps) == []
    # independent edge-by-edge check
    X, Y, z = s.X, s.Y, s.z
    assert not X & Y and z not in X | Y and 0 not in X | Y
    assert all(col.colour_of(x, y) == BLUE for x in X for y in Y)
    assert all(col.colour_of(z, u) == BLUE for u in X | Y)
    k = s.k
    assert min(len(X), len(Y)) >= (1 / Fraction(alpha) - 10 * eps) * k
    assert len(X) + len(Y) >= (1 / Fraction(alpha) + 1 / Fraction(beta) - 10 * eps) * k


def test_biclique_parameter_check():
    with pytest.raises(ValueError):
        find_biclique_situation(TwoColouring.all_red(5), 0, 2, 3, Fraction(1, 100))
