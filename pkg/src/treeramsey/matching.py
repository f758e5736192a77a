"""Bipartite matchings: Hall violators, star packings, and the cascade partition."""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass
from functools import cached_property
from typing import Sequence


@dataclass(frozen=True)
class BipartiteGraph:
    a: int
    b: int
    edges: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        edges = tuple((int(x), int(y)) for x, y in self.edges)
        if len(set(edges)) != len(edges):
            raise ValueError("duplicate edge")
        for x, y in edges:
            if not (0 <= x < self.a and 0 <= y < self.b):
                raise ValueError(f"edge {(x, y)} out of range")
        object.__setattr__(self, "edges", edges)

    @cached_property
    def adj_a(self) -> tuple[tuple[int, ...], ...]:
        out = [[] for _ in range(self.a)]
        for x, y in self.edges:
            out[x].append(y)
        return tuple(tuple(sorted(r)) for r in out)

    @cached_property
    def adj_b(self) -> tuple[tuple[int, ...], ...]:
        out = [[] for _ in range(self.b)]
        for x, y in self.edges:
            out[y].append(x)
        return tuple(tuple(sorted(r)) for r in out)

    @cached_property
    def edge_set(self) -> frozenset:
        return frozenset(self.edges)

    def neighbourhood(self, I) -> set[int]:
        out = set()
        for x in I:
            out.update(self.adj_a[x])
        return out

    def to_json(self) -> dict:
        return {"a": self.a, "b": self.b, "edges": [list(e) for e in self.edges]}

    @classmethod
    def from_json(cls, data) -> "BipartiteGraph":
        if isinstance(data, str):
            data = json.loads(data)
        return cls(int(data["a"]), int(data["b"]), tuple(tuple(e) for e in data["edges"]))


@dataclass
class Matching:
    """``mate_a[x]`` is the B-partner of ``x`` or -1; likewise ``mate_b``."""

    mate_a: list[int]
    mate_b: list[int]

    @property
    def size(self) -> int:
        return sum(1 for y in self.mate_a if y >= 0)

    def pairs(self) -> list[tuple[int, int]]:
        return [(x, y) for x, y in enumerate(self.mate_a) if y >= 0]

    @classmethod
    def from_pairs(cls, g: BipartiteGraph, pairs) -> "Matching":
        ma, mb = [-1] * g.a, [-1] * g.b
        for x, y in pairs:
            if (x, y) not in g.edge_set:
                raise ValueError(f"{(x, y)} is not an edge")
            if ma[x] >= 0 or mb[y] >= 0:
                raise ValueError("not a matching")
            ma[x], mb[y] = y, x
        return cls(ma, mb)


def max_matching(g: BipartiteGraph) -> Matching:
    """Maximum matching by repeated augmenting-path search (Kuhn, BFS variant)."""
    ma, mb = [-1] * g.a, [-1] * g.b
    for root in range(g.a):
        via: dict[int, int] = {}  # B-vertex -> A-vertex that reached it
        queue = deque([root])
        done = False
        while queue and not done:
            x = queue.popleft()
            for y in g.adj_a[x]:
                if y in via:
                    continue
                via[y] = x
                if mb[y] < 0:
                    # flip the alternating path back to the root
                    while True:
                        x = via[y]
                        old = ma[x]
                        ma[x], mb[y] = y, x
                        if x == root:
                            break
                        y = old
                    done = True
                    break
                queue.append(mb[y])
    return Matching(ma, mb)


def _alternating_reach_from_free_a(g: BipartiteGraph, m: Matching) -> tuple[set[int], set[int]]:
    ra = {x for x in range(g.a) if m.mate_a[x] < 0}
    rb: set[int] = set()
    queue = deque(ra)
    while queue:
        x = queue.popleft()
        for y in g.adj_a[x]:
            if y in rb or m.mate_a[x] == y:
                continue
            rb.add(y)
            z = m.mate_b[y]
            if z >= 0 and z not in ra:
                ra.add(z)
                queue.append(z)
    return ra, rb


def _alternating_reach_from_free_b(g: BipartiteGraph, m: Matching) -> tuple[set[int], set[int]]:
    rb = {y for y in range(g.b) if m.mate_b[y] < 0}
    ra: set[int] = set()
    queue = deque(rb)
    while queue:
        y = queue.popleft()
        for x in g.adj_b[y]:
            if x in ra or m.mate_b[y] == x:
                continue
            ra.add(x)
            z = m.mate_a[x]
            if z >= 0 and z not in rb:
                rb.add(z)
                queue.append(z)
    return ra, rb


def hall_violator(g: BipartiteGraph) -> frozenset | None:
    """A set ``I`` of A-vertices with ``|N(I)| < |I|``, or None if A can be saturated.

    Taken from the alternating forest grown from the unmatched A-vertices of
    a maximum matching (the König argument).
    """
    m = max_matching(g)
    if m.size == g.a:
        return None
    ra, rb = _alternating_reach_from_free_a(g, m)
    I = frozenset(ra)
    assert len(g.neighbourhood(I)) < len(I)
    return I


@dataclass
class StarPacking:
    stars: dict[int, tuple[int, ...]] | None
    violator: frozenset | None = None

    @property
    def ok(self) -> bool:
        return self.stars is not None


def star_packing(g: BipartiteGraph, demands: Sequence[int]) -> StarPacking:
    """Disjoint stars centred at each ``a`` with exactly ``demands[a]`` leaves.

    Reduced to a matching by cloning ``a`` ``demands[a]`` times.  On failure
    the returned violator ``I`` has ``|N(I)| < sum of demands over I``.
    """
    if len(demands) != g.a or any(d < 0 for d in demands):
        raise ValueError("need one nonnegative demand per A-vertex")
    owner = []
    edges = []
    for x in range(g.a):
        for _ in range(demands[x]):
            clone = len(owner)
            owner.append(x)
            edges.extend((clone, y) for y in g.adj_a[x])
    big = BipartiteGraph(len(owner), g.b, tuple(edges))
    m = max_matching(big)
    if m.size == big.a:
        stars: dict[int, list[int]] = {x: [] for x in range(g.a)}
        for clone, y in m.pairs():
            stars[owner[clone]].append(y)
        return StarPacking({x: tuple(sorted(v)) for x, v in stars.items()})
    ra, _ = _alternating_reach_from_free_a(big, m)
    I = frozenset(owner[c] for c in ra)
    assert len(g.neighbourhood(I)) < sum(demands[x] for x in I)
    return StarPacking(None, I)


@dataclass(frozen=True)
class CascadePartition:
    a_plus: frozenset
    a_minus: frozenset
    a_bar: frozenset
    a_prime: frozenset
    b_plus: frozenset
    b_minus: frozenset
    b_bar: frozenset
    b_prime: frozenset

    def as_dict(self) -> dict:
        return {k: sorted(v) for k, v in self.__dict__.items()}


def cascade_violations(g: BipartiteGraph, p: CascadePartition, m: Matching) -> list[str]:
    """Independent check of the cascade properties; empty list means all hold."""
    out = []
    a_sets = [p.a_plus, p.a_minus, p.a_bar, p.a_prime]
    b_sets = [p.b_plus, p.b_minus, p.b_bar, p.b_prime]
    if sum(map(len, a_sets)) != g.a or set().union(*a_sets) != set(range(g.a)):
        out.append("A-sets do not partition A")
    if sum(map(len, b_sets)) != g.b or set().union(*b_sets) != set(range(g.b)):
        out.append("B-sets do not partition B")
    for name, src, dst in (("A+->B-", p.a_plus, p.b_minus), ("A-->B+", p.a_minus, p.b_plus),
                           ("Abar->Bbar", p.a_bar, p.b_bar)):
        for x in src:
            if m.mate_a[x] not in dst:
                out.append(f"{name}: {x} matched outside")
    for x in p.a_prime:
        if m.mate_a[x] >= 0:
            out.append(f"A' vertex {x} is matched")
    for y in p.b_prime:
        if m.mate_b[y] >= 0:
            out.append(f"B' vertex {y} is matched")
    left1, right1 = p.a_prime | p.a_minus, p.b_prime | p.b_minus | p.b_bar
    left2, right2 = p.a_prime | p.a_minus | p.a_bar, p.b_prime | p.b_minus
    for x, y in g.edges:
        if x in left1 and y in right1:
            out.append(f"edge {(x, y)} inside G[A' u A-, B' u B- u Bbar]")
        if x in left2 and y in right2:
            out.append(f"edge {(x, y)} inside G[A' u A- u Abar, B' u B-]")
    return out


def cascade_partition(g: BipartiteGraph, m: Matching) -> CascadePartition:
    """Split the matched vertices so the two cascade subgraphs are empty.

    ``A-`` (matched to ``B+``) is what unmatched A-vertices reach along
    alternating paths; ``B-`` (matched to ``A+``) is what unmatched
    B-vertices reach.  In a maximum matching the two reaches are disjoint,
    and everything else matched goes to ``Abar``/``Bbar``.
    """
    if m.size != max_matching(g).size:
        raise ValueError("matching is not maximum")
    ra, rb = _alternating_reach_from_free_a(g, m)
    sa, sb = _alternating_reach_from_free_b(g, m)
    a_prime = frozenset(x for x in range(g.a) if m.mate_a[x] < 0)
    b_prime = frozenset(y for y in range(g.b) if m.mate_b[y] < 0)
    a_minus = frozenset(ra - a_prime)
    b_plus = frozenset(m.mate_a[x] for x in a_minus)
    b_minus = frozenset(sb - b_prime)
    a_plus = frozenset(m.mate_b[y] for y in b_minus)
    if a_plus & a_minus:
        raise AssertionError("alternating reaches overlap; matching cannot be maximum")
    a_bar = frozenset(range(g.a)) - a_prime - a_minus - a_plus
    b_bar = frozenset(m.mate_a[x] for x in a_bar)
    p = CascadePartition(a_plus, a_minus, a_bar, a_prime, b_plus, b_minus, b_bar, b_prime)
    bad = cascade_violations(g, p, m)
    if bad:
        raise AssertionError("cascade partition check failed: " + "; ".join(bad[:3]))
    return p
