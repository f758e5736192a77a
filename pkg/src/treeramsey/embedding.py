"""Exact tree-in-graph containment by backtracking over bitset adjacency.

Hosts are given as a sequence of integer bitmask rows (``rows[v]`` has bit
``u`` set when ``uv`` is an edge).  Every search can carry a node budget;
running out yields the verdict ``None`` (unknown), never a false negative.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable, Sequence

from .colouring import RED, TwoColouring, bits
from .trees import Forest, Tree, _rooted_code


class BudgetExceeded(Exception):
    pass


@dataclass
class SearchResult:
    """``verdict`` is True (found), False (exhausted) or None (budget hit)."""

    verdict: bool | None
    mapping: tuple[int, ...] | None = None
    nodes: int = 0

    @property
    def found(self) -> bool:
        return self.verdict is True

    @property
    def status(self) -> str:
        return {True: "found", False: "no", None: "unknown"}[self.verdict]

    def mapping_dict(self) -> dict | None:
        if self.mapping is None:
            return None
        return {str(i): v for i, v in enumerate(self.mapping)}


def verify_embedding(rows: Sequence[int], pattern: Forest, mapping: Sequence[int]) -> bool:
    """Independent check: injective and every pattern edge lands on a host edge."""
    if len(mapping) != pattern.n or len(set(mapping)) != pattern.n:
        return False
    if any(not 0 <= x < len(rows) for x in mapping):
        return False
    return all(rows[mapping[u]] >> mapping[v] & 1 for u, v in pattern.edges)


def twin_classes(rows: Sequence[int]) -> list[int]:
    """Label each host vertex by a twin class.

    Two vertices are twins when swapping them is an automorphism of the host
    (equal open or equal closed neighbourhoods).  A vertex cannot have a true
    twin and a false twin at the same time, so this is a partition.
    """
    n = len(rows)
    label = list(range(n))
    closed: dict[int, int] = {}
    opened: dict[int, int] = {}
    for v in range(n):
        c = rows[v] | (1 << v)
        closed.setdefault(c, v)
        opened.setdefault(rows[v], v)
    for v in range(n):
        c = closed[rows[v] | (1 << v)]
        o = opened[rows[v]]
        label[v] = c if c != v else o
    # make labels canonical: the smallest member of each class
    groups: dict[int, int] = {}
    for v in range(n):
        groups.setdefault(label[v], v)
    return [groups[label[v]] for v in range(n)]


def _components(rows: Sequence[int]) -> list[int]:
    n = len(rows)
    comp = [0] * n
    done = 0
    for s in range(n):
        if done >> s & 1:
            continue
        m, frontier = 1 << s, 1 << s
        while frontier:
            nxt = 0
            for v in bits(frontier):
                nxt |= rows[v]
            frontier = nxt & ~m
            m |= frontier
        done |= m
        for v in bits(m):
            comp[v] = m
    return comp


def _two_colour(rows: Sequence[int], comp_mask: int) -> tuple[int, int] | None:
    """Class masks of a connected component, or None if it is not bipartite."""
    start = (comp_mask & -comp_mask).bit_length() - 1
    side = {start: 0}
    queue = deque([start])
    masks = [0, 0]
    masks[0] |= 1 << start
    while queue:
        x = queue.popleft()
        for y in bits(rows[x]):
            if y not in side:
                side[y] = 1 - side[x]
                masks[side[y]] |= 1 << y
                queue.append(y)
            elif side[y] == side[x]:
                return None
    return masks[0], masks[1]


@dataclass
class _Plan:
    order: list[int]
    parent: list[int]
    children: list[list[int]]
    degree: list[int]
    side: list[int]
    class_sizes: tuple[int, int]


def _plan(pattern: Forest, root: int) -> _Plan:
    n = pattern.n
    parent = [-1] * n
    order = [root]
    seen = {root}
    queue = deque([root])
    while queue:
        x = queue.popleft()
        # high-degree children first so the tightest constraints fail early
        for y in sorted(pattern.adj[x], key=lambda y: (-len(pattern.adj[y]), y)):
            if y not in seen:
                seen.add(y)
                parent[y] = x
                order.append(y)
                queue.append(y)
    if len(order) != n:
        raise ValueError("pattern must be connected")
    children = [[] for _ in range(n)]
    for y in order[1:]:
        children[parent[y]].append(y)
    side = [0] * n
    for y in order[1:]:
        side[y] = 1 - side[parent[y]]
    c0 = side.count(0)
    return _Plan(order, parent, children, [len(a) for a in pattern.adj], side, (c0, n - c0))


class _Searcher:
    def __init__(self, rows: Sequence[int], pattern: Tree, budget: int | None):
        self.rows = list(rows)
        self.N = len(rows)
        self.pattern = pattern
        self.budget = budget
        self.nodes = 0
        self.hdeg = [r.bit_count() for r in self.rows]
        self.twin = twin_classes(self.rows)
        self.comp = _components(self.rows)
        self._bip: dict[int, tuple[int, int] | None] = {}

    def bipartition(self, comp_mask: int):
        if comp_mask not in self._bip:
            self._bip[comp_mask] = _two_colour(self.rows, comp_mask)
        return self._bip[comp_mask]

    def _deg_mask(self, k: int) -> int:
        m = 0
        for v in range(self.N):
            if self.hdeg[v] >= k:
                m |= 1 << v
        return m

    def root_ok(self, plan: _Plan, host_root: int) -> bool:
        comp = self.comp[host_root]
        if comp.bit_count() < self.pattern.n:
            return False
        bip = self.bipartition(comp)
        if bip is not None:
            mine = bip[0] if bip[0] >> host_root & 1 else bip[1]
            other = bip[1] if mine == bip[0] else bip[0]
            a, b = plan.class_sizes
            if a > mine.bit_count() or b > other.bit_count():
                return False
            self.allowed_side = (mine, other)
        else:
            self.allowed_side = None
        return True

    def run(self, plan: _Plan, host_roots: Iterable[int]) -> tuple[int, ...] | None:
        n = self.pattern.n
        order = plan.order
        self.deg_masks = {}
        for d in set(plan.degree):
            self.deg_masks[d] = self._deg_mask(d)
        for h in host_roots:
            if self.hdeg[h] < plan.degree[order[0]] and n > 1:
                continue
            if not self.root_ok(plan, h):
                continue
            img = [-1] * n
            img[order[0]] = h
            self.nodes += 1
            if self._extend(plan, img, 1, 1 << h):
                return tuple(img)
        return None

    def _extend(self, plan: _Plan, img: list[int], i: int, used: int) -> bool:
        order = plan.order
        if i == len(order):
            return True
        if self.budget is not None and self.nodes > self.budget:
            raise BudgetExceeded
        x = order[i]
        p = img[plan.parent[x]]
        cand = self.rows[p] & ~used & self.deg_masks[plan.degree[x]]
        if self.allowed_side is not None:
            cand &= self.allowed_side[plan.side[x]]
        tried_classes = set()
        twin = self.twin
        for h in bits(cand):
            t = twin[h]
            if t in tried_classes:
                continue
            tried_classes.add(t)
            self.nodes += 1
            img[x] = h
            nused = used | (1 << h)
            # residual check on every open vertex: enough free neighbours for unplaced children
            if self._residual_ok(plan, img, i + 1, nused) and self._extend(plan, img, i + 1, nused):
                return True
            img[x] = -1
        return False

    def _residual_ok(self, plan: _Plan, img: list[int], i: int, used: int) -> bool:
        if i >= len(plan.order):
            return True
        # parents of the not-yet-placed vertices, with how many children each still needs
        need: dict[int, int] = {}
        for y in plan.order[i:]:
            q = plan.parent[y]
            if img[q] >= 0:
                need[q] = need.get(q, 0) + 1
        for q, k in need.items():
            if (self.rows[img[q]] & ~used).bit_count() < k:
                return False
        return True


def _root_choice(pattern: Tree) -> int:
    return max(range(pattern.n), key=lambda v: (len(pattern.adj[v]), -v))


def contains_tree(rows: Sequence[int], pattern: Tree, budget: int | None = None,
                  anchor: int | None = None) -> SearchResult:
    """Decide whether the host contains a copy of ``pattern``.

    With ``anchor`` set, only copies using that host vertex count.
    """
    N = len(rows)
    n = pattern.n
    if n > N:
        return SearchResult(False, None, 0)
    if n == 1:
        if anchor is not None:
            return SearchResult(True, (anchor,), 1)
        return SearchResult(True, (0,), 1) if N else SearchResult(False, None, 0)
    s = _Searcher(rows, pattern, budget)
    try:
        if anchor is None:
            plan = _plan(pattern, _root_choice(pattern))
            # one root image per twin class, highest degree first
            reps = sorted({s.twin[v] for v in range(N)}, key=lambda v: (-s.hdeg[v], v))
            found = s.run(plan, reps)
        else:
            found = None
            seen_codes = set()
            for r in sorted(range(n), key=lambda v: (-len(pattern.adj[v]), v)):
                code = _rooted_code(pattern, r)
                if code in seen_codes:
                    continue
                seen_codes.add(code)
                found = s.run(_plan(pattern, r), [anchor])
                if found is not None:
                    # undo the rooting: the mapping is indexed by pattern vertex already
                    break
    except BudgetExceeded:
        return SearchResult(None, None, s.nodes)
    if found is None:
        return SearchResult(False, None, s.nodes)
    if not verify_embedding(rows, pattern, found):
        raise AssertionError("search produced an invalid embedding")
    return SearchResult(True, found, s.nodes)


def contains_mono(colouring: TwoColouring, pattern: Tree, colour: str,
                  budget: int | None = None, anchor: int | None = None) -> SearchResult:
    return contains_tree(colouring.rows(colour), pattern, budget=budget, anchor=anchor)


@dataclass
class ArrowVerdict:
    kind: str  # "RedT", "BlueS", "Neither", "Unknown"
    mapping: tuple[int, ...] | None = None
    nodes: int = 0

    def as_dict(self) -> dict:
        out = {"verdict": self.kind, "nodes": self.nodes}
        if self.mapping is not None:
            out["embedding"] = list(self.mapping)
        return out


def decide_arrows(colouring: TwoColouring, T: Tree, S: Tree, budget: int | None = None) -> ArrowVerdict:
    """Red ``T``, blue ``S``, neither, or unknown (budget)."""
    r = contains_mono(colouring, T, RED, budget=budget)
    if r.verdict:
        return ArrowVerdict("RedT", r.mapping, r.nodes)
    from .colouring import BLUE

    b = contains_mono(colouring, S, BLUE, budget=budget)
    if b.verdict:
        return ArrowVerdict("BlueS", b.mapping, r.nodes + b.nodes)
    if r.verdict is None or b.verdict is None:
        return ArrowVerdict("Unknown", None, r.nodes + b.nodes)
    return ArrowVerdict("Neither", None, r.nodes + b.nodes)


def brute_force_contains(rows: Sequence[int], pattern: Forest) -> bool:
    """Permutation-enumeration oracle for tiny hosts."""
    import itertools

    N = len(rows)
    if pattern.n > N:
        return False
    for perm in itertools.permutations(range(N), pattern.n):
        if all(rows[perm[u]] >> perm[v] & 1 for u, v in pattern.edges):
            return True
    return False
