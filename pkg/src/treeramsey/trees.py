"""Trees, their bipartition profiles, and constructive tree lemmas.

Vertices are always ``0..n-1``.  A :class:`Tree` stores only its edge list;
adjacency and the bipartition are derived lazily and cached on the instance.
"""

from __future__ import annotations

import heapq
import itertools
import json
import math
import random
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence

from .errors import NotFound


def _norm_edges(edges) -> tuple[tuple[int, int], ...]:
    out = []
    for u, v in edges:
        u, v = int(u), int(v)
        out.append((u, v) if u < v else (v, u))
    return tuple(out)


@dataclass(frozen=True)
class Forest:
    """An acyclic graph on ``0..n-1``; components may be disconnected."""

    n: int
    edges: tuple[tuple[int, int], ...] = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, "edges", _norm_edges(self.edges))
        if self.n < 0:
            raise ValueError("vertex count must be nonnegative")
        seen = set()
        parent = list(range(self.n))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for u, v in self.edges:
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise ValueError(f"edge {(u, v)} out of range for n={self.n}")
            if u == v:
                raise ValueError("loops are not allowed")
            if (u, v) in seen:
                raise ValueError(f"duplicate edge {(u, v)}")
            seen.add((u, v))
            ru, rv = find(u), find(v)
            if ru == rv:
                raise ValueError(f"edge {(u, v)} closes a cycle")
            parent[ru] = rv

    @cached_property
    def adj(self) -> tuple[tuple[int, ...], ...]:
        nbrs: list[list[int]] = [[] for _ in range(self.n)]
        for u, v in self.edges:
            nbrs[u].append(v)
            nbrs[v].append(u)
        return tuple(tuple(sorted(x)) for x in nbrs)

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    @cached_property
    def sides(self) -> tuple[int, ...]:
        """A proper 2-colouring (0/1); each component's lowest vertex gets 0."""
        side = [-1] * self.n
        for s in range(self.n):
            if side[s] >= 0:
                continue
            side[s] = 0
            queue = deque([s])
            while queue:
                x = queue.popleft()
                for y in self.adj[x]:
                    if side[y] < 0:
                        side[y] = 1 - side[x]
                        queue.append(y)
        return tuple(side)

    def components(self) -> list[list[int]]:
        seen = [False] * self.n
        comps = []
        for s in range(self.n):
            if seen[s]:
                continue
            seen[s] = True
            comp, stack = [s], [s]
            while stack:
                x = stack.pop()
                for y in self.adj[x]:
                    if not seen[y]:
                        seen[y] = True
                        comp.append(y)
                        stack.append(y)
            comps.append(sorted(comp))
        return comps

    def leaves(self) -> list[int]:
        return [v for v in range(self.n) if len(self.adj[v]) == 1]

    def max_degree(self) -> int:
        return max((len(a) for a in self.adj), default=0)

    def __len__(self):
        return self.n


@dataclass(frozen=True)
class Tree(Forest):
    """A tree on ``0..n-1`` (connected, exactly ``n-1`` edges)."""

    def __post_init__(self):
        super().__post_init__()
        if self.n < 1:
            raise ValueError("a tree needs at least one vertex")
        if len(self.edges) != self.n - 1:
            raise ValueError(f"a tree on {self.n} vertices needs {self.n - 1} edges, got {len(self.edges)}")

    @cached_property
    def classes(self) -> tuple[tuple[int, ...], tuple[int, ...]]:
        """Bipartition classes ``(V1, V2)`` with ``|V1| >= |V2|``.

        On ties the class containing vertex 0 comes first.
        """
        a = tuple(v for v in range(self.n) if self.sides[v] == 0)
        b = tuple(v for v in range(self.n) if self.sides[v] == 1)
        return (a, b) if len(a) >= len(b) else (b, a)

    @cached_property
    def large_side(self) -> tuple[int, ...]:
        """``large_side[v]`` is 1 if ``v`` lies in the larger class ``V1``, else 0."""
        big = set(self.classes[0])
        return tuple(1 if v in big else 0 for v in range(self.n))

    def to_json(self) -> dict:
        return {"n": self.n, "edges": [list(e) for e in self.edges]}

    @classmethod
    def from_json(cls, data) -> "Tree":
        if isinstance(data, str):
            data = json.loads(data)
        return cls(int(data["n"]), [tuple(e) for e in data["edges"]])

    def to_text(self) -> str:
        lines = [str(self.n)] + [f"{u} {v}" for u, v in self.edges]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "Tree":
        rows = [ln.split() for ln in text.strip().splitlines() if ln.strip()]
        n = int(rows[0][0])
        return cls(n, [(int(r[0]), int(r[1])) for r in rows[1:]])


@dataclass(frozen=True)
class TreeProfile:
    n: int
    t1: int
    t2: int
    max_degree: int
    leaf_count: int

    def as_dict(self) -> dict:
        return {"n": self.n, "t1": self.t1, "t2": self.t2,
                "maxDegree": self.max_degree, "leafCount": self.leaf_count}


def profile(tree: Tree) -> TreeProfile:
    v1, v2 = tree.classes
    return TreeProfile(tree.n, len(v1), len(v2), tree.max_degree(), len(tree.leaves()))


# ---------------------------------------------------------------------------
# named families and generators


def path(n: int) -> Tree:
    """Path on ``n`` vertices."""
    return Tree(n, [(i, i + 1) for i in range(n - 1)])


def star(k: int) -> Tree:
    """``K_{1,k}`` with centre 0."""
    return Tree(k + 1, [(0, i) for i in range(1, k + 1)])


def spider(legs: int, length: int) -> Tree:
    """Centre 0 with ``legs`` pendant paths of ``length`` edges each."""
    edges = []
    nxt = 1
    for _ in range(legs):
        prev = 0
        for _ in range(length):
            edges.append((prev, nxt))
            prev = nxt
            nxt += 1
    return Tree(nxt, edges)


def broom(handle: int, bristles: int) -> Tree:
    """Path on ``handle`` vertices with ``bristles`` leaves hung on its last vertex."""
    edges = [(i, i + 1) for i in range(handle - 1)]
    end = handle - 1
    edges += [(end, handle + j) for j in range(bristles)]
    return Tree(handle + bristles, edges)


def double_star(a: int, b: int) -> Tree:
    """``D_{a,b}``: adjacent centres carrying ``a-1`` and ``b-1`` leaves."""
    edges = [(0, 1)]
    nxt = 2
    for centre, k in ((0, a - 1), (1, b - 1)):
        for _ in range(k):
            edges.append((centre, nxt))
            nxt += 1
    return Tree(nxt, edges)


def make_caterpillar(t1: int, t2: int) -> Tree:
    """Low-degree tree with bipartition class sizes ``t1 >= t2``.

    Spine ``v_1..v_{2 t2 - 1}``; the ``t1 - t2 + 1`` leaves hang off the odd
    spine positions, spread as evenly as possible.  The maximum degree is at
    most ``ceil((t1 + t2 + 1) / t2)``.
    """
    if t2 < 1 or t1 < t2:
        raise ValueError(f"need t1 >= t2 >= 1, got ({t1}, {t2})")
    spine = 2 * t2 - 1
    edges = [(i, i + 1) for i in range(spine - 1)]
    q, rem = divmod(t1 - t2 + 1, t2)
    nxt = spine
    for i in range(t2):
        for _ in range(q + (1 if i < rem else 0)):
            edges.append((2 * i, nxt))
            nxt += 1
    return Tree(nxt, edges)


def make_perfect_ternary(C: int) -> Tree:
    """Perfect ternary tree with ``C + 1`` levels (root of degree 3, ``3^C`` leaves)."""
    if C < 0:
        raise ValueError("C must be nonnegative")
    edges = []
    level = [0]
    nxt = 1
    for _ in range(C):
        new = []
        for p in level:
            for _ in range(3):
                edges.append((p, nxt))
                new.append(nxt)
                nxt += 1
        level = new
    return Tree(nxt, edges)


def ternary_levels(C: int) -> list[list[int]]:
    """Vertex labels of :func:`make_perfect_ternary` grouped by depth."""
    levels, start = [], 0
    for i in range(C + 1):
        levels.append(list(range(start, start + 3 ** i)))
        start += 3 ** i
    return levels


def prufer_decode(seq: Sequence[int], n: int) -> Tree:
    if n == 1:
        return Tree(1, [])
    if n == 2:
        return Tree(2, [(0, 1)])
    degree = [1] * n
    for x in seq:
        degree[x] += 1
    heap = [v for v in range(n) if degree[v] == 1]
    heapq.heapify(heap)
    edges = []
    for x in seq:
        leaf = heapq.heappop(heap)
        edges.append((leaf, x))
        degree[x] -= 1
        if degree[x] == 1:
            heapq.heappush(heap, x)
    u, v = heapq.heappop(heap), heapq.heappop(heap)
    edges.append((u, v))
    return Tree(n, edges)


def random_tree(n: int, rng: random.Random) -> Tree:
    """Uniform labelled tree on ``n`` vertices via a random Prüfer code."""
    if n <= 2:
        return prufer_decode([], n)
    return prufer_decode([rng.randrange(n) for _ in range(n - 2)], n)


def _rooted_code(tree: Forest, root: int, banned: int = -1) -> str:
    # AHU encoding, iterative to avoid recursion limits on long paths
    order, parent = [], {root: banned}
    stack = [root]
    while stack:
        x = stack.pop()
        order.append(x)
        for y in tree.adj[x]:
            if y != parent[x]:
                parent[y] = x
                stack.append(y)
    code = {}
    for x in reversed(order):
        kids = sorted(code[y] for y in tree.adj[x] if y != parent[x])
        code[x] = "(" + "".join(kids) + ")"
    return code[root]


def tree_centres(tree: Tree) -> list[int]:
    if tree.n <= 2:
        return list(range(tree.n))
    deg = [len(a) for a in tree.adj]
    layer = [v for v in range(tree.n) if deg[v] == 1]
    remaining = tree.n
    while remaining > 2:
        remaining -= len(layer)
        nxt = []
        for v in layer:
            for y in tree.adj[v]:
                deg[y] -= 1
                if deg[y] == 1:
                    nxt.append(y)
        layer = nxt
    return sorted(layer)


def canonical_form(tree: Tree) -> str:
    """Isomorphism invariant that is complete for trees."""
    return min(_rooted_code(tree, c) for c in tree_centres(tree))


def all_trees(n: int) -> list[Tree]:
    """One representative per isomorphism class of trees on ``n`` vertices."""
    if n <= 2:
        return [prufer_decode([], n)]
    reps: dict[str, Tree] = {}
    # every labelled tree has a Prüfer code, so this is complete; fine for n <= 8
    for seq in itertools.product(range(n), repeat=n - 2):
        t = prufer_decode(seq, n)
        key = canonical_form(t)
        if key not in reps:
            reps[key] = t
    return [reps[k] for k in sorted(reps)]


def parse_named(spec: str) -> Tree:
    """Parse shorthand tree names used by the CLI.

    ``pathK`` (K vertices), ``starK`` (``K_{1,K}``), ``caterpillar:t1,t2``,
    ``spider:legs,len``, ``broom:handle,bristles``, ``doublestar:a,b``,
    ``thm13:C,r`` and ``thm14:C,rho,r`` (the large tree of those families).
    """
    s = spec.strip().lower()
    if ":" in s:
        name, args = s.split(":", 1)
        nums = [int(x) for x in args.split(",")]
    else:
        head = s.rstrip("0123456789")
        name, nums = head, [int(s[len(head):])] if s[len(head):] else []
    if name == "path":
        return path(*nums)
    if name == "star":
        return star(*nums)
    if name == "caterpillar":
        return make_caterpillar(*nums)
    if name == "spider":
        return spider(*nums)
    if name == "broom":
        return broom(*nums)
    if name == "doublestar":
        return double_star(*nums)
    if name == "ternary":
        return make_perfect_ternary(*nums)
    if name in ("thm13", "thm14"):
        from . import counterexamples

        gen = counterexamples.gen_thm13 if name == "thm13" else counterexamples.gen_thm14
        return gen(*nums).T
    raise ValueError(f"unknown tree shorthand {spec!r}")


# ---------------------------------------------------------------------------
# transforms


def pad_large_class(tree: Tree, k: int) -> Tree:
    """Hang a new leaf on ``k`` leaves of the larger bipartition class.

    The new leaves land in the smaller class, so the profile moves from
    ``(t1, t2)`` to ``(t1, t2 + k)``.
    """
    if k < 0:
        raise ValueError("k must be nonnegative")
    if k == 0:
        return tree
    v1, v2 = tree.classes
    candidates = []
    for cls in (v1, v2) if len(v1) == len(v2) else (v1,):
        lv = [v for v in cls if tree.degree(v) == 1]
        if len(lv) > len(candidates):
            candidates = lv
    if len(candidates) < k:
        raise ValueError(f"only {len(candidates)} leaves in the larger class, cannot pad {k}")
    edges = list(tree.edges)
    for i, leaf in enumerate(sorted(candidates)[:k]):
        edges.append((leaf, tree.n + i))
    return Tree(tree.n + k, edges)


def glue_trees(base: Tree, leaf_list: Sequence[int], glued: Sequence[tuple[Tree, int]]) -> Tree:
    """Identify each ``leaf_list[i]`` of ``base`` with the root of ``glued[i]``."""
    if len(leaf_list) != len(glued):
        raise ValueError("leaf_list and glued must have equal length")
    if len(set(leaf_list)) != len(leaf_list):
        raise ValueError("attachment points must be distinct")
    for x in leaf_list:
        if base.degree(x) > 1:
            raise ValueError(f"vertex {x} is not a leaf of the base tree")
    edges = list(base.edges)
    nxt = base.n
    for at, (piece, root) in zip(leaf_list, glued):
        label = {root: at}
        for v in range(piece.n):
            if v != root:
                label[v] = nxt
                nxt += 1
        edges.extend((label[u], label[v]) for u, v in piece.edges)
    return Tree(nxt, edges)


# ---------------------------------------------------------------------------
# bare paths and the paths/leaves dichotomy


def _threads(tree: Tree) -> list[list[int]]:
    """Maximal paths whose internal vertices all have degree 2."""
    if tree.n < 2:
        return []
    deg = [len(a) for a in tree.adj]
    threads, seen = [], set()
    for s in range(tree.n):
        if deg[s] == 2:
            continue
        for first in tree.adj[s]:
            seq, prev, cur = [s], s, first
            while deg[cur] == 2:
                seq.append(cur)
                nxt = tree.adj[cur][0] if tree.adj[cur][0] != prev else tree.adj[cur][1]
                prev, cur = cur, nxt
            seq.append(cur)
            key = (min(seq[0], seq[-1]), max(seq[0], seq[-1]), tuple(sorted(seq[1:-1])))
            if key not in seen:
                seen.add(key)
                threads.append(seq)
    return threads


def bare_paths(tree: Tree, k: int, avoid: Iterable[int] = ()) -> list[list[int]]:
    """Vertex-disjoint bare paths with ``k`` edges, collected greedily along threads.

    Vertices in ``avoid`` are never used.
    """
    if k < 1:
        raise ValueError("k must be at least 1")
    used = set(avoid)
    found = []
    threads = sorted(_threads(tree), key=lambda s: (-len(s), s))
    for seq in threads:
        i = 0
        while i + k < len(seq):
            window = seq[i:i + k + 1]
            if used.isdisjoint(window):
                found.append(window)
                used.update(window)
                i += k + 1
            else:
                i += 1
    return found


@dataclass
class DichotomyWitness:
    kind: str  # "leaves" or "paths"
    items: list
    required: Fraction

    def __len__(self):
        return len(self.items)


def verify_paths_leaf_dichotomy(tree: Tree, k: int, ell: int) -> DichotomyWitness:
    """Return at least ``ell`` leaves, or at least ``n/(k+1) - (2 ell - 2)`` disjoint bare paths."""
    if k < 1 or ell < 1:
        raise ValueError("k and ell must be positive")
    leaves = tree.leaves()
    if len(leaves) >= ell:
        return DichotomyWitness("leaves", leaves, Fraction(ell))
    need = Fraction(tree.n, k + 1) - (2 * ell - 2)
    paths = bare_paths(tree, k)
    if len(paths) >= need:
        return DichotomyWitness("paths", paths, need)
    raise AssertionError(
        f"paths/leaves dichotomy failed: {len(leaves)} leaves < {ell} and {len(paths)} paths < {need}")


# ---------------------------------------------------------------------------
# decompositions


@dataclass(frozen=True)
class TreeDecomposition:
    part1: frozenset
    part2: frozenset
    shared: int


@dataclass(frozen=True)
class CutPartition:
    set_a: frozenset
    set_b: frozenset
    boundary: frozenset


def _components_without(tree: Forest, removed: set) -> list[list[int]]:
    seen = set(removed)
    comps = []
    for s in range(tree.n):
        if s in seen:
            continue
        seen.add(s)
        comp, stack = [s], [s]
        while stack:
            x = stack.pop()
            for y in tree.adj[x]:
                if y not in seen:
                    seen.add(y)
                    comp.append(y)
                    stack.append(y)
        comps.append(comp)
    return comps


def _subset_sums(weights: Sequence[int]) -> dict[int, tuple[int, ...]]:
    """Map every reachable subset sum to one index tuple realising it."""
    reach: dict[int, tuple[int, ...]] = {0: ()}
    for i, w in enumerate(weights):
        for s, idx in list(reach.items()):
            if s + w not in reach:
                reach[s + w] = idx + (i,)
    return reach


def is_subtree(tree: Forest, verts) -> bool:
    verts = set(verts)
    if not verts:
        return False
    start = next(iter(verts))
    seen, stack = {start}, [start]
    while stack:
        x = stack.pop()
        for y in tree.adj[x]:
            if y in verts and y not in seen:
                seen.add(y)
                stack.append(y)
    return seen == verts


def check_decomposition(tree: Tree, dec: TreeDecomposition) -> bool:
    return (dec.part1 & dec.part2 == {dec.shared}
            and dec.part1 | dec.part2 == set(range(tree.n))
            and is_subtree(tree, dec.part1) and is_subtree(tree, dec.part2))


def decompose_balanced(tree: Tree) -> TreeDecomposition:
    """Two subtrees sharing one vertex, sizes in ``[ceil(n/3), ceil(2n/3)]``.

    Among all valid splits the most balanced one is returned; ``part1`` is
    the smaller part.
    """
    n = tree.n
    if n < 2:
        raise ValueError("need at least 2 vertices")
    lo, hi = -(-n // 3), -(-2 * n // 3)
    best = None
    for v in range(n):
        comps = _components_without(tree, {v})
        sums = _subset_sums([len(c) for c in comps])
        for s, idx in sums.items():
            a, b = 1 + s, n - s
            if lo <= a <= hi and lo <= b <= hi:
                score = (abs(a - b), v)
                if best is None or score < best[0]:
                    best = (score, v, comps, idx)
    if best is None:
        raise AssertionError("balanced decomposition not found")
    _, v, comps, idx = best
    chosen = {v}.union(*(comps[i] for i in idx)) if idx else {v}
    rest = (set(range(n)) - chosen) | {v}
    p1, p2 = (chosen, rest) if len(chosen) <= len(rest) else (rest, chosen)
    return TreeDecomposition(frozenset(p1), frozenset(p2), v)


def decompose_bipartite_skew(tree: Tree, mu) -> TreeDecomposition:
    """Decomposition whose ``part1`` has class imbalance in ``[10 mu n, 25 mu n]``.

    Imbalance counts ``part1 ∩ V1`` minus ``part1 ∩ V2`` with ``V1`` the
    larger class.  Raises :class:`NotFound` when the class ratio is below 1.1
    or no decomposition lands in the window.
    """
    mu = Fraction(mu)
    if not 0 < mu < 1:
        raise ValueError("mu must lie in (0, 1)")
    n = tree.n
    v1, v2 = tree.classes
    if 10 * len(v1) < 11 * len(v2):
        raise NotFound("class ratio below 1.1")
    lo, hi = 10 * mu * n, 25 * mu * n
    big = tree.large_side
    sign = [1 if big[v] else -1 for v in range(n)]
    for v in range(n):
        comps = _components_without(tree, {v})
        reach = {sign[v]: ()}
        for i, c in enumerate(comps):
            w = sum(sign[x] for x in c)
            for s, idx in list(reach.items()):
                if s + w not in reach:
                    reach[s + w] = idx + (i,)
        for s in sorted(reach):
            if lo <= s <= hi:
                idx = reach[s]
                part1 = {v}.union(*(comps[i] for i in idx)) if idx else {v}
                part2 = (set(range(n)) - part1) | {v}
                return TreeDecomposition(frozenset(part1), frozenset(part2), v)
    raise NotFound(f"no decomposition with imbalance in [{lo}, {hi}] at n={n}")


def check_cut(tree: Tree, cut: CutPartition, epsilon=None) -> bool:
    a, b = set(cut.set_a), set(cut.set_b)
    if a & b or a | b != set(range(tree.n)) or not is_subtree(tree, a):
        return False
    boundary = {x for x in a if any(y in b for y in tree.adj[x])}
    if boundary != set(cut.boundary) or len(boundary) > 2:
        return False
    if any(y in boundary for x in boundary for y in tree.adj[x]):
        return False
    if epsilon is not None:
        bound = (Fraction(2, 3) - Fraction(epsilon)) * tree.n
        if len(a) > bound or len(b) > bound:
            return False
    return True


def cut_with_small_boundary(tree: Tree, epsilon) -> CutPartition:
    """Split ``V(T) = A ∪ B`` with ``T[A]`` a tree and an independent boundary of size <= 2.

    Both sides have at most ``(2/3 - epsilon) n`` vertices.  One-vertex
    boundaries are tried before two-vertex ones; the most balanced split wins
    within each stage.
    """
    eps = Fraction(epsilon)
    if not 0 < eps < Fraction(1, 6):
        raise ValueError("epsilon must lie in (0, 1/6)")
    n = tree.n
    bound = (Fraction(2, 3) - eps) * n
    if bound < 1:
        raise NotFound("size bound unsatisfiable")
    everything = set(range(n))

    def attempt(fixed: set, free: list[list[int]]):
        sums = _subset_sums([len(c) for c in free])
        best = None
        for s, idx in sums.items():
            a = len(fixed) + s
            if a <= bound and n - a <= bound:
                if best is None or abs(2 * a - n) < best[0]:
                    best = (abs(2 * a - n), idx)
        if best is None:
            return None
        a_set = set(fixed).union(*(free[i] for i in best[1])) if best[1] else set(fixed)
        b_set = everything - a_set
        boundary = {x for x in a_set if any(y in b_set for y in tree.adj[x])}
        return CutPartition(frozenset(a_set), frozenset(b_set), frozenset(boundary))

    def better(a, b):
        if a is None:
            return b
        if b is None:
            return a
        return b if abs(2 * len(b.set_a) - n) < abs(2 * len(a.set_a) - n) else a

    best = None
    for d in range(n):
        best = better(best, attempt({d}, _components_without(tree, {d})))
    if best is not None:
        return best
    for d1 in range(n):
        for d2 in range(d1 + 1, n):
            if d2 in tree.adj[d1]:
                continue
            comps = _components_without(tree, {d1, d2})
            # the component holding the interior of the d1-d2 path must join A
            bridge = [c for c in comps
                      if any(d1 in tree.adj[x] for x in c) and any(d2 in tree.adj[x] for x in c)]
            fixed = {d1, d2}.union(*bridge) if bridge else {d1, d2}
            free = [c for c in comps if c not in bridge]
            best = better(best, attempt(fixed, free))
    if best is not None:
        return best
    raise NotFound(f"no cut with boundary <= 2 and sides <= {bound}")


# ---------------------------------------------------------------------------


def maxdeg_bound(t1: int, t2: int) -> int:
    return math.ceil((t1 + t2 + 1) / t2)
