"""Embedding trees into almost complete hosts, and the four extremal case analyses.

The embedders follow the constructive proofs: greedy placement, small
gadgets for the low-degree vertices, a Hamilton cycle to harvest the rest,
and a perfect matching (or star packing) to finish.  Random choices are
retried with derived seeds and every returned map is checked edge by edge.
"""

from __future__ import annotations

import math
import random
from collections import deque
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Callable, Iterable, Sequence

from .colouring import BLUE, RED, ExtremalWitness, TwoColouring, bits, extremal_failures, to_mask
from .embedding import verify_embedding
from .errors import CaseFailed, HypothesisFailed, NotFound, RetriesExhausted, StepFailed
from .hamilton import dirac_ok, hamilton_cycle
from .matching import BipartiteGraph, max_matching, star_packing
from .trees import (Forest, Tree, _threads, bare_paths, cut_with_small_boundary, decompose_balanced,
                    decompose_bipartite_skew, profile)


@dataclass(frozen=True)
class EmbedderConfig:
    """Thresholds for the embedders.  Defaults are the constants of the proofs.

    ``max_degree`` replaces the tree degree caps (``mu n`` and ``c n / log n``)
    when set; at a few hundred vertices those caps admit almost no trees.
    """

    mu: Fraction = Fraction(1, 200)
    xi: Fraction = Fraction(1, 100)
    c: Fraction = Fraction(1)
    retry_budget: int = 20
    seed: int = 0
    max_degree: int | None = None
    path_factor: int = 10            # 10 mu n bare paths
    leaves_needed: int = 10 ** 3     # xi n / 10^3 leaves required
    leaf_divisor: int = 10 ** 4      # |L| = xi n / 10^4
    bip_leaf_divisor: int = 10 ** 5  # |L| = xi n / 10^5 in the bipartite version
    reservoir: Fraction = Fraction(1, 20)   # |W1| = n / 20
    bip_slack: Fraction = Fraction(1, 10)   # |V1| + n/10 <= |U1|
    any_slack: Fraction = Fraction(1, 5)    # |V1| + n/5 <= |U1|
    any_reservoir: Fraction = Fraction(1, 10)  # |Z| = n / 10
    any_low: Fraction = Fraction(1, 4)      # n/4 <= |V1| + n/5
    any_v2: Fraction = Fraction(1, 100)     # n/100 <= |V2|
    check_profile: bool = True

    def __post_init__(self):
        for name in ("mu", "xi", "c", "reservoir", "bip_slack", "any_slack", "any_reservoir", "any_low", "any_v2"):
            object.__setattr__(self, name, Fraction(getattr(self, name)))
        if not self.mu > 0 or not 0 < self.xi <= 1:
            raise ValueError("need mu > 0 and 0 < xi <= 1")
        if self.retry_budget < 1:
            raise ValueError("retry_budget must be at least 1")

    @property
    def asymptotic_regime(self) -> bool:
        """Whether ``mu <= xi / 100`` (the proofs need ``mu`` much smaller than ``xi``)."""
        return self.mu <= self.xi / 100 and self.xi <= Fraction(1, 100)

    def degree_cap(self, n: int, kind: str) -> Fraction:
        if self.max_degree is not None:
            return Fraction(self.max_degree)
        if kind == "bare":
            return self.mu * n
        return self.c * n / Fraction(math.log(max(n, 3))).limit_denominator(10 ** 9)

    def as_dict(self) -> dict:
        return {k: (str(v) if isinstance(v, Fraction) else v) for k, v in self.__dict__.items()}


@dataclass
class Embedding:
    """``mapping[x]`` is the host vertex of pattern vertex ``x``."""

    mapping: tuple[int, ...]
    route: str
    attempts: int = 1
    info: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        return {"mapping": {str(i): v for i, v in enumerate(self.mapping)}, "route": self.route,
                "attempts": self.attempts, "info": self.info}


# ---------------------------------------------------------------------------
# helpers


def _pick(mask: int, rng: random.Random, size: int) -> int:
    for _ in range(24):
        v = rng.randrange(size)
        if mask >> v & 1:
            return v
    return rng.choice(list(bits(mask)))


def _greedy(rows, adj, order, img: dict, used: int, allowed: Callable[[int], int],
            rng: random.Random, stage: str) -> int:
    """Place ``order`` one vertex at a time next to its already placed neighbours."""
    size = len(rows)
    for x in order:
        cand = allowed(x) & ~used
        for y in adj[x]:
            if y in img:
                cand &= rows[img[y]]
        if not cand:
            raise StepFailed(stage, f"no room for pattern vertex {x}")
        v = _pick(cand, rng, size)
        img[x] = v
        used |= 1 << v
    return used


def _bfs_order(adj, keep: set, roots: Sequence[int], rng: random.Random | None = None) -> list[int]:
    """BFS over the vertices in ``keep``; each component starts at a listed root or its least vertex."""
    seen, order = set(), []
    starts = [r for r in roots if r in keep] + sorted(keep)
    for s in starts:
        if s in seen:
            continue
        seen.add(s)
        queue = deque([s])
        while queue:
            x = queue.popleft()
            order.append(x)
            nb = [y for y in adj[x] if y in keep and y not in seen]
            if rng is not None:
                rng.shuffle(nb)
            for y in nb:
                seen.add(y)
                queue.append(y)
    return order


def _subtree(tree: Forest, verts: Iterable[int]) -> tuple[Forest, list[int]]:
    """Induced sub-forest relabelled ``0..k-1``; returns it with the old labels."""
    old = sorted(set(verts))
    new = {v: i for i, v in enumerate(old)}
    edges = [(new[u], new[v]) for u, v in tree.edges if u in new and v in new]
    f = Forest(len(old), edges)
    if len(f.components()) == 1:
        f = Tree(len(old), edges)
    return f, old


def induced(rows: Sequence[int], verts: Sequence[int]) -> list[int]:
    """Adjacency rows of the subgraph induced on ``verts``, relabelled by position."""
    pos = {v: i for i, v in enumerate(verts)}
    out = []
    for v in verts:
        r = 0
        for y in bits(rows[v]):
            j = pos.get(y)
            if j is not None:
                r |= 1 << j
        out.append(r)
    return out


def _seeds(cfg: EmbedderConfig, salt: int):
    master = random.Random(cfg.seed * 1_000_003 + salt)
    for _ in range(cfg.retry_budget):
        yield random.Random(master.randrange(2 ** 62))


def _ceil(x) -> int:
    return math.ceil(Fraction(x))


# ---------------------------------------------------------------------------
# almost complete hosts


def effective_mu_bare(rows: Sequence[int], n: int) -> Fraction:
    """Least ``mu`` (a multiple of ``1/n``) with at most ``mu n`` vertices of deficit above ``mu n``."""
    N = len(rows)
    deficits = sorted((N - 1 - r.bit_count() for r in rows), reverse=True)
    for m in range(N + 1):
        if m >= len(deficits) or deficits[m] <= m:
            return Fraction(max(m, 1), n)
    return Fraction(N, n)


def effective_mu_leaves(rows: Sequence[int], n: int, u: int) -> Fraction:
    N = len(rows)
    worst = max((N - 1 - rows[v].bit_count() for v in range(N) if v != u), default=0)
    return Fraction(max(worst, 1), n)


def embed_bare_paths(rows: Sequence[int], tree: Tree, anchor: tuple[int, int], cfg: EmbedderConfig,
                     scale_n: int | None = None) -> Embedding:
    """Embed ``tree`` with ``anchor[0] -> anchor[1]`` using ``10 mu n`` bare paths of length 4.

    Hypotheses: ``|H| >= n``, minimum degree ``>= xi n``, all but at most
    ``mu n`` vertices of degree ``>= |H| - mu n``, ``Delta(T) <= mu n`` (or
    the configured cap) and enough disjoint bare paths avoiding the anchor.
    """
    N, n = len(rows), tree.n
    sn = scale_n or n
    t, u = anchor
    mun = cfg.mu * sn
    if N < n:
        raise HypothesisFailed("host size", f"{N} < {n}")
    if not (0 <= t < n and 0 <= u < N):
        raise HypothesisFailed("anchor", f"{anchor} out of range")
    deg = [r.bit_count() for r in rows]
    if min(deg) < cfg.xi * sn:
        raise HypothesisFailed("min degree", f"{min(deg)} < xi n = {float(cfg.xi * sn):.2f}")
    W = [v for v in range(N) if deg[v] < N - 1 - mun]
    if len(W) > mun:
        raise HypothesisFailed("low-degree set", f"{len(W)} vertices > mu n = {float(mun):.2f}")
    if tree.max_degree() > cfg.degree_cap(sn, "bare"):
        raise HypothesisFailed("max degree", f"{tree.max_degree()} > {float(cfg.degree_cap(sn, 'bare')):.2f}")
    ell = _ceil(cfg.path_factor * mun)
    paths = bare_paths(tree, 4, avoid=[t]) if ell else []
    if len(paths) < ell:
        raise HypothesisFailed("bare paths", f"{len(paths)} disjoint bare paths of length 4 < {ell}")
    paths = paths[:ell]
    Wo = [w for w in W if w != u]
    if len(Wo) > ell:
        raise HypothesisFailed("low-degree set", "more low-degree vertices than bare paths")
    last = None
    for attempt, rng in enumerate(_seeds(cfg, 1), 1):
        try:
            m = _bare_paths_once(rows, tree, t, u, paths, W, Wo, rng)
            return Embedding(m, "bare-paths", attempt, {"paths": ell, "lowDegree": len(W)})
        except StepFailed as e:
            last = e
    raise RetriesExhausted(last.stage, cfg.retry_budget)


def _bare_paths_once(rows, tree, t, u, paths, W, Wo, rng) -> tuple[int, ...]:
    N = len(rows)
    full = (1 << N) - 1
    wmask = to_mask(W)
    used = 1 << u
    gadgets = []
    # cover each low-degree vertex by the centre of a gadget x-w-y
    for w in Wo:
        cand = rows[w] & ~wmask & ~used
        if cand.bit_count() < 2:
            raise StepFailed("repair", f"low-degree vertex {w} has < 2 free neighbours")
        x = _pick(cand, rng, N)
        y = _pick(cand & ~(1 << x), rng, N)
        gadgets.append((x, w, y))
        used |= (1 << x) | (1 << y) | (1 << w)
    internal = {p[i] for p in paths for i in (1, 2, 3)}
    keep = set(range(tree.n)) - internal
    img = {t: u}
    order = [x for x in _bfs_order(tree.adj, keep, [t], rng) if x != t]
    free_ok = full & ~wmask
    used = _greedy(rows, tree.adj, order, img, used, lambda x: free_ok, rng, "greedy")
    need = len(paths) - len(gadgets)
    if need > 0:
        rest = [v for v in range(N) if not used >> v & 1]
        if len(rest) < 3 * need:
            raise StepFailed("dirac", f"{len(rest)} leftover vertices for {need} gadgets")
        sub = induced(rows, rest)
        adj = [set(bits(r)) for r in sub]
        if not dirac_ok(adj):
            raise StepFailed("dirac", "leftover graph below the Dirac threshold")
        cyc = hamilton_cycle(adj, seed=rng.randrange(2 ** 31))
        if cyc is None:
            raise StepFailed("hamilton", "rotation-extension gave up")
        for j in range(need):
            a, b, c = cyc[3 * j], cyc[3 * j + 1], cyc[3 * j + 2]
            gadgets.append((rest[a], rest[b], rest[c]))
    img = _close_paths(rows, paths, gadgets, img)
    mapping = tuple(img[x] for x in range(tree.n))
    if not verify_embedding(rows, tree, mapping):
        raise StepFailed("verify", "assembled map failed the edge check")
    return mapping


def _close_paths(rows, paths, gadgets, img) -> dict:
    """Match each bare path to a gadget via the auxiliary bipartite graph, then fill it in."""
    ell = len(paths)
    edges, orient = [], {}
    for i, p in enumerate(paths):
        a, b = img[p[0]], img[p[4]]
        for j, (x, w, y) in enumerate(gadgets):
            if rows[a] >> x & 1 and rows[b] >> y & 1:
                edges.append((i, j))
                orient[i, j] = (x, w, y)
            elif rows[a] >> y & 1 and rows[b] >> x & 1:
                edges.append((i, j))
                orient[i, j] = (y, w, x)
    K = BipartiteGraph(ell, len(gadgets), tuple(edges))
    m = max_matching(K)
    if m.size < ell:
        raise StepFailed("matching", f"auxiliary matching has size {m.size} < {ell}")
    img = dict(img)
    for i, j in m.pairs():
        x, w, y = orient[i, j]
        p = paths[i]
        img[p[1]], img[p[2]], img[p[3]] = x, w, y
    return img


def embed_many_leaves(rows: Sequence[int], tree: Tree, anchor: tuple[int, int], cfg: EmbedderConfig,
                      scale_n: int | None = None) -> Embedding:
    """Embed a tree with many leaves: random BFS greedy on ``T - L``, then a star packing for ``L``."""
    N, n = len(rows), tree.n
    sn = scale_n or n
    t, u = anchor
    mun = cfg.mu * sn
    if N < n:
        raise HypothesisFailed("host size", f"{N} < {n}")
    if not (0 <= t < n and 0 <= u < N):
        raise HypothesisFailed("anchor", f"{anchor} out of range")
    for v in range(N):
        if v != u and rows[v].bit_count() < N - 1 - mun:
            raise HypothesisFailed("degree", f"vertex {v} has degree {rows[v].bit_count()} < |H| - mu n")
    if rows[u].bit_count() < cfg.xi * sn:
        raise HypothesisFailed("anchor degree", f"{rows[u].bit_count()} < xi n = {float(cfg.xi * sn):.2f}")
    leaves = tree.leaves() if n > 1 else []
    if len(leaves) < cfg.xi * sn / cfg.leaves_needed:
        raise HypothesisFailed("leaves", f"{len(leaves)} leaves < xi n / {cfg.leaves_needed}")
    if tree.max_degree() > cfg.degree_cap(sn, "leaves"):
        raise HypothesisFailed("max degree", f"{tree.max_degree()} above the cap")
    near = {t, *tree.adj[t]}
    pool = [x for x in leaves if x not in near]
    # |L| = xi n / 10^4, but at least 4 mu n + 1 so the Hall step has room
    want = max(_ceil(cfg.xi * sn / cfg.leaf_divisor), 4 * _ceil(mun) + 1)
    size = min(want, len(pool))
    last = None
    for attempt, rng in enumerate(_seeds(cfg, 2), 1):
        try:
            L = set(rng.sample(pool, size))
            m = _leaves_once(rows, tree, t, u, L, rng)
            return Embedding(m, "leaves", attempt, {"L": size})
        except StepFailed as e:
            last = e
    raise RetriesExhausted(last.stage if last else "leaves", cfg.retry_budget)


def _leaves_once(rows, tree, t, u, L, rng) -> tuple[int, ...]:
    N = len(rows)
    full = (1 << N) - 1
    keep = set(range(tree.n)) - L
    img = {t: u}
    order = [x for x in _bfs_order(tree.adj, keep, [t], rng) if x != t]
    used = _greedy(rows, tree.adj, order, img, 1 << u, lambda x: full, rng, "greedy")
    _finish_leaves(rows, tree, L, img, full & ~used, "hall")
    mapping = tuple(img[x] for x in range(tree.n))
    if not verify_embedding(rows, tree, mapping):
        raise StepFailed("verify", "assembled map failed the edge check")
    return mapping


def _finish_leaves(rows, tree, L, img, free_mask, stage):
    """Place the leaves in ``L`` as disjoint stars around their parents' images."""
    if not L:
        return
    parents = sorted({tree.adj[x][0] for x in L})
    demand = {p: sum(1 for y in tree.adj[p] if y in L) for p in parents}
    free = list(bits(free_mask))
    pos = {v: i for i, v in enumerate(free)}
    edges = []
    for i, p in enumerate(parents):
        for y in bits(rows[img[p]] & free_mask):
            edges.append((i, pos[y]))
    g = BipartiteGraph(len(parents), len(free), tuple(edges))
    sp = star_packing(g, [demand[p] for p in parents])
    if not sp.ok:
        raise StepFailed(stage, f"Hall condition fails for {len(sp.violator)} parents")
    for i, p in enumerate(parents):
        kids = [y for y in tree.adj[p] if y in L]
        for x, j in zip(kids, sp.stars[i]):
            img[x] = free[j]


# ---------------------------------------------------------------------------
# almost complete bipartite hosts


@dataclass
class BipartiteHost:
    """Host rows restricted to the edges between ``U1`` and ``U2``."""

    rows: list[int]
    U1: tuple[int, ...]
    U2: tuple[int, ...]

    def __post_init__(self):
        if set(self.U1) & set(self.U2):
            raise ValueError("U1 and U2 must be disjoint")
        self.m1, self.m2 = to_mask(self.U1), to_mask(self.U2)
        rows = [0] * len(self.rows)
        for v in self.U1:
            rows[v] = self.rows[v] & self.m2
        for v in self.U2:
            rows[v] = self.rows[v] & self.m1
        self.rows = rows

    @classmethod
    def from_rows(cls, rows, U1, U2) -> "BipartiteHost":
        return cls(list(rows), tuple(U1), tuple(U2))

    def d1(self, v) -> int:
        return (self.rows[v] & self.m1).bit_count()

    def d2(self, v) -> int:
        return (self.rows[v] & self.m2).bit_count()


def verify_bipartite_embedding(host: BipartiteHost, tree: Forest, mapping: Sequence[int], v1: set) -> bool:
    if not verify_embedding(host.rows, tree, mapping):
        return False
    return all((host.m1 if x in v1 else host.m2) >> mapping[x] & 1 for x in range(tree.n))


def _default_v1(tree: Forest) -> set:
    if isinstance(tree, Tree):
        return set(tree.classes[0])
    return {v for v in range(tree.n) if tree.sides[v] == 0}


def _bipartite_checks(host: BipartiteHost, cfg: EmbedderConfig, sn: int, u2_min) -> list[int]:
    mun = cfg.mu * sn
    for v in host.U1:
        if host.d2(v) < len(host.U2) - mun:
            raise HypothesisFailed("U1 degree", f"vertex {v} misses more than mu n of U2")
    for v in host.U2:
        if host.d1(v) < u2_min:
            raise HypothesisFailed("U2 min degree", f"vertex {v} has {host.d1(v)} < {float(u2_min):.2f}")
    W = [v for v in host.U2 if host.d1(v) < len(host.U1) - mun]
    if len(W) > mun:
        raise HypothesisFailed("low-degree set", f"{len(W)} > mu n = {float(mun):.2f}")
    return W


def effective_mu_bipartite(host: BipartiteHost, n: int) -> Fraction:
    base = max((len(host.U2) - host.d2(v) for v in host.U1), default=0)
    defs = sorted((len(host.U1) - host.d1(v) for v in host.U2), reverse=True)
    m = max(base, 1)
    while m < len(defs) and defs[m] > m:
        m += 1
    return Fraction(m, n)


def _bare_paths_v2(tree: Forest, v2: set, k: int, avoid=()) -> list[list[int]]:
    """Disjoint bare paths with ``k`` edges (``k`` even) whose ends lie in ``v2``."""
    used = set(avoid)
    found = []
    for seq in sorted(_threads(tree), key=lambda s: (-len(s), s)):
        i = 0
        while i + k < len(seq):
            w = seq[i:i + k + 1]
            if w[0] in v2 and used.isdisjoint(w):
                found.append(w)
                used.update(w)
                i += k + 1
            else:
                i += 1
    return found


def embed_bipartite_bare_paths(host: BipartiteHost, tree: Forest, cfg: EmbedderConfig, v1=None,
                               anchor: tuple[int, int] | None = None, paths=None,
                               scale_n: int | None = None) -> Embedding:
    """Class-respecting bare-path embedding; the low-degree part of ``U2`` only hosts path centres."""
    n = tree.n
    sn = scale_n or n
    mun = cfg.mu * sn
    v1 = set(_default_v1(tree) if v1 is None else v1)
    v2 = set(range(n)) - v1
    for a, b in tree.edges:
        if (a in v1) == (b in v1):
            raise HypothesisFailed("classes", "v1 is not a bipartition class")
    if len(v1) > len(host.U1) or len(v2) > len(host.U2):
        raise HypothesisFailed("class sizes", f"({len(v1)}, {len(v2)}) vs ({len(host.U1)}, {len(host.U2)})")
    W = _bipartite_checks(host, cfg, sn, cfg.xi * sn)
    if tree.max_degree() > cfg.degree_cap(sn, "bare"):
        raise HypothesisFailed("max degree", f"{tree.max_degree()} above the cap")
    if anchor is not None:
        t, u = anchor
        if (t in v1) != (u in host.U1 and u not in host.U2) or (t in v2 and u not in host.U2):
            raise HypothesisFailed("anchor", "anchor must respect the classes")
    ell = _ceil(cfg.path_factor * mun)
    if paths is None:
        paths = _bare_paths_v2(tree, v2, 4, avoid=[anchor[0]] if anchor else [])
    if len(paths) < ell:
        raise HypothesisFailed("bare paths", f"{len(paths)} bare paths with ends in V2 < {ell}")
    paths = paths[:ell]
    last = None
    for attempt, rng in enumerate(_seeds(cfg, 3), 1):
        try:
            m = _bip_bare_once(host, tree, v1, anchor, paths, W, rng)
            return Embedding(m, "bipartite-bare-paths", attempt, {"paths": ell, "lowDegree": len(W)})
        except StepFailed as e:
            last = e
    raise RetriesExhausted(last.stage, cfg.retry_budget)


def _bip_bare_once(host, tree, v1, anchor, paths, W, rng) -> tuple[int, ...]:
    rows, N = host.rows, len(host.rows)
    wmask = to_mask(W)
    img, used = {}, 0
    if anchor is not None:
        img[anchor[0]] = anchor[1]
        used |= 1 << anchor[1]
    gadgets = []
    for w in W:
        if used >> w & 1:
            continue
        cand = rows[w] & host.m1 & ~used
        if cand.bit_count() < 2:
            raise StepFailed("repair", f"low-degree vertex {w} has < 2 free neighbours")
        x = _pick(cand, rng, N)
        y = _pick(cand & ~(1 << x), rng, N)
        gadgets.append((x, w, y))
        used |= (1 << x) | (1 << y) | (1 << w)
    if len(gadgets) > len(paths):
        raise StepFailed("repair", "more low-degree vertices than bare paths")
    internal = {p[i] for p in paths for i in (1, 2, 3)}
    keep = set(range(tree.n)) - internal
    roots = [anchor[0]] if anchor else []
    order = [x for x in _bfs_order(tree.adj, keep, roots, rng) if x not in img]
    side1, side2 = host.m1, host.m2 & ~wmask
    used = _greedy(rows, tree.adj, order, img, used, lambda x: side1 if x in v1 else side2, rng, "greedy")
    need = len(paths) - len(gadgets)
    if need > 0:
        r2 = [v for v in bits(host.m2 & ~used)]
        if len(r2) < need:
            raise StepFailed("gadgets", "not enough free vertices in U2")
        centres = rng.sample(r2, need)
        cmask = to_mask(centres)
        r1 = list(bits(host.m1 & ~used))
        pos = {v: i for i, v in enumerate(r1)}
        edges = [(i, pos[y]) for i, w in enumerate(centres) for y in bits(rows[w] & host.m1 & ~used)]
        sp = star_packing(BipartiteGraph(need, len(r1), tuple(edges)), [2] * need)
        if not sp.ok:
            raise StepFailed("gadgets", "cannot give every centre two private neighbours")
        for i, w in enumerate(centres):
            a, b = sp.stars[i]
            gadgets.append((r1[a], w, r1[b]))
        used |= cmask
    img = _close_paths(rows, paths, gadgets, img)
    mapping = tuple(img[x] for x in range(tree.n))
    if not verify_bipartite_embedding(host, tree, mapping, v1):
        raise StepFailed("verify", "assembled map failed the edge or class check")
    return mapping


def embed_bipartite_leaves(host: BipartiteHost, tree: Tree, cfg: EmbedderConfig, v1=None, leaves=None,
                           scale_n: int | None = None) -> Embedding:
    """Class-respecting embedding for trees with many leaves in ``V2``; only those leaves use ``W2``."""
    n = tree.n
    sn = scale_n or n
    mun = cfg.mu * sn
    v1 = set(_default_v1(tree) if v1 is None else v1)
    v2 = set(range(n)) - v1
    if len(v1) + cfg.bip_slack * sn > len(host.U1):
        raise HypothesisFailed("class sizes", f"|V1| + n/10 = {float(len(v1) + cfg.bip_slack * sn):.1f} > |U1|")
    if len(v2) > len(host.U2):
        raise HypothesisFailed("class sizes", f"|V2| = {len(v2)} > |U2| = {len(host.U2)}")
    W2 = _bipartite_checks(host, cfg, sn, cfg.xi * len(host.U1))
    if tree.max_degree() > cfg.degree_cap(sn, "leaves"):
        raise HypothesisFailed("max degree", f"{tree.max_degree()} above the cap")
    pool = [x for x in tree.leaves() if x in v2] if n > 1 else []
    if leaves is not None:
        pool = [x for x in leaves if x in v2 and tree.degree(x) == 1]
    floor_size = _ceil(cfg.xi * sn / cfg.bip_leaf_divisor)
    if len(pool) < floor_size:
        raise HypothesisFailed("leaves", f"{len(pool)} leaves in V2 < xi n / {cfg.bip_leaf_divisor}")
    size = min(len(pool), max(floor_size, 4 * _ceil(mun) + len(W2) + 1))
    greedy_only = len(host.U2) >= len(v2) + 2 * mun
    last = None
    for attempt, rng in enumerate(_seeds(cfg, 4), 1):
        try:
            if greedy_only:
                m = _bip_greedy_once(host, tree, v1, W2, rng)
                route = "bipartite-greedy"
            else:
                order = rng.sample(pool, len(pool)) if leaves is None else pool
                L = _leaves_by_parent(tree, order, size, max(1, _ceil(cfg.reservoir * sn) // 2))
                m = _bip_leaves_once(host, tree, v1, W2, L, cfg, sn, rng)
                route = "bipartite-leaves"
            return Embedding(m, route, attempt, {"lowDegree": len(W2)})
        except StepFailed as e:
            last = e
    raise RetriesExhausted(last.stage, cfg.retry_budget)


def _leaves_by_parent(tree, order, size, max_parents) -> set:
    """Up to ``size`` leaves taken whole-parent at a time, from at most ``max_parents`` parents.

    The parents of ``L`` all go into the reservoir ``W1``, so they must fit.
    """
    groups: dict[int, list[int]] = {}
    for x in order:
        groups.setdefault(tree.adj[x][0], []).append(x)
    ranked = sorted(groups.values(), key=len, reverse=True)
    L: list[int] = []
    for g in ranked[:max_parents]:
        if len(L) >= size:
            break
        L.extend(g[:size - len(L)])
    return set(L)


def _bip_greedy_once(host, tree, v1, W2, rng):
    side1, side2 = host.m1, host.m2 & ~to_mask(W2)
    img = {}
    order = _bfs_order(tree.adj, set(range(tree.n)), [rng.randrange(tree.n)], rng)
    _greedy(host.rows, tree.adj, order, img, 0, lambda x: side1 if x in v1 else side2, rng, "greedy")
    mapping = tuple(img[x] for x in range(tree.n))
    if not verify_bipartite_embedding(host, tree, mapping, v1):
        raise StepFailed("verify", "assembled map failed the edge or class check")
    return mapping


def _bip_leaves_once(host, tree, v1, W2, L, cfg, sn, rng):
    rows = host.rows
    P = {tree.adj[x][0] for x in L}
    k = min(len(host.U1), _ceil(cfg.reservoir * sn))
    W1 = to_mask(rng.sample(list(host.U1), k))
    w2 = to_mask(W2)
    keep = set(range(tree.n)) - L
    starts = [x for x in keep if x not in P]
    if not starts:
        raise StepFailed("greedy", "every vertex of T - L is a parent of L")
    root = rng.choice(starts)
    order = _bfs_order(tree.adj, keep, [root], rng)
    side1, side2 = host.m1 & ~W1, host.m2 & ~w2

    def allowed(x):
        if x in P:
            return W1
        return side1 if x in v1 else side2

    img = {}
    used = _greedy(rows, tree.adj, order, img, 0, allowed, rng, "greedy")
    _finish_leaves(rows, tree, L, img, host.m2 & ~used, "hall")
    mapping = tuple(img[x] for x in range(tree.n))
    if not verify_bipartite_embedding(host, tree, mapping, v1):
        raise StepFailed("verify", "assembled map failed the edge or class check")
    return mapping


def embed_bipartite_any(host: BipartiteHost, tree: Tree, cfg: EmbedderConfig, v1=None,
                        scale_n: int | None = None) -> Embedding:
    """Strip the ``V1`` leaves, embed the rest by bare paths or by leaves, then put the ``V1`` leaves back."""
    n = tree.n
    sn = scale_n or n
    v1 = set(_default_v1(tree) if v1 is None else v1)
    v2 = set(range(n)) - v1
    if not (cfg.any_low * sn <= len(v1) + cfg.any_slack * sn <= len(host.U1)):
        raise HypothesisFailed("size window", f"need n/4 <= |V1| + n/5 <= |U1| (|V1|={len(v1)}, |U1|={len(host.U1)})")
    if not (cfg.any_v2 * sn <= len(v2) <= len(host.U2)):
        raise HypothesisFailed("size window", f"need n/100 <= |V2| <= |U2| (|V2|={len(v2)}, |U2|={len(host.U2)})")
    _bipartite_checks(host, cfg, sn, cfg.xi * len(host.U1))
    if tree.max_degree() > cfg.degree_cap(sn, "leaves"):
        raise HypothesisFailed("max degree", f"{tree.max_degree()} above the cap")
    if n <= 2:
        return embed_bipartite_leaves(host, tree, replace(cfg, bip_slack=Fraction(0)), v1)
    L1 = {x for x in tree.leaves() if x in v1}
    core, old = _subtree(tree, set(range(n)) - L1)
    new = {v: i for i, v in enumerate(old)}
    core_v1 = {new[v] for v in old if v in v1}
    core_v2 = set(range(core.n)) - core_v1
    l1_count = [sum(1 for y in tree.adj[v] if y in L1) for v in old]
    six = bare_paths(core, 5) if core.n > 5 else []
    # n/10^3 paths stand in for 10 mu n ones asymptotically; here ask for both
    use_paths = len(six) >= max(_ceil(Fraction(sn, 1000)), _ceil(cfg.path_factor * cfg.mu * sn))
    last = None
    for attempt, rng in enumerate(_seeds(cfg, 5), 1):
        k = min(_ceil(cfg.any_reservoir * sn), len(host.U1) - len(core_v1))
        Z = set(rng.sample(list(host.U1), max(k, 0)))
        sub = BipartiteHost.from_rows(host.rows, [v for v in host.U1 if v not in Z], host.U2)
        inner = replace(cfg, retry_budget=1, seed=rng.randrange(2 ** 31))
        try:
            if use_paths:
                route = "any:bare-paths"
                windows = [p[:5] if p[0] in core_v2 else p[1:] for p in six]
                windows.sort(key=lambda p: l1_count[p[2]])
                emb = embed_bipartite_bare_paths(sub, core, inner, core_v1, paths=windows, scale_n=sn)
            else:
                route = "any:leaves"
                xs = [x for x in core.leaves() if x in core_v2] if core.n > 1 else []
                xs.sort(key=lambda x: l1_count[x])
                emb = embed_bipartite_leaves(sub, core, replace(inner, bip_slack=Fraction(0)), core_v1,
                                             leaves=xs, scale_n=sn)
            img = {old[i]: v for i, v in enumerate(emb.mapping)}
            used = to_mask(img.values())
            _finish_leaves(host.rows, tree, L1, img, host.m1 & ~used, "leaf completion")
            mapping = tuple(img[x] for x in range(n))
            if not verify_bipartite_embedding(host, tree, mapping, v1):
                raise StepFailed("verify", "assembled map failed the edge or class check")
            return Embedding(mapping, route, attempt, {"strippedLeaves": len(L1), "inner": emb.route})
        except (StepFailed, HypothesisFailed) as e:
            last = e
    stage = getattr(last, "stage", None) or getattr(last, "which", "any")
    raise RetriesExhausted(f"{route}:{stage}", cfg.retry_budget)


# ---------------------------------------------------------------------------
# extremal case analyses

_INSIDE = {1: RED, 2: BLUE, 3: BLUE, 4: RED}


def profile_conditions(kind: int, T: Tree, S: Tree, mu) -> list[str]:
    """Side conditions of the extremal lemma for ``kind`` (maximum-degree caps excluded)."""
    mu = Fraction(mu)
    pt, ps = profile(T), profile(S)
    n, t1, t2, nu, s1, s2 = pt.n, pt.t1, pt.t2, ps.n, ps.t1, ps.t2
    conds = [("t2 >= (t1-2)/3", 3 * t2 >= t1 - 2), ("tau2 >= (t1-2)/2", 2 * s2 >= t1 - 2)]
    if kind == 1:
        conds += [("nu >= t1 >= tau1", nu >= t1 >= s1), ("tau2 >= t2", s2 >= t2),
                  ("tau2 + t2 >= t1 - 1", s2 + t2 >= t1 - 1)]
    elif kind == 2:
        conds += [("nu >= (1-mu)(t1+tau2)", nu >= (1 - mu) * (t1 + s2)), ("tau2 >= t2", s2 >= t2),
                  ("tau2 + t2 >= t1 - 1", s2 + t2 >= t1 - 1)]
    elif kind == 3:
        conds += [("nu >= t1", nu >= t1), ("t1 >= (1-mu)(t2+tau2)", t1 >= (1 - mu) * (t2 + s2)),
                  ("(1-mu)(t2+tau2) >= (1-mu)(t1-1)", t2 + s2 >= t1 - 1), ("tau2 >= t2", s2 >= t2)]
    elif kind == 4:
        conds += [("tau1 >= (1-mu)(n+tau2)/2", 2 * s1 >= (1 - mu) * (n + s2)), ("nu >= t1 >= tau1", nu >= t1 >= s1),
                  ("t2 + tau2 >= t1 - 1", t2 + s2 >= t1 - 1), ("tau2 >= t2", s2 >= t2)]
    else:
        raise ValueError("type must be 1..4")
    return [name for name, ok in conds if not ok]


@dataclass
class StrategyResult:
    colour: str
    tree: str  # "T" or "S"
    mapping: tuple[int, ...]
    branch: str
    info: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        return {"colour": self.colour, "tree": self.tree, "branch": self.branch,
                "mapping": {str(i): v for i, v in enumerate(self.mapping)}, "info": self.info}


def _dense_embed(rows_full, verts, tree, anchor_t, anchor_u, cfg, sn, branch) -> dict:
    """Embed ``tree`` into the graph induced on ``verts``.

    Trees with ``n/100`` disjoint bare paths go the bare-path route, others
    the leaves route; when the first route's hypotheses fail at this size the
    other one is tried before giving up.
    """
    verts = list(verts)
    sub = induced(rows_full, verts)
    pos = {v: i for i, v in enumerate(verts)}
    u = pos[anchor_u] if anchor_u is not None else max(range(len(verts)), key=lambda i: sub[i].bit_count())
    t = anchor_t if anchor_t is not None else 0
    paths = bare_paths(tree, 4, avoid=[t]) if tree.n >= 5 else []

    def bare():
        mu = max(cfg.mu, effective_mu_bare(sub, sn))
        return embed_bare_paths(sub, tree, (t, u), replace(cfg, mu=mu), scale_n=sn)

    def leaves():
        mu = max(cfg.mu, effective_mu_leaves(sub, sn, u))
        return embed_many_leaves(sub, tree, (t, u), replace(cfg, mu=mu), scale_n=sn)

    routes = [bare, leaves] if len(paths) >= max(1, _ceil(Fraction(tree.n, 100))) else [leaves, bare]
    first = None
    for route in routes:
        try:
            emb = route()
            return {x: verts[v] for x, v in enumerate(emb.mapping)}
        except (HypothesisFailed, StepFailed) as e:
            first = first or e
    raise CaseFailed(branch, first)


def _bip_embed(rows_full, A, B, tree, cfg, sn, branch, v1=None) -> dict:
    host = BipartiteHost.from_rows(rows_full, A, B)
    mu = max(cfg.mu, effective_mu_bipartite(host, sn))
    try:
        emb = embed_bipartite_any(host, tree, replace(cfg, mu=mu), v1=v1, scale_n=sn)
    except (HypothesisFailed, StepFailed) as e:
        raise CaseFailed(branch, e) from e
    return dict(enumerate(emb.mapping))


def _degree_in(rows, v, S_mask) -> int:
    return (rows[v] & S_mask & ~(1 << v)).bit_count()


def extremal_strategy(col: TwoColouring, T: Tree, S: Tree, witness: ExtremalWitness,
                      cfg: EmbedderConfig | None = None) -> StrategyResult:
    """Run the case analysis for the witness's type and return a verified monochromatic copy.

    Raises :class:`HypothesisFailed` for a bad witness or profile and
    :class:`CaseFailed` (with the branch name) when a branch cannot finish.
    """
    cfg = cfg or EmbedderConfig()
    bad = extremal_failures(col, witness, T, S)
    if bad:
        raise HypothesisFailed("witness", "; ".join(bad[:3]))
    if cfg.check_profile:
        pb = profile_conditions(witness.type, T, S, witness.mu)
        if pb:
            raise HypothesisFailed("profile", "; ".join(pb))
    kind = witness.type
    inside = _INSIDE[kind]
    across = BLUE if inside == RED else RED
    if kind in (1, 2):
        res = _strategy_12(col, T, S, witness, cfg, inside, across)
    else:
        res = _strategy_34(col, T, S, witness, cfg, inside, across)
    tree = T if res.tree == "T" else S
    if not verify_embedding(col.rows(res.colour), tree, res.mapping):
        raise CaseFailed(res.branch, "returned map failed verification")
    return res


def _strategy_12(col, T, S, w, cfg, inside, across) -> StrategyResult:
    kind = w.type
    n = T.n
    big, big_name = (T, "T") if kind == 1 else (S, "S")
    bip, bip_name = (S, "S") if kind == 1 else (T, "T")
    target = T.n if kind == 1 else S.n
    rin, racross = col.rows(inside), col.rows(across)
    U1 = set(w.U1)
    m1 = to_mask(U1)
    thr = cfg.xi * n
    U1p = [v for v in range(col.N)
           if _degree_in(rin, v, m1) >= len(U1 - {v}) - thr]
    U2p = [v for v in range(col.N) if v not in set(U1p)]
    k = len(U1p) - target
    info = {"k": k, "U1plus": len(U1p), "U2plus": len(U2p)}
    if k >= 0:
        branch = f"type{kind}:k>=0"
        img = _dense_embed(rin, U1p, big, None, None, cfg, n, branch)
        return StrategyResult(inside, big_name, tuple(img[x] for x in range(big.n)), branch, info)
    branch = f"type{kind}:k<0"
    img = _bip_embed(racross, sorted(U1), U2p, bip, cfg, n, branch)
    return StrategyResult(across, bip_name, tuple(img[x] for x in range(bip.n)), branch, info)


def _strategy_34(col, T, S, w, cfg, inside, across) -> StrategyResult:
    kind = w.type
    n = T.n
    mu = Fraction(w.mu)
    X, x_name = (S, "S") if kind == 3 else (T, "T")   # lives inside the parts
    Y, y_name = (T, "T") if kind == 3 else (S, "S")   # lives across
    rin, racross = col.rows(inside), col.rows(across)
    U = [set(w.U1), set(w.U2)]
    masks = [to_mask(U[0]), to_mask(U[1])]
    Up = [set(U[0]), set(U[1])]
    for v in range(col.N):
        if v in Up[0] or v in Up[1]:
            continue
        if _degree_in(racross, v, masks[1]) * 3 >= len(U[1]):
            Up[0].add(v)
        elif _degree_in(racross, v, masks[0]) * 3 >= len(U[0]):
            Up[1].add(v)
    if len(Up[0]) < len(Up[1]):
        Up.reverse()
        U.reverse()
        masks.reverse()
    R = [v for v in range(col.N) if v not in Up[0] and v not in Up[1]]
    info = {"U1plus": len(Up[0]), "U2plus": len(Up[1]), "outside": len(R)}

    if len(R) >= 2:
        branch = f"type{kind}:two-outside"
        v1, v2 = R[0], R[1]
        eps = min(10 * mu, Fraction(1, 7))
        try:
            cut = cut_with_small_boundary(X, eps)
        except NotFound as e:
            raise CaseFailed(branch, e) from e
        bnd = sorted(cut.boundary)
        fixed = {bnd[i]: (v1, v2)[i] for i in range(len(bnd))}
        last = None
        for rng in _seeds(cfg, 6):
            try:
                img = dict(fixed)
                used = to_mask(fixed.values())
                order = [x for x in _bfs_order(X.adj, set(cut.set_a), bnd, rng) if x not in fixed]
                used = _greedy(rin, X.adj, order, img, used, lambda x: masks[0], rng, "part A")
                keep = set(cut.set_b) | set(bnd)
                order = [x for x in _bfs_order(X.adj, keep, bnd, rng) if x not in fixed]
                _greedy(rin, X.adj, order, img, used, lambda x: masks[1], rng, "part B")
                return StrategyResult(inside, x_name, tuple(img[x] for x in range(X.n)), branch, info)
            except StepFailed as e:
                last = e
        raise CaseFailed(branch, last)

    thr = max(1, _ceil(20 * mu * n))
    up_masks = [to_mask(Up[0]), to_mask(Up[1])]
    apex = next((v for v in range(col.N)
                 if _degree_in(racross, v, up_masks[0]) >= thr and _degree_in(racross, v, up_masks[1]) >= thr), None)
    if apex is not None:
        branch = f"type{kind}:apex"
        info["apex"] = apex
        try:
            dec = decompose_bipartite_skew(Y, mu)
        except NotFound as e:
            raise CaseFailed(branch, e) from e
        big = set(Y.classes[0])
        p1 = set(dec.part1)
        # part1's large class and part2's small class go to U2, the rest to U1
        to_u2 = {x for x in range(Y.n) if (x in p1) == (x in big)}
        a_mask = masks[0] & ~(1 << apex)
        b_mask = masks[1] & ~(1 << apex)
        last = None
        for rng in _seeds(cfg, 7):
            try:
                img = {dec.shared: apex}
                order = [x for x in _bfs_order(Y.adj, set(range(Y.n)), [dec.shared], rng) if x != dec.shared]
                _greedy(racross, Y.adj, order, img, 1 << apex, lambda x: b_mask if x in to_u2 else a_mask, rng, "apex")
                return StrategyResult(across, y_name, tuple(img[x] for x in range(Y.n)), branch, info)
            except StepFailed as e:
                last = e
        raise CaseFailed(branch, last)

    if len(R) == 1:
        branch = f"type{kind}:one-outside"
        wv = R[0]
        dec = decompose_balanced(X)
        parts = sorted([dec.part1, dec.part2], key=len, reverse=True)
        img = {}
        for part, host_part in zip(parts, Up):
            sub, old = _subtree(X, part)
            t_new = old.index(dec.shared)
            got = _dense_embed(rin, sorted(host_part) + [wv], sub, t_new, wv, cfg, n, branch)
            for i, v in got.items():
                img[old[i]] = v
        mapping = tuple(img[x] for x in range(X.n))
        if len(set(mapping)) != X.n:
            raise CaseFailed(branch, "the two halves collided")
        return StrategyResult(inside, x_name, mapping, branch, info)

    branch = f"type{kind}:bipartite"
    # U2 has the room (|U2| >= small class + n/5) and takes the small class;
    # U1+ may hold the added vertices and plays the low-degree side
    img = _bip_embed(racross, sorted(U[1]), sorted(Up[0]), Y, cfg, n, branch, v1=set(Y.classes[1]))
    return StrategyResult(across, y_name, tuple(img[x] for x in range(Y.n)), branch, info)


# ---------------------------------------------------------------------------
# instance generators


def noisy_complete_host(N: int, max_deficit: int, rng: random.Random, low: Sequence[int] = (),
                        low_degree: int = 0) -> list[int]:
    """``K_N`` minus a random graph of maximum degree ``max_deficit``; vertices in ``low`` keep ``low_degree`` neighbours."""
    full = (1 << N) - 1
    rows = [full & ~(1 << v) for v in range(N)]
    missing = [0] * N
    lowset = set(low)
    for v in low:
        others = [y for y in range(N) if y != v and y not in lowset]
        keepn = set(rng.sample(others, min(low_degree, len(others))))
        for y in range(N):
            if y != v and y not in keepn and rows[v] >> y & 1:
                rows[v] &= ~(1 << y)
                rows[y] &= ~(1 << v)
                missing[y] += 1
    if max_deficit > 0:
        for _ in range(N * max_deficit):
            a, b = rng.randrange(N), rng.randrange(N)
            if a == b or a in lowset or b in lowset or not rows[a] >> b & 1:
                continue
            if missing[a] < max_deficit and missing[b] < max_deficit:
                rows[a] &= ~(1 << b)
                rows[b] &= ~(1 << a)
                missing[a] += 1
                missing[b] += 1
    return rows


def subdivided_tree(n: int, k: int, rng: random.Random, max_degree: int = 3) -> Tree:
    """Random tree on ``n`` vertices with ``k`` disjoint bare paths of length 4 (each edge subdivided thrice)."""
    base_n = n - 3 * k
    if base_n < 2 * k:
        raise ValueError("too many bare paths for this size")
    edges = [(0, 1)]
    deg = [1, 1] + [0] * (base_n - 2)
    for v in range(2, base_n):
        cands = [u for u in range(v) if deg[u] < max_degree]
        p = rng.choice(cands)
        edges.append((p, v))
        deg[p] += 1
        deg[v] += 1
    rng.shuffle(edges)
    chosen, touched = [], set()
    for a, b in edges:
        if len(chosen) == k:
            break
        if a not in touched and b not in touched:
            chosen.append((a, b))
            touched.update((a, b))
    if len(chosen) < k:
        raise ValueError("could not find enough disjoint edges to subdivide")
    out, nxt = [e for e in edges if e not in set(chosen)], base_n
    for a, b in chosen:
        out += [(a, nxt), (nxt, nxt + 1), (nxt + 1, nxt + 2), (nxt + 2, b)]
        nxt += 3
    perm = list(range(n))
    rng.shuffle(perm)
    return Tree(n, [(perm[a], perm[b]) for a, b in out])


@dataclass
class Instance:
    rows: list[int]
    tree: Tree
    anchor: tuple[int, int]
    cfg: EmbedderConfig
    params: dict


def bare_paths_instance(n: int, seed: int, mu=Fraction(1, 200), xi=Fraction(1, 100), margin: int = 2) -> Instance:
    """Host on ``n`` vertices and a tree meeting the bare-path hypotheses with room ``margin``.

    Degree deficits and the low-degree set are at most ``mu n / margin``,
    low-degree vertices keep ``margin`` times the needed degree, the tree has
    ``margin`` times the needed bare paths, and the degree cap is ``margin``
    times the tree's maximum degree.
    """
    rng = random.Random(seed)
    mu, xi = Fraction(mu), Fraction(xi)
    mun = mu * n
    ell = _ceil(10 * mun)
    tree = subdivided_tree(n, margin * ell, rng)
    budget = int(mun / margin)
    nlow = budget // 2
    deficit = budget - nlow
    low = rng.sample(range(n), nlow)
    low_deg = margin * max(_ceil(xi * n), tree.max_degree() + 3 * nlow + 2)
    rows = noisy_complete_host(n, deficit, rng, low, low_deg)
    on = {x for p in bare_paths(tree, 4) for x in p}
    t = rng.choice([x for x in range(n) if x not in on])
    u = rng.randrange(n)
    cfg = EmbedderConfig(mu=mu, xi=xi, seed=seed, max_degree=margin * tree.max_degree())
    return Instance(rows, tree, (t, u), cfg, {"n": n, "seed": seed, "lowDegree": nlow, "deficit": deficit})


def many_leaves_instance(n: int, seed: int, mu=Fraction(1, 200), xi=Fraction(1, 100), margin: int = 2) -> Instance:
    """Host on ``n`` vertices and a random labelled tree meeting the leaves hypotheses with room ``margin``."""
    from .trees import random_tree

    rng = random.Random(seed)
    mu, xi = Fraction(mu), Fraction(xi)
    tree = random_tree(n, rng)
    deficit = int(mu * n / margin)
    u = rng.randrange(n)
    low_deg = margin * max(_ceil(xi * n), tree.max_degree() + 1)
    rows = noisy_complete_host(n, deficit, rng, [u], low_deg)
    t = rng.randrange(n)
    cfg = EmbedderConfig(mu=mu, xi=xi, seed=seed, max_degree=margin * tree.max_degree())
    return Instance(rows, tree, (t, u), cfg, {"n": n, "seed": seed, "deficit": deficit})


def noisy_bipartite_host(a: int, b: int, max_deficit: int, rng: random.Random, low: int = 0,
                         low_degree: int = 0) -> BipartiteHost:
    """``K_{a,b}`` minus sparse noise; ``low`` vertices of the second side keep ``low_degree`` neighbours."""
    N = a + b
    U1, U2 = list(range(a)), list(range(a, N))
    m1, m2 = to_mask(U1), to_mask(U2)
    rows = [m2 if v < a else m1 for v in range(N)]
    missing = [0] * N
    lows = set(rng.sample(U2, low)) if low else set()
    for v in lows:
        keepn = set(rng.sample(U1, min(low_degree, a)))
        for y in U1:
            if y not in keepn:
                rows[v] &= ~(1 << y)
                rows[y] &= ~(1 << v)
                missing[y] += 1
    for _ in range(N * max_deficit):
        x, y = rng.choice(U1), rng.choice(U2)
        if y in lows or not rows[x] >> y & 1:
            continue
        if missing[x] < max_deficit and missing[y] < max_deficit:
            rows[x] &= ~(1 << y)
            rows[y] &= ~(1 << x)
            missing[x] += 1
            missing[y] += 1
    return BipartiteHost.from_rows(rows, U1, U2)
