"""Exact Ramsey numbers of small tree pairs, and the four-construction lower bound.

The search grows avoiding colourings one vertex at a time.  Level ``k``
holds one representative per isomorphism class of 2-colourings of ``K_k``
with no red ``T`` and no blue ``S``.  Deleting a vertex from an avoiding
colouring leaves an avoiding colouring, so every class at level ``k+1``
arises by adding a vertex to some representative at level ``k`` and
choosing its red neighbourhood.  Only trees through the new vertex need
checking, since the old part was already clean.
"""

from __future__ import annotations

import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import networkx as nx

from .colouring import TwoColouring, bits
from .embedding import contains_tree, decide_arrows
from .trees import Tree, TreeProfile, profile


def lower_bound(pT: TreeProfile, pS: TreeProfile) -> int:
    """``max{n + tau2, nu + min{t2, nu}, min{2 t1, 2 nu}, 2 tau1} - 1`` with ``n >= nu``."""
    n, nu = pT.n, pS.n
    if pT.t2 < 1 or pS.t2 < 1:
        raise ValueError("both trees need at least one edge")
    if n < nu:
        raise ValueError(f"order the pair so that |T| >= |S| (got {n} < {nu})")
    t1, t2, tau1, tau2 = pT.t1, pT.t2, pS.t1, pS.t2
    return max(n + tau2, nu + min(t2, nu), min(2 * t1, 2 * nu), 2 * tau1) - 1


def lower_bound_trees(T: Tree, S: Tree) -> int:
    return lower_bound(profile(T), profile(S))


class SearchBudgetExceeded(Exception):
    pass


def _extend_one(rows: tuple[int, ...], T: Tree, S: Tree, node_budget: int | None):
    """All avoiding one-vertex extensions of an avoiding colouring (as row tuples)."""
    k = len(rows)
    full = (1 << k) - 1
    out = []
    nodes = 0
    for nb in range(1 << k):
        red = [r | ((nb >> v & 1) << k) for v, r in enumerate(rows)] + [nb]
        nodes += 1
        r = contains_tree(red, T, budget=node_budget, anchor=k)
        if r.verdict is None:
            raise SearchBudgetExceeded
        if r.verdict:
            continue
        blue = [(full | (1 << k)) & ~red[v] & ~(1 << v) for v in range(k + 1)]
        b = contains_tree(blue, S, budget=node_budget, anchor=k)
        if b.verdict is None:
            raise SearchBudgetExceeded
        if b.verdict:
            continue
        out.append(tuple(red))
    return out, nodes


def _extend_chunk(args):
    chunk, T, S, node_budget = args
    res, nodes = [], 0
    for rows in chunk:
        ext, k = _extend_one(rows, T, S, node_budget)
        res.extend(ext)
        nodes += k
    return res, nodes


def _to_nx(rows: tuple[int, ...]) -> nx.Graph:
    g = nx.Graph()
    g.add_nodes_from(range(len(rows)))
    g.add_edges_from((u, v) for u in range(len(rows)) for v in bits(rows[u]) if u < v)
    return g


class _IsoClasses:
    """Isomorphism dedupe: bucket by a WL hash, confirm with VF2."""

    def __init__(self):
        self.buckets: dict[tuple, list[tuple[tuple[int, ...], nx.Graph]]] = {}
        self.reps: list[tuple[int, ...]] = []

    def add(self, rows: tuple[int, ...]) -> bool:
        g = _to_nx(rows)
        degs = tuple(sorted(r.bit_count() for r in rows))
        key = (degs, nx.weisfeiler_lehman_graph_hash(g, iterations=3))
        bucket = self.buckets.setdefault(key, [])
        for _, h in bucket:
            if nx.is_isomorphic(g, h):
                return False
        bucket.append((rows, g))
        self.reps.append(rows)
        return True


@dataclass
class LevelStats:
    N: int
    classes: int
    checks: int


@dataclass
class SearchOutcome:
    """``status`` is "exact" when every level up to ``reached`` was completed."""

    levels: list[list[tuple[int, ...]]]
    stats: list[LevelStats]
    status: str
    checks: int
    seconds: float


def _levels(T: Tree, S: Tree, nmax: int, budget: int | None, jobs: int = 1,
            node_budget: int | None = None, stop_when_empty: bool = True) -> SearchOutcome:
    t0 = time.perf_counter()
    levels = [[()]]
    stats = [LevelStats(0, 1, 0)]
    checks = 0
    for k in range(nmax):
        cur = levels[-1]
        if not cur and stop_when_empty:
            break
        iso = _IsoClasses()
        level_checks = 0
        try:
            if jobs > 1 and len(cur) > 1:
                chunks = [cur[i::jobs] for i in range(jobs)]
                with ProcessPoolExecutor(max_workers=jobs) as ex:
                    results = list(ex.map(_extend_chunk, [(c, T, S, node_budget) for c in chunks]))
            else:
                results = []
                for rows in cur:
                    if budget is not None and checks + level_checks > budget:
                        raise SearchBudgetExceeded
                    ext, n = _extend_one(rows, T, S, node_budget)
                    level_checks += n
                    results.append((ext, 0))
        except SearchBudgetExceeded:
            return SearchOutcome(levels, stats, "unknown", checks + level_checks, time.perf_counter() - t0)
        for ext, n in results:
            level_checks += n
            for rows in ext:
                iso.add(rows)
        checks += level_checks
        levels.append(iso.reps)
        stats.append(LevelStats(k + 1, len(iso.reps), level_checks))
        if budget is not None and checks > budget and iso.reps:
            return SearchOutcome(levels, stats, "unknown", checks, time.perf_counter() - t0)
    return SearchOutcome(levels, stats, "exact", checks, time.perf_counter() - t0)


def avoiding_colouring_search(T: Tree, S: Tree, N: int, budget: int | None = None,
                              jobs: int = 1) -> tuple[str, TwoColouring | None]:
    """Find a colouring of ``K_N`` with no red ``T`` and no blue ``S``.

    Returns ``("found", colouring)``, ``("none", None)`` or ``("unknown", None)``.
    """
    out = _levels(T, S, N, budget, jobs)
    if len(out.levels) > N and out.levels[N]:
        rows = out.levels[N][0]
        return "found", TwoColouring(N, rows)
    if out.status == "unknown":
        return "unknown", None
    return "none", None


@dataclass
class Certificate:
    """A colouring of ``K_N`` with neither a red ``T`` nor a blue ``S``."""

    N: int
    colouring: TwoColouring
    red_T_absent: bool
    blue_S_absent: bool
    provenance: str
    extra: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        out = {"N": self.N, "colouring": self.colouring.to_json(),
               "redTAbsent": self.red_T_absent, "blueSAbsent": self.blue_S_absent,
               "provenance": self.provenance}
        out.update(self.extra)
        return out

    @classmethod
    def from_dict(cls, d: dict) -> "Certificate":
        known = {"N", "colouring", "redTAbsent", "blueSAbsent", "provenance"}
        return cls(int(d["N"]), TwoColouring.from_json(d["colouring"]), bool(d["redTAbsent"]),
                   bool(d["blueSAbsent"]), d["provenance"], {k: v for k, v in d.items() if k not in known})

    def recheck(self, T: Tree, S: Tree, budget: int | None = None) -> bool:
        return decide_arrows(self.colouring, T, S, budget).kind == "Neither"


@dataclass
class RamseyResult:
    R: int | None
    status: str  # "exact" or "unknown"
    certificate: Certificate | None
    stats: list[LevelStats]
    checks: int
    seconds: float

    def as_dict(self) -> dict:
        out = {"R": self.R, "status": self.status, "checks": self.checks,
               "seconds": round(self.seconds, 3),
               "levels": [{"N": s.N, "classes": s.classes, "checks": s.checks} for s in self.stats]}
        if self.certificate is not None:
            out["certificateN"] = self.certificate.N
            out["certificate"] = self.certificate.as_dict()
        return out


def ramsey_exact(T: Tree, S: Tree, nmax: int, budget: int | None = None, jobs: int = 1) -> RamseyResult:
    """Smallest ``N <= nmax`` forcing a red ``T`` or a blue ``S``, with a certificate at ``N - 1``."""
    out = _levels(T, S, nmax, budget, jobs)
    for N, reps in enumerate(out.levels):
        if not reps:
            rows = out.levels[N - 1][0]
            col = TwoColouring(N - 1, rows)
            cert = Certificate(N - 1, col, True, True, "exact")
            return RamseyResult(N, "exact", cert, out.stats, out.checks, out.seconds)
    return RamseyResult(None, "unknown", None, out.stats, out.checks, out.seconds)


def known_values() -> list[dict]:
    """Classical small values used as test vectors.

    Paths follow ``R(P_n, P_m) = n + floor(m/2) - 1`` (vertex counts, ``n >= m``).
    Star values were obtained by exhaustive search; the commonly quoted parity
    rule for stars is stated for edge counts, see the notes on divergence.
    """
    out = []
    for n, m in ((4, 4), (5, 4), (5, 5), (6, 6)):
        out.append({"T": f"path{n}", "S": f"path{m}", "R": n + m // 2 - 1, "provenance": "path formula"})
    for a, b, r in ((2, 2, 3), (3, 2, 5), (3, 3, 6)):
        out.append({"T": f"star{a}", "S": f"star{b}", "R": r, "provenance": "exhaustive search"})
    out.append({"T": "path4", "S": "star2", "R": 4, "provenance": "exhaustive search"})
    return out


def star_formula_as_printed(n: int, m: int) -> int:
    """The star rule with ``n, m`` read as vertex counts: ``m+n-3`` if both even, else ``m+n-2``."""
    return m + n - 3 if n % 2 == 0 and m % 2 == 0 else m + n - 2


def star_formula_edges(a: int, b: int) -> int:
    """``R(K_{1,a}, K_{1,b}) = a + b - 1`` if ``a, b`` both even, else ``a + b``."""
    return a + b - 1 if a % 2 == 0 and b % 2 == 0 else a + b
