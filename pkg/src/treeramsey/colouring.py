"""Red/blue colourings of complete graphs and the standard extremal constructions.

Only the red graph is stored, as one bitmask row per vertex.  Blue is the
complement, computed on demand.
"""

from __future__ import annotations

import itertools
import json
import math
import random
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence

from .trees import Tree, profile

RED, BLUE = "red", "blue"


def bits(mask: int) -> list[int]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


def to_mask(vertices: Iterable[int]) -> int:
    m = 0
    for v in vertices:
        m |= 1 << v
    return m


@dataclass(frozen=True)
class TwoColouring:
    N: int
    red: tuple[int, ...]

    def __post_init__(self):
        if len(self.red) != self.N:
            raise ValueError("need one red row per vertex")
        for u in range(self.N):
            row = self.red[u]
            if row >> u & 1:
                raise ValueError(f"loop at {u}")
            if row >> self.N:
                raise ValueError(f"row {u} mentions vertices beyond N")
            for v in bits(row):
                if not self.red[v] >> u & 1:
                    raise ValueError(f"red rows not symmetric at {(u, v)}")

    @classmethod
    def from_red_edges(cls, N: int, edges: Iterable[Sequence[int]]) -> "TwoColouring":
        rows = [0] * N
        for u, v in edges:
            if u == v:
                raise ValueError("loops are not allowed")
            rows[u] |= 1 << v
            rows[v] |= 1 << u
        return cls(N, tuple(rows))

    @classmethod
    def all_red(cls, N: int) -> "TwoColouring":
        full = (1 << N) - 1
        return cls(N, tuple(full & ~(1 << v) for v in range(N)))

    @classmethod
    def all_blue(cls, N: int) -> "TwoColouring":
        return cls(N, (0,) * N)

    @cached_property
    def full(self) -> int:
        return (1 << self.N) - 1

    @cached_property
    def blue(self) -> tuple[int, ...]:
        return tuple(self.full & ~self.red[v] & ~(1 << v) for v in range(self.N))

    def rows(self, colour: str) -> tuple[int, ...]:
        if colour == RED:
            return self.red
        if colour == BLUE:
            return self.blue
        raise ValueError(f"unknown colour {colour!r}")

    def is_red(self, u: int, v: int) -> bool:
        return bool(self.red[u] >> v & 1)

    def colour_of(self, u: int, v: int) -> str:
        return RED if self.is_red(u, v) else BLUE

    def degree(self, u: int, colour: str, within=None) -> int:
        row = self.rows(colour)[u]
        if within is not None:
            row &= within if isinstance(within, int) else to_mask(within)
        return row.bit_count()

    def red_edges(self) -> list[tuple[int, int]]:
        return [(u, v) for u in range(self.N) for v in bits(self.red[u]) if u < v]

    def swapped(self) -> "TwoColouring":
        """Same graph with the colours exchanged."""
        return TwoColouring(self.N, self.blue)

    def to_json(self) -> dict:
        return {"n": self.N, "red": [list(e) for e in self.red_edges()]}

    @classmethod
    def from_json(cls, data) -> "TwoColouring":
        if isinstance(data, str):
            data = json.loads(data)
        return cls.from_red_edges(int(data["n"]), [tuple(e) for e in data["red"]])

    def to_dot(self, name: str = "G") -> str:
        lines = [f"graph {name} {{"]
        lines += [f"  {v};" for v in range(self.N)]
        for u in range(self.N):
            for v in range(u + 1, self.N):
                lines.append(f"  {u} -- {v} [color={self.colour_of(u, v)}];")
        lines.append("}")
        return "\n".join(lines) + "\n"


def block_colouring(sizes: Sequence[int], colour_within: Sequence[str], colour_between) -> tuple[TwoColouring, list[range]]:
    """Colouring whose vertex set is a sequence of consecutive blocks.

    ``colour_within[i]`` colours edges inside block ``i``; ``colour_between``
    is either one colour for every cross pair or a dict keyed by ``(i, j)``
    with ``i < j``.
    """
    parts, start = [], 0
    for s in sizes:
        if s < 0:
            raise ValueError("block sizes must be nonnegative")
        parts.append(range(start, start + s))
        start += s
    N = start
    rows = [0] * N
    masks = [to_mask(p) for p in parts]
    for i, p in enumerate(parts):
        for v in p:
            if colour_within[i] == RED:
                rows[v] |= masks[i] & ~(1 << v)
            for j in range(len(parts)):
                if j == i:
                    continue
                key = (min(i, j), max(i, j))
                c = colour_between if isinstance(colour_between, str) else colour_between.get(key, BLUE)
                if c == RED:
                    rows[v] |= masks[j]
    return TwoColouring(N, tuple(rows)), parts


# ---------------------------------------------------------------------------
# constructions


@dataclass(frozen=True)
class ConstructionParams:
    kind: str
    t1: int
    t2: int
    tau1: int = 0
    tau2: int = 0

    @property
    def n(self) -> int:
        return self.t1 + self.t2

    @property
    def nu(self) -> int:
        return self.tau1 + self.tau2


@dataclass(frozen=True)
class Construction:
    params: ConstructionParams
    colouring: TwoColouring
    parts: tuple[range, range]
    inside: str  # colour of the two cliques

    @property
    def N(self) -> int:
        return self.colouring.N


def construction_sizes(p: ConstructionParams) -> tuple[int, int, str]:
    """Clique sizes and clique colour for a construction kind."""
    n, nu = p.n, p.nu
    if p.kind == "A1":
        return p.t1 + p.t2 - 1, p.t2 - 1, RED
    if p.kind == "A2":
        return p.t1 - 1, p.t1 - 1, RED
    if p.kind == "B1":
        return n - 1, p.tau2 - 1, RED
    if p.kind == "B2":
        return nu - 1, min(p.t2, nu) - 1, BLUE
    if p.kind == "B3":
        m = min(p.t1, nu) - 1
        return m, m, BLUE
    if p.kind == "B4":
        return p.tau1 - 1, p.tau1 - 1, RED
    raise ValueError(f"unknown construction kind {p.kind!r}")


def make_construction(p: ConstructionParams) -> Construction:
    """Two monochromatic cliques joined completely in the other colour."""
    if p.t1 < p.t2 or p.t2 < 1:
        raise ValueError("need t1 >= t2 >= 1")
    if p.kind.startswith("B") and (p.tau1 < p.tau2 or p.tau2 < 1):
        raise ValueError("need tau1 >= tau2 >= 1")
    a, b, inside = construction_sizes(p)
    if a < 0 or b < 0 or a + b == 0:
        raise ValueError(f"{p.kind} is degenerate at these parameters (parts {a}, {b})")
    outside = BLUE if inside == RED else RED
    col, parts = block_colouring([a, b], [inside, inside], outside)
    return Construction(p, col, (parts[0], parts[1]), inside)


def params_for(kind: str, T: Tree, S: Tree | None = None) -> ConstructionParams:
    pt = profile(T)
    if S is None:
        return ConstructionParams(kind, pt.t1, pt.t2)
    ps = profile(S)
    return ConstructionParams(kind, pt.t1, pt.t2, ps.t1, ps.t2)


@dataclass
class AvoidReport:
    red_T: bool | None
    blue_S: bool | None
    red_embedding: dict | None = None
    blue_embedding: dict | None = None
    nodes: int = 0

    def as_dict(self) -> dict:
        return {"redT": self.red_T, "blueS": self.blue_S,
                "redEmbedding": self.red_embedding, "blueEmbedding": self.blue_embedding,
                "nodes": self.nodes}


def verify_avoids(colouring: TwoColouring, T: Tree, S: Tree, budget: int | None = None) -> AvoidReport:
    """Search for a red ``T`` and a blue ``S``; ``None`` verdicts mean the budget ran out."""
    from .embedding import contains_mono

    r = contains_mono(colouring, T, RED, budget=budget)
    b = contains_mono(colouring, S, BLUE, budget=budget)
    return AvoidReport(r.verdict, b.verdict, r.mapping_dict(), b.mapping_dict(), r.nodes + b.nodes)


# ---------------------------------------------------------------------------
# extremality


@dataclass(frozen=True)
class ExtremalWitness:
    type: int
    U1: frozenset
    U2: frozenset
    mu: Fraction

    def as_dict(self) -> dict:
        return {"type": self.type, "U1": sorted(self.U1), "U2": sorted(self.U2), "mu": str(self.mu)}


# dense colour inside U1 for each type; the same colour is sparse across U1-U2
_DENSE = {1: RED, 2: BLUE, 3: BLUE, 4: RED}


def _other(colour: str) -> str:
    return BLUE if colour == RED else RED


def extremal_size_targets(kind: int, T: Tree, S: Tree) -> tuple[int, int]:
    pt, ps = profile(T), profile(S)
    if kind == 1:
        return pt.n, ps.t2
    if kind == 2:
        return ps.n, pt.t2
    if kind == 3:
        return pt.t1, pt.t1
    if kind == 4:
        return ps.t1, ps.t1
    raise ValueError("type must be 1..4")


def extremal_failures(colouring: TwoColouring, w: ExtremalWitness, T: Tree, S: Tree) -> list[str]:
    """All violated conditions of the claimed extremality type (empty list means it holds)."""
    fails = []
    mu = Fraction(w.mu)
    n = T.n
    slack = mu * n
    U1, U2 = set(w.U1), set(w.U2)
    if any(not 0 <= v < colouring.N for v in U1 | U2):
        return ["vertex out of range"]
    if U1 & U2:
        fails.append("U1 and U2 intersect")
    s1, s2 = extremal_size_targets(w.type, T, S)
    if len(U1) < (1 - mu) * s1:
        fails.append(f"|U1|={len(U1)} < (1-mu)*{s1}")
    if len(U2) < (1 - mu) * s2:
        fails.append(f"|U2|={len(U2)} < (1-mu)*{s2}")
    dense = _DENSE[w.type]
    sparse_inside = _other(dense)
    m1, m2 = to_mask(U1), to_mask(U2)
    inside_sets = [(U1, m1)] if w.type in (1, 2) else [(U1, m1), (U2, m2)]
    for U, m in inside_sets:
        for u in sorted(U):
            d = colouring.degree(u, sparse_inside, m)
            if d > slack:
                fails.append(f"{sparse_inside} degree of {u} inside its part is {d} > {slack}")
                break
    for U, other in ((U1, m2), (U2, m1)):
        for u in sorted(U):
            d = colouring.degree(u, dense, other)
            if d > slack:
                fails.append(f"{dense} degree of {u} across is {d} > {slack}")
                break
    return fails


def verify_extremal(colouring: TwoColouring, witness: ExtremalWitness, T: Tree, S: Tree) -> bool:
    return not extremal_failures(colouring, witness, T, S)


def canonical_witness(con: Construction, mu) -> ExtremalWitness:
    """The witness a B-construction suggests: its two cliques, in type order."""
    kind = {"B1": 1, "B2": 2, "B3": 3, "B4": 4}[con.params.kind]
    return ExtremalWitness(kind, frozenset(con.parts[0]), frozenset(con.parts[1]), Fraction(mu))


def _prune(colouring: TwoColouring, U: set, colour: str, limit) -> set:
    """Drop the worst vertex until every colour-degree inside ``U`` is at most ``limit``."""
    U = set(U)
    while U:
        m = to_mask(U)
        worst = max(U, key=lambda u: (colouring.degree(u, colour, m), -u))
        if colouring.degree(worst, colour, m) <= limit:
            break
        U.discard(worst)
    return U


def find_extremal_witness(colouring: TwoColouring, T: Tree, S: Tree, mu,
                          types: Sequence[int] = (1, 2, 3, 4)) -> ExtremalWitness | None:
    """Heuristic search for an extremality witness.

    Seeds ``U1`` from each vertex's closed neighbourhood in the dense colour,
    closes it under a degree threshold, takes ``U2`` from the vertices barely
    adjacent to ``U1`` in that colour, prunes, and asks :func:`verify_extremal`.
    A ``None`` result proves nothing.
    """
    mu = Fraction(mu)
    slack = mu * T.n
    N = colouring.N
    tried = set()
    for kind in types:
        dense = _DENSE[kind]
        sparse = _other(dense)
        for v in range(N):
            seed = colouring.rows(dense)[v] | (1 << v)
            U1 = set(bits(seed))
            for _ in range(3):
                m = to_mask(U1)
                U1 = {u for u in range(N)
                      if colouring.degree(u, dense, m) + (1 if u in U1 else 0) >= len(U1) - slack}
            U1 = _prune(colouring, U1, sparse, slack)
            m1 = to_mask(U1)
            U2 = {u for u in range(N) if u not in U1 and colouring.degree(u, dense, m1) <= slack}
            if kind in (3, 4):
                U2 = _prune(colouring, U2, sparse, slack)
            m2 = to_mask(U2)
            U1 = {u for u in U1 if colouring.degree(u, dense, m2) <= slack}
            key = (kind, frozenset(U1), frozenset(U2))
            if key in tried:
                continue
            tried.add(key)
            w = ExtremalWitness(kind, frozenset(U1), frozenset(U2), mu)
            if verify_extremal(colouring, w, T, S):
                return w
            if kind in (3, 4):
                w = ExtremalWitness(kind, frozenset(U2), frozenset(U1), mu)
                if verify_extremal(colouring, w, T, S):
                    return w
    return None


# ---------------------------------------------------------------------------
# random colourings


def sample_random_colouring(N: int, red_prob, seed: int) -> TwoColouring:
    """Each pair red independently with probability ``red_prob``."""
    p = Fraction(red_prob)
    if not 0 <= p <= 1:
        raise ValueError("red_prob must lie in [0, 1]")
    rng = random.Random(seed)
    pf = float(p)
    rows = [0] * N
    for u in range(N):
        for v in range(u + 1, N):
            x = rng.random()
            if p == 1 or (p != 0 and x < pf):
                rows[u] |= 1 << v
                rows[v] |= 1 << u
    return TwoColouring(N, tuple(rows))


@dataclass
class ExpansionResult:
    violator: tuple[int, ...] | None
    exhaustive: bool
    checked: int

    def as_dict(self) -> dict:
        return {"violator": list(self.violator) if self.violator is not None else None,
                "exhaustive": self.exhaustive, "checked": self.checked}


def _closed_union(rows, U) -> int:
    m = 0
    for u in U:
        m |= rows[u] | (1 << u)
    return m


def check_neighbourhood_expansion(colouring: TwoColouring, t: int, bound: int, *,
                                  exhaustive_limit: int = 200_000, samples: int = 2000,
                                  seed: int = 0) -> ExpansionResult:
    """Look for a ``t``-set ``U`` with ``|N_red(U) ∪ U| >= bound``.

    Exhaustive when ``C(N, t)`` is at most ``exhaustive_limit``.  Otherwise a
    greedy max-coverage pick plus random samples are tried, and a miss is
    reported as non-exhaustive.
    """
    N = colouring.N
    if t > N:
        raise ValueError("t exceeds N")
    rows = colouring.red
    if math.comb(N, t) <= exhaustive_limit:
        checked = 0
        for U in itertools.combinations(range(N), t):
            checked += 1
            if _closed_union(rows, U).bit_count() >= bound:
                return ExpansionResult(U, True, checked)
        return ExpansionResult(None, True, checked)
    checked = 0
    # greedy coverage from each start vertex
    for start in range(N):
        U = [start]
        cover = rows[start] | (1 << start)
        while len(U) < t:
            best = max((v for v in range(N) if v not in U),
                       key=lambda v: ((cover | rows[v] | (1 << v)).bit_count(), -v))
            U.append(best)
            cover |= rows[best] | (1 << best)
        checked += 1
        if cover.bit_count() >= bound:
            return ExpansionResult(tuple(sorted(U)), False, checked)
    rng = random.Random(seed)
    for _ in range(samples):
        U = tuple(sorted(rng.sample(range(N), t)))
        checked += 1
        if _closed_union(rows, U).bit_count() >= bound:
            return ExpansionResult(U, False, checked)
    return ExpansionResult(None, False, checked)
