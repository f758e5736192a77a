"""Alpha-weight functions on digraphs and the decompositions built from them.

For a digraph ``H`` and ``alpha >= 1``, a weight function ``f >= 0`` on the
arcs must satisfy ``w(v, f) = out(v)/alpha + in(v) <= 1`` at every vertex.
Everything here is exact rational arithmetic.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction

from .colouring import BLUE, RED, TwoColouring, bits, to_mask
from .lp import ONE, ZERO, Tableau, solve_lp


@dataclass(frozen=True)
class Digraph:
    n: int
    arcs: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        arcs = tuple((int(u), int(v)) for u, v in self.arcs)
        if len(set(arcs)) != len(arcs):
            raise ValueError("duplicate arc")
        for u, v in arcs:
            if u == v:
                raise ValueError("loops are not allowed")
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise ValueError(f"arc {(u, v)} out of range")
        object.__setattr__(self, "arcs", arcs)

    def to_json(self) -> dict:
        return {"n": self.n, "arcs": [list(a) for a in self.arcs]}

    @classmethod
    def from_json(cls, data) -> "Digraph":
        if isinstance(data, str):
            data = json.loads(data)
        return cls(int(data["n"]), tuple(tuple(a) for a in data["arcs"]))


@dataclass(frozen=True)
class WeightProblem:
    digraph: Digraph
    alpha: Fraction

    def __post_init__(self):
        a = Fraction(self.alpha)
        if a < 1:
            raise ValueError("alpha must be at least 1")
        object.__setattr__(self, "alpha", a)

    def matrix(self) -> list[list[Fraction]]:
        """Row ``v`` gives the coefficients of ``w(v, f)``."""
        g = self.digraph
        inv = 1 / self.alpha
        M = [[ZERO] * len(g.arcs) for _ in range(g.n)]
        for e, (u, v) in enumerate(g.arcs):
            M[u][e] += inv
            M[v][e] += ONE
        return M


def vertex_weight(p: WeightProblem, f: dict, v: int) -> Fraction:
    total = ZERO
    for (a, b), x in f.items():
        if a == v:
            total += x / p.alpha
        if b == v:
            total += x
    return total


def is_weight_function(p: WeightProblem, f: dict) -> bool:
    if any(x < 0 for x in f.values()):
        return False
    return all(vertex_weight(p, f, v) <= 1 for v in range(p.digraph.n))


@dataclass
class WeightSolution:
    wmax: Fraction
    f: dict  # arc -> Fraction
    dual: tuple[Fraction, ...]
    tableau: Tableau = field(repr=False)

    def f_json(self) -> dict:
        return {f"{u}->{v}": str(x) for (u, v), x in sorted(self.f.items())}


def _initial_tableau(p: WeightProblem) -> Tableau:
    g = p.digraph
    m, n = len(g.arcs), g.n
    M = p.matrix()
    rows = []
    for v in range(n):
        row = M[v] + [ZERO] * n
        row[m + v] = ONE
        rows.append(row)
    return Tableau(rows, [ONE] * n, [m + v for v in range(n)], [ONE] * m + [ZERO] * n)


def check_duality(p: WeightProblem, sol: WeightSolution) -> list[str]:
    """Primal feasibility, dual feasibility and equal objectives; empty means certified."""
    out = []
    if not is_weight_function(p, sol.f):
        out.append("primal infeasible")
    if sum(sol.f.values(), ZERO) != sol.wmax:
        out.append("primal objective mismatch")
    y = sol.dual
    if any(t < 0 for t in y):
        out.append("negative dual")
    for u, v in p.digraph.arcs:
        if y[u] / p.alpha + y[v] < 1:
            out.append(f"dual constraint of arc {(u, v)} violated")
    if sum(y, ZERO) != sol.wmax:
        out.append("dual objective differs from primal")
    return out


def max_weight(p: WeightProblem) -> WeightSolution:
    """Exact maximum total weight, with an optimal dual as certificate."""
    g = p.digraph
    tab = _initial_tableau(p)
    tab.optimize()
    x = tab.solution()
    m = len(g.arcs)
    f = {arc: x[e] for e, arc in enumerate(g.arcs)}
    dual = tuple(-tab.cost[m + v] for v in range(g.n))
    sol = WeightSolution(tab.value, f, dual, tab)
    bad = check_duality(p, sol)
    if bad:
        raise AssertionError("simplex certificate failed: " + "; ".join(bad))
    return sol


def _has_slack_on_optimal_face(p: WeightProblem, sol: WeightSolution, v: int) -> bool:
    """Is there a maximum weight function with ``w(v, f) < 1``?

    Fix one optimal dual.  By complementary slackness the optimal face is
    the feasible region with every column of negative reduced cost pinned
    at zero.  The final tableau is a feasible basis of that restricted
    program, so maximise the slack of ``v`` from there.
    """
    m = len(p.digraph.arcs)
    tab = sol.tableau.copy()
    allowed = {j for j, d in enumerate(tab.cost) if d == 0}
    target = m + v
    c = [ZERO] * tab.ncols
    c[target] = ONE
    tab.set_objective(c)
    tab.optimize(allowed=allowed, stop_above=ZERO)
    return tab.value > 0


def a_membership_literal(p: WeightProblem, wmax: Fraction, v: int) -> bool:
    """Reference route: minimise ``w(v, f)`` over all maximum weight functions via two-phase LP."""
    g = p.digraph
    m = len(g.arcs)
    if m == 0:
        return True
    M = p.matrix()
    res = solve_lp([-a for a in M[v]], M, [ONE] * g.n, [[ONE] * m], [wmax])
    return -res.value < 1


@dataclass
class ABCPartition:
    A: frozenset
    B: frozenset
    C: frozenset
    wmax: Fraction
    alpha: Fraction
    checks: dict

    def as_dict(self) -> dict:
        return {"A": sorted(self.A), "B": sorted(self.B), "C": sorted(self.C),
                "wMax": str(self.wmax), "alpha": str(self.alpha), "checks": self.checks}


def abc_checks(n: int, A, B, C, wmax: Fraction, alpha: Fraction) -> dict:
    a = alpha
    return {
        "ABC:5": len(B) <= wmax / a,
        "ABC:6": len(C) <= (1 + 1 / a) * wmax - (1 + a) * len(B),
        "ABC:8": len(A) > n - (1 + 1 / a) * wmax,
        # since |A| = n - |B| - |C|, ABC:6 gives |A| >= n - (1+1/a) wmax + a|B|:
        # strict when B is non-empty, but equality is possible when B is empty
        # (e.g. every maximiser saturates every vertex, so A is empty too)
        "ABC:8-weak": len(A) >= n - (1 + 1 / a) * wmax,
    }


ASSERTED_ABC = ("ABC:5", "ABC:6", "ABC:8-weak")


def abc_partition(p: WeightProblem, sol: WeightSolution | None = None, strict: bool = True) -> ABCPartition:
    """Slack vertices ``A``, their in-neighbours ``B``, and the rest ``C``.

    Membership in ``A`` is settled exactly.  A vertex with slack under the
    computed maximiser is in ``A``; one with positive optimal dual is tight
    under every maximiser; only the remaining vertices need an LP.
    """
    g = p.digraph
    sol = sol or max_weight(p)
    m = len(g.arcs)
    x = sol.tableau.solution()
    A = set()
    for v in range(g.n):
        if x[m + v] > 0:
            A.add(v)
        elif sol.dual[v] > 0:
            continue
        elif _has_slack_on_optimal_face(p, sol, v):
            A.add(v)
    B = {u for u, v in g.arcs if v in A}
    C = set(range(g.n)) - A - B
    checks = abc_checks(g.n, A, B, C, sol.wmax, p.alpha)
    if strict and not all(checks[k] for k in ASSERTED_ABC):
        raise AssertionError(f"A/B/C inequalities failed: {checks}")
    return ABCPartition(frozenset(A), frozenset(B), frozenset(C), sol.wmax, p.alpha, checks)


# ---------------------------------------------------------------------------
# link digraphs of coloured graphs


@dataclass(frozen=True)
class LinkDigraph:
    digraph: Digraph
    labels: tuple[int, ...]  # digraph vertex i is colouring vertex labels[i]


def colour_link_digraph(col: TwoColouring, x: int, colour: str) -> LinkDigraph:
    """Vertices ``V - x``; arc ``yz`` whenever ``xy`` and ``yz`` both have the given colour."""
    if not 0 <= x < col.N:
        raise ValueError("x out of range")
    labels = tuple(v for v in range(col.N) if v != x)
    index = {v: i for i, v in enumerate(labels)}
    rows = col.rows(colour)
    arcs = []
    for y in bits(rows[x]):
        for z in bits(rows[y]):
            if z != x:
                arcs.append((index[y], index[z]))
    return LinkDigraph(Digraph(len(labels), tuple(sorted(arcs))), labels)


@dataclass
class QRReport:
    x: int
    colour: str
    Q: frozenset
    R: frozenset
    A: frozenset
    B: frozenset
    C: frozenset
    wmax: Fraction
    checks: dict

    @property
    def ok(self) -> bool:
        # the strict ABC:8 flag is informational, see abc_checks
        return all(v for k, v in self.checks.items() if k != "ABC:8")

    def as_dict(self) -> dict:
        return {"x": self.x, "colour": self.colour, "Q": sorted(self.Q), "R": sorted(self.R),
                "A": sorted(self.A), "B": sorted(self.B), "C": sorted(self.C),
                "wMax": str(self.wmax), "checks": self.checks}


def qr_report(col: TwoColouring, x: int, colour: str, alpha) -> QRReport:
    alpha = Fraction(alpha)
    link = colour_link_digraph(col, x, colour)
    part = abc_partition(WeightProblem(link.digraph, alpha), strict=False)
    lab = link.labels
    A = frozenset(lab[i] for i in part.A)
    B = frozenset(lab[i] for i in part.B)
    C = frozenset(lab[i] for i in part.C)
    Q = frozenset(bits(col.rows(colour)[x]))
    R = frozenset(range(col.N)) - Q - {x}
    rows = col.rows(colour)
    qa, qc, ra = Q & A, Q & C, R & A

    def no_edges_within(S):
        m = to_mask(S)
        return all(not rows[u] & m for u in S)

    def no_edges_between(S1, S2):
        m = to_mask(S2)
        return all(not rows[u] & m for u in S1)

    checks = dict(part.checks)
    checks["QR:1"] = not (B & R)
    checks["QR:2"] = (no_edges_within(qa) and no_edges_between(qa, qc)
                      and no_edges_between(qa, ra) and no_edges_between(qc, ra))
    checks["QR:3"] = len(Q & B) + len(R & C) <= part.wmax
    return QRReport(x, colour, Q, R, A, B, C, part.wmax, checks)


@dataclass
class BSituation:
    z: int | None
    X: frozenset
    Y: frozenset
    reason: str | None
    k: Fraction

    @property
    def ok(self) -> bool:
        return self.reason is None

    def as_dict(self) -> dict:
        return {"z": self.z, "X": sorted(self.X), "Y": sorted(self.Y), "reason": self.reason,
                "k": str(self.k)}


def biclique_situation_failures(col: TwoColouring, v: int, s: BSituation, alpha, beta, eps) -> list[str]:
    """Edge-by-edge check of the blue double-star-plus-biclique conclusion."""
    alpha, beta, eps = Fraction(alpha), Fraction(beta), Fraction(eps)
    k = s.k
    out = []
    X, Y, z = set(s.X), set(s.Y), s.z
    if X & Y:
        out.append("X and Y intersect")
    if z is None or z == v or z in X | Y or v in X | Y:
        out.append("z or v inside X or Y")
    lo = (1 / alpha - 10 * eps) * k
    if len(X) < lo or len(Y) < lo:
        out.append(f"|X|={len(X)} or |Y|={len(Y)} below {lo}")
    if len(X) + len(Y) < (1 / alpha + 1 / beta - 10 * eps) * k:
        out.append("|X|+|Y| too small")
    if z is not None and any(col.is_red(z, u) for u in X | Y):
        out.append("z has a red edge into X or Y")
    if any(col.is_red(a, b) for a in X for b in Y):
        out.append("red edge between X and Y")
    return out


def find_biclique_situation(col: TwoColouring, v: int, alpha, beta, eps) -> BSituation:
    """Blue structure next to a high red degree vertex whose red link has small weight.

    Hypotheses are checked at runtime and a failing one is named in ``reason``.
    """
    alpha, beta, eps = Fraction(alpha), Fraction(beta), Fraction(eps)
    if not (1 < beta <= alpha):
        raise ValueError("need 1 < beta <= alpha")
    N = col.N
    k = Fraction(N) / (1 + 1 / alpha + 1 / beta - 2 * eps)
    empty = frozenset()
    if col.degree(v, RED) < (1 / alpha + 1 / beta - 5 * eps) * k:
        return BSituation(None, empty, empty, "degree hypothesis", k)
    rep = qr_report(col, v, RED, alpha)
    if rep.wmax >= (1 + eps) * k:
        return BSituation(None, empty, empty, "wMax too large", k)
    QA, QC, RA = rep.Q & rep.A, rep.Q & rep.C, rep.R & rep.A
    if not QA:
        return BSituation(None, empty, empty, "Q∩A empty", k)
    pool = QA | QC | RA
    z = max(sorted(QA), key=lambda u: col.degree(u, BLUE, to_mask(pool)))
    blue_z = set(bits(col.blue[z]))
    if len(QC) >= (1 / alpha - 6 * eps) * k:
        X = QC & blue_z
        Y = (QA | RA) & blue_z
    else:
        target = max(math.ceil((1 / alpha - 10 * eps) * k), len(QC))
        X = set(QC & blue_z)
        for u in sorted(QA & blue_z):
            if len(X) >= target:
                break
            X.add(u)
        Y = ((QA | RA) & blue_z) - X
    s = BSituation(z, frozenset(X) - {z}, frozenset(Y) - {z}, None, k)
    bad = biclique_situation_failures(col, v, s, alpha, beta, eps)
    if bad:
        return BSituation(None, empty, empty, "postcondition: " + bad[0], k)
    return s
