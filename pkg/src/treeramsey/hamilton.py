"""Hamilton cycles in dense graphs by rotation and extension."""

from __future__ import annotations

import random
from typing import Sequence


def dirac_ok(adj: Sequence[set]) -> bool:
    n = len(adj)
    return n >= 3 and all(2 * len(a) >= n for a in adj)


def is_hamilton_cycle(adj: Sequence[set], cycle: Sequence[int]) -> bool:
    n = len(adj)
    if len(cycle) != n or set(cycle) != set(range(n)):
        return False
    return all(cycle[(i + 1) % n] in adj[cycle[i]] for i in range(n))


def hamilton_cycle(adj: Sequence[set], seed: int = 0, max_rotations: int | None = None) -> list[int] | None:
    """A Hamilton cycle as a vertex list, or None if the search gives up.

    Extend the path at either end while possible.  When both ends are stuck,
    look for the crossing pair that closes the path into a cycle (this always
    exists under the Dirac condition); otherwise rotate at the end and retry.
    A cycle that misses some vertex is reopened through an outside neighbour.
    """
    n = len(adj)
    if n < 3:
        return None
    rng = random.Random(seed)
    if max_rotations is None:
        max_rotations = 10 * n * n
    path = [0]
    on = [False] * n
    on[0] = True
    rotations = 0
    while True:
        grew = True
        while grew:
            grew = False
            for _ in range(2):
                end = path[-1]
                for y in adj[end]:
                    if not on[y]:
                        path.append(y)
                        on[y] = True
                        grew = True
                        break
                if not grew:
                    path.reverse()
        first, end = path[0], path[-1]
        k = len(path)
        cycle = None
        if k >= 3 and first in adj[end]:
            cycle = path
        else:
            for i in range(k - 2):
                if path[i + 1] in adj[first] and path[i] in adj[end]:
                    cycle = path[:i + 1] + path[:i:-1]
                    break
        if cycle is not None:
            if len(cycle) == n:
                return cycle
            for j, c in enumerate(cycle):
                out = next((x for x in adj[c] if not on[x]), None)
                if out is not None:
                    path = [out] + cycle[j:] + cycle[:j]
                    on[out] = True
                    break
            else:
                return None  # disconnected
            continue
        rotations += 1
        if rotations > max_rotations:
            return None
        pivots = [i for i in range(k - 2) if path[i] in adj[end]]
        if not pivots:
            return None
        i = rng.choice(pivots)
        path = path[:i + 1] + path[:i:-1]
