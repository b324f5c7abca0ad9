"""Exhaustive baseline solver; the ground truth for all equivalence testing.

Deliberately simple: enumerate vertex supersets of the terminal set in
increasing size and check the induced-tree conditions directly with bitmasks.
"""

from __future__ import annotations

from itertools import combinations

from .errors import CapacityError
from .graph import Instance, SolveOutcome

ORACLE_CAPACITY = 26


def _mask_connected(adj: list[int], mask: int) -> bool:
    if mask == 0:
        return False
    start = mask & -mask
    seen = start
    frontier = start
    while frontier:
        nxt = 0
        m = frontier
        while m:
            v = (m & -m).bit_length() - 1
            m &= m - 1
            nxt |= adj[v] & mask
        frontier = nxt & ~seen
        seen |= frontier
    return seen == mask


def _mask_edge_count(adj: list[int], mask: int) -> int:
    total = 0
    m = mask
    while m:
        v = (m & -m).bit_length() - 1
        m &= m - 1
        total += (adj[v] & mask).bit_count()
    return total // 2


def solve_oracle(inst: Instance, max_n: int = ORACLE_CAPACITY) -> SolveOutcome:
    """YES iff some vertex superset of the terminals induces a tree.

    Enumerates candidate sets in increasing size, within one size in
    lexicographic order of the added vertices, so the witness is a
    minimum-size solution and deterministic.
    """
    g = inst.graph
    if g.n > max_n:
        raise CapacityError(f"oracle capacity {max_n} exceeded (n={g.n})")
    adj = g.adjacency_masks()
    kmask = 0
    for t in inst.terminals:
        kmask |= 1 << t
    free = [v for v in range(g.n) if not (kmask >> v) & 1]
    k = inst.k
    for extra in range(len(free) + 1):
        size = k + extra
        for combo in combinations(free, extra):
            mask = kmask
            for v in combo:
                mask |= 1 << v
            if _mask_edge_count(adj, mask) != size - 1:
                continue
            if _mask_connected(adj, mask):
                witness = tuple(v for v in range(g.n) if (mask >> v) & 1)
                return SolveOutcome(True, witness)
    return SolveOutcome(False)


def solve_lcis_oracle(inst: Instance, extra: int, max_edges: int, max_n: int = ORACLE_CAPACITY) -> bool:
    """True iff a connected induced subgraph on exactly extra + k vertices
    containing all terminals has at most max_edges edges."""
    g = inst.graph
    if g.n > max_n:
        raise CapacityError(f"oracle capacity {max_n} exceeded (n={g.n})")
    if extra < 0 or inst.k + extra > g.n:
        return False
    adj = g.adjacency_masks()
    kmask = 0
    for t in inst.terminals:
        kmask |= 1 << t
    free = [v for v in range(g.n) if not (kmask >> v) & 1]
    for combo in combinations(free, extra):
        mask = kmask
        for v in combo:
            mask |= 1 << v
        if _mask_edge_count(adj, mask) <= max_edges and _mask_connected(adj, mask):
            return True
    return False
