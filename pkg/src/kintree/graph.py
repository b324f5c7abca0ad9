"""Simple undirected graphs, problem instances, and `.kit` file I/O.

Vertices are dense 0-based indices in memory and 1-based in files.
Graphs and instances are immutable after construction and safe to share.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

from .errors import ContractError, InputError


class Graph:
    """An immutable simple graph on vertices 0..n-1."""

    __slots__ = ("n", "_edges", "_adj")

    def __init__(self, n: int, edges: Iterable[tuple[int, int]] = ()):
        if n < 0:
            raise InputError("vertex count must be non-negative")
        seen: set[tuple[int, int]] = set()
        adj: list[list[int]] = [[] for _ in range(n)]
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise InputError(f"edge ({u}, {v}) out of range for n={n}")
            if u == v:
                raise InputError(f"self-loop at vertex {u}")
            e = (u, v) if u < v else (v, u)
            if e in seen:
                raise InputError(f"duplicate edge ({e[0]}, {e[1]})")
            seen.add(e)
            adj[u].append(v)
            adj[v].append(u)
        self.n = n
        self._edges = frozenset(seen)
        self._adj = tuple(tuple(sorted(nb)) for nb in adj)

    @property
    def m(self) -> int:
        return len(self._edges)

    @property
    def edges(self) -> tuple[tuple[int, int], ...]:
        return tuple(sorted(self._edges))

    def neighbors(self, v: int) -> tuple[int, ...]:
        return self._adj[v]

    def degree(self, v: int) -> int:
        return len(self._adj[v])

    def has_edge(self, u: int, v: int) -> bool:
        e = (u, v) if u < v else (v, u)
        return e in self._edges

    def adjacency_sets(self) -> list[set[int]]:
        return [set(nb) for nb in self._adj]

    def adjacency_masks(self) -> list[int]:
        out = []
        for nb in self._adj:
            mask = 0
            for w in nb:
                mask |= 1 << w
            out.append(mask)
        return out

    def vertices(self) -> range:
        return range(self.n)

    def edges_within(self, vs: Iterable[int]) -> int:
        """Number of edges of the subgraph induced by vs."""
        s = set(vs)
        return sum(1 for u in s for w in self._adj[u] if w > u and w in s)

    def induced_subgraph(self, vs: Iterable[int]) -> tuple["Graph", dict[int, int]]:
        """Induced subgraph on vs plus the old-id -> new-id mapping."""
        kept = sorted(set(vs))
        for v in kept:
            if not 0 <= v < self.n:
                raise InputError(f"vertex {v} out of range")
        remap = {v: i for i, v in enumerate(kept)}
        keptset = set(kept)
        edges = [
            (remap[u], remap[v])
            for u, v in self._edges
            if u in keptset and v in keptset
        ]
        return Graph(len(kept), edges), remap

    def complement(self) -> "Graph":
        edges = [
            (u, v)
            for u in range(self.n)
            for v in range(u + 1, self.n)
            if not self.has_edge(u, v)
        ]
        return Graph(self.n, edges)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self.n == other.n and self._edges == other._edges

    def __hash__(self) -> int:
        return hash((self.n, self._edges))

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.m})"


def path_graph(n: int) -> Graph:
    return Graph(n, [(i, i + 1) for i in range(n - 1)])


def cycle_graph(n: int) -> Graph:
    if n < 3:
        raise InputError("a cycle needs at least 3 vertices")
    return Graph(n, [(i, (i + 1) % n) for i in range(n)])


def complete_graph(n: int) -> Graph:
    return Graph(n, [(i, j) for i in range(n) for j in range(i + 1, n)])


def complete_bipartite_graph(a: int, b: int) -> Graph:
    return Graph(a + b, [(i, a + j) for i in range(a) for j in range(b)])


def star_graph(leaves: int) -> Graph:
    """Star with center 0 and the given number of leaves."""
    return Graph(leaves + 1, [(0, i + 1) for i in range(leaves)])


@dataclass(frozen=True)
class Instance:
    """A graph together with the terminal set that a solution tree must span."""

    graph: Graph
    terminals: tuple[int, ...]

    def __init__(self, graph: Graph, terminals: Iterable[int]):
        ts = sorted(terminals)
        if not ts:
            raise InputError("an instance needs at least one terminal")
        if len(set(ts)) != len(ts):
            raise InputError("duplicate terminal")
        for t in ts:
            if not 0 <= t < graph.n:
                raise InputError(f"terminal {t} out of range")
        object.__setattr__(self, "graph", graph)
        object.__setattr__(self, "terminals", tuple(ts))

    @property
    def k(self) -> int:
        return len(self.terminals)

    def induced(self, vs: Iterable[int]) -> tuple["Instance", dict[int, int]]:
        """Sub-instance on vs; all terminals must survive."""
        sub, remap = self.graph.induced_subgraph(vs)
        missing = [t for t in self.terminals if t not in remap]
        if missing:
            raise ContractError(f"terminals {missing} not in the kept vertex set")
        return Instance(sub, [remap[t] for t in self.terminals]), remap


@dataclass(frozen=True)
class SolveOutcome:
    """Decision answer plus an optional solution vertex set."""

    answer: bool
    witness: tuple[int, ...] | None = None

    def __bool__(self) -> bool:
        return self.answer


def connected_components(g: Graph) -> list[list[int]]:
    """Maximal connected vertex sets, each sorted, ordered by minimum vertex."""
    seen = [False] * g.n
    out: list[list[int]] = []
    for start in range(g.n):
        if seen[start]:
            continue
        comp = [start]
        seen[start] = True
        queue = deque([start])
        while queue:
            u = queue.popleft()
            for w in g.neighbors(u):
                if not seen[w]:
                    seen[w] = True
                    comp.append(w)
                    queue.append(w)
        out.append(sorted(comp))
    return out


def is_connected_within(g: Graph, vs: Iterable[int]) -> bool:
    s = set(vs)
    if not s:
        return False
    start = next(iter(s))
    seen = {start}
    queue = deque([start])
    while queue:
        u = queue.popleft()
        for w in g.neighbors(u):
            if w in s and w not in seen:
                seen.add(w)
                queue.append(w)
    return len(seen) == len(s)


def validate_solution(g: Graph, terminals: Iterable[int], s: Iterable[int]) -> bool:
    """True iff s spans the terminals and induces a tree of g."""
    tset = set(terminals)
    sset = set(s)
    for v in tset | sset:
        if not 0 <= v < g.n:
            raise InputError(f"vertex {v} out of range")
    if not sset or not tset <= sset:
        return False
    if g.edges_within(sset) != len(sset) - 1:
        return False
    return is_connected_within(g, sset)


def _decider_says_yes(result: object) -> bool:
    if isinstance(result, SolveOutcome):
        return result.answer
    return bool(result)


def extract_witness(inst: Instance, decider: Callable[[Instance], object]) -> frozenset[int]:
    """Shrink a YES instance to a solution set by repeated vertex deletion.

    Scans non-terminal vertices in increasing index order and permanently
    deletes any vertex whose removal keeps the decider at YES.  When no
    deletion is possible every remaining vertex is in every solution, so the
    survivors themselves induce a tree spanning the terminals.
    """
    if not _decider_says_yes(decider(inst)):
        raise ContractError("decider answers NO on the initial instance")
    alive = list(range(inst.graph.n))
    tset = set(inst.terminals)
    changed = True
    while changed:
        changed = False
        for v in list(alive):
            if v in tset:
                continue
            rest = [u for u in alive if u != v]
            sub, _ = inst.induced(rest)
            if _decider_says_yes(decider(sub)):
                alive = rest
                changed = True
    witness = frozenset(alive)
    if not validate_solution(inst.graph, inst.terminals, witness):
        raise ContractError("decider is inconsistent: surviving set is not a solution")
    return witness


def read_instance(data: bytes | str) -> Instance:
    """Parse the `.kit` text format; errors carry 1-based line numbers."""
    if isinstance(data, bytes):
        data = data.decode("ascii")
    n = m = k = -1
    edges: list[tuple[int, int]] = []
    seen_edges: set[tuple[int, int]] = set()
    terminals: list[int] = []
    for lineno, raw in enumerate(data.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        parts = line.split()
        if parts[0] == "p":
            if n >= 0:
                raise InputError(f"line {lineno}: duplicate header")
            if len(parts) != 5 or parts[1] != "kit":
                raise InputError(f"line {lineno}: malformed header, expected 'p kit <n> <m> <k>'")
            try:
                n, m, k = int(parts[2]), int(parts[3]), int(parts[4])
            except ValueError:
                raise InputError(f"line {lineno}: non-integer header field") from None
            if n < 0 or m < 0 or k < 1:
                raise InputError(f"line {lineno}: header requires n, m >= 0 and k >= 1")
        elif parts[0] == "e":
            if n < 0:
                raise InputError(f"line {lineno}: edge before header")
            if len(parts) != 3:
                raise InputError(f"line {lineno}: malformed edge line")
            try:
                u, v = int(parts[1]), int(parts[2])
            except ValueError:
                raise InputError(f"line {lineno}: non-integer edge endpoint") from None
            if u == v:
                raise InputError(f"line {lineno}: self-loop at vertex {u}")
            if not (1 <= u <= n and 1 <= v <= n):
                raise InputError(f"line {lineno}: edge endpoint out of range 1..{n}")
            e = (min(u, v) - 1, max(u, v) - 1)
            if e in seen_edges:
                raise InputError(f"line {lineno}: duplicate edge ({u}, {v})")
            seen_edges.add(e)
            edges.append(e)
        elif parts[0] == "t":
            if n < 0:
                raise InputError(f"line {lineno}: terminal before header")
            if len(parts) != 2:
                raise InputError(f"line {lineno}: malformed terminal line")
            try:
                t = int(parts[1])
            except ValueError:
                raise InputError(f"line {lineno}: non-integer terminal") from None
            if not 1 <= t <= n:
                raise InputError(f"line {lineno}: terminal {t} out of range 1..{n}")
            if t - 1 in terminals:
                raise InputError(f"line {lineno}: duplicate terminal {t}")
            terminals.append(t - 1)
        else:
            raise InputError(f"line {lineno}: unknown line type {parts[0]!r}")
    if n < 0:
        raise InputError("missing 'p kit' header")
    if len(edges) != m:
        raise InputError(f"header declares {m} edges but {len(edges)} given")
    if len(terminals) != k:
        raise InputError(f"header declares {k} terminals but {len(terminals)} given")
    return Instance(Graph(n, edges), terminals)


def write_instance(inst: Instance) -> bytes:
    """Serialize to the `.kit` format (1-based vertices, sorted lines)."""
    g = inst.graph
    lines = [f"p kit {g.n} {g.m} {inst.k}"]
    for u, v in g.edges:
        lines.append(f"e {u + 1} {v + 1}")
    for t in inst.terminals:
        lines.append(f"t {t + 1}")
    return ("\n".join(lines) + "\n").encode("ascii")
