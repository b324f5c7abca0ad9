"""Structural objects the solvers consume: feedback edge sets, tree
decompositions and their nice form, and cluster / co-cluster modulators."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .errors import ContractError, InputError
from .graph import Graph, connected_components

# ---------------------------------------------------------------------------
# feedback edge sets


@dataclass(frozen=True)
class FeedbackEdgeSet:
    """Non-tree edges of a DFS forest plus the forest and its degree classes."""

    edges: frozenset[tuple[int, int]]
    tree_adj: tuple[tuple[int, ...], ...]
    leaves: frozenset[int]
    degree_two: frozenset[int]
    branching: frozenset[int]

    @property
    def size(self) -> int:
        return len(self.edges)


def _classify(tree_adj: Sequence[Sequence[int]]) -> tuple[frozenset[int], frozenset[int], frozenset[int]]:
    leaves, d2, dstar = [], [], []
    for v, nb in enumerate(tree_adj):
        d = len(nb)
        if d <= 1:
            leaves.append(v)
        elif d == 2:
            d2.append(v)
        else:
            dstar.append(v)
    return frozenset(leaves), frozenset(d2), frozenset(dstar)


def feedback_edge_set_from(g: Graph, fes_edges: Iterable[tuple[int, int]]) -> FeedbackEdgeSet:
    """Package a known feedback edge set; validates that g minus it is a forest."""
    fes = frozenset((min(u, v), max(u, v)) for u, v in fes_edges)
    for e in fes:
        if not g.has_edge(*e):
            raise ContractError(f"edge {e} is not in the graph")
    tree_adj: list[list[int]] = [[] for _ in range(g.n)]
    tree_m = 0
    for u, v in g.edges:
        if (u, v) not in fes:
            tree_adj[u].append(v)
            tree_adj[v].append(u)
            tree_m += 1
    comps = len(connected_components(g))
    if tree_m != g.n - comps:
        raise ContractError("removing the edge set does not leave a spanning forest")
    leaves, d2, dstar = _classify(tree_adj)
    return FeedbackEdgeSet(fes, tuple(tuple(sorted(nb)) for nb in tree_adj), leaves, d2, dstar)


def feedback_edge_set(g: Graph) -> FeedbackEdgeSet:
    """Non-tree edges of a depth-first search forest rooted at vertex 0.

    Minimum by the cycle-space dimension m - n + c.
    """
    visited = [False] * g.n
    tree_edges: set[tuple[int, int]] = set()
    for root in range(g.n):
        if visited[root]:
            continue
        visited[root] = True
        stack = [(root, iter(g.neighbors(root)))]
        while stack:
            u, it = stack[-1]
            advanced = False
            for w in it:
                if not visited[w]:
                    visited[w] = True
                    tree_edges.add((min(u, w), max(u, w)))
                    stack.append((w, iter(g.neighbors(w))))
                    advanced = True
                    break
            if not advanced:
                stack.pop()
    fes = frozenset(e for e in g.edges if e not in tree_edges)
    return feedback_edge_set_from(g, fes)


# ---------------------------------------------------------------------------
# tree decompositions


@dataclass(frozen=True)
class TreeDecomposition:
    bags: tuple[frozenset[int], ...]
    tree_edges: tuple[tuple[int, int], ...]

    @property
    def width(self) -> int:
        return max((len(b) for b in self.bags), default=0) - 1

    def neighbors(self) -> list[list[int]]:
        adj: list[list[int]] = [[] for _ in self.bags]
        for i, j in self.tree_edges:
            adj[i].append(j)
            adj[j].append(i)
        return adj


def validate_td(g: Graph, td: TreeDecomposition) -> bool:
    """Check the three decomposition axioms plus tree-ness of the bag graph."""
    nb = len(td.bags)
    if nb == 0:
        return g.n == 0
    if len(td.tree_edges) != nb - 1:
        return False
    adj = td.neighbors()
    seen = [False] * nb
    queue = deque([0])
    seen[0] = True
    count = 1
    while queue:
        i = queue.popleft()
        for j in adj[i]:
            if not seen[j]:
                seen[j] = True
                count += 1
                queue.append(j)
    if count != nb:
        return False
    covered: set[int] = set()
    for b in td.bags:
        for v in b:
            if not 0 <= v < g.n:
                return False
        covered |= b
    if covered != set(range(g.n)):
        return False
    for u, v in g.edges:
        if not any(u in b and v in b for b in td.bags):
            return False
    for v in range(g.n):
        holding = [i for i, b in enumerate(td.bags) if v in b]
        reach = {holding[0]}
        queue = deque([holding[0]])
        while queue:
            i = queue.popleft()
            for j in adj[i]:
                if j in holding and j not in reach:
                    reach.add(j)
                    queue.append(j)
        if len(reach) != len(holding):
            return False
    return True


def build_tree_decomposition(g: Graph) -> TreeDecomposition:
    """Valid decomposition from the min-fill elimination-order heuristic."""
    if g.n == 0:
        return TreeDecomposition((frozenset(),), ())
    work = g.adjacency_sets()
    alive = set(range(g.n))
    position = [0] * g.n
    bags: list[frozenset[int]] = []
    elim: list[int] = []
    for step in range(g.n):
        best_v, best_fill = -1, None
        for v in sorted(alive):
            nbs = work[v]
            fill = 0
            nblist = sorted(nbs)
            for i, a in enumerate(nblist):
                for b in nblist[i + 1:]:
                    if b not in work[a]:
                        fill += 1
            if best_fill is None or fill < best_fill:
                best_v, best_fill = v, fill
        v = best_v
        nbs = sorted(work[v])
        bags.append(frozenset([v] + nbs))
        position[v] = step
        elim.append(v)
        for i, a in enumerate(nbs):
            for b in nbs[i + 1:]:
                work[a].add(b)
                work[b].add(a)
        for a in nbs:
            work[a].discard(v)
        alive.remove(v)
    edges = []
    for i, v in enumerate(elim):
        rest = [u for u in bags[i] if u != v]
        if rest:
            parent = min(position[u] for u in rest)
            edges.append((i, parent))
        elif i + 1 < len(bags):
            edges.append((i, i + 1))
    return TreeDecomposition(tuple(bags), tuple(edges))


def read_td(data: bytes | str) -> TreeDecomposition:
    """Parse the PACE `.td` format (1-based vertices and bag ids)."""
    if isinstance(data, bytes):
        data = data.decode("ascii")
    count = width_plus = n = -1
    bags: dict[int, frozenset[int]] = {}
    edges: list[tuple[int, int]] = []
    for lineno, raw in enumerate(data.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        parts = line.split()
        if parts[0] == "s":
            if count >= 0:
                raise InputError(f"line {lineno}: duplicate header")
            if len(parts) != 5 or parts[1] != "td":
                raise InputError(f"line {lineno}: malformed header, expected 's td <#bags> <width+1> <n>'")
            count, width_plus, n = int(parts[2]), int(parts[3]), int(parts[4])
        elif parts[0] == "b":
            if count < 0:
                raise InputError(f"line {lineno}: bag before header")
            bid = int(parts[1])
            if not 1 <= bid <= count:
                raise InputError(f"line {lineno}: bag id {bid} out of range")
            if bid in bags:
                raise InputError(f"line {lineno}: duplicate bag {bid}")
            content = [int(x) for x in parts[2:]]
            for v in content:
                if not 1 <= v <= n:
                    raise InputError(f"line {lineno}: vertex {v} out of range")
            bags[bid] = frozenset(v - 1 for v in content)
        else:
            if count < 0:
                raise InputError(f"line {lineno}: edge before header")
            if len(parts) != 2:
                raise InputError(f"line {lineno}: malformed tree edge")
            i, j = int(parts[0]), int(parts[1])
            if not (1 <= i <= count and 1 <= j <= count):
                raise InputError(f"line {lineno}: tree edge endpoint out of range")
            edges.append((i - 1, j - 1))
    if count < 0:
        raise InputError("missing 's td' header")
    if len(bags) != count:
        raise InputError(f"header declares {count} bags but {len(bags)} given")
    ordered = tuple(bags[i + 1] for i in range(count))
    td = TreeDecomposition(ordered, tuple(edges))
    if width_plus >= 0 and td.width + 1 > width_plus:
        raise InputError("bags exceed the declared width")
    return td


def write_td(td: TreeDecomposition, n: int) -> bytes:
    lines = [f"s td {len(td.bags)} {td.width + 1} {n}"]
    for i, b in enumerate(td.bags, start=1):
        lines.append("b " + " ".join([str(i)] + [str(v + 1) for v in sorted(b)]))
    for i, j in td.tree_edges:
        lines.append(f"{i + 1} {j + 1}")
    return ("\n".join(lines) + "\n").encode("ascii")


# ---------------------------------------------------------------------------
# nice decompositions

LEAF = "leaf"
INTRODUCE = "introduce"
FORGET = "forget"
JOIN = "join"
ROOT = "root"


@dataclass(frozen=True)
class NiceNode:
    kind: str
    bag: frozenset[int]
    vertex: int | None = None
    children: tuple[int, ...] = ()


@dataclass(frozen=True)
class NiceDecomposition:
    nodes: tuple[NiceNode, ...]
    root: int
    terminal: int

    @property
    def width(self) -> int:
        return max(len(nd.bag) for nd in self.nodes) - 1

    def postorder(self) -> list[int]:
        order: list[int] = []
        stack: list[tuple[int, bool]] = [(self.root, False)]
        while stack:
            node, expanded = stack.pop()
            if expanded:
                order.append(node)
            else:
                stack.append((node, True))
                for c in self.nodes[node].children:
                    stack.append((c, False))
        return order


class _NiceBuilder:
    def __init__(self) -> None:
        self.nodes: list[NiceNode] = []

    def add(self, kind: str, bag: frozenset[int], vertex: int | None = None,
            children: tuple[int, ...] = ()) -> int:
        self.nodes.append(NiceNode(kind, bag, vertex, children))
        return len(self.nodes) - 1

    def chain(self, below: int, source: frozenset[int], target: frozenset[int]) -> int:
        """Forget source-only vertices (ascending), then introduce target-only
        vertices (descending), returning the node whose bag is target."""
        node = below
        bag = source
        for v in sorted(source - target):
            bag = bag - {v}
            node = self.add(FORGET, bag, v, (node,))
        for v in sorted(target - source, reverse=True):
            bag = bag | {v}
            node = self.add(INTRODUCE, bag, v, (node,))
        return node

    def leaf_chain(self, bag: frozenset[int]) -> int:
        node = self.add(LEAF, frozenset())
        return self.chain(node, frozenset(), bag)


def make_nice(td: TreeDecomposition, g: Graph, r: int) -> NiceDecomposition:
    """Standard nice-form transformation rooted so that r is forgotten last."""
    if not validate_td(g, td):
        raise ContractError("invalid tree decomposition")
    if not 0 <= r < g.n:
        raise ContractError(f"vertex {r} out of range")
    root_bag = next(i for i, b in enumerate(td.bags) if r in b)
    adj = td.neighbors()
    b = _NiceBuilder()

    parent = [-2] * len(td.bags)
    order: list[int] = []
    parent[root_bag] = -1
    queue = deque([root_bag])
    while queue:
        i = queue.popleft()
        order.append(i)
        for j in adj[i]:
            if parent[j] == -2:
                parent[j] = i
                queue.append(j)

    built: dict[int, int] = {}
    for i in reversed(order):
        bag = td.bags[i]
        kids = [j for j in adj[i] if parent[j] == i]
        tops = [b.chain(built[j], td.bags[j], bag) for j in kids]
        if not tops:
            built[i] = b.leaf_chain(bag)
            continue
        while len(tops) > 1:
            merged = []
            for a in range(0, len(tops) - 1, 2):
                merged.append(b.add(JOIN, bag, None, (tops[a], tops[a + 1])))
            if len(tops) % 2:
                merged.append(tops[-1])
            tops = merged
        built[i] = tops[0]

    top = built[root_bag]
    bag = td.bags[root_bag]
    for v in sorted(bag - {r}):
        bag = bag - {v}
        top = b.add(FORGET, bag, v, (top,))
    top = b.add(FORGET, frozenset(), r, (top,))
    root = b.add(ROOT, frozenset(), None, (top,))
    return NiceDecomposition(tuple(b.nodes), root, r)


def validate_nice(g: Graph, nd: NiceDecomposition) -> bool:
    """Local type constraints at every node plus the decomposition axioms."""
    nodes = nd.nodes
    root = nodes[nd.root]
    if root.kind != ROOT or root.bag or len(root.children) != 1:
        return False
    top = nodes[root.children[0]]
    if top.kind != FORGET or top.vertex != nd.terminal or top.bag:
        return False
    for i, nd_node in enumerate(nodes):
        kind = nd_node.kind
        if kind == LEAF:
            if nd_node.bag or nd_node.children:
                return False
        elif kind == INTRODUCE:
            if len(nd_node.children) != 1:
                return False
            child = nodes[nd_node.children[0]]
            if nd_node.vertex is None or nd_node.bag != child.bag | {nd_node.vertex}:
                return False
            if nd_node.vertex in child.bag:
                return False
        elif kind == FORGET:
            if len(nd_node.children) != 1:
                return False
            child = nodes[nd_node.children[0]]
            if nd_node.vertex is None or nd_node.bag != child.bag - {nd_node.vertex}:
                return False
            if nd_node.vertex not in child.bag:
                return False
        elif kind == JOIN:
            if len(nd_node.children) != 2:
                return False
            if any(nodes[c].bag != nd_node.bag for c in nd_node.children):
                return False
        elif kind == ROOT:
            if i != nd.root:
                return False
        else:
            return False
    bags = tuple(nd_node.bag for nd_node in nodes)
    edges = []
    for i, nd_node in enumerate(nodes):
        for c in nd_node.children:
            edges.append((i, c))
    return validate_td(g, TreeDecomposition(bags, tuple(edges)))


# ---------------------------------------------------------------------------
# cluster and co-cluster modulators


def first_induced_p3(g: Graph, removed: set[int]) -> tuple[int, int, int] | None:
    """Lexicographically first (mid, a, c) induced path a-mid-c, as (a, mid, c)."""
    for mid in range(g.n):
        if mid in removed:
            continue
        nbs = [w for w in g.neighbors(mid) if w not in removed]
        for i, a in enumerate(nbs):
            for c in nbs[i + 1:]:
                if not g.has_edge(a, c):
                    return (a, mid, c)
    return None


def is_cluster(g: Graph, removed: Iterable[int] = ()) -> bool:
    return first_induced_p3(g, set(removed)) is None


def cluster_modulator(g: Graph, budget: int) -> tuple[int, ...] | None:
    """A set U with |U| <= budget and g - U a disjoint union of cliques, or None.

    Branches three ways on the first induced path on three vertices.
    """
    if budget < 0:
        raise ContractError("budget must be non-negative")

    def search(removed: set[int], left: int) -> tuple[int, ...] | None:
        p3 = first_induced_p3(g, removed)
        if p3 is None:
            return tuple(sorted(removed))
        if left == 0:
            return None
        for v in p3:
            removed.add(v)
            found = search(removed, left - 1)
            removed.discard(v)
            if found is not None:
                return found
        return None

    return search(set(), budget)


def cocluster_modulator(g: Graph, budget: int) -> tuple[int, ...] | None:
    return cluster_modulator(g.complement(), budget)


def maximal_cliques_of_cluster(g: Graph, modulator: Iterable[int]) -> list[list[int]]:
    """Connected components of g minus the modulator, each verified complete."""
    mod = set(modulator)
    rest = [v for v in range(g.n) if v not in mod]
    sub, remap = g.induced_subgraph(rest)
    inverse = {i: v for v, i in remap.items()}
    cliques = []
    for comp in connected_components(sub):
        size = len(comp)
        if sub.edges_within(comp) != size * (size - 1) // 2:
            raise ContractError("graph minus modulator is not a cluster graph")
        cliques.append(sorted(inverse[i] for i in comp))
    return cliques
