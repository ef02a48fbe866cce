"""Technology trees, specialists and the network matrices built on them."""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

from .errors import InternalError, MalformedInput, PreconditionError
from .market import Market, indicator

IntMatrix = list


@dataclass(frozen=True)
class TechnologyTree:
    """Rooted tree whose vertices carry nested worker sets.

    ``vertices[v]`` is the indicator of the workers technology ``v`` needs and
    ``edges`` are ``(parent, child)`` pairs pointing away from the root.
    """

    n_workers: int
    vertices: tuple[tuple[int, ...], ...]
    edges: tuple[tuple[int, int], ...]
    vertex_names: tuple[str, ...] = ()
    root: int = field(init=False)
    parent: tuple[Optional[int], ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        nv = len(self.vertices)
        if nv == 0:
            raise MalformedInput("a technology tree needs a root")
        vertices = tuple(tuple(int(x) for x in v) for v in self.vertices)
        if any(len(v) != self.n_workers for v in vertices):
            raise MalformedInput("vertex worker sets must have length n_workers")
        edges = tuple((int(a), int(b)) for a, b in self.edges)
        if len(edges) != nv - 1:
            raise MalformedInput("a tree on k vertices has k-1 edges")
        parent: list[Optional[int]] = [None] * nv
        for a, b in edges:
            if not (0 <= a < nv and 0 <= b < nv) or a == b:
                raise MalformedInput(f"bad edge {(a, b)}")
            if parent[b] is not None:
                raise MalformedInput(f"vertex {b} has two parents")
            parent[b] = a
        roots = [v for v in range(nv) if parent[v] is None]
        if len(roots) != 1:
            raise MalformedInput("a tree must have exactly one vertex without parent")
        root = roots[0]
        for v in range(nv):
            seen = set()
            u: Optional[int] = v
            while u is not None:
                if u in seen:
                    raise MalformedInput("edges contain a cycle")
                seen.add(u)
                u = parent[u]
        if any(vertices[root]):
            raise MalformedInput("the root must require no workers")
        for a, b in edges:
            lo, hi = vertices[a], vertices[b]
            if not all(x <= y for x, y in zip(lo, hi)) or lo == hi:
                raise MalformedInput(f"edge {(a, b)} does not strictly enlarge the worker set")
        names = self.vertex_names or tuple(f"v{i}" for i in range(nv))
        if len(names) != nv:
            raise MalformedInput("vertex_names does not match the vertex count")
        object.__setattr__(self, "vertices", vertices)
        object.__setattr__(self, "edges", edges)
        object.__setattr__(self, "vertex_names", tuple(names))
        object.__setattr__(self, "root", root)
        object.__setattr__(self, "parent", tuple(parent))

    @classmethod
    def build(
        cls, n: int, vertices: Sequence[Iterable[int]], edges: Sequence[tuple[int, int]]
    ) -> "TechnologyTree":
        return cls(n, tuple(indicator(v, n) for v in vertices), tuple(edges))

    def edge_workers(self, e: int) -> tuple[int, ...]:
        """Indicator of the workers engaging in the upgrade along edge ``e``."""
        a, b = self.edges[e]
        return tuple(y - x for x, y in zip(self.vertices[a], self.vertices[b]))

    def edge_name(self, e: int) -> str:
        a, b = self.edges[e]
        return self.vertex_names[a] + self.vertex_names[b]

    def _edge_into(self) -> dict[int, int]:
        return {b: i for i, (_, b) in enumerate(self.edges)}

    def _ancestors(self, v: int) -> list[int]:
        out = [v]
        while self.parent[out[-1]] is not None:
            out.append(self.parent[out[-1]])  # type: ignore[arg-type]
        return out

    def path(self, v: int, target: int) -> list[tuple[int, int]]:
        """Tree edges on the ``v``-``target`` path with +1 (forward) or -1."""
        into = self._edge_into()
        up = self._ancestors(v)
        down = self._ancestors(target)
        common = next(x for x in up if x in set(down))
        steps = [(into[x], -1) for x in up[: up.index(common)]]
        steps += [(into[x], +1) for x in reversed(down[: down.index(common)])]
        return steps

    def engagements(self, w: int) -> list[int]:
        return [e for e in range(len(self.edges)) if self.edge_workers(e)[w]]


def is_specialist(tree: TechnologyTree, w: int) -> bool:
    return len(tree.engagements(w)) == 1


def all_specialists(tree: TechnologyTree) -> bool:
    return all(is_specialist(tree, w) for w in range(tree.n_workers))


def non_specialists(tree: TechnologyTree) -> list[int]:
    return [w for w in range(tree.n_workers) if not is_specialist(tree, w)]


def is_unit_demand_over_tree(market: Market, tree: TechnologyTree) -> bool:
    if market.n_workers != tree.n_workers:
        return False
    on_tree = set(tree.vertices)
    return all(s in on_tree for p in market.firm_prefs for s in p.acceptable)


def complete_graph_edges(tree: TechnologyTree, orientation_seed: Optional[int] = None) -> list[tuple[int, int]]:
    """Edges of the complete graph on the tree's vertices, ``(i, j)`` with
    ``i < j`` in lexicographic order; a seed flips orientations at random."""
    pairs = list(itertools.combinations(range(len(tree.vertices)), 2))
    if orientation_seed is None:
        return pairs
    rng = random.Random(orientation_seed)
    return [(j, i) if rng.random() < 0.5 else (i, j) for i, j in pairs]


@dataclass(frozen=True)
class NetworkMatrices:
    h: IntMatrix  # rows: tree edges
    h_workers: IntMatrix  # rows: workers
    graph_edges: tuple[tuple[int, int], ...]


def network_matrices(tree: TechnologyTree, orientation_seed: Optional[int] = None) -> NetworkMatrices:
    """Path incidence matrix ``H`` of the tree against the complete graph, and
    its worker-indexed row expansion ``H'``.

    ``H'`` repeats the row of each edge once per worker engaging in it, which
    needs every worker to be a specialist.
    """
    g_edges = complete_graph_edges(tree, orientation_seed)
    h = tree_edge_matrix(tree, orientation_seed)
    if not all_specialists(tree):
        raise PreconditionError(
            "worker-indexed matrix needs every worker to be a specialist; "
            f"offenders: {non_specialists(tree)}"
        )
    h_workers = [list(h[tree.engagements(w)[0]]) for w in range(tree.n_workers)]
    return NetworkMatrices(h, h_workers, tuple(g_edges))


def tree_edge_matrix(tree: TechnologyTree, orientation_seed: Optional[int] = None) -> IntMatrix:
    """``H`` alone; unlike :func:`network_matrices` it has no specialist precondition."""
    g_edges = complete_graph_edges(tree, orientation_seed)
    h = [[0] * len(g_edges) for _ in tree.edges]
    for j, (v, target) in enumerate(g_edges):
        for e, sign in tree.path(v, target):
            h[e][j] = sign
    return h


@dataclass(frozen=True)
class ColumnMatch:
    vector: tuple[int, ...]
    column: int  # 0-based column of H'
    sign: int


@dataclass(frozen=True)
class Certificate:
    matches: tuple[tuple[ColumnMatch, ...], ...]  # per firm
    demand_type_tu: bool
    matrices: NetworkMatrices

    @property
    def ok(self) -> bool:
        return self.demand_type_tu


def match_columns(vectors: Iterable[Sequence[int]], h_workers: IntMatrix) -> list[ColumnMatch]:
    ncols = len(h_workers[0]) if h_workers else 0
    cols = [tuple(row[j] for row in h_workers) for j in range(ncols)]
    out = []
    for d in vectors:
        d = tuple(d)
        neg = tuple(-x for x in d)
        for j, c in enumerate(cols):
            if c == d:
                out.append(ColumnMatch(d, j, 1))
                break
            if c == neg:
                out.append(ColumnMatch(d, j, -1))
                break
        else:
            raise InternalError(f"demand vector {d} is not a signed column of H'")
    return out


def certify_specialist_market(market: Market, tree: TechnologyTree, orientation_seed: Optional[int] = None) -> Certificate:
    """Certify that a unit-demand market over a specialist tree has a totally
    unimodular demand type: every demand vector is a signed column of the
    network matrix ``H'``."""
    from .demand import firm_demand_types, is_totally_unimodular, market_demand_type

    if not is_unit_demand_over_tree(market, tree):
        raise PreconditionError("some acceptable set is not a vertex of the tree")
    if not all_specialists(tree):
        raise PreconditionError(f"not a specialist: {non_specialists(tree)}")
    mats = network_matrices(tree, orientation_seed)
    matches = tuple(tuple(match_columns(dt, mats.h_workers)) for dt in firm_demand_types(market))
    verdict = is_totally_unimodular(market_demand_type(market).matrix())
    if not verdict:
        raise InternalError(f"demand type of a certified market is not TU: {verdict.witness}")
    return Certificate(matches, True, mats)


def random_specialist_tree(rng: random.Random, max_vertices: int = 6, max_workers: int = 6) -> TechnologyTree:
    """Random tree rooted at ``v0`` from a Prüfer sequence; every edge gets a
    disjoint nonempty batch of fresh workers, so all workers are specialists."""
    nv = rng.randint(2, max_vertices)
    nv = min(nv, max_workers + 1)
    if nv == 2:
        tree_edges = [(0, 1)]
    else:
        seq = [rng.randrange(nv) for _ in range(nv - 2)]
        tree_edges = _pruefer_decode(seq, nv)
    adj: dict[int, list[int]] = {v: [] for v in range(nv)}
    for a, b in tree_edges:
        adj[a].append(b)
        adj[b].append(a)
    order = [0]
    parent = {0: None}
    for v in order:
        for u in sorted(adj[v]):
            if u not in parent:
                parent[u] = v
                order.append(u)
    directed = sorted((parent[v], v) for v in order[1:])  # type: ignore[misc]
    n_workers = rng.randint(nv - 1, max(nv - 1, max_workers))
    batch = [1] * (nv - 1)
    for _ in range(n_workers - (nv - 1)):
        batch[rng.randrange(nv - 1)] += 1
    workers = list(range(n_workers))
    rng.shuffle(workers)
    sets: dict[int, set] = {0: set()}
    pos = 0
    fresh = {}
    for i, (a, b) in enumerate(directed):
        fresh[b] = set(workers[pos: pos + batch[i]])
        pos += batch[i]
    for v in order[1:]:
        sets[v] = sets[parent[v]] | fresh[v]  # type: ignore[index]
    return TechnologyTree.build(n_workers, [sets[v] for v in range(nv)], directed)


def _pruefer_decode(seq: list[int], nv: int) -> list[tuple[int, int]]:
    degree = [1] * nv
    for x in seq:
        degree[x] += 1
    edges = []
    for x in seq:
        leaf = min(v for v in range(nv) if degree[v] == 1)
        edges.append((leaf, x))
        degree[leaf] -= 1
        degree[x] -= 1
    u, v = [i for i in range(nv) if degree[i] == 1]
    edges.append((u, v))
    return edges


def random_unit_demand_market(
    rng: random.Random, tree: TechnologyTree, max_firms: int = 3
) -> Market:
    """Random firms ranking random non-root vertices; random worker orders."""
    m = rng.randint(1, max_firms)
    techs = [v for v in range(len(tree.vertices)) if v != tree.root]
    firm_prefs = []
    for _ in range(m):
        k = rng.randint(0, len(techs))
        chosen = rng.sample(techs, k)
        firm_prefs.append([set(i for i, x in enumerate(tree.vertices[v]) if x) for v in chosen])
    worker_prefs = []
    for _ in range(tree.n_workers):
        k = rng.randint(0, m)
        worker_prefs.append(rng.sample(range(m), k))
    return Market.build(tree.n_workers, firm_prefs, worker_prefs)
