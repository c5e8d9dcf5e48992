"""Sparse graph representation, construction, and edge-list serialization.

Graphs are immutable after construction. Undirected edges are stored once in
canonical (min, max) order; adjacency views are built lazily and cached.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "Graph",
    "BuildReport",
    "EdgeListError",
    "build_graph",
    "largest_component",
    "read_edge_list",
    "write_edge_list",
]


class EdgeListError(ValueError):
    """Malformed edge-list input (negative ids, non-integer tokens)."""


@dataclass(frozen=True)
class BuildReport:
    self_loops_removed: int
    duplicates_removed: int


@dataclass(eq=False)
class Graph:
    """A simple graph: no self-loops, no duplicate edges.

    `edges` holds each edge once: canonical (min, max) pairs for undirected
    graphs, (source, target) pairs for directed ones. Node ids are
    0..node_count-1; isolated nodes are allowed.
    """

    node_count: int
    edges: np.ndarray  # int64[E, 2]
    directed: bool = False
    build_report: BuildReport = field(default=BuildReport(0, 0))
    meta: dict = field(default_factory=dict, repr=False)
    _csr_cache: dict = field(default_factory=dict, repr=False)

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    def degrees(self) -> np.ndarray:
        """Per-node degree; for directed graphs, in-degree + out-degree."""
        d = np.bincount(self.edges[:, 0], minlength=self.node_count)
        d += np.bincount(self.edges[:, 1], minlength=self.node_count)
        return d

    def out_degrees(self) -> np.ndarray:
        if not self.directed:
            return self.degrees()
        return np.bincount(self.edges[:, 0], minlength=self.node_count)

    def in_degrees(self) -> np.ndarray:
        if not self.directed:
            return self.degrees()
        return np.bincount(self.edges[:, 1], minlength=self.node_count)

    def arcs(self) -> tuple[np.ndarray, np.ndarray]:
        """All directed arcs (src, dst): both orientations when undirected."""
        if self.directed:
            return self.edges[:, 0].copy(), self.edges[:, 1].copy()
        src = np.concatenate([self.edges[:, 0], self.edges[:, 1]])
        dst = np.concatenate([self.edges[:, 1], self.edges[:, 0]])
        return src, dst

    def _csr(self, which: str):
        """CSR over arcs: 'out' groups by src, 'in' groups by dst."""
        if which not in self._csr_cache:
            src, dst = self.arcs()
            if which == "out":
                order = np.lexsort((dst, src))
                key = src[order]
            else:
                order = np.lexsort((src, dst))
                key = dst[order]
            ptr = np.zeros(self.node_count + 1, dtype=np.int64)
            np.add.at(ptr, key + 1, 1)
            np.cumsum(ptr, out=ptr)
            self._csr_cache[which] = (ptr, src[order], dst[order])
        return self._csr_cache[which]

    def out_csr(self):
        return self._csr("out")

    def in_csr(self):
        return self._csr("in")

    def neighbors(self, i: int) -> np.ndarray:
        """Out-neighbors of node i (all neighbors when undirected)."""
        ptr, _, dst = self.out_csr()
        return dst[ptr[i]:ptr[i + 1]]


def _clean_edges(edges: np.ndarray, directed: bool):
    keep = edges[:, 0] != edges[:, 1]
    loops = int(len(edges) - keep.sum())
    edges = edges[keep]
    if not directed:
        edges = np.sort(edges, axis=1)
    uniq = np.unique(edges, axis=0) if len(edges) else edges
    dups = int(len(edges) - len(uniq))
    return uniq, loops, dups


def build_graph(edges, directed: bool = False,
                node_count: int | None = None) -> Graph:
    """Build a simple Graph from an edge list.

    Self-loops and duplicates are removed and counted in the result's
    build_report. `node_count` may exceed the largest referenced id to
    declare trailing isolated nodes.
    """
    edges = np.asarray(edges, dtype=np.int64)
    if edges.size == 0:
        raise EdgeListError("edge list is empty")
    edges = edges.reshape(-1, 2)
    if edges.min() < 0:
        bad = int(np.argmax((edges < 0).any(axis=1)))
        raise EdgeListError(f"negative node id in edge line {bad}")
    n = int(edges.max()) + 1
    if node_count is not None:
        if node_count < n:
            raise EdgeListError("node_count smaller than largest node id + 1")
        n = node_count
    uniq, loops, dups = _clean_edges(edges, directed)
    if len(uniq) == 0:
        raise EdgeListError("edge list has no usable edges")
    return Graph(node_count=n, edges=uniq, directed=directed,
                 build_report=BuildReport(loops, dups))


def _undirected_components(g: Graph) -> np.ndarray:
    """Component label per node via frontier BFS on the symmetric CSR."""
    ptr, _, dst = g._csr("out") if not g.directed else _symmetric_csr(g)
    label = np.full(g.node_count, -1, dtype=np.int64)
    comp = 0
    for seed in range(g.node_count):
        if label[seed] >= 0:
            continue
        label[seed] = comp
        frontier = np.array([seed], dtype=np.int64)
        while frontier.size:
            starts, ends = ptr[frontier], ptr[frontier + 1]
            total = int((ends - starts).sum())
            if total == 0:
                break
            nxt = np.empty(total, dtype=np.int64)
            pos = 0
            for s, e in zip(starts, ends):
                nxt[pos:pos + e - s] = dst[s:e]
                pos += e - s
            nxt = nxt[label[nxt] < 0]
            if nxt.size == 0:
                break
            nxt = np.unique(nxt)
            label[nxt] = comp
            frontier = nxt
        comp += 1
    return label


def _symmetric_csr(g: Graph):
    src = np.concatenate([g.edges[:, 0], g.edges[:, 1]])
    dst = np.concatenate([g.edges[:, 1], g.edges[:, 0]])
    order = np.lexsort((dst, src))
    ptr = np.zeros(g.node_count + 1, dtype=np.int64)
    np.add.at(ptr, src[order] + 1, 1)
    np.cumsum(ptr, out=ptr)
    return ptr, src[order], dst[order]


def _scc_labels(g: Graph) -> np.ndarray:
    """Strongly connected component label per node (iterative Tarjan)."""
    n = g.node_count
    ptr, _, dst = g.out_csr()
    index = np.full(n, -1, dtype=np.int64)
    low = np.zeros(n, dtype=np.int64)
    on_stack = np.zeros(n, dtype=bool)
    label = np.full(n, -1, dtype=np.int64)
    stack: list[int] = []
    counter = 0
    ncomp = 0
    for root in range(n):
        if index[root] >= 0:
            continue
        work = [(root, ptr[root])]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack[root] = True
        while work:
            v, ei = work[-1]
            if ei < ptr[v + 1]:
                work[-1] = (v, ei + 1)
                w = int(dst[ei])
                if index[w] < 0:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack[w] = True
                    work.append((w, ptr[w]))
                elif on_stack[w]:
                    low[v] = min(low[v], index[w])
            else:
                work.pop()
                if work:
                    pv = work[-1][0]
                    low[pv] = min(low[pv], low[v])
                if low[v] == index[v]:
                    while True:
                        w = stack.pop()
                        on_stack[w] = False
                        label[w] = ncomp
                        if w == v:
                            break
                    ncomp += 1
    return label


def largest_component(g: Graph) -> tuple[Graph, np.ndarray]:
    """Induced subgraph on the largest (strongly) connected component.

    Ties are broken toward the component containing the smallest original
    node id. Returns (subgraph, mapping) where mapping[old_id] is the new id
    or -1 for dropped nodes; new ids preserve original order.
    """
    label = _scc_labels(g) if g.directed else _undirected_components(g)
    sizes = np.bincount(label)
    best_size = sizes.max()
    # smallest original id whose component has the max size
    winner = label[int(np.argmax(sizes[label] == best_size))]
    keep = label == winner
    mapping = np.full(g.node_count, -1, dtype=np.int64)
    mapping[keep] = np.arange(int(keep.sum()))
    sel = keep[g.edges[:, 0]] & keep[g.edges[:, 1]]
    sub_edges = mapping[g.edges[sel]]
    if len(sub_edges) == 0:
        # single-node component: valid, but Graph requires >= 1 edge rows
        sub = Graph(node_count=1, edges=np.empty((0, 2), dtype=np.int64),
                    directed=g.directed)
        return sub, mapping
    sub = build_graph(sub_edges, directed=g.directed,
                      node_count=int(keep.sum()))
    return sub, mapping


def read_edge_list(path) -> tuple[np.ndarray, int | None]:
    """Read "source target" lines; '#' lines are comments.

    A "# nodes N" comment declares the node count (for isolated nodes).
    Returns (edges, declared_node_count_or_None).
    """
    edges = []
    node_count = None
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.strip()
            if not line:
                continue
            if line.startswith("#"):
                body = line[1:].strip()
                if body.startswith("nodes"):
                    try:
                        node_count = int(body.split()[1])
                    except (IndexError, ValueError):
                        raise EdgeListError(
                            f"{path}:{lineno}: malformed nodes header")
                continue
            parts = line.replace(",", " ").split()
            if len(parts) != 2:
                raise EdgeListError(
                    f"{path}:{lineno}: expected two node ids, got {line!r}")
            try:
                u, v = int(parts[0]), int(parts[1])
            except ValueError:
                raise EdgeListError(
                    f"{path}:{lineno}: non-integer token in {line!r}")
            if u < 0 or v < 0:
                raise EdgeListError(f"{path}:{lineno}: negative node id")
            edges.append((u, v))
    if not edges:
        raise EdgeListError(f"{path}: no edges found")
    return np.asarray(edges, dtype=np.int64), node_count


def write_edge_list(g: Graph, path) -> None:
    """Write the graph in the text format read_edge_list accepts."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(f"# nodes {g.node_count}\n")
        fh.write(f"# directed {int(g.directed)}\n")
        for u, v in g.edges:
            fh.write(f"{u} {v}\n")


def load_graph(path) -> Graph:
    """Read an edge-list file written by write_edge_list (or compatible)."""
    edges, node_count = read_edge_list(path)
    directed = False
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            if line.startswith("# directed"):
                directed = bool(int(line.split()[-1]))
                break
            if not line.startswith("#"):
                break
    return build_graph(edges, directed=directed, node_count=node_count)


__all__.append("load_graph")
