"""Quivers, paths and the reachability structure behind directed stratifications.

Paths compose right to left: ``eps2*eps1`` travels ``eps1`` first. An arrow
``a: i -> j`` therefore satisfies ``a = e_j a e_i``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Sequence

import networkx as nx

from stratakit.errors import DimensionMismatch


@dataclass(frozen=True)
class Arrow:
    label: str
    source: str
    target: str


@dataclass(frozen=True)
class Quiver:
    vertices: tuple[str, ...]
    arrows: tuple[Arrow, ...] = ()

    def __post_init__(self) -> None:
        if len(set(self.vertices)) != len(self.vertices):
            raise DimensionMismatch("vertex labels must be unique")
        labels = [a.label for a in self.arrows]
        if len(set(labels)) != len(labels):
            raise DimensionMismatch("arrow labels must be unique")
        declared = set(self.vertices)
        for arrow in self.arrows:
            if arrow.source not in declared or arrow.target not in declared:
                raise DimensionMismatch(f"arrow {arrow.label} has an undeclared endpoint")

    @classmethod
    def build(cls, vertices: Iterable[str], arrows: Iterable[tuple[str, str, str]] = ()) -> "Quiver":
        return cls(tuple(vertices), tuple(Arrow(*a) for a in arrows))

    def vertex_index(self, vertex: str) -> int:
        return self.vertices.index(vertex)

    def arrow(self, label: str) -> Arrow:
        for a in self.arrows:
            if a.label == label:
                return a
        raise KeyError(label)

    def arrows_from(self, vertex: str) -> list[Arrow]:
        return [a for a in self.arrows if a.source == vertex]

    def opposite(self) -> "Quiver":
        return Quiver(self.vertices, tuple(Arrow(a.label, a.target, a.source) for a in self.arrows))

    def digraph(self) -> nx.DiGraph:
        graph = nx.DiGraph()
        graph.add_nodes_from(self.vertices)
        graph.add_edges_from((a.source, a.target) for a in self.arrows)
        return graph

    def has_path(self, source: str, target: str) -> bool:
        """True when a path of length >= 0 leads from ``source`` to ``target``."""
        return nx.has_path(self.digraph(), source, target)

    def is_isomorphic(self, other: "Quiver") -> bool:
        def multigraph(q: Quiver) -> nx.MultiDiGraph:
            g = nx.MultiDiGraph()
            g.add_nodes_from(q.vertices)
            g.add_edges_from((a.source, a.target) for a in q.arrows)
            return g

        return nx.is_isomorphic(multigraph(self), multigraph(other))


@dataclass(frozen=True)
class Path:
    source: str
    target: str
    arrows: tuple[str, ...] = ()

    @property
    def length(self) -> int:
        return len(self.arrows)

    @property
    def is_trivial(self) -> bool:
        return not self.arrows

    def after(self, other: "Path") -> "Path | None":
        """The composite ``self * other`` (``other`` first), or None if not composable."""
        if other.target != self.source:
            return None
        return Path(other.source, self.target, other.arrows + self.arrows)

    def sort_key(self, quiver: Quiver) -> tuple:
        return (self.length, self.arrows, quiver.vertex_index(self.source))

    def __str__(self) -> str:
        if self.is_trivial:
            return f"e_{self.source}"
        return "*".join(reversed(self.arrows))


def trivial_path(vertex: str) -> Path:
    return Path(vertex, vertex)


def path_from_word(quiver: Quiver, word: Sequence[str]) -> Path:
    """Path for a right-to-left product of arrow labels, e.g. ``["eps2", "eps1"]``."""
    if not word:
        raise DimensionMismatch("empty arrow word")
    travel = list(reversed(word))
    first = quiver.arrow(travel[0])
    current = first.target
    for label in travel[1:]:
        arrow = quiver.arrow(label)
        if arrow.source != current:
            raise DimensionMismatch(f"arrows in {'*'.join(word)} do not compose")
        current = arrow.target
    return Path(first.source, current, tuple(travel))


def enumerate_paths(q: Quiver, max_len: int) -> list[Path]:
    """All paths of length <= max_len ordered by length, then arrow labels."""
    if max_len < 0:
        raise ValueError("max_len must be non-negative")
    layer = [trivial_path(v) for v in q.vertices]
    found = list(layer)
    for _ in range(max_len):
        layer = [
            Path(p.source, a.target, p.arrows + (a.label,))
            for p in layer
            for a in q.arrows_from(p.target)
        ]
        if not layer:
            break
        found.extend(layer)
    return sorted(found, key=lambda p: p.sort_key(q))


@dataclass(frozen=True)
class VertexBipartition:
    lower: frozenset[str]
    upper: frozenset[str]


def class_label(vertices: Sequence[str]) -> str:
    return vertices[0] if len(vertices) == 1 else "{" + ",".join(vertices) + "}"


def condensation(q: Quiver) -> tuple[list[list[str]], Quiver]:
    """Strongly connected classes in source-first topological order plus the class DAG."""
    graph = q.digraph()
    position = {v: i for i, v in enumerate(q.vertices)}
    dag = nx.condensation(graph)
    members = {
        node: sorted(dag.nodes[node]["members"], key=position.__getitem__) for node in dag.nodes
    }
    order = list(
        nx.lexicographical_topological_sort(dag, key=lambda node: position[members[node][0]])
    )
    classes = [members[node] for node in order]
    labels = {node: class_label(members[node]) for node in order}
    edges = sorted(dag.edges, key=lambda e: (order.index(e[0]), order.index(e[1])))
    class_quiver = Quiver(
        tuple(labels[node] for node in order),
        tuple(Arrow(f"{labels[s]}->{labels[t]}", labels[s], labels[t]) for s, t in edges),
    )
    return classes, class_quiver


def finest_stratification_order(q: Quiver) -> list[list[str]]:
    """Classes ordered so no path runs from a later class to an earlier one."""
    return condensation(q)[0]


def _successor_closed(subset: set[str], graph: nx.DiGraph) -> bool:
    return all(w in subset for v in subset for w in graph.successors(v))


def directed_bipartitions(q: Quiver) -> list[VertexBipartition]:
    """Nontrivial splits with no path from ``lower`` to ``upper``.

    ``lower`` is exactly a nonempty proper successor-closed union of strongly
    connected classes.
    """
    classes, _ = condensation(q)
    graph = q.digraph()
    position = {v: i for i, v in enumerate(q.vertices)}
    everything = set(q.vertices)
    found: list[VertexBipartition] = []
    for size in range(1, len(classes)):
        for chosen in itertools.combinations(range(len(classes)), size):
            lower = {v for i in chosen for v in classes[i]}
            if _successor_closed(lower, graph):
                found.append(VertexBipartition(frozenset(lower), frozenset(everything - lower)))
    return sorted(
        found,
        key=lambda b: (len(b.lower), sorted(position[v] for v in b.lower)),
    )
