"""Network statistics over a crawled concept graph.

All figures are computed on the undirected simple projection: forward and
back edges merge, parallel edges collapse, self loops drop. The diameter is
the largest eccentricity inside the largest connected component; when several
components tie for largest, the worst (largest) diameter among them is
reported so the value survives relabeling. Local clustering of nodes with
degree < 2 counts as 0 in the average, and the average is taken over every
node in the graph.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from .crawler import DomainGraph
from .errors import EmptyGraph


@dataclass(frozen=True)
class GraphMetrics:
    node_count: int
    edge_count: int
    average_degree: float
    diameter: int
    average_clustering: float
    largest_component_size: int
    top_nodes: tuple[tuple[str, int], ...]

    def to_dict(self) -> dict:
        return {
            "node_count": self.node_count,
            "edge_count": self.edge_count,
            "average_degree": self.average_degree,
            "diameter": self.diameter,
            "average_clustering": self.average_clustering,
            "largest_component_size": self.largest_component_size,
            "top_nodes": [[title, degree] for title, degree in self.top_nodes],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "GraphMetrics":
        return cls(
            node_count=int(data["node_count"]),
            edge_count=int(data["edge_count"]),
            average_degree=float(data["average_degree"]),
            diameter=int(data["diameter"]),
            average_clustering=float(data["average_clustering"]),
            largest_component_size=int(data["largest_component_size"]),
            top_nodes=tuple((str(t), int(d)) for t, d in data["top_nodes"]),
        )


def to_undirected(graph: DomainGraph) -> dict[str, set[str]]:
    """Undirected simple adjacency of the graph (titles to neighbor sets)."""
    adjacency: dict[str, set[str]] = {title: set() for title in graph.nodes}
    for edge in graph.edges:
        if edge.source == edge.target:
            continue
        adjacency[edge.source].add(edge.target)
        adjacency[edge.target].add(edge.source)
    return adjacency


def _components(adjacency: dict[str, set[str]]) -> list[list[str]]:
    seen: set[str] = set()
    components: list[list[str]] = []
    for start in adjacency:
        if start in seen:
            continue
        member = [start]
        seen.add(start)
        frontier = deque([start])
        while frontier:
            current = frontier.popleft()
            for neighbor in adjacency[current]:
                if neighbor not in seen:
                    seen.add(neighbor)
                    member.append(neighbor)
                    frontier.append(neighbor)
        components.append(member)
    return components


def _eccentricity(adjacency: dict[str, set[str]], start: str) -> int:
    distance = {start: 0}
    frontier = deque([start])
    farthest = 0
    while frontier:
        current = frontier.popleft()
        for neighbor in adjacency[current]:
            if neighbor not in distance:
                distance[neighbor] = distance[current] + 1
                farthest = max(farthest, distance[neighbor])
                frontier.append(neighbor)
    return farthest


def _component_diameter(adjacency: dict[str, set[str]], members: list[str]) -> int:
    return max(_eccentricity(adjacency, member) for member in members)


def _local_clustering(adjacency: dict[str, set[str]], node: str) -> float:
    neighbors = adjacency[node]
    k = len(neighbors)
    if k < 2:
        return 0.0
    ordered = sorted(neighbors)
    closed = 0
    for i, first in enumerate(ordered):
        first_neighbors = adjacency[first]
        for second in ordered[i + 1 :]:
            if second in first_neighbors:
                closed += 1
    return 2 * closed / (k * (k - 1))


def compute_metrics(graph: DomainGraph, top_k: int = 10) -> GraphMetrics:
    """Compute the reported statistics for one probe graph."""
    if graph.node_count == 0:
        raise EmptyGraph("metrics need at least one node")
    if top_k < 0:
        raise ValueError("top_k must be >= 0")
    adjacency = to_undirected(graph)
    node_count = len(adjacency)
    edge_count = sum(len(neighbors) for neighbors in adjacency.values()) // 2
    components = _components(adjacency)
    biggest = max(len(component) for component in components)
    diameter = max(
        _component_diameter(adjacency, component)
        for component in components
        if len(component) == biggest
    )
    clustering = (
        sum(_local_clustering(adjacency, node) for node in adjacency) / node_count
    )
    ranked = sorted(
        ((title, len(neighbors)) for title, neighbors in adjacency.items()),
        key=lambda item: (-item[1], item[0]),
    )
    return GraphMetrics(
        node_count=node_count,
        edge_count=edge_count,
        average_degree=2 * edge_count / node_count,
        diameter=diameter,
        average_clustering=clustering,
        largest_component_size=biggest,
        top_nodes=tuple(ranked[:top_k]),
    )
