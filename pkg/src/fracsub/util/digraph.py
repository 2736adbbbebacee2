from __future__ import annotations

import typing as t

K = t.TypeVar("K", bound=t.Hashable)


class CycleError(RuntimeError):
    pass


class DiGraph(t.Generic[K]):
    """
    A directed graph over hashable node ids. Used to order the forward substitution of coupled systems, where an
    edge `i -> j` means that component `j` depends on component `i`.
    """

    def __init__(self, nodes: t.Iterable[K] = ()) -> None:
        self._successors: dict[K, dict[K, None]] = {}
        self._predecessors: dict[K, dict[K, None]] = {}
        for node in nodes:
            self.add_node(node)

    def add_node(self, node: K) -> None:
        self._successors.setdefault(node, {})
        self._predecessors.setdefault(node, {})

    def add_edge(self, source: K, target: K) -> None:
        """
        Adds an edge from *source* to *target*, adding missing nodes on the way.
        """

        self.add_node(source)
        self.add_node(target)
        self._successors[source][target] = None
        self._predecessors[target][source] = None

    @property
    def nodes(self) -> t.KeysView[K]:
        return self._successors.keys()

    @property
    def roots(self) -> list[K]:
        """
        Return the nodes of the graph that have no predecessors, in insertion order.
        """

        return [node for node, preds in self._predecessors.items() if not preds]

    def successors(self, node: K) -> t.KeysView[K]:
        return self._successors[node].keys()

    def predecessors(self, node: K) -> t.KeysView[K]:
        return self._predecessors[node].keys()


def topological_sort(graph: DiGraph[K]) -> list[K]:
    """Orders the nodes of *graph* so that every node comes after all of its predecessors. Ties keep the node
    insertion order.

    @raises CycleError: If the graph contains a cycle."""

    remaining = {node: len(graph.predecessors(node)) for node in graph.nodes}
    ready = [node for node, count in remaining.items() if count == 0]
    order: list[K] = []

    while ready:
        node = ready.pop(0)
        order.append(node)
        for successor in graph.successors(node):
            remaining[successor] -= 1
            if remaining[successor] == 0:
                ready.append(successor)

    if len(order) != len(remaining):
        raise CycleError(f"encountered a cycle in the graph (unreached nodes {set(remaining) - set(order)})")
    return order
