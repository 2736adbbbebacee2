import logging

import pytest

from fracsub.util.digraph import CycleError, DiGraph, topological_sort
from fracsub.util.logging import TerminalColorFormatter


def test__topological_sort__keeps_insertion_order_for_ties():
    graph: DiGraph[int] = DiGraph(range(4))
    graph.add_edge(2, 0)
    graph.add_edge(3, 1)
    assert graph.roots == [2, 3]
    assert topological_sort(graph) == [2, 3, 0, 1]


def test__topological_sort__detects_cycles():
    graph: DiGraph[str] = DiGraph()
    graph.add_edge("a", "b")
    graph.add_edge("b", "a")
    graph.add_node("c")
    with pytest.raises(CycleError):
        topological_sort(graph)


def test__TerminalColorFormatter__strips_tags_when_undecorated():
    record = logging.LogRecord("x", logging.INFO, __file__, 1, "Reading <subj>%s</subj>", ("E5",), None)
    assert TerminalColorFormatter("%(message)s", decorated=False).format(record) == "Reading E5"
    decorated = TerminalColorFormatter("%(message)s", decorated=True).format(record)
    assert "E5" in decorated and "<subj>" not in decorated
