import networkx as nx
import pytest

from core import ErrorVector
from src.engine import simulate
from src.sequencing_graph import (
    DISPENSE,
    MIX_SPLIT,
    build_sequencing_graph,
    nodes_of_kind,
    plan_from_json,
    plan_to_json,
    to_dot,
)


def test_plan_json(plan_87):
    data = plan_to_json(plan_87)
    assert data["target"] == "87/128"
    assert [op["index"] for op in data["ops"]] == list(range(1, 8))
    assert data["ops"][0] == {"index": 1, "inputs": ["sample", "buffer"], "reagent": None}
    assert data["ops"][3] == {"index": 4, "inputs": ["carried", "buffer"], "reagent": "buffer"}


def test_plan_json_reloads(plan_17):
    assert plan_from_json(plan_to_json(plan_17)) == plan_17


@pytest.mark.parametrize("document", [{}, {"numerator": 87, "accuracy": 7}, {"numerator": 87, "accuracy": 7, "ops": 3}])
def test_malformed_document(document):
    with pytest.raises(ValueError):
        plan_from_json(document)


def test_tampered_schedule_is_rejected(plan_87):
    data = plan_to_json(plan_87)
    data["ops"][2]["reagent"] = "buffer"
    with pytest.raises(ValueError):
        plan_from_json(data)


def test_graph_shape(plan_17):
    graph = build_sequencing_graph(plan_17)
    assert len(nodes_of_kind(graph, MIX_SPLIT)) == 7
    assert len(nodes_of_kind(graph, DISPENSE)) == 8
    assert nx.is_directed_acyclic_graph(graph)
    assert list(nx.topological_sort(graph))[-1] == "mix_7"
    assert graph.nodes["mix_7"]["cf"] == pytest.approx(17 / 128)


def test_graph_carries_simulated_volumes(plan_87):
    result = simulate(plan_87, ErrorVector.parse("000+00", 0.07))
    graph = build_sequencing_graph(plan_87, result)
    assert graph.edges["mix_4", "mix_5"]["volume"] == pytest.approx(1.07)
    assert graph.edges["mix_3", "mix_4"]["volume"] == 1.0
    assert graph.edges["dispense_5", "mix_5"]["volume"] == 1.0


def test_dot(plan_17):
    dot = to_dot(build_sequencing_graph(plan_17))
    assert dot.startswith('digraph "17/128" {')
    assert dot.count(f'kind="{MIX_SPLIT}"') == 7
    assert dot.count(f'kind="{DISPENSE}"') == 8
    assert dot.count("->") == 14
    assert dot.rstrip().endswith("}")
