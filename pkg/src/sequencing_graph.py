"""Plan serialization: JSON ops arrays and DOT sequencing graphs."""

from typing import Any, Dict, List, Optional

import networkx as nx

from core import MixSplitPlan, Reagent, SimulationResult, TargetCF

from .dilution import intermediate_cfs

DISPENSE = "dispense"
MIX_SPLIT = "mix-split"


def plan_to_json(plan: MixSplitPlan) -> Dict[str, Any]:
    """Ops array with {index, inputs, reagent}; O_1 takes both dispensed droplets."""
    ops: List[Dict[str, Any]] = [
        {"index": 1, "inputs": [r.value for r in plan.first_op], "reagent": None}
    ]
    for step, reagent in enumerate(plan.reagents, start=2):
        ops.append({"index": step, "inputs": ["carried", reagent.value], "reagent": reagent.value})
    return {
        "target": str(plan.target),
        "numerator": plan.target.numerator,
        "accuracy": plan.target.accuracy,
        "ops": ops,
    }


def plan_from_json(data: Dict[str, Any]) -> MixSplitPlan:
    """Rebuild a plan written by plan_to_json; the schedule is re-validated."""
    try:
        target = TargetCF(numerator=int(data["numerator"]), accuracy=int(data["accuracy"]))
        ops = sorted(data["ops"], key=lambda op: op["index"])
        reagents = tuple(Reagent(op["reagent"]) for op in ops if op["index"] > 1)
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed plan document: {exc}") from None
    return MixSplitPlan(target=target, reagents=reagents)


def build_sequencing_graph(plan: MixSplitPlan, result: Optional[SimulationResult] = None) -> nx.DiGraph:
    """Dispense and mix-split nodes; edges carry droplet volumes.

    Without a result the carried volumes are the ideal 1X; with one they are
    the kept-daughter volumes of the simulated run.
    """
    graph = nx.DiGraph(target=str(plan.target))
    cfs = intermediate_cfs(plan) if result is None else [s.post_mix.concentration for s in result.trace]

    for index, reagent in enumerate(plan.first_op):
        graph.add_node(f"dispense_{index}", kind=DISPENSE, reagent=reagent.value)
        graph.add_edge(f"dispense_{index}", "mix_1", volume=1.0)
    graph.add_node("mix_1", kind=MIX_SPLIT, step=1, cf=float(cfs[0]))

    for step in range(2, plan.accuracy + 1):
        node = f"mix_{step}"
        reagent = plan.reagent(step - 1)
        graph.add_node(node, kind=MIX_SPLIT, step=step, cf=float(cfs[step - 1]))
        graph.add_node(f"dispense_{step}", kind=DISPENSE, reagent=reagent.value)
        graph.add_edge(f"dispense_{step}", node, volume=1.0)
        carried = 1.0 if result is None else float(result.trace[step - 2].kept.volume)
        graph.add_edge(f"mix_{step - 1}", node, volume=carried)
    return graph


def nodes_of_kind(graph: nx.DiGraph, kind: str) -> List[str]:
    return [node for node, k in nx.get_node_attributes(graph, "kind").items() if k == kind]


def to_dot(graph: nx.DiGraph) -> str:
    """Graphviz text for a sequencing graph."""
    lines = [f'digraph "{graph.graph.get("target", "plan")}" {{', "  rankdir=LR;"]
    for node, attrs in graph.nodes(data=True):
        if attrs["kind"] == DISPENSE:
            label = "S" if attrs["reagent"] == Reagent.SAMPLE.value else "B"
            lines.append(f'  "{node}" [label="{label}", shape=circle, kind="{DISPENSE}"];')
        else:
            lines.append(
                f'  "{node}" [label="M{attrs["step"]}\\nCF={attrs["cf"]:.6g}", shape=box, kind="{MIX_SPLIT}"];'
            )
    for source, sink, attrs in graph.edges(data=True):
        lines.append(f'  "{source}" -> "{sink}" [label="{attrs["volume"]:.6g}"];')
    lines.append("}")
    return "\n".join(lines)
