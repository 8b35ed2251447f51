import pydot
import pytest

from tmkit import emit, export_chronology_dot, export_dot, parse
from tmkit.inventory import build_inventory_model
from tmkit.model import Chronology, ParallelGroup


def graph(text):
    (g,) = pydot.graph_from_dot_data(text)
    return g


def all_subgraphs(g):
    for sub in g.get_subgraphs():
        yield sub
        yield from all_subgraphs(sub)


def test_single_machine():
    m = parse("model M { thing T; machine A { stages create, release; } "
              "flow T: A.create -> A.release; }")
    text = export_dot(m)
    g = graph(text)
    clusters = [s for s in all_subgraphs(g) if s.get_name().strip('"').startswith("cluster_")]
    assert len(clusters) == 1
    nodes = [n for n in clusters[0].get_nodes() if n.get_name() not in ("node", "graph")]
    assert sorted(n.get_label().strip('"') for n in nodes) == ["create", "release"]
    (edge,) = g.get_edges()
    assert edge.get_style() is None
    assert "dashed" not in text


def test_one_trigger_one_dashed_edge():
    m = parse("model M { thing T; var x; machine A { stages create, process; } "
              "machine B { stages create; } flow T: A.create -> A.process; "
              "trigger A.process -> B.create when x > 0; }")
    text = export_dot(m)
    assert text.count("style=dashed") == 1
    dashed = [e for e in graph(text).get_edges() if e.get_style() == "dashed"]
    assert len(dashed) == 1
    assert dashed[0].get_label().strip('"') == "x > 0"


def test_inventory_export():
    m = build_inventory_model()
    text = export_dot(m)
    g = graph(text)
    assert text.count("style=dashed") == len(m.triggers)
    assert len(g.get_edges()) == len(m.arcs)
    clusters = [s for s in all_subgraphs(g) if s.get_name().strip('"').startswith("cluster_")]
    assert len(clusters) == sum(1 for _ in m.iter_machines())


def test_export_is_stable():
    m = build_inventory_model()
    assert export_dot(m) == export_dot(parse(emit(m)))
    assert export_chronology_dot(m.chronology) == export_chronology_dot(m.chronology)


def test_chronology_join():
    text = export_chronology_dot(build_inventory_model().chronology)
    g = graph(text)
    assert "rank=same" in text
    joins = [n for n in g.get_nodes() if n.get_name().strip('"') == "join1"]
    assert len(joins) == 1
    into_join = [e for e in g.get_edges() if e.get_destination().strip('"') == "join1"]
    assert sorted(e.get_source().strip('"') for e in into_join) == ["E5", "E6", "E7"]
    loop = [e for e in g.get_edges() if e.get_source().strip('"') == "join1"]
    assert len(loop) == 1 and loop[0].get_style() != "dashed"
    assert "dashed" not in text


@pytest.mark.parametrize("then_loop", [True, False])
def test_chronology_loop_flag(then_loop):
    chrono = Chronology((("A", "B"),), (ParallelGroup(("A", "B"), then_loop),))
    assert ('label="loop"' in export_chronology_dot(chrono)) is then_loop


def test_quoting():
    m = parse('model M { machine A { stages create; } event E1 "say \\"hi\\"" over { A.create }; }')
    graph(export_dot(m))
