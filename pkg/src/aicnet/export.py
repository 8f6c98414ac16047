"""Graph file writers (GraphML, DOT, CSV, JSON) and their parse-back readers.

Writers emit nodes and edges in sorted order so repeated runs are
byte-identical; weights are written with full ``repr`` precision. Isolated
nodes are kept in every format and flagged ``isolated=true``. The readers
understand exactly what the writers emit and exist so exports can be verified
to round-trip.
"""

from __future__ import annotations

import json
import re
import xml.etree.ElementTree as ET
from pathlib import Path
from xml.sax.saxutils import escape, quoteattr

from .graphs import WeightedGraph

_GRAPHML_NS = "http://graphml.graphdrawing.org/xmlns"


def _isolates(g: WeightedGraph) -> set[str]:
    connected = {v for key in g.edges for v in key}
    return g.nodes - connected


def write_graphml(g: WeightedGraph, path: str | Path, name: str = "graph") -> None:
    isolates = _isolates(g)
    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<graphml xmlns="{_GRAPHML_NS}">',
        '  <key id="d0" for="node" attr.name="isolated" attr.type="boolean"/>',
        '  <key id="d1" for="edge" attr.name="weight" attr.type="double"/>',
        f'  <graph id={quoteattr(name)} edgedefault="undirected">',
    ]
    for node in sorted(g.nodes):
        flag = "true" if node in isolates else "false"
        lines.append(f'    <node id={quoteattr(node)}><data key="d0">{flag}</data></node>')
    for (u, v) in sorted(g.edges):
        w = repr(g.edges[(u, v)])
        lines.append(
            f'    <edge source={quoteattr(u)} target={quoteattr(v)}>'
            f'<data key="d1">{escape(w)}</data></edge>'
        )
    lines += ["  </graph>", "</graphml>", ""]
    Path(path).write_text("\n".join(lines), encoding="utf-8")


def read_graphml(path: str | Path) -> WeightedGraph:
    root = ET.parse(path).getroot()
    ns = {"g": _GRAPHML_NS}
    g = WeightedGraph()
    graph = root.find("g:graph", ns)
    if graph is None:
        raise ValueError("no <graph> element")
    for node in graph.findall("g:node", ns):
        g.nodes.add(node.attrib["id"])
    for edge in graph.findall("g:edge", ns):
        data = edge.find("g:data", ns)
        weight = float(data.text) if data is not None and data.text else 1.0
        g.add_edge(edge.attrib["source"], edge.attrib["target"], weight)
    return g


def _dot_quote(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def write_dot(g: WeightedGraph, path: str | Path, name: str = "graph") -> None:
    isolates = _isolates(g)
    lines = [f"graph {_dot_quote(name)} {{"]
    for node in sorted(g.nodes):
        flag = "true" if node in isolates else "false"
        lines.append(f"  {_dot_quote(node)} [isolated={flag}];")
    for (u, v) in sorted(g.edges):
        lines.append(f"  {_dot_quote(u)} -- {_dot_quote(v)} [weight={g.edges[(u, v)]!r}];")
    lines += ["}", ""]
    Path(path).write_text("\n".join(lines), encoding="utf-8")


_DOT_NODE = re.compile(r'^\s*"((?:[^"\\]|\\.)*)" \[isolated=(true|false)\];$')
_DOT_EDGE = re.compile(r'^\s*"((?:[^"\\]|\\.)*)" -- "((?:[^"\\]|\\.)*)" \[weight=([^\]]+)\];$')


def _dot_unquote(s: str) -> str:
    return s.replace('\\"', '"').replace("\\\\", "\\")


def read_dot(path: str | Path) -> WeightedGraph:
    g = WeightedGraph()
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        m = _DOT_NODE.match(line)
        if m:
            g.nodes.add(_dot_unquote(m.group(1)))
            continue
        m = _DOT_EDGE.match(line)
        if m:
            g.add_edge(_dot_unquote(m.group(1)), _dot_unquote(m.group(2)), float(m.group(3)))
    return g


def write_csv(g: WeightedGraph, edges_path: str | Path, nodes_path: str | Path) -> None:
    import csv

    isolates = _isolates(g)
    with Path(nodes_path).open("w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["node", "isolated"])
        for node in sorted(g.nodes):
            writer.writerow([node, str(node in isolates).lower()])
    with Path(edges_path).open("w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["source", "target", "weight"])
        for (u, v) in sorted(g.edges):
            writer.writerow([u, v, repr(g.edges[(u, v)])])


def graph_to_json(g: WeightedGraph, name: str = "graph") -> dict:
    isolates = _isolates(g)
    return {
        "name": name,
        "directed": False,
        "nodes": [{"id": v, "isolated": v in isolates} for v in sorted(g.nodes)],
        "edges": [
            {"source": u, "target": v, "weight": g.edges[(u, v)]} for (u, v) in sorted(g.edges)
        ],
    }


def write_json(g: WeightedGraph, path: str | Path, name: str = "graph") -> None:
    Path(path).write_text(
        json.dumps(graph_to_json(g, name), indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )


def read_json(path: str | Path) -> WeightedGraph:
    data = json.loads(Path(path).read_text(encoding="utf-8"))
    g = WeightedGraph()
    for node in data["nodes"]:
        g.nodes.add(node["id"])
    for edge in data["edges"]:
        g.add_edge(edge["source"], edge["target"], float(edge["weight"]))
    return g
