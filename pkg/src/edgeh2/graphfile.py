"""Line-based graph file format.

One record per line::

    # comment
    node <id:int> <epsilon:float>
    edge <u:int> <v:int> <weight:float>

Blank lines are ignored, as is anything after a ``#``. Nodes must be
declared before an edge uses them.
"""
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from .errors import GraphError, ParseError
from .graph import build_graph


@dataclass(frozen=True)
class GraphFile:
    graph: object
    path: Optional[str] = None
    node_lines: dict = field(default_factory=dict)  # label -> line number
    edge_lines: tuple = ()  # line number per edge position


def _int(token, lineno, what):
    try:
        value = int(token)
    except ValueError:
        raise ParseError(f"{what} must be an integer, got {token!r}", lineno) from None
    if value < 0:
        raise ParseError(f"{what} must be non-negative, got {value}", lineno)
    return value


def _positive_float(token, lineno, what):
    try:
        value = float(token)
    except ValueError:
        raise ParseError(f"{what} must be a number, got {token!r}", lineno) from None
    if not math.isfinite(value) or value <= 0:
        raise ParseError(f"{what} must be finite and positive, got {token}", lineno)
    return value


def parse_graph_text(text, path=None):
    """Parse graph-file text into a GraphFile carrying line numbers."""
    vertices = []
    edges = []
    node_lines = {}
    edge_lines = []
    seen_edges = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        kind = parts[0]
        if kind == "node":
            if len(parts) != 3:
                raise ParseError("expected 'node <id> <epsilon>'", lineno)
            label = _int(parts[1], lineno, "node id")
            if label in node_lines:
                raise ParseError(f"node {label} already declared on line {node_lines[label]}", lineno)
            vertices.append((label, _positive_float(parts[2], lineno, "epsilon")))
            node_lines[label] = lineno
        elif kind == "edge":
            if len(parts) != 4:
                raise ParseError("expected 'edge <u> <v> <weight>'", lineno)
            u = _int(parts[1], lineno, "edge endpoint")
            v = _int(parts[2], lineno, "edge endpoint")
            for end in (u, v):
                if end not in node_lines:
                    raise ParseError(f"edge uses node {end} before it is declared", lineno)
            if u == v:
                raise ParseError(f"self-loop at node {u}", lineno)
            key = frozenset((u, v))
            if key in seen_edges:
                raise ParseError(f"duplicate edge {u}-{v} (first on line {seen_edges[key]})", lineno)
            seen_edges[key] = lineno
            edges.append((u, v, _positive_float(parts[3], lineno, "weight")))
            edge_lines.append(lineno)
        else:
            raise ParseError(f"unknown record type {kind!r}", lineno)
    if not vertices:
        raise ParseError("file declares no nodes")
    if not edges:
        raise ParseError("file declares no edges")
    try:
        g = build_graph(vertices, edges)
    except GraphError as exc:
        raise ParseError(str(exc)) from exc
    return GraphFile(g, path, node_lines, tuple(edge_lines))


def parse_graph_file(text):
    return parse_graph_text(text).graph


def read_graph_file(path):
    path = Path(path)
    return parse_graph_text(path.read_text(encoding="utf-8"), str(path))


def format_graph(g):
    """Serialize a graph; floats use repr so parsing restores them exactly."""
    lines = [f"node {label} {eps!r}" for label, eps in g.vertices]
    lines += [f"edge {u} {v} {w!r}" for u, v, w in g.edges]
    return "\n".join(lines) + "\n"
