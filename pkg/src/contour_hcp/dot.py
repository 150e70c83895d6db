"""Graphviz DOT export of basic objects, plus a small parser used to check it."""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .objects import BasicObject


def _quote(text: str) -> str:
    return '"' + text.replace("\\", "\\\\").replace('"', '\\"') + '"'


def object_to_dot(obj: BasicObject, name: str = "object", title: str = "") -> str:
    """Contour edges solid, windows dashed red, interior edges dotted grey."""
    lines = [f"graph {_quote(name)} {{"]
    if title:
        lines.append(f"  label={_quote(title)};")
    lines.append("  node [shape=circle];")
    for v in obj.contour:
        attrs = ' [style=filled, fillcolor="#ffd8a8"]' if v in obj.window_nodes else ""
        lines.append(f"  {v}{attrs};")
    for u, v in obj.pairs:
        if (u, v) in obj.windows or (v, u) in obj.windows:
            lines.append(f'  {u} -- {v} [style=dashed, color=red, label="W"];')
        else:
            lines.append(f"  {u} -- {v} [penwidth=2];")
    for u, v in sorted(obj.interior_edges):
        lines.append(f"  {u} -- {v} [style=dotted, color=grey40];")
    lines.append("}")
    return "\n".join(lines) + "\n"


@dataclass
class DotGraph:
    name: str
    directed: bool
    nodes: dict = field(default_factory=dict)   # id -> attrs
    edges: list = field(default_factory=list)   # (u, v, attrs)
    attrs: dict = field(default_factory=dict)


_TOKEN = re.compile(r'\s*(?:(//[^\n]*|#[^\n]*|/\*.*?\*/)|("(?:[^"\\]|\\.)*")|(--|->)|([{}\[\];,=])|([A-Za-z_][\w.]*|-?\d+(?:\.\d+)?))', re.S)


def _tokens(text: str):
    pos = 0
    out = []
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m:
            raise ValueError(f"DOT syntax error at offset {pos}: {text[pos:pos + 20]!r}")
        pos = m.end()
        if m.group(1):
            continue
        tok = next(g for g in m.groups()[1:] if g is not None)
        if tok.startswith('"'):
            tok = ("ID", tok[1:-1].replace('\\"', '"').replace("\\\\", "\\"))
        elif m.group(5):
            tok = ("ID", tok)
        out.append(tok)
    return out


def parse_dot(text: str) -> DotGraph:
    """Parse the subset of DOT that covers node, edge and attribute statements."""
    toks = _tokens(text)
    i = 0

    def peek():
        return toks[i] if i < len(toks) else None

    def take(expected=None):
        nonlocal i
        if i >= len(toks):
            raise ValueError("unexpected end of DOT input")
        tok = toks[i]
        if expected is not None and tok != expected:
            raise ValueError(f"expected {expected!r}, got {tok!r}")
        i += 1
        return tok

    def ident():
        tok = take()
        if not (isinstance(tok, tuple) and tok[0] == "ID"):
            raise ValueError(f"expected identifier, got {tok!r}")
        return tok[1]

    def attr_list():
        attrs = {}
        while peek() == "[":
            take("[")
            while peek() != "]":
                key = ident()
                take("=")
                attrs[key] = ident()
                if peek() in (",", ";"):
                    take()
            take("]")
        return attrs

    kind = ident()
    if kind == "strict":
        kind = ident()
    if kind not in ("graph", "digraph"):
        raise ValueError(f"expected graph or digraph, got {kind!r}")
    g = DotGraph(ident() if peek() != "{" else "", kind == "digraph")
    op = "->" if g.directed else "--"
    take("{")
    while peek() != "}":
        if peek() == ";":
            take()
            continue
        first = ident()
        if first in ("graph", "node", "edge") and peek() == "[":
            attr_list()
            continue
        if peek() == "=":
            take("=")
            g.attrs[first] = ident()
        elif peek() == op:
            chain = [first]
            while peek() == op:
                take(op)
                chain.append(ident())
            attrs = attr_list()
            for u, v in zip(chain, chain[1:]):
                g.nodes.setdefault(u, {})
                g.nodes.setdefault(v, {})
                g.edges.append((u, v, attrs))
        else:
            g.nodes.setdefault(first, {}).update(attr_list())
        if peek() == ";":
            take()
    take("}")
    if i != len(toks):
        raise ValueError("trailing tokens after graph body")
    return g
