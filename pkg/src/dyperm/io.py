"""Flat-file formats: edge lists, community files and event streams.

All three share the same lexical rules: whitespace-separated non-negative
integers, one record per line, blank lines and lines starting with ``#``
ignored.
"""

from __future__ import annotations

import os
from typing import Iterable, Iterator

from .errors import DyPermError, ParseError
from .graph import _ARITY, AtomicEvent, Graph, Partition, edge_key


def _records(path) -> Iterator[tuple[int, list[str]]]:
    try:
        fh = open(path, encoding="utf-8")
    except OSError as err:
        raise FileNotFoundError(f"{path}: {err.strerror}") from err
    with fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            yield lineno, line.split()


def _int(tok: str, path, lineno: int) -> int:
    try:
        val = int(tok)
    except ValueError:
        raise ParseError(f"expected a non-negative integer, got {tok!r}", path, lineno) from None
    if val < 0:
        raise ParseError(f"negative id {val}", path, lineno)
    return val


def parse_edgelist(path) -> Graph:
    """Read ``u v`` lines into a Graph.

    A line holding a single id declares an isolated node. Self-loops and
    repeated edges (in either orientation) are rejected.
    """
    g = Graph()
    for lineno, toks in _records(path):
        if len(toks) not in (1, 2):
            raise ParseError(f"expected 'u v', got {len(toks)} fields", path, lineno)
        ids = [_int(t, path, lineno) for t in toks]
        for w in ids:
            if w not in g.adj:
                g.add_node(w)
        if len(ids) == 2:
            u, v = ids
            if u == v:
                raise ParseError(f"self-loop {u} {v}", path, lineno)
            if g.has_edge(u, v):
                raise ParseError(f"duplicate edge {u} {v}", path, lineno)
            g.add_edge(u, v)
    return g


def write_edgelist(g: Graph, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for u, v in g.edges():
            fh.write(f"{u} {v}\n")
        for u in g.nodes():
            if not g.adj[u]:
                fh.write(f"{u}\n")


def parse_communities(path) -> dict[int, int]:
    """Read ``node community`` lines; labels are returned as written."""
    labels: dict[int, int] = {}
    for lineno, toks in _records(path):
        if len(toks) != 2:
            raise ParseError(f"expected 'node community', got {len(toks)} fields", path, lineno)
        u, c = (_int(t, path, lineno) for t in toks)
        if u in labels:
            raise ParseError(f"node {u} listed twice", path, lineno)
        labels[u] = c
    return labels


def write_communities(p: Partition | dict, path) -> None:
    labels = p.assignment if isinstance(p, Partition) else p
    with open(path, "w", encoding="utf-8") as fh:
        for u in sorted(labels):
            fh.write(f"{u} {labels[u]}\n")


def parse_events(path) -> list[AtomicEvent]:
    """Read ``t OP args`` lines. Events are stably sorted by timestamp."""
    events = []
    for lineno, toks in _records(path):
        if len(toks) < 3:
            raise ParseError("expected 't OP args'", path, lineno)
        t = _int(toks[0], path, lineno)
        op = toks[1].upper()
        if op not in _ARITY:
            raise ParseError(f"unknown opcode {toks[1]!r}", path, lineno)
        args = toks[2:]
        if len(args) != _ARITY[op]:
            raise ParseError(f"{op} takes {_ARITY[op]} argument(s), got {len(args)}", path, lineno)
        ids = [_int(a, path, lineno) for a in args]
        try:
            events.append(AtomicEvent(t, op, *ids, line=lineno))
        except DyPermError as err:
            raise ParseError(str(err), path, lineno) from None
    events.sort(key=lambda e: e.timestamp)
    return events


def format_events(events: Iterable[AtomicEvent]) -> str:
    return "".join(e.format() + "\n" for e in events)


def write_events(events: Iterable[AtomicEvent], path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(format_events(events))


def edge_set(g: Graph) -> set[tuple[int, int]]:
    return {edge_key(u, v) for u, v in g.edges()}


def truth_path(truth_dir, t: int) -> str:
    return os.path.join(truth_dir, f"t{t}.comms")
