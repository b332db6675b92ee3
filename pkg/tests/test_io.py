import pytest

from dyperm.errors import ParseError
from dyperm.graph import NEW_EDGE, REMOVE_NODE, AtomicEvent, Graph, Partition
from dyperm.io import (
    parse_communities,
    parse_edgelist,
    parse_events,
    write_communities,
    write_edgelist,
)


def write(tmp_path, name, text):
    p = tmp_path / name
    p.write_text(text)
    return p


def test_edgelist_roundtrip(tmp_path):
    g = Graph([(0, 1), (2, 1)], nodes=[7])
    write_edgelist(g, tmp_path / "g.edges")
    assert parse_edgelist(tmp_path / "g.edges") == g


def test_edgelist_comments_and_blanks(tmp_path):
    p = write(tmp_path, "g", "# header\n\n0 1\n  1\t2  \n")
    assert parse_edgelist(p).edges() == [(0, 1), (1, 2)]


@pytest.mark.parametrize(
    "text, line, needle",
    [
        ("0 1\n1 1\n", 2, "self-loop"),
        ("0 1\n1 0\n", 2, "duplicate"),
        ("0 1 2\n", 1, "fields"),
        ("0 x\n", 1, "integer"),
        ("# c\n0 -3\n", 2, "negative"),
    ],
)
def test_edgelist_errors(tmp_path, text, line, needle):
    with pytest.raises(ParseError, match=needle) as info:
        parse_edgelist(write(tmp_path, "g", text))
    assert info.value.line == line
    assert f":{line}:" in str(info.value)


def test_communities(tmp_path):
    p = Partition({3: 10, 1: 10, 2: 11})
    write_communities(p, tmp_path / "c")
    assert (tmp_path / "c").read_text() == "1 10\n2 11\n3 10\n"
    assert parse_communities(tmp_path / "c") == {1: 10, 2: 11, 3: 10}
    with pytest.raises(ParseError, match="twice"):
        parse_communities(write(tmp_path, "d", "1 0\n1 2\n"))


def test_events_parse_and_sort(tmp_path):
    p = write(tmp_path, "e", "2 RN 5\n1 ae 0 1\n# x\n1 RE 0 1\n")
    ev = parse_events(p)
    assert [(e.timestamp, e.kind, e.line) for e in ev] == [(1, NEW_EDGE, 2), (1, "RE", 4), (2, REMOVE_NODE, 1)]
    assert ev[2] == AtomicEvent(2, REMOVE_NODE, 5, line=1)


@pytest.mark.parametrize(
    "text, needle",
    [("1 XX 0\n", "opcode"), ("1 AE 0\n", "argument"), ("1 AN 0 1\n", "argument"),
     ("1 AE 3 3\n", "u == v"), ("1\n", "t OP")],
)
def test_event_errors(tmp_path, text, needle):
    with pytest.raises(ParseError, match=needle):
        parse_events(write(tmp_path, "e", text))


def test_missing_file(tmp_path):
    with pytest.raises(FileNotFoundError):
        parse_edgelist(tmp_path / "nope")
