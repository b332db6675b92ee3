"""Exception hierarchy shared by every dyperm module."""


class DyPermError(Exception):
    """Base class for all library errors."""


class GraphError(DyPermError, ValueError):
    pass


class DuplicateNode(GraphError):
    pass


class MissingNode(GraphError, KeyError):
    def __str__(self):
        return Exception.__str__(self)


class SelfLoop(GraphError):
    pass


class DuplicateEdge(GraphError):
    pass


class MissingEdge(GraphError):
    pass


class MissingCommunity(DyPermError, KeyError):
    def __str__(self):
        return Exception.__str__(self)


class EmptyGraph(DyPermError, ValueError):
    pass


class NodeSetMismatch(DyPermError, ValueError):
    pass


class ConfigInvalid(DyPermError, ValueError):
    pass


class ParseError(DyPermError, ValueError):
    """Malformed input file. Carries the 1-based line number when known."""

    def __init__(self, message, path=None, line=None):
        self.path = path
        self.line = line
        where = ""
        if path is not None:
            where = f"{path}:"
        if line is not None:
            where += f"{line}:"
        super().__init__(f"{where} {message}" if where else message)


class AuditFailure(DyPermError, AssertionError):
    """Maintained permanence drifted from a from-scratch recomputation."""
