"""Exception hierarchy shared by every synid module."""


class SynidError(Exception):
    """Base class for all errors raised by synid."""


class ParseError(SynidError):
    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class GraphError(SynidError):
    """Malformed graph: cycles, self loops, unknown endpoints."""


class UnknownNodeError(GraphError, KeyError):
    def __init__(self, node):
        self.node = node
        super().__init__(f"unknown node {node!r}")

    def __str__(self):
        return self.args[0]


class CycleError(GraphError):
    def __init__(self, remaining):
        self.remaining = tuple(remaining)
        super().__init__("directed cycle among " + ", ".join(self.remaining))


class NotFixableError(SynidError):
    pass


class SignatureError(SynidError):
    """A rewrite or construction would violate a signature invariant."""


class ModuleConflictError(SignatureError):
    def __init__(self, obj, first, second):
        self.obj = obj
        super().__init__(f"object {obj!r} has modules {first!r} and {second!r}")


class NoValidSequence(SynidError):
    """No fixing sequence exists for the requested set of nodes."""

    def __init__(self, district, stuck):
        self.district = frozenset(district)
        self.stuck = frozenset(stuck)
        super().__init__(
            f"no valid fixing sequence for district {sorted(self.district)}; "
            f"unfixable: {sorted(self.stuck)}"
        )


class QueryError(SynidError):
    pass


class SemanticsError(SynidError):
    pass
