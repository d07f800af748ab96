"""Exception types shared across the package."""

from __future__ import annotations


class PTreeError(Exception):
    """Base class for every error raised by this library."""


class CyclicInput(PTreeError):
    """The parent relation of a labeled tree description contains a cycle."""


class MultipleRoots(PTreeError):
    """A labeled tree description has more than one parentless node."""


class InvalidAdjacency(PTreeError):
    """A labeled tree description is not a tree (e.g. a node with two parents)."""


class DepthBudgetExceeded(PTreeError):
    """An operation asked about nodes beyond the tree's depth budget."""


class InfiniteLevel(PTreeError):
    """An operation would have to enumerate an infinite set of nodes."""


class UnknownNode(PTreeError):
    """A path does not denote a node of the tree at hand."""


class NotAFront(PTreeError):
    """A node set is not a front: comparable members, or uncovered branches."""


class NodeNotBelowFront(PTreeError):
    """The node has no extension inside the given front."""


class PreconditionFrontMismatch(PTreeError):
    """A maximal node shorter than the front level sits above the conditioning node."""


class MalformedPair(PTreeError):
    """A positive-measure/filler pair violates its structural invariants."""


class MalformedClopen(PTreeError):
    """A clopen selection picks nodes outside the stated front."""


class NotASubtree(PTreeError):
    """A node set is not a subtree of the host tree with compatible leaves."""


class QPointError(PTreeError):
    """The point is a shared cell endpoint; the descent map is undefined there."""


class SamplerStuck(PTreeError):
    """The sampler hit the redraw cap (only possible on degenerate inputs)."""


class RequiresExplicitFiniteTree(PTreeError):
    """The operation is only meaningful for explicit finite trees."""


class EncodingMismatch(PTreeError):
    """A binary encoding was built from a different tree than the one supplied."""


class TooDeep(PTreeError):
    """Trial count exceeds the leaf-enumeration cap."""


class NotALeaf(PTreeError):
    """The path does not denote a leaf of the trial tree."""


class HypothesisViolated(PTreeError):
    """Some per-trial success probability is below the claimed lower bound."""

    def __init__(self, node: tuple, message: str) -> None:
        super().__init__(message)
        self.node = node


class SpecSyntaxError(PTreeError):
    """The tree-spec document is not well-formed JSON."""

    def __init__(self, message: str, line: int | None = None) -> None:
        super().__init__(message if line is None else f"line {line}: {message}")
        self.line = line


class SpecValidationError(PTreeError):
    """The tree-spec document is well-formed but semantically invalid."""

    def __init__(self, path: str, reason: str) -> None:
        super().__init__(f"node {path!r}: {reason}")
        self.path = path
        self.reason = reason


class UnknownGenerator(PTreeError):
    """The tree-spec document names a generator this library does not provide."""
