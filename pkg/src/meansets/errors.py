"""Exception types shared across the package."""


class MeansetsError(Exception):
    """Base class for all errors raised by this package."""


class UnreachableVertexError(MeansetsError):
    """A shortest-path search exhausted a finite component without meeting its target."""


class InfiniteGraphError(MeansetsError):
    """An operation that needs the full vertex set was called on an implicit graph."""


class RankMismatchError(MeansetsError):
    """Two free-group words (or a word and a measure) have different ranks."""


class UnreachableAtomError(MeansetsError):
    """A measure atom is not reachable from the vertex being weighted."""


class DescentStepLimitError(MeansetsError):
    """Direct descent exceeded its step bound; the objective violates the
    local-finiteness assumptions under which descent terminates."""


class NotMeanSetError(MeansetsError):
    """The vertex list handed to the random-walk apparatus is not the mean-set
    of the supplied measure."""


class NonSingletonTruthError(MeansetsError):
    """A decay experiment needs a singleton ground-truth mean-set unless
    containment mode is requested."""


class MeasureFormatError(MeansetsError):
    """A measure file or literal could not be parsed into an exact measure."""


class GraphFormatError(MeansetsError):
    """A graph file violates the edge-list format or its structural contract."""
