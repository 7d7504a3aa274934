"""Exception hierarchy shared by every module of the package."""


class TournamentError(Exception):
    """Base class for all errors raised by this package."""


class OrientationError(TournamentError, ValueError):
    pass


class MissingPair(OrientationError):
    def __init__(self, u, v):
        super().__init__(f"no orientation given for pair {{{u}, {v}}}")
        self.pair = (u, v)


class DuplicatePair(OrientationError):
    def __init__(self, u, v):
        super().__init__(f"pair {{{u}, {v}}} oriented more than once")
        self.pair = (u, v)


class EmptySet(TournamentError, ValueError):
    pass


class BadModulus(TournamentError, ValueError):
    pass


class SameVertex(TournamentError, ValueError):
    pass


class TooLarge(TournamentError):
    """An exhaustive routine was asked to run beyond its configured bound."""


class TooSmall(TournamentError, ValueError):
    pass


class NotStronglyConnected(TournamentError, ValueError):
    pass


class BadLengths(TournamentError, ValueError):
    pass


class BadSpec(TournamentError, ValueError):
    pass


class PathPackingFailed(TournamentError):
    """No path family was found.

    ``exhausted`` is True when the search space was fully explored (the
    instance is infeasible) and False when the node budget ran out first.
    """

    def __init__(self, pair_index, nodes_explored, exhausted):
        kind = "infeasible" if exhausted else "budget exhausted"
        super().__init__(
            f"path packing failed at pair {pair_index} after "
            f"{nodes_explored} nodes ({kind})"
        )
        self.pair_index = pair_index
        self.nodes_explored = nodes_explored
        self.exhausted = exhausted


class StageFailure(TournamentError):
    """A pipeline stage could not complete on the given instance."""

    def __init__(self, stage, reason, witness=None):
        super().__init__(f"{stage}: {reason}")
        self.stage = stage
        self.reason = reason
        self.witness = witness or {}

    def to_dict(self):
        return {"stage": self.stage, "reason": self.reason, "witness": self.witness}


class ExceptionalTournament(TournamentError):
    """The input is the 7-vertex tournament with no transitive 4-subtournament."""


class SearchExhausted(TournamentError):
    def __init__(self, budget, exhausted=False):
        kind = "search space exhausted" if exhausted else "node budget hit"
        super().__init__(f"two-cycle search failed ({kind}, budget {budget})")
        self.budget = budget
        self.exhausted = exhausted


class CertificateInvalid(TournamentError):
    """Internal consistency check on a freshly built certificate failed."""


class ConnectivityGateError(TournamentError):
    """Strict mode was requested but the connectivity hypothesis is not established."""
