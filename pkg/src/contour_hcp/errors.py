"""Exception hierarchy.

Graph errors signal bad input. Pipeline errors signal that the contour
construction or weighting could not proceed; they are recorded as structured
failures by the harness, never converted into a verdict.
"""


class GraphError(ValueError):
    pass


class MalformedLine(GraphError):
    def __init__(self, lineno, line, reason="malformed line"):
        super().__init__(f"line {lineno}: {reason}: {line!r}")
        self.lineno = lineno
        self.line = line


class SelfLoop(GraphError):
    pass


class DuplicateEdge(GraphError):
    pass


class DegreeExceeded(GraphError):
    def __init__(self, node, degree):
        super().__init__(f"node {node} has degree {degree} > 3")
        self.node = node


class DegreeDeficient(GraphError):
    def __init__(self, node, degree):
        super().__init__(f"node {node} has degree {degree} < 2")
        self.node = node


class Disconnected(GraphError):
    pass


class PureCycle(GraphError):
    """Every node has degree 2: the graph is a single cycle."""


class UnknownFixture(KeyError):
    pass


class PipelineError(Exception):
    kind = "PipelineError"

    def __init__(self, message, trace=None):
        super().__init__(message)
        self.trace = list(trace or [])


class PatternMismatch(PipelineError):
    kind = "PatternMismatch"


class WouldCreateDegenerateD3(PipelineError):
    kind = "WouldCreateDegenerateD3"


class RestrictionViolated(PipelineError):
    kind = "RestrictionViolated"


class PreconditionViolated(PipelineError):
    kind = "PreconditionViolated"


class NonTermination(PipelineError):
    kind = "NonTermination"


class ConstructionStuck(PipelineError):
    kind = "ConstructionStuck"


class LinkAfterReinstatement(ConstructionStuck):
    kind = "LinkAfterReinstatement"


class NoInteriorMaterial(PipelineError):
    kind = "NoInteriorMaterial"


class ChainOverlap(PipelineError):
    kind = "ChainOverlap"


class RestrictionUnsatisfiable(PipelineError):
    kind = "RestrictionUnsatisfiable"


class DisjointnessViolated(PipelineError):
    kind = "DisjointnessViolated"


class TargetNotOnContour(PipelineError):
    kind = "TargetNotOnContour"


class NoEligibleNode(PipelineError):
    kind = "NoEligibleNode"


class TooManyFreeGroups(PipelineError):
    kind = "TooManyFreeGroups"

    def __init__(self, k, trace=None):
        super().__init__(f"{k} free sign groups exceed the enumeration cap", trace)
        self.k = k


class BudgetExhausted(Exception):
    pass


class InfeasibleSpec(ValueError):
    pass
