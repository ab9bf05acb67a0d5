"""Exception hierarchy shared by every module of the package."""

from __future__ import annotations


class ReconError(Exception):
    """Base class for all domain errors raised by minorrecon."""


# graph_core
class DisconnectedInput(ReconError):
    pass


class InvalidPartition(ReconError):
    pass


class EdgeExists(ReconError):
    pass


class SelfLoop(ReconError):
    pass


class NoSuchEdge(ReconError):
    pass


# model_analysis
class ShapeMismatch(ReconError):
    pass


class NotAnHEdge(ReconError):
    pass


class HypothesisNotMet(ReconError):
    pass


class StateSpaceExceeded(ReconError):
    def __init__(self, budget: int, what: str = "states") -> None:
        super().__init__(f"state space exceeded budget of {budget} {what}")
        self.budget = budget


# recon_kernel
class SameLabel(ReconError):
    pass


class NotAMinor(ReconError):
    pass


class UnknownModel(ReconError):
    pass


class Unreachable(ReconError):
    pass


# constructive_planner
class PreconditionFailed(ReconError):
    """A planner hypothesis does not hold; ``lemma`` and ``condition`` name it."""

    def __init__(self, lemma: str, condition: str) -> None:
        super().__init__(f"{lemma}: {condition}")
        self.lemma = lemma
        self.condition = condition


class NotTwoConnected(PreconditionFailed):
    def __init__(self, condition: str = "host is not 2-connected") -> None:
        super().__init__("k2", condition)


class NotComplete(PreconditionFailed):
    def __init__(self, condition: str = "host is not a complete graph") -> None:
        super().__init__("clique", condition)


class SizeMismatch(PreconditionFailed):
    def __init__(self, condition: str) -> None:
        super().__init__("clique", condition)


class NotAGeneralizedWheel(PreconditionFailed):
    def __init__(self, condition: str) -> None:
        super().__init__("genwheel", condition)


class LiftFailed(ReconError):
    def __init__(self, step_index: int, reason: str) -> None:
        super().__init__(f"cannot lift step {step_index}: {reason}")
        self.step_index = step_index


class PlannerInvariantError(AssertionError):
    """A planner produced an illegal step although its preconditions held."""


# graph_families
class BadParameter(ReconError):
    pass


class PartSizeMismatch(BadParameter):
    pass


class PartDisconnected(BadParameter):
    pass


# cli_harness
class ParseError(ReconError):
    pass


class IllegalStep(ReconError):
    """Replaying a sequence hit a step that is not a legal single relabeling."""

    def __init__(self, index: int, vertex: int, label: int, condition: str | None) -> None:
        super().__init__(f"step {index} (vertex {vertex} -> {label}) is illegal: {condition}")
        self.index = index
        self.vertex = vertex
        self.label = label
        self.condition = condition
