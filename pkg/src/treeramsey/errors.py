"""Exception types shared across the package."""


class NotFound(Exception):
    """An exhaustive search finished without finding the requested object."""


class Infeasible(ValueError):
    """A construction cannot be realised at the requested parameters."""


class HypothesisFailed(Exception):
    """A precondition of an embedding routine does not hold.

    ``which`` names the failed hypothesis so callers can report it.
    """

    def __init__(self, which, detail=""):
        self.which = which
        self.detail = detail
        super().__init__(f"{which}: {detail}" if detail else which)


class StepFailed(Exception):
    """An embedding routine got past its hypothesis checks but a later stage failed."""

    def __init__(self, stage, detail=""):
        self.stage = stage
        self.detail = detail
        super().__init__(f"{stage}: {detail}" if detail else stage)


class RetriesExhausted(StepFailed):
    def __init__(self, stage, attempts):
        super().__init__(stage, f"no success after {attempts} attempts")
        self.attempts = attempts


class CaseFailed(Exception):
    """An extremal case analysis reached a branch that did not produce an embedding."""

    def __init__(self, branch, cause=None):
        self.branch = branch
        self.cause = cause
        msg = branch if cause is None else f"{branch}: {cause}"
        super().__init__(msg)
