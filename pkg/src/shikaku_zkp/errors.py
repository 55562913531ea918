class Rejected(Exception):
    """The verifier saw a reveal that does not match the protocol."""

    def __init__(self, step: str, detail: str, clue=None, iteration=None):
        self.step = step
        self.detail = detail
        self.clue = clue
        self.iteration = iteration
        super().__init__(self.describe())

    def describe(self) -> str:
        where = self.step
        if self.clue is not None:
            where += f" (clue {self.clue}"
            where += f", iteration {self.iteration})" if self.iteration is not None else ")"
        return f"{where}: {self.detail}"


class FormatViolation(Rejected):
    """An indicator row or encoding did not contain exactly one 1."""


class AuditError(AssertionError):
    """Internal invariant breach: something read what it must not see."""


class HiddenValueError(AuditError):
    pass


class InventoryError(AuditError):
    pass


class ContractError(ValueError):
    """A caller broke a documented precondition."""
