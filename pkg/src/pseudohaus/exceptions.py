class InputError(ValueError):
    """Malformed numerical input (non-finite entries, bad shapes)."""


class ContractError(ValueError):
    """A precondition of an operation does not hold."""


class ConvergenceFailure(ArithmeticError):
    """An iterative kernel hit its iteration cap.

    ``node`` carries the offending grid point when the failure happened
    during field evaluation.
    """

    def __init__(self, msg, node=None):
        super().__init__(msg)
        self.node = node
