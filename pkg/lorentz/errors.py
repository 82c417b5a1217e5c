class LorentzError(Exception):
    """Base error. `exit_code` is what the CLI returns when it escapes."""

    exit_code = 1

    def __init__(self, detail: str) -> None:
        super().__init__(detail)
        self.detail = detail


class InvalidInputError(LorentzError, ValueError):
    exit_code = 2


class ConfigurationError(InvalidInputError):
    pass


class NumericalError(LorentzError, ArithmeticError):
    exit_code = 3


class InfeasibleError(LorentzError):
    exit_code = 4
