"""Exception types shared across the package."""


class QDError(Exception):
    """Base class for every error raised by compqd."""


class EFTError(QDError, ArithmeticError):
    pass


class DDError(QDError, ArithmeticError):
    pass


class BreakdownError(QDError, ArithmeticError):
    """A divisor vanished and no sensible result can be produced.

    ``partial`` carries whatever state existed at the time (may be None).
    """

    def __init__(self, msg, partial=None):
        super().__init__(msg)
        self.partial = partial


class ConvergenceError(QDError):
    def __init__(self, msg, partial=None):
        super().__init__(msg)
        self.partial = partial


class OracleError(QDError, ValueError):
    pass


class ParseError(QDError, ValueError):
    def __init__(self, msg, line=None, source=None):
        where = ""
        if source is not None:
            where += str(source)
        if line is not None:
            where += f":{line}"
        super().__init__(f"{where}: {msg}" if where else msg)
        self.line = line
        self.source = source
