"""Exception hierarchy shared by every module."""


class NilalgError(Exception):
    """Base class for all library errors."""


class ParseError(NilalgError):
    """Malformed text input. Carries an optional line/column position."""

    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f" (line {line}" + (f", column {column})" if column is not None else ")")
        super().__init__(message + where)


class FieldMismatch(NilalgError):
    pass


class NonRepresentable(NilalgError):
    pass


class DivisionByZero(NilalgError, ZeroDivisionError):
    pass


class BadPrime(NilalgError):
    pass


class NoSquareRoot(NilalgError):
    pass


class DimensionMismatch(NilalgError):
    pass


class NotASubspace(NilalgError):
    pass


class NoSolution(NilalgError):
    pass


class NotInAnnihilator(NilalgError):
    pass


class NotNilpotent(NilalgError):
    pass


class UnknownTemplate(NilalgError):
    pass


class NonMultilinearVariety(NilalgError):
    pass


class NotACocycle(NilalgError):
    def __init__(self, message, instance=None):
        self.instance = instance
        super().__init__(message)


class TrivialAnnihilator(NilalgError):
    pass


class SingularMatrix(NilalgError):
    pass


class ConstraintViolated(NilalgError):
    pass


class FormulaMismatch(NilalgError):
    def __init__(self, message, assignment=None):
        self.assignment = assignment
        super().__init__(message)


class MissingParameter(NilalgError):
    pass


class UnknownParameter(NilalgError):
    pass


class DuplicateProduct(NilalgError):
    pass
