"""Exception hierarchy.

Validation errors (bad inputs, files, configs) map to CLI exit code 2;
statistical-procedure errors map to exit code 3.
"""


class ExpertAuditError(Exception):
    exit_code = 1


class ValidationError(ExpertAuditError, ValueError):
    exit_code = 2


class StatisticalError(ExpertAuditError, ArithmeticError):
    exit_code = 3


class InvalidModel(ValidationError):
    pass


class UnknownVariable(ValidationError, KeyError):
    def __str__(self):
        return Exception.__str__(self)


class TooManyNoiseVariables(ValidationError):
    pass


class TooManyVariables(ValidationError):
    pass


class MissingColumn(ValidationError, KeyError):
    def __str__(self):
        return Exception.__str__(self)


class MalformedRow(ValidationError):
    def __init__(self, line: int, message: str):
        self.line = line
        super().__init__(f"line {line}: {message}")


class ConfigError(ValidationError):
    def __init__(self, message: str, key: str | None = None):
        self.key = key
        super().__init__(message)


class ConditioningOnNullEvent(StatisticalError):
    pass


class InsufficientRecords(StatisticalError):
    pass


class EmptyPairSet(StatisticalError):
    pass


class SeparationDetected(StatisticalError):
    pass


class RankDeficient(StatisticalError):
    pass


class NoConvergence(StatisticalError):
    pass


class SingleClass(StatisticalError):
    pass
