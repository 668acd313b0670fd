"""Exception hierarchy.

Every error carries a short machine-readable ``code`` so the CLI can map it
to an exit status without string matching.
"""


class AbductionError(Exception):
    code = "ERROR"


class ParseError(AbductionError):
    code = "PARSE_ERROR"

    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f"line {line}"
            if column is not None:
                where += f", column {column}"
            where += ": "
        super().__init__(where + message)


class ScopeError(AbductionError):
    code = "SCOPE_ERROR"


class PartialAssignment(AbductionError):
    code = "PARTIAL_ASSIGNMENT"


class WrongFragment(AbductionError):
    code = "WRONG_FRAGMENT"


class BudgetExceeded(AbductionError):
    code = "BUDGET_EXCEEDED"


class NotSubsetOfH(AbductionError):
    code = "NOT_SUBSET_OF_H"


class UnsatStructure(AbductionError):
    code = "UNSAT_STRUCTURE"


class MissingDefinition(AbductionError):
    code = "MISSING_DEFINITION"


class InvalidDefinition(AbductionError):
    code = "INVALID_DEFINITION"


class NoEquality(AbductionError):
    code = "NO_EQUALITY"


class NotOneValid(AbductionError):
    code = "NOT_ONE_VALID"


class NoNegUnit(AbductionError):
    code = "NO_NEG_UNIT"


class NotPos2CNF(AbductionError):
    code = "NOT_POS2CNF"
