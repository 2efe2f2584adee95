"""Exception hierarchy.

``ContractError`` subclasses signal that an input violates an operation's
contract (the CLI maps these to exit status 2); ``ParseError`` signals a
malformed instance file (exit status 1).
"""


class ConelimError(Exception):
    """Base class for all library errors."""


class ContractError(ConelimError):
    """Input is well formed but outside an operation's contract."""


class ParseError(ConelimError):
    """Malformed instance file."""


# forms
class DegreeMismatch(ContractError):
    pass


class InexactDivision(ContractError):
    pass


# polymat
class RankDeficient(ContractError):
    pass


class NotSaturated(ContractError):
    pass


class NotFactorable(ContractError):
    pass


class TwistError(ContractError):
    """An entry of a twisted matrix has the wrong degree for its slot."""


# model
class HolomorphyViolation(ContractError):
    def __init__(self, violations):
        self.violations = list(violations)
        parts = ", ".join(
            f"({i + 1},{j + 1}): expected degree {exp}, found {found}"
            for i, j, exp, found in self.violations
        )
        super().__init__(f"Higgs field is not holomorphic at {parts}")


class NotNilpotent(ContractError):
    pass


class ZeroRank(ContractError):
    pass


class ZeroScalar(ContractError):
    pass


# filtration / stability / limits
class WrongShape(ContractError):
    pass


class Unsupported(ContractError):
    pass


class UnsupportedType(ContractError):
    pass


class BoundaryCase(ContractError):
    pass


# flow
class Divergent(ContractError):
    def __init__(self, exponent_table):
        self.exponent_table = dict(exponent_table)
        bad = sorted(k for k, e in self.exponent_table.items() if e > 0)
        super().__init__(f"positive z-exponents in blocks {bad}")


# testkit
class ExhaustedAttempts(ConelimError):
    pass
