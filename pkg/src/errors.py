class HolescopeError(Exception):
    """Base class for all errors raised by the package"""


class GraphFormatError(HolescopeError, ValueError):
    """Malformed graph6 / edge-list input or invalid vertex ids"""


class BudgetExhausted(HolescopeError):
    """A search exceeded its node-expansion cap"""

    def __init__(self, what, budget):
        self.what = what
        self.budget = budget
        super().__init__(f"{what}: budget of {budget} node expansions exhausted")


class PreconditionError(HolescopeError, ValueError):
    """Procedure called on an input that breaks its stated precondition"""


class PhiRangeError(HolescopeError, LookupError):
    """PhiTable lookup past the last entry under the fail policy"""

    def __init__(self, kappa, size):
        self.kappa = kappa
        self.size = size
        super().__init__(f"phi range exceeded: kappa={kappa}, table covers 0..{size - 1}")


class CertificateError(HolescopeError, ValueError):
    """Certificate JSON with a schema mismatch or incomplete index maps"""
