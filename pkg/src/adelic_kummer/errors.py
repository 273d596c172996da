"""Exception hierarchy shared across the package.

Every domain error derives from AdelicError and carries a stable ``code``
string so the CLI can emit machine-readable error objects.
"""


class AdelicError(Exception):
    """Base class for domain errors."""

    code = "AdelicError"

    def __init__(self, message=""):
        super().__init__(message or self.code)


class NotARootOfUnity(AdelicError):
    code = "NotARootOfUnity"


class ZeroInput(AdelicError):
    code = "ZeroInput"


class ZeroValuation(AdelicError):
    code = "ZeroValuation"


class ZeroInverse(AdelicError):
    code = "ZeroInverse"


class PrecisionExhausted(AdelicError):
    code = "PrecisionExhausted"


class NotAUnit(AdelicError):
    code = "NotAUnit"


class ZeroComponent(AdelicError):
    code = "ZeroComponent"


class ZeroParameter(AdelicError):
    code = "ZeroParameter"


class IncompatibleStructure(AdelicError):
    code = "IncompatibleStructure"


class UnramifiedPoint(AdelicError):
    code = "UnramifiedPoint"


class NonInvertible(AdelicError):
    code = "NonInvertible"


class NotGalois(AdelicError):
    code = "NotGalois"


class NotTransitive(AdelicError):
    code = "NotTransitive"


class NotEquivalent(AdelicError):
    code = "NotEquivalent"


class NotAdmissible(AdelicError):
    code = "NotAdmissible"


class PthPower(AdelicError):
    code = "PthPower"
