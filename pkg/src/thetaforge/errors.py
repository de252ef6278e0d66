"""Exception hierarchy shared by all thetaforge modules."""


class ThetaForgeError(Exception):
    """Base class for every error raised by this package."""


class ArithmeticOverflowError(ThetaForgeError, OverflowError):
    """An exponent left the supported range (0 .. 2**31 - 1)."""


class PoleError(ThetaForgeError, ZeroDivisionError):
    """A denominator vanished: at a specialization, a theta factor, or a Pochhammer symbol."""


class VandermondeError(PoleError):
    """Two of the t-parameters coincide, so the Vandermonde product is zero."""


class DegenerateFactorError(ThetaForgeError, ValueError):
    """A binomial factor 1 - q^0 t^0 (identically zero) was requested."""


class OutOfDiagramError(ThetaForgeError, ValueError):
    pass


class StripError(ThetaForgeError, ValueError):
    """The skew shape is not a strip of the required kind."""


class PreconditionError(ThetaForgeError, ValueError):
    pass


class DomainError(ThetaForgeError, ValueError):
    pass


class ContextError(ThetaForgeError, ValueError):
    pass


class DivergenceError(ThetaForgeError, ValueError):
    pass


class ConstraintError(ThetaForgeError, ValueError):
    """An identity's side condition cannot be satisfied at the given point."""


class SamplerExhaustedError(ThetaForgeError):
    pass


class SymmetryError(ThetaForgeError):
    """A series that must be symmetric was not; indicates an expansion bug."""


class ConfigError(ThetaForgeError, ValueError):
    pass


class DslError(ThetaForgeError):
    pass


class DslSyntaxError(DslError, SyntaxError):
    def __init__(self, message, line, col):
        super().__init__(f"{line}:{col}: {message}")
        self.line = line
        self.col = col


class UnboundIdentifierError(DslError, NameError):
    pass
