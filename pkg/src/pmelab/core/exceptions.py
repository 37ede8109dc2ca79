"""
Custom exceptions for the porous medium lab.
"""


class PmeLabException(Exception):
    """Base exception for the porous medium lab"""

    def __init__(self, message: str, error_code: str = None, details: dict = None):
        super().__init__(message)
        self.message = message
        self.error_code = error_code or "PME_LAB_ERROR"
        self.details = details or {}


class ValidationException(PmeLabException):
    """Exception when parameters violate a type invariant"""

    def __init__(self, message: str, field: str = None, **kwargs):
        super().__init__(message, error_code="VALIDATION_ERROR", **kwargs)
        self.field = field


class ConfigurationException(PmeLabException):
    """Exception related to configuration"""

    def __init__(self, message: str, config_key: str = None, **kwargs):
        super().__init__(message, error_code="CONFIGURATION_ERROR", **kwargs)
        self.config_key = config_key


class DomainException(PmeLabException):
    """Exception when a field is evaluated outside its domain"""

    def __init__(self, message: str, point: float = None, **kwargs):
        super().__init__(message, error_code="DOMAIN_ERROR", **kwargs)
        self.point = point


class PreconditionException(PmeLabException):
    """Exception when an operation precondition does not hold"""

    def __init__(self, message: str, operation: str = None, **kwargs):
        super().__init__(message, error_code="PRECONDITION_ERROR", **kwargs)
        self.operation = operation


class QuadratureException(PmeLabException):
    """Exception when a quadrature does not converge"""

    def __init__(self, message: str, error_estimate: float = None, **kwargs):
        super().__init__(message, error_code="QUADRATURE_ERROR", **kwargs)
        self.error_estimate = error_estimate


class ShootingException(PmeLabException):
    """Exception when the shooting bracket cannot be located"""

    def __init__(self, message: str, scanned_range: tuple = None, **kwargs):
        super().__init__(message, error_code="SHOOTING_ERROR", **kwargs)
        self.scanned_range = scanned_range


class IntegrationException(PmeLabException):
    """Exception during ODE integration"""

    def __init__(self, message: str, **kwargs):
        super().__init__(message, error_code="INTEGRATION_ERROR", **kwargs)


class CFLViolationException(PmeLabException):
    """Exception when a time step exceeds the stability limit"""

    def __init__(self, message: str, dt: float = None, limit: float = None, **kwargs):
        super().__init__(message, error_code="CFL_VIOLATION", **kwargs)
        self.dt = dt
        self.limit = limit


class NumericalAbortException(PmeLabException):
    """Exception when a run produces non-finite values"""

    def __init__(self, message: str, step_index: int = None, **kwargs):
        super().__init__(message, error_code="NUMERICAL_ABORT", **kwargs)
        self.step_index = step_index


class InconclusiveException(PmeLabException):
    """Exception when a refinement trend gives no verdict"""

    def __init__(self, message: str, trend=None, **kwargs):
        super().__init__(message, error_code="INCONCLUSIVE", **kwargs)
        self.trend = trend


class ComparisonViolationException(PmeLabException):
    """Exception when two ordered solutions lose their ordering"""

    def __init__(
        self, message: str, snapshot: int = None, cell: int = None, **kwargs
    ):
        super().__init__(message, error_code="COMPARISON_VIOLATION", **kwargs)
        self.snapshot = snapshot
        self.cell = cell


class CheckFailedException(PmeLabException):
    """Exception when one or more checks fail"""

    def __init__(self, message: str, failures: list = None, **kwargs):
        super().__init__(message, error_code="CHECK_FAILED", **kwargs)
        self.failures = failures or []
