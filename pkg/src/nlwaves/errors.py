"""Exception types shared across the package."""


class NlwavesError(Exception):
    """Base class for all package errors."""


class InvalidKernelError(NlwavesError):
    """Kernel symbol violates the nonnegativity hypothesis."""


class InvalidSpecError(NlwavesError):
    """Initial-data spec is malformed or not usable in this context."""


class NonFiniteError(NlwavesError):
    """A computation produced NaN or infinity."""


class HyperbolicityError(NlwavesError):
    """1 + g'(u) <= 0 somewhere: the energy form is no longer a norm."""


class BreakdownError(NlwavesError):
    """Wave-breaking monitor exceeded its threshold; run halted early."""

    def __init__(self, time, monitor, threshold):
        self.time = time
        self.monitor = monitor
        self.threshold = threshold
        super().__init__(
            f"breakdown monitor {monitor:.6g} exceeded threshold "
            f"{threshold:.6g} at t={time:.6g}"
        )


class CompatibilityError(NlwavesError):
    """Periodic strain field does not sum to zero; no displacement exists."""


class AlignmentError(NlwavesError):
    """Chain spacing is not an integer multiple of the spectral grid spacing."""


class DegenerateFitError(NlwavesError):
    """Fewer than two positive errors: no log-log rate can be fitted."""


class DegenerateDataError(NlwavesError):
    """Input field has zero norm; the requested ratio is undefined."""


class ConfigError(NlwavesError):
    """Experiment configuration is invalid.  `field` names the bad entry."""

    def __init__(self, field, message):
        self.field = field
        super().__init__(f"config field '{field}': {message}")
