class HcnError(Exception):
    """Base class for simulator errors."""


class InvalidArgumentError(HcnError, ValueError):
    pass


class InfeasibleError(HcnError):
    """QoS targets cannot be met.

    ``cell`` names the first violating cell when known, ``stage`` labels the
    pipeline stage (e.g. ``"macro"`` or ``"small-cell"``) for overlay runs.
    """

    def __init__(self, message, cell=None, stage=None):
        super().__init__(message)
        self.cell = cell
        self.stage = stage


class ConvergenceError(HcnError):
    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}
