"""Named failure signals shared by every module.

Each signal carries a stable string name so callers (and the CLI) can map it
to an exit status without parsing messages.
"""

VALIDATION_SIGNALS = frozenset({
    "evaluate-at-pole",
    "gamma-pole",
    "unsupported-index",
    "inadmissible-pair",
    "indefinite-norm",
    "degenerate-split",
    "inconsistent-input",
    "weight-infeasible",
    "invalid-config",
})

NUMERICAL_SIGNALS = frozenset({
    "quadrature-failure",
    "resolution-failure",
    "blow-up-suspected",
    "linear-solve-failure",
    "minimizer-not-converged",
    "resolvent-singular",
    "norm-estimate-unreliable",
    "no-blowup-detected",
    "integrator-or-formula-error",
})


class SignalError(Exception):
    """Raised when an operation hits one of the named failure conditions."""

    def __init__(self, signal, message="", **details):
        self.signal = signal
        self.details = details
        super().__init__(f"{signal}: {message}" if message else signal)

    @property
    def is_validation(self):
        return self.signal in VALIDATION_SIGNALS
