"""Exception types shared across the package."""


class ConfigError(ValueError):
    """Invalid or inconsistent experiment configuration."""


class TruncationError(RuntimeError):
    """A Fock-space truncation is inadequate for the requested computation."""


class AcceptanceError(RuntimeError):
    """A canned reproduction run missed one of its quantitative thresholds."""

    def __init__(self, failures):
        self.failures = list(failures)
        super().__init__("acceptance thresholds failed:\n" + "\n".join(self.failures))


class HierarchyWarning(UserWarning):
    """Dispersive parameter hierarchy |Delta| >> |J| >> |g| is violated."""
