"""Exception types shared across the package."""


class ConfigError(ValueError):
    """Invalid or inconsistent configuration (bad field, unknown key, ...)."""


class InfeasibleRateError(ConfigError):
    """Code parameters that cannot be realized (e.g. fewer than one row per block)."""


class DecodeDivergedError(RuntimeError):
    """Decoder state became non-finite; carries the iteration index."""

    def __init__(self, iteration: int, what: str = "decoder state non-finite"):
        super().__init__(f"{what} at iteration {iteration}")
        self.iteration = iteration


class SEDivergedError(RuntimeError):
    """State-evolution recursion produced a non-finite value."""
