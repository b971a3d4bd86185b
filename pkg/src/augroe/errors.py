class ConfigurationError(ValueError):
    """Invalid grid, medium, case or run parameters."""


class NumericalFailure(RuntimeError):
    """The solver produced non-finite values or hit a degenerate state."""

    def __init__(self, message, *, interface=None, step=None, case=None):
        self.interface = interface
        self.step = step
        self.case = case
        where = []
        if case is not None:
            where.append(f"case={case}")
        if step is not None:
            where.append(f"step={step}")
        if interface is not None:
            where.append(f"interface={interface}")
        suffix = f" [{', '.join(where)}]" if where else ""
        super().__init__(f"{message}{suffix}")


class ResonantSource(NumericalFailure):
    """A (near) zero eigenvalue carries a nonzero source strength."""
