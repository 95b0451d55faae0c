"""Exception types shared across the package."""


class TermeshError(Exception):
    """Base class for all termesh errors."""


class StructuralError(TermeshError):
    """Mesh, label, or walk structure is corrupt (broken adjacency, stuck
    rotation, reservation overflow, non-converging repair)."""

    def __init__(self, message, phase=None):
        if phase:
            message = f"[{phase}] {message}"
        super().__init__(message)
        self.phase = phase


class ValidationError(TermeshError):
    """A triangulation failed its validity check; carries the full report."""

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class ParseError(TermeshError):
    """A mesh file could not be parsed; carries file and line context."""

    def __init__(self, path, line, message):
        super().__init__(f"{path}:{line}: {message}")
        self.path = str(path)
        self.line = line
