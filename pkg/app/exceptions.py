class GalerkinError(ValueError):
    """Root of every error raised by the solver toolkit."""


class ConfigurationError(GalerkinError):
    pass


class LevelError(GalerkinError):
    pass


class KindError(GalerkinError):
    pass


class FieldError(GalerkinError):
    pass


class ExponentError(GalerkinError):
    pass


class StepError(GalerkinError):
    """Newton did not converge within the iteration limit."""

    def __init__(self, message, residual, iterations):
        super().__init__(message)
        self.residual = residual
        self.iterations = iterations


class TrajectoryError(GalerkinError):
    def __init__(self, message, step_index, residual=None):
        super().__init__(message)
        self.step_index = step_index
        self.residual = residual


class StudyError(GalerkinError):
    pass


class ProblemFileError(GalerkinError):
    """Problem file rejected; `pointer` is the JSON pointer of the offending entry."""

    def __init__(self, message, pointer=""):
        super().__init__(f"{pointer or '/'}: {message}")
        self.pointer = pointer


class SchemaError(ProblemFileError):
    pass


class ConfigValueError(ProblemFileError):
    pass
