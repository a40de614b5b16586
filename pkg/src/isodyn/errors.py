"""Exception hierarchy shared by every module."""


class IsodynError(Exception):
    """Base class for all library errors."""


class SingularMatrix(IsodynError):
    pass


class DegenerateFrame(IsodynError):
    pass


class DegenerateParameter(IsodynError):
    """A genericity guard tripped; ``expression`` names what vanished."""

    def __init__(self, expression, detail=""):
        self.expression = expression
        msg = f"vanishing expression: {expression}"
        if detail:
            msg += f" ({detail})"
        super().__init__(msg)


class SpectrumMismatch(IsodynError):
    pass


class InvalidIndex(IsodynError):
    pass


class InvalidTransform(IsodynError):
    pass


class ConstraintViolated(IsodynError):
    pass


class NoAccessorySolution(IsodynError):
    pass


class InconsistentSlice(IsodynError):
    pass


class ResidualGaugeUnsolvable(IsodynError):
    pass


class BasePoint(IsodynError):
    """The map is undefined at the given point; ``label`` is e.g. ``"p4"``."""

    def __init__(self, label, point=None):
        self.label = label
        self.point = point
        super().__init__(f"input is base point {label}")


class BasisMismatch(IsodynError):
    pass


class UnknownMap(IsodynError):
    pass


class NotTranslation(IsodynError):
    pass
