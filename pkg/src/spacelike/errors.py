"""Exception hierarchy.

Every error carries a short ``kind`` string; the CLI copies it into the
``error`` field of a failing report record.
"""


class GeometryError(Exception):
    kind = "geometry-error"


class InputError(GeometryError, ValueError):
    kind = "input-error"


class EvaluationError(GeometryError):
    kind = "evaluation-error"


class NotSpaceLikeError(GeometryError):
    """The induced metric I - J^T J is not positive definite at a point."""

    kind = "not-space-like"

    def __init__(self, x, min_eigenvalue):
        self.x = x
        self.min_eigenvalue = float(min_eigenvalue)
        super().__init__(
            f"graph is not space-like at x={list(map(float, x))}: "
            f"min eigenvalue of induced metric = {self.min_eigenvalue:.6g}"
        )


class SignatureViolationError(GeometryError):
    kind = "signature-violation"


class MeanCurvatureDegenerateError(GeometryError):
    """H is below the threshold where e_H = H^-1 Hvec is defined."""

    kind = "mean-curvature-degenerate"


class UnsupportedCodimensionError(GeometryError):
    kind = "unsupported-codimension"


class ChartError(GeometryError):
    kind = "chart-error"


class PoleError(GeometryError):
    kind = "pole-error"


class ConfigError(Exception):
    """Malformed configuration; ``line``/``column`` are 1-based when known."""

    kind = "config-error"

    def __init__(self, message, line=None, column=None):
        self.message = message
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f"line {line}"
            if column is not None:
                where += f", column {column}"
            where += ": "
        super().__init__(where + message)
