"""Exception types shared across the package.

The CLI maps these onto its exit-code contract, so raising the right
class matters more than the message text.
"""


class ConfigError(ValueError):
    """Invalid hyperparameter configuration (bad value, unknown key)."""


class GraphError(ValueError):
    """A layer graph could not be built or fails validation."""


class ReceptiveFieldError(GraphError):
    """TCN receptive field too small for the pooled sequence length."""


class ShapeInferenceError(GraphError):
    """Layer kind parameters are incompatible with the incoming shape."""


class GraphValidationError(GraphError):
    """A graph was rejected by the validator; carries its diagnostics."""

    def __init__(self, diagnostics):
        self.diagnostics = list(diagnostics)
        super().__init__("; ".join(self.diagnostics))


class FormatError(ValueError):
    """Malformed ETCW/ETRL container."""


class BadMagicError(FormatError):
    pass


class VersionMismatchError(FormatError):
    pass


class TruncatedPayloadError(FormatError):
    pass


class UnknownTensorError(FormatError):
    """Container holds a tensor the declared graph does not expect."""


class MissingParameterError(FormatError):
    """Container lacks a tensor the declared graph requires."""


class TensorShapeError(FormatError):
    """Tensor dims disagree with the declared graph."""


class GeometryError(ValueError):
    """Trial geometry (C, T) does not match the network input."""


class NonFiniteError(ArithmeticError):
    """NaN/Inf appeared in an intermediate buffer; names the layer."""


class CalibrationError(ValueError):
    """Quantization calibration data missing or unusable."""
