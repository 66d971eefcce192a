"""Exception hierarchy.

Every error carries a stable ``code`` string and the process ``exit_status``
the command-line front end uses when the error escapes a subcommand.
"""


class LnecError(Exception):
    code = "lnec_error"
    exit_status = 4

    def to_dict(self):
        return {"code": self.code, "message": str(self)}


class ValidationError(LnecError, ValueError):
    """Input rejected before any computation started."""

    code = "validation_error"
    exit_status = 3


class NetworkFormatError(ValidationError):
    code = "network_format"


class DuplicateIdError(ValidationError):
    code = "duplicate_id"


class UnknownNodeError(ValidationError, KeyError):
    code = "unknown_node"

    def __str__(self):
        return ValidationError.__str__(self)


class UnknownEdgeError(ValidationError, KeyError):
    code = "unknown_edge"

    def __str__(self):
        return ValidationError.__str__(self)


class CycleError(ValidationError):
    code = "cycle"


class SourceInputError(ValidationError):
    code = "source_has_input"


class SinkOutputError(ValidationError):
    code = "sink_has_output"


class ParameterError(ValidationError):
    """A numeric parameter (rate, radius, redundancy, field order) out of range."""

    code = "parameter_range"


class FieldError(ValidationError):
    code = "field"


class DimensionError(ValidationError):
    code = "dimension_mismatch"


class NotDecodableError(LnecError):
    code = "not_decodable"
    exit_status = 4


class ConstructionError(LnecError):
    code = "construction_exhausted"
    exit_status = 4

    def __init__(self, message, attempts=0):
        super().__init__(message)
        self.attempts = attempts

    def to_dict(self):
        d = super().to_dict()
        d["attempts"] = self.attempts
        return d


class DecodingError(LnecError):
    code = "decoding_failed"
    exit_status = 4


class NoSolutionError(DecodingError):
    code = "no_solution"


class AmbiguousDecodingError(DecodingError):
    code = "ambiguous"


class ScanGuardError(LnecError):
    """An exhaustive scan would exceed its size guard."""

    code = "scan_guard"
    exit_status = 5
