"""Exception types shared across the archive pipeline."""


class ChronolensError(Exception):
    """Base class for all archive errors."""

    code = "error"


class MalformedTimestamp(ChronolensError):
    """A document timestamp could not be parsed or lies outside the accepted range."""

    code = "malformed_timestamp"


class MalformedInput(ChronolensError):
    """A corpus line could not be decoded into a raw document."""

    code = "malformed_input"

    def __init__(self, message: str, line_no: int | None = None):
        super().__init__(message)
        self.line_no = line_no


class EmptyTrainingSet(ChronolensError):
    """Tagger training was requested with no training sequences."""

    code = "empty_training_set"


class EmptyQuery(ChronolensError):
    """A search query contained no indexable term after stopword removal."""

    code = "empty_query"


class UnknownEntity(ChronolensError):
    """The requested entity id is not present in the archive."""

    code = "unknown_entity"


class InvalidSpan(ChronolensError):
    """A date span was unparsable or starts after it ends."""

    code = "invalid_span"


class InvalidParameter(ChronolensError):
    """A request parameter has an out-of-range or unrecognized value."""

    code = "invalid_parameter"
