"""Exception types shared across the engine.

Every error that can surface through the HTTP layer carries an
Elasticsearch-style ``error_type`` slug and an HTTP status code.
"""


class EngineError(Exception):
    """Base class for failures the engine reports to callers."""

    status = 400
    error_type = "engine_error"


class MappingError(EngineError):
    """Invalid index settings or mappings."""

    error_type = "mapping_error"


class DocumentError(EngineError):
    """Document value incompatible with its mapped datatype."""

    error_type = "document_error"


class AnalysisError(EngineError):
    """Unknown analyzer name or invalid analyzer configuration."""

    error_type = "analysis_error"


class ParseError(EngineError):
    """Query body does not match the accepted query grammar."""

    error_type = "parsing_exception"


class UnknownFieldError(ParseError):
    """Query references a field that is not mapped or not indexed."""

    error_type = "unknown_field"


class NotFoundError(EngineError):
    """Index, type, or document does not exist."""

    status = 404
    error_type = "not_found"


class ConflictError(EngineError):
    """Index already exists."""

    error_type = "resource_already_exists"


class CorruptBlobError(EngineError):
    """Persisted blob has a bad header or fails to decompress."""

    error_type = "corrupt_blob"


class ConfigError(EngineError):
    """Engine configuration file or flags are invalid."""

    error_type = "config_error"
