"""Exception types shared across the package.

The CLI maps these onto exit codes: usage errors exit 1, validation and
format errors exit 2, everything else exits 3.
"""


class TagTopicError(Exception):
    """Base class for all package errors."""


class CorpusFormatError(TagTopicError):
    """A corpus/tag/score file could not be parsed."""

    def __init__(self, message, path=None, line=None):
        loc = ""
        if path is not None:
            loc += f"{path}"
        if line is not None:
            loc += f":{line}"
        super().__init__(f"{loc}: {message}" if loc else message)
        self.path = path
        self.line = line


class ValidationError(TagTopicError):
    """Input data violates a structural invariant (ids, duplicates, shapes)."""


class ConfigError(TagTopicError):
    """A configuration value is out of its legal range."""


class EntryLookupError(TagTopicError, KeyError):
    """A (word, document) pair is not an entry of the corpus."""
