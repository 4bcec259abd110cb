"""Exception hierarchy.

Every error raised on purpose by the package derives from :class:`MushannifError`.
The CLI maps :class:`UsageError` subclasses to exit code 1 and everything else
to exit code 2.
"""


class MushannifError(Exception):
    """Base class for all package errors."""


class UsageError(MushannifError):
    """Bad parameters supplied by the caller."""


class ConfigError(UsageError, ValueError):
    pass


class DataError(MushannifError):
    """The input data cannot be processed."""


class CorpusNotFoundError(DataError, FileNotFoundError):
    pass


class CorpusDecodeError(DataError, UnicodeError):
    def __init__(self, path, reason=""):
        self.path = str(path)
        msg = f"{self.path}: not valid UTF-8"
        if reason:
            msg += f" ({reason})"
        super().__init__(msg)


class EmptyCorpusError(DataError):
    pass


class StratificationError(DataError):
    def __init__(self, label, count):
        self.label = label
        self.count = count
        super().__init__(
            f"class {label!r} has {count} document(s); stratified split needs at least 2"
        )


class EmptyCollectionError(DataError):
    pass


class DegenerateMarginError(DataError, ZeroDivisionError):
    """A contingency table has a zero marginal, so chi-squared is undefined."""


class DimensionError(DataError, ValueError):
    pass


class UnknownClassError(DataError, KeyError):
    def __str__(self):
        return str(self.args[0]) if self.args else "unknown class"


class DegenerateModelError(DataError):
    pass


class IncompatiblePreprocessingError(DataError):
    def __init__(self, expected, got):
        self.expected = expected
        self.got = got
        super().__init__(
            f"document was preprocessed as [{got}] but the model expects [{expected}]"
        )


class EmptyEvaluationError(DataError):
    pass


class ModelFormatError(DataError):
    pass
