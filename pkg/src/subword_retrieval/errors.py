"""Exception hierarchy shared by all modules."""


class RetrievalToolkitError(Exception):
    """Base class for every error raised by this package."""


class FormatError(RetrievalToolkitError, ValueError):
    """Malformed input file. Carries the offending path and line number when known."""

    def __init__(self, message, path=None, line_no=None):
        self.path = path
        self.line_no = line_no
        where = ""
        if path is not None:
            where = f"{path}"
            if line_no is not None:
                where += f":{line_no}"
            where += ": "
        elif line_no is not None:
            where = f"line {line_no}: "
        super().__init__(where + message)


class DuplicateIdError(FormatError):
    def __init__(self, identifier, path=None, line_no=None, kind="id"):
        self.identifier = identifier
        super().__init__(f"duplicate {kind} {identifier!r}", path=path, line_no=line_no)


class ConfigError(RetrievalToolkitError, ValueError):
    """Invalid combination of options (tokenizer config, experiment config, ...)."""


class FingerprintMismatchError(RetrievalToolkitError):
    """Query-side tokenizer differs from the one the index was built with."""


class IndexFormatError(RetrievalToolkitError):
    """Missing file, bad magic header or unsupported format version."""


class ChecksumError(IndexFormatError):
    pass


class ContractViolation(RetrievalToolkitError, ValueError):
    """A precondition of a numeric routine was not met (e.g. df outside [1, N])."""


class InvariantViolation(RetrievalToolkitError):
    """An internal consistency check failed (index counts, rank order, ...)."""
