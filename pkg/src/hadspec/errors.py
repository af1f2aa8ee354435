"""Exception hierarchy shared by all modules.

Domain errors are precondition violations of a mathematical criterion
(exit status 1 from the CLI); config and resource errors are operational
(exit status 2).
"""


class HadspecError(Exception):
    pass


class DomainError(HadspecError, ValueError):
    pass


class SizeMismatchError(DomainError):
    pass


class CoprimalityError(DomainError):
    pass


class NotMemberError(DomainError):
    pass


class ConfigError(HadspecError):
    pass


class ResourceError(HadspecError):
    pass
