"""Exception hierarchy shared by all gbx modules."""


class GbxError(Exception):
    """Base class for every error raised by gbx."""


class InvalidArgument(GbxError, ValueError):
    pass


class OutOfRange(GbxError, IndexError):
    """A query fell outside the range a sieve was built for."""


class AuthenticationError(GbxError):
    pass


class NoAlternativePartition(GbxError):
    """a + b has no Goldbach partition other than {a, b}."""


class IntegrityFailure(GbxError):
    """A recovered session key failed the primality/plausibility check."""


class FrameError(GbxError, ValueError):
    """A wire frame could not be decoded."""
