"""Exception types shared across the package."""


class QuiverError(Exception):
    """Base class for all package-specific errors."""


class ParseError(QuiverError, ValueError):
    """Quiver text, tree input, or a certificate document is malformed."""


class InvariantViolation(QuiverError, RuntimeError):
    """An internal invariant failed (sign-coherence, coframe isomorphism, ...).

    Raised only for states the theory forbids; it signals an implementation
    bug upstream, never bad user input.
    """


class InexactDivision(InvariantViolation):
    """A Laurent-polynomial division that had to be exact was not."""


class CertificateError(QuiverError, ValueError):
    """A certificate failed to replay against the quiver it claims to certify."""


class SynthesisError(QuiverError, RuntimeError):
    """Sequence synthesis exhausted its candidate rules and fallbacks."""
