# core/errors.py
from __future__ import annotations


class AwStarError(Exception):
    """Base class for every error raised by the engines."""


class InputError(AwStarError, ValueError):
    """Malformed input or a violated precondition (CLI exit code 2)."""


class VerificationError(AwStarError, RuntimeError):
    """A postcondition failed to hold. Always a bug (CLI exit code 1)."""
