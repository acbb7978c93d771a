"""Shared exception types."""


class VigilError(Exception):
    """Base class for every error raised by this package."""


class TimestampRegression(VigilError):
    """A time-ordered stream received a timestamp earlier than the previous one."""
