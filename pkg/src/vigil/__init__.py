"""Drowsiness analysis from EEG band powers and camera eye-closure metrics."""

__version__ = "0.1.0"

from .errors import VigilError  # noqa: E402,F401
