"""Typed synchronous client for the planverify HTTP scoring service."""

from .client import (
    BadRequest,
    Client,
    ClientConfig,
    ClientError,
    SpecInvalid,
    TooManyCandidates,
    Transport,
)

__version__ = "0.1.0"

__all__ = [
    "BadRequest",
    "Client",
    "ClientConfig",
    "ClientError",
    "SpecInvalid",
    "TooManyCandidates",
    "Transport",
]
