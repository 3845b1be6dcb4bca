"""
Policy Errors
"""

from typing import Optional


class PolicyError(Exception):
    """Exception raised by policies and the external-policy bridge."""

    def __init__(
        self,
        message: str,
        policy: Optional[str] = None,
        recoverable: bool = False,
    ):
        super().__init__(message)
        self.policy = policy
        self.recoverable = recoverable


class ProtocolViolation(PolicyError):
    """Malformed or out-of-sequence bridge message."""
    pass


class BridgeTimeoutError(PolicyError):
    """No reply from the external policy within the per-action timeout."""
    pass
