"""
Policies
Scripted controllers for closed-loop evaluation and the external-policy
bridge.
"""

from .base import BasePolicy, PolicyInput, PolicyKind, PrivilegedBundle
from .errors import BridgeTimeoutError, PolicyError, ProtocolViolation
from .scripted import (
    ForecastAvoidPolicy,
    PixelAvoidPolicy,
    PurePursuitPolicy,
    StraightPolicy,
    bearing_right,
    create_policy,
)

__all__ = [
    "BasePolicy",
    "BridgeTimeoutError",
    "ForecastAvoidPolicy",
    "PixelAvoidPolicy",
    "PolicyError",
    "PolicyInput",
    "PolicyKind",
    "PrivilegedBundle",
    "ProtocolViolation",
    "PurePursuitPolicy",
    "StraightPolicy",
    "bearing_right",
    "create_policy",
]
