"""
Simulation Errors
"""

from typing import Optional


class ScenarioError(Exception):
    """Base error for scenario definition and episode stepping."""

    def __init__(self, message: str, scenario_id: Optional[str] = None):
        super().__init__(message)
        self.scenario_id = scenario_id


class InvalidScenarioError(ScenarioError):
    """Scenario geometry or parameters are inconsistent (start on an obstacle, goal off-road...)."""
    pass


class StepAfterTerminationError(ScenarioError):
    """``step`` was called on a world whose episode already ended."""
    pass
