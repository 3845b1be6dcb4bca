"""
Visual Forecast Nav

Deterministic navigation simulator with visual forecasting overlays.
Forecast pedestrians, paint the forecasts onto segmentation observations,
and measure how much the foresight helps closed-loop avoidance.
"""

__version__ = "1.0.0"
