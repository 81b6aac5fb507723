"""Shared domain models."""

from blowuplab.schema.geometry import ExteriorGeometry, LightConePoint, TestFunctionParams
from blowuplab.schema.profiles import RadialProfile
from blowuplab.schema.records import FunctionalTrace, LifespanRecord, ScalingFit

__all__ = [
    "ExteriorGeometry",
    "FunctionalTrace",
    "LifespanRecord",
    "LightConePoint",
    "RadialProfile",
    "ScalingFit",
    "TestFunctionParams",
]
