"""Shared result type and error family for special-function evaluators."""

from __future__ import annotations

import sys
from dataclasses import dataclass
from typing import Annotated

from pydantic import Field

MACHINE_EPS = sys.float_info.epsilon

BesselOrder = Annotated[float, Field(ge=0.0)]
"""Nonnegative real order of a modified Bessel function."""


@dataclass(frozen=True)
class EvalResult:
    """
    A computed value together with an absolute error estimate.

    :param value: Computed value.
    :type value: float
    :param abs_error_estimate: Nonnegative bound-style estimate of ``|value - exact|``.
    :type abs_error_estimate: float
    """

    value: float
    abs_error_estimate: float = 0.0

    def __post_init__(self) -> None:
        if not self.abs_error_estimate >= 0.0:
            raise ValueError(f"abs_error_estimate must be >= 0, got {self.abs_error_estimate}")

    def __float__(self) -> float:
        return self.value


class SpecialFunctionError(ValueError):
    """Base class for special-function evaluation failures."""


class DomainError(SpecialFunctionError):
    """Raised when an argument lies outside the evaluator's domain."""


class SpecialFunctionRangeError(SpecialFunctionError):
    """Raised when a result is not representable in double precision."""


class AccuracyError(SpecialFunctionError):
    """Raised when an evaluator cannot reach its accuracy target."""

    def __init__(
        self,
        message: str,
        *,
        partial_value: float,
        abs_error_estimate: float = float("inf"),
    ) -> None:
        super().__init__(message)
        self.partial_value = partial_value
        self.abs_error_estimate = abs_error_estimate
