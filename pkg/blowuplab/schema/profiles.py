"""Structural type for radial data profiles."""

from __future__ import annotations

from typing import Protocol, runtime_checkable

import numpy as np
from numpy.typing import NDArray


@runtime_checkable
class RadialProfile(Protocol):
    """A radial function with known compact support; ``support`` is None for zero."""

    @property
    def support(self) -> tuple[float, float] | None: ...

    def __call__(self, r: NDArray[np.float64]) -> NDArray[np.float64]: ...
