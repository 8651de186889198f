"""This module defines custom data types used throughout the application.

Type Aliases:
    FloatArray: A numpy array of float64 values.
    RealFunction: A real function of a real variable, vectorized over numpy arrays.
    JumpDensityFunction: Density of the Lévy measure on one half-line, as a function of |y| > 0.
    JsonType: Represents any JSON-compatible value written to reports and manifests.
"""

from typing import Any, Callable, TypeAlias

import numpy as np
import numpy.typing as npt


FloatArray: TypeAlias = npt.NDArray[np.float64]

RealFunction: TypeAlias = Callable[[FloatArray], FloatArray]

JumpDensityFunction: TypeAlias = Callable[[FloatArray], FloatArray]

JsonType: TypeAlias = Any
