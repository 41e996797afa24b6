"""Harmonically forced single-degree-of-freedom oscillator.

The non-dimensional frequency response is 1 / (1 - beta^2 + 2i zeta beta)
with beta the forcing/natural frequency ratio and zeta the viscous damping
factor.  The scalar output used throughout is the magnitude |H|.
"""

from __future__ import annotations

import numpy as np

from ..errors import EvaluationError


def sho_response(beta, zeta) -> np.ndarray:
    """|H(beta, zeta)| = 1 / sqrt((1 - beta^2)^2 + (2 zeta beta)^2)."""
    beta = np.asarray(beta, dtype=float)
    zeta = np.asarray(zeta, dtype=float)
    denom_sq = (1.0 - beta * beta) ** 2 + (2.0 * zeta * beta) ** 2
    if np.any(denom_sq == 0.0):
        raise EvaluationError("undamped response at resonance (beta = +-1, zeta = 0)")
    return 1.0 / np.sqrt(denom_sq)
