"""
Minimum-phase factor of a scalar moving average
================================================

Start from X_t = xi_t + 0.5 xi_{t-1}, sample its spectral density on a
grid and recover the Wold coefficients, the inverse filter and the
innovation variance.
"""

import numpy as np

from woldfactor import FrequencyGrid, MASpec, density_from_ma, factorize

# the density is |1 + 0.5 exp(-iw)|^2 / (2 pi)
grid = FrequencyGrid(4096)
f = density_from_ma(MASpec([[[1.0]], [[0.5]]]), grid)

result = factorize(f)
print("checks:", result.checks)

# Wold coefficients b(j): expect 1, 0.5, then zeros
print("b(0..3) =", np.round(result.model.b[:4, 0, 0].real, 12))

# the inverse filter is the geometric series of 1/(1 + 0.5 z)
print("c_psi(0..5) =", np.round(result.model.c_psi[:6, 0, 0].real, 12))

# one-step prediction error variance, and the same number from the log integral
print("sigma =", result.model.sigma[0, 0].real)
print("Kolmogorov-Szego:", result.ks.lhs, result.ks.rhs)

# the same density written with the root outside the unit disc
flipped = factorize(density_from_ma(MASpec([[[0.5]], [[1.0]]]), grid))
print("flipped parametrization gives b(0..1) =", np.round(flipped.model.b[:2, 0, 0].real, 12))
