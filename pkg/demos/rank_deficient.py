"""
A rank-one process in two dimensions
====================================

Both coordinates carry the same scalar MA(1) signal, so the density has
rank one everywhere. The factor is a 2 x 1 column and the inverse is a
left inverse.
"""

import numpy as np

from woldfactor import FrequencyGrid, MASpec, density_from_ma, detect_rank, factorize

u = np.array([[1.0], [1.0]]) / np.sqrt(2.0)
f = density_from_ma(MASpec(np.stack([u, 0.5 * u])), FrequencyGrid(4096))

rank = detect_rank(f)
print("rank", rank.rank, "agreement", rank.agreement)

result = factorize(f)
print("b(0) =", np.round(result.model.b[0, :, 0].real, 12))
print("b(1) =", np.round(result.model.b[1, :, 0].real, 12))
print("max |psi phi - 1| =", result.verification.inverse_deviation)

# Sigma is singular; the determinant check uses the nonzero eigenvalue
print("sigma =\n", np.round(result.model.sigma.real, 12))
print("KS surrogate:", result.ks.lhs, "vs", result.ks.rhs)
