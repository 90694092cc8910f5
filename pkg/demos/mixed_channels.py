"""
Two mixed channels
==================

Two scalar MA(1) channels with coefficients 0.5 and -0.3 are mixed by a
constant unitary. The eigenvalues of the density cross each other, so the
eigenvector sweep has to follow the branches rather than sort them.
"""

import numpy as np

from woldfactor import FrequencyGrid, MASpec, density_from_ma, factorize, round_trip

mix = np.array([[1.0, 1.0j], [1.0j, 1.0]]) / np.sqrt(2.0)
spec = MASpec(np.stack([mix, mix @ np.diag([0.5, -0.3])]))
grid = FrequencyGrid(4096)

result = factorize(density_from_ma(spec, grid))
print("nodes where the sweep permuted columns:", len(result.alignment.permuted_nodes))
print("negative-index energy of the aligned field:", result.causality.negative_energy_ratio)

# innovation covariance from the log integral and from b(0)
print("two-route gap:", result.two_route_gap)
print("sigma =\n", np.round(result.model.sigma, 12))

# the factor equals the generating coefficients up to a constant unitary
rep = round_trip(spec, grid)
print("Procrustes residual:", rep.residual)
print("unitary =\n", np.round(rep.unitary, 6))
