"""
When the eigenvector field is not causal
========================================

The field u(w) = (1, exp(iw)) / sqrt(2) has half its energy at a negative
Fourier index. The Hardy-space check flags it, and the factorization
refuses to proceed unless forced.
"""

import numpy as np

from woldfactor import FrequencyGrid, SpectralDensityField, align_phases, factorize, hinfty_check
from woldfactor.eigenfield import EigenField

grid = FrequencyGrid(256)
w = grid.nodes
u = np.stack([np.ones(256), np.exp(1j * w)], axis=1)[:, :, None] / np.sqrt(2)
field = EigenField(grid, np.ones((256, 1)), u, 1)

raw = hinfty_check(field)
print("unaligned: ratio %.3f, passed %s" % (raw.negative_energy_ratio, raw.passed))

aligned, report = align_phases(field)
after = hinfty_check(aligned)
print("aligned: ratio %.3f, wraparound gap %.3f, passed %s"
      % (after.negative_energy_ratio, after.wraparound_gap, after.passed))

# the rank-one density u u* inherits the problem
f = SpectralDensityField(grid, np.einsum("mi,mj->mij", u[:, :, 0], u[:, :, 0].conj()))
result = factorize(f)
print("conditions:", result.conditions, "model built:", result.model is not None)

# a density that vanishes on a band fails log-integrability instead
v = np.where(np.abs(FrequencyGrid(1024).nodes) < 0.01, 0.0, 1.0)
band = factorize(SpectralDensityField(FrequencyGrid(1024), v))
print("band-limited:", band.conditions)
