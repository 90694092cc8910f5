"""
Noise recovery and prediction on a simulated path
=================================================

Simulate the mixed two-channel process, run the inverse filter over the
path to get the fundamental noise back, then compare one-step prediction
errors with the innovation covariance.
"""

import numpy as np

from woldfactor import (
    FrequencyGrid,
    MASpec,
    SimulationConfig,
    density_from_ma,
    factorize,
    ma_sample_path,
    predict,
    recover_noise,
    rolling_predictions,
)
from woldfactor.simulate import procrustes_unitary

mix = np.array([[1.0, 1.0j], [1.0j, 1.0]]) / np.sqrt(2.0)
spec = MASpec(np.stack([mix, mix @ np.diag([0.5, -0.3])]))
model = factorize(density_from_ma(spec, FrequencyGrid(1024))).model

T = 20000
path = ma_sample_path(spec, SimulationConfig(T + model.inverse_trunc, seed=7))
xi = recover_noise(model, path)

# the recovered noise is white with identity covariance
n = xi.values.shape[0]
print("empirical cov(xi) =\n", np.round(xi.values.T @ xi.values.conj() / n, 3))

# the generating noise is known here; it matches xi_hat once the constant
# unitary relating b_hat to the generating coefficients is taken out
pad = np.zeros_like(model.b)
pad[: spec.order + 1] = spec.coefficients
q = procrustes_unitary(model.b, pad)
print("max |xi_hat - Q xi| =", np.abs(xi.values - path.noise[model.inverse_trunc:] @ q.T).max())

# one-step prediction errors have covariance sigma
times, pred = rolling_predictions(model, xi, 1)
keep = times <= path.length
err = path.values[times[keep] - 1] - pred[keep]
print("empirical error cov =\n", np.round(err.T @ err.conj() / err.shape[0], 3))
print("sigma =\n", np.round(model.sigma, 3))

# forecasts from the end of the path and their error covariances
res = predict(model, xi, 3)
print("traces of E_1..E_3:", np.trace(res.error_covariances, axis1=1, axis2=2).real)
