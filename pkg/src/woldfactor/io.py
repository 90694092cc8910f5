"""JSON and CSV formats.

Complex numbers are ``[re, im]`` pairs, matrices row-major nested lists.
Floats are written with Python's shortest round-trip repr (at most 17
significant digits); CSV uses ``%.17g``.
"""
import csv
import json
import math

import numpy as np

from .errors import InputFormatError
from .spectra import CovarianceSequence, FrequencyGrid, MASpec, SpectralDensityField
from .wold import WoldModel


def sanitize(obj):
    """Convert numpy scalars/arrays and non-finite floats into JSON-safe values."""
    if isinstance(obj, dict):
        return {str(k): sanitize(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [sanitize(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return sanitize(obj.tolist())
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        return x if math.isfinite(x) else str(x)
    if isinstance(obj, complex):
        return [sanitize(obj.real), sanitize(obj.imag)]
    return obj


def complex_to_json(z):
    z = complex(z)
    return [z.real, z.imag]


def matrix_to_json(m):
    m = np.asarray(m, dtype=complex)
    return [[complex_to_json(z) for z in row] for row in m]


def _complex_from_json(v, where):
    if isinstance(v, bool):
        raise InputFormatError(f"{where}: expected a number or [re, im], got {v!r}")
    if isinstance(v, (int, float)):
        return complex(v)
    if isinstance(v, list) and len(v) == 2 and all(
            isinstance(x, (int, float)) and not isinstance(x, bool) for x in v):
        return complex(v[0], v[1])
    raise InputFormatError(f"{where}: expected a number or [re, im], got {v!r}")


def matrix_from_json(obj, where="matrix"):
    if not isinstance(obj, list) or not obj or not all(isinstance(r, list) for r in obj):
        raise InputFormatError(f"{where}: expected a non-empty list of rows")
    width = len(obj[0])
    out = np.empty((len(obj), width), dtype=complex)
    for i, row in enumerate(obj):
        if len(row) != width:
            raise InputFormatError(f"{where}[{i}]: row has {len(row)} entries, expected {width}")
        for j, v in enumerate(row):
            out[i, j] = _complex_from_json(v, f"{where}[{i}][{j}]")
    return out


def _matrices(obj, key, where):
    if key not in obj:
        raise InputFormatError(f"{where}: missing field {key!r}")
    seq = obj[key]
    if not isinstance(seq, list) or not seq:
        raise InputFormatError(f"{where}.{key}: expected a non-empty list of matrices")
    mats = [matrix_from_json(m, f"{where}.{key}[{i}]") for i, m in enumerate(seq)]
    if len({m.shape for m in mats}) != 1:
        raise InputFormatError(f"{where}.{key}: matrices have different shapes")
    return np.stack(mats)


def _check_dims(obj, arr, where, rank_axis=None):
    d = obj.get("dimension")
    if d is not None and d != arr.shape[1]:
        raise InputFormatError(f"{where}.dimension = {d} but matrices have {arr.shape[1]} rows")
    if rank_axis is not None and obj.get("rank") is not None and obj["rank"] != arr.shape[rank_axis]:
        raise InputFormatError(f"{where}.rank = {obj['rank']} but matrices have {arr.shape[rank_axis]} columns")


def load_json(path):
    """Read a JSON file; syntax errors become :class:`InputFormatError` with line and column."""
    try:
        with open(path) as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise InputFormatError(f"{path}: invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}")
    except OSError as exc:
        raise InputFormatError(f"{path}: {exc.strerror}")


def dump_json(obj, path):
    with open(path, "w") as fh:
        json.dump(sanitize(obj), fh, indent=1)
        fh.write("\n")


def ma_spec_to_json(spec):
    return {
        "kind": "ma",
        "dimension": spec.dimension,
        "rank": spec.rank,
        "coefficients": [matrix_to_json(b) for b in spec.coefficients],
    }


def ma_spec_from_json(obj, where="spec"):
    b = _matrices(obj, "coefficients", where)
    _check_dims(obj, b, where, rank_axis=2)
    try:
        return MASpec(b)
    except ValueError as exc:
        raise InputFormatError(f"{where}: {exc}")


def covariance_to_json(cov):
    return {
        "kind": "covariance",
        "dimension": cov.dimension,
        "lags": [matrix_to_json(c) for c in cov.lags],
    }


def covariance_from_json(obj, where="covariance"):
    c = _matrices(obj, "lags", where)
    _check_dims(obj, c, where)
    try:
        return CovarianceSequence(c)
    except ValueError as exc:
        raise InputFormatError(f"{where}: {exc}")


def density_to_json(f):
    return {
        "kind": "density",
        "dimension": f.dimension,
        "grid_size": f.grid.size,
        "values": [matrix_to_json(v) for v in f.values],
    }


def density_from_json(obj, where="density"):
    v = _matrices(obj, "values", where)
    _check_dims(obj, v, where)
    n = obj.get("grid_size", v.shape[0])
    if n != v.shape[0]:
        raise InputFormatError(f"{where}.grid_size = {n} but {v.shape[0]} values given")
    try:
        return SpectralDensityField(FrequencyGrid(v.shape[0]), v)
    except ValueError as exc:
        raise InputFormatError(f"{where}: {exc}")


def source_kind(obj):
    """``"ma"``, ``"covariance"`` or ``"density"`` from the ``kind`` field or the keys present."""
    if not isinstance(obj, dict):
        raise InputFormatError("top level must be a JSON object")
    kind = obj.get("kind")
    if kind in ("ma", "covariance", "density"):
        return kind
    for key, name in (("coefficients", "ma"), ("lags", "covariance"), ("values", "density")):
        if key in obj:
            return name
    raise InputFormatError("cannot tell the input kind: expected 'coefficients', 'lags' or 'values'")


def model_to_json(model, tolerances=None, reports=None):
    return sanitize({
        "kind": "wold_model",
        "dimension": model.dimension,
        "rank": model.rank,
        "grid_size": model.grid_size,
        "gauge": model.gauge,
        "b": [matrix_to_json(b) for b in model.b],
        "c_psi": [matrix_to_json(c) for c in model.c_psi],
        "sigma": matrix_to_json(model.sigma),
        "tail_energy": {"b": model.b_tail_energy, "c_psi": model.c_psi_tail_energy},
        "tolerances": tolerances or {},
        "reports": reports or {},
    })


def model_from_json(obj, where="model"):
    if not isinstance(obj, dict):
        raise InputFormatError(f"{where}: top level must be a JSON object")
    b = _matrices(obj, "b", where)
    c = _matrices(obj, "c_psi", where)
    _check_dims(obj, b, where, rank_axis=2)
    if "sigma" in obj:
        sigma = matrix_from_json(obj["sigma"], f"{where}.sigma")
    else:
        sigma = b[0] @ b[0].conj().T
    tails = obj.get("tail_energy", {})
    try:
        return WoldModel(b=b, c_psi=c, sigma=sigma, grid_size=int(obj.get("grid_size", 0)),
                         gauge=obj.get("gauge", "causal"),
                         b_tail_energy=float(tails.get("b", 0.0)),
                         c_psi_tail_energy=float(tails.get("c_psi", 0.0)))
    except ValueError as exc:
        raise InputFormatError(f"{where}: {exc}")


def path_header(d):
    return ["t"] + [f"x{i}_{part}" for i in range(1, d + 1) for part in ("re", "im")]


def write_path_csv(values, path, t=None):
    """Write ``T x d`` complex values, one row per time, ``t`` defaulting to ``1..T``."""
    values = np.asarray(values, dtype=complex)
    t = np.arange(1, values.shape[0] + 1) if t is None else t
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(path_header(values.shape[1]))
        for ti, row in zip(t, values):
            cells = [f"{x:.17g}" for z in row for x in (z.real, z.imag)]
            w.writerow([int(ti)] + cells)


def read_path_csv(path):
    """Return ``(t, values)`` from a path CSV."""
    try:
        with open(path, newline="") as fh:
            rows = list(csv.reader(fh))
    except OSError as exc:
        raise InputFormatError(f"{path}: {exc.strerror}")
    if not rows:
        raise InputFormatError(f"{path}: empty file")
    header = [h.strip() for h in rows[0]]
    if not header or header[0] != "t" or len(header) % 2 != 1:
        raise InputFormatError(f"{path}: header must be 't, x1_re, x1_im, ...'")
    d = (len(header) - 1) // 2
    if header != path_header(d):
        raise InputFormatError(f"{path}: unexpected header {header}")
    t = np.empty(len(rows) - 1, dtype=int)
    x = np.empty((len(rows) - 1, d), dtype=complex)
    for i, row in enumerate(rows[1:]):
        if len(row) != len(header):
            raise InputFormatError(f"{path}: line {i + 2} has {len(row)} fields, expected {len(header)}")
        try:
            t[i] = int(row[0])
            nums = np.array([float(v) for v in row[1:]])
        except ValueError:
            raise InputFormatError(f"{path}: line {i + 2} is not numeric")
        x[i] = nums[0::2] + 1j * nums[1::2]
    return t, x


def prediction_records(result):
    """One record per horizon: ``{"t", "h", "value", "error_covariance"}``."""
    return [
        {
            "t": result.origin + s + 1,
            "h": s + 1,
            "value": [complex_to_json(z) for z in result.values[s]],
            "error_covariance": matrix_to_json(result.error_covariances[s]),
        }
        for s in range(result.horizon)
    ]
