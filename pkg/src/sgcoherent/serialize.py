"""CSV / JSON writers for results.

CSV: ``#``-prefixed metadata lines (``# key: <json value>``), a header row,
then one record per line with 17 significant digits and LF endings.
JSON: a single object ``{"meta": {...}, "data": {column: [...]}}`` with the
same columns as the CSV, flattened in row-major order.
"""

import json
import math

import numpy as np

from .analysis import MandelSeries, PhaseGrid, PhotonDistribution
from .states import FockState
from .waveguide import WaveguideField

FORMATS = ("csv", "json")


def _clean(value):
    if isinstance(value, (np.floating, float)):
        value = float(value)
        return value if math.isfinite(value) else None
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.ndarray):
        return [_clean(v) for v in value.tolist()]
    if isinstance(value, dict):
        return {k: _clean(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_clean(v) for v in value]
    return value


def to_table(result):
    """Columns (ordered dict of 1-D arrays) and result-specific metadata."""
    if isinstance(result, PhotonDistribution):
        return {"n": result.n, "p": result.probs}, {"tail_bound": result.tail_bound}
    if isinstance(result, PhaseGrid):
        re, im = np.meshgrid(result.re, result.im)
        cols = {"re": re.ravel(), "im": im.ravel(), "q": result.values.ravel()}
        meta = {
            "shape": [int(result.im.size), int(result.re.size)],
            "re_range": list(result.re_range),
            "im_range": list(result.im_range),
            "mass": result.mass,
        }
        return cols, meta
    if isinstance(result, MandelSeries):
        meta = {
            "m": result.m,
            "tau_star": result.tau_star,
            "q_star": result.q_star,
            "zero_crossing": result.zero_crossing,
        }
        return {"tau": result.tau, "q": result.q}, meta
    if isinstance(result, FockState):
        meta = {
            "recipe": result.recipe.value,
            "param": result.param,
            "initial_m": result.initial_m,
            "truncation": result.truncation,
            "tail_bound": result.tail_bound,
        }
        c = result.coeffs
        return {"n": np.arange(c.size), "re": c.real, "im": c.imag}, meta
    if isinstance(result, WaveguideField):
        a = result.amplitudes
        cols = {"n": np.arange(a.size), "re": a.real, "im": a.imag, "intensity": result.intensity}
        meta = {"z": result.z, "excited_site": result.excited_site,
                "input_amplitude": result.input_amplitude}
        return cols, meta
    if isinstance(result, tuple) and len(result) == 2:
        return result
    raise TypeError(f"cannot serialise {type(result).__name__}")


def _fmt(v):
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    v = float(v)
    if not math.isfinite(v):
        return "nan"
    return format(v, ".17g")


def serialize(result, fmt="csv", meta=None):
    """Encode ``result`` as CSV or JSON bytes."""
    if fmt not in FORMATS:
        raise ValueError(f"format must be one of {FORMATS}")
    cols, extra = to_table(result)
    full_meta = dict(meta or {})
    full_meta.update(extra)
    full_meta = _clean(full_meta)
    if fmt == "json":
        doc = {"meta": full_meta, "data": {k: _clean(np.asarray(v)) for k, v in cols.items()}}
        return (json.dumps(doc, allow_nan=False) + "\n").encode()

    lines = [f"# {k}: {json.dumps(v)}" for k, v in full_meta.items()]
    names = list(cols)
    lines.append(",".join(names))
    arrays = [np.asarray(cols[k]) for k in names]
    for row in zip(*arrays):
        lines.append(",".join(_fmt(v) for v in row))
    return ("\n".join(lines) + "\n").encode()


def read_csv(data):
    """Parse CSV bytes from :func:`serialize` back into ``(meta, columns)``."""
    meta, header, rows = {}, None, []
    for line in data.decode().splitlines():
        if line.startswith("#"):
            key, _, value = line[1:].strip().partition(": ")
            meta[key] = json.loads(value)
        elif header is None:
            header = line.split(",")
        else:
            rows.append([float(v) for v in line.split(",")])
    arr = np.array(rows).reshape(-1, len(header))
    return meta, {name: arr[:, i] for i, name in enumerate(header)}
