"""File formats: matrices, band operators, fields, regions, point sets and
convergence reports.

Every float is written with 17 significant digits and infinite distances as
the string ``"inf"``, so identical inputs always give identical bytes.
"""

import csv
import io as _io
import json
import math
from pathlib import Path

import numpy as np

from .exceptions import InputError
from .operators import BandOperator, Const, Periodic, Perturbed


def fmt(x):
    x = float(x)
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    if math.isnan(x):
        raise InputError("NaN cannot be serialized")
    return format(x, ".17g")


def _encode(obj, out):
    if obj is None or isinstance(obj, (bool, np.bool_)):
        out.append(json.dumps(None if obj is None else bool(obj)))
    elif isinstance(obj, (int, np.integer)):
        out.append(str(int(obj)))
    elif isinstance(obj, (float, np.floating)):
        s = fmt(obj)
        out.append(json.dumps(s) if s.endswith("inf") else s)
    elif isinstance(obj, str):
        out.append(json.dumps(obj))
    elif isinstance(obj, dict):
        out.append("{")
        for k, (key, val) in enumerate(obj.items()):
            if k:
                out.append(", ")
            out.append(json.dumps(str(key)) + ": ")
            _encode(val, out)
        out.append("}")
    elif isinstance(obj, (list, tuple, np.ndarray)):
        out.append("[")
        for k, val in enumerate(obj):
            if k:
                out.append(", ")
            _encode(val, out)
        out.append("]")
    else:
        raise InputError(f"cannot serialize {type(obj).__name__}")


def dumps(obj):
    """JSON text with 17-significant-digit floats and ``"inf"`` strings."""
    out = []
    _encode(obj, out)
    return "".join(out) + "\n"


def write_json(path, obj):
    Path(path).write_text(dumps(obj))


def read_json(path):
    try:
        return json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc


def parse_complex(x):
    """A number or a ``[re, im]`` pair."""
    if isinstance(x, (list, tuple)):
        if len(x) != 2:
            raise InputError(f"complex value must be [re, im], got {x!r}")
        return complex(float(x[0]), float(x[1]))
    if isinstance(x, (int, float)):
        return complex(x)
    raise InputError(f"bad complex value {x!r}")


# matrices -----------------------------------------------------------------


def matrix_to_dict(a):
    a = np.asarray(a, dtype=complex)
    return {
        "rows": a.shape[0],
        "cols": a.shape[1],
        "re": a.real.ravel().tolist(),
        "im": a.imag.ravel().tolist(),
    }


def matrix_from_dict(d):
    try:
        rows, cols = int(d["rows"]), int(d["cols"])
        re = np.asarray(d["re"], dtype=float)
        im = np.asarray(d.get("im", np.zeros(rows * cols)), dtype=float)
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"bad matrix object: {exc}") from exc
    if re.size != rows * cols or im.size != rows * cols:
        raise InputError("matrix entry count does not match rows * cols")
    return (re + 1j * im).reshape(rows, cols)


def write_matrix(path, a):
    write_json(path, matrix_to_dict(a))


def read_matrix(path):
    return matrix_from_dict(read_json(path))


# band operators -------------------------------------------------------------


def rule_from_dict(d):
    if "const" in d:
        return Const(parse_complex(d["const"]))
    if "periodic" in d:
        return Periodic(tuple(parse_complex(v) for v in d["periodic"]))
    if "perturbed" in d:
        p = d["perturbed"]
        support = {int(s["pos"]): parse_complex(s["value"]) for s in p.get("support", [])}
        return Perturbed(parse_complex(p["base"]), support)
    raise InputError(f"unknown coefficient rule {d!r}")


def _cplx(z):
    return z.real if z.imag == 0 else [z.real, z.imag]


def rule_to_dict(rule):
    if isinstance(rule, Const):
        return {"const": _cplx(complex(rule.value))}
    if isinstance(rule, Periodic):
        return {"periodic": [_cplx(v) for v in rule.values]}
    if isinstance(rule, Perturbed):
        support = [{"pos": k, "value": _cplx(v)} for k, v in sorted(rule.support.items())]
        return {"perturbed": {"base": _cplx(complex(rule.base)), "support": support}}
    raise InputError(f"cannot serialize rule {rule!r}")


def band_from_dict(d):
    try:
        diags = {int(e["offset"]): rule_from_dict(e["rule"]) for e in d["diagonals"]}
        return BandOperator(diags, int(d["bandwidth"]) if "bandwidth" in d else None)
    except (KeyError, TypeError) as exc:
        raise InputError(f"bad band operator description: {exc}") from exc


def band_to_dict(band):
    return {
        "bandwidth": band.bandwidth,
        "diagonals": [
            {"offset": k, "rule": rule_to_dict(r)} for k, r in sorted(band.diagonals.items())
        ],
    }


# fields, regions, point sets ---------------------------------------------------


def field_csv(fld):
    buf = _io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["re", "im", "value"])
    for z, v in zip(fld.grid.nodes.ravel(), fld.values.ravel()):
        w.writerow([fmt(z.real), fmt(z.imag), fmt(v)])
    return buf.getvalue()


def write_field_csv(path, fld):
    Path(path).write_text(field_csv(fld))


def read_field_csv(path):
    """Returns ``(nodes, values)`` as flat arrays in file order."""
    with open(path, newline="") as fh:
        rows = list(csv.DictReader(fh))
    nodes = np.array([float(r["re"]) + 1j * float(r["im"]) for r in rows])
    values = np.array([float(r["value"]) for r in rows])
    return nodes, values


def _pairs(points):
    return [[z.real, z.imag] for z in np.asarray(points, dtype=complex)]


def region_to_dict(region):
    return {
        "level": region.level,
        "closedness": region.closedness,
        "points": _pairs(region.points),
        "boundary": [_pairs(line) for line in region.boundary],
    }


def write_region(path, region):
    write_json(path, region_to_dict(region))


def points_to_dict(points):
    return {"points": _pairs(points)}


def read_points(path):
    """Points of a point-set or region file."""
    d = read_json(path)
    if "points" not in d:
        raise InputError(f"{path} has no 'points' entry")
    pts = d["points"]
    if len(pts) == 0:
        return np.zeros(0, dtype=complex)
    arr = np.asarray(pts, dtype=float)
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise InputError(f"{path}: points must be [re, im] pairs")
    return arr[:, 0] + 1j * arr[:, 1]


# reports ---------------------------------------------------------------------


def residuals_csv(report):
    buf = _io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["n", "re", "im", "residual"])
    for n, row in zip(report.n_list, report.residuals):
        for z, r in zip(report.sample_points, row):
            w.writerow([n, fmt(z.real), fmt(z.imag), fmt(r)])
    return buf.getvalue()


def dh_csv(n_list, eps_list, table):
    buf = _io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["n", "eps", "dh"])
    for n, row in zip(n_list, table):
        for eps, d in zip(eps_list, row):
            w.writerow([n, fmt(eps), fmt(d)])
    return buf.getvalue()


def read_dh_csv(path):
    with open(path, newline="") as fh:
        return [(int(r["n"]), float(r["eps"]), parse_float_token(r["dh"])) for r in csv.DictReader(fh)]


def parse_float_token(s):
    return math.inf if s == "inf" else float(s)


def write_report(outdir, report):
    outdir = Path(outdir)
    write_json(outdir / "report.json", report.to_dict())
    (outdir / "residuals.csv").write_text(residuals_csv(report))
    (outdir / "dh.csv").write_text(dh_csv(report.n_list, report.eps_list, report.dh))
