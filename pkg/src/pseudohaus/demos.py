"""Named demos reproducing the worked examples.

Each demo writes its artifacts into ``outdir`` and returns a summary dict
(also written as ``summary.json`` by the CLI) with a ``passed`` flag.
"""

import math
from pathlib import Path

import numpy as np

from . import io
from .convergence import (
    AnalyticSequence,
    consecutive_hausdorff,
    default_sample_points,
    equivalence_report,
    normal_corollary_check,
)
from .levelsets import AnalyticFamily, GridSpec, evaluate_field, sublevel
from .operators import SectionSequence, shift_operator
from .setgeom import (
    Disk,
    Plane,
    SetSequence,
    difference_with_margin,
    hausdorff,
    hausdorff_symbolic,
    liminf_estimate,
)


def _region(outdir, name, fld, eps):
    region = sublevel(fld, eps)
    io.write_region(Path(outdir) / name, region)
    return region


def demo_ex2(outdir):
    """``g_n = |lambda| / n``: sublevel disks of radius ``n eps`` grow without
    bound, the limit ``g = 0`` has the whole plane as sublevel set."""
    eps = 0.5
    grid = GridSpec.square(4.0, 257)
    nodes = grid.nodes
    rows = []
    for n in (1, 2, 4):
        fld = evaluate_field(AnalyticFamily("ex2", n), grid)
        region = _region(outdir, f"region-n{n}.json", fld, eps)
        rows.append({
            "n": n,
            "nodes": int(region.mask.sum()),
            "matches_closed_form": bool(np.array_equal(region.mask, np.abs(nodes) < n * eps)),
            "dh_to_limit": hausdorff_symbolic(region.points, Plane(), grid.spacing),
        })
    passed = all(r["matches_closed_form"] and math.isinf(r["dh_to_limit"]) for r in rows)
    return {"demo": "ex2", "eps": eps, "grid": grid.as_dict(), "members": rows, "passed": passed}


def demo_ex3(outdir):
    """Level 1: every ``g_n`` has sublevel set ``2D`` while the pointwise
    limit has ``D``, so the distance stays 1."""
    grid = GridSpec.square(3.0, 257)
    tol = grid.spacing * math.sqrt(2)
    limit = _region(outdir, "region-limit.json", evaluate_field(AnalyticFamily("ex3"), grid), 1.0)
    rows = []
    for n in (1, 5, 25):
        region = _region(outdir, f"region-n{n}.json", evaluate_field(AnalyticFamily("ex3", n), grid), 1.0)
        d = hausdorff(region.points, limit.points)
        rows.append({"n": n, "dh": d, "within_tol": abs(d - 1.0) <= tol})
    return {
        "demo": "ex3",
        "label": "NON-OPERATOR",
        "level": 1.0,
        "grid": grid.as_dict(),
        "tol": tol,
        "members": rows,
        "passed": all(r["within_tol"] for r in rows),
    }


def demo_ex5(outdir):
    """``g_n`` oscillates ever faster inside the unit disk: no pointwise
    limit, yet the sublevel sets approach ``(1 + eps) D``."""
    eps = 0.5
    # the oscillation period 1/n must stay above the node spacing for n = 100
    grid = GridSpec.square(1.6, 513)
    nodes = grid.nodes
    tol = grid.spacing * math.sqrt(2)
    target = nodes[Disk(0j, 1.0 + eps).contains(nodes)]
    rows = []
    for n in (10, 50, 100):
        region = _region(outdir, f"region-n{n}.json", evaluate_field(AnalyticFamily("ex5", n), grid), eps)
        d = hausdorff(region.points, target)
        rows.append({"n": n, "dh": d, "bound": 1.0 / n + tol, "within_bound": d <= 1.0 / n + tol})
    # at lambda = 1/2 the values alternate 0, 1, 0, 1, ...
    probe = 0.5
    ns = list(range(10, 21))
    values = [float(AnalyticFamily("ex5", n)(probe)) for n in ns]
    jumps = np.abs(np.diff(values))
    pts = np.append(default_sample_points(grid), probe)
    report = equivalence_report(AnalyticSequence("ex5"), None, [eps], [10, 11, 50, 51, 100, 101], pts, grid)
    io.write_report(outdir, report)
    oscillates = float(jumps[-1]) > 0.5 and float(jumps.max()) > 0.5
    return {
        "demo": "ex5",
        "label": report.label,
        "verdict": report.verdict,
        "eps": eps,
        "grid": grid.as_dict(),
        "members": rows,
        "probe": probe,
        "probe_n": ns,
        "probe_values": values,
        "oscillates": oscillates,
        "passed": oscillates and report.label == "NON-OPERATOR" and all(r["within_bound"] for r in rows),
    }


def difference_counterexample_sets(n):
    """Samples of ``S_n = [0, 1]`` at step ``1/(4n)`` and ``T_n = Z/n`` in [0, 1]."""
    s = np.arange(4 * n + 1) / (4 * n) + 0j
    t = np.arange(n + 1) / n + 0j
    return s, t


def demo_difference_liminf(outdir, horizon=50, match_radius=0.02):
    """``S_n = [0,1]`` minus the grid ``Z/n``: the differences tend to
    ``[0, 1]`` although both sets tend to ``[0, 1]``."""

    def diff(n):
        s, t = difference_counterexample_sets(n)
        return difference_with_margin(s, t, 1.0 / (8 * n))

    seq = SetSequence(diff, horizon // 2, horizon)
    est = liminf_estimate(seq, None, match_radius)
    unit = np.linspace(0.0, 1.0, 1001) + 0j
    d = hausdorff(est, unit)
    # the limits S = T = [0, 1] on a common sampling
    limit_diff = difference_with_margin(unit, unit, 0.0)
    io.write_json(Path(outdir) / "liminf.json", io.points_to_dict(est))
    io.write_json(Path(outdir) / "limit-difference.json", io.points_to_dict(limit_diff))
    return {
        "demo": "lemma31a",
        "horizon": horizon,
        "n_range": [seq.n_min, seq.n_max],
        "match_radius": match_radius,
        "liminf_points": int(est.size),
        "dh_to_unit_interval": d,
        "limit_difference_points": int(limit_diff.size),
        "passed": d <= 0.05 and limit_diff.size == 0,
    }


def demo_normal(outdir):
    """``diag(0, 2)``: pseudospectra are unions of disks around 0 and 2."""
    d = np.diag([0.0, 2.0])
    grid = GridSpec.from_bounds(-1.5, 3.5, -1.5, 3.5, 257, 257)
    eps_list = [0.25, 0.5, 1.0]
    result = normal_corollary_check(d, eps_list, grid)
    fld = evaluate_field(d, grid)
    for k, eps in enumerate(eps_list):
        _region(outdir, f"region-{k}.json", fld, eps)
    return {"demo": "normal", "grid": grid.as_dict(), **result}


def demo_shift_sections(outdir, eps=0.3, n_list=(8, 16, 24, 32, 40, 48), threshold=0.05):
    """Finite sections of the bilateral shift (Jordan blocks of size
    ``2n + 1``) and the distance between consecutive pseudospectra."""
    seq = SectionSequence(shift_operator())
    grid = GridSpec.square(1.5, 257)
    dh = consecutive_hausdorff(seq, list(n_list), eps, grid)
    last = evaluate_field(seq.member(n_list[-1]), grid)
    _region(outdir, f"region-n{n_list[-1]}.json", last, eps)
    pairs = [[int(a), int(b)] for a, b in zip(n_list[:-1], n_list[1:])]
    return {
        "demo": "shift-sections",
        "eps": eps,
        "grid": grid.as_dict(),
        "pairs": pairs,
        "dh": dh.tolist(),
        "threshold": threshold,
        "passed": bool(dh[-1] < threshold),
    }


DEMOS = {
    "ex2": demo_ex2,
    "ex3": demo_ex3,
    "ex5": demo_ex5,
    "lemma31a": demo_difference_liminf,
    "normal": demo_normal,
    "shift-sections": demo_shift_sections,
}
