"""Diagnostics linking pointwise convergence of lower-norm fields with
Hausdorff convergence of the pseudospectra.

For operator sequences both sides must converge or fail together; a run
where only one side converges (on a fine enough grid) points to a numerical
bug.  Analytic counterexample families are accepted too, but they are
labelled NON-OPERATOR and exempt from that verdict because nothing forces
their two sides to agree.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .exceptions import ContractError
from .levelsets import (
    AnalyticFamily,
    GridSpec,
    bounding_radius,
    count_components,
    evaluate_field,
    field_values,
    sublevel,
)
from .numkernel import op_norm
from .operators import OperatorSequence
from .setgeom import UnionOfDisks, hausdorff
from .validation import check_eps_list, check_matrix, check_points, check_positive

PASS = "PASS-CONSISTENT"
INCONSISTENT = "INCONSISTENT"
UNRESOLVED = "UNRESOLVED"
EXEMPT = "EXEMPT"
# members whose norm exceeds this multiple of max(1, |A|) break the shared grid
NORM_GROWTH_LIMIT = 100.0
FIELD_TOL = 1e-10


class AnalyticSequence(OperatorSequence):
    """``n -> g_n`` for one of the closed-form counterexample families."""

    kind = "analytic"

    def __init__(self, family, n_min=1, n_max=1 << 20):
        AnalyticFamily(family, 1)
        self.family = family
        super().__init__(max(1, n_min), n_max)

    def _member(self, n):
        return AnalyticFamily(self.family, n)

    @property
    def limit(self):
        try:
            return AnalyticFamily(self.family, None)
        except ContractError:
            return None


def _is_analytic(seq):
    return isinstance(seq, AnalyticSequence)


def _values(src, points):
    if isinstance(src, AnalyticFamily):
        return np.asarray(src(points), dtype=float)
    return field_values(src, points)


def shared_grid(a, members, eps_list, nodes=257, growth_limit=NORM_GROWTH_LIMIT):
    """Square grid centred at 0 holding every pseudospectrum involved.

    The half-extent is ``max(|A|, |A_n|) + max(eps)``.  Aborts when member
    norms blow up relative to ``|A|``: one grid for all of them would be too
    coarse to resolve anything.
    """
    eps_max = max(check_eps_list(eps_list))
    norms = [op_norm(m) for m in members]
    base = op_norm(a) if a is not None else 0.0
    top = max(norms + [base])
    if top > growth_limit * max(1.0, base):
        raise ContractError(
            f"member norms reach {top:.3g} against |A|={base:.3g}; a shared grid "
            f"cannot resolve both (limit factor {growth_limit})"
        )
    return GridSpec.square(top + eps_max, nodes)


def pointwise_check(seq, a, sample_points, n_list):
    """``|f_n(lambda) - f(lambda)|`` for every ``n`` (rows) and sample point
    (columns)."""
    pts = check_points(sample_points)
    if isinstance(a, AnalyticFamily):
        target = a(pts)
    else:
        a = check_matrix(a, square=True)
        target = field_values(a, pts)
    rows = []
    for n in n_list:
        m = seq.member(n)
        if not isinstance(m, AnalyticFamily) and m.shape != a.shape:
            raise ContractError(f"member {n} has shape {m.shape}, target has {a.shape}")
        rows.append(np.abs(_values(m, pts) - target))
    return np.array(rows).reshape(len(rows), pts.size)


def _region_points(src, grid, eps, closedness):
    return sublevel(evaluate_field(src, grid), eps, closedness).points


def hausdorff_check(seq, a, eps_list, n_list, grid, closedness="strict"):
    """``d_H(sp_eps(A_n), sp_eps(A))`` on a shared grid; rows follow
    ``n_list``, columns ``eps_list``.  An empty region on one side only gives
    ``inf``."""
    eps_list = check_eps_list(eps_list)
    members = {n: seq.member(n) for n in n_list}
    if not _is_analytic(seq):
        a = check_matrix(a, square=True)
        for n, m in members.items():
            if m.shape != a.shape:
                raise ContractError(f"member {n} has shape {m.shape}, target has {a.shape}")
        for src in [a, *members.values()]:
            r = bounding_radius(src, max(eps_list))
            if not grid.covers_disk(r):
                raise ContractError(f"grid does not cover the disk of radius {r:.6g}")
    target_fields = None if a is None else evaluate_field(a, grid)
    nodes = grid.nodes
    table = np.empty((len(n_list), len(eps_list)))
    for i, n in enumerate(n_list):
        fld = evaluate_field(members[n], grid)
        for j, eps in enumerate(eps_list):
            if target_fields is not None:
                ref = sublevel(target_fields, eps, closedness).points
            else:
                ref = nodes[seq.member(n).limit_sublevel_region(eps).contains(nodes)]
            table[i, j] = hausdorff(sublevel(fld, eps, closedness).points, ref)
    return table


def consecutive_hausdorff(seq, n_list, eps, grid, closedness="strict"):
    """``d_H`` between the pseudospectra of consecutive listed members."""
    check_positive(eps, "eps")
    pts = [_region_points(seq.member(n), grid, eps, closedness) for n in n_list]
    return np.array([hausdorff(p, q) for p, q in zip(pts[:-1], pts[1:])])


@dataclass(frozen=True)
class SandwichVerdict:
    passed: bool
    delta: float
    eps: float
    counterexample: complex = None
    failed_implication: str = None


def sandwich_check(a, b, eps, grid):
    """Check the perturbation inclusions node by node.

    With ``delta = |A - B|``: ``f_A < eps - delta`` must imply ``f_B < eps``,
    and ``f_B < eps`` must imply ``f_A < eps + delta``.
    """
    a = check_matrix(a, square=True)
    b = check_matrix(b, square=True)
    if a.shape != b.shape:
        raise ContractError("A and B must have the same shape")
    check_positive(eps, "eps")
    delta = op_norm(a - b)
    if eps <= delta:
        raise ContractError(f"eps={eps} must exceed |A - B|={delta}")
    fa = evaluate_field(a, grid).values
    fb = evaluate_field(b, grid).values
    nodes = grid.nodes
    for name, bad in (
        ("f_A < eps - delta => f_B < eps", (fa < eps - delta) & ~(fb < eps)),
        ("f_B < eps => f_A < eps + delta", (fb < eps) & ~(fa < eps + delta)),
    ):
        if bad.any():
            j, i = np.argwhere(bad)[0]
            return SandwichVerdict(False, delta, eps, complex(nodes[j, i]), name)
    return SandwichVerdict(True, delta, eps)


def normal_corollary_check(d, eps_list, grid):
    """For a diagonal matrix the field is the distance to the diagonal entries
    and ``sp_eps`` is the union of eps-disks around them.

    Returns a dict with the maximal field error, per-eps Hausdorff distances
    to the grid-sampled union of disks, connected component counts and the
    overall ``passed`` flag (field error <= 1e-10, distances <= h*sqrt(2)).
    """
    d = check_matrix(d, square=True)
    if np.any(d - np.diag(np.diagonal(d))):
        raise ContractError("normal_corollary_check needs a diagonal matrix")
    eps_list = check_eps_list(eps_list)
    centers = np.diagonal(d)
    fld = evaluate_field(d, grid)
    nodes = grid.nodes
    exact = np.min(np.abs(nodes[..., None] - centers), axis=-1)
    field_error = float(np.max(np.abs(fld.values - exact)))
    tol = grid.spacing * math.sqrt(2)
    dh, components = [], []
    for eps in eps_list:
        region = sublevel(fld, eps)
        disks = UnionOfDisks.around(centers, eps)
        dh.append(hausdorff(region.points, nodes[disks.contains(nodes)]))
        components.append(count_components(region.mask))
    passed = field_error <= FIELD_TOL and all(x <= tol for x in dh)
    return {
        "passed": bool(passed),
        "field_error": field_error,
        "field_tol": FIELD_TOL,
        "eps": eps_list,
        "dh": dh,
        "dh_tol": tol,
        "components": components,
    }


def decreases_within_slack(xs, slack):
    """``x[k+1] <= x[k] + slack`` for all k and ``x[-1] <= x[0] / 2 + slack``."""
    xs = [float(x) for x in xs]
    if not xs or math.isinf(xs[-1]):
        return False
    steps = all(b <= a + slack for a, b in zip(xs[:-1], xs[1:]))
    return steps and xs[-1] <= xs[0] / 2 + slack


@dataclass
class ConvergenceReport:
    sample_points: np.ndarray
    n_list: list
    eps_list: list
    residuals: np.ndarray
    dh: np.ndarray
    grid: GridSpec
    label: str
    verdict: str
    verdicts: dict = field(default_factory=dict)
    tolerances: dict = field(default_factory=dict)

    def to_dict(self):
        def num(x):
            return "inf" if math.isinf(x) else float(x)

        return {
            "label": self.label,
            "verdict": self.verdict,
            "verdicts": self.verdicts,
            "tolerances": self.tolerances,
            "grid": self.grid.as_dict(),
            "n_list": [int(n) for n in self.n_list],
            "eps_list": [float(e) for e in self.eps_list],
            "sample_points": [[z.real, z.imag] for z in self.sample_points],
            "residuals": [[num(x) for x in row] for row in self.residuals],
            "dh": [[num(x) for x in row] for row in self.dh],
        }


def default_sample_points(grid, stride=32):
    return grid.nodes[::stride, ::stride].ravel()


def equivalence_report(seq, a, eps_list, n_list, sample_points=None, grid=None):
    """Run both sides of the equivalence and compare their trends.

    ``a`` is the target matrix.  For an :class:`AnalyticSequence` it may be an
    analytic limit family or ``None``; in the latter case the pointwise side
    records consecutive differences ``|g_n - g_prev|`` and the set side
    compares with the known limit region.
    """
    eps_list = check_eps_list(eps_list)
    n_list = [int(n) for n in n_list]
    if len(n_list) < 2:
        raise ContractError("n_list needs at least two entries")
    analytic = _is_analytic(seq)
    if grid is None:
        if analytic:
            raise ContractError("analytic runs need an explicit grid")
        grid = shared_grid(a, [seq.member(n) for n in n_list], eps_list)
    pts = check_points(sample_points) if sample_points is not None else default_sample_points(grid)
    h = grid.spacing

    if analytic and a is None:
        a = seq.limit
    if analytic and a is None:
        vals = np.array([seq.member(n)(pts) for n in n_list])
        residuals = np.vstack([np.zeros(pts.size), np.abs(np.diff(vals, axis=0))])
        pointwise_mode = "cauchy"
    else:
        residuals = pointwise_check(seq, a, pts, n_list)
        pointwise_mode = "target"
    dh = hausdorff_check(seq, a, eps_list, n_list, grid)
    if residuals.size and not np.all(np.isfinite(residuals)):
        raise ContractError("residual table has holes")

    slack = 2 * h
    resolved = [j for j, e in enumerate(eps_list) if e > 2 * h]
    res_max = residuals.max(axis=1)
    if pointwise_mode == "cauchy":
        res_max = res_max[1:]
    dh_max = dh[:, resolved].max(axis=1) if resolved else np.full(len(n_list), np.nan)
    res_dec = decreases_within_slack(res_max, slack)
    dh_dec = bool(resolved) and decreases_within_slack(dh_max, slack)

    label = "NON-OPERATOR" if analytic else "OPERATOR"
    if analytic:
        verdict = EXEMPT
    elif not resolved:
        verdict = UNRESOLVED
    elif res_dec == dh_dec:
        verdict = PASS
    else:
        verdict = INCONSISTENT
    verdicts = {
        "pointwise_decreasing": bool(res_dec),
        "hausdorff_decreasing": bool(dh_dec),
        "pointwise_mode": pointwise_mode,
        "resolved_eps": [eps_list[j] for j in resolved],
        "unresolved_eps": [e for j, e in enumerate(eps_list) if j not in resolved],
        "infinite_cells": int(np.isinf(dh).sum()),
    }
    tolerances = {"slack": slack, "h": h, "min_resolved_eps": 2 * h}
    return ConvergenceReport(pts, n_list, eps_list, residuals, dh, grid, label, verdict, verdicts, tolerances)
