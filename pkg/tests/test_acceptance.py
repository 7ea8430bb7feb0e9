"""Acceptance criteria, one test each; every test records a PASS/FAIL line
(shown in the terminal summary) before asserting."""

import json
import math
import time

import numpy as np

from oracles import hausdorff_scipy, sigma_min_inverse_power
from pseudohaus import cli, io
from pseudohaus.convergence import (
    PASS,
    default_sample_points,
    equivalence_report,
    normal_corollary_check,
    sandwich_check,
    shared_grid,
)
from pseudohaus.demos import demo_ex2, demo_ex3, demo_ex5, demo_difference_liminf
from pseudohaus.levelsets import GridSpec, bounding_radius, evaluate_field, field_values, sublevel
from pseudohaus.numkernel import op_norm, sigma_min
from pseudohaus.operators import (
    PerturbationSequence,
    embed_matrix,
    finite_section,
    shift_operator,
    window_lower_norm,
)
from pseudohaus.rng import SplitMix64, random_matrix, random_unitary
from pseudohaus.setgeom import (
    SetSequence,
    UnionOfDisks,
    difference_with_margin,
    hausdorff,
    hausdorff_brute,
    hausdorff_symbolic,
    liminf_estimate,
    nearest_distances,
)

FIELD_TOL = 1e-10
LIPSCHITZ_SLACK = 1e-10
ORACLE_RTOL = 1e-10
DH_AGREEMENT = 1e-12
WINDOW_TOL = 1e-10
C1_SECONDS = 10.0
C3_SECONDS = 120.0


def line(record, num, title, ok, detail):
    record(f"[{'PASS' if ok else 'FAIL'}] C{num} {title}: {detail}")
    return ok


def test_c1_normal_corollary(record):
    start = time.perf_counter()
    grid = GridSpec.from_bounds(-1.5, 3.5, -1.5, 3.5, 257, 257)
    res = normal_corollary_check(np.diag([0.0, 2.0]), [0.25, 0.5, 1.0], grid)
    elapsed = time.perf_counter() - start
    h_tol = grid.spacing * math.sqrt(2)
    # the same regions against polar samples of the exact disks
    res_gap = grid.spacing / 4
    fld = evaluate_field(np.diag([0.0, 2.0]), grid)
    polar = [
        hausdorff_symbolic(sublevel(fld, eps).points, UnionOfDisks.around([0, 2], eps), res_gap)
        for eps in (0.25, 0.5, 1.0)
    ]
    ok = (
        res["field_error"] <= FIELD_TOL
        and all(d <= h_tol for d in res["dh"])
        and all(d <= h_tol + res_gap for d in polar)
        and elapsed < C1_SECONDS
    )
    detail = (
        f"field err {res['field_error']:.2e}, dh grid-sampled {res['dh']}, "
        f"polar-sampled {[round(d, 4) for d in polar]} <= {h_tol:.4f}, {elapsed:.2f}s"
    )
    assert line(record, 1, "normal corollary", ok, detail)


def test_c2_lipschitz(record):
    rng = SplitMix64(2)
    worst_op = worst_field = -math.inf
    violations = 0
    for _ in range(1000):
        n = int(rng.integers(1, 9))
        a = random_matrix(n, n, rng)
        b = a + 10.0 ** rng.uniform() * 0.1 * random_matrix(n, n, rng)
        excess = abs(sigma_min(a) - sigma_min(b)) - op_norm(a - b)
        worst_op = max(worst_op, excess)
        violations += excess > LIPSCHITZ_SLACK
    for _ in range(1000):
        n = int(rng.integers(1, 9))
        a = random_matrix(n, n, rng) / math.sqrt(n)
        lam = complex(*(2 * rng.normal(2)))
        lam2 = lam + complex(*(rng.uniform() * rng.normal(2)))
        f = field_values(a, [lam, lam2])
        excess = abs(f[0] - f[1]) - abs(lam - lam2)
        worst_field = max(worst_field, excess)
        violations += excess > LIPSCHITZ_SLACK
    detail = f"{violations} violations; worst excess nu {worst_op:.2e}, f {worst_field:.2e}"
    assert line(record, 2, "Lipschitz suite", violations == 0, detail)


def test_c3_theorem_desk(record):
    start = time.perf_counter()
    rng = SplitMix64(2026)
    a = random_matrix(6, 6, rng) / math.sqrt(6)
    e = random_matrix(6, 6, rng)
    e /= op_norm(e)
    seq = PerturbationSequence(a, e)
    n_list = [1, 2, 4, 8, 16, 32, 64]
    eps_list = [0.2, 0.5, 1.0]
    grid = shared_grid(a, [seq.member(n) for n in n_list], eps_list, nodes=257)
    rep = equivalence_report(seq, a, eps_list, n_list, default_sample_points(grid), grid)
    elapsed = time.perf_counter() - start
    h = grid.spacing
    res_ok = all(row.max() <= 1.0 / n for row, n in zip(rep.residuals, n_list))
    dh_ok = all(np.all(row <= 1.0 / n + 2 * h * math.sqrt(2)) for row, n in zip(rep.dh, n_list))
    worst = max(float((row - 1.0 / n).max()) for row, n in zip(rep.dh, n_list))
    ok = res_ok and dh_ok and rep.verdict == PASS and elapsed < C3_SECONDS
    detail = (
        f"(a) {res_ok} (b) {dh_ok} max dh-1/n {worst:.4f} <= {2 * h * math.sqrt(2):.4f} "
        f"(c) {rep.verdict}, {elapsed:.1f}s"
    )
    assert line(record, 3, "perturbation desk test", ok, detail)


def test_c4_sandwich(record):
    rng = SplitMix64(4)
    failures = 0
    eps = 0.5
    for k in range(100):
        n = int(rng.integers(1, 9))
        delta = (0.05, 0.1)[k % 2]
        a = random_matrix(n, n, rng) / math.sqrt(n)
        b = a + delta * random_unitary(n, rng)
        radius = max(bounding_radius(a, eps), bounding_radius(b, eps))
        verdict = sandwich_check(a, b, eps, GridSpec.square(radius, 129))
        failures += not verdict.passed
    assert line(record, 4, "sandwich inclusions", failures == 0, f"{failures} failures in 100 pairs")


def test_c5_paper_examples(record, tmp_path):
    ex2 = demo_ex2(tmp_path)
    ex2_ok = all(m["matches_closed_form"] and m["dh_to_limit"] == math.inf for m in ex2["members"])
    ex3 = demo_ex3(tmp_path)
    h3 = ex3["grid"]["hx"]
    ex3_ok = all(abs(m["dh"] - 1.0) <= h3 * math.sqrt(2) for m in ex3["members"])
    ex5 = demo_ex5(tmp_path)
    h5 = ex5["grid"]["hx"]
    ex5_ok = (
        all(m["dh"] <= 1.0 / m["n"] + h5 * math.sqrt(2) for m in ex5["members"])
        and ex5["oscillates"]
        and ex5["label"] == "NON-OPERATOR"
    )
    detail = (
        f"ex2 {ex2_ok}; ex3 dh {[m['dh'] for m in ex3['members']]} {ex3_ok}; "
        f"ex5 dh {[round(m['dh'], 4) for m in ex5['members']]} label {ex5['label']} {ex5_ok}"
    )
    assert line(record, 5, "worked examples", ex2_ok and ex3_ok and ex5_ok, detail)


def _jitter(points, n, rng):
    """Move every point by less than 1/n."""
    r = rng.uniform(points.size) / n
    return points + r * np.exp(2j * np.pi * rng.uniform(points.size))


def test_c6_difference_lemma(record, tmp_path):
    a = demo_difference_liminf(tmp_path)
    a_ok = a["dh_to_unit_interval"] <= 0.05 and a["limit_difference_points"] == 0

    rng = SplitMix64(6)
    n0, n1 = 10, 40
    match_radius = 2.0 / n0
    missing = 0
    checked = 0
    for _ in range(50):
        s = rng.complex_normal(int(rng.integers(5, 40)))
        shared = s[: int(rng.integers(0, s.size))]
        t = np.concatenate([shared, rng.complex_normal(int(rng.integers(1, 30)))])
        margin = 0.05 * rng.uniform()
        members = {}
        for n in range(n0, n1 + 1):
            members[n] = difference_with_margin(_jitter(s, n, rng), _jitter(t, n, rng), margin)
        seq = SetSequence(lambda n: members[n], n0, n1)
        est = liminf_estimate(seq, None, match_radius)
        witnesses = difference_with_margin(s, t, margin + 2.0 / n0)
        checked += witnesses.size
        if witnesses.size:
            missing += int(np.sum(nearest_distances(witnesses, est) > 1.0 / n1))
    b_ok = missing == 0 and checked > 0
    detail = (
        f"(a) dh {a['dh_to_unit_interval']:.4f}, |S-T| {a['limit_difference_points']}; "
        f"(b) {checked} witnesses, {missing} missing"
    )
    assert line(record, 6, "set difference lemma", a_ok and b_ok, detail)


def test_c7_oracles(record):
    rng = SplitMix64(7)
    worst = 0.0
    for _ in range(500):
        n = int(rng.integers(1, 9))
        a = random_matrix(n, n, rng)
        oracle = sigma_min_inverse_power(a)
        worst = max(worst, abs(sigma_min(a) - oracle) / oracle)
    worst_dh = 0.0
    for _ in range(100):
        s = rng.complex_normal(1000) * (1 + 4 * rng.uniform())
        t = rng.complex_normal(1000) + complex(*rng.normal(2))
        fast = hausdorff(s, t)
        worst_dh = max(worst_dh, abs(fast - hausdorff_brute(s, t)), abs(fast - hausdorff_scipy(s, t)))
    ok = worst <= ORACLE_RTOL and worst_dh <= DH_AGREEMENT
    detail = f"sigma_min rel err {worst:.2e}, dH abs diff {worst_dh:.2e}"
    assert line(record, 7, "oracle equivalences", ok, detail)


def test_c8_window(record):
    vals = [window_lower_norm(shift_operator(), 0.5, d, [0]) for d in (2, 4, 8, 16)]
    mono = all(b <= a + 1e-12 for a, b in zip(vals, vals[1:]))
    rng = SplitMix64(8)
    worst = 0.0
    for n in (2, 4, 7):
        m = random_matrix(n, n, rng)
        band = embed_matrix(m, start=-(n // 2))
        lam = complex(*rng.normal(2)) * 0.5
        dense = np.linalg.svd(m - lam * np.eye(n), compute_uv=False)[-1]
        section = finite_section(band, n)
        assert np.array_equal(section[n - n // 2 : n - n // 2 + n, n - n // 2 : n - n // 2 + n], m)
        worst = max(worst, abs(window_lower_norm(band, lam, n, [-(n // 2)]) - dense))
    ok = mono and worst <= WINDOW_TOL
    detail = f"shift windows {[round(v, 6) for v in vals]}, embedded max err {worst:.2e}"
    assert line(record, 8, "window approximation", ok, detail)


def _snapshot(out):
    return {p.relative_to(out).as_posix(): p.read_bytes() for p in sorted(out.rglob("*")) if p.is_file()}


def test_c9_determinism(record, tmp_path, capsys, monkeypatch):
    monkeypatch.chdir(tmp_path)
    g = GridSpec.square(2.5, 41)
    io.write_json(tmp_path / "d1.json", io.points_to_dict(g.nodes[np.abs(g.nodes) < 1]))
    io.write_json(tmp_path / "d2.json", io.points_to_dict(g.nodes[np.abs(g.nodes) < 2]))
    configs = {
        "field": {"matrix": {"random": {"dim": 4}}, "grid": {"radius": 2.5, "nodes": 65}},
        "pseudo": {"matrix": {"random": {"dim": 5}}, "eps": [0.1, 0.5]},
        "dh": {"a": "d1.json", "b": "d2.json"},
        "converge": {
            "sequence": {"kind": "perturbation", "a": {"random": {"dim": 3}}, "e": {"random": {"dim": 3}}, "e_norm": 1},
            "eps": [0.5],
            "n_list": [1, 2, 4],
            "grid": {"radius": 3, "nodes": 65},
        },
        "demo": {"demo": "ex3"},
    }
    same = []
    for command, cfg in configs.items():
        path = tmp_path / f"{command}.json"
        path.write_text(json.dumps(cfg))
        outputs = []
        for k in range(2):
            out = tmp_path / f"{command}-{k}"
            capsys.readouterr()
            code = cli.main([command, str(path), "--out", str(out), "--seed", "9"])
            stdout = capsys.readouterr().out.replace(str(out), "<out>")
            outputs.append((code, stdout, _snapshot(out) if out.exists() else {}))
        same.append(outputs[0] == outputs[1] and outputs[0][0] == 0)
    ok = all(same)
    detail = ", ".join(f"{c} {'identical' if s else 'DIFFERS'}" for c, s in zip(configs, same))
    assert line(record, 9, "CLI determinism", ok, detail)
