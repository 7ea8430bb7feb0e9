"""Command-line frontend.

    pseudohaus {field,pseudo,dh,converge,demo} CONFIG [--out DIR] [--seed N]

CONFIG is a JSON file (for ``demo`` it may also be a bare demo name).  Matrix
entries in a config take one of these forms: a path to a matrix file, an
inline ``{"rows", "cols", "re", "im"}`` object, ``{"diag": [...]}``,
``{"jordan": n}``, ``{"random": {"dim": n, "norm": r}}`` (complex Gaussian
divided by ``sqrt(n)``, optionally rescaled to operator norm ``r``; drawn from
the run seed) or ``{"band": {...}, "section": n}``.  An analytic run may name
its limit as ``"target": {"family": "ex3"}``.  Relative paths are
resolved against the config file's directory.

Exit codes: 0 success, 2 bad config, 3 numerical failure, 4 verdict
INCONSISTENT (``converge`` only).
"""

import argparse
import hashlib
import json
import sys
from pathlib import Path

import numpy as np

from . import io
from .convergence import INCONSISTENT, AnalyticSequence, equivalence_report
from .demos import DEMOS
from .exceptions import ContractError, ConvergenceFailure, InputError
from .levelsets import AnalyticFamily, GridSpec, evaluate_field, sublevel
from .numkernel import op_norm
from .operators import ExplicitSequence, PerturbationSequence, finite_section
from .rng import SplitMix64, random_matrix
from .setgeom import hausdorff
from .validation import check_eps_list, check_matrix, check_points

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC, EXIT_INCONSISTENT = 0, 2, 3, 4
COMMANDS = ("field", "pseudo", "dh", "converge", "demo")


class Run:
    """Parsed config plus the state shared by the commands (base directory
    for relative paths and the seeded generator)."""

    def __init__(self, command, config, base, seed, out):
        self.command = command
        self.config = config
        self.base = base
        self.seed = seed
        self.rng = SplitMix64(seed)
        self.out = out

    def path(self, p):
        p = Path(p)
        return p if p.is_absolute() else self.base / p

    def get(self, key, default=None):
        return self.config.get(key, default)

    def require(self, key):
        if key not in self.config:
            raise InputError(f"config for '{self.command}' needs a '{key}' entry")
        return self.config[key]

    def matrix(self, spec):
        if isinstance(spec, str):
            return io.read_matrix(self.path(spec))
        if not isinstance(spec, dict):
            raise InputError(f"bad matrix entry {spec!r}")
        if "diag" in spec:
            return np.diag([io.parse_complex(v) for v in spec["diag"]])
        if "jordan" in spec:
            n = int(spec["jordan"])
            return np.eye(n, k=1, dtype=complex)
        if "random" in spec:
            r = spec["random"]
            n = int(r["dim"])
            a = random_matrix(n, n, self.rng) / np.sqrt(n)
            if "norm" in r:
                a *= float(r["norm"]) / op_norm(a)
            return a
        if "band" in spec:
            band = spec["band"]
            if isinstance(band, str):
                band = io.read_json(self.path(band))
            return finite_section(io.band_from_dict(band), int(spec.get("section", 0)))
        return io.matrix_from_dict(spec)

    def eps_list(self, default=None):
        eps = self.get("eps", default)
        if eps is None:
            raise InputError("config needs an 'eps' entry")
        return check_eps_list(eps)

    def grid(self, radius=None):
        g = self.get("grid")
        if g is None:
            if radius is None:
                raise InputError("config needs a 'grid' entry")
            return GridSpec.square(radius)
        nx, ny = int(g.get("nx", g.get("nodes", 257))), int(g.get("ny", g.get("nodes", 257)))
        if "bounds" in g:
            x0, x1, y0, y1 = (float(v) for v in g["bounds"])
            return GridSpec.from_bounds(x0, x1, y0, y1, nx, ny)
        if "radius" in g:
            return GridSpec(io.parse_complex(g.get("center", 0)), float(g["radius"]), float(g["radius"]), nx, ny)
        try:
            return GridSpec(
                io.parse_complex(g.get("center", 0)), float(g["half_width"]), float(g["half_height"]), nx, ny
            )
        except KeyError as exc:
            raise InputError(f"grid entry lacks {exc}") from exc

    def outdir(self):
        self.out.mkdir(parents=True, exist_ok=True)
        return self.out


def config_hash(command, config, seed):
    text = json.dumps({"command": command, "config": config, "seed": seed}, sort_keys=True)
    return hashlib.sha256(text.encode()).hexdigest()[:12]


def _default_radius(a, eps_max):
    return op_norm(a) + eps_max


def cmd_field(run):
    a = check_matrix(run.matrix(run.require("matrix")), square=True)
    eps = run.get("eps")
    eps_max = max(check_eps_list(eps)) if eps is not None else 1.0
    grid = run.grid(_default_radius(a, eps_max))
    fld = evaluate_field(a, grid)
    out = run.outdir()
    io.write_field_csv(out / "field.csv", fld)
    print(out / "field.csv")
    return EXIT_OK


def cmd_pseudo(run):
    a = check_matrix(run.matrix(run.require("matrix")), square=True)
    eps_list = run.eps_list()
    closedness = run.get("closedness", "strict")
    grid = run.grid(_default_radius(a, max(eps_list)))
    fld = evaluate_field(a, grid)
    out = run.outdir()
    manifest = []
    for k, eps in enumerate(eps_list):
        region = sublevel(fld, eps, closedness)
        name = f"region-{k:03d}.json"
        io.write_region(out / name, region)
        manifest.append({"eps": eps, "file": name, "nodes": int(region.mask.sum())})
    io.write_json(out / "regions.json", {"grid": grid.as_dict(), "closedness": closedness, "regions": manifest})
    print(out / "regions.json")
    return EXIT_OK


def _point_file(run, spec):
    if isinstance(spec, str):
        return io.read_points(run.path(spec))
    return check_points(np.asarray(spec, dtype=float) if len(spec) else [])


def cmd_dh(run):
    a = _point_file(run, run.require("a"))
    b = _point_file(run, run.require("b"))
    print(io.fmt(hausdorff(a, b)))
    return EXIT_OK


def _sequence(run, spec):
    kind = spec.get("kind")
    if kind == "perturbation":
        a = run.matrix(spec["a"])
        e = run.matrix(spec["e"])
        if "e_norm" in spec:
            e = e * (float(spec["e_norm"]) / op_norm(e))
        return PerturbationSequence(a, e), a
    if kind == "constant":
        a = run.matrix(spec["matrix"])
        return ExplicitSequence([a] * int(spec.get("length", 1 << 10))), a
    if kind == "explicit":
        mats = [run.matrix(m) for m in spec["matrices"]]
        return ExplicitSequence(mats, int(spec.get("n_min", 1))), None
    if kind == "analytic":
        return AnalyticSequence(spec["family"]), None
    raise InputError(f"unknown sequence kind {kind!r}")


def cmd_converge(run):
    seq, default_target = _sequence(run, run.require("sequence"))
    target = run.get("target")
    if isinstance(target, dict) and "family" in target:
        a = AnalyticFamily(target["family"])
    else:
        a = run.matrix(target) if target is not None else default_target
    if a is None and not isinstance(seq, AnalyticSequence):
        raise InputError("config needs a 'target' matrix for this sequence kind")
    eps_list = run.eps_list()
    n_list = [int(n) for n in run.require("n_list")]
    pts = run.get("sample_points")
    pts = check_points(np.asarray(pts, dtype=float)) if pts is not None else None
    grid = run.grid() if run.get("grid") is not None else None
    report = equivalence_report(seq, a, eps_list, n_list, pts, grid)
    out = run.outdir()
    io.write_report(out, report)
    print(f"{report.label} {report.verdict}")
    return EXIT_INCONSISTENT if report.verdict == INCONSISTENT else EXIT_OK


def cmd_demo(run):
    name = run.require("demo")
    if name not in DEMOS:
        raise InputError(f"unknown demo {name!r}; choose from {', '.join(DEMOS)}")
    out = run.outdir()
    summary = DEMOS[name](out)
    io.write_json(out / "summary.json", summary)
    print(f"{name} {'PASS' if summary['passed'] else 'FAIL'}")
    return EXIT_OK


HANDLERS = {
    "field": cmd_field,
    "pseudo": cmd_pseudo,
    "dh": cmd_dh,
    "converge": cmd_converge,
    "demo": cmd_demo,
}


def _load(command, target):
    path = Path(target)
    if command == "demo" and not path.exists() and target in DEMOS:
        return {"demo": target}, Path.cwd()
    if not path.exists():
        raise InputError(f"config file {target} does not exist")
    config = io.read_json(path)
    if not isinstance(config, dict):
        raise InputError("config must be a JSON object")
    return config, path.parent


def build_parser():
    parser = argparse.ArgumentParser(prog="pseudohaus", description=__doc__.split("\n\n")[0])
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("config", help="JSON config file (or a demo name for 'demo')")
    parser.add_argument("--out", help="output directory (default runs/<command>-<config hash>)")
    parser.add_argument("--seed", type=int, help="overrides the config seed")
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        config, base = _load(args.command, args.config)
        seed = args.seed if args.seed is not None else int(config.get("seed", 0))
        out = Path(args.out) if args.out else Path("runs") / f"{args.command}-{config_hash(args.command, config, seed)}"
        return HANDLERS[args.command](Run(args.command, config, base, seed, out))
    except ConvergenceFailure as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (InputError, ContractError, KeyError, TypeError, ValueError, OSError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
