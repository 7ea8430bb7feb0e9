"""Geometry of finite point sets in the complex plane.

Point sets are 1-D complex arrays (duplicates allowed, order irrelevant).
The empty set is legal: ``hausdorff(empty, empty) == 0`` and the distance
between an empty and a nonempty set is ``math.inf``.

The liminf/limsup functions are finite-horizon *estimators*: genuine set
limits depend on the whole tail of a sequence and cannot be read off finitely
many members.  They report candidate points that are matched, within a
radius, by every member (liminf) or by a given fraction of members (limsup)
of the inspected index range.
"""

import math
from dataclasses import dataclass

import numpy as np
from numba import njit

from .exceptions import ContractError
from .validation import check_points

_BRUTE_BLOCK = 1 << 22


def as_points(points):
    return check_points(points)


def _brute_sq(q, t):
    out = np.empty(q.size)
    step = max(1, _BRUTE_BLOCK // max(1, t.size))
    tx, ty = t.real[None, :], t.imag[None, :]
    for lo in range(0, q.size, step):
        qq = q[lo : lo + step]
        dx = qq.real[:, None] - tx
        dy = qq.imag[:, None] - ty
        out[lo : lo + step] = (dx * dx + dy * dy).min(axis=1)
    return out


@njit(cache=True)
def _grid_search(qx, qy, sx, sy, starts, counts, x0, y0, cell, ncx, ncy):
    out = np.empty(qx.size)
    for i in range(qx.size):
        px = qx[i]
        py = qy[i]
        cx = int(np.floor((px - x0) / cell))
        cy = int(np.floor((py - y0) / cell))
        # rings closer than r0 cannot touch the occupied rectangle
        r0 = max(0, -cx, cx - (ncx - 1), -cy, cy - (ncy - 1))
        rmax = max(abs(cx), abs(cx - (ncx - 1)), abs(cy), abs(cy - (ncy - 1)))
        best = np.inf
        r = r0
        while r <= rmax:
            for gy in range(max(cy - r, 0), min(cy + r, ncy - 1) + 1):
                edge_row = gy == cy - r or gy == cy + r
                step = 1 if edge_row else 2 * r
                gx = cx - r
                while gx <= cx + r:
                    if 0 <= gx < ncx:
                        lx = max(0.0, x0 + gx * cell - px, px - (x0 + (gx + 1) * cell))
                        ly = max(0.0, y0 + gy * cell - py, py - (y0 + (gy + 1) * cell))
                        if lx * lx + ly * ly < best:
                            c = gy * ncx + gx
                            for j in range(starts[c], starts[c] + counts[c]):
                                dx = px - sx[j]
                                dy = py - sy[j]
                                d2 = dx * dx + dy * dy
                                if d2 < best:
                                    best = d2
                    if step == 0:
                        break
                    gx += step
            bound = r * cell
            if best <= bound * bound:
                break
            r += 1
        out[i] = best
    return out


def _bucket_sq(q, t):
    tx, ty = t.real.copy(), t.imag.copy()
    x0, y0 = tx.min(), ty.min()
    wx, wy = tx.max() - x0, ty.max() - y0
    cell = max(max(wx, wy) / 64.0, math.sqrt(wx * wy / t.size))
    if cell == 0.0:
        cell = 1.0
    ncx = int(wx // cell) + 1
    ncy = int(wy // cell) + 1
    cx = np.minimum(((tx - x0) / cell).astype(np.int64), ncx - 1)
    cy = np.minimum(((ty - y0) / cell).astype(np.int64), ncy - 1)
    cid = cy * ncx + cx
    order = np.argsort(cid, kind="stable")
    counts = np.bincount(cid, minlength=ncx * ncy)
    starts = np.cumsum(counts) - counts
    return _grid_search(
        q.real.copy(), q.imag.copy(), tx[order], ty[order], starts, counts,
        float(x0), float(y0), float(cell), ncx, ncy,
    )


def nearest_distances(q, t, method="grid"):
    """Distance from every point of ``q`` to the set ``t`` (inf if empty)."""
    q = as_points(q)
    t = as_points(t)
    if t.size == 0:
        return np.full(q.size, np.inf)
    if q.size == 0:
        return np.zeros(0)
    if method == "brute":
        return np.sqrt(_brute_sq(q, t))
    if method == "grid":
        return np.sqrt(_bucket_sq(q, t))
    raise ContractError(f"unknown nearest-neighbour method {method!r}")


def dist_point(z, s):
    """``inf_{x in s} |z - x|``."""
    s = as_points(s)
    if s.size == 0:
        return math.inf
    return float(nearest_distances([complex(z)], s, method="brute")[0])


def directed_hausdorff(s, t, method="grid"):
    """``sup_{x in s} dist(x, t)``."""
    s = as_points(s)
    t = as_points(t)
    if s.size == 0:
        return 0.0
    if t.size == 0:
        return math.inf
    return float(nearest_distances(s, t, method).max())


def hausdorff(s, t, method="grid"):
    """Hausdorff distance of two finite point sets.

    ``method="grid"`` uses a uniform bucket grid, ``"brute"`` compares all
    pairs; both evaluate the same distance expression.
    """
    s = as_points(s)
    t = as_points(t)
    if s.size == 0 and t.size == 0:
        return 0.0
    if s.size == 0 or t.size == 0:
        return math.inf
    return max(directed_hausdorff(s, t, method), directed_hausdorff(t, s, method))


def hausdorff_brute(s, t):
    return hausdorff(s, t, method="brute")


# symbolic regions -------------------------------------------------------


def _disk_samples(center, r_in, r_out, resolution):
    """Polar samples of the closed annulus ``r_in <= |z - c| <= r_out``;
    every point of it lies within ``resolution`` of a sample."""
    if r_out == 0:
        return np.array([complex(center)])
    n_rings = max(1, math.ceil((r_out - r_in) / resolution))
    radii = np.linspace(r_in, r_out, n_rings + 1)
    parts = []
    for rho in radii:
        if rho == 0:
            parts.append(np.array([0j]))
            continue
        m = max(1, math.ceil(2 * math.pi * rho / resolution))
        parts.append(rho * np.exp(2j * np.pi * np.arange(m) / m))
    return complex(center) + np.concatenate(parts)


@dataclass(frozen=True)
class Disk:
    """Open disk ``|z - center| < radius``; radius 0 is the empty set."""

    center: complex
    radius: float

    def __post_init__(self):
        if self.radius < 0:
            raise ContractError("radius must be >= 0")

    @property
    def is_empty(self):
        return self.radius == 0

    def contains(self, z):
        return np.abs(np.asarray(z) - self.center) < self.radius

    def distance(self, z):
        return np.maximum(0.0, np.abs(np.asarray(z) - self.center) - self.radius)

    def sample(self, resolution):
        return _disk_samples(self.center, 0.0, self.radius, resolution)


@dataclass(frozen=True)
class UnionOfDisks:
    disks: tuple

    def __post_init__(self):
        object.__setattr__(self, "disks", tuple(self.disks))

    @classmethod
    def around(cls, centers, radius):
        return cls(tuple(Disk(complex(c), float(radius)) for c in centers))

    @property
    def is_empty(self):
        return all(d.is_empty for d in self.disks)

    def contains(self, z):
        z = np.asarray(z)
        out = np.zeros(z.shape, dtype=bool)
        for d in self.disks:
            out |= d.contains(z)
        return out

    def distance(self, z):
        z = np.asarray(z)
        out = np.full(z.shape, np.inf)
        for d in self.disks:
            if not d.is_empty:
                out = np.minimum(out, d.distance(z))
        return out

    def sample(self, resolution):
        parts = [d.sample(resolution) for d in self.disks if not d.is_empty]
        return np.concatenate(parts) if parts else np.zeros(0, dtype=complex)


@dataclass(frozen=True)
class Annulus:
    """Open annulus ``r_in < |z - center| < r_out``."""

    center: complex
    r_in: float
    r_out: float

    def __post_init__(self):
        if not 0 <= self.r_in <= self.r_out:
            raise ContractError("need 0 <= r_in <= r_out")

    @property
    def is_empty(self):
        return self.r_in == self.r_out

    def contains(self, z):
        rho = np.abs(np.asarray(z) - self.center)
        return (rho > self.r_in) & (rho < self.r_out)

    def distance(self, z):
        rho = np.abs(np.asarray(z) - self.center)
        return np.maximum(0.0, np.maximum(self.r_in - rho, rho - self.r_out))

    def sample(self, resolution):
        return _disk_samples(self.center, self.r_in, self.r_out, resolution)


@dataclass(frozen=True)
class Plane:
    """All of C (unbounded)."""

    is_empty = False

    def contains(self, z):
        return np.ones(np.shape(z), dtype=bool)

    def distance(self, z):
        return np.zeros(np.shape(z))


def hausdorff_symbolic(s, region, resolution):
    """Hausdorff distance between a finite set and a symbolic region.

    The half ``sup_{x in s} dist(x, region)`` is exact; the other half is
    evaluated on polar samples of the region spaced at most ``resolution``
    apart, so the result is accurate to within ``resolution``.  Any nonempty
    bounded set is at infinite distance from the plane.
    """
    if not resolution > 0:
        raise ContractError("resolution must be positive")
    s = as_points(s)
    if isinstance(region, Plane):
        return math.inf
    if s.size == 0 and region.is_empty:
        return 0.0
    if s.size == 0 or region.is_empty:
        return math.inf
    to_region = float(np.max(region.distance(s)))
    from_region = directed_hausdorff(region.sample(resolution), s)
    return max(to_region, from_region)


# set sequences ------------------------------------------------------------


class SetSequence:
    """``n -> S_n`` over ``n_min .. n_max``; members are cached."""

    def __init__(self, generator, n_min, n_max):
        if n_max < n_min:
            raise ContractError("empty index range")
        self.generator = generator
        self.n_min = int(n_min)
        self.n_max = int(n_max)
        self._cache = {}

    def member(self, n):
        if not self.n_min <= n <= self.n_max:
            raise ContractError(f"n={n} outside {self.n_min}..{self.n_max}")
        if n not in self._cache:
            self._cache[n] = as_points(self.generator(n))
        return self._cache[n]

    def indices(self):
        return range(self.n_min, self.n_max + 1)


def _members(seq, n_range):
    n_range = list(n_range) if n_range is not None else list(seq.indices())
    if not n_range:
        raise ContractError("n_range is empty")
    return [seq.member(n) for n in n_range]


def liminf_estimate(seq, n_range, match_radius):
    """Points of the last member matched within ``match_radius`` by every
    member in ``n_range``."""
    if not match_radius > 0:
        raise ContractError("match_radius must be positive")
    members = _members(seq, n_range)
    cand = np.unique(members[-1])
    keep = np.ones(cand.size, dtype=bool)
    for m in members:
        if not keep.any():
            break
        keep[keep] = nearest_distances(cand[keep], m) <= match_radius
    return cand[keep]


def limsup_estimate(seq, n_range, match_radius, fraction=0.5):
    """Points of any member matched within ``match_radius`` by at least
    ``ceil(fraction * len(n_range))`` members."""
    if not match_radius > 0:
        raise ContractError("match_radius must be positive")
    if not 0 < fraction <= 1:
        raise ContractError("fraction must lie in (0, 1]")
    members = _members(seq, n_range)
    cand = np.unique(np.concatenate(members))
    hits = np.zeros(cand.size, dtype=np.int64)
    for m in members:
        hits += nearest_distances(cand, m) <= match_radius
    return cand[hits >= math.ceil(fraction * len(members))]


def difference_with_margin(s, t, margin):
    """Points of ``s`` farther than ``margin`` from every point of ``t``."""
    if margin < 0:
        raise ContractError("margin must be >= 0")
    s = as_points(s)
    t = as_points(t)
    if t.size == 0 or s.size == 0:
        return s.copy()
    return s[nearest_distances(s, t) > margin]
