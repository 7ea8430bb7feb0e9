"""Lower-norm fields on rectangular grids and their sublevel sets.

Field values are stored as ``(ny, nx)`` arrays: row ``j`` holds the nodes with
imaginary part ``ys[j]`` (increasing), column ``i`` those with real part
``xs[i]``.  "Row-major" everywhere below means this order.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy import ndimage

from .exceptions import ContractError, ConvergenceFailure
from .numkernel import batched_mu, bidiagonal_sigma_min, chunk_size, op_norm
from .setgeom import Disk, Plane
from .validation import check_matrix, check_positive

DEFAULT_NODES = 257
# below this size the Jacobi path is cheap enough for bidiagonal input too
_BIDIAGONAL_MIN_DIM = 12


@dataclass(frozen=True)
class GridSpec:
    center: complex = 0j
    half_width: float = 1.0
    half_height: float = 1.0
    nx: int = DEFAULT_NODES
    ny: int = DEFAULT_NODES

    def __post_init__(self):
        check_positive(self.half_width, "half_width")
        check_positive(self.half_height, "half_height")
        if self.nx < 2 or self.ny < 2:
            raise ContractError("grids need at least 2 nodes per axis")
        object.__setattr__(self, "center", complex(self.center))

    @classmethod
    def square(cls, radius, n=DEFAULT_NODES, center=0j):
        return cls(center, radius, radius, n, n)

    @classmethod
    def from_bounds(cls, x_min, x_max, y_min, y_max, nx=DEFAULT_NODES, ny=DEFAULT_NODES):
        center = complex((x_min + x_max) / 2, (y_min + y_max) / 2)
        return cls(center, (x_max - x_min) / 2, (y_max - y_min) / 2, nx, ny)

    @property
    def hx(self):
        return 2 * self.half_width / (self.nx - 1)

    @property
    def hy(self):
        return 2 * self.half_height / (self.ny - 1)

    @property
    def spacing(self):
        """Largest node spacing."""
        return max(self.hx, self.hy)

    @property
    def diagonal(self):
        """Cell diagonal ``sqrt(hx**2 + hy**2)``."""
        return math.hypot(self.hx, self.hy)

    @property
    def xs(self):
        c = self.center.real
        return np.linspace(c - self.half_width, c + self.half_width, self.nx)

    @property
    def ys(self):
        c = self.center.imag
        return np.linspace(c - self.half_height, c + self.half_height, self.ny)

    @property
    def nodes(self):
        return self.xs[None, :] + 1j * self.ys[:, None]

    def covers_disk(self, radius, center=0j):
        """True if the closed disk fits inside the grid rectangle."""
        dx = abs(center.real - self.center.real) + radius
        dy = abs(center.imag - self.center.imag) + radius
        return dx <= self.half_width and dy <= self.half_height

    def as_dict(self):
        return {
            "center": [self.center.real, self.center.imag],
            "half_width": self.half_width,
            "half_height": self.half_height,
            "nx": self.nx,
            "ny": self.ny,
            "hx": self.hx,
            "hy": self.hy,
            "diagonal": self.diagonal,
        }


@dataclass(frozen=True)
class ScalarField:
    grid: GridSpec
    values: np.ndarray
    source: str = "operator"

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        if v.shape != (self.grid.ny, self.grid.nx):
            raise ContractError(f"values shape {v.shape} does not match grid")
        if not np.all(np.isfinite(v)) or np.any(v < 0):
            raise ContractError("field values must be finite and nonnegative")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)


@dataclass(frozen=True)
class RegionSample:
    grid: GridSpec
    mask: np.ndarray
    points: np.ndarray
    boundary: list
    level: float
    closedness: str = "strict"

    @property
    def is_empty(self):
        return self.points.size == 0


class AnalyticFamily:
    """Closed-form scalar fields ``g_n(lambda)`` used as counterexamples.

    * ``ex2``: ``|lambda| / n``; the limit (``n=None``) is ``0``.
    * ``ex3``: ``h_n(|lambda|)`` with ``h(x) = max(min(|x|, 1), |x| - 1)``,
      ``h_1(x) = x**2 / 4`` and ``h_n = h + (h_1 - h) / n``; the limit is ``h``.
      ``h`` is flat on ``[1, 2]``.
    * ``ex5``: ``|sin(n pi |lambda|)|`` for ``|lambda| <= 1`` and
      ``|lambda| - 1`` beyond; no pointwise limit exists.
    """

    FAMILIES = ("ex2", "ex3", "ex5")

    def __init__(self, family, n=None):
        if family not in self.FAMILIES:
            raise ContractError(f"unknown analytic family {family!r}")
        if n is None and family == "ex5":
            raise ContractError("ex5 has no pointwise limit")
        if n is not None and n < 1:
            raise ContractError("n must be >= 1")
        self.family = family
        self.n = n

    def __repr__(self):
        return f"AnalyticFamily({self.family!r}, n={self.n})"

    @property
    def tag(self):
        return f"{self.family}[n={'inf' if self.n is None else self.n}]"

    @staticmethod
    def _h(x):
        x = np.abs(x)
        return np.maximum(np.minimum(x, 1.0), x - 1.0)

    def __call__(self, lam):
        x = np.abs(np.asarray(lam))
        n = self.n
        if self.family == "ex2":
            return x / n if n is not None else np.zeros(x.shape)
        if self.family == "ex3":
            h = self._h(x)
            return h if n is None else h + (x * x / 4.0 - h) / n
        return np.where(x <= 1.0, np.abs(np.sin(n * np.pi * x)), x - 1.0)

    def sublevel_region(self, eps):
        """Exact strict sublevel set where a closed form is known, else None."""
        if self.family == "ex2":
            return Plane() if self.n is None else Disk(0j, self.n * eps)
        if self.family == "ex3" and eps == 1:
            return Disk(0j, 1.0 if self.n is None else 2.0)
        return None

    def limit_sublevel_region(self, eps):
        """Hausdorff limit of the sublevel sets as ``n`` grows, if known."""
        if self.family == "ex5":
            return Disk(0j, 1.0 + eps)
        if self.family == "ex3" and eps == 1:
            return Disk(0j, 2.0)
        return None


def bounding_radius(a, eps):
    """``|A| + eps``: the pseudospectrum lies in the disk of this radius."""
    check_positive(eps, "eps")
    return op_norm(check_matrix(a, square=True)) + eps


def _bidiagonal_form(a):
    """Return ``(diag, superdiag)`` if ``a`` (or its transpose) is upper
    bidiagonal, else None."""
    n = a.shape[0]
    if n < 2:
        return None
    upper = np.triu(a, 2)
    lower = np.tril(a, -2)
    if upper.any() or lower.any():
        return None
    sup = np.diagonal(a, 1)
    sub = np.diagonal(a, -1)
    if not sub.any():
        return np.diagonal(a).copy(), sup.copy()
    if not sup.any():
        return np.diagonal(a).copy(), sub.copy()
    return None


def field_values(a, lambdas):
    """``mu(A - lambda I)`` at arbitrary points.

    Small or general matrices go through the batched Jacobi kernel
    (``sigma_min`` of both ``A - lambda I`` and its adjoint).  Bidiagonal
    matrices above a small size use bisection on the Golub-Kahan form, which
    is linear in the dimension per point.
    """
    a = check_matrix(a, square=True)
    lam = np.asarray(lambdas, dtype=complex)
    shape = lam.shape
    lam = lam.ravel()
    n = a.shape[0]
    out = np.empty(lam.size)
    bidiag = _bidiagonal_form(a) if n >= _BIDIAGONAL_MIN_DIM else None
    if bidiag is not None:
        d, e = bidiag
        step = chunk_size(2 * n)
        for lo in range(0, lam.size, step):
            part = lam[lo : lo + step]
            out[lo : lo + step] = bidiagonal_sigma_min(
                d[None, :] - part[:, None], np.broadcast_to(e, (part.size, n - 1))
            )
        return out.reshape(shape)
    eye = np.eye(n)
    step = chunk_size(n * n)
    for lo in range(0, lam.size, step):
        part = lam[lo : lo + step]
        stack = a[None, :, :] - part[:, None, None] * eye
        try:
            vals, conv = batched_mu(stack)
        except ConvergenceFailure as exc:
            node = complex(part[exc.node]) if exc.node is not None else None
            raise ConvergenceFailure(f"{exc} at lambda={node}", node=node) from exc
        if not conv.all():
            node = complex(part[np.nonzero(~conv)[0][0]])
            raise ConvergenceFailure(f"SVD did not converge at lambda={node}", node=node)
        out[lo : lo + step] = vals
    return out.reshape(shape)


def evaluate_field(src, grid):
    """Values of ``mu(A - lambda I)`` (or of an analytic family) on the grid."""
    if isinstance(src, AnalyticFamily):
        return ScalarField(grid, src(grid.nodes), source=src.tag)
    return ScalarField(grid, field_values(src, grid.nodes), source="operator")


def sublevel(fld, eps, closedness="strict"):
    """Grid sample of ``{f < eps}`` (strict) or ``{f <= eps}`` (closed)."""
    check_positive(eps, "eps")
    if closedness == "strict":
        mask = fld.values < eps
    elif closedness == "closed":
        mask = fld.values <= eps
    else:
        raise ContractError(f"closedness must be 'strict' or 'closed', not {closedness!r}")
    mask.setflags(write=False)
    points = fld.grid.nodes[mask]
    return RegionSample(fld.grid, mask, points, boundary_polyline(fld, eps), float(eps), closedness)


def _crossing(p0, p1, v0, v1, eps):
    return p0 + (eps - v0) / (v1 - v0) * (p1 - p0)


def boundary_polyline(fld, eps):
    """Level curves ``f = eps`` by marching squares.

    A node is inside when ``f < eps``.  Crossings are placed by linear
    interpolation along cell edges; saddle cells are split according to the
    mean of their four corners.  Returns a list of complex vertex arrays;
    closed loops repeat their first vertex at the end.
    """
    check_positive(eps, "eps")
    v = fld.values
    z = fld.grid.nodes
    inside = v < eps
    ny, nx = v.shape
    # corners: 0 = (j, i), 1 = (j, i+1), 2 = (j+1, i+1), 3 = (j+1, i)
    code = (
        inside[:-1, :-1] * 1
        + inside[:-1, 1:] * 2
        + inside[1:, 1:] * 4
        + inside[1:, :-1] * 8
    )
    cells = np.argwhere((code != 0) & (code != 15))

    # edges: ("h", j, i) joins (j, i)-(j, i+1); ("v", j, i) joins (j, i)-(j+1, i)
    def point(edge):
        kind, j, i = edge
        if kind == "h":
            return _crossing(z[j, i], z[j, i + 1], v[j, i], v[j, i + 1], eps)
        return _crossing(z[j, i], z[j + 1, i], v[j, i], v[j + 1, i], eps)

    segments = []
    for j, i in cells:
        j, i = int(j), int(i)
        c = int(code[j, i])
        bottom, right = ("h", j, i), ("v", j, i + 1)
        top, left = ("h", j + 1, i), ("v", j, i)
        if c in (5, 10):
            center_in = (v[j, i] + v[j, i + 1] + v[j + 1, i + 1] + v[j + 1, i]) / 4.0 < eps
            # with the center inside, the two outside corners are cut off
            if (c == 5) == center_in:
                segments += [(bottom, right), (left, top)]
            else:
                segments += [(bottom, left), (right, top)]
            continue
        edges = []
        if inside[j, i] != inside[j, i + 1]:
            edges.append(bottom)
        if inside[j, i + 1] != inside[j + 1, i + 1]:
            edges.append(right)
        if inside[j + 1, i] != inside[j + 1, i + 1]:
            edges.append(top)
        if inside[j, i] != inside[j + 1, i]:
            edges.append(left)
        segments.append(tuple(edges))

    by_edge = {}
    for k, (e0, e1) in enumerate(segments):
        by_edge.setdefault(e0, []).append(k)
        by_edge.setdefault(e1, []).append(k)
    used = np.zeros(len(segments), dtype=bool)

    def walk(k, start_edge):
        chain = [start_edge]
        edge = start_edge
        while True:
            used[k] = True
            e0, e1 = segments[k]
            edge = e1 if e0 == edge else e0
            chain.append(edge)
            nxt = [m for m in by_edge[edge] if not used[m]]
            if not nxt:
                return chain
            k = nxt[0]

    lines = []
    # open chains start at edges used once (the grid border)
    for edge, ks in by_edge.items():
        if len(ks) == 1 and not used[ks[0]]:
            lines.append(walk(ks[0], edge))
    for k in range(len(segments)):
        if not used[k]:
            lines.append(walk(k, segments[k][0]))
    return [np.array([point(e) for e in chain]) for chain in lines]


def count_components(mask):
    """Number of 4-connected components of a boolean grid mask."""
    _, n = ndimage.label(np.asarray(mask))
    return int(n)
