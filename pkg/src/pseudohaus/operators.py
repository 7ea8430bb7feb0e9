"""Finite operators, band operators on Z and operator sequences.

A band operator is stored by its diagonals: the entry in row ``r`` and column
``c`` (both integers) is ``rule[c - r](r)``, so a rule is evaluated at the row
position.  Periodic rules use phase ``r mod q``, i.e. position 0 reads the
first listed value.
"""

from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from .exceptions import ContractError
from .numkernel import batched_singular_values
from .validation import check_matrix


@dataclass(frozen=True)
class Const:
    value: complex

    def __call__(self, pos):
        return np.full(np.shape(pos), complex(self.value))


@dataclass(frozen=True)
class Periodic:
    values: tuple

    def __post_init__(self):
        if len(self.values) == 0:
            raise ContractError("periodic rule needs at least one value")
        object.__setattr__(self, "values", tuple(complex(v) for v in self.values))

    def __call__(self, pos):
        vals = np.asarray(self.values, dtype=complex)
        return vals[np.mod(np.asarray(pos), len(vals))]


@dataclass(frozen=True)
class Perturbed:
    """A constant ``base`` except at finitely many positions."""

    base: complex
    support: Mapping[int, complex] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(
            self, "support", {int(k): complex(v) for k, v in dict(self.support).items()}
        )

    def __call__(self, pos):
        pos = np.asarray(pos)
        out = np.full(pos.shape, complex(self.base))
        for k, v in self.support.items():
            out[pos == k] = v
        return out

    def __hash__(self):
        return hash((self.base, tuple(sorted(self.support.items()))))


@dataclass(frozen=True)
class BandOperator:
    """Bounded band operator on l2(Z) given by its nonzero diagonals.

    ``diagonals`` maps an offset ``k = column - row`` to a coefficient rule.
    """

    diagonals: Mapping[int, object]
    bandwidth: int = None

    def __post_init__(self):
        diags = {int(k): rule for k, rule in dict(self.diagonals).items()}
        width = max((abs(k) for k in diags), default=0)
        if self.bandwidth is None:
            object.__setattr__(self, "bandwidth", width)
        elif self.bandwidth < width:
            raise ContractError(f"offset {width} outside declared bandwidth {self.bandwidth}")
        for k, rule in diags.items():
            if not callable(rule):
                raise ContractError(f"rule for offset {k} is not callable")
        object.__setattr__(self, "diagonals", diags)

    def __hash__(self):
        return hash((self.bandwidth, tuple(sorted(self.diagonals.items(), key=lambda kv: kv[0]))))

    def block(self, rows, cols):
        """Dense block with the given integer row and column positions."""
        rows = np.asarray(rows)[:, None]
        cols = np.asarray(cols)[None, :]
        off = cols - rows
        out = np.zeros(np.broadcast(rows, cols).shape, dtype=complex)
        for k, rule in self.diagonals.items():
            hit = off == k
            if hit.any():
                vals = rule(np.broadcast_to(rows, out.shape)[hit])
                out[hit] = vals
        return out


def shift_operator():
    """The bilateral shift: ones on offset +1."""
    return BandOperator({1: Const(1.0)})


def identity_operator():
    return BandOperator({0: Const(1.0)})


def embed_matrix(a, start=0):
    """Band operator equal to the identity except for the block ``a``.

    ``a`` occupies rows and columns ``start .. start + n - 1``; all of its
    nonzero diagonals become finitely supported deviations (from 1 on the
    main diagonal, from 0 elsewhere).
    """
    a = check_matrix(a, square=True)
    n = a.shape[0]
    diags = {}
    for k in range(-(n - 1), n):
        vals = np.diagonal(a, offset=k)
        rows = np.arange(n - abs(k)) + (start if k >= 0 else start - k)
        base = 1.0 if k == 0 else 0.0
        support = {int(r): complex(v) for r, v in zip(rows, vals) if v != base}
        if k == 0 or support:
            diags[k] = Perturbed(base, support)
    return BandOperator(diags)


def shifted(a, lam):
    """``A - lambda I``."""
    a = check_matrix(a, square=True)
    return a - lam * np.eye(a.shape[0])


def finite_section(band, n):
    """Restriction of ``band`` to the index window ``-n .. n``."""
    if n < 0:
        raise ContractError("section index n must be >= 0")
    idx = np.arange(-n, n + 1)
    return band.block(idx, idx)


def window_lower_norm(band, lam, d, positions):
    """Upper bound for the lower norm of ``band - lam I`` from finite windows.

    For each start ``k`` in ``positions`` the columns ``k .. k+d-1`` are
    restricted to the rows they can reach, ``k-b .. k+d-1+b``, and the
    smallest singular value of that tall slice is taken; the minimum over
    starts is returned.  Every slice value bounds the true lower norm from
    above, and widening ``d`` over the same starts can only lower it.
    """
    if d < 1:
        raise ContractError("window width d must be >= 1")
    positions = np.atleast_1d(np.asarray(list(positions), dtype=np.int64))
    if positions.size == 0:
        raise ContractError("window positions are empty")
    b = band.bandwidth
    stack = np.empty((positions.size, d + 2 * b, d), dtype=complex)
    for i, k in enumerate(positions):
        rows = np.arange(k - b, k + d + b)
        cols = np.arange(k, k + d)
        block = band.block(rows, cols)
        block[b + np.arange(d), np.arange(d)] -= lam
        stack[i] = block
    values, _, _ = batched_singular_values(stack)
    return float(values[:, -1].min())


class OperatorSequence:
    """Rule-generated family ``n -> A_n`` over ``n_min .. n_max``."""

    kind = None

    def __init__(self, n_min, n_max):
        if n_max < n_min:
            raise ContractError("empty index range")
        self.n_min = int(n_min)
        self.n_max = int(n_max)

    def _check(self, n):
        if not self.n_min <= n <= self.n_max:
            raise ContractError(f"n={n} outside {self.n_min}..{self.n_max}")

    def member(self, n):
        self._check(n)
        return self._member(int(n))

    def __getitem__(self, n):
        return self.member(n)

    def indices(self):
        return range(self.n_min, self.n_max + 1)


class ExplicitSequence(OperatorSequence):
    kind = "explicit"

    def __init__(self, matrices, n_min=1):
        self.matrices = [check_matrix(m, square=True) for m in matrices]
        super().__init__(n_min, n_min + len(self.matrices) - 1)

    def _member(self, n):
        return self.matrices[n - self.n_min].copy()


class PerturbationSequence(OperatorSequence):
    """``A_n = A + E / n``."""

    kind = "perturbation"

    def __init__(self, a, e, n_min=1, n_max=1 << 20):
        self.a = check_matrix(a, square=True)
        self.e = check_matrix(e, square=True)
        if self.a.shape != self.e.shape:
            raise ContractError("A and E must have the same shape")
        if n_min < 1:
            raise ContractError("perturbation sequences start at n >= 1")
        super().__init__(n_min, n_max)

    def _member(self, n):
        return self.a + self.e / n


class SectionSequence(OperatorSequence):
    """``A_n`` = finite section of a band operator on ``-n .. n``."""

    kind = "sections"

    def __init__(self, band, n_min=0, n_max=1 << 10):
        self.band = band
        super().__init__(n_min, n_max)

    def _member(self, n):
        return finite_section(self.band, n)


def sequence_member(seq, n):
    return seq.member(n)
