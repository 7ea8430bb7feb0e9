"""Seeded SplitMix64 generator.

The stream is fully specified so that draws reproduce bit-for-bit on any
platform:

* state advances by ``0x9E3779B97F4A7C15`` (mod 2**64) per draw and the
  output is the standard SplitMix64 finalizer of the new state;
* ``uniform`` maps a word ``w`` to ``(w >> 11) * 2**-53`` in ``[0, 1)``;
* ``normal`` consumes two uniforms ``u1, u2`` per value and returns
  ``sqrt(-2 log(1 - u1)) * cos(2 pi u2)`` (Box-Muller, cosine branch only);
* ``complex_normal`` draws the real parts first, then the imaginary parts,
  each scaled by ``1/sqrt(2)`` so that ``E|z|^2 = 1``.
"""

import numpy as np

_GAMMA = 0x9E3779B97F4A7C15
_MASK = (1 << 64) - 1


def _finalize(z):
    z = (z ^ (z >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)
    z = (z ^ (z >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)
    return z ^ (z >> np.uint64(31))


class SplitMix64:
    """Counter-based SplitMix64; ``draw`` calls are vectorized."""

    def __init__(self, seed=0):
        self.state = int(seed) & _MASK

    def words(self, size):
        size = int(size)
        steps = np.arange(1, size + 1, dtype=np.uint64)
        z = steps * np.uint64(_GAMMA) + np.uint64(self.state)
        self.state = (self.state + size * _GAMMA) & _MASK
        return _finalize(z)

    def uniform(self, size=None):
        n = 1 if size is None else int(np.prod(size))
        u = (self.words(n) >> np.uint64(11)).astype(np.float64) * 2.0**-53
        return float(u[0]) if size is None else u.reshape(size)

    def normal(self, size=None):
        n = 1 if size is None else int(np.prod(size))
        u = self.uniform(2 * n)
        r = np.sqrt(-2.0 * np.log1p(-u[:n]))
        z = r * np.cos(2.0 * np.pi * u[n:])
        return float(z[0]) if size is None else z.reshape(size)

    def complex_normal(self, size):
        re = self.normal(size)
        im = self.normal(size)
        return (re + 1j * im) / np.sqrt(2.0)

    def integers(self, low, high, size=None):
        """Integers in ``[low, high)`` via floor of a uniform draw."""
        u = self.uniform(size if size is not None else (1,))
        out = low + np.floor(u * (high - low)).astype(np.int64)
        return int(out[0]) if size is None else out


def random_matrix(rows, cols, rng):
    """Complex Gaussian matrix with unit-variance entries."""
    return rng.complex_normal((rows, cols))


def random_unitary(n, rng):
    """Product of ``n`` complex Householder reflectors built from Gaussian vectors."""
    q = np.eye(n, dtype=complex)
    for _ in range(n):
        v = rng.complex_normal(n)
        v /= np.linalg.norm(v)
        q = q - 2.0 * np.outer(q @ v, v.conj())
    return q
