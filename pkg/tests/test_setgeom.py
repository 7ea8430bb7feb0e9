import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import hausdorff_scipy
from pseudohaus import ContractError, SplitMix64
from pseudohaus.setgeom import (
    Annulus,
    Disk,
    Plane,
    SetSequence,
    UnionOfDisks,
    difference_with_margin,
    directed_hausdorff,
    dist_point,
    hausdorff,
    hausdorff_brute,
    hausdorff_symbolic,
    liminf_estimate,
    limsup_estimate,
    nearest_distances,
)

EMPTY = np.zeros(0, dtype=complex)


def grid_disk(radius, h, extent=2.5):
    xs = np.arange(-extent, extent + h / 2, h)
    z = xs[None, :] + 1j * xs[:, None]
    return z[np.abs(z) < radius]


def test_dist_point_examples():
    assert dist_point(0, [1, 2j]) == 1
    assert dist_point(1 + 1j, [1 + 1j]) == 0
    circle = np.exp(2j * np.pi * np.arange(360) / 360)
    assert 2 <= dist_point(3, circle) <= 2 + 0.01
    assert dist_point(0, EMPTY) == math.inf


def test_hausdorff_conventions():
    assert hausdorff(EMPTY, EMPTY) == 0
    assert hausdorff(EMPTY, [1]) == math.inf
    assert hausdorff([1], EMPTY) == math.inf
    assert directed_hausdorff(EMPTY, [1]) == 0


def test_hausdorff_examples():
    s = SplitMix64(1).complex_normal(50)
    assert hausdorff(s, s) == 0
    h = 0.05
    d = hausdorff(grid_disk(1, h), grid_disk(2, h))
    assert abs(d - 1) <= h * math.sqrt(2)


def test_pair_layout_accepted():
    assert hausdorff(np.array([[0.0, 0.0], [1.0, 0.0]]), [0, 1 + 0j]) == 0


def test_grid_equals_brute_and_scipy():
    rng = SplitMix64(77)
    for k in range(20):
        s = rng.complex_normal(int(rng.integers(1, 400))) * (1 + k)
        t = rng.complex_normal(int(rng.integers(1, 400))) + k * 0.3
        g = hausdorff(s, t)
        assert abs(g - hausdorff_brute(s, t)) <= 1e-12
        assert abs(g - hausdorff_scipy(s, t)) <= 1e-12


def test_grid_degenerate_layouts():
    line = np.linspace(0, 1, 200) + 0j
    point = np.array([0.5 + 0.5j])
    same = np.full(10, 2 + 1j)
    for s, t in ((line, point), (point, line), (same, line), (line * 1e-9, line * 1e9)):
        assert np.allclose(nearest_distances(s, t), nearest_distances(s, t, "brute"), rtol=0, atol=1e-12)
    with pytest.raises(ContractError):
        nearest_distances(line, point, "kd")


@settings(max_examples=60, deadline=None)
@given(seed=st.integers(0, 2**32), sizes=st.tuples(*[st.integers(1, 60)] * 3))
def test_pseudometric_axioms(seed, sizes):
    rng = SplitMix64(seed)
    s, t, u = (rng.complex_normal(k) for k in sizes)
    assert hausdorff(s, t) == hausdorff(t, s)
    assert hausdorff(s, t) <= hausdorff(s, u) + hausdorff(u, t) + 1e-12
    assert hausdorff(s, s) == 0
    assert hausdorff(np.concatenate([s, s[:3]]), t) == hausdorff(s, t)


def test_symbolic_examples():
    bounded = np.array([0, 1 + 1j])
    assert hausdorff_symbolic(bounded, Plane(), 0.1) == math.inf
    res = 0.02
    sampled_unit = Disk(0, 1).sample(res)
    assert hausdorff_symbolic(sampled_unit, Disk(0, 1), res) <= res
    h = 0.05
    d = hausdorff_symbolic(grid_disk(2, h), Disk(0, 1), res)
    assert abs(d - 1) <= h * math.sqrt(2) + res
    with pytest.raises(ContractError):
        hausdorff_symbolic(bounded, Disk(0, 1), 0)


def test_symbolic_empty_conventions():
    assert hausdorff_symbolic(EMPTY, Disk(0, 0), 0.1) == 0
    assert hausdorff_symbolic([0], Disk(0, 0), 0.1) == math.inf
    assert hausdorff_symbolic(EMPTY, Disk(0, 1), 0.1) == math.inf


def test_regions():
    u = UnionOfDisks.around([0, 2], 0.5)
    z = np.array([0.2, 1.0, 2.4, 3.0])
    assert u.contains(z).tolist() == [True, False, True, False]
    assert np.allclose(u.distance(z), [0, 0.5, 0, 0.5])
    a = Annulus(1j, 1, 2)
    assert a.contains(np.array([1j, 2.5j, 4j])).tolist() == [False, True, False]
    s = a.sample(0.05)
    assert np.all(np.abs(np.abs(s - 1j) - 1.5) <= 0.5 + 1e-12)
    with pytest.raises(ContractError):
        Annulus(0, 2, 1)
    with pytest.raises(ContractError):
        Disk(0, -1)


def test_disk_sample_gap():
    s = Disk(1 + 1j, 1.0).sample(0.05)
    probe = 1 + 1j + 0.999 * np.exp(2j * np.pi * np.linspace(0, 1, 997)) * np.linspace(0, 1, 997)
    assert nearest_distances(probe, s).max() <= 0.05


def test_liminf_limsup_examples():
    s = np.array([0, 1j, 2])
    const = SetSequence(lambda n: s, 1, 10)
    assert set(liminf_estimate(const, None, 0.1)) == set(s)
    assert set(limsup_estimate(const, None, 0.1)) == set(s)
    decay = SetSequence(lambda n: [1 / n], 1, 20)
    assert liminf_estimate(decay, None, 1.0).tolist() == [1 / 20]
    alt = SetSequence(lambda n: [n % 2], 1, 10)
    assert sorted(limsup_estimate(alt, None, 0.1).real) == [0, 1]
    assert liminf_estimate(alt, None, 0.1).size == 0
    sign = SetSequence(lambda n: [(-1) ** n + 1 / n], 1, 100)
    # 25 even and 25 odd members: both signs reach the 0.5 fraction
    est = limsup_estimate(sign, range(51, 101), 0.05)
    assert est.size > 0
    assert np.all(np.minimum(np.abs(est - 1), np.abs(est + 1)) <= 0.05)
    assert np.any(est.real > 0) and np.any(est.real < 0)
    with pytest.raises(ContractError):
        liminf_estimate(const, [], 0.1)
    with pytest.raises(ContractError):
        limsup_estimate(const, None, 0.1, fraction=0)


def test_liminf_of_grid_sequence():
    seq = SetSequence(lambda n: np.arange(n + 1) / n, 1, 50)
    est = liminf_estimate(seq, range(25, 51), 0.02)
    unit = np.linspace(0, 1, 1001)
    assert hausdorff(est, unit) <= 0.04


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(0, 2**32), r=st.floats(0.01, 1.0))
def test_liminf_inside_limsup(seed, r):
    rng = SplitMix64(seed)
    members = {n: rng.complex_normal(int(rng.integers(1, 20))) for n in range(1, 9)}
    seq = SetSequence(lambda n: members[n], 1, 8)
    low = liminf_estimate(seq, None, r)
    high = limsup_estimate(seq, None, r)
    assert set(low.tolist()) <= set(high.tolist())


def test_difference_with_margin_examples():
    s = np.arange(101) / 100 + 0j
    assert np.array_equal(difference_with_margin(s, EMPTY, 0.3), s)
    assert difference_with_margin(s, s, 0).size == 0
    t = np.array([0, 1 / 3, 2 / 3, 1]) + 0j
    got = difference_with_margin(s, t, 0.02)
    expect = [x for x in s if min(abs(x - y) for y in t) > 0.02]
    assert got.tolist() == expect
    with pytest.raises(ContractError):
        difference_with_margin(s, t, -1)


def test_difference_witness_half_interval():
    s = np.arange(201) / 200 + 0j
    t = s[s.real <= 0.5]
    r = 0.02
    seq = SetSequence(lambda n: difference_with_margin(s, t, 0.0), 1, 20)
    est = liminf_estimate(seq, None, r)
    witness = difference_with_margin(s, t, 2 * r)
    assert witness.size > 0
    assert np.all(nearest_distances(witness, est) == 0)
