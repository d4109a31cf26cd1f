import math

import numpy as np
import pytest

import biphoton


def set_b():
    n_o = biphoton.CrystalDispersion.bbo().index_ordinary(0.8094)
    return biphoton.SpdcParams(0.4047, 0.1, 0.1, 0.1, n_o)


def test_indices_and_cut():
    bbo = biphoton.CrystalDispersion.bbo()
    assert round(bbo.index_extraordinary(0.4047), 5) == 1.56801
    assert biphoton.collinear_cut_angle(bbo) == pytest.approx(0.5008, abs=1e-3)
    assert biphoton.phase_match(bbo, 0.3)["theta0"] is None
    with pytest.raises(biphoton.RangeError):
        bbo.index_ordinary(2.0)


def test_single_particle_curve_is_unit_area():
    p = set_b()
    kappa = biphoton.default_grid(p, 801)
    x, y = biphoton.single_particle_curve(p, kappa)
    assert np.trapezoid(y, x) == pytest.approx(1.0, rel=1e-12)
    # two peaks near |kappa| = theta0
    assert abs(x[np.argmax(y)]) == pytest.approx(0.1, abs=0.01)


def test_report_and_sampling():
    p = set_b()
    r = biphoton.entanglement_report(p)
    assert r["ratio_R"] == pytest.approx(1097.8, abs=0.1)
    pairs = biphoton.sample_pairs(p, 2000, 5, 100.0)
    assert pairs.shape == (2000, 4)
    again = biphoton.sample_pairs(p, 2000, 5, 100.0)
    assert np.array_equal(pairs, again)
    ring = biphoton.ring_from_params(p, 100.0)
    assert ring.r0 == pytest.approx(100.0 * 0.1)
    assert math.isfinite(biphoton.f_exact(0.0, p))
