import numpy as np
import pytest

import crackst as cs
from crackst.model import m_coefficients_from_frame


def test_kolosov_values():
    assert cs.kolosov(0.25) == pytest.approx(2.2)
    assert cs.kolosov(0.25, "plane-strain") == pytest.approx(2.0)
    assert cs.kolosov(0.35) == pytest.approx(2.65 / 1.35)


def test_kolosov_range_and_mode():
    with pytest.raises(ValueError):
        cs.kolosov(0.7)
    with pytest.raises(ValueError):
        cs.kolosov(-1.0)
    with pytest.raises(ValueError):
        cs.kolosov(0.3, "plane-banana")


def test_kolosov_monotone_in_poisson():
    nus = np.linspace(-0.9, 0.45, 30)
    for mode in ("plane-stress", "plane-strain"):
        k = [cs.kolosov(nu, mode) for nu in nus]
        assert all(k[i + 1] < k[i] for i in range(len(k) - 1))


def test_far_field_constants():
    g, gp = cs.far_field_constants(1.0, 0.0, 0.0)
    assert g == pytest.approx(0.25)
    assert gp == pytest.approx(-0.5)
    g, gp = cs.far_field_constants(1.0, 0.0, np.pi / 2)
    assert g == pytest.approx(0.25)
    assert gp == pytest.approx(0.5)
    g, gp = cs.far_field_constants(3.0, 3.0, 1.234)
    assert g == pytest.approx(1.5)
    assert gp == pytest.approx(0.0, abs=1e-15)


def test_far_field_invariant_under_axis_relabeling():
    for s1, s2, al in ((1.0, 0.2, 0.4), (2.0, -1.0, 1.1)):
        a = cs.far_field_constants(s1, s2, al)
        b = cs.far_field_constants(s2, s1, al + np.pi / 2)
        assert a[0] == pytest.approx(b[0])
        assert a[1] == pytest.approx(b[1])


def test_material_validation():
    with pytest.raises(ValueError):
        cs.Material(-1.0, 0.3)
    with pytest.raises(ValueError):
        cs.Material(10.0, 0.6)
    m = cs.Material(40.0, 0.25)
    assert 1.0 < m.kappa < 3.0


def test_surface_tension_validation():
    with pytest.raises(ValueError):
        cs.SurfaceTension(0.0, 0.1, 0.0)
    with pytest.raises(ValueError):
        cs.SurfaceTension(0.1, -0.1, 0.0)
    with pytest.raises(ValueError):
        cs.SurfaceTension(0.1, 0.1, -0.5)
    cs.SurfaceTension(0.1, 0.1, 0.0)  # zero interface tension is fine


def test_m_coefficients_on_unit_circle():
    c = cs.circular_contour(1.0, (0.0, np.pi))
    m1, m2, m3, m4 = cs.m_coefficients(c, 0.0)
    assert m3 == pytest.approx(-4.0)
    assert m4 == pytest.approx(2.0)
    assert m1 == pytest.approx(4j)
    assert m2 == pytest.approx(0.0, abs=1e-14)


def test_m_coefficients_straight_segment():
    m = m_coefficients_from_frame(1.0 + 0j, 0.0j, 0.0j, 0.0, 0.0)
    assert all(abs(v) < 1e-15 for v in m)


def test_m_coefficients_vanish_with_curvature():
    # m3 and m4 are proportional to the curvature
    _, _, m3, m4 = m_coefficients_from_frame(1j, 0.0j, 1.0 + 0j, 0.0, 0.7)
    assert abs(m3) < 1e-15 and abs(m4) < 1e-15


def test_degenerate_pair_flag(unit_semicircle):
    same = cs.Material(40.0, 0.25)
    setup = cs.ProblemSetup(
        contour=unit_semicircle,
        matrix=same,
        inclusion=same,
        surface=cs.SurfaceTension(0.1, 0.1, 0.0),
        load=cs.RemoteLoad(1.0, 0.0, 0.0),
    )
    assert setup.is_degenerate_pair
    other = cs.ProblemSetup(
        contour=unit_semicircle,
        matrix=cs.Material(40.0, 0.25),
        inclusion=cs.Material(60.0, 0.35),
        surface=cs.SurfaceTension(0.1, 0.1, 0.0),
        load=cs.RemoteLoad(1.0, 0.0, 0.0),
    )
    assert not other.is_degenerate_pair


def test_tractions_presets():
    z = cs.CrackTractions.zero()
    s = np.linspace(0.0, 1.0, 5)
    assert np.all(z.f1(s) == 0) and np.all(z.f2(s) == 0)
    t = cs.CrackTractions.constant(f1=1.0 + 2.0j, f2=-0.5j)
    assert np.allclose(t.f1(s), 1.0 + 2.0j)
    assert np.allclose(t.f2(s), -0.5j)
    assert np.allclose(t.scaled(2.0).f1(s), 2.0 + 4.0j)


def test_tractions_reject_nonfinite():
    bad = cs.CrackTractions(f1=lambda s: np.full_like(np.asarray(s), np.inf))
    with pytest.raises(ValueError):
        bad.f1(np.array([0.1]))
