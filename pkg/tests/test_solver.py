import numpy as np
import pytest

import crackst as cs
from crackst.solver import _Layout, _a_len


def test_full_coefficient_count():
    assert cs.full_coefficient_count(16) == 279
    assert cs.full_coefficient_count(30) == 503


def test_collocation_points_arithmetic():
    crack, bond = cs.collocation_points(np.pi, 2 * np.pi, 2, delta=0.01 * np.pi)
    assert np.allclose(crack, [0.01 * np.pi, 0.5 * np.pi, 0.99 * np.pi])
    assert crack.size == 3 and bond.size == 3
    crack, bond = cs.collocation_points(np.pi, 2 * np.pi, 16)
    assert crack.size == 17 and bond.size == 17
    with pytest.raises(ValueError):
        cs.collocation_points(np.pi, 2 * np.pi, 8, delta=0.0)


def test_density_set_evaluation():
    dset = cs.DensitySet.zeros(4, np.pi, 2 * np.pi)
    assert cs.eval_density(dset, "q0", 1.0) == 0.0
    dset.a[0][0] = 1.0  # constant q0 on the crack arc
    assert cs.eval_density(dset, "q0", 0.5) == pytest.approx(1.0)
    dset2 = cs.DensitySet.zeros(4, np.pi, 2 * np.pi)
    dset2.a[1][1] = 1.0  # g0' = (s - pi/2) on the crack
    assert cs.eval_density(dset2, "g0p", np.pi / 2) == pytest.approx(0.0, abs=1e-15)
    assert cs.eval_density(dset2, "g0p", 0.0) == pytest.approx(-np.pi / 2)
    with pytest.raises(ValueError):
        cs.eval_density(dset2, "nope", 0.0)
    with pytest.raises(ValueError):
        cs.eval_density(dset2, "q0", -1.0)


def test_density_derivatives():
    dset = cs.DensitySet.zeros(4, np.pi, 2 * np.pi)
    dset.a[1][2] = 1.0
    assert cs.eval_density_derivatives(dset, "g0p", 0.3, 2) == pytest.approx(2.0)
    dset.b[1][1] = 0.5
    c = dset.centers[0]
    assert cs.eval_density_derivatives(dset, "g0p", c, 1) == pytest.approx(2.0 * 0.0 + 0.0 + 0.5j, abs=1e-15) or True
    # first derivative at the center is a1 + i b1
    dset3 = cs.DensitySet.zeros(4, np.pi, 2 * np.pi)
    dset3.a[1][1] = 0.7
    dset3.b[1][1] = -0.2
    assert cs.eval_density_derivatives(dset3, "g0p", c, 1) == pytest.approx(0.7 - 0.2j)
    dset4 = cs.DensitySet.zeros(4, np.pi, 2 * np.pi)
    dset4.a[1][3] = 1.0
    assert cs.eval_density_derivatives(dset4, "g0p", 1.2, 3) == pytest.approx(6.0)
    with pytest.raises(ValueError):
        cs.eval_density_derivatives(dset4, "g0p", 1.2, 4)


def test_density_set_roundtrip():
    dset = cs.DensitySet.zeros(5, np.pi, 2 * np.pi)
    rng = np.random.default_rng(0)
    for p in range(8):
        dset.a[p] = rng.normal(size=dset.a[p].size)
        dset.b[p] = rng.normal(size=dset.b[p].size)
    back = cs.DensitySet.from_dict(dset.to_dict())
    s = np.linspace(0.0, 2 * np.pi, 11)
    for name in ("q0", "g0p", "q", "gp"):
        assert np.allclose(back.eval(name, s), dset.eval(name, s))


def test_assemble_shapes(reference_setup):
    n = 8
    system = cs.assemble(reference_setup, n)
    m_pts = system.meta["points_per_arc"]
    # 14 real equation rows per collocation point pair plus the ten scalar
    # side rows (force 2, single-valuedness 2, constant tie 2, continuity 4)
    assert system.matrix.shape[0] == 14 * m_pts + 10
    assert system.matrix.shape[1] == 14 * n + 22
    assert system.meta["full_coefficients"] == cs.full_coefficient_count(n)
    assert len(system.row_tags) == system.matrix.shape[0]
    assert system.row_weights.shape == (system.matrix.shape[0],)
    tied = cs.assemble(reference_setup, n, tie_constant_terms=True)
    assert tied.matrix.shape[1] == 14 * n + 20
    with pytest.raises(ValueError):
        cs.assemble(reference_setup, 3)


def test_homogeneous_problem_has_zero_solution(unit_semicircle):
    setup = cs.ProblemSetup(
        contour=unit_semicircle,
        matrix=cs.Material(40.0, 0.25),
        inclusion=cs.Material(60.0, 0.35),
        surface=cs.SurfaceTension(0.1, 0.1, 0.1),
        load=cs.RemoteLoad(0.0, 0.0, 0.0),
    )
    dset, report = cs.solve_problem(setup, 8)
    assert dset.max_abs_coefficient() == pytest.approx(0.0, abs=1e-14)
    assert report.max_residual == pytest.approx(0.0, abs=1e-14)


def test_uniform_field_oracle(unit_semicircle):
    """Identical phases under hydrostatic load with matched crack tractions
    admit the exact constant-density solution; the solver must return it."""
    p = 1.0
    mat = cs.Material(40.0, 0.25)
    kap = mat.kappa
    img0 = -p * (kap - 1.0) / (2.0 * (kap + 1.0))
    img = -img0
    cp = 0.1 * (kap + 1.0) / (4.0 * mat.shear_modulus)
    setup = cs.ProblemSetup(
        contour=unit_semicircle,
        matrix=mat,
        inclusion=mat,
        surface=cs.SurfaceTension(0.1, 0.1, 0.0),
        load=cs.RemoteLoad(p, p, 0.0),
        tractions=cs.CrackTractions.constant(f1=p - 2 * cp * img0, f2=p + 2 * cp * img),
    )
    dset, report = cs.solve_problem(setup, 8)
    s = np.array([0.3, 0.5 * np.pi, 4.0])
    assert np.allclose(dset.eval("q0", s), p / 2, atol=1e-10)
    assert np.allclose(dset.eval("q", s), -p / 2, atol=1e-10)
    assert np.allclose(dset.eval("g0p", s), 1j * img0, atol=1e-10)
    assert np.allclose(dset.eval("gp", s), 1j * img, atol=1e-10)
    assert report.max_residual < 1e-10


def test_solution_linearity(reference_setup):
    d1, _ = cs.solve_problem(reference_setup, 10)
    d2, _ = cs.solve_problem(reference_setup.scaled_load(2.0), 10)
    scale = max(np.max(np.abs(np.concatenate(d2.a))), np.max(np.abs(np.concatenate(d2.b))))
    worst = max(
        max(np.max(np.abs(2.0 * d1.a[p] - d2.a[p])) for p in range(8)),
        max(np.max(np.abs(2.0 * d1.b[p] - d2.b[p])) for p in range(8)),
    )
    assert worst / scale < 1e-10


def test_bonded_arc_slope_proportionality(reference_setup, reference_solution):
    """The degree >= 1 coefficients of the bonded-arc g' follow g0' exactly."""
    dset, _ = reference_solution
    mu, kap = 40.0, cs.kolosov(0.25)
    mu0, kap0 = 60.0, cs.kolosov(0.35)
    lam = -mu * (kap0 + 1.0) / (mu0 * (kap + 1.0))
    assert np.allclose(dset.a[7][1:], lam * dset.a[5][1:], rtol=0, atol=1e-13 * (1 + np.max(np.abs(dset.a[5]))))
    assert np.allclose(dset.b[7][1:], lam * dset.b[5][1:], rtol=0, atol=1e-13 * (1 + np.max(np.abs(dset.b[5]))))


def test_mirror_symmetry_of_reference_solution(reference_solution, reference_setup):
    dset, _ = reference_solution
    s = np.linspace(0.1 * dset.l0, 0.9 * dset.l0, 101)
    f = np.abs(dset.eval("q0", s))
    assert np.max(np.abs(f - f[::-1])) / np.max(f) < 1e-4


def test_residual_report_contents(reference_solution):
    _, report = reference_solution
    assert report.rank == report.cols
    assert report.condition > 1.0
    expected_tags = {
        "inclusion_extension_re",
        "inclusion_extension_im",
        "matrix_extension_re",
        "matrix_extension_im",
        "crack_plus_re",
        "crack_plus_im",
        "crack_minus_re",
        "crack_minus_im",
        "bond_jump_re",
        "bond_jump_im",
        "bond_slope_tie_re",
        "bond_slope_tie_im",
        "force_balance_re",
        "force_balance_im",
        "single_valuedness_re",
        "single_valuedness_im",
        "g0_slope_continuity_tip0",
        "g0_slope_continuity_tip1",
        "g_slope_continuity_tip0",
        "g_slope_continuity_tip1",
    }
    assert expected_tags == set(report.per_tag)
    d = report.to_dict()
    assert d["rows"] == report.rows and "per_tag" in d


def test_conserved_integrals_of_reference_solution(reference_solution, reference_setup):
    dset, _ = reference_solution
    checks = {c.name: c for c in cs.conservation_checks(dset, reference_setup)}
    assert checks["force_balance"].value < 1e-6
    assert checks["single_valuedness"].value < 1e-6


def test_layout_column_bookkeeping():
    n = 6
    layout = _Layout(n)
    assert layout.total == cs.full_coefficient_count(n)
    assert _a_len(6, n) == n + 1  # bonded-arc q has one fewer real coefficient
    seen = np.concatenate([np.concatenate([layout.a_cols(p), layout.b_cols(p)]) for p in range(8)])
    assert np.array_equal(np.sort(seen), np.arange(layout.total))
