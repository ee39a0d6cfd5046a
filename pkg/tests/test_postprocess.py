import csv
import json

import numpy as np
import pytest

import crackst as cs
from crackst import postprocess as post


@pytest.fixture(scope="module")
def zero_dset():
    return cs.DensitySet.zeros(6, np.pi, 2 * np.pi)


def test_zero_solution_gives_zero_fields(zero_dset, reference_setup):
    fld = post.crack_face_fields(zero_dset, reference_setup)
    for name in ("sigma_n_plus0", "tau_n_plus0", "sigma_n_minus", "tau_n_minus",
                 "ut_plus0", "un_plus0", "ut_minus", "un_minus"):
        assert np.all(getattr(fld, name) == 0.0)
    assert cs.max_crack_opening(zero_dset, reference_setup) == 0.0
    assert cs.max_crack_aperture(zero_dset, reference_setup) == 0.0


def test_constant_stress_injection(reference_setup):
    dset = cs.DensitySet.zeros(6, np.pi, 2 * np.pi)
    c = 0.3 - 0.1j
    dset.a[0][0] = c.real
    dset.b[0][0] = c.imag
    fld = post.crack_face_fields(dset, reference_setup, n_samples=11)
    assert np.allclose(fld.sigma_n_plus0 + 1j * fld.tau_n_plus0, 2.0 * c)


def test_interface_fields_jump_with_zero_interface_tension(
    zero_interface_solution, zero_interface_setup
):
    dset, _ = zero_interface_solution
    fld = post.interface_fields(dset, zero_interface_setup, n_samples=301)
    jump = (fld.sigma_n_plus0 - fld.sigma_n_minus) + 1j * (fld.tau_n_plus0 - fld.tau_n_minus)
    assert np.max(np.abs(jump)) < 0.01 * zero_interface_setup.load.magnitude


def test_displacement_anchoring(reference_solution, reference_setup):
    dset, _ = reference_solution
    s, u_inc, u_mat = post.displacements(dset, reference_setup)
    mid_crack = 0.5 * dset.l0
    mid_bond = 0.5 * (dset.l0 + dset.l)
    assert abs(np.interp(mid_crack, s, u_inc.real)) < 1e-12
    assert abs(np.interp(mid_crack, s, u_inc.imag)) < 1e-12
    gap = (np.interp(mid_bond, s, u_inc.real) - np.interp(mid_bond, s, u_mat.real)) + 1j * (
        np.interp(mid_bond, s, u_inc.imag) - np.interp(mid_bond, s, u_mat.imag)
    )
    assert abs(gap) < 1e-12


def test_displacement_single_valuedness(reference_solution, reference_setup):
    """Tip-to-tip displacement change agrees between the two crack faces."""
    dset, _ = reference_solution
    s, u_inc, u_mat = post.displacements(dset, reference_setup, n_samples=4001)
    on_crack = s <= dset.l0
    jump_inc = u_inc[on_crack][-1] - u_inc[on_crack][0]
    jump_mat = u_mat[on_crack][-1] - u_mat[on_crack][0]
    assert abs(jump_inc - jump_mat) < 1e-4


def test_opening_scales_with_load(reference_setup):
    d1, _ = cs.solve_problem(reference_setup, 8)
    d2, _ = cs.solve_problem(reference_setup.scaled_load(2.0), 8)
    v1 = cs.max_crack_opening(d1, reference_setup)
    v2 = cs.max_crack_opening(d2, reference_setup)
    assert v2 == pytest.approx(2.0 * v1, rel=1e-9)


def test_opening_window_parameter(reference_solution, reference_setup):
    dset, _ = reference_solution
    central = cs.max_crack_opening(dset, reference_setup)
    full = cs.max_crack_opening(dset, reference_setup, window=(0.0, 1.0))
    assert full >= central > 0.0


def test_potentials_constant_limits(zero_dset, reference_setup):
    phi, psi = cs.potentials_at(zero_dset, reference_setup, 3.0 + 1.0j, "matrix")
    assert phi == pytest.approx(reference_setup.load.gamma)
    assert psi == pytest.approx(reference_setup.load.gamma_prime)
    phi0, psi0 = cs.potentials_at(zero_dset, reference_setup, 0.1 + 0.2j, "inclusion")
    assert phi0 == 0.0 and psi0 == 0.0


def test_potentials_far_field_decay(reference_solution, reference_setup):
    dset, _ = reference_solution
    phi, _ = cs.potentials_at(dset, reference_setup, 100.0 + 0.0j, "matrix")
    gamma = reference_setup.load.gamma
    assert abs(phi - gamma) < 0.01 * abs(gamma)


def test_potentials_region_and_proximity_guards(zero_dset, reference_setup):
    with pytest.raises(post.NearBoundaryError):
        cs.potentials_at(zero_dset, reference_setup, 1.001 + 0.0j, "matrix")
    with pytest.raises(ValueError):
        cs.potentials_at(zero_dset, reference_setup, 0.1 + 0.1j, "matrix")
    with pytest.raises(ValueError):
        cs.potentials_at(zero_dset, reference_setup, 3.0 + 0.0j, "inclusion")


def test_tip_exponent_fields(reference_solution, reference_setup):
    dset, _ = reference_solution
    fits = cs.tip_exponents(dset, reference_setup, tip=0)
    for key in (
        "sigma_power_exponent",
        "tau_power_exponent",
        "tau_log_coefficient",
        "tau_log_fit_relative_residual",
    ):
        assert np.isfinite(fits[key])


def test_boundary_fields_csv_schema_and_determinism(tmp_path, reference_solution, reference_setup):
    dset, _ = reference_solution
    fld = post.crack_face_fields(dset, reference_setup, n_samples=20)
    p1, p2 = tmp_path / "a.csv", tmp_path / "b.csv"
    post.write_boundary_fields_csv(p1, fld)
    post.write_boundary_fields_csv(p2, fld)
    assert p1.read_bytes() == p2.read_bytes()
    rows = list(csv.DictReader(open(p1)))
    assert len(rows) == 20
    assert "sigma_n_plus_0" in rows[0] and "re_g0_prime" in rows[0]
    float(rows[3]["tau_n_minus"])  # parses as a number


def test_deformed_boundary_csv(tmp_path, reference_solution, reference_setup):
    dset, _ = reference_solution
    cols = post.deformed_boundary(dset, reference_setup, scale=2.0, n_samples=50)
    path = tmp_path / "deformed.csv"
    post.write_deformed_boundary_csv(path, cols)
    rows = list(csv.DictReader(open(path)))
    assert len(rows) == 50
    assert set(rows[0]) == {
        "s",
        "x_undeformed",
        "y_undeformed",
        "x_deformed_inclusion",
        "y_deformed_inclusion",
        "x_deformed_matrix",
        "y_deformed_matrix",
    }


def test_summary_json(tmp_path, reference_solution, reference_setup):
    dset, report = reference_solution
    path = tmp_path / "summary.json"
    post.write_summary_json(path, dset, reference_setup, report, extra={"tag": "x"})
    data = json.loads(path.read_text())
    assert data["order"] == dset.n
    assert data["tag"] == "x"
    assert len(data["tip_fits"]) == 2
    assert data["max_crack_opening"] > 0.0
