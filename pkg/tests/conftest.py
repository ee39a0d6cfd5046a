import numpy as np
import pytest

import crackst as cs


@pytest.fixture(scope="session")
def unit_semicircle():
    """Unit circle with the crack on the upper half."""
    return cs.circular_contour(1.0, (0.0, np.pi))


@pytest.fixture(scope="session")
def reference_setup(unit_semicircle):
    """Dissimilar phases under horizontal tension, equal surface tensions."""
    return cs.ProblemSetup(
        contour=unit_semicircle,
        matrix=cs.Material(40.0, 0.25),
        inclusion=cs.Material(60.0, 0.35),
        surface=cs.SurfaceTension(0.1, 0.1, 0.1),
        load=cs.RemoteLoad(1.0, 0.0, 0.0),
    )


@pytest.fixture(scope="session")
def reference_solution(reference_setup):
    return cs.solve_problem(reference_setup, 24)


@pytest.fixture(scope="session")
def zero_interface_setup(unit_semicircle):
    """Same phases but with vanishing interface tension."""
    return cs.ProblemSetup(
        contour=unit_semicircle,
        matrix=cs.Material(40.0, 0.25),
        inclusion=cs.Material(60.0, 0.35),
        surface=cs.SurfaceTension(0.1, 0.1, 0.0),
        load=cs.RemoteLoad(1.0, 0.0, 0.0),
    )


@pytest.fixture(scope="session")
def zero_interface_solution(zero_interface_setup):
    return cs.solve_problem(zero_interface_setup, 24)
