import numpy as np
import pytest

from qce import amol, kickedtop, spectral

PAPER_REGULAR = (-0.15, 0.0, 1.27, 0.0)
PAPER_CHAOTIC = (0.06, 0.0, np.pi / 2, 0.0)


@pytest.fixture(scope="session")
def lattice_grid():
    return amol.LatticeGrid(n_points=256, n_periods=1)


@pytest.fixture(scope="session")
def amol_params_full():
    """Propagation convention that reproduces the paper's figures."""
    return amol.AmolParams(spin_scale_convention="full")


@pytest.fixture(scope="session")
def amol_params_prep():
    """Literal light-shift potential used for the state preparation."""
    return amol.AmolParams(spin_scale_convention="normalized")


@pytest.fixture(scope="session")
def amol_decomposition(amol_params_full, lattice_grid):
    H = amol.build_hamiltonian(amol_params_full, lattice_grid)
    return spectral.decompose(H, "hamiltonian")


@pytest.fixture(scope="session")
def amol_states(amol_params_prep, lattice_grid):
    regular = amol.prepare_initial_state(amol_params_prep, lattice_grid, *PAPER_REGULAR)
    chaotic = amol.prepare_initial_state(amol_params_prep, lattice_grid, *PAPER_CHAOTIC)
    return {"regular": regular, "chaotic": chaotic}


@pytest.fixture(scope="session")
def qkt_params():
    return kickedtop.KickedTopParams(kappa=3.0, p_rot=np.pi / 2, tau=1.0, j=25)


@pytest.fixture(scope="session")
def qkt_decomposition(qkt_params):
    F = kickedtop.floquet_operator(qkt_params)
    return spectral.decompose(F, "floquet")


@pytest.fixture(scope="session")
def qkt_states(qkt_params):
    regular = kickedtop.coherent_state_at(
        qkt_params, kickedtop.elliptic_fixed_point(qkt_params).n)
    chaotic = kickedtop.coherent_state_at(
        qkt_params, kickedtop.chaotic_sea_point(qkt_params))
    return {"regular": regular, "chaotic": chaotic}
