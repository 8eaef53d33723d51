"""Quantum model of a spin-F atom in a 1-D magneto-optical lattice.

Scaled units throughout: hbar = 1, laser wave vector k = 1, atomic mass
M = 1/2, so the recoil energy E_R = hbar^2 k^2 / 2M = 1, the lattice period
is lambda/2 = pi, positions are reported as z/lambda and momenta as p/(hbar k),
and time is tau = E_R t / hbar.

The light-shift potential is

    V(z) = (4/3) V1 cos(Theta_L) cos(2z)
           + s [ (2/3) V1 sin(Theta_L) sin(2z) Fz + muB_Bx Fx ],

where s = 1/F for the ``normalized`` magnetic-coupling convention (moment
-mu_B F/F) and s = 1 for ``full``.  The transverse field muB_Bx is the
chaoticity knob.  The kinetic term acts in the momentum representation of the
periodic grid (exact for the band-limited lattice potential).
"""

from dataclasses import dataclass, field

import numpy as np

from .spincore import SpinSpace, build_spin_operators, spin_coherent_state

LAMBDA = 2 * np.pi        # optical wavelength in units of 1/k
PERIOD = np.pi            # lattice period lambda/2

#: unit conventions, spelled out for output metadata
UNIT_CONVENTION = {
    "energy": "E_R",
    "length": "z/lambda",
    "momentum": "p/(hbar k)",
    "time": "tau = E_R t / hbar",
}


@dataclass(frozen=True)
class AmolParams:
    """Lattice and coupling parameters (energies in E_R, angles in radians)."""

    V1: float = 160.0
    theta_L: float = np.deg2rad(80.0)
    muB_Bx: float = 12.0
    F: float = 4.0
    spin_scale_convention: str = "normalized"

    def __post_init__(self):
        if self.V1 <= 0:
            raise ValueError("V1 must be positive")
        if not (0.0 < self.theta_L <= np.pi / 2):
            raise ValueError("theta_L must lie in (0, pi/2]")
        if self.muB_Bx < 0:
            raise ValueError("muB_Bx must be non-negative")
        if self.spin_scale_convention not in ("normalized", "full"):
            raise ValueError("spin_scale_convention must be 'normalized' or 'full'")

    @property
    def spin_space(self) -> SpinSpace:
        return SpinSpace(self.F)

    @property
    def spin_scale(self) -> float:
        """Factor s multiplying the magnetic term of the quantum Hamiltonian."""
        return 1.0 / self.F if self.spin_scale_convention == "normalized" else 1.0

    @property
    def lattice_amplitude(self) -> float:
        """Coefficient of cos(2z): (4/3) V1 cos(Theta_L)."""
        return (4.0 / 3.0) * self.V1 * np.cos(self.theta_L)

    @property
    def zeeman_amplitude(self) -> float:
        """Coefficient of sin(2z) Fz before the scale s: (2/3) V1 sin(Theta_L)."""
        return (2.0 / 3.0) * self.V1 * np.sin(self.theta_L)


@dataclass(frozen=True)
class LatticeGrid:
    """Uniform periodic grid over an integer number of lattice periods."""

    n_points: int = 256
    n_periods: int = 1

    def __post_init__(self):
        if self.n_points < 64 or self.n_points & (self.n_points - 1):
            raise ValueError("n_points must be a power of two >= 64")
        if self.n_periods < 1:
            raise ValueError("n_periods must be a positive integer")

    @property
    def length(self) -> float:
        return self.n_periods * PERIOD

    @property
    def dz(self) -> float:
        return self.length / self.n_points

    @property
    def positions(self) -> np.ndarray:
        """Grid positions in units of 1/k, centered on zero."""
        return -self.length / 2 + self.dz * np.arange(self.n_points)

    @property
    def momenta(self) -> np.ndarray:
        """FFT-ordered momentum grid in units of hbar k."""
        return 2 * np.pi * np.fft.fftfreq(self.n_points, d=self.dz)


@dataclass(frozen=True)
class CompositeState:
    """Amplitudes over motion (x) spin with motion the major index."""

    amplitudes: np.ndarray
    motional_dim: int
    spin_dim: int

    def __post_init__(self):
        if self.amplitudes.shape != (self.motional_dim * self.spin_dim,):
            raise ValueError("amplitude vector does not match subsystem dims")
        norm = np.linalg.norm(self.amplitudes)
        if abs(norm - 1.0) > 1e-10:
            raise ValueError(f"composite state norm {norm} deviates from 1")

    @property
    def dims(self) -> tuple:
        return (self.motional_dim, self.spin_dim)


def lattice_potential(params: AmolParams, z: np.ndarray) -> np.ndarray:
    return params.lattice_amplitude * np.cos(2 * z)


def zeeman_profile(params: AmolParams, z: np.ndarray) -> np.ndarray:
    """sin(2z) coefficient of Fz (before the convention scale s)."""
    return params.zeeman_amplitude * np.sin(2 * z)


def diabatic_potential(params: AmolParams, z: np.ndarray, m: float) -> np.ndarray:
    """Scalar potential seen at fixed Fz eigenvalue m."""
    return lattice_potential(params, z) + params.spin_scale * m * zeeman_profile(params, z)


def packet_width_estimate(params: AmolParams) -> float:
    """Harmonic ground-state width (1/k units) of the deepest diabatic well."""
    amp = np.hypot(params.lattice_amplitude,
                   params.spin_scale * params.F * params.zeeman_amplitude)
    omega = np.sqrt(8.0 * amp)  # V'' = 4*amp at the minimum, M = 1/2
    return 1.0 / np.sqrt(omega)


def potential_spin_matrices(params: AmolParams, grid: LatticeGrid,
                            lattice_shift: float = 0.0) -> np.ndarray:
    """Potential as one Hermitian spin matrix per grid point, shape (n, ds, ds)."""
    ops = build_spin_operators(params.spin_space)
    z = grid.positions - lattice_shift
    s = params.spin_scale
    eye = np.eye(params.spin_space.dim)
    vlat = lattice_potential(params, z)
    vz = zeeman_profile(params, z)
    return (vlat[:, None, None] * eye
            + s * vz[:, None, None] * ops.Fz
            + s * params.muB_Bx * ops.Fx)


def kinetic_matrix(grid: LatticeGrid) -> np.ndarray:
    """Dense kinetic operator p^2/2M = p^2 built through the discrete Fourier
    transform (exact on the periodic grid)."""
    n = grid.n_points
    p2 = grid.momenta ** 2
    T = np.fft.ifft(p2[:, None] * np.fft.fft(np.eye(n), axis=0), axis=0)
    return (T + T.conj().T) / 2


def build_hamiltonian(params: AmolParams, grid: LatticeGrid,
                      lattice_shift: float = 0.0) -> np.ndarray:
    """Full Hamiltonian on motion (x) spin, motion-major ordering.

    Raises if the grid cannot resolve the natural packet width of the
    preparation protocol (fewer than 4 grid points per standard deviation).
    """
    width = packet_width_estimate(params)
    if width < 4 * grid.dz:
        raise ValueError(
            f"grid too coarse: packet width {width:.4f} (1/k) spans fewer than "
            f"4 grid spacings of {grid.dz:.4f}")
    ds = params.spin_space.dim
    n = grid.n_points
    H = np.zeros((n * ds, n * ds), dtype=complex)
    T = kinetic_matrix(grid)
    H += np.kron(T, np.eye(ds))
    V = potential_spin_matrices(params, grid, lattice_shift)
    for i in range(n):
        H[i * ds:(i + 1) * ds, i * ds:(i + 1) * ds] += V[i]
    return H


def _wrapped_displacement(z: np.ndarray, z0: float, length: float) -> np.ndarray:
    return (z - z0 + length / 2) % length - length / 2


def motional_gaussian_state(grid: LatticeGrid, z0: float, p0: float,
                            width: float) -> np.ndarray:
    """Normalized periodic Gaussian centered at (z0, p0).

    z0 and width are in z/lambda units, p0 in hbar k; width is the position
    standard deviation, so a width ``w`` gives Delta_x/lambda = w and the
    minimum-uncertainty Delta_p = 1/(2 w lambda).
    """
    sigma = width * LAMBDA
    if sigma < 2 * grid.dz:
        raise ValueError(f"width {width} (z/lambda) is below the grid resolution")
    if sigma > grid.length / 6:
        raise ValueError(f"width {width} (z/lambda) too large for the periodic domain")
    d = _wrapped_displacement(grid.positions, z0 * LAMBDA, grid.length)
    psi = np.exp(-d ** 2 / (4 * sigma ** 2) + 1j * p0 * d)
    return psi / np.linalg.norm(psi)


def translate(grid: LatticeGrid, state: np.ndarray, shift: float) -> np.ndarray:
    """Translate a motional state by ``shift`` (z/lambda units) via the DFT."""
    phase = np.exp(-1j * grid.momenta * shift * LAMBDA)
    return np.fft.ifft(phase * np.fft.fft(state))


def boost(grid: LatticeGrid, state: np.ndarray, p0: float, z_center: float = 0.0) -> np.ndarray:
    """Multiply by exp(i p0 (z - z_center)) with wrapped displacement."""
    d = _wrapped_displacement(grid.positions, z_center * LAMBDA, grid.length)
    return state * np.exp(1j * p0 * d)


def scalar_hamiltonian_1d(params: AmolParams, grid: LatticeGrid, m: float) -> np.ndarray:
    """Motional Hamiltonian at fixed Fz eigenvalue m (diabatic channel)."""
    return kinetic_matrix(grid) + np.diag(diabatic_potential(params, grid.positions, m))


def diabatic_well_center(params: AmolParams, m: float) -> float:
    """Location (z/lambda) of the diabatic potential minimum nearest zero."""
    a = params.lattice_amplitude
    b = params.spin_scale * m * params.zeeman_amplitude
    amp = np.hypot(a, b)
    if amp < 1e-12:
        raise ValueError(f"diabatic potential for m={m} is flat")
    delta = np.arctan2(b, a)
    z = (np.pi + delta) / 2.0  # a cos2z + b sin2z = amp cos(2z - delta), min at 2z = pi + delta
    z = (z + PERIOD / 2) % PERIOD - PERIOD / 2
    return z / LAMBDA


def diabatic_ground_state(params: AmolParams, grid: LatticeGrid, spin_m: float,
                          shift: float = 0.0) -> np.ndarray:
    """Ground state of the diabatic potential for Fz = m, translated by ``shift``.

    shift is in z/lambda units.  Raises for m outside -F..F or for a flat
    (unbinding) potential.
    """
    F = params.F
    if abs(spin_m) > F or abs(spin_m - round(spin_m + F) + F) > 1e-9:
        raise ValueError(f"spin_m must be one of -F..F in integer steps, got {spin_m}")
    v = diabatic_potential(params, grid.positions, spin_m)
    if v.max() - v.min() < 1e-9:
        raise ValueError(f"diabatic potential for m={spin_m} is flat; no bound state")
    H1 = scalar_hamiltonian_1d(params, grid, spin_m)
    _, vecs = np.linalg.eigh(H1)
    ground = vecs[:, 0]
    # fix the (arbitrary) eigenvector phase: make the peak amplitude real positive
    ground = ground * np.exp(-1j * np.angle(ground[np.argmax(np.abs(ground))]))
    if shift != 0.0:
        ground = translate(grid, ground, shift)
    return ground / np.linalg.norm(ground)


def initial_product_state(motional: np.ndarray, spin: np.ndarray) -> CompositeState:
    """Tensor product motion (x) spin in the module's index ordering."""
    for name, vec in (("motional", motional), ("spin", spin)):
        if abs(np.linalg.norm(vec) - 1.0) > 1e-10:
            raise ValueError(f"{name} state must be unit norm")
    amps = np.kron(motional, spin)
    return CompositeState(amplitudes=amps, motional_dim=motional.shape[0],
                          spin_dim=spin.shape[0])


def prepare_initial_state(params: AmolParams, grid: LatticeGrid, z0: float,
                          p0: float, theta: float, phi: float,
                          prep: str = "diabatic", width: float = None) -> CompositeState:
    """Product state localized at phase-space point (z0, p0, theta, phi).

    prep = "diabatic" follows the cooling protocol: ground state of the
    m = +F diabatic well, lattice-shifted to z0 and boosted to p0.
    prep = "gaussian" uses a minimum-uncertainty Gaussian of the given width
    (defaults to the harmonic estimate of the diabatic well width).
    """
    if prep == "diabatic":
        center = diabatic_well_center(params, params.F)
        motional = diabatic_ground_state(params, grid, params.F, shift=z0 - center)
    elif prep == "gaussian":
        if width is None:
            width = packet_width_estimate(params) / LAMBDA
        motional = motional_gaussian_state(grid, z0, 0.0, width)
    else:
        raise ValueError(f"unknown preparation {prep!r}")
    if p0 != 0.0:
        motional = boost(grid, motional, p0, z_center=z0)
        motional = motional / np.linalg.norm(motional)
    spin = spin_coherent_state(params.spin_space, theta, phi)
    return initial_product_state(motional, spin)


def packet_moments(grid: LatticeGrid, state: np.ndarray) -> dict:
    """Position/momentum means and spreads of a motional or spinor state.

    Accepts a bare motional vector (length n) or a composite vector
    (length n * ds); returns z/lambda and hbar-k units.
    """
    n = grid.n_points
    psi = np.asarray(state)
    if psi.ndim == 1 and psi.size % n == 0:
        psi = psi.reshape(n, -1)
    else:
        raise ValueError("state length is not a multiple of the grid size")
    prob_z = np.sum(np.abs(psi) ** 2, axis=1)
    prob_z = prob_z / prob_z.sum()
    z = grid.positions
    z_mean = float(np.dot(prob_z, z))
    z_var = float(np.dot(prob_z, (z - z_mean) ** 2))
    psik = np.fft.fft(psi, axis=0)
    prob_p = np.sum(np.abs(psik) ** 2, axis=1)
    prob_p = prob_p / prob_p.sum()
    p = grid.momenta
    p_mean = float(np.dot(prob_p, p))
    p_var = float(np.dot(prob_p, (p - p_mean) ** 2))
    return {
        "z_mean": z_mean / LAMBDA,
        "p_mean": p_mean,
        "dx": np.sqrt(z_var) / LAMBDA,
        "dp": np.sqrt(p_var),
    }
