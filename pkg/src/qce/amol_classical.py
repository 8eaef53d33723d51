"""Classical limit of the lattice spinor atom.

A point particle (z, p) is coupled to a unit magnetic-moment direction n
through the same position-dependent effective field as the quantum model:

    E = p^2 / 2M + a cos(2z) + g [ b sin(2z) n_z + bx n_x ],        M = 1/2,

with a, b the lattice and field amplitudes from the quantum parameters and
g = s*F the classical coupling weight (g = 1 for the ``normalized`` moment
-mu_B F/F, g = F for ``full``).  The spin precesses about
omega(z) = s (bx, 0, b sin 2z), which conserves E exactly together with the
canonical (z, p) flow.

Integration uses a time-reversible Strang split: half drifts in z around an
exact combined kick in which the spin rotates about the frozen local field
and the momentum picks up the analytically integrated torque-modulated force.
|n| = 1 is preserved by construction (rotations only).
"""

import math
from dataclasses import dataclass

import numpy as np
from numba import njit

from .amol import AmolParams, LAMBDA

MU_Y_SECTION = "mu_y"
P_SECTION = "p"


@dataclass(frozen=True)
class ClassicalState:
    """Phase-space point: position/momentum plus unit spin direction."""

    z: float
    p: float
    n: np.ndarray

    def __post_init__(self):
        n = np.asarray(self.n, dtype=float)
        if n.shape != (3,):
            raise ValueError("n must be a 3-vector")
        if abs(np.linalg.norm(n) - 1.0) > 1e-9:
            raise ValueError(f"|n| = {np.linalg.norm(n)} is not 1")
        object.__setattr__(self, "n", n)

    @classmethod
    def from_angles(cls, z_over_lambda: float, p: float, theta: float, phi: float):
        n = np.array([np.sin(theta) * np.cos(phi),
                      np.sin(theta) * np.sin(phi),
                      np.cos(theta)])
        return cls(z=z_over_lambda * LAMBDA, p=p, n=n)

    def to_array(self) -> np.ndarray:
        return np.array([self.z, self.p, *self.n])

    def angles(self) -> tuple:
        theta = math.acos(min(1.0, max(-1.0, self.n[2])))
        phi = math.atan2(self.n[1], self.n[0])
        return theta, phi


@dataclass(frozen=True)
class SectionDef:
    """Poincare surface: a section variable, crossed with a fixed sign.

    variable "mu_y" is the magnetic-moment component mu_y = -n_y (the moment
    is antiparallel to the spin); "p" is the momentum.  direction +1 selects
    crossings with positive time derivative of the variable.
    """

    variable: str = MU_Y_SECTION
    direction: int = 1

    def __post_init__(self):
        if self.variable not in (MU_Y_SECTION, P_SECTION):
            raise ValueError(f"unknown section variable {self.variable!r}")
        if self.direction not in (-1, 1):
            raise ValueError("direction must be +1 or -1")


def _coefficients(params: AmolParams) -> tuple:
    """(a, b, bx, g, s): potential amplitudes, energy weight, precession scale."""
    return (params.lattice_amplitude, params.zeeman_amplitude, params.muB_Bx,
            params.spin_scale * params.F, params.spin_scale)


def classical_energy(state: ClassicalState, params: AmolParams) -> float:
    a, b, bx, g, _ = _coefficients(params)
    z, p, n = state.z, state.p, state.n
    return p * p + a * math.cos(2 * z) + g * (b * math.sin(2 * z) * n[2] + bx * n[0])


def derivatives(state: ClassicalState, params: AmolParams) -> np.ndarray:
    """Time derivative (dz, dp, dn) of the classical state."""
    a, b, bx, g, s = _coefficients(params)
    z, p, n = state.z, state.p, state.n
    omega = np.array([s * bx, 0.0, s * b * math.sin(2 * z)])
    dn = np.cross(omega, n)
    dz = 2 * p  # p / M with M = 1/2
    dp = 2 * a * math.sin(2 * z) - 2 * g * b * math.cos(2 * z) * n[2]
    return np.array([dz, dp, dn[0], dn[1], dn[2]])


@njit(cache=True)
def _kick(y, a, b, bx, g, s, dt):
    """Exact (z frozen) combined momentum kick and spin rotation over dt.

    The spin rotates about the constant local omega; n_z(t) along that
    rotation is integrated in closed form for the momentum update, so the
    sub-flow conserves the energy restricted to fixed z exactly.
    """
    z = y[0]
    wx = s * bx
    wz = s * b * math.sin(2 * z)
    w = math.sqrt(wx * wx + wz * wz)
    nx, ny, nz = y[2], y[3], y[4]
    force0 = 2 * a * math.sin(2 * z)
    coup = -2 * g * b * math.cos(2 * z)
    if w < 1e-300:
        y[1] += dt * (force0 + coup * nz)
        return
    ux = wx / w
    uz = wz / w
    # Rodrigues split of n about the unit axis u = (ux, 0, uz)
    dot = ux * nx + uz * nz
    para_x, para_y, para_z = dot * ux, 0.0, dot * uz
    perp_x, perp_y, perp_z = nx - para_x, ny, nz - para_z
    cross_x = -uz * ny          # u x n
    cross_y = uz * nx - ux * nz
    cross_z = ux * ny
    angle = w * dt
    c = math.cos(angle)
    sn = math.sin(angle)
    y[2] = para_x + perp_x * c + cross_x * sn
    y[3] = para_y + perp_y * c + cross_y * sn
    y[4] = para_z + perp_z * c + cross_z * sn
    # integral of n_z(t') over the kick
    int_nz = para_z * dt + perp_z * sn / w + cross_z * (1.0 - c) / w
    y[1] += dt * force0 + coup * int_nz


@njit(cache=True)
def _strang_step(y, a, b, bx, g, s, dt):
    y[0] += y[1] * dt  # drift: dz = 2p, half step
    _kick(y, a, b, bx, g, s, dt)
    y[0] += y[1] * dt


# Yoshida 4th-order composition weights
_W1 = 1.0 / (2.0 - 2.0 ** (1.0 / 3.0))
_W0 = 1.0 - 2.0 * _W1


@njit(cache=True)
def _step(y, a, b, bx, g, s, dt, order):
    if order == 2:
        _strang_step(y, a, b, bx, g, s, dt)
    else:
        _strang_step(y, a, b, bx, g, s, dt * _W1)
        _strang_step(y, a, b, bx, g, s, dt * _W0)
        _strang_step(y, a, b, bx, g, s, dt * _W1)


@njit(cache=True)
def _integrate_core(y, a, b, bx, g, s, dt, n_steps, store_every, out, order):
    k = 0
    for i in range(n_steps):
        _step(y, a, b, bx, g, s, dt, order)
        if store_every > 0 and (i + 1) % store_every == 0:
            out[k, 0] = y[0]
            out[k, 1] = y[1]
            out[k, 2] = y[2]
            out[k, 3] = y[3]
            out[k, 4] = y[4]
            k += 1
    return k


def _max_precession(params: AmolParams) -> float:
    _, b, bx, _, s = _coefficients(params)
    return s * math.hypot(b, bx)


def default_timestep(params: AmolParams, steps_per_period: int = 40) -> float:
    """Time step resolving the fastest precession/oscillation frequency."""
    w_spin = _max_precession(params)
    a, b, bx, g, _ = _coefficients(params)
    w_motion = math.sqrt(8.0 * math.hypot(a, g * b))
    w = max(w_spin, w_motion)
    return 2 * math.pi / w / steps_per_period


@dataclass(frozen=True)
class Trajectory:
    times: np.ndarray
    states: np.ndarray  # columns z, p, nx, ny, nz

    def as_angles(self) -> np.ndarray:
        """Rows of (z/lambda, p, theta, phi)."""
        z, p = self.states[:, 0], self.states[:, 1]
        theta = np.arccos(np.clip(self.states[:, 4], -1, 1))
        phi = np.arctan2(self.states[:, 3], self.states[:, 2])
        return np.column_stack([z / LAMBDA, p, theta, phi])


def integrate(state: ClassicalState, params: AmolParams, t_final: float,
              dt: float = None, store_every: int = 1, order: int = 4) -> Trajectory:
    """Integrate and sample every ``store_every`` steps.

    dt defaults to resolving the fastest precession period with 40 steps; a
    ValueError is raised below 20 steps per period.  order selects the Strang
    (2) or Yoshida (4) composition.
    """
    if dt is None:
        dt = default_timestep(params)
    if order not in (2, 4):
        raise ValueError("order must be 2 or 4")
    limit = 2 * math.pi / _max_precession(params) / 20 if _max_precession(params) > 0 else np.inf
    if dt > limit:
        raise ValueError(f"dt={dt} under-resolves the precession (need <= {limit:.3e})")
    n_steps = int(round(t_final / dt))
    if abs(n_steps * dt - t_final) > 1e-9 * max(1.0, t_final):
        n_steps = int(math.ceil(t_final / dt))
        dt = t_final / n_steps
    a, b, bx, g, s = _coefficients(params)
    y = state.to_array()
    n_out = n_steps // store_every
    out = np.empty((n_out + 1, 5))
    out[0] = y
    k = _integrate_core(y, a, b, bx, g, s, dt, n_steps, store_every, out[1:], order)
    times = np.arange(n_out + 1) * (store_every * dt)
    return Trajectory(times=times[: k + 1], states=out[: k + 1])


def _section_value(y: np.ndarray, section: SectionDef) -> float:
    if section.variable == MU_Y_SECTION:
        return -y[3]  # mu_y = -mu_B n_y, in units of mu_B
    return y[1]


def _section_derivative(y: np.ndarray, section: SectionDef, params: AmolParams) -> float:
    a, b, bx, g, s = _coefficients(params)
    if section.variable == MU_Y_SECTION:
        # d(-n_y)/dt = -(omega x n)_y
        wx = s * bx
        wz = s * b * math.sin(2 * y[0])
        return -(wz * y[2] - wx * y[4])
    return 2 * a * math.sin(2 * y[0]) - 2 * g * b * math.cos(2 * y[0]) * y[4]


@dataclass(frozen=True)
class SectionResult:
    points: np.ndarray       # columns z/lambda, p, theta, phi, crossing time
    complete: bool           # False when the time budget ran out first


def poincare_section(ic: ClassicalState, params: AmolParams, section: SectionDef,
                     n_crossings: int, dt: float = None, t_max: float = 1e5,
                     refine_tol: float = 1e-9) -> SectionResult:
    """Record section crossings with the requested derivative sign.

    Crossings are bracketed between integrator steps and refined by bisection
    in the step size until |section variable| < refine_tol.  An initial
    condition already on the section (with the right sign) is recorded as the
    first point.
    """
    if n_crossings < 1:
        raise ValueError("n_crossings must be >= 1")
    if dt is None:
        dt = default_timestep(params)
    a, b, bx, g, s = _coefficients(params)
    y = ic.to_array()
    t = 0.0
    points = []

    val = _section_value(y, section)
    if abs(val) < refine_tol and section.direction * _section_derivative(y, section, params) > 0:
        points.append(_record(y, t))

    prev = y.copy()
    prev_val = val
    while len(points) < n_crossings and t < t_max:
        _step(y, a, b, bx, g, s, dt, 4)
        t += dt
        val = _section_value(y, section)
        if prev_val * val < 0 and section.direction * (val - prev_val) > 0:
            yc, tc = _refine_crossing(prev, t - dt, dt, section, params,
                                      (a, b, bx, g, s), refine_tol)
            points.append(_record(yc, tc))
        prev[:] = y
        prev_val = val
    return SectionResult(points=np.array(points).reshape(-1, 5),
                         complete=len(points) >= n_crossings)


def _record(y: np.ndarray, t: float) -> tuple:
    theta = math.acos(min(1.0, max(-1.0, y[4])))
    phi = math.atan2(y[3], y[2])
    return (y[0] / LAMBDA, y[1], theta, phi, t)


def _refine_crossing(y_before, t_before, dt, section, params, coeffs, tol):
    """Bisect the sub-step length h in (0, dt] to land on the section."""
    a, b, bx, g, s = coeffs

    def value_at(h):
        y = y_before.copy()
        _step(y, a, b, bx, g, s, h, 4)
        return y, _section_value(y, section)

    lo, hi = 0.0, dt
    f_lo = _section_value(y_before, section)
    y = y_before.copy()
    for _ in range(200):
        mid = (lo + hi) / 2
        y, f_mid = value_at(mid)
        if abs(f_mid) < tol:
            return y, t_before + mid
        if f_lo * f_mid <= 0:
            hi = mid
        else:
            lo, f_lo = mid, f_mid
    return y, t_before + (lo + hi) / 2


def lyapunov_estimate(ic: ClassicalState, params: AmolParams, t_total: float,
                      dt: float = None, renorm_interval: float = 1.0,
                      d0: float = 1e-8, seed: int = 0) -> float:
    """Largest Lyapunov exponent by shadow-trajectory renormalization.

    A companion trajectory offset by d0 is renormalized back to distance d0
    every ``renorm_interval``; the exponent is the mean log stretching rate.
    """
    if dt is None:
        dt = default_timestep(params)
    a, b, bx, g, s = _coefficients(params)
    rng = np.random.default_rng(seed)
    y1 = ic.to_array()
    delta = rng.normal(size=5)
    delta /= np.linalg.norm(delta)
    y2 = y1 + d0 * delta
    nrm = np.linalg.norm(y2[2:])
    y2[2:] /= nrm

    steps = max(1, int(round(renorm_interval / dt)))
    n_blocks = int(round(t_total / (steps * dt)))
    log_sum = 0.0
    for _ in range(n_blocks):
        for _ in range(steps):
            _step(y1, a, b, bx, g, s, dt, 4)
            _step(y2, a, b, bx, g, s, dt, 4)
        diff = y2 - y1
        d = np.linalg.norm(diff)
        log_sum += math.log(d / d0)
        y2 = y1 + diff * (d0 / d)
        y2[2:] /= np.linalg.norm(y2[2:])
    return log_sum / (n_blocks * steps * dt)


def seed_on_shell(params: AmolParams, energy: float, z_over_lambda: float = None,
                  p: float = None, theta: float = None, phi: float = 0.0) -> ClassicalState:
    """Complete a partially specified phase-space point to a target energy.

    Exactly one of z_over_lambda, p, theta must be None; it is solved for by
    bisection (p in closed form).  Raises if the shell is unreachable.
    """
    from scipy.optimize import brentq

    free = [name for name, v in (("z", z_over_lambda), ("p", p), ("theta", theta))
            if v is None]
    if len(free) != 1:
        raise ValueError("exactly one of z, p, theta must be left free")

    def make(zl, pp, th):
        return ClassicalState.from_angles(zl, pp, th, phi)

    if free == ["p"]:
        e0 = classical_energy(make(z_over_lambda, 0.0, theta), params)
        if energy < e0:
            raise ValueError(f"target energy {energy} below potential value {e0:.3f}")
        return make(z_over_lambda, math.sqrt(energy - e0), theta)

    if free == ["theta"]:
        f = lambda th: classical_energy(make(z_over_lambda, p, th), params) - energy
        lo, hi = 1e-12, math.pi - 1e-12
        if f(lo) * f(hi) > 0:
            raise ValueError("energy shell not reachable by varying theta")
        return make(z_over_lambda, p, brentq(f, lo, hi, xtol=1e-13))

    f = lambda zl: classical_energy(make(zl, p, theta), params) - energy
    zs = np.linspace(-0.25, 0.25, 201)
    vals = [f(z) for z in zs]
    for i in range(len(zs) - 1):
        if vals[i] * vals[i + 1] <= 0:
            return make(brentq(f, zs[i], zs[i + 1], xtol=1e-14), p, theta)
    raise ValueError("energy shell not reachable by varying z")
