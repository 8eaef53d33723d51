"""Quantum kicked top and its classical kick map.

One period applies a rotation by p about y followed by a torsion about z of
strength kappa, realized on a collective spin j (equivalently N = 2j qubits
in the symmetric representation):

    F = exp(-i kappa Jz^2 / (2 j tau)) exp(-i p Jy).

The classical limit iterates the same two rotations on a unit vector, with
the torsion angle proportional to the post-rotation z-component.  Bipartite
entanglement is measured between one qubit pair and the rest through the
two-qubit reduced density matrix, built from collective-operator expectation
values (the only route that scales past a handful of qubits).
"""

from dataclasses import dataclass
from math import comb

import numpy as np
import scipy.optimize

from .spincore import SpinSpace, build_spin_operators, rotation_operator, spin_coherent_state


@dataclass(frozen=True)
class KickedTopParams:
    """Torsion strength kappa, kick rotation angle, period and spin size."""

    kappa: float = 3.0
    p_rot: float = np.pi / 2
    tau: float = 1.0
    j: float = 25.0

    def __post_init__(self):
        if self.j < 1 or abs(2 * self.j - round(2 * self.j)) > 1e-12:
            raise ValueError("j must be a half-integer >= 1")
        if self.tau <= 0:
            raise ValueError("tau must be positive")

    @property
    def spin_space(self) -> SpinSpace:
        return SpinSpace(self.j)

    @property
    def n_qubits(self) -> int:
        n = 2 * self.j
        if abs(n - round(n)) > 1e-12:
            raise ValueError("qubit realization needs integer N = 2j")
        return int(round(n))


def floquet_operator(params: KickedTopParams) -> np.ndarray:
    """One-kick unitary: torsion factor times rotation factor (rotation acts first)."""
    space = params.spin_space
    ops = build_spin_operators(space)
    rotation = rotation_operator(ops, [0.0, 1.0, 0.0], params.p_rot)
    m = space.m_values()
    torsion = np.exp(-1j * params.kappa * m ** 2 / (2 * params.j * params.tau))
    return torsion[:, None] * rotation


def classical_kick_map(n, params: KickedTopParams):
    """Classical limit: rotate about y by p_rot, then twist about z by kappa * n_z'."""
    n = np.asarray(n, dtype=float)
    if abs(np.linalg.norm(n) - 1.0) > 1e-9:
        raise ValueError("n must be a unit vector")
    c, s = np.cos(params.p_rot), np.sin(params.p_rot)
    m = np.array([c * n[0] + s * n[2], n[1], -s * n[0] + c * n[2]])
    alpha = params.kappa * m[2]
    ca, sa = np.cos(alpha), np.sin(alpha)
    return np.array([ca * m[0] - sa * m[1], sa * m[0] + ca * m[1], m[2]])


def _kick_map_jacobian(n, params: KickedTopParams) -> np.ndarray:
    """d(map)/dn as a 3x3 matrix (unconstrained embedding)."""
    c, s = np.cos(params.p_rot), np.sin(params.p_rot)
    Ry = np.array([[c, 0.0, s], [0.0, 1.0, 0.0], [-s, 0.0, c]])
    m = Ry @ np.asarray(n, dtype=float)
    alpha = params.kappa * m[2]
    ca, sa = np.cos(alpha), np.sin(alpha)
    Rz = np.array([[ca, -sa, 0.0], [sa, ca, 0.0], [0.0, 0.0, 1.0]])
    # chain rule: torsion angle itself depends on m_z
    dalpha = params.kappa * np.array([0.0, 0.0, 1.0])
    zhat_cross = np.array([[-sa * m[0] - ca * m[1]], [ca * m[0] - sa * m[1]], [0.0]])
    return (Rz + zhat_cross @ dalpha[None, :]) @ Ry


def _tangent_frame(n) -> tuple:
    """Two orthonormal tangent vectors at a point of the unit sphere."""
    n = np.asarray(n, dtype=float)
    ref = np.array([0.0, 0.0, 1.0]) if abs(n[2]) < 0.9 else np.array([1.0, 0.0, 0.0])
    e1 = np.cross(n, ref)
    e1 /= np.linalg.norm(e1)
    e2 = np.cross(n, e1)
    return e1, e2


@dataclass(frozen=True)
class FixedPoint:
    n: np.ndarray
    stability: str           # "elliptic" or "hyperbolic"
    residual: float
    multipliers: tuple


def tangent_map(n, params: KickedTopParams) -> np.ndarray:
    """2x2 tangent map of the kick map in an orthonormal tangent frame."""
    e1, e2 = _tangent_frame(n)
    J = _kick_map_jacobian(n, params)
    n_out = classical_kick_map(n, params)
    f1, f2 = _tangent_frame(n_out)
    E_in = np.column_stack([e1, e2])
    E_out = np.column_stack([f1, f2])
    return E_out.T @ J @ E_in


def find_fixed_points(params: KickedTopParams, n_seeds: int = 20,
                      residual_tol: float = 1e-10):
    """Fixed points of the classical kick map from a (theta, phi) seed grid.

    Each root is polished on the sphere (2-D tangent-projected residual) and
    classified through the eigenvalues of the tangent map: non-real on the
    unit circle -> elliptic, real off the circle -> hyperbolic.
    """
    found = []

    def residual(angles):
        th, ph = angles
        n = np.array([np.sin(th) * np.cos(ph), np.sin(th) * np.sin(ph), np.cos(th)])
        diff = classical_kick_map(n, params) - n
        e1, e2 = _tangent_frame(n)
        return [diff @ e1, diff @ e2]

    thetas = np.linspace(0.1, np.pi - 0.1, n_seeds)
    phis = np.linspace(-np.pi, np.pi, n_seeds, endpoint=False)
    seeds = [(th, ph) for th in thetas for ph in phis]
    seeds += [(1e-6, 0.0), (np.pi - 1e-6, 0.0)]  # poles

    for seed in seeds:
        sol = scipy.optimize.root(residual, seed, method="hybr", tol=1e-13)
        if not sol.success:
            continue
        th, ph = sol.x
        n = np.array([np.sin(th) * np.cos(ph), np.sin(th) * np.sin(ph), np.cos(th)])
        res = np.linalg.norm(classical_kick_map(n, params) - n)
        if res > residual_tol:
            continue
        if any(np.linalg.norm(n - f.n) < 1e-6 for f in found):
            continue
        eigs = np.linalg.eigvals(tangent_map(n, params))
        if np.abs(eigs.imag).max() > 1e-8:
            stability = "elliptic"
        else:
            stability = "hyperbolic"
        found.append(FixedPoint(n=n, stability=stability, residual=float(res),
                                multipliers=tuple(eigs)))
    return found


def elliptic_fixed_point(params: KickedTopParams) -> FixedPoint:
    """The elliptic fixed point used for the regular initial state."""
    points = [f for f in find_fixed_points(params) if f.stability == "elliptic"]
    if not points:
        raise RuntimeError("no elliptic fixed point found")
    # deterministic choice: largest n_x, then n_y, then n_z
    points.sort(key=lambda f: (f.n[0], f.n[1], f.n[2]), reverse=True)
    return points[0]


def map_lyapunov(n0, params: KickedTopParams, n_iter: int = 400) -> float:
    """Largest Lyapunov exponent of the kick map via tangent-vector growth."""
    n = np.asarray(n0, dtype=float).copy()
    v = _tangent_frame(n)[0]
    total = 0.0
    for _ in range(n_iter):
        J = _kick_map_jacobian(n, params)
        n_new = classical_kick_map(n, params)
        v = J @ v
        # keep v tangent at the new point to suppress radial drift
        v -= (v @ n_new) * n_new
        norm = np.linalg.norm(v)
        total += np.log(norm)
        v /= norm
        n = n_new
    return total / n_iter


def chaotic_sea_point(params: KickedTopParams, lyapunov_min: float = 0.1,
                      n_grid: int = 200):
    """The most chaotic point of a fixed spiral grid on the sphere.

    Maximizing the map Lyapunov exponent over a deterministic grid picks a
    point deep in the chaotic sea, away from island remnants.
    """
    golden = (1 + 5 ** 0.5) / 2
    best_n, best_lam = None, -np.inf
    for k in range(1, n_grid + 1):
        th = np.arccos(1 - 2 * ((k * 0.6180339887) % 1.0))
        ph = (2 * np.pi * k / golden) % (2 * np.pi) - np.pi
        n = np.array([np.sin(th) * np.cos(ph), np.sin(th) * np.sin(ph), np.cos(th)])
        lam = map_lyapunov(n, params)
        if lam > best_lam:
            best_n, best_lam = n, lam
    if best_lam <= lyapunov_min:
        raise RuntimeError(f"no point with map Lyapunov > {lyapunov_min} found")
    return best_n


def coherent_state_at(params: KickedTopParams, n) -> np.ndarray:
    """Spin coherent state pointing along the unit vector n."""
    n = np.asarray(n, dtype=float)
    theta = float(np.arccos(np.clip(n[2], -1.0, 1.0)))
    phi = float(np.arctan2(n[1], n[0]))
    return spin_coherent_state(params.spin_space, theta, phi)


def collective_expectations(state: np.ndarray, ops) -> dict:
    """<J_a> and anticommutators <{J_a, J_b}> for a collective spin state."""
    Js = {"x": ops.Fx, "y": ops.Fy, "z": ops.Fz}
    first = {a: float(np.vdot(state, Js[a] @ state).real) for a in Js}
    second = {}
    for a in "xyz":
        for b in "xyz":
            if a <= b:
                anti = Js[a] @ Js[b] + Js[b] @ Js[a]
                second[a + b] = float(np.vdot(state, anti @ state).real)
    return {"J": first, "JJ": second}


def two_qubit_rdm(state: np.ndarray, N: int) -> np.ndarray:
    """Two-qubit reduced density matrix of a symmetric N-qubit pure state.

    Works in the (2j+1)-dimensional collective space: by permutation symmetry
    the Pauli correlators of any qubit pair follow from <J_a> and <{J_a,J_b}>,

        <sigma_a^(1)> = 2 <J_a> / N,
        <sigma_a^(1) sigma_b^(2)> = (2 <{J_a,J_b}> - N delta_ab) / (N (N-1)).
    """
    if N < 2:
        raise ValueError("need at least two qubits")
    if state.shape[0] != N + 1:
        raise ValueError(f"state dimension {state.shape[0]} != N+1 = {N + 1}")
    ops = build_spin_operators(SpinSpace(N / 2))
    ex = collective_expectations(state, ops)

    paulis = {
        "1": np.eye(2, dtype=complex),
        "x": np.array([[0, 1], [1, 0]], dtype=complex),
        "y": np.array([[0, -1j], [1j, 0]], dtype=complex),
        "z": np.array([[1, 0], [0, -1]], dtype=complex),
    }
    corr = {("1", "1"): 1.0}
    for a in "xyz":
        single = 2.0 * ex["J"][a] / N
        corr[("1", a)] = single
        corr[(a, "1")] = single
    for a in "xyz":
        for b in "xyz":
            key = a + b if a <= b else b + a
            corr[(a, b)] = (2.0 * ex["JJ"][key] - N * (a == b)) / (N * (N - 1))

    rho = np.zeros((4, 4), dtype=complex)
    for a, pa in paulis.items():
        for b, pb in paulis.items():
            rho += corr[(a, b)] * np.kron(pa, pb)
    return rho / 4.0


def dicke_state_in_qubit_basis(amplitudes: np.ndarray, N: int) -> np.ndarray:
    """Expand a symmetric-space state into the full 2^N qubit basis.

    Basis index bit i gives the state of qubit i (0 = up); the collective
    amplitude for m = j - k spreads evenly over the C(N, k) weight-k strings.
    Exponential in N: use for small-N oracles only.
    """
    if amplitudes.shape[0] != N + 1:
        raise ValueError("amplitude vector must have length N+1")
    full = np.zeros(2 ** N, dtype=complex)
    for idx in range(2 ** N):
        k = bin(idx).count("1")
        full[idx] = amplitudes[k] / np.sqrt(comb(N, k))
    return full
