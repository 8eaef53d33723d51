"""Spin-F operator algebra, rotations and spin coherent states.

Conventions shared by every module in the package:

* basis ordering is |F, m> with m = F, F-1, ..., -F (index 0 is the
  maximal-weight state),
* hbar is absorbed into the operators, so Fz has eigenvalues F ... -F,
* a spin coherent state pointing along the Bloch direction (theta, phi)
  is the rotated maximal-weight state, hence <n.F> = +F.
"""

from dataclasses import dataclass

import numpy as np


def _check_half_integer(F: float) -> None:
    if F < 0.5 or abs(2 * F - round(2 * F)) > 1e-12:
        raise ValueError(f"spin quantum number must be a half-integer >= 1/2, got {F}")


@dataclass(frozen=True)
class SpinSpace:
    """A single spin-F Hilbert space of dimension 2F+1."""

    F: float

    def __post_init__(self):
        _check_half_integer(self.F)

    @property
    def dim(self) -> int:
        return int(round(2 * self.F + 1))

    def m_values(self) -> np.ndarray:
        """Magnetic quantum numbers in basis order, F down to -F."""
        return self.F - np.arange(self.dim)


@dataclass(frozen=True)
class SpinOperators:
    """Dense angular momentum matrices in the |F, m> basis (m decreasing)."""

    space: SpinSpace
    Fx: np.ndarray
    Fy: np.ndarray
    Fz: np.ndarray
    Fp: np.ndarray
    Fm: np.ndarray

    @property
    def dim(self) -> int:
        return self.space.dim


def build_spin_operators(space: SpinSpace) -> SpinOperators:
    """Construct Fx, Fy, Fz (and ladder operators) for a spin-F space.

    The ladder operators carry the standard matrix elements
    sqrt(F(F+1) - m(m +/- 1)); Fz is diagonal with entries F ... -F.
    """
    F = space.F
    dim = space.dim
    m = space.m_values()

    # F+ connects |F, m> -> |F, m+1>; with m decreasing along the basis this
    # puts the matrix elements on the superdiagonal.
    raise_elems = np.sqrt(F * (F + 1) - m[1:] * (m[1:] + 1))
    Fp = np.zeros((dim, dim), dtype=complex)
    Fp[np.arange(dim - 1), np.arange(1, dim)] = raise_elems
    Fm = Fp.conj().T

    Fx = (Fp + Fm) / 2
    Fy = (Fp - Fm) / 2j
    Fz = np.diag(m.astype(complex))
    return SpinOperators(space=space, Fx=Fx, Fy=Fy, Fz=Fz, Fp=Fp, Fm=Fm)


def axis_operator(ops: SpinOperators, axis) -> np.ndarray:
    """Hermitian generator axis . F for a unit 3-vector axis."""
    axis = np.asarray(axis, dtype=float)
    norm = np.linalg.norm(axis)
    if abs(norm - 1.0) > 1e-12:
        raise ValueError(f"rotation axis must be a unit vector, |axis| = {norm}")
    return axis[0] * ops.Fx + axis[1] * ops.Fy + axis[2] * ops.Fz


def rotation_operator(ops: SpinOperators, axis, angle: float) -> np.ndarray:
    """Unitary exp(-i * angle * axis.F).

    Computed by spectral decomposition of the Hermitian generator; exact to
    rounding for the dimensions used here (<= a few hundred).
    """
    gen = axis_operator(ops, axis)
    evals, evecs = np.linalg.eigh(gen)
    phases = np.exp(-1j * angle * evals)
    return (evecs * phases) @ evecs.conj().T


def spin_coherent_state(space: SpinSpace, theta: float, phi: float) -> np.ndarray:
    """Spin coherent state |theta, phi> = R(theta, phi) |F, m=F>.

    The rotation axis is (-sin phi, cos phi, 0), so the Bloch vector of the
    result is n = (sin theta cos phi, sin theta sin phi, cos theta) and
    <n.F> = F.
    """
    if not (0.0 <= theta <= np.pi):
        raise ValueError(f"theta must lie in [0, pi], got {theta}")
    state = np.zeros(space.dim, dtype=complex)
    state[0] = 1.0
    if theta == 0.0:
        return state
    ops = build_spin_operators(space)
    axis = np.array([-np.sin(phi), np.cos(phi), 0.0])
    return rotation_operator(ops, axis, theta) @ state


def bloch_vector(ops: SpinOperators, state: np.ndarray) -> np.ndarray:
    """Normalized mean spin direction <F>/F of a state."""
    expect = np.array(
        [np.vdot(state, op @ state).real for op in (ops.Fx, ops.Fy, ops.Fz)]
    )
    return expect / ops.space.F
