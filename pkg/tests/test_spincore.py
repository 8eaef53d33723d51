import numpy as np
import pytest

from qce.spincore import (SpinSpace, bloch_vector, build_spin_operators,
                          rotation_operator, spin_coherent_state)

HALF_INTEGERS = [0.5, 1.0, 1.5, 2.0, 2.5, 3.0, 3.5, 4.0, 4.5, 5.0, 5.5, 6.0]


@pytest.mark.parametrize("F", HALF_INTEGERS)
def test_commutation_relations(F):
    ops = build_spin_operators(SpinSpace(F))
    for a, b, c in ((ops.Fx, ops.Fy, ops.Fz), (ops.Fy, ops.Fz, ops.Fx),
                    (ops.Fz, ops.Fx, ops.Fy)):
        assert np.abs(a @ b - b @ a - 1j * c).max() < 1e-12


@pytest.mark.parametrize("F", HALF_INTEGERS)
def test_hermiticity(F):
    ops = build_spin_operators(SpinSpace(F))
    for op in (ops.Fx, ops.Fy, ops.Fz):
        assert np.abs(op - op.conj().T).max() < 1e-14


def test_fz_diagonal_half():
    ops = build_spin_operators(SpinSpace(0.5))
    assert np.allclose(ops.Fz, np.diag([0.5, -0.5]))


def test_fz_diagonal_f4():
    space = SpinSpace(4)
    assert space.dim == 9
    ops = build_spin_operators(space)
    assert np.allclose(np.diag(ops.Fz).real, np.arange(4, -5, -1))


def test_non_half_integer_rejected():
    with pytest.raises(ValueError):
        SpinSpace(0.7)
    with pytest.raises(ValueError):
        SpinSpace(0.0)


def test_coherent_state_poles():
    space = SpinSpace(4)
    up = spin_coherent_state(space, 0.0, 1.234)
    expected = np.zeros(9)
    expected[0] = 1
    assert np.allclose(up, expected)
    down = spin_coherent_state(space, np.pi, 0.0)
    assert abs(abs(down[-1]) - 1) < 1e-12


def test_coherent_state_fz_expectation():
    space = SpinSpace(4)
    ops = build_spin_operators(space)
    state = spin_coherent_state(space, 1.27, 0.0)
    fz = np.vdot(state, ops.Fz @ state).real
    assert abs(fz - 4 * np.cos(1.27)) < 1e-12


def test_coherent_state_norm_random_angles():
    space = SpinSpace(2.5)
    rng = np.random.default_rng(3)
    for _ in range(25):
        theta = rng.uniform(0, np.pi)
        phi = rng.uniform(-np.pi, np.pi)
        state = spin_coherent_state(space, theta, phi)
        assert abs(np.linalg.norm(state) - 1) < 1e-12


def test_coherent_state_variances():
    """Zero variance along the Bloch vector, F/2 transverse."""
    space = SpinSpace(4)
    ops = build_spin_operators(space)
    rng = np.random.default_rng(11)
    for _ in range(10):
        theta = rng.uniform(0.1, np.pi - 0.1)
        phi = rng.uniform(-np.pi, np.pi)
        state = spin_coherent_state(space, theta, phi)
        n = np.array([np.sin(theta) * np.cos(phi),
                      np.sin(theta) * np.sin(phi), np.cos(theta)])
        t1 = np.array([np.cos(theta) * np.cos(phi),
                       np.cos(theta) * np.sin(phi), -np.sin(theta)])
        t2 = np.cross(n, t1)
        for axis, var_expected in ((n, 0.0), (t1, 2.0), (t2, 2.0)):
            op = axis[0] * ops.Fx + axis[1] * ops.Fy + axis[2] * ops.Fz
            mean = np.vdot(state, op @ state).real
            var = np.vdot(state, op @ op @ state).real - mean ** 2
            assert abs(var - var_expected) < 1e-10


def test_rotation_identity_and_spinor_sign():
    ops = build_spin_operators(SpinSpace(0.5))
    assert np.abs(rotation_operator(ops, [0, 0, 1], 0.0) - np.eye(2)).max() < 1e-14
    # half-integer spins pick up -1 under a 2*pi rotation
    assert np.abs(rotation_operator(ops, [0, 0, 1], 2 * np.pi) + np.eye(2)).max() < 1e-10


def test_rotation_group_property():
    ops = build_spin_operators(SpinSpace(1.5))
    rng = np.random.default_rng(7)
    for _ in range(10):
        axis = rng.normal(size=3)
        axis /= np.linalg.norm(axis)
        a, b = rng.uniform(-3, 3, size=2)
        combined = rotation_operator(ops, axis, a) @ rotation_operator(ops, axis, b)
        direct = rotation_operator(ops, axis, a + b)
        assert np.abs(combined - direct).max() < 1e-10


def test_rotation_unitarity():
    ops = build_spin_operators(SpinSpace(4))
    R = rotation_operator(ops, [0.6, 0.0, 0.8], 1.7)
    assert np.abs(R.conj().T @ R - np.eye(9)).max() < 1e-10


def test_rotation_maps_pole_to_coherent_state():
    space = SpinSpace(4)
    ops = build_spin_operators(space)
    R = rotation_operator(ops, [0, 1, 0], np.pi / 2)
    up = np.zeros(9, dtype=complex)
    up[0] = 1
    overlap = abs(np.vdot(spin_coherent_state(space, np.pi / 2, 0.0), R @ up))
    assert overlap > 1 - 1e-10


def test_non_unit_axis_rejected():
    ops = build_spin_operators(SpinSpace(1))
    with pytest.raises(ValueError):
        rotation_operator(ops, [0, 0, 2], 1.0)


def test_bloch_vector_of_coherent_state():
    space = SpinSpace(3)
    ops = build_spin_operators(space)
    state = spin_coherent_state(space, 0.8, -1.1)
    n = bloch_vector(ops, state)
    expected = np.array([np.sin(0.8) * np.cos(-1.1),
                         np.sin(0.8) * np.sin(-1.1), np.cos(0.8)])
    assert np.abs(n - expected).max() < 1e-12
