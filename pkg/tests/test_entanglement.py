import numpy as np
import pytest

from qce.entanglement import (EntropySeries, default_rise_window, entropy_series,
                              fit_initial_rise, linear_entropy, partial_trace,
                              power_spectrum, spectral_flatness)


def random_state(rng, dim):
    psi = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    return psi / np.linalg.norm(psi)


def test_bell_state_reduction():
    bell = np.zeros(4, dtype=complex)
    bell[0] = bell[3] = 1 / np.sqrt(2)
    rho = partial_trace(bell, (2, 2), 0)
    assert np.abs(rho - np.eye(2) / 2).max() < 1e-14
    assert abs(linear_entropy(rho) - 0.5) < 1e-12


def test_product_state_is_pure():
    rng = np.random.default_rng(0)
    psi = np.kron(random_state(rng, 5), random_state(rng, 7))
    for keep in (0, 1):
        assert linear_entropy(partial_trace(psi, (5, 7), keep)) < 1e-12


def test_schmidt_symmetry_9x16():
    rng = np.random.default_rng(1)
    for _ in range(10):
        psi = random_state(rng, 9 * 16)
        p1 = 1 - linear_entropy(partial_trace(psi, (9, 16), 0))
        p2 = 1 - linear_entropy(partial_trace(psi, (9, 16), 1))
        assert abs(p1 - p2) < 1e-12


def test_partial_trace_density_input():
    rng = np.random.default_rng(2)
    psi = random_state(rng, 12)
    rho_full = np.outer(psi, psi.conj())
    for keep in (0, 1):
        a = partial_trace(psi, (3, 4), keep)
        b = partial_trace(rho_full, (3, 4), keep)
        assert np.abs(a - b).max() < 1e-12


def test_partial_trace_properties():
    rng = np.random.default_rng(3)
    psi = random_state(rng, 6 * 5)
    rho = partial_trace(psi, (6, 5), 0)
    assert abs(np.trace(rho) - 1) < 1e-10
    assert np.abs(rho - rho.conj().T).max() < 1e-12
    assert np.linalg.eigvalsh(rho).min() > -1e-10


def test_partial_trace_dimension_mismatch():
    with pytest.raises(ValueError):
        partial_trace(np.ones(7), (2, 3), 0)


def test_linear_entropy_closed_forms():
    assert linear_entropy(np.eye(9) / 9) == pytest.approx(1 - 1 / 9, abs=1e-12)
    rho2 = np.diag([0.5, 0.5, 0.0])
    assert linear_entropy(rho2) == pytest.approx(0.5, abs=1e-12)
    pure = np.zeros((4, 4))
    pure[2, 2] = 1.0
    assert linear_entropy(pure) == 0.0


def test_entropy_bounds_random_mixtures():
    rng = np.random.default_rng(4)
    for d in (2, 5, 9):
        for _ in range(20):
            w = rng.dirichlet(np.ones(d))
            rho = np.diag(w)
            s = linear_entropy(rho)
            assert 0.0 <= s <= 1 - 1 / d + 1e-12


def test_local_unitary_invariance():
    rng = np.random.default_rng(5)
    d1, d2 = 4, 6
    psi = random_state(rng, d1 * d2)
    s0 = linear_entropy(partial_trace(psi, (d1, d2), 0))
    for _ in range(5):
        u1, _ = np.linalg.qr(rng.normal(size=(d1, d1)) + 1j * rng.normal(size=(d1, d1)))
        u2, _ = np.linalg.qr(rng.normal(size=(d2, d2)) + 1j * rng.normal(size=(d2, d2)))
        rotated = np.kron(u1, u2) @ psi
        s1 = linear_entropy(partial_trace(rotated, (d1, d2), 0))
        assert abs(s1 - s0) < 1e-12


def test_entropy_series_stationary_state():
    # eigenstate of a toy Hamiltonian: the series must be constant
    rng = np.random.default_rng(6)
    d1 = d2 = 3
    A = rng.normal(size=(9, 9)) + 1j * rng.normal(size=(9, 9))
    H = (A + A.conj().T) / 2
    evals, evecs = np.linalg.eigh(H)
    psi = evecs[:, 4]

    def prop(state, t):
        coeff = evecs.conj().T @ state
        return evecs @ (coeff * np.exp(-1j * evals * t))

    series = entropy_series(prop, psi, np.linspace(0, 5, 11), (d1, d2))
    assert np.ptp(series.values) < 1e-12


def test_entropy_series_matches_manual_recomputation():
    rng = np.random.default_rng(7)
    d1, d2 = 3, 4
    A = rng.normal(size=(12, 12)) + 1j * rng.normal(size=(12, 12))
    H = (A + A.conj().T) / 2
    evals, evecs = np.linalg.eigh(H)
    psi = random_state(rng, 12)

    def prop(state, t):
        coeff = evecs.conj().T @ state
        return evecs @ (coeff * np.exp(-1j * evals * t))

    times = rng.uniform(0, 10, size=10)
    series = entropy_series(prop, psi, times, (d1, d2), keep=1)
    for t, s in zip(times, series.values):
        direct = linear_entropy(partial_trace(prop(psi, t), (d1, d2), 1))
        assert abs(s - direct) < 1e-12


def _tone_series(freq, n=512, dt=0.05, amp=0.1):
    t = np.arange(n) * dt
    return EntropySeries(times=t, values=amp * np.sin(freq * t) + 0.2,
                         subsystem_dims=(2, 2))


def test_power_spectrum_pure_tone():
    w0 = 2 * np.pi * 2.0  # on-bin for n*dt = 25.6 -> use nearest bin anyway
    series = _tone_series(w0)
    spec = power_spectrum(series, window="none", zero_pad=1)
    peak = spec.dominant_frequency()
    df = spec.frequencies[1] - spec.frequencies[0]
    assert abs(peak - w0) <= df
    order = np.sort(spec.magnitudes)[::-1]
    assert order[0] > 10 * np.median(order[2:])


def test_power_spectrum_two_tones_no_intermodulation():
    t = np.arange(1024) * 0.05
    w1, w2 = 3.0, 7.5
    vals = 0.1 * np.sin(w1 * t) + 0.07 * np.sin(w2 * t)
    series = EntropySeries(times=t, values=vals, subsystem_dims=(2, 2))
    spec = power_spectrum(series, window="hann", zero_pad=4)

    def magnitude_at(w):
        return spec.magnitudes[np.argmin(np.abs(spec.frequencies - w))]

    peak = spec.magnitudes.max()
    assert magnitude_at(w1) > 0.3 * peak
    assert magnitude_at(w2) > 0.2 * peak
    assert magnitude_at(w1 + w2) < 0.02 * peak


def test_power_spectrum_constant_series_is_zero():
    series = EntropySeries(times=np.arange(64.0), values=np.full(64, 0.31),
                           subsystem_dims=(2, 2))
    spec = power_spectrum(series, window="hann")
    assert np.abs(spec.magnitudes).max() < 1e-12


def test_power_spectrum_rejects_nonuniform_sampling():
    series = EntropySeries(times=np.array([0.0, 0.1, 0.3]),
                           values=np.zeros(3), subsystem_dims=(2, 2))
    with pytest.raises(ValueError):
        power_spectrum(series)


def test_power_spectrum_parseval():
    rng = np.random.default_rng(8)
    vals = rng.normal(size=256)
    series = EntropySeries(times=np.arange(256.0), values=vals, subsystem_dims=(2, 2))
    spec = power_spectrum(series, window="hann", zero_pad=2)
    x = (vals - vals.mean()) * np.hanning(256)
    # one-sided rfft: double every bin except DC (and Nyquist when present)
    mags2 = spec.magnitudes ** 2
    total = 2 * mags2.sum() - mags2[0]
    if spec.n_fft % 2 == 0:
        total -= mags2[-1]
    assert abs(total / spec.n_fft - np.sum(x ** 2)) < 1e-8


def test_spectral_flatness_tone_vs_noise():
    tone = power_spectrum(_tone_series(4.0, n=1024), window="hann", zero_pad=4)
    assert spectral_flatness(tone) < 0.1
    rng = np.random.default_rng(9)
    noise = EntropySeries(times=np.arange(1024.0),
                          values=rng.normal(size=1024), subsystem_dims=(2, 2))
    flat = spectral_flatness(power_spectrum(noise, window="none", zero_pad=1))
    assert flat > 0.5


def test_fit_recovers_exact_quadratic():
    t = np.linspace(0, 0.02, 200)
    series = EntropySeries(times=t, values=(t / 0.01) ** 2, subsystem_dims=(2, 2))
    fit = fit_initial_rise(series, model="quadratic", t_window=(0, 0.02))
    assert abs(fit.params["t0"] - 0.01) < 1e-6


def test_fit_prefers_exponential_on_exponential_data():
    t = np.arange(1.0, 12.0)
    vals = 0.01 * np.exp(0.5 * t)
    series = EntropySeries(times=t, values=vals, subsystem_dims=(2, 2))
    q, e, preferred = fit_initial_rise(series, t_window=(0, 11))
    assert preferred.model == "exponential"
    assert abs(e.params["rate"] - 0.5) < 1e-6


def test_fit_rejects_degenerate_window():
    t = np.linspace(0, 1, 50)
    series = EntropySeries(times=t, values=t ** 2, subsystem_dims=(2, 2))
    with pytest.raises(ValueError):
        fit_initial_rise(series, t_window=(0, 0.05))


def test_default_rise_window_tracks_first_maximum():
    t = np.linspace(0, 10, 1001)
    vals = np.sin(t) ** 2  # first max at t = pi/2
    series = EntropySeries(times=t, values=vals, subsystem_dims=(2, 2))
    end = default_rise_window(series)
    # 20% of the first maximum (1.0) is reached at sin^2 t = 0.2
    assert abs(end - np.arcsin(np.sqrt(0.2))) < 0.02
