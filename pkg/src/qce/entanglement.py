"""Linear-entropy entanglement measures and their chaos signatures.

For a pure state of two subsystems the linear entropy S = 1 - Tr(rho~^2) of
either reduced density matrix quantifies the entanglement; S = 0 for product
states and S = 1 - 1/d for maximal mixing of a d-dimensional subsystem.  The
time series S(t), its power spectrum and the initial rise law (quadratic vs
exponential) are the quantities compared between regular and chaotic initial
states.
"""

import logging
from dataclasses import dataclass, field

import numpy as np

log = logging.getLogger(__name__)


def partial_trace(state_or_density: np.ndarray, dims, keep: int) -> np.ndarray:
    """Reduced density matrix of one subsystem.

    Parameters
    ----------
    state_or_density : pure-state vector of length d1*d2, or a (d1*d2)^2 matrix
    dims : (d1, d2) with subsystem 1 the major index
    keep : 0 to keep subsystem 1, 1 to keep subsystem 2
    """
    d1, d2 = dims
    arr = np.asarray(state_or_density)
    if keep not in (0, 1):
        raise ValueError("keep must be 0 or 1")
    if arr.ndim == 1:
        if arr.shape[0] != d1 * d2:
            raise ValueError(f"state length {arr.shape[0]} != {d1}*{d2}")
        A = arr.reshape(d1, d2)
        if keep == 0:
            return A @ A.conj().T
        return A.T @ A.conj()
    if arr.shape != (d1 * d2, d1 * d2):
        raise ValueError(f"density matrix shape {arr.shape} incompatible with dims {dims}")
    rho = arr.reshape(d1, d2, d1, d2)
    if keep == 0:
        return np.trace(rho, axis1=1, axis2=3)
    return np.trace(rho, axis1=0, axis2=2)


def linear_entropy(rho: np.ndarray) -> float:
    """S = 1 - Tr(rho^2), clamped to [0, 1 - 1/d].

    Clamping beyond 1e-9 is logged; round-off level excursions are silent.
    """
    rho = np.asarray(rho)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise ValueError("density matrix must be square")
    d = rho.shape[0]
    purity = float(np.sum(np.abs(rho) ** 2))  # Tr(rho^2) for Hermitian rho
    s = 1.0 - purity
    lo, hi = 0.0, 1.0 - 1.0 / d
    if s < lo - 1e-9 or s > hi + 1e-9:
        log.warning("linear entropy %.3e outside [0, %.6f]; clamping", s, hi)
    return float(min(max(s, lo), hi))


@dataclass(frozen=True)
class EntropySeries:
    """Sampled linear-entropy time series with provenance metadata."""

    times: np.ndarray
    values: np.ndarray
    subsystem_dims: tuple
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.times.shape != self.values.shape:
            raise ValueError("times and values must have matching shapes")

    def peak(self) -> float:
        return float(self.values.max())


def entropy_series(propagator, initial_state: np.ndarray, times, dims,
                   keep: int = 1, metadata: dict = None) -> EntropySeries:
    """Linear entropy of the kept subsystem at each requested time.

    ``propagator`` is a callable (state, t) -> state; objects exposing
    ``evolve_batch(state, times)`` get the batched fast path.
    """
    times = np.asarray(times, dtype=float)
    d1, d2 = dims
    if initial_state.shape[0] != d1 * d2:
        raise ValueError("initial state does not match subsystem dims")
    values = np.empty(times.shape)
    if hasattr(propagator, "evolve_batch"):
        chunk = max(1, int(4e6 // (d1 * d2)))
        for start in range(0, times.size, chunk):
            block = times[start:start + chunk]
            states = propagator.evolve_batch(initial_state, block)
            for i, psi in enumerate(states):
                values[start + i] = linear_entropy(partial_trace(psi, dims, keep))
    else:
        for i, t in enumerate(times):
            psi = propagator(initial_state, t)
            values[i] = linear_entropy(partial_trace(psi, dims, keep))
    return EntropySeries(times=times, values=values, subsystem_dims=(d1, d2),
                         metadata=dict(metadata or {}))


@dataclass(frozen=True)
class PowerSpectrum:
    """One-sided magnitude spectrum of a mean-subtracted entropy series.

    Frequencies are angular (rad per time unit), so peaks line up directly
    with eigenfrequency-difference sums omega_ij + omega_kl.
    """

    frequencies: np.ndarray
    magnitudes: np.ndarray
    n_fft: int
    window: str

    def dominant_frequency(self) -> float:
        return float(self.frequencies[np.argmax(self.magnitudes)])


def power_spectrum(series: EntropySeries, window: str = "hann",
                   zero_pad: int = 4) -> PowerSpectrum:
    """Magnitude spectrum of S(t) - mean(S) with optional Hann window.

    Requires uniform time sampling; zero_pad multiplies the FFT length for
    peak interpolation (it adds no information).
    """
    t = series.times
    if t.size < 2:
        raise ValueError("series too short for a spectrum")
    steps = np.diff(t)
    dt = steps[0]
    if np.abs(steps - dt).max() > 1e-9 * max(abs(dt), 1.0):
        raise ValueError("power_spectrum requires uniform time sampling")
    x = series.values - series.values.mean()
    if window == "hann":
        x = x * np.hanning(x.size)
    elif window != "none":
        raise ValueError(f"unknown window {window!r}")
    if zero_pad < 1:
        raise ValueError("zero_pad factor must be >= 1")
    n_fft = int(x.size * zero_pad)
    spec = np.fft.rfft(x, n=n_fft)
    freqs = 2 * np.pi * np.fft.rfftfreq(n_fft, d=dt)
    return PowerSpectrum(frequencies=freqs, magnitudes=np.abs(spec),
                         n_fft=n_fft, window=window)


def spectral_flatness(spectrum: PowerSpectrum) -> float:
    """Geometric-mean / arithmetic-mean ratio of the spectral magnitudes.

    Near 0 for a line spectrum, near 1 for a flat one.  An all-zero spectrum
    (constant series) returns 0.
    """
    mags = spectrum.magnitudes
    if mags.size == 0:
        raise ValueError("empty spectrum")
    mean = mags.mean()
    if mean <= 0.0:
        return 0.0
    # tiny floor keeps exact-zero bins from collapsing the geometric mean
    floor = mags.max() * 1e-300
    geo = np.exp(np.mean(np.log(np.maximum(mags, floor))))
    return float(geo / mean)


@dataclass(frozen=True)
class RiseFit:
    """Initial-rise fit result for one model family."""

    model: str
    params: dict
    residual: float
    window: tuple
    n_points: int


def default_rise_window(series: EntropySeries, fraction: float = 0.2) -> float:
    """End time of the default fit window: S first reaches ``fraction`` of
    its first local maximum (the saturation plateau counts as a maximum)."""
    v = series.values
    peaks = np.nonzero((v[1:-1] >= v[:-2]) & (v[1:-1] >= v[2:]))[0]
    first_max = v[peaks[0] + 1] if peaks.size else v.max()
    target = fraction * first_max
    above = np.nonzero(v >= target)[0]
    if above.size == 0:
        return float(series.times[-1])
    return float(series.times[above[0]])


def fit_initial_rise(series: EntropySeries, model: str = "both",
                     t_window: tuple = None):
    """Fit the initial entanglement growth to S=(t/t0)^2 or S=A exp(r t).

    The quadratic is a one-parameter least-squares fit of S against t^2; the
    exponential is a linear fit of log S (so it needs S > 0 inside the
    window).  With model="both", returns (quadratic_fit, exponential_fit,
    preferred) where preferred is the lower-residual model; both models carry
    a comparable point count, so the raw RMS residual in S is the criterion.
    """
    if t_window is None:
        t_window = (0.0, default_rise_window(series))
    t0w, t1w = t_window
    mask = (series.times >= t0w) & (series.times <= t1w)
    t = series.times[mask]
    s = series.values[mask]
    pos = (t > 0) & (s > 0)
    if pos.sum() < 5:
        raise ValueError(f"rise window {t_window} holds {int(pos.sum())} usable "
                         "points; need at least 5")
    t, s = t[pos], s[pos]

    def quad_fit():
        a = float(np.dot(t ** 2, s) / np.dot(t ** 2, t ** 2))
        a = max(a, 1e-300)
        resid = float(np.sqrt(np.mean((a * t ** 2 - s) ** 2)))
        return RiseFit(model="quadratic", params={"t0": 1.0 / np.sqrt(a)},
                       residual=resid, window=(t0w, t1w), n_points=t.size)

    def exp_fit():
        coeffs = np.polyfit(t, np.log(s), 1)
        rate, log_a = float(coeffs[0]), float(coeffs[1])
        pred = np.exp(log_a + rate * t)
        resid = float(np.sqrt(np.mean((pred - s) ** 2)))
        return RiseFit(model="exponential",
                       params={"rate": rate, "prefactor": float(np.exp(log_a))},
                       residual=resid, window=(t0w, t1w), n_points=t.size)

    if model == "quadratic":
        return quad_fit()
    if model == "exponential":
        return exp_fit()
    if model == "both":
        q, e = quad_fit(), exp_fit()
        return q, e, (q if q.residual <= e.residual else e)
    raise ValueError(f"unknown rise model {model!r}")
