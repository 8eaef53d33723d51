"""Config-driven batch runner with reproducible outputs.

Configs are flat INI text (key = value under [section]); every run writes
CSV/JSON artifacts plus a manifest recording the config hash and output
checksums.  Identical configs produce byte-identical data files: thread
counts are pinned (QCE_THREADS, default 1), floats are serialized with
repr-exact formatting, and no wall-clock content enters data files (manifest
timestamps are excluded from the hash).

Exit codes: 0 success, 2 config error, 3 numerical-convergence failure.
"""

import argparse
import configparser
import hashlib
import io
import json
import math
import os
import sys
from datetime import datetime, timezone


def _pin_threads():
    value = os.environ.get("QCE_THREADS", "1")
    for var in ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS", "MKL_NUM_THREADS",
                "NUMEXPR_NUM_THREADS", "VECLIB_MAXIMUM_THREADS"):
        os.environ.setdefault(var, value)
    return value


class ConfigError(Exception):
    pass


class ConvergenceError(Exception):
    pass


# ---------------------------------------------------------------------------
# configuration

class ExperimentConfig:
    """Validated, canonically ordered key = value configuration."""

    def __init__(self, sections: dict):
        self.sections = {s: dict(kv) for s, kv in sections.items()}
        self.validate()

    # -- parsing / serialization ------------------------------------------
    @classmethod
    def parse(cls, text: str) -> "ExperimentConfig":
        parser = configparser.ConfigParser(interpolation=None)
        parser.optionxform = str
        try:
            parser.read_string(text)
        except configparser.Error as exc:
            raise ConfigError(f"config syntax: {exc}") from None
        return cls({name: dict(parser[name]) for name in parser.sections()})

    @classmethod
    def load(cls, path: str) -> "ExperimentConfig":
        try:
            with open(path, "r", encoding="utf-8") as fh:
                return cls.parse(fh.read())
        except OSError as exc:
            raise ConfigError(f"cannot read config: {exc}") from None

    def serialize(self) -> str:
        out = io.StringIO()
        for section in sorted(self.sections):
            out.write(f"[{section}]\n")
            for key in sorted(self.sections[section]):
                out.write(f"{key} = {self.sections[section][key]}\n")
            out.write("\n")
        return out.getvalue()

    def hash(self) -> str:
        return hashlib.sha256(self.serialize().encode()).hexdigest()

    def with_overrides(self, overrides) -> "ExperimentConfig":
        sections = {s: dict(kv) for s, kv in self.sections.items()}
        for item in overrides:
            if "=" not in item or "." not in item.split("=", 1)[0]:
                raise ConfigError(f"override must look like section.key=value, got {item!r}")
            target, value = item.split("=", 1)
            section, key = target.split(".", 1)
            sections.setdefault(section.strip(), {})[key.strip()] = value.strip()
        return ExperimentConfig(sections)

    # -- typed access -------------------------------------------------------
    def get(self, section: str, key: str, default=None, cast=str):
        try:
            raw = self.sections[section][key]
        except KeyError:
            if default is None:
                raise ConfigError(f"missing {section}.{key}") from None
            return default
        try:
            if cast is bool:
                return raw.strip().lower() in ("1", "true", "yes", "on")
            return cast(raw)
        except ValueError:
            raise ConfigError(f"{section}.{key}: cannot parse {raw!r} as {cast.__name__}") from None

    def state_labels(self):
        return sorted(s.split(":", 1)[1] for s in self.sections if s.startswith("state:"))

    # -- validation ----------------------------------------------------------
    def validate(self):
        kind = self.get("model", "kind")
        if kind not in ("amol", "qkt"):
            raise ConfigError(f"model.kind must be amol or qkt, got {kind!r}")
        run_type = self.get("run", "type")
        allowed = {"spectrum", "entropy", "truncated", "classical_section", "lyapunov", "analyze"}
        if run_type not in allowed:
            raise ConfigError(f"run.type must be one of {sorted(allowed)}, got {run_type!r}")
        if kind == "qkt" and run_type in ("classical_section", "lyapunov"):
            raise ConfigError("classical runs are defined for the lattice model only")
        if kind == "amol":
            v1 = self.get("model", "V1", cast=float, default=160.0)
            if v1 <= 0:
                raise ConfigError("model.V1 must be positive")
            theta = self.get("model", "theta_L_deg", cast=float, default=80.0)
            if not 0.0 < theta <= 90.0:
                raise ConfigError("model.theta_L_deg must lie in (0, 90]")
            if self.get("model", "muB_Bx", cast=float, default=12.0) < 0:
                raise ConfigError("model.muB_Bx must be non-negative")
            for conv_key in ("spin_scale", "prep_spin_scale"):
                conv = self.get("model", conv_key, default="normalized")
                if conv not in ("normalized", "full"):
                    raise ConfigError(f"model.{conv_key} must be normalized or full")
            n_points = self.get("grid", "n_points", cast=int, default=256)
            if n_points < 64 or n_points & (n_points - 1):
                raise ConfigError("grid.n_points must be a power of two >= 64")
        else:
            if self.get("model", "j", cast=float, default=25.0) < 1:
                raise ConfigError("model.j must be >= 1")
            if self.get("model", "tau", cast=float, default=1.0) <= 0:
                raise ConfigError("model.tau must be positive")
        if run_type in ("spectrum", "entropy", "truncated", "analyze", "lyapunov"):
            if not self.state_labels():
                raise ConfigError(f"run.type={run_type} needs at least one [state:<label>] section")


# ---------------------------------------------------------------------------
# model assembly (imports deferred so thread pinning precedes numpy)

def _amol_objects(config: ExperimentConfig):
    import numpy as np
    from . import amol

    params = amol.AmolParams(
        V1=config.get("model", "V1", cast=float, default=160.0),
        theta_L=math.radians(config.get("model", "theta_L_deg", cast=float, default=80.0)),
        muB_Bx=config.get("model", "muB_Bx", cast=float, default=12.0),
        F=config.get("model", "F", cast=float, default=4.0),
        spin_scale_convention=config.get("model", "spin_scale", default="normalized"),
    )
    prep_params = amol.AmolParams(
        V1=params.V1, theta_L=params.theta_L, muB_Bx=params.muB_Bx, F=params.F,
        spin_scale_convention=config.get("model", "prep_spin_scale",
                                         default=params.spin_scale_convention),
    )
    grid = amol.LatticeGrid(
        n_points=config.get("grid", "n_points", cast=int, default=256),
        n_periods=config.get("grid", "n_periods", cast=int, default=1),
    )
    return params, prep_params, grid


def _amol_state(config: ExperimentConfig, label: str, prep_params, grid):
    from . import amol

    sec = f"state:{label}"
    prep = config.get(sec, "prep", default="diabatic")
    z0 = config.get(sec, "z0", cast=float, default=0.0)
    p0 = config.get(sec, "p0", cast=float, default=0.0)
    theta = config.get(sec, "theta", cast=float, default=0.0)
    phi = config.get(sec, "phi", cast=float, default=0.0)
    if prep not in ("diabatic", "gaussian"):
        raise ConfigError(f"{sec}.prep must be diabatic or gaussian")
    width = config.get(sec, "width", cast=float, default=-1.0)
    return amol.prepare_initial_state(prep_params, grid, z0, p0, theta, phi,
                                      prep=prep, width=None if width <= 0 else width)


def _qkt_objects(config: ExperimentConfig):
    from . import kickedtop as kt

    params = kt.KickedTopParams(
        kappa=config.get("model", "kappa", cast=float, default=3.0),
        p_rot=config.get("model", "p_rot", cast=float, default=math.pi / 2),
        tau=config.get("model", "tau", cast=float, default=1.0),
        j=config.get("model", "j", cast=float, default=25.0),
    )
    return params


def _qkt_state(config: ExperimentConfig, label: str, params):
    import numpy as np
    from . import kickedtop as kt

    sec = f"state:{label}"
    prep = config.get(sec, "prep", default="angles")
    if prep == "fixed_point":
        return kt.coherent_state_at(params, kt.elliptic_fixed_point(params).n)
    if prep == "chaotic_sea":
        return kt.coherent_state_at(params, kt.chaotic_sea_point(params))
    if prep == "angles":
        from .spincore import spin_coherent_state
        theta = config.get(sec, "theta", cast=float)
        phi = config.get(sec, "phi", cast=float, default=0.0)
        return spin_coherent_state(params.spin_space, theta, phi)
    raise ConfigError(f"{sec}.prep must be fixed_point, chaotic_sea or angles")


# ---------------------------------------------------------------------------
# output helpers

def _format_float(x) -> str:
    return f"{float(x):.17g}"


class OutputStage:
    """Collects output files and moves them into place atomically."""

    def __init__(self, out_dir: str):
        self.out_dir = out_dir
        self.names = []
        self.warnings = []
        self._staged = {}

    def add_csv(self, name: str, header_comment: str, columns, rows):
        buf = io.StringIO()
        buf.write(f"# {header_comment}\n")
        buf.write(",".join(columns) + "\n")
        for row in rows:
            buf.write(",".join(_format_float(v) for v in row) + "\n")
        self._staged[name] = buf.getvalue().encode()
        self.names.append(name)

    def add_json(self, name: str, payload: dict):
        self._staged[name] = (json.dumps(payload, indent=2, sort_keys=True) + "\n").encode()
        self.names.append(name)

    def warn(self, message: str):
        self.warnings.append(message)

    def commit(self, manifest: dict) -> dict:
        os.makedirs(self.out_dir, exist_ok=True)
        outputs = []
        for name in self.names:
            data = self._staged[name]
            outputs.append({"name": name,
                            "sha256": hashlib.sha256(data).hexdigest(),
                            "bytes": len(data)})
        manifest = dict(manifest, outputs=outputs, warnings=self.warnings)
        self._staged["manifest.json"] = (
            json.dumps(manifest, indent=2, sort_keys=True) + "\n").encode()
        for name, data in self._staged.items():
            tmp = os.path.join(self.out_dir, f".tmp.{name}")
            with open(tmp, "wb") as fh:
                fh.write(data)
            os.replace(tmp, os.path.join(self.out_dir, name))
        return manifest


# ---------------------------------------------------------------------------
# run types

def _run_amol_quantum(config: ExperimentConfig, stage: OutputStage):
    import numpy as np
    from . import amol, spectral
    from .entanglement import (EntropySeries, entropy_series, fit_initial_rise,
                               power_spectrum, spectral_flatness)

    params, prep_params, grid = _amol_objects(config)
    run_type = config.get("run", "type")
    H = amol.build_hamiltonian(params, grid)
    dec = spectral.decompose(H, "hamiltonian")
    prop = spectral.SpectralPropagator(dec)
    dims = (grid.n_points, params.spin_space.dim)

    t_max = config.get("run", "t_max", cast=float, default=50.0)
    dt_sample = config.get("run", "dt_sample", cast=float, default=0.005)
    times = np.arange(0.0, t_max + dt_sample / 2, dt_sample)

    for label in config.state_labels():
        state = _amol_state(config, label, prep_params, grid)
        if run_type == "spectrum":
            sup = spectral.support_spectrum(dec, state.amplitudes)
            stage.add_csv(f"support_{label}.csv", "eigenvalue_units=E_R",
                          ["eigenvalue", "population"],
                          zip(sup.eigenvalues, sup.populations))
            continue
        series = entropy_series(prop, state.amplitudes, times, dims, keep=1)
        stage.add_csv(f"entropy_{label}.csv", "time_units=E_R*t/hbar",
                      ["time", "entropy"], zip(series.times, series.values))
        if run_type == "truncated":
            kept_n = config.get("run", "kept", cast=int, default=8)
            sup = spectral.support_spectrum(dec, state.amplitudes)
            kept = sup.top_indices(kept_n)
            stage.warn(f"{label}: kept {kept_n} eigenstates capture "
                       f"{sup.populations[kept].sum():.6f} of the population")
            tprop = spectral.TruncatedPropagator(dec, kept, renormalize=True)
            tser = entropy_series(tprop, state.amplitudes, times, dims, keep=1)
            stage.add_csv(f"entropy_{label}_truncated.csv", "time_units=E_R*t/hbar",
                          ["time", "entropy"], zip(tser.times, tser.values))
        if run_type == "analyze":
            sup = spectral.support_spectrum(dec, state.amplitudes)
            stage.add_csv(f"support_{label}.csv", "eigenvalue_units=E_R",
                          ["eigenvalue", "population"],
                          zip(sup.eigenvalues, sup.populations))
            spec = power_spectrum(series)
            stage.add_csv(f"spectrum_{label}.csv",
                          "frequency_units=rad_per_time;window=hann;zero_pad=4",
                          ["frequency", "magnitude"],
                          zip(spec.frequencies, spec.magnitudes))
            try:
                quad, expo, preferred = fit_initial_rise(series)
                stage.add_json(f"fits_{label}.json", {
                    "preferred": preferred.model,
                    "quadratic": {"params": quad.params, "residual": quad.residual,
                                  "window": list(quad.window)},
                    "exponential": {"params": expo.params, "residual": expo.residual,
                                    "window": list(expo.window)},
                    "spectral_flatness": spectral_flatness(spec),
                })
            except ValueError as exc:
                stage.warn(f"{label}: rise fit skipped ({exc})")


def _run_qkt(config: ExperimentConfig, stage: OutputStage):
    import numpy as np
    from . import kickedtop as kt
    from . import spectral
    from .entanglement import (EntropySeries, fit_initial_rise, linear_entropy,
                               power_spectrum, spectral_flatness)

    params = _qkt_objects(config)
    run_type = config.get("run", "type")
    F = kt.floquet_operator(params)
    dec = spectral.decompose(F, "floquet")
    prop = spectral.SpectralPropagator(dec)
    N = params.n_qubits
    n_kicks = config.get("run", "n_kicks", cast=int, default=500)
    kicks = np.arange(0, n_kicks + 1)

    def pair_entropy_series(propagator, state):
        states = propagator.evolve_batch(state, kicks)
        vals = np.array([linear_entropy(kt.two_qubit_rdm(s, N)) for s in states])
        return EntropySeries(times=kicks.astype(float), values=vals,
                             subsystem_dims=(4, 2 ** (N - 2)))

    for label in config.state_labels():
        state = _qkt_state(config, label, params)
        if run_type == "spectrum":
            sup = spectral.support_spectrum(dec, state)
            stage.add_csv(f"support_{label}.csv", "eigenvalue_units=radians",
                          ["eigenvalue", "population"],
                          zip(sup.eigenvalues, sup.populations))
            continue
        series = pair_entropy_series(prop, state)
        stage.add_csv(f"entropy_{label}.csv", "time_units=kicks",
                      ["time", "entropy"], zip(series.times, series.values))
        if run_type == "truncated":
            kept_n = config.get("run", "kept", cast=int, default=3)
            sup = spectral.support_spectrum(dec, state)
            kept = sup.top_indices(kept_n)
            stage.warn(f"{label}: kept {kept_n} eigenstates capture "
                       f"{sup.populations[kept].sum():.6f} of the population")
            tprop = spectral.TruncatedPropagator(dec, kept, renormalize=True)
            tser = pair_entropy_series(tprop, state)
            stage.add_csv(f"entropy_{label}_truncated.csv", "time_units=kicks",
                          ["time", "entropy"], zip(tser.times, tser.values))
        if run_type == "analyze":
            sup = spectral.support_spectrum(dec, state)
            stage.add_csv(f"support_{label}.csv", "eigenvalue_units=radians",
                          ["eigenvalue", "population"],
                          zip(sup.eigenvalues, sup.populations))
            spec = power_spectrum(series)
            stage.add_csv(f"spectrum_{label}.csv",
                          "frequency_units=rad_per_kick;window=hann;zero_pad=4",
                          ["frequency", "magnitude"],
                          zip(spec.frequencies, spec.magnitudes))
            sat = series.values[min(20, n_kicks):].mean()
            reach = np.nonzero(series.values >= 0.9 * sat)[0]
            window_end = float(max(int(reach[0]) if reach.size else n_kicks, 5))
            try:
                quad, expo, preferred = fit_initial_rise(series, t_window=(0.0, window_end))
                stage.add_json(f"fits_{label}.json", {
                    "preferred": preferred.model,
                    "quadratic": {"params": quad.params, "residual": quad.residual,
                                  "window": list(quad.window)},
                    "exponential": {"params": expo.params, "residual": expo.residual,
                                    "window": list(expo.window)},
                    "spectral_flatness": spectral_flatness(spec),
                })
            except ValueError as exc:
                stage.warn(f"{label}: rise fit skipped ({exc})")


def _run_classical(config: ExperimentConfig, stage: OutputStage):
    import numpy as np
    from . import amol
    from . import amol_classical as cl

    params, _, _ = _amol_objects(config)
    run_type = config.get("run", "type")

    if run_type == "lyapunov":
        t_total = config.get("run", "t_total", cast=float, default=4000.0)
        dt = config.get("run", "dt", cast=float, default=1e-3)
        result = {}
        for label in config.state_labels():
            sec = f"state:{label}"
            ic = cl.ClassicalState.from_angles(
                config.get(sec, "z0", cast=float),
                config.get(sec, "p0", cast=float, default=0.0),
                config.get(sec, "theta", cast=float),
                config.get(sec, "phi", cast=float, default=0.0))
            result[label] = cl.lyapunov_estimate(ic, params, t_total, dt=dt)
        stage.add_json("lyapunov.json", {"t_total": t_total, "dt": dt,
                                         "lambda_max": result})
        return

    n_crossings = config.get("run", "n_crossings", cast=int, default=200)
    dt = config.get("run", "dt", cast=float, default=-1.0)
    dt = None if dt <= 0 else dt
    variables = config.get("run", "section_variables", default="mu_y,p").split(",")
    energy = config.get("run", "energy", cast=float, default=math.nan)
    rng = np.random.default_rng(config.get("run", "seed", cast=int, default=0))

    ics = []
    labels = config.state_labels()
    if labels:
        for label in labels:
            sec = f"state:{label}"
            ics.append(cl.ClassicalState.from_angles(
                config.get(sec, "z0", cast=float),
                config.get(sec, "p0", cast=float, default=0.0),
                config.get(sec, "theta", cast=float),
                config.get(sec, "phi", cast=float, default=0.0)))
    else:
        if math.isnan(energy):
            raise ConfigError("classical_section needs run.energy or [state:] sections")
        n_traj = config.get("run", "n_trajectories", cast=int, default=10)
        attempts = 0
        while len(ics) < n_traj and attempts < 200 * n_traj:
            attempts += 1
            z = rng.uniform(-0.25, 0.25)
            theta = rng.uniform(0.05, math.pi - 0.05)
            try:
                ics.append(cl.seed_on_shell(params, energy, z_over_lambda=z,
                                            p=None, theta=theta))
            except ValueError:
                continue
        if len(ics) < n_traj:
            raise ConvergenceError(
                f"only {len(ics)}/{n_traj} on-shell initial conditions found at E={energy}")

    for variable in variables:
        section = cl.SectionDef(variable.strip(), +1)
        rows = []
        incomplete = 0
        for k, ic in enumerate(ics):
            result = cl.poincare_section(ic, params, section, n_crossings, dt=dt)
            if not result.complete:
                incomplete += 1
            for point in result.points:
                rows.append(tuple(point) + (float(k),))
        if incomplete:
            stage.warn(f"{variable}: {incomplete} trajectories hit the time budget "
                       f"before {n_crossings} crossings")
        stage.add_csv(f"sections_{variable.strip()}.csv",
                      "length=z/lambda;momentum=hbar*k;angles=radians;time=E_R*t/hbar",
                      ["z_over_lambda", "p_over_hbark", "theta", "phi",
                       "crossing_time", "trajectory"],
                      rows)


def run(config: ExperimentConfig, out_dir: str) -> dict:
    """Execute one configuration and write its artifacts into out_dir."""
    stage = OutputStage(out_dir)
    kind = config.get("model", "kind")
    run_type = config.get("run", "type")
    if run_type in ("classical_section", "lyapunov"):
        _run_classical(config, stage)
    elif kind == "amol":
        _run_amol_quantum(config, stage)
    else:
        _run_qkt(config, stage)
    manifest = {
        "config_hash": config.hash(),
        "config": config.serialize(),
        "artifact_version": _artifact_version(),
        "created_utc": datetime.now(timezone.utc).isoformat(),
        "threads": os.environ.get("QCE_THREADS", "1"),
    }
    return stage.commit(manifest)


def _artifact_version() -> str:
    from . import __version__
    return __version__


# ---------------------------------------------------------------------------
# presets

PAPER_AMOL_MODEL = {
    "kind": "amol", "V1": "160.0", "theta_L_deg": "80.0", "muB_Bx": "12.0",
    "F": "4", "spin_scale": "full", "prep_spin_scale": "normalized",
}
PAPER_QKT_MODEL = {"kind": "qkt", "kappa": "3.0",
                   "p_rot": repr(math.pi / 2), "tau": "1.0", "j": "25"}
_REGULAR_STATE = {"z0": "-0.15", "p0": "0.0", "theta": "1.27", "phi": "0.0",
                  "prep": "diabatic"}
_CHAOTIC_STATE = {"z0": "0.06", "p0": "0.0", "theta": repr(math.pi / 2),
                  "phi": "0.0", "prep": "diabatic"}


def builtin_presets() -> dict:
    """Named configurations reproducing one figure analogue each."""
    grid = {"n_points": "256", "n_periods": "1"}
    return {
        "fig1_sections": ExperimentConfig({
            "model": PAPER_AMOL_MODEL,
            "grid": grid,
            "run": {"type": "classical_section", "energy": "-280.0",
                    "n_trajectories": "10", "n_crossings": "250", "seed": "7",
                    "section_variables": "mu_y,p"},
        }),
        "fig2_entropy": ExperimentConfig({
            "model": PAPER_AMOL_MODEL,
            "grid": grid,
            "state:regular": _REGULAR_STATE,
            "state:chaotic": _CHAOTIC_STATE,
            "run": {"type": "analyze", "t_max": "50.0", "dt_sample": "0.005"},
        }),
        "fig3_support": ExperimentConfig({
            "model": PAPER_AMOL_MODEL,
            "grid": grid,
            "state:regular": _REGULAR_STATE,
            "state:chaotic": _CHAOTIC_STATE,
            "run": {"type": "spectrum"},
        }),
        "fig4_truncated": ExperimentConfig({
            "model": PAPER_AMOL_MODEL,
            "grid": grid,
            "state:regular": _REGULAR_STATE,
            "run": {"type": "truncated", "kept": "8", "t_max": "50.0",
                    "dt_sample": "0.005"},
        }),
        "fig5_qkt_support": ExperimentConfig({
            "model": PAPER_QKT_MODEL,
            "state:regular": {"prep": "fixed_point"},
            "state:chaotic": {"prep": "chaotic_sea"},
            "run": {"type": "spectrum"},
        }),
        "fig6_qkt_entropy": ExperimentConfig({
            "model": PAPER_QKT_MODEL,
            "state:regular": {"prep": "fixed_point"},
            "state:chaotic": {"prep": "chaotic_sea"},
            "run": {"type": "truncated", "kept": "3", "n_kicks": "500"},
        }),
    }


# ---------------------------------------------------------------------------
# entry point

def _error_record(kind: str, message: str) -> str:
    return json.dumps({"error": {"type": kind, "message": message}})


def main(argv=None) -> int:
    threads = _pin_threads()

    parser = argparse.ArgumentParser(
        prog="qce",
        description="entanglement dynamics in quantum-chaotic systems")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run a config file")
    p_run.add_argument("config")
    p_run.add_argument("--out", default=None, help="output directory")
    p_run.add_argument("--set", action="append", default=[], dest="overrides",
                       metavar="SECTION.KEY=VALUE")

    p_preset = sub.add_parser("preset", help="run a builtin preset")
    p_preset.add_argument("name")
    p_preset.add_argument("--out", default=None)
    p_preset.add_argument("--set", action="append", default=[], dest="overrides",
                          metavar="SECTION.KEY=VALUE")

    sub.add_parser("list-presets", help="list builtin presets")

    p_val = sub.add_parser("validate", help="validate a config file")
    p_val.add_argument("config")

    args = parser.parse_args(argv)

    try:
        if args.command == "list-presets":
            for name in sorted(builtin_presets()):
                print(name)
            return 0

        if args.command == "validate":
            config = ExperimentConfig.load(args.config)
            print(config.hash())
            return 0

        if args.command == "preset":
            presets = builtin_presets()
            if args.name not in presets:
                raise ConfigError(f"unknown preset {args.name!r}; "
                                  f"choose from {sorted(presets)}")
            config = presets[args.name].with_overrides(args.overrides)
            out_dir = args.out or os.path.join("out", args.name)
        else:
            config = ExperimentConfig.load(args.config).with_overrides(args.overrides)
            out_dir = args.out or config.get("run", "out_dir", default="out/run")

        os.environ["QCE_THREADS"] = threads
        manifest = run(config, out_dir)
        print(json.dumps({"out_dir": out_dir,
                          "config_hash": manifest["config_hash"],
                          "outputs": [o["name"] for o in manifest["outputs"]],
                          "warnings": manifest["warnings"]}, indent=2))
        return 0
    except ConfigError as exc:
        print(_error_record("config", str(exc)), file=sys.stderr)
        return 2
    except ConvergenceError as exc:
        print(_error_record("convergence", str(exc)), file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
