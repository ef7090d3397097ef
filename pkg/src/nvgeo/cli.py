"""Command-line front end: config parsing, subcommand dispatch, CSV/JSON emission.

Design rules the outputs follow:

* CSV files contain a single header row of column names and LF-terminated
  data rows; floats use 17 significant digits so a replayed run is
  byte-identical.
* Every CSV gets a JSON sidecar holding the fully resolved configuration
  (plus any fitted numbers), and every run writes a manifest listing the
  produced files with their SHA-256 digests.
* All unit handling happens here: the CLI speaks mT / us / MHz, the
  library speaks SI (tesla, seconds, rad/s).

Exit codes: 0 success, 2 configuration/usage error, 3 numerical failure
(a required fit could not be performed).
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
from dataclasses import asdict, dataclass, fields
from datetime import datetime, timezone

import numpy as np

from . import __version__
from .analysis import (
    InsufficientDecayError,
    StrainOptions,
    dimer_t2_histogram,
    fit_gaussian,
    fit_stretched_exp,
    t2_field_scan,
)
from .bathgen import diamond_lattice, sample_bath, save_bath
from .echo import bath_echo_curve, decompose_echo, fid_curve
from .nvmodel import NvParams
from .pulsesim import echo_sequence_population, rabi_signal, ramsey_population

__all__ = ["RunConfig", "ConfigError", "load_config", "main"]

TWO_PI = 2 * np.pi


class ConfigError(Exception):
    """Invalid configuration; maps to exit code 2."""


@dataclass
class RunConfig:
    """Flat, unit-suffixed run configuration.

    Field names double as the config-file keys; defaults reproduce the
    standard experimental parameter set.
    """

    # physical parameters
    d_zfs_MHz: float = 2870.0
    a_z_MHz: float = 2.175
    gamma_e_rad_sT: float = -1.76e11
    gamma_c_rad_sT: float = 6.73e7
    t1_us: float = 700.0
    # bath parameters
    seed: int = 7
    abundance: float = 0.011
    radius_nm: float = 4.0
    n_baths: int = 1
    # scan parameters
    field_mT: float = 0.0
    fields_mT: str = "0:0.12:13"
    tau_max_us: float = 200.0
    points: int = 512
    tau1_us: float = 10.0
    tau2_max_us: float = 0.0  # 0 -> defaults to 2 * tau1_us
    # pulse parameters
    rabi_MHz: float = 10.0
    t_max_us: float = 1.0
    # strain options
    splitting_MHz: float = 0.0
    broadening_MHz: float = 0.0
    # nitrogen policy: "mixed" or a fixed projection -1 | 0 | +1
    mi: str = "mixed"
    # dimer histogram parameters
    n_configs: int = 100
    base_seed: int = 0
    bin_width_us: float = 10.0
    target_t2_us: float = 75.0
    # execution / output
    workers: int = 0  # 0 -> NVGEO_THREADS or hardware count
    out_dir: str = "."
    gnuplot: bool = False
    with_bath: bool = False
    with_t1: bool = False
    decompose: bool = False


def _coercers():
    ref = RunConfig()
    out = {}
    for f in fields(RunConfig):
        kind = type(getattr(ref, f.name))
        if kind is bool:
            out[f.name] = _parse_bool
        elif kind is int:
            out[f.name] = int
        elif kind is float:
            out[f.name] = float
        else:
            out[f.name] = str
    return out


def _parse_bool(text):
    low = text.strip().lower()
    if low in ("1", "true", "yes", "on"):
        return True
    if low in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {text!r}")


def load_config(path) -> dict:
    """Parse a line-oriented ``key = value`` file into config overrides.

    Blank lines and ``#`` comments are skipped.  Unknown keys and
    unparseable values are all reported together, not one at a time.
    """
    coerce = _coercers()
    overrides = {}
    errors = []
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            key, sep, value = line.partition("=")
            key, value = key.strip(), value.strip()
            if not sep or not key:
                errors.append(f"{path}:{lineno}: expected 'key = value'")
                continue
            if key not in coerce:
                errors.append(f"{path}:{lineno}: unknown key '{key}'")
                continue
            try:
                overrides[key] = coerce[key](value)
            except ValueError:
                errors.append(f"{path}:{lineno}: bad value for '{key}': {value!r}")
    if errors:
        raise ConfigError("\n".join(errors))
    return overrides


def _parse_field_grid(text):
    parts = text.split(":")
    if len(parts) != 3:
        raise ConfigError(f"fields_mT must be start:stop:count, got {text!r}")
    try:
        start, stop = float(parts[0]), float(parts[1])
        count = int(parts[2])
    except ValueError:
        raise ConfigError(f"fields_mT must be start:stop:count, got {text!r}") from None
    if count < 1:
        raise ConfigError("fields_mT count must be at least 1")
    return np.linspace(start, stop, count)


_MI_CHOICES = ("mixed", "-1", "0", "1", "+1")


def _validate(cfg: RunConfig):
    errors = []

    def check(ok, message):
        if not ok:
            errors.append(message)

    check(cfg.d_zfs_MHz > 0, "d_zfs_MHz must be positive")
    check(cfg.t1_us > 0, "t1_us must be positive")
    check(cfg.gamma_c_rad_sT != 0, "gamma_c_rad_sT must be nonzero")
    check(cfg.seed >= 0, "seed must be non-negative")
    check(cfg.base_seed >= 0, "base_seed must be non-negative")
    check(0 < cfg.abundance <= 0.5, "abundance must lie in (0, 0.5]")
    check(0 < cfg.radius_nm <= 6, "radius_nm must lie in (0, 6] (memory guard)")
    check(cfg.n_baths >= 1, "n_baths must be at least 1")
    check(cfg.tau_max_us > 0, "tau_max_us must be positive")
    check(cfg.points >= 2, "points must be at least 2")
    check(cfg.tau1_us > 0, "tau1_us must be positive")
    check(cfg.tau2_max_us >= 0, "tau2_max_us must be non-negative")
    check(cfg.rabi_MHz > 0, "rabi_MHz must be positive")
    check(cfg.t_max_us > 0, "t_max_us must be positive")
    check(cfg.splitting_MHz >= 0, "splitting_MHz must be non-negative")
    check(cfg.broadening_MHz >= 0, "broadening_MHz must be non-negative")
    check(cfg.mi in _MI_CHOICES, f"mi must be one of {', '.join(_MI_CHOICES)}")
    check(cfg.n_configs >= 1, "n_configs must be at least 1")
    check(cfg.bin_width_us > 0, "bin_width_us must be positive")
    check(cfg.target_t2_us > 0, "target_t2_us must be positive")
    check(cfg.workers >= 0, "workers must be non-negative")
    try:
        _parse_field_grid(cfg.fields_mT)
    except ConfigError as err:
        errors.append(str(err))
    if errors:
        raise ConfigError("\n".join(errors))


def _resolve_config(args) -> RunConfig:
    """defaults < config file < explicit CLI flags."""
    values = asdict(RunConfig())
    if getattr(args, "config", None):
        values.update(load_config(args.config))
    for key in values:
        flag = getattr(args, key, None)
        if flag is not None:
            values[key] = flag
    cfg = RunConfig(**values)
    _validate(cfg)
    return cfg


# ---------------------------------------------------------------- helpers


def _params(cfg: RunConfig) -> NvParams:
    return NvParams(
        d_zfs=TWO_PI * cfg.d_zfs_MHz * 1e6,
        a_z=TWO_PI * cfg.a_z_MHz * 1e6,
        gamma_e=cfg.gamma_e_rad_sT,
        gamma_c=cfg.gamma_c_rad_sT,
        t1=cfg.t1_us * 1e-6,
    )


def _strain(cfg: RunConfig):
    if cfg.splitting_MHz == 0 and cfg.broadening_MHz == 0:
        return None
    return StrainOptions(
        splitting=TWO_PI * cfg.splitting_MHz * 1e6,
        broadening_fwhm=TWO_PI * cfg.broadening_MHz * 1e6,
    )


def _mi_policy(cfg: RunConfig):
    return "mixed" if cfg.mi == "mixed" else int(cfg.mi)


def _tau_grid(cfg: RunConfig):
    return np.linspace(0.0, cfg.tau_max_us * 1e-6, cfg.points)


def _field_vec(cfg: RunConfig):
    return np.array([0.0, 0.0, cfg.field_mT * 1e-3])


def _bath(cfg: RunConfig, p: NvParams, seed=None):
    lattice = diamond_lattice(cfg.radius_nm * 1e-9)
    return sample_bath(lattice, cfg.abundance, cfg.seed if seed is None else seed, p)


def _workers(cfg: RunConfig):
    if cfg.workers:
        return cfg.workers
    env = os.environ.get("NVGEO_THREADS")
    if env:
        try:
            n = int(env)
        except ValueError:
            raise ConfigError(f"NVGEO_THREADS must be an integer, got {env!r}") from None
        if n < 1:
            raise ConfigError("NVGEO_THREADS must be at least 1")
        return n
    return os.cpu_count() or 1


class _Emitter:
    """Collects output files for one run and writes the manifest."""

    def __init__(self, cfg: RunConfig, name: str, argv):
        self.cfg = cfg
        self.name = name
        self.argv = list(argv)
        self.outputs = []
        os.makedirs(cfg.out_dir, exist_ok=True)

    def _path(self, filename):
        return os.path.join(self.cfg.out_dir, filename)

    def register(self, path):
        with open(path, "rb") as fh:
            payload = fh.read()
        self.outputs.append(
            {
                "path": os.path.basename(path),
                "bytes": len(payload),
                "sha256": hashlib.sha256(payload).hexdigest(),
            }
        )

    def csv(self, filename, header, columns):
        columns = [np.asarray(c) for c in columns]
        if any(len(c) != len(columns[0]) for c in columns):
            raise ValueError("CSV columns must have equal length")
        path = self._path(filename)
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(",".join(header) + "\n")
            for row in zip(*columns):
                fh.write(",".join(_cell(v) for v in row) + "\n")
        self.register(path)
        return path

    def json(self, filename, payload):
        path = self._path(filename)
        with open(path, "w", encoding="utf-8", newline="") as fh:
            json.dump(payload, fh, indent=1, sort_keys=True)
            fh.write("\n")
        self.register(path)
        return path

    def sidecar(self, extras=None):
        payload = {"subcommand": self.name, "config": asdict(self.cfg)}
        if extras:
            payload.update(extras)
        return self.json(f"{self.name}.json", payload)

    def gnuplot(self, csv_name, xlabel, ylabel, ycols):
        lines = [
            "set datafile separator ','",
            "set key autotitle columnhead",
            f"set xlabel '{xlabel}'",
            f"set ylabel '{ylabel}'",
            "plot "
            + ", ".join(f"'{csv_name}' using 1:{c} with lines" for c in ycols),
        ]
        path = self._path(f"{self.name}.gp")
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write("\n".join(lines) + "\n")
        self.register(path)
        return path

    def manifest(self):
        payload = {
            "tool": "nvgeo",
            "version": __version__,
            "subcommand": self.name,
            "argv": self.argv,
            "created_utc": datetime.now(timezone.utc).isoformat(timespec="seconds"),
            "config": asdict(self.cfg),
            "outputs": self.outputs,
        }
        path = self._path(f"{self.name}.manifest.json")
        with open(path, "w", encoding="utf-8", newline="") as fh:
            json.dump(payload, fh, indent=1, sort_keys=True)
            fh.write("\n")
        return path


def _cell(value):
    if isinstance(value, (str, np.str_)):
        return str(value)
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return "%.17g" % float(value)


def _fit_dict(fit, unit=1e-6):
    return {
        "decay_time_us": fit.decay_time / unit,
        "stderr_us": fit.stderr / unit,
        "exponent": fit.exponent,
        "amplitude": fit.amplitude,
        "residual_rms": fit.residual_rms,
    }


# ------------------------------------------------------------- subcommands


def _run_rabi(cfg, emitter):
    p = _params(cfg)
    t_grid = np.linspace(0.0, cfg.t_max_us * 1e-6, cfg.points)
    result = rabi_signal(TWO_PI * cfg.rabi_MHz * 1e6, t_grid, p)
    emitter.csv(
        "rabi.csv",
        ["time_us", "population_0"],
        [result.times / 1e-6, result.population_0],
    )
    emitter.sidecar({"meta": result.meta})
    if cfg.gnuplot:
        emitter.gnuplot("rabi.csv", "pulse duration (us)", "P(|0>)", [2])


def _run_ramsey(cfg, emitter):
    p = _params(cfg)
    taus = _tau_grid(cfg)
    envelope = None
    if cfg.with_bath:
        bath = _bath(cfg, p)
        envelope = fid_curve(bath, p, _field_vec(cfg), taus, _mi_policy(cfg))
    result = ramsey_population(taus, p, envelope=envelope)
    emitter.csv(
        "ramsey.csv",
        ["tau_us", "population_0"],
        [result.times / 1e-6, result.population_0],
    )
    emitter.sidecar({"meta": result.meta})
    if cfg.gnuplot:
        emitter.gnuplot("ramsey.csv", "free evolution (us)", "P(|0>)", [2])


def _run_fid(cfg, emitter):
    p = _params(cfg)
    curve = fid_curve(_bath(cfg, p), p, _field_vec(cfg), _tau_grid(cfg), _mi_policy(cfg))
    fit = fit_gaussian(curve)
    emitter.csv(
        "fid.csv", ["time_us", "signal"], [curve.times / 1e-6, curve.signal]
    )
    emitter.sidecar({"meta": curve.meta, "fit": _fit_dict(fit)})
    if cfg.gnuplot:
        emitter.gnuplot("fid.csv", "free evolution (us)", "coherence", [2])


def _run_echo_decay(cfg, emitter):
    p = _params(cfg)
    strain = _strain(cfg)
    policy = _mi_policy(cfg)
    if cfg.decompose and strain is not None and policy == "mixed":
        raise ConfigError("--decompose with strain requires a fixed --mi")
    if strain is not None and strain.broadening_fwhm:
        # the quasi-static average is defined for fitted scan points, not
        # for a single emitted curve (it would break the factor columns)
        raise ConfigError("--broadening-MHz applies to t2-scan only")
    bath = _bath(cfg, p)
    taus = _tau_grid(cfg)
    curve = bath_echo_curve(bath, p, _field_vec(cfg), taus, policy, strain and (strain.e_x, strain.e_y) or None)
    header = ["time_us", "signal"]
    columns = [curve.times / 1e-6, curve.signal]
    if cfg.decompose:
        singles, dimers = decompose_echo(
            bath, p, _field_vec(cfg), taus, policy, strain and (strain.e_x, strain.e_y) or None
        )
        header += ["signal_singles", "signal_dimers"]
        columns += [singles.signal, dimers.signal]
    fit = fit_stretched_exp(curve)
    emitter.csv("echo-decay.csv", header, columns)
    emitter.sidecar({"meta": curve.meta, "fit": _fit_dict(fit)})
    if cfg.gnuplot:
        emitter.gnuplot(
            "echo-decay.csv",
            "total evolution 2tau (us)",
            "echo signal",
            list(range(2, 2 + len(columns) - 1)),
        )


def _run_refocus(cfg, emitter):
    p = _params(cfg)
    tau1 = cfg.tau1_us * 1e-6
    tau2_max = (cfg.tau2_max_us or 2 * cfg.tau1_us) * 1e-6
    tau2 = np.linspace(0.0, tau2_max, cfg.points)
    bath_factor = None
    if cfg.with_bath:
        # echo envelope sampled out to the largest total evolution time
        half_total = np.linspace(0.0, (tau1 + tau2_max) / 2, cfg.points)
        bath_factor = bath_echo_curve(
            _bath(cfg, p), p, _field_vec(cfg), half_total, _mi_policy(cfg)
        )
    result = echo_sequence_population(
        tau1, tau2, p, bath_factor=bath_factor, apply_t1=cfg.with_t1
    )
    emitter.csv(
        "refocus.csv",
        ["tau2_us", "population_0", "contrast"],
        [tau2 / 1e-6, result.population_0, 2 * result.population_0 - 1],
    )
    emitter.sidecar({"meta": result.meta})
    if cfg.gnuplot:
        emitter.gnuplot("refocus.csv", "second interval (us)", "P(|0>)", [2])


def _run_t2_scan(cfg, emitter):
    p = _params(cfg)
    fields_mt = _parse_field_grid(cfg.fields_mT)
    fields = fields_mt * 1e-3
    strain = _strain(cfg)
    taus = _tau_grid(cfg)
    workers = _workers(cfg)
    header = ["field_mT"]
    columns = [fields_mt]
    per_seed = {}
    stack = []
    for k in range(cfg.n_baths):
        seed = cfg.seed + k
        bath = _bath(cfg, p, seed=seed)
        scan = t2_field_scan(
            bath, p, fields, strain, _mi_policy(cfg), taus, workers=workers
        )
        header.append(f"t2_us_seed{seed}")
        columns.append(np.where(np.isfinite(scan.t2), scan.t2 / 1e-6, np.nan))
        stack.append(scan.t2)
        per_seed[str(seed)] = {
            "errors": scan.errors,
            "n_dimers": int(len(bath.dimers)),
            "n_singles": int(len(bath.singles)),
        }
    stack = np.array(stack) / 1e-6
    if np.all(~np.isfinite(stack)):
        raise InsufficientDecayError("no field point produced a fittable decay")
    with np.errstate(invalid="ignore"):
        mean = np.nanmean(stack, axis=0)
    header.append("t2_us_mean")
    columns.append(mean)
    emitter.csv("t2-scan.csv", header, columns)
    emitter.sidecar({"per_seed": per_seed})
    if cfg.gnuplot:
        emitter.gnuplot(
            "t2-scan.csv", "B (mT)", "T2 (us)", list(range(2, len(header) + 1))
        )


def _run_dimer_hist(cfg, emitter):
    p = _params(cfg)
    hist = dimer_t2_histogram(
        cfg.n_configs,
        cfg.base_seed,
        p,
        radius=cfg.radius_nm * 1e-9,
        abundance=cfg.abundance,
        tau_grid=_tau_grid(cfg),
        bin_width=cfg.bin_width_us * 1e-6,
        target_t2=cfg.target_t2_us * 1e-6,
        workers=_workers(cfg),
    )
    emitter.csv(
        "dimer-hist.csv",
        ["seed", "t2_us", "n_dimers", "status"],
        [
            hist.seeds,
            np.where(np.isfinite(hist.t2), hist.t2 / 1e-6, np.nan),
            hist.n_dimers,
            np.array(hist.status),
        ],
    )
    emitter.csv(
        "dimer-hist-bins.csv",
        ["bin_lo_us", "bin_hi_us", "count"],
        [hist.bin_edges[:-1] / 1e-6, hist.bin_edges[1:] / 1e-6, hist.counts],
    )
    valid = hist.t2[np.isfinite(hist.t2)]
    emitter.sidecar(
        {
            "selected_seed": hist.selected_seed,
            "selected_t2_us": float(
                hist.t2[hist.seeds == hist.selected_seed][0] / 1e-6
            ),
            "median_t2_us": float(np.median(valid) / 1e-6),
            "n_fitted": int(len(valid)),
            "meta": hist.meta,
        }
    )
    if cfg.gnuplot:
        emitter.gnuplot("dimer-hist-bins.csv", "T2 (us)", "count", [3])


def _run_bath_gen(cfg, emitter):
    p = _params(cfg)
    bath = _bath(cfg, p)
    path = os.path.join(cfg.out_dir, f"bath-seed{cfg.seed}.json")
    save_bath(bath, path)
    emitter.register(path)
    emitter.sidecar(
        {
            "n_singles": int(len(bath.singles)),
            "n_dimers": int(len(bath.dimers)),
            "n_spins": int(bath.n_spins),
        }
    )


_RUNNERS = {
    "rabi": _run_rabi,
    "ramsey": _run_ramsey,
    "fid": _run_fid,
    "echo-decay": _run_echo_decay,
    "refocus": _run_refocus,
    "t2-scan": _run_t2_scan,
    "dimer-hist": _run_dimer_hist,
    "bath-gen": _run_bath_gen,
}


# ------------------------------------------------------------ arg parsing


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="nvgeo",
        description="Spin-echo decoherence simulator for an NV electron qubit in a 13C bath.",
    )
    parser.add_argument("--version", action="version", version=f"nvgeo {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, metavar="subcommand")

    def add(name, help_text, *groups):
        sp = sub.add_parser(name, help=help_text)
        sp.add_argument("--config", help="key = value config file")
        sp.add_argument("--out-dir", dest="out_dir", help="output directory")
        sp.add_argument(
            "--gnuplot",
            action="store_true",
            default=None,
            help="also write a gnuplot script",
        )
        sp.add_argument(
            "--workers", type=int, help="worker threads (default: NVGEO_THREADS or CPU count)"
        )
        for group in groups:
            group(sp)
        return sp

    def bath_args(sp):
        sp.add_argument("--seed", type=int, help="bath random seed")
        sp.add_argument("--radius-nm", dest="radius_nm", type=float, help="bath radius in nm")
        sp.add_argument("--abundance", type=float, help="13C occupation probability")

    def tau_args(sp):
        sp.add_argument(
            "--tau-max-us", dest="tau_max_us", type=float, help="largest tau in us"
        )
        sp.add_argument("--points", type=int, help="number of grid points")

    def field_args(sp):
        sp.add_argument(
            "--field-mT", dest="field_mT", type=float, help="axial field in mT"
        )

    def mi_args(sp):
        sp.add_argument("--mi", choices=_MI_CHOICES, help="nitrogen projection policy")

    def strain_args(sp):
        sp.add_argument(
            "--strain-MHz",
            dest="splitting_MHz",
            type=float,
            help="transverse strain splitting of the +-1 manifold in MHz",
        )
        sp.add_argument(
            "--broadening-MHz",
            dest="broadening_MHz",
            type=float,
            help="FWHM of quasi-static axial broadening in MHz",
        )

    def pulse_args(sp):
        sp.add_argument("--rabi-MHz", dest="rabi_MHz", type=float, help="drive Rabi frequency in MHz")

    add("rabi", "drive |0> and record its population vs pulse duration", pulse_args).add_argument(
        "--t-max-us", dest="t_max_us", type=float, help="largest pulse duration in us"
    )
    ramsey = add("ramsey", "pi - tau - pi free-induction fringes", tau_args, bath_args, field_args, mi_args)
    ramsey.add_argument(
        "--with-bath",
        dest="with_bath",
        action="store_true",
        default=None,
        help="multiply fringes by the sampled-bath free-induction envelope",
    )
    add("fid", "free-induction coherence envelope of a sampled bath", tau_args, bath_args, field_args, mi_args)
    echo_sp = add(
        "echo-decay",
        "echo signal of a sampled bath vs total evolution time, with cubic fit",
        tau_args,
        bath_args,
        field_args,
        mi_args,
        strain_args,
    )
    echo_sp.add_argument(
        "--decompose",
        action="store_true",
        default=None,
        help="add singles-only and dimers-only columns",
    )
    refocus = add("refocus", "population vs second free interval around an echo", bath_args, field_args, mi_args)
    refocus.add_argument("--tau1-us", dest="tau1_us", type=float, help="first free interval in us")
    refocus.add_argument(
        "--tau2-max-us", dest="tau2_max_us", type=float, help="largest second interval in us (default 2 tau1)"
    )
    refocus.add_argument("--points", type=int, help="number of grid points")
    refocus.add_argument(
        "--with-bath",
        dest="with_bath",
        action="store_true",
        default=None,
        help="include the sampled-bath echo envelope",
    )
    refocus.add_argument(
        "--with-t1",
        dest="with_t1",
        action="store_true",
        default=None,
        help="apply the exponential population-relaxation factor",
    )
    scan = add(
        "t2-scan",
        "fitted echo T2 vs axial field, optionally bath averaged",
        tau_args,
        bath_args,
        mi_args,
        strain_args,
    )
    scan.add_argument(
        "--fields-mT", dest="fields_mT", help="field grid start:stop:count in mT"
    )
    scan.add_argument("--n-baths", dest="n_baths", type=int, help="number of consecutive seeds to average")
    hist = add(
        "dimer-hist",
        "histogram of dimers-only zero-field T2 over many random baths",
        tau_args,
        bath_args,
    )
    hist.add_argument("--n-configs", dest="n_configs", type=int, help="number of bath configurations")
    hist.add_argument("--base-seed", dest="base_seed", type=int, help="first seed")
    hist.add_argument("--bin-width-us", dest="bin_width_us", type=float, help="histogram bin width in us")
    hist.add_argument("--target-t2-us", dest="target_t2_us", type=float, help="seed-selection target in us")
    add("bath-gen", "sample a bath configuration and write it as JSON", bath_args)
    return parser


def main(argv=None) -> int:
    if argv is None:
        argv = sys.argv[1:]
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = _resolve_config(args)
        emitter = _Emitter(cfg, args.command, argv)
        _RUNNERS[args.command](cfg, emitter)
        emitter.manifest()
        return 0
    except ConfigError as err:
        print(f"nvgeo: configuration error:\n{err}", file=sys.stderr)
        return 2
    except (InsufficientDecayError, ArithmeticError) as err:
        print(f"nvgeo: numerical failure: {err}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
