"""Batch front end: config parsing, scenario runners, CSV/report emission.

Exit codes: 0 success, 2 config error, 3 numerical error, 4 verification
failure.
"""

import argparse
import configparser
import json
import math
import os
import sys
import tempfile
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

from . import _accel, bath, gaussian, greens, oracle, steady
from .errors import ConfigError, NumericalError
from .presets import PRESET_NAMES, preset_overrides

_DEFAULTS = {
    ("run", "mode"): "evolve",
    ("run", "threads"): "1",
    ("bath", "s"): "1.0",
    ("bath", "omega_c"): "5.0",
    ("bath", "temperature"): "1.0",
    ("state", "alphas"): "1.0",
    ("state", "rs"): "0.5",
    ("state", "pairing"): "zip",
    ("state", "n_bars"): "0.1",
    ("state", "alpha_phase"): "0.0",
    ("grid", "dt"): "0.01",
    ("grid", "t_max"): "50.0",
    ("output", "dir"): "out",
    ("output", "stride"): "10",
    ("output", "emit_plot_script"): "true",
    ("steady", "alphas"): "0:2:21",
    ("steady", "rs"): "0:1:21",
    ("steady", "n_bars"): "0.1,2.0",
    ("steady", "temperatures"): "0.1,20.0",
    ("verify", "oracle_modes"): "2000",
    ("verify", "check_convergence"): "true",
}


def _fmt(x: float) -> str:
    return f"{x:.17g}"


def _parse_list(text: str):
    return [float(tok) for tok in text.replace(";", ",").split(",") if tok.strip()]


def _parse_axis(text: str):
    """Either 'start:stop:count' or an explicit comma list."""
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise ConfigError(f"axis spec must be start:stop:count, got {text!r}")
        a, b, n = float(parts[0]), float(parts[1]), int(parts[2])
        return list(np.linspace(a, b, n))
    return _parse_list(text)


@dataclass
class RunConfig:
    mode: str
    bath_spec: bath.BathSpec
    panels: list
    n_bars: list
    grid: greens.TimeGrid
    out_dir: Path
    stride: int
    emit_plot_script: bool
    threads: int
    steady_alphas: list
    steady_rs: list
    steady_n_bars: list
    steady_temperatures: list
    oracle_modes: int
    check_convergence: bool
    resolved: dict


def load_config(path=None, preset=None, out=None, threads=None,
                command=None) -> RunConfig:
    """Merge defaults <- preset <- config file <- CLI flags, then validate."""
    merged = dict(_DEFAULTS)
    if preset is not None:
        merged.update(preset_overrides(preset))
        merged[("run", "preset")] = preset
    if path is not None:
        parser = configparser.ConfigParser(inline_comment_prefixes=("#", ";"))
        try:
            with open(path) as fh:
                parser.read_file(fh)
        except OSError as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from exc
        except configparser.Error as exc:
            raise ConfigError(f"malformed config {path}: {exc}") from exc
        for section in parser.sections():
            for key, value in parser.items(section):
                merged[(section, key)] = value
    if out is not None:
        merged[("output", "dir")] = str(out)
    if threads is not None:
        merged[("run", "threads")] = str(threads)
    if command is not None:
        merged[("run", "mode")] = command
    return _build_config(merged)


def _get(merged, section, key, cast, default=None):
    raw = merged.get((section, key), default)
    if raw is None:
        raise ConfigError(f"missing required field [{section}] {key}")
    try:
        if cast is bool:
            return str(raw).strip().lower() in ("1", "true", "yes", "on")
        return cast(raw)
    except (ValueError, TypeError) as exc:
        raise ConfigError(f"invalid value for [{section}] {key}: {raw!r}") from exc


def _build_config(merged) -> RunConfig:
    mode = _get(merged, "run", "mode", str).strip()
    if mode not in ("evolve", "steady", "sweep", "verify"):
        raise ConfigError(f"mode must be evolve|steady|sweep|verify, got {mode!r}")
    s = _get(merged, "bath", "s", float)
    omega_c = _get(merged, "bath", "omega_c", float)
    temperature = _get(merged, "bath", "temperature", float)
    has_eta = ("bath", "eta") in merged
    has_rel = ("bath", "eta_rel") in merged
    if has_eta and has_rel:
        raise ConfigError("give exactly one of [bath] eta / eta_rel, not both")
    if not has_eta and not has_rel:
        if mode != "verify":
            raise ConfigError("give one of [bath] eta / eta_rel")
        # bare `verify` runs the documented strong-Ohmic default corner
        merged[("bath", "eta_rel")] = "2.0"
        has_rel = True
    try:
        if has_eta:
            spec = bath.BathSpec(eta=_get(merged, "bath", "eta", float), s=s,
                                 omega_c=omega_c, temperature=temperature)
            merged[("bath", "eta_rel_resolved")] = _fmt(
                spec.eta / bath.critical_coupling(spec))
        else:
            spec = bath.BathSpec.from_relative(_get(merged, "bath", "eta_rel", float),
                                               s, omega_c, temperature)
            merged[("bath", "eta_resolved")] = _fmt(spec.eta)
    except ValueError as exc:
        raise ConfigError(f"invalid bath: {exc}") from exc

    alphas = _parse_list(_get(merged, "state", "alphas", str))
    rs = _parse_list(_get(merged, "state", "rs", str))
    pairing = _get(merged, "state", "pairing", str).strip()
    phase = _get(merged, "state", "alpha_phase", float)
    rot = complex(math.cos(phase), math.sin(phase))
    if mode == "sweep" or pairing == "cross":
        panels = [(a * rot, r) for a in alphas for r in rs]
    elif pairing == "zip":
        if len(alphas) != len(rs):
            raise ConfigError("pairing=zip needs alphas and rs of equal length")
        panels = [(a * rot, r) for a, r in zip(alphas, rs)]
    else:
        raise ConfigError(f"pairing must be zip|cross, got {pairing!r}")
    n_bars = _parse_list(_get(merged, "state", "n_bars", str))
    if any(n < 0 for n in n_bars):
        raise ConfigError("n_bars must be nonnegative")

    try:
        grid = greens.TimeGrid.make(dt=_get(merged, "grid", "dt", float),
                                    t_max=_get(merged, "grid", "t_max", float))
    except ValueError as exc:
        raise ConfigError(f"invalid grid: {exc}") from exc

    return RunConfig(
        mode=mode,
        bath_spec=spec,
        panels=panels,
        n_bars=n_bars,
        grid=grid,
        out_dir=Path(_get(merged, "output", "dir", str)),
        stride=max(1, _get(merged, "output", "stride", int)),
        emit_plot_script=_get(merged, "output", "emit_plot_script", bool),
        threads=max(1, _get(merged, "run", "threads", int)),
        steady_alphas=_parse_axis(_get(merged, "steady", "alphas", str)),
        steady_rs=_parse_axis(_get(merged, "steady", "rs", str)),
        steady_n_bars=_parse_list(_get(merged, "steady", "n_bars", str)),
        steady_temperatures=_parse_list(_get(merged, "steady", "temperatures", str)),
        oracle_modes=_get(merged, "verify", "oracle_modes", int),
        check_convergence=_get(merged, "verify", "check_convergence", bool),
        resolved=dict(merged),
    )


def _atomic_write(path: Path, text: str):
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _echo_config(cfg: RunConfig):
    sections = {}
    for (section, key), value in sorted(cfg.resolved.items()):
        sections.setdefault(section, []).append(f"{key} = {value}")
    text = "\n".join(f"[{sec}]\n" + "\n".join(lines) + "\n"
                     for sec, lines in sections.items())
    _atomic_write(cfg.out_dir / "config_resolved.ini", text)


def _panel_tag(alpha: complex, r: float, n_bar: float) -> str:
    mag = abs(alpha)
    tag = f"alpha{mag:g}_r{r:g}_nbar{n_bar:g}"
    if mag > 0 and abs(np.angle(alpha)) > 1e-12:
        tag += f"_phase{np.angle(alpha):g}"
    return tag


def run_evolve(cfg: RunConfig):
    """Solve the Green's functions once, then one CSV per (alpha, r, n_bar)."""
    cfg.out_dir.mkdir(parents=True, exist_ok=True)
    traj = greens.solve_greens(cfg.bath_spec, cfg.grid)
    sel = np.arange(0, cfg.grid.n_steps + 1, cfg.stride)
    header = "t,re_u,im_u,abs_u,v,nu,mu_bar,entropy_bits,coherence_bits"
    paths = []

    def emit(panel):
        (alpha, r), n_bar = panel
        ct = gaussian.coherence_trajectory(
            gaussian.GaussianInit(alpha=alpha, r=r, n_bar=n_bar), traj)
        rows = [header]
        for i in sel:
            rows.append(",".join(_fmt(x) for x in (
                ct.t[i], traj.u[i].real, traj.u[i].imag, abs(traj.u[i]),
                traj.v[i], ct.nu[i], ct.mu_bar[i], ct.entropy_bits[i],
                ct.coherence_bits[i])))
        path = cfg.out_dir / f"evolve_{_panel_tag(alpha, r, n_bar)}.csv"
        _atomic_write(path, "\n".join(rows) + "\n")
        return path

    jobs = [((a, r), n) for (a, r) in cfg.panels for n in cfg.n_bars]
    with ThreadPoolExecutor(max_workers=cfg.threads) as pool:
        paths = list(pool.map(emit, jobs))
    _echo_config(cfg)
    if cfg.emit_plot_script:
        _emit_plot_script(cfg, [p.name for p in paths], kind="evolve")
    return paths


def run_sweep(cfg: RunConfig):
    """Cross-product sweep over the state grids; same artifact as evolve."""
    return run_evolve(cfg)


def run_steady(cfg: RunConfig):
    """Steady coherence surfaces, one CSV per (temperature, n_bar) panel."""
    cfg.out_dir.mkdir(parents=True, exist_ok=True)
    mode = steady.find_localized_mode(cfg.bath_spec)
    paths = []
    for temp in cfg.steady_temperatures:
        spec_t = replace(cfg.bath_spec, temperature=temp)
        report = steady.SteadyReport(
            exists_localized=mode is not None,
            omega_b=None if mode is None else mode[0],
            Z=None if mode is None else mode[1])
        report = replace(report, v_inf=steady.steady_v(spec_t, report))
        for n_bar in cfg.steady_n_bars:
            surf = steady.steady_coherence_surface(
                spec_t, cfg.steady_alphas, cfg.steady_rs, n_bar, report)
            lines = []
            if mode is None:
                lines.append("# localized = false  (continuum-only: steady"
                             " amplitude vanishes)")
                lines.append("# omega_b = none")
                lines.append("# Z = none")
            else:
                lines.append("# localized = true")
                lines.append(f"# omega_b = {_fmt(report.omega_b)}")
                lines.append(f"# Z = {_fmt(report.Z)}")
            lines.append(f"# v_inf = {_fmt(report.v_inf)}")
            lines.append("alpha,r,coherence_bits")
            for i, a in enumerate(cfg.steady_alphas):
                for j, r in enumerate(cfg.steady_rs):
                    lines.append(f"{_fmt(a)},{_fmt(r)},{_fmt(surf[i, j])}")
            path = cfg.out_dir / f"steady_T{temp:g}_nbar{n_bar:g}.csv"
            _atomic_write(path, "\n".join(lines) + "\n")
            paths.append(path)
    if mode is None:
        print("warning: no localized mode at this coupling; surfaces are "
              "continuum-only (zero coherence)", file=sys.stderr)
    _echo_config(cfg)
    if cfg.emit_plot_script:
        _emit_plot_script(cfg, [p.name for p in paths], kind="steady")
    return paths


_PLOT_TEMPLATE = """\
# Auto-generated companion script: plots the CSV artifacts written alongside.
# Requires matplotlib; this file is emitted as text and never executed here.
import csv
from pathlib import Path

import matplotlib.pyplot as plt

HERE = Path(__file__).parent
FILES = {files!r}
KIND = {kind!r}

for name in FILES:
    rows = [r for r in csv.reader((HERE / name).open())
            if r and not r[0].startswith("#")]
    head, data = rows[0], rows[1:]
    cols = {{k: [float(r[i]) for r in data] for i, k in enumerate(head)}}
    if KIND == "evolve":
        plt.plot(cols["t"], cols["coherence_bits"], label=name)
    else:
        plt.tricontourf(cols["alpha"], cols["r"], cols["coherence_bits"])
        plt.colorbar(); plt.xlabel("alpha"); plt.ylabel("r")
        plt.title(name); plt.show()
if KIND == "evolve":
    plt.xlabel("t"); plt.ylabel("coherence (bits)"); plt.legend(); plt.show()
"""


def _emit_plot_script(cfg: RunConfig, names, kind):
    _atomic_write(cfg.out_dir / "plot_results.py",
                  _PLOT_TEMPLATE.format(files=sorted(names), kind=kind))


# ---------------------------------------------------------------------------
# verify
# ---------------------------------------------------------------------------

def _check(name, observed, tolerance, passed, detail=""):
    return {"name": name, "passed": bool(passed), "observed": float(observed),
            "tolerance": float(tolerance), "detail": detail}


def run_verify(cfg: RunConfig):
    """Machine-readable pass/fail over the library's own invariants."""
    cfg.out_dir.mkdir(parents=True, exist_ok=True)
    spec = cfg.bath_spec
    grid = cfg.grid
    checks = []

    ref = bath.BathSpec(eta=0.2, s=1.0, omega_c=5.0, temperature=0.0)
    worst = 0.0
    for dt in (0.0, 0.05, 0.2, 1.0):
        closed = bath.memory_kernel(ref, dt)
        worst = max(worst, abs(bath.memory_kernel_quadrature(ref, dt) - closed)
                    / abs(closed))
    for dt in (0.5, 5.0, 20.0):
        closed = bath.memory_kernel(ref, dt)
        worst = max(worst, abs(bath.memory_kernel_adaptive(ref, dt) - closed)
                    / abs(closed))
    checks.append(_check("memory_kernel_closed_form", worst, 1e-8, worst <= 1e-8))

    free = bath.BathSpec(eta=0.0, s=spec.s, omega_c=spec.omega_c, temperature=0.0)
    u_free = greens.solve_u(free, grid)
    drift = float(np.abs(u_free - np.exp(-1j * grid.times)).max())
    checks.append(_check("decoupled_closed_form", drift, 1e-8, drift <= 1e-8))

    traj = greens.solve_greens(spec, grid)
    amp = float(np.abs(traj.u).max() - 1.0)
    checks.append(_check("u_amplitude_bound", amp, 1e-6, amp <= 1e-6))
    vmin = float(traj.v.min())
    checks.append(_check("v_nonnegative", vmin, -1e-9, vmin >= -1e-9))

    db = oracle.DiscreteBath.from_spec(spec, n_modes=cfg.oracle_modes,
                                       t_horizon=grid.t_max)
    u_err = float(np.abs(traj.u - oracle.exact_u(db, grid.times)).max())
    checks.append(_check("u_oracle_delta", u_err, 1e-3, u_err <= 1e-3))
    v_err = float(np.abs(traj.v - oracle.exact_v(db, spec.temperature,
                                                 grid.times)).max())
    checks.append(_check("v_oracle_delta", v_err, 1e-3, v_err <= 1e-3))

    if cfg.check_convergence:
        # scheme-order self-check: the refine=4 run serves as the reference,
        # so the ratio is immune to the oracle's own discretization floor
        half = greens.TimeGrid.make(dt=0.5 * grid.dt, t_max=grid.t_max)
        errs = [float(np.abs(greens.solve_u(spec, g, refine=1)
                             - greens.solve_u(spec, g, refine=4)).max())
                for g in (grid, half)]
        ratio = errs[0] / max(errs[1], 1e-300)
        checks.append(_check("u_convergence_order", ratio, 5.0,
                             3.0 <= ratio <= 5.0, detail=f"e(dt)={errs[0]:.3e}"))

    ct = gaussian.coherence_trajectory(
        gaussian.GaussianInit(alpha=1.0, r=0.5, n_bar=1.0), traj)
    det_slack = float((ct.nu**2).min() - 1.0)
    checks.append(_check("uncertainty_relation", det_slack, -2e-6,
                         det_slack >= -2e-6))
    cmin = float(ct.coherence_bits.min())
    checks.append(_check("coherence_nonnegative", cmin, -1e-9, cmin >= -1e-9))

    worst = 0.0
    for a in (0.0, 0.5, 1.0):
        for r in (0.0, 0.25, 0.5):
            for nb in (0.0, 0.5, 1.0):
                init = gaussian.GaussianInit(alpha=a, r=r, n_bar=nb)
                mom, ent, coh = oracle.fock_moments_entropy_coherence(
                    oracle.fock_state(init))
                m0 = gaussian.initial_moments(init)
                nu0 = 2.0 * nb + 1.0
                worst = max(worst, abs(mom.mean_a - m0.mean_a),
                            abs(mom.var_a - m0.var_a),
                            abs(mom.cov_adag_a - m0.cov_adag_a),
                            abs(ent - gaussian.entropy(nu0)),
                            abs(coh - gaussian.coherence(nu0, m0.photon_number)))
    checks.append(_check("fock_oracle_agreement", worst, 1e-6, worst <= 1e-6))

    mode = steady.find_localized_mode(spec)
    if mode is not None:
        omega_b, z = mode
        resid = abs(omega_b - bath.OMEGA0 - steady.self_energy_delta(spec, omega_b))
        checks.append(_check("localized_mode_residual", resid, 1e-10,
                             resid <= 1e-10))
        u_gap = abs(abs(traj.u[-1]) - z)
        checks.append(_check("steady_u_handshake", u_gap, 1e-2, u_gap <= 1e-2))
        if spec.temperature > 0:
            rep = steady.SteadyReport(exists_localized=True, omega_b=omega_b, Z=z)
            v_inf = steady.steady_v(spec, rep)
            v_gap = abs(traj.v[-1] - v_inf) / max(1.0, v_inf)
            checks.append(_check("steady_v_handshake", v_gap, 2e-2,
                                 v_gap <= 2e-2, detail=f"v_inf={v_inf:.6g}"))

    report = {"backend": _accel.backend(), "all_passed": all(c["passed"] for c in checks),
              "checks": checks}
    _atomic_write(cfg.out_dir / "verify_report.json", json.dumps(report, indent=2) + "\n")
    _echo_config(cfg)
    for c in checks:
        status = "PASS" if c["passed"] else "FAIL"
        print(f"{status} {c['name']}: observed {c['observed']:.3e} "
              f"(tolerance {c['tolerance']:.3e}) {c['detail']}")
    return report


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="nmcoherence",
        description="Non-Markovian coherence dynamics of a single bosonic mode")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in ("evolve", "steady", "sweep", "verify"):
        p = sub.add_parser(name)
        p.add_argument("--config", type=Path, default=None)
        p.add_argument("--out", type=Path, default=None)
        p.add_argument("--preset", choices=PRESET_NAMES, default=None)
        p.add_argument("--threads", type=int, default=None)
    args = parser.parse_args(argv)
    try:
        cfg = load_config(args.config, args.preset, args.out, args.threads,
                          command=args.command)
        if cfg.mode == "evolve":
            run_evolve(cfg)
        elif cfg.mode == "sweep":
            run_sweep(cfg)
        elif cfg.mode == "steady":
            run_steady(cfg)
        else:
            report = run_verify(cfg)
            if not report["all_passed"]:
                return 4
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except NumericalError as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return 3
    return 0


if __name__ == "__main__":
    sys.exit(main())
